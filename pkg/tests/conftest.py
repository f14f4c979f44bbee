"""Shared fixtures: generated graphs and validated cut sweeps.

The larger sweeps are expensive (tens of seconds), so they are built once
per session and shared between the solver tests and the acceptance suite.
Sweeps use oracle="both": rows carry the optimizer's (bdryC, bulkC, minC)
plus a "bulkC_bfs" dual-geodesic column on vertex-aligned rows.
"""

from __future__ import annotations

import pytest

import holoshadow as hs
from holoshadow.cuts import cut_sweep


@pytest.fixture(scope="session")
def graphs37():
    """{3,7} patches by layer count (1 = single tile)."""
    return {layers: hs.generate_tiling(3, 7, layers) for layers in range(1, 7)}


@pytest.fixture(scope="session")
def graphs54():
    """{5,4} patches by layer count."""
    return {layers: hs.generate_tiling(5, 4, layers) for layers in range(1, 5)}


@pytest.fixture(scope="session")
def sweeps37(graphs37):
    """Cross-checked per-leg sweeps of {3,7} patches, layers 2..5."""
    return {
        layers: cut_sweep(graphs37[layers], mode="per-leg", oracle="both")
        for layers in (2, 3, 4, 5)
    }


@pytest.fixture(scope="session")
def sweeps54(graphs54):
    """Cross-checked vertex-aligned per-leg sweeps of {5,4} patches, layers 2..4."""
    return {
        layers: cut_sweep(
            graphs54[layers], mode="per-leg", vertex_aligned_only=True, oracle="both"
        )
        for layers in (2, 3, 4)
    }


def bfs_route_points(rows):
    """(k, k + geodesic) fit points from a cross-checked sweep.

    This is the dual-BFS pipeline's log_d norm (boundary cost k plus wall),
    the quantity the scaling fits are defined over.
    """
    return [(row["k"], row["k"] + row["bulkC_bfs"]) for row in rows if "bulkC_bfs" in row]
