"""Minimal-cut solvers: geodesic vs optimizer, sweeps, large-d rates."""

import os

import pytest

import holoshadow as hs
from holoshadow.core import SupportMask
from holoshadow.cuts import (
    aligned_positions,
    bulk_geodesic,
    cut_sweep,
    min_cut_exact,
    plr_large_d,
    resolve_workers,
)
from holoshadow.tiling import dual_graph, two_tile_graph


@pytest.fixture(scope="module")
def two_tile():
    return two_tile_graph(3)


class TestMinCutExact:
    def test_nothing_pinned(self, two_tile):
        cut = min_cut_exact(two_tile, frozenset(), "per-vertex")
        assert (cut.bdry_cost, cut.bulk_cost, cut.min_cost) == (0, 0, 0)

    def test_two_tile_single_pin(self, two_tile):
        # pinning one tile: flip it alone (1 boundary + 1 wall), tied with
        # flipping both (2 boundary); the optimizer reports the wall cut
        cut = min_cut_exact(two_tile, {0}, "per-vertex")
        assert (cut.bdry_cost, cut.bulk_cost, cut.min_cost) == (1, 1, 2)

    def test_all_boundary_pinned_flips_globally(self):
        g = hs.generate_tiling(3, 7, 2)
        bdry = {v for v in range(g.n_vertices) if g.boundary_legs[v]}
        cut = min_cut_exact(g, bdry, "per-vertex")
        assert (cut.bdry_cost, cut.bulk_cost, cut.min_cost) == (len(bdry), 0, len(bdry))

    def test_per_leg_weighs_leg_count(self, two_tile):
        cut = min_cut_exact(two_tile, {0}, "per-leg")
        assert cut.min_cost == 3  # 2 legs + 1 wall

    def test_rejects_interior_pin(self):
        g = hs.generate_tiling(3, 7, 2)
        with pytest.raises(ValueError, match="owns no boundary legs"):
            min_cut_exact(g, {0}, "per-vertex")  # the central tile has no legs

    def test_witness_is_consistent_optimal_cut(self):
        g = hs.generate_tiling(3, 7, 2)
        pinned = {g.leg_owner(j) for j in range(3)}
        cut = min_cut_exact(g, pinned, "per-leg")
        assert cut.witness is not None and pinned <= cut.witness
        bdry = sum(len(g.boundary_legs[v]) for v in cut.witness)
        bulk = sum(1 for u, v in g.edges if (u in cut.witness) != (v in cut.witness))
        assert (bdry, bulk) == (cut.bdry_cost, cut.bulk_cost)


class TestBulkGeodesic:
    def test_empty_and_full(self, two_tile):
        dual = dual_graph(two_tile)
        assert bulk_geodesic(two_tile, dual, SupportMask.empty(4)) == 0
        assert bulk_geodesic(two_tile, dual, SupportMask.interval(4, 0, 4)) == 0

    def test_two_tile_crossing(self, two_tile):
        dual = dual_graph(two_tile)
        iv = SupportMask.interval(4, 2, 2)
        assert bulk_geodesic(two_tile, dual, iv) == 1

    def test_rejects_noncontiguous(self, two_tile):
        dual = dual_graph(two_tile)
        with pytest.raises(ValueError, match="not contiguous"):
            bulk_geodesic(two_tile, dual, SupportMask(4, frozenset({0, 2})))

    def test_partial_tile_interval_has_no_dual_path(self):
        g = hs.generate_tiling(5, 4, 2)
        dual = dual_graph(g)
        n = g.n_legs
        # find an interval boundary splitting one tile's legs
        aligned = aligned_positions(g)
        start = next(j for j in range(n) if j not in aligned)
        with pytest.raises(ValueError, match="min_cut_exact"):
            bulk_geodesic(g, dual, SupportMask.interval(n, start, 1))

    @pytest.mark.parametrize("layers,expected", [(2, 3), (3, 5)])
    def test_37_half_boundary(self, layers, expected):
        g = hs.generate_tiling(3, 7, layers)
        dual = dual_graph(g)
        n = g.n_legs
        vals = {
            bulk_geodesic(g, dual, SupportMask.interval(n, s, n // 2)) for s in range(n)
        }
        assert vals == {expected}

    def test_complement_has_same_geodesic(self):
        g = hs.generate_tiling(3, 7, 3)
        dual = dual_graph(g)
        n = g.n_legs
        for start, k in [(0, 5), (7, 11), (20, 2)]:
            iv = SupportMask.interval(n, start, k)
            comp = SupportMask.interval(n, (start + k) % n, n - k)
            assert bulk_geodesic(g, dual, iv) == bulk_geodesic(g, dual, comp)


class TestPlrLargeD:
    def test_empty_interval(self, two_tile):
        r = plr_large_d(two_tile, SupportMask.empty(4), 7)
        assert r.w == 1.0
        assert r.log_d_norm == 0.0

    def test_exponent_is_exact_integer(self, two_tile):
        r = plr_large_d(two_tile, SupportMask.interval(4, 2, 2), 3, mode="per-vertex")
        assert r.log_d_norm == 2.0
        assert r.w == pytest.approx(3.0**-2)

    def test_full_boundary_per_vertex(self):
        g = hs.generate_tiling(3, 7, 2)
        n_bdry = sum(1 for v in range(g.n_vertices) if g.boundary_legs[v])
        r = plr_large_d(g, SupportMask.interval(g.n_legs, 0, g.n_legs), 5, "per-vertex")
        assert r.log_d_norm == n_bdry

    def test_per_leg_norm_at_least_k(self):
        g = hs.generate_tiling(3, 7, 2)
        n = g.n_legs
        for start, k in [(0, 1), (3, 4), (5, 9), (1, 11)]:
            r = plr_large_d(g, SupportMask.interval(n, start, k), 64, "per-leg")
            assert r.log_d_norm >= k


class TestCutSweep:
    def test_zero_row_and_ordering(self, two_tile):
        rows = cut_sweep(two_tile, "per-vertex", oracle="maxflow", workers=1)
        assert rows[0] == {"start": 0, "k": 0, "bdryC": 0, "bulkC": 0, "minC": 0}
        keys = [(r["k"], r["start"]) for r in rows]
        assert keys == sorted(keys)

    def test_value_identity_small_graphs(self, graphs37, graphs54):
        # the optimizer's minimum is min(k + geodesic, total boundary cost):
        # the wall solution when strictly cheaper, else the global flip
        for g, aligned in ((graphs37[2], False), (graphs54[2], True)):
            n = g.n_legs
            rows = cut_sweep(g, "per-leg", vertex_aligned_only=aligned, oracle="both", workers=1)
            for row in rows:
                if not row["k"] or "bulkC_bfs" not in row:
                    continue
                wall = row["k"] + row["bulkC_bfs"]
                assert row["minC"] == min(wall, n)
                if wall < n:
                    assert (row["bdryC"], row["bulkC"]) == (row["k"], row["bulkC_bfs"])
                elif wall > n:
                    assert (row["bdryC"], row["bulkC"]) == (n, 0)

    def test_auto_oracle_matches_maxflow_below_half(self, graphs37):
        g = graphs37[2]
        auto = {(r["start"], r["k"]): r for r in cut_sweep(g, "per-leg", workers=1)}
        flow = {(r["start"], r["k"]): r for r in cut_sweep(g, "per-leg", oracle="maxflow", workers=1)}
        for key, row in auto.items():
            if 0 < row["k"] <= g.n_legs // 2:
                assert row["minC"] == flow[key]["minC"]
                assert row["bulkC"] == flow[key]["bulkC"]

    def test_monotone_bounded_increments(self, graphs37):
        # extending an interval by one leg can add at most that tile's legs
        # plus the wall edges needed to enclose it
        g = graphs37[3]
        rows = {(r["start"], r["k"]): r["minC"] for r in cut_sweep(g, "per-leg", workers=1)}
        degree = [0] * g.n_vertices
        for u, v in g.edges:
            degree[u] += 1
            degree[v] += 1
        step_cap = max(
            len(g.boundary_legs[v]) + degree[v]
            for v in range(g.n_vertices)
            if g.boundary_legs[v]
        )
        n = g.n_legs
        for start in (0, 5, 11):
            for k in range(1, n - 1):
                assert rows[(start, k + 1)] <= rows[(start, k)] + step_cap

    def test_per_vertex_sweep_runs(self, two_tile):
        rows = cut_sweep(two_tile, "per-vertex", workers=1)
        by_key = {(r["start"], r["k"]): r for r in rows}
        assert by_key[(2, 2)]["minC"] == 2

    def test_unrestricted_54_partial_intervals_use_optimizer(self, graphs54):
        g = graphs54[2]
        rows = cut_sweep(g, "per-leg", oracle="auto", workers=1)
        n = g.n_legs
        aligned = aligned_positions(g)
        by_key = {(r["start"], r["k"]): r for r in rows}
        assert len(rows) == n * (n - 1) + 1
        # a partial-tile interval still pays the whole tile's legs
        start = next(j for j in range(n) if j not in aligned)
        row = by_key[(start, 1)]
        assert row["bdryC"] >= len(g.boundary_legs[g.leg_owner(start)])
        assert row["minC"] >= row["k"]

    def test_workers_do_not_change_results(self, graphs37):
        # layers=4 is big enough to engage the process pool
        g = graphs37[4]
        serial = cut_sweep(g, "per-leg", oracle="maxflow", workers=1)
        parallel = cut_sweep(g, "per-leg", oracle="maxflow", workers=2)
        assert serial == parallel


class TestWorkerResolution:
    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("HOLOSHADOW_THREADS", "3")
        assert resolve_workers(8) == 3

    def test_request_honored(self, monkeypatch):
        monkeypatch.delenv("HOLOSHADOW_THREADS", raising=False)
        assert resolve_workers(5) == 5
        assert resolve_workers() >= 1
        assert resolve_workers() <= max(1, min(os.cpu_count() or 1, 8))
