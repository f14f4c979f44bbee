"""Pauli learning rates of binary-tree measurement circuits.

A depth-T tree on N = 2^T qudits applies a two-qudit Haar-random gate per
node and measures half the qudits per layer.  Averaging the two-replica
quantities over gates reduces every subtree to a two-component weight
vector over replica permutations (identity/swap); the vector of a fused
tree follows from its children through a fixed bilinear rule with gate
factor a = d/(d^2+1):

    w_id'   = l_id r_id + a (l_id r_swap + l_swap r_id)
    w_swap' = a (l_id r_swap + l_swap r_id) + l_swap r_swap

Leaves enter coarse-grained in pairs: a pair touching the Pauli support
is particle-like with vector (-1, d^2)/(d^4-1); an untouched pair is
hole-like with (1, 0).  The PLR of the whole tree is the component sum of
the folded root vector.

The module also provides:

* ``ef_bruteforce``   -- the independent oracle: exact entanglement
  features by exhaustive enumeration of per-gate replica assignments
  (weight a per mismatched pair of children, 1 when all agree, 0 else);
* ``contiguous_series``/``q_series``/``beta`` -- the aligned contiguous
  support: ratio sequence g_t (g_0 = -1/d), the convergent series
  Q(d) = sum_i ln(1+2a g_i)/2^(i+1), and the resulting norm base
  beta = (d^2-1)/(d e^Q), which satisfies d < beta <= d + 1/d;
* ``tree_large_d_cuts`` -- the d->infinity fusion algebra on
  particle/hole/mixed labels, yielding the minimal-cut exponent
  bdryC + bulkC;
* ``crossover_kstar``/``crossover_numeric`` -- where the tree's norm
  beta^k overtakes the optimal-depth shallow-circuit reference k d^k
  (Lambert-W closed form and exact numerical scan).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping

from .core import PlrResult, Real, SupportMask, WVector, mismatch_weight
from .cuts import CutResult
from .lambertw import lambert_w

#: eta-model enumeration cap: 2^(N-1) gate assignments.
MAX_BRUTEFORCE_LEAVES = 16

_LOG_MAX = math.log(1.7e308)


@dataclass(frozen=True)
class TreeSpec:
    """Binary-tree circuit geometry: N = 2^depth leaves, local dimension d."""

    n: int
    d: int

    def __post_init__(self) -> None:
        if self.n < 2 or self.n & (self.n - 1):
            raise ValueError(f"leaf count must be a power of two >= 2, got {self.n}")
        if self.d < 2:
            raise ValueError(f"local dimension must be >= 2, got {self.d}")

    @property
    def depth(self) -> int:
        return self.n.bit_length() - 1


@dataclass(frozen=True)
class BetaResult:
    """Norm base of the contiguous-support tree: ||P||^2 ~ beta_norm^k."""

    q: float
    beta_norm: float
    beta_w: float


class FusionLabel(Enum):
    """Large-d classification of a subtree by its dominant replica weight."""

    PARTICLE = "particle"
    HOLE = "hole"
    MIXED = "mixed"


def leaf_vector(intersects_support: bool, d: int, exact: bool = False) -> WVector:
    """Weight vector of a coarse-grained two-qudit leaf pair."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if not intersects_support:
        return WVector(Fraction(1), Fraction(0)) if exact else WVector(1.0, 0.0)
    denom = d**4 - 1
    if exact:
        return WVector(Fraction(-1, denom), Fraction(d * d, denom))
    return WVector(-1.0 / denom, d * d / denom)


def fuse(left: WVector, right: WVector, d: int, exact: bool = False) -> WVector:
    """Fuse two sibling subtree vectors through one Haar-averaged gate."""
    a = mismatch_weight(d, exact=exact)
    cross = left.w_id * right.w_swap + left.w_swap * right.w_id
    return WVector(
        w_id=left.w_id * right.w_id + a * cross,
        w_swap=a * cross + left.w_swap * right.w_swap,
    )


def _fold(vectors: list[WVector], d: int, exact: bool) -> WVector:
    while len(vectors) > 1:
        vectors = [fuse(vectors[i], vectors[i + 1], d, exact) for i in range(0, len(vectors), 2)]
    return vectors[0]


def plr_tree(support: SupportMask, spec: TreeSpec, exact: bool = False) -> PlrResult:
    """PLR of a Pauli with the given support under the tree circuit.

    Leaves are coarse-grained in fixed pairs (2i, 2i+1); a pair counts as
    particle-like when at least one of its qudits is in the support.
    With ``exact=True`` the fold runs in rational arithmetic (N <= 16).
    """
    if support.n != spec.n:
        raise ValueError(f"support is over {support.n} sites but the tree has {spec.n} leaves")
    if exact and spec.n > MAX_BRUTEFORCE_LEAVES:
        raise ValueError(f"rational mode is limited to N <= {MAX_BRUTEFORCE_LEAVES}")
    vectors = [
        leaf_vector(2 * i in support or 2 * i + 1 in support, spec.d, exact)
        for i in range(spec.n // 2)
    ]
    return PlrResult.from_w(_fold(vectors, spec.d, exact).total, spec.d)


# ---------------------------------------------------------------------------
# exact entanglement features: exhaustive eta-model oracle


def ef_bruteforce(region: SupportMask, spec: TreeSpec, exact: bool = False) -> Real:
    """Exact entanglement feature W(B) of the tree ensemble, brute force.

    Enumerates all 2^(N-1) assignments of identity/swap to the N-1 gates
    and sums the product of per-gate factors: a when the two children
    disagree, 1 when gate and children all agree, 0 otherwise.  Leaves in
    `region` carry swap, the rest identity.  Independent of the recursive
    fold; used as its oracle.
    """
    n = spec.n
    if region.n != n:
        raise ValueError(f"region is over {region.n} sites but the tree has {n} leaves")
    if n > MAX_BRUTEFORCE_LEAVES:
        raise ValueError(f"brute-force enumeration is limited to N <= {MAX_BRUTEFORCE_LEAVES}")
    a = mismatch_weight(spec.d, exact=exact)
    one: Real = Fraction(1) if exact else 1.0
    leaf_labels = [i in region for i in range(n)]
    n_gates = n - 1
    total: Real = Fraction(0) if exact else 0.0
    for config in range(1 << n_gates):
        # gates indexed level by level from the leaves up
        values = leaf_labels
        gate = 0
        weight = one
        for _level in range(spec.depth):
            next_values = []
            for i in range(0, len(values), 2):
                sigma = bool(config >> gate & 1)
                gate += 1
                l, r = values[i], values[i + 1]
                if l != r:
                    weight = weight * a
                elif sigma != l:
                    weight = None
                    break
                next_values.append(sigma)
            if weight is None:
                break
            values = next_values
        if weight is not None:
            total += weight
    return total


def ef_table(
    support: SupportMask, spec: TreeSpec, exact: bool = False
) -> Mapping[frozenset, Real]:
    """W(B) for every subset B of `support`, keyed by frozenset of sites."""
    from .core import subsets_of

    return {
        b: ef_bruteforce(SupportMask(spec.n, b), spec, exact) for b in subsets_of(support.sites)
    }


# ---------------------------------------------------------------------------
# contiguous supports: g-sequence, Q(d) series, norm base beta


def g_sequence(d: int, m: int, exact: bool = False) -> list[Real]:
    """First m terms of the contiguous-support ratio sequence.

    g_0 = -1/d; g_t = g_{t-1} (g_{t-1} + 2a) / (1 + 2a g_{t-1}).  The
    sequence rises monotonically to the stable fixed point 0 (1 is the
    unstable fixed point).
    """
    if m < 1:
        raise ValueError("need at least one term")
    a2 = 2 * mismatch_weight(d, exact=exact)
    g: Real = Fraction(-1, d) if exact else -1.0 / d
    out = [g]
    for _ in range(m - 1):
        g = g * (g + a2) / (1 + a2 * g)
        out.append(g)
    return out


def contiguous_series(d: int, m: int, exact: bool = False) -> tuple[list[Real], WVector]:
    """g_0..g_{m-1} and the depth-m vector of an aligned contiguous support.

    The support holds k = 2^m qudits and exactly fills a depth-m subtree;
    all coarse leaves are particle-like, so each fusion squares the vector:
    w_id' = w_id^2 + 2a w_id w_swap, w_swap' = w_swap^2 + 2a w_id w_swap.
    m = 1 returns the particle leaf vector itself.
    """
    gs = g_sequence(d, m, exact)
    a2 = 2 * mismatch_weight(d, exact=exact)
    vec = leaf_vector(True, d, exact)
    for _ in range(m - 1):
        cross = a2 * vec.w_id * vec.w_swap
        vec = WVector(vec.w_id * vec.w_id + cross, vec.w_swap * vec.w_swap + cross)
    return gs, vec


def q_series(d: int, tol: float = 1e-12) -> float:
    """The convergent series Q(d) = sum_i ln(1 + 2a g_i) / 2^(i+1).

    Terms decay at least geometrically in both the 1/2^(i+1) prefactor and
    |g_i|, so once |term_i| < tol the remaining tail is below tol as well
    (tail <= |ln(1+2a g_i)| * 2^-(i+1) = |term_i|).
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    a2 = 2.0 * mismatch_weight(d)
    g = -1.0 / d
    total = 0.0
    for i in range(256):
        term = math.log1p(a2 * g) / 2 ** (i + 1)
        total += term
        if abs(term) < tol:
            break
        g = g * (g + a2) / (1.0 + a2 * g)
    return total


def beta(d: int) -> BetaResult:
    """Norm base beta = (d^2-1)/(d e^Q(d)); PLR base beta_w = 1/beta."""
    q = q_series(d)
    beta_norm = (d * d - 1) / (d * math.exp(q))
    return BetaResult(q=q, beta_norm=beta_norm, beta_w=1.0 / beta_norm)


# ---------------------------------------------------------------------------
# large-d fusion algebra


def fuse_labels(left: FusionLabel, right: FusionLabel) -> tuple[FusionLabel, int]:
    """One fusion step on large-d labels; returns (label, bulk-cut increment).

    particle+particle -> particle, hole+hole -> hole, mixed+mixed -> mixed,
    particle+hole -> mixed (costing one bulk cut), and mixed is absorbed by
    either pure label.
    """
    if left is right:
        return left, 0
    if FusionLabel.MIXED in (left, right):
        other = right if left is FusionLabel.MIXED else left
        return other, 0
    return FusionLabel.MIXED, 1


def tree_large_d_cuts(support: SupportMask, spec: TreeSpec) -> CutResult:
    """Minimal-cut exponent of the tree in the d->infinity limit.

    Coarse-grains leaf pairs to particle/hole labels and folds the fusion
    algebra; bdryC is twice the number of particle leaves, bulkC the number
    of particle+hole fusions, and w ~ d^-(bdryC+bulkC).
    """
    if support.n != spec.n:
        raise ValueError(f"support is over {support.n} sites but the tree has {spec.n} leaves")
    labels = [
        FusionLabel.PARTICLE if (2 * i in support or 2 * i + 1 in support) else FusionLabel.HOLE
        for i in range(spec.n // 2)
    ]
    bdry = 2 * sum(1 for lab in labels if lab is FusionLabel.PARTICLE)
    bulk = 0
    while len(labels) > 1:
        fused = []
        for i in range(0, len(labels), 2):
            lab, inc = fuse_labels(labels[i], labels[i + 1])
            bulk += inc
            fused.append(lab)
        labels = fused
    return CutResult(bdry_cost=bdry, bulk_cost=bulk, min_cost=bdry + bulk, mode="tree-fusion")


# ---------------------------------------------------------------------------
# shallow-circuit reference and tree/shallow crossover


def log_shallow_reference(k: int, d: int) -> float:
    """ln of the optimal-depth shallow-circuit reference norm k d^k."""
    if k < 1:
        raise ValueError(f"support size must be >= 1, got {k}")
    return math.log(k) + k * math.log(d)


def shallow_reference(k: int, d: int) -> float:
    """Reference squared shadow norm k d^k of an optimal-depth shallow circuit."""
    log_val = log_shallow_reference(k, d)
    if log_val > _LOG_MAX:
        raise OverflowError(
            f"k d^k overflows a float for k={k}, d={d}; use log_shallow_reference"
        )
    return k * float(d) ** k


# signed log-space arithmetic for folds beyond float range: (sign, ln|x|)

_SLOG_ZERO = (0, -math.inf)


def _slog_mul(x: tuple[int, float], y: tuple[int, float]) -> tuple[int, float]:
    if x[0] == 0 or y[0] == 0:
        return _SLOG_ZERO
    return (x[0] * y[0], x[1] + y[1])


def _slog_add(x: tuple[int, float], y: tuple[int, float]) -> tuple[int, float]:
    if x[0] == 0:
        return y
    if y[0] == 0:
        return x
    if x[1] < y[1]:
        x, y = y, x
    if x[0] == y[0]:
        return (x[0], x[1] + math.log1p(math.exp(y[1] - x[1])))
    diff = y[1] - x[1]
    if diff >= 0.0:  # equal magnitudes, opposite signs
        return _SLOG_ZERO
    return (x[0], x[1] + math.log1p(-math.exp(diff)))


def _fuse_slog(
    left: tuple[tuple[int, float], tuple[int, float]],
    right: tuple[tuple[int, float], tuple[int, float]],
    log_a: float,
) -> tuple[tuple[int, float], tuple[int, float]]:
    l_id, l_sw = left
    r_id, r_sw = right
    cross = _slog_add(_slog_mul(l_id, r_sw), _slog_mul(l_sw, r_id))
    a_cross = (cross[0], cross[1] + log_a)
    return (
        _slog_add(_slog_mul(l_id, r_id), a_cross),
        _slog_add(a_cross, _slog_mul(l_sw, r_sw)),
    )


def _slog_leaf(intersects: bool, d: int) -> tuple[tuple[int, float], tuple[int, float]]:
    if not intersects:
        return ((1, 0.0), _SLOG_ZERO)
    log_denom = math.log(float(d) ** 4 - 1.0)
    return ((-1, -log_denom), (1, 2.0 * math.log(d) - log_denom))


def plr_tree_log(support: SupportMask, spec: TreeSpec) -> PlrResult:
    """plr_tree carried in (sign, log-magnitude) form; safe for huge N."""
    if support.n != spec.n:
        raise ValueError(f"support is over {support.n} sites but the tree has {spec.n} leaves")
    log_a = math.log(mismatch_weight(spec.d))
    vecs = [
        _slog_leaf(2 * i in support or 2 * i + 1 in support, spec.d)
        for i in range(spec.n // 2)
    ]
    while len(vecs) > 1:
        vecs = [_fuse_slog(vecs[i], vecs[i + 1], log_a) for i in range(0, len(vecs), 2)]
    sign, log_w = _slog_add(*vecs[0])
    if sign <= 0:
        raise ValueError("tree fold produced a nonpositive learning rate")
    return PlrResult.from_log_w(log_w, spec.d)


def contiguous_log_plr(d: int, m: int) -> float:
    """ln w for a fully supported N = 2^m tree, folded in log space."""
    if m < 1:
        raise ValueError("m must be >= 1")
    log_a = math.log(mismatch_weight(d))
    vec = _slog_leaf(True, d)
    for _ in range(m - 1):
        vec = _fuse_slog(vec, vec, log_a)
    sign, log_w = _slog_add(*vec)
    if sign <= 0:
        raise ValueError("contiguous fold produced a nonpositive learning rate")
    return log_w


def crossover_kstar(d: int) -> tuple[float, float]:
    """Closed-form tree/shallow crossover supports from the Lambert W function.

    Solves k d^k = ((d^2-1)/d)^k e^(-Q k) for k, giving k = W(x)/x with
    x = Q(d) + ln(d^2/(d^2-1)); returns (W_0 branch, W_-1 branch).  Raises
    ValueError when x falls outside (-1/e, 0) and no real crossover exists.
    """
    x = q_series(d) + math.log(d * d / (d * d - 1.0))
    if not -1.0 / math.e < x < 0.0:
        raise ValueError(f"no real crossover: x = {x} outside (-1/e, 0)")
    return lambert_w(x, 0) / x, lambert_w(x, -1) / x


def crossover_numeric(d: int, k_max: int) -> int | None:
    """Smallest k = 2^m <= k_max where the exact contiguous tree norm
    exceeds the shallow reference k d^k; None if the tree stays better."""
    if k_max < 2 or k_max & (k_max - 1):
        raise ValueError(f"k_max must be a power of two >= 2, got {k_max}")
    for m in range(1, k_max.bit_length()):
        k = 1 << m
        if -contiguous_log_plr(d, m) > log_shallow_reference(k, d):
            return k
    return None


def crossover_table(d: int, k_max: int) -> list[dict]:
    """Per-k comparison rows of tree vs shallow log-norms, k = 1..k_max.

    Exact tree values exist only at k = 2^m; intermediate k are filled by
    exponential (log-linear) interpolation and flagged as such.
    """
    exact = {1 << m: -contiguous_log_plr(d, m) for m in range(1, k_max.bit_length())}
    rows = []
    for k in range(2, k_max + 1):
        if k in exact:
            log_tree = exact[k]
            interpolated = False
        else:
            lo = 1 << (k.bit_length() - 1)
            hi = lo * 2
            if hi not in exact:
                continue
            t = (math.log(k) - math.log(lo)) / (math.log(hi) - math.log(lo))
            log_tree = (1 - t) * exact[lo] + t * exact[hi]
            interpolated = True
        rows.append(
            {
                "k": k,
                "log_tree_norm_sq": log_tree,
                "log_shallow_norm_sq": log_shallow_reference(k, d),
                "interpolated": interpolated,
            }
        )
    return rows


def table_rows(d_values: Iterable[int]) -> list[dict]:
    """Q(d) and beta(d) rows for the published-table reproduction."""
    rows = []
    for d in d_values:
        b = beta(d)
        rows.append({"d": d, "Q": b.q, "beta": b.beta_norm})
    return rows
