"""Shared domain types and generic Pauli-learning-rate conversions.

A locally scrambled randomized measurement makes every Pauli operator an
eigenmode of the measurement channel; the eigenvalue w (the Pauli learning
rate, PLR) fixes the sample complexity through the squared shadow norm
1/w.  This module holds the types shared by all schemes and the two
scheme-independent conversions:

* ``shadow_norm``  -- PLR -> squared shadow norm (reciprocal),
* ``plr_from_ef``  -- entanglement features W(B) over subsets of the
  support -> PLR, via the alternating-sum identity

      w(A) = (-1)^|A| / (d^2-1)^|A| * sum_{B subseteq A} (-d)^|B| W(B).

All quantities here are pure functions of immutable values; everything is
safe to share between workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Real = Union[int, float, Fraction]

#: Hard cap on support size for 2^k subset enumeration.
MAX_SUBSET_SUPPORT = 20


@dataclass(frozen=True)
class ModelParams:
    """Bond/local dimension and the derived statistical-model couplings.

    ``a = d/(d^2+1)`` is the weight of a replica-permutation mismatch at a
    two-qudit gate; ``J = h = ln(d)/2`` are the Ising coupling and boundary
    field of the cut model.  ``bulk_dim``/``bdry_dim`` allow distinct bulk
    and boundary leg dimensions and default to ``d``.
    """

    d: int
    bulk_dim: int | None = None
    bdry_dim: int | None = None

    def __post_init__(self) -> None:
        if self.d < 2:
            raise ValueError(f"local dimension d must be >= 2, got {self.d}")
        if self.bulk_dim is None:
            object.__setattr__(self, "bulk_dim", self.d)
        if self.bdry_dim is None:
            object.__setattr__(self, "bdry_dim", self.d)

    @property
    def a(self) -> float:
        return self.d / (self.d**2 + 1)

    @property
    def a_exact(self) -> Fraction:
        return Fraction(self.d, self.d**2 + 1)

    @property
    def J(self) -> float:
        return 0.5 * math.log(self.bulk_dim)

    @property
    def h(self) -> float:
        return 0.5 * math.log(self.bdry_dim)


def mismatch_weight(d: int, exact: bool = False) -> Real:
    """The gate factor a = d/(d^2+1) picked up by a replica mismatch."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if exact:
        return Fraction(d, d * d + 1)
    return d / (d * d + 1)


@dataclass(frozen=True)
class WVector:
    """Two-component replica-permutation weight carried by a subtree.

    ``w_id`` weights the identity permutation at the top of the subtree,
    ``w_swap`` the transposition.  For a whole tree the PLR is the sum of
    the two components.
    """

    w_id: Real
    w_swap: Real

    @property
    def total(self) -> Real:
        return self.w_id + self.w_swap


@dataclass(frozen=True)
class SupportMask:
    """A subset of the N boundary sites (ring/line) supporting a Pauli."""

    n: int
    sites: frozenset = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("boundary size must be positive")
        sites = frozenset(self.sites)
        object.__setattr__(self, "sites", sites)
        if any(not (0 <= s < self.n) for s in sites):
            raise ValueError(f"site indices must lie in [0, {self.n})")

    @classmethod
    def empty(cls, n: int) -> "SupportMask":
        return cls(n, frozenset())

    @classmethod
    def interval(cls, n: int, start: int, length: int) -> "SupportMask":
        """Contiguous interval of `length` sites starting at `start`, cyclic."""
        if not (0 <= length <= n):
            raise ValueError(f"interval length must be in [0, {n}], got {length}")
        return cls(n, frozenset((start + i) % n for i in range(length)))

    @property
    def k(self) -> int:
        return len(self.sites)

    @property
    def is_empty(self) -> bool:
        return not self.sites

    def __contains__(self, site: int) -> bool:
        return site in self.sites

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.sites))

    def complement(self) -> "SupportMask":
        return SupportMask(self.n, frozenset(range(self.n)) - self.sites)

    def union(self, other: "SupportMask") -> "SupportMask":
        if other.n != self.n:
            raise ValueError("cannot union masks over different boundary sizes")
        return SupportMask(self.n, self.sites | other.sites)

    def contiguous_bounds(self) -> tuple[int, int] | None:
        """(start, length) if the mask is a cyclic interval, else None.

        The empty mask reports (0, 0); the full mask (0, n).
        """
        if not self.sites:
            return (0, 0)
        if len(self.sites) == self.n:
            return (0, self.n)
        # a cyclic interval has exactly one "entry point": a site whose
        # predecessor is outside the mask
        starts = [s for s in self.sites if (s - 1) % self.n not in self.sites]
        if len(starts) != 1:
            return None
        start = starts[0]
        k = len(self.sites)
        if all((start + i) % self.n in self.sites for i in range(k)):
            return (start, k)
        return None


@dataclass(frozen=True)
class PlrResult:
    """Pauli learning rate with its derived sample-complexity measures."""

    w: Real
    shadow_norm_sq: Real
    log_d_norm: float

    @classmethod
    def from_w(cls, w: Real, d: int) -> "PlrResult":
        if w <= 0:
            raise ValueError(f"Pauli learning rate must be positive, got {w}")
        norm = Fraction(1) / w if isinstance(w, Fraction) else 1.0 / w
        return cls(w=w, shadow_norm_sq=norm, log_d_norm=-math.log(float(w)) / math.log(d))

    @classmethod
    def from_log_w(cls, log_w: float, d: int) -> "PlrResult":
        """Build from ln(w); keeps extreme exponents finite in log space."""
        w = math.exp(log_w) if log_w > -745.0 else 0.0
        norm = math.exp(-log_w) if -log_w < 709.0 else math.inf
        return cls(w=w, shadow_norm_sq=norm, log_d_norm=-log_w / math.log(d))


def shadow_norm(w: Real) -> Real:
    """Squared shadow norm 1/w of a Pauli with learning rate w (w > 0)."""
    if w <= 0:
        raise ValueError(f"learning rate must be positive, got {w}")
    if isinstance(w, Fraction):
        return Fraction(1) / w
    return 1.0 / w


def subsets_of(sites: Iterable[int]) -> Iterator[frozenset]:
    """All subsets of `sites` in lexicographic bitmask order."""
    ordered = sorted(sites)
    k = len(ordered)
    if k > MAX_SUBSET_SUPPORT:
        raise ValueError(
            f"subset enumeration over {k} sites exceeds the 2^{MAX_SUBSET_SUPPORT} cap"
        )
    for mask in range(1 << k):
        yield frozenset(ordered[i] for i in range(k) if mask >> i & 1)


def plr_from_ef(
    support: SupportMask,
    ef: Mapping[frozenset, Real],
    d: int,
    exact: bool = False,
) -> Real:
    """PLR of a Pauli supported on `support` from its entanglement features.

    `ef` must provide W(B) for every subset B of the support (2^k entries,
    keyed by frozenset of site indices).  Raises ValueError if any subset
    is missing from the oracle.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    k = support.k
    if exact:
        total = Fraction(0)
        for b in subsets_of(support.sites):
            try:
                w_b = ef[b]
            except KeyError:
                raise ValueError(f"entanglement-feature oracle missing subset {sorted(b)}")
            total += Fraction(-d) ** len(b) * Fraction(w_b)
        return Fraction(-1) ** k / Fraction(d * d - 1) ** k * total
    total = 0.0
    for b in subsets_of(support.sites):
        try:
            w_b = ef[b]
        except KeyError:
            raise ValueError(f"entanglement-feature oracle missing subset {sorted(b)}")
        total += (-float(d)) ** len(b) * float(w_b)
    return (-1.0) ** k / float(d * d - 1) ** k * total
