"""Interleavings and delta-matchings of barcodes; exact bottleneck distance.

All comparisons are exact.  The bottleneck distance is found by testing
feasibility at a finite candidate set of deltas; feasibility at a fixed
delta is a perfect-matching question on an augmented bipartite graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .barc_category import (
    BarcodeMatching,
    InvalidMatching,
    OverlapMatching,
    cokernel,
    compose_overlap,
    is_delta_trivial_barcode,
    kernel,
    phi,
    shift_matching,
)
from .bipartite import hopcroft_karp
from .barcode import Barcode, shift_barcode, translate_barcode
from .intervals import INF, as_rational, is_delta_trivial, is_subset, overlaps_above, thicken

__all__ = [
    "InterleavingPair",
    "DistanceResult",
    "NotRealizable",
    "is_interleaving",
    "interleaving_failure",
    "r_delta",
    "is_delta_matching",
    "delta_matching_failure",
    "to_delta_matching",
    "from_delta_matching",
    "overlap_part",
    "is_interleaving_morphism",
    "partner",
    "candidate_deltas",
    "delta_matching_at",
    "bottleneck_distance",
    "interleaving_distance",
]


class NotRealizable(ValueError):
    """A delta-matching that is not the image of an overlap matching into D(delta)."""


@dataclass(frozen=True)
class InterleavingPair:
    delta: Fraction
    f: OverlapMatching
    g: OverlapMatching


@dataclass(frozen=True)
class DistanceResult:
    value: object
    attained: bool
    witness: Optional[BarcodeMatching] = None
    interleaving: Optional[InterleavingPair] = None


def _unshift(m_target: Barcode, delta) -> Barcode:
    return translate_barcode(m_target, delta)


def interleaving_failure(C: Barcode, D: Barcode, delta, f: OverlapMatching, g: OverlapMatching):
    """Name the first violated interleaving equation, or ``None`` if (f, g) interleave."""
    delta = as_rational(delta)
    if f.source != C or f.target != shift_barcode(D, delta):
        raise InvalidMatching("f must go from C to D(delta)")
    if g.source != D or g.target != shift_barcode(C, delta):
        raise InvalidMatching("g must go from D to C(delta)")
    # g: D -> C(delta) is moved along the shift to D(delta) -> C(2 delta) before composing
    if compose_overlap(shift_matching(g, delta), f) != phi(C, 2 * delta):
        return "g*f != phi^C(2 delta)"
    if compose_overlap(shift_matching(f, delta), g) != phi(D, 2 * delta):
        return "f*g != phi^D(2 delta)"
    return None


def is_interleaving(C: Barcode, D: Barcode, delta, f: OverlapMatching, g: OverlapMatching) -> bool:
    return interleaving_failure(C, D, delta, f, g) is None


def r_delta(D: Barcode, delta) -> BarcodeMatching:
    """The index-preserving bijection ``D(delta) -> D``."""
    return BarcodeMatching(shift_barcode(D, delta), D, frozenset((k, k) for k in D.indices))


def delta_matching_failure(sigma: BarcodeMatching, delta) -> Optional[str]:
    delta = as_rational(delta)
    for side, bc, partner_of in (
        ("source", sigma.source, sigma),
        ("target", sigma.target, sigma.preimage),
    ):
        for k, iv in bc:
            if partner_of(k) is None and not is_delta_trivial(iv, 2 * delta):
                return f"condition (i): unmatched {side} interval {k} {iv} is not 2delta-trivial"
    for a, b in sigma.sorted_pairs():
        I, J = sigma.source[a], sigma.target[b]
        if not (is_subset(I, thicken(J, delta)) and is_subset(J, thicken(I, delta))):
            return f"condition (ii): {a} {I} and {b} {J} are not within delta of each other"
    return None


def is_delta_matching(sigma: BarcodeMatching, delta) -> bool:
    return delta_matching_failure(sigma, delta) is None


def to_delta_matching(f: OverlapMatching, delta) -> BarcodeMatching:
    """``r^delta ∘ f`` for ``f: C -> D(delta)``."""
    D = _unshift(f.target, delta)
    return BarcodeMatching(f.source, f.target, f.pairs).then(r_delta(D, delta))


def from_delta_matching(sigma: BarcodeMatching, delta) -> OverlapMatching:
    """The overlap matching ``f: C -> D(delta)`` with ``r^delta ∘ f = sigma``."""
    try:
        return OverlapMatching(sigma.source, shift_barcode(sigma.target, delta), sigma.pairs)
    except InvalidMatching as exc:
        raise NotRealizable(str(exc)) from None


def overlap_part(sigma: BarcodeMatching, delta) -> BarcodeMatching:
    """Drop pairs of ``sigma`` that do not overlap above after shifting the target.

    For a delta-matching those pairs join two 2delta-trivial intervals, so
    the result is again a delta-matching, and it is realizable.
    """
    target = shift_barcode(sigma.target, delta)
    keep = frozenset(
        (a, b) for a, b in sigma.pairs if overlaps_above(sigma.source[a], target[b])
    )
    return BarcodeMatching(sigma.source, sigma.target, keep)


def is_interleaving_morphism(f: OverlapMatching, delta) -> bool:
    two = 2 * as_rational(delta)
    return is_delta_trivial_barcode(kernel(f)[0], two) and is_delta_trivial_barcode(cokernel(f)[0], two)


def partner(f: OverlapMatching, delta) -> OverlapMatching:
    """The matching ``g: D -> C(delta)`` completing ``f`` to an interleaving."""
    delta = as_rational(delta)
    if not is_interleaving_morphism(f, delta):
        raise ValueError("f has a kernel or cokernel that is not 2delta-trivial")
    C = f.source
    D = _unshift(f.target, delta)
    C_shift = shift_barcode(C, delta)
    pairs = frozenset(
        (b, a) for a, b in f.pairs if overlaps_above(D[b], C_shift[a])
    )
    return OverlapMatching(D, C_shift, pairs)


# -- bottleneck distance ------------------------------------------------------------

def candidate_deltas(C: Barcode, D: Barcode) -> list[Fraction]:
    """Every delta at which delta-matching feasibility can change."""
    cands = {Fraction(0)}
    for iv in C.intervals + D.intervals:
        if iv.finite:
            cands.add((iv.hi - iv.lo) / 2)
    for I in C.intervals:
        for J in D.intervals:
            for x, y in ((I.lo, J.lo), (I.hi, J.hi)):
                if x not in (INF, -INF) and y not in (INF, -INF):
                    cands.add(abs(x - y))
    return sorted(cands)


def delta_matching_at(C: Barcode, D: Barcode, delta) -> Optional[BarcodeMatching]:
    """A delta-matching between C and D, or ``None`` if there is none.

    Every interval gets a "diagonal" twin on the opposite side; an interval
    may match its twin only when it is 2delta-trivial, and twins match each
    other freely.  A perfect matching of this graph restricted to real
    pairs is exactly a delta-matching.
    """
    delta = as_rational(delta)
    src, tgt = sorted(C.indices), sorted(D.indices)
    m, n = len(src), len(tgt)
    # left: C entries then D twins; right: D entries then C twins
    adj = [[] for _ in range(m + n)]
    thick_c = [thicken(C[a], delta) for a in src]
    thick_d = [thicken(D[b], delta) for b in tgt]
    for i, a in enumerate(src):
        I = C[a]
        for j, b in enumerate(tgt):
            if is_subset(I, thick_d[j]) and is_subset(D[b], thick_c[i]):
                adj[i].append(j)
        if is_delta_trivial(I, 2 * delta):
            adj[i].append(n + i)
    for j, b in enumerate(tgt):
        if is_delta_trivial(D[b], 2 * delta):
            adj[m + j].append(j)
        adj[m + j].extend(n + i for i in range(m))
    mate = hopcroft_karp(m + n, m + n, adj)
    if any(v < 0 for v in mate):
        return None
    pairs = frozenset((src[i], tgt[mate[i]]) for i in range(m) if mate[i] < n)
    return BarcodeMatching(C, D, pairs)


def bottleneck_distance(C: Barcode, D: Barcode) -> DistanceResult:
    """Exact bottleneck distance with attainment flag and a witness matching.

    Feasibility is monotone in delta and only changes at candidate values,
    so binary search finds the least feasible candidate; one probe strictly
    below it decides whether the infimum is attained.
    """
    cands = candidate_deltas(C, D)
    lo, hi = 0, len(cands)
    while lo < hi:
        mid = (lo + hi) // 2
        if delta_matching_at(C, D, cands[mid]) is not None:
            hi = mid
        else:
            lo = mid + 1
    if lo == len(cands):
        if delta_matching_at(C, D, cands[-1] + 1) is not None:
            return DistanceResult(cands[-1], False)
        return DistanceResult(INF, False)
    best = cands[lo]
    if lo > 0:
        below = (cands[lo - 1] + best) / 2
        if delta_matching_at(C, D, below) is not None:
            return DistanceResult(cands[lo - 1], False)
    return DistanceResult(best, True, delta_matching_at(C, D, best))


def interleaving_distance(C: Barcode, D: Barcode) -> DistanceResult:
    """Same value as :func:`bottleneck_distance`, with an explicit interleaving when attained."""
    res = bottleneck_distance(C, D)
    if not res.attained:
        return res
    delta = res.value
    f = from_delta_matching(overlap_part(res.witness, delta), delta)
    g = partner(f, delta)
    return DistanceResult(res.value, True, res.witness, InterleavingPair(delta, f, g))
