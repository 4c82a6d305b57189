"""Random barcodes, diagrams, matchings and module morphisms for experiments and tests.

Every generator takes a :class:`random.Random` so runs are reproducible.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .barc_category import OverlapMatching
from .barcode import Barcode
from .intervals import INF, Interval, make_interval, overlaps_above
from .mch_diagrams import Matching, StratifiedDiagram
from .persistence import PersistenceModule, from_interval_matrix

__all__ = [
    "random_interval",
    "random_barcode",
    "random_overlap_matching",
    "random_partial_injection",
    "random_diagram",
    "random_module",
    "random_morphism",
    "random_mono",
]

GRID = tuple(Fraction(k, 2) for k in range(0, 13))


def random_interval(rng: random.Random, grid=GRID, decorated: bool = True, p_inf: float = 0.0) -> Interval:
    while True:
        a, b = sorted(rng.sample(list(grid), 2)) if rng.random() > 0.1 else (rng.choice(grid),) * 2
        lo_c = rng.random() < 0.5 if decorated else True
        hi_c = rng.random() < 0.5 if decorated else False
        if a == b:
            lo_c = hi_c = True
        if rng.random() < p_inf:
            b = INF
        if rng.random() < p_inf / 2:
            a = -INF
        iv = make_interval(a, lo_c, b, hi_c)
        if iv is not None:
            return iv


def random_barcode(rng: random.Random, max_size: int = 6, prefix: str = "b", **kw) -> Barcode:
    n = rng.randint(0, max_size)
    ivs = [random_interval(rng, **kw) for _ in range(n)]
    # occasional duplicates exercise multiplicities
    if ivs and rng.random() < 0.3:
        ivs.append(rng.choice(ivs))
    return Barcode(tuple((f"{prefix}{k}", iv) for k, iv in enumerate(ivs)))


def random_overlap_matching(rng: random.Random, C: Barcode, D: Barcode, density: float = 0.8) -> OverlapMatching:
    used = set()
    pairs = []
    for a, I in rng.sample(list(C.entries), len(C)):
        if rng.random() > density:
            continue
        opts = [b for b, J in D if b not in used and overlaps_above(I, J)]
        if opts:
            b = rng.choice(opts)
            used.add(b)
            pairs.append((a, b))
    return OverlapMatching(C, D, frozenset(pairs))


def random_partial_injection(rng: random.Random, S, T, density: float = 0.7) -> Matching:
    S, T = sorted(S), sorted(T)
    free = list(T)
    rng.shuffle(free)
    pairs = []
    for x in S:
        if free and rng.random() < density:
            pairs.append((x, free.pop()))
    return Matching(frozenset(S), frozenset(T), frozenset(pairs))


def random_diagram(rng: random.Random, max_critical: int = 4, tokens: int = 5) -> StratifiedDiagram:
    k = rng.randint(0, max_critical)
    crit = sorted(rng.sample(range(-3, 8), k))
    pool = [f"x{i}" for i in range(tokens)]
    strata = [frozenset(rng.sample(pool, rng.randint(0, tokens))) for _ in range(2 * k + 1)]
    links = [random_partial_injection(rng, strata[i], strata[i + 1]) for i in range(2 * k)]
    return StratifiedDiagram(tuple(Fraction(c) for c in crit), tuple(strata), tuple(links))


def random_module(rng: random.Random, max_bars: int = 8, top: int = 8, p_inf: float = 0.1,
                  prefix: str = "b", min_bars: int = 0) -> PersistenceModule:
    n = rng.randint(min_bars, max_bars)
    entries = []
    for k in range(n):
        a = rng.randrange(0, top)
        b = INF if rng.random() < p_inf else rng.randrange(a + 1, top + 1)
        entries.append((f"{prefix}{k}", Interval(Fraction(a), b, True, False)))
    return PersistenceModule(Barcode(tuple(entries)))


def random_morphism(rng: random.Random, M: PersistenceModule, N: PersistenceModule, p: int = 2,
                    density: float = 0.6):
    entries = []
    for i, J in N.bars:
        for j, I in M.bars:
            if overlaps_above(I, J) and rng.random() < density:
                entries.append((i, j, rng.randrange(1, p)))
    return from_interval_matrix(M, N, entries, p)


def random_mono(rng: random.Random, M: PersistenceModule, p: int = 2, extra: int = 2, prefix: str = "n"):
    """A morphism ``M -> N`` that is injective: each bar of ``M`` gets a partner
    with the same right end reaching further down, plus random admissible extras."""
    entries = []
    bars = []
    for k, (j, I) in enumerate(M.bars):
        lo = I.lo - rng.randrange(0, 3)
        name = f"{prefix}{k}"
        bars.append((name, Interval(lo, I.hi, True, False)))
        entries.append((name, j, 1))
    for k in range(rng.randint(0, extra)):
        a = rng.randrange(-2, 8)
        b = INF if rng.random() < 0.1 else a + rng.randrange(1, 6)
        bars.append((f"{prefix}{len(M.bars) + k}", Interval(Fraction(a), b, True, False)))
    rng.shuffle(bars)
    N = PersistenceModule(Barcode(tuple(bars)))
    partners = {e[0] for e in entries}
    for i, J in N.bars:
        if i in partners:
            continue
        for j, I in M.bars:
            if overlaps_above(I, J) and rng.random() < 0.3:
                entries.append((i, j, rng.randrange(0, p)))
    return from_interval_matrix(M, N, entries, p)
