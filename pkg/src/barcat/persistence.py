"""Finitely presented persistence modules over F_p and their morphisms.

A module is a direct sum of interval modules ``C^[a,b)`` given by its
barcode.  A morphism is stored by its matrices at the grid of all finite
endpoints of source and target: bars are left-closed and right-open, so
every module involved is constant on ``[g_i, g_{i+1})`` and the matrix at
``g_i`` determines the map on that whole stratum.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from . import linalg
from .barc_category import BarcodeMatching, OverlapMatching
from .barcode import Barcode, BarcodeParseError, parse_barcode, shift_barcode
from .intervals import (
    INF,
    Interval,
    as_rational,
    bounds_above,
    bounds_below,
    contains,
    intersection,
    is_delta_trivial,
    overlaps_above,
    shift,
)

__all__ = [
    "DEFAULT_FIELD",
    "PersistenceModule",
    "ModuleMorphism",
    "InadmissibleEntry",
    "GridFamily",
    "dim_at",
    "internal_matrix",
    "from_interval_matrix",
    "zero_morphism",
    "identity_morphism",
    "compose_morphisms",
    "regrid",
    "module_family",
    "kernel_family",
    "image_family",
    "cokernel_family",
    "rank_function",
    "barcode_from_ranks",
    "kernel_module",
    "image_module",
    "cokernel_module",
    "is_delta_trivial_module",
    "canonical_injection_sub",
    "canonical_injection_quotient",
    "induced_matching",
    "shift_module",
    "shift_morphism",
    "module_interleaving_failure",
    "check_module_interleaving",
    "build_interleaving_from_matching",
    "parse_morphism",
    "format_morphism",
    "load_morphism",
]

DEFAULT_FIELD = 2


@dataclass(frozen=True)
class PersistenceModule:
    """Direct sum of interval modules ``C^[a,b)``, ``a`` finite, ``b`` finite or ``inf``."""

    bars: Barcode

    def __post_init__(self):
        if not isinstance(self.bars, Barcode):
            object.__setattr__(self, "bars", Barcode(tuple(self.bars)))
        for k, iv in self.bars:
            if not (iv.lo_closed and not iv.hi_closed and iv.lo != -INF and iv.lo < iv.hi):
                raise ValueError(f"bar {k} {iv} is not of the form [a,b) with a finite")

    @classmethod
    def from_intervals(cls, intervals, prefix: str = "b") -> "PersistenceModule":
        return cls(Barcode.from_intervals(intervals, prefix))

    def endpoints(self) -> set:
        out = set()
        for iv in self.bars.intervals:
            out.add(iv.lo)
            if iv.hi != INF:
                out.add(iv.hi)
        return out

    def alive(self, t) -> list[str]:
        """Indices of bars alive at ``t``, in barcode order (the basis of ``M_t``)."""
        return [k for k, iv in self.bars if contains(iv, t)]


def dim_at(M: PersistenceModule, t) -> int:
    return len(M.alive(as_rational(t)))


def internal_matrix(M: PersistenceModule, s, t) -> np.ndarray:
    """0/1 matrix of ``M_s -> M_t`` in the bar bases."""
    s, t = as_rational(s), as_rational(t)
    if s > t:
        raise ValueError("internal_matrix needs s <= t")
    cols, rows = M.alive(s), M.alive(t)
    A = linalg.zeros(len(rows), len(cols))
    pos = {k: r for r, k in enumerate(rows)}
    for c, k in enumerate(cols):
        if k in pos:
            A[pos[k], c] = 1
    return A


class InadmissibleEntry(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ModuleMorphism:
    """A morphism ``source -> target`` given by one matrix per grid value.

    ``matrices[i]`` has shape ``dim target_{g_i} x dim source_{g_i}``.
    Below the first grid value both modules vanish.
    """

    source: PersistenceModule
    target: PersistenceModule
    grid: tuple
    matrices: tuple
    p: int = DEFAULT_FIELD

    def __post_init__(self):
        grid = tuple(sorted({as_rational(g) for g in self.grid}))
        object.__setattr__(self, "grid", grid)
        if not linalg.is_prime(self.p):
            raise ValueError(f"field characteristic {self.p} is not prime")
        missing = (self.source.endpoints() | self.target.endpoints()) - set(grid)
        if missing:
            raise ValueError(f"grid misses endpoints {sorted(missing)}")
        if len(self.matrices) != len(grid):
            raise ValueError("one matrix per grid value required")
        mats = []
        for t, A in zip(grid, self.matrices):
            A = np.asarray(A, dtype=object).reshape(dim_at(self.target, t), dim_at(self.source, t))
            mats.append(A % self.p if A.size else A)
        object.__setattr__(self, "matrices", tuple(mats))
        bad = self.commutation_failure()
        if bad is not None:
            raise ValueError(f"square between grid values {bad} does not commute")

    def commutation_failure(self):
        p = self.p
        for i in range(len(self.grid) - 1):
            s, t = self.grid[i], self.grid[i + 1]
            lhs = linalg.matmul(internal_matrix(self.target, s, t), self.matrices[i], p)
            rhs = linalg.matmul(self.matrices[i + 1], internal_matrix(self.source, s, t), p)
            if not np.array_equal(lhs, rhs):
                return (s, t)
        return None

    def at(self, t) -> np.ndarray:
        """The component ``f_t`` for any rational ``t``."""
        t = as_rational(t)
        i = bisect.bisect_right(self.grid, t) - 1
        if i < 0:
            return linalg.zeros(dim_at(self.target, t), dim_at(self.source, t))
        return self.matrices[i]


def _overlap_reason(I: Interval, J: Interval) -> str:
    if intersection(I, J) is None:
        return f"{I} and {J} are disjoint"
    if not bounds_above(I, J):
        return f"{I} does not bound {J} above"
    if not bounds_below(J, I):
        return f"{J} does not bound {I} below"
    return "ok"


def _module_grid(*modules, extra=()) -> tuple:
    vals = set(as_rational(x) for x in extra)
    for M in modules:
        vals |= M.endpoints()
    return tuple(sorted(vals))


def from_interval_matrix(M: PersistenceModule, N: PersistenceModule, entries, p: int = DEFAULT_FIELD,
                         grid: Iterable = ()) -> ModuleMorphism:
    """Morphism whose component ``C^{I_j} -> C^{J_i}`` is the given scalar.

    ``entries`` holds ``(target index, source index, scalar)`` triples; a
    nonzero scalar is only allowed when ``I_j`` overlaps ``J_i`` above.
    """
    coeff = {}
    for i, j, c in entries:
        i, j, c = str(i), str(j), int(c) % p
        if i not in N.bars:
            raise InadmissibleEntry(f"unknown target bar {i!r}")
        if j not in M.bars:
            raise InadmissibleEntry(f"unknown source bar {j!r}")
        if c and not overlaps_above(M.bars[j], N.bars[i]):
            raise InadmissibleEntry(
                f"entry ({i}, {j}) is inadmissible: {_overlap_reason(M.bars[j], N.bars[i])}"
            )
        coeff[(i, j)] = c
    g = _module_grid(M, N, extra=grid)
    mats = []
    for t in g:
        rows, cols = N.alive(t), M.alive(t)
        A = linalg.zeros(len(rows), len(cols))
        for r, i in enumerate(rows):
            for c, j in enumerate(cols):
                A[r, c] = coeff.get((i, j), 0)
        mats.append(A)
    return ModuleMorphism(M, N, g, tuple(mats), p)


def zero_morphism(M, N, p: int = DEFAULT_FIELD) -> ModuleMorphism:
    return from_interval_matrix(M, N, (), p)


def identity_morphism(M, p: int = DEFAULT_FIELD) -> ModuleMorphism:
    return from_interval_matrix(M, M, [(k, k, 1) for k in M.bars.indices], p)


def regrid(f: ModuleMorphism, grid: Iterable) -> ModuleMorphism:
    g = tuple(sorted(set(f.grid) | {as_rational(x) for x in grid}))
    return ModuleMorphism(f.source, f.target, g, tuple(f.at(t) for t in g), f.p)


def compose_morphisms(g: ModuleMorphism, f: ModuleMorphism) -> ModuleMorphism:
    """Pointwise product ``g ∘ f``."""
    if f.target != g.source or f.p != g.p:
        raise ValueError("morphisms are not composable")
    grid = tuple(sorted(set(f.grid) | set(g.grid)))
    mats = tuple(linalg.matmul(g.at(t), f.at(t), f.p) for t in grid)
    return ModuleMorphism(f.source, g.target, grid, mats, f.p)


# -- grid families and ranks ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GridFamily:
    """Vector spaces ``dims[i]`` at ``grid[i]`` with ``maps[i]: V_i -> V_{i+1}``."""

    grid: tuple
    dims: tuple
    maps: tuple
    p: int = DEFAULT_FIELD


def module_family(M: PersistenceModule, grid: Optional[Sequence] = None, p: int = DEFAULT_FIELD) -> GridFamily:
    g = tuple(grid) if grid is not None else _module_grid(M)
    return GridFamily(
        g,
        tuple(dim_at(M, t) for t in g),
        tuple(internal_matrix(M, s, t) for s, t in zip(g, g[1:])),
        p,
    )


def kernel_family(f: ModuleMorphism) -> GridFamily:
    p, g = f.p, f.grid
    bases = [linalg.nullspace(A, p) for A in f.matrices]
    maps = []
    for i in range(len(g) - 1):
        moved = linalg.matmul(internal_matrix(f.source, g[i], g[i + 1]), bases[i], p)
        maps.append(linalg.solve(bases[i + 1], moved, p))
    return GridFamily(g, tuple(B.shape[1] for B in bases), tuple(maps), p)


def image_family(f: ModuleMorphism) -> GridFamily:
    p, g = f.p, f.grid
    bases = [linalg.column_basis(A, p) for A in f.matrices]
    maps = []
    for i in range(len(g) - 1):
        moved = linalg.matmul(internal_matrix(f.target, g[i], g[i + 1]), bases[i], p)
        maps.append(linalg.solve(bases[i + 1], moved, p))
    return GridFamily(g, tuple(B.shape[1] for B in bases), tuple(maps), p)


def cokernel_family(f: ModuleMorphism) -> GridFamily:
    p, g = f.p, f.grid
    comps, projs = [], []
    for A in f.matrices:
        B = linalg.column_basis(A, p)
        E = linalg.complement_basis(B, p)
        full = np.hstack([B, E])
        coords = linalg.solve(full, linalg.eye(full.shape[0]), p)
        comps.append(E)
        projs.append(coords[B.shape[1]:, :])
    maps = []
    for i in range(len(g) - 1):
        moved = linalg.matmul(internal_matrix(f.target, g[i], g[i + 1]), comps[i], p)
        maps.append(linalg.matmul(projs[i + 1], moved, p))
    return GridFamily(g, tuple(E.shape[1] for E in comps), tuple(maps), p)


def rank_function(fam: GridFamily) -> list[list[Optional[int]]]:
    """``r[i][j]`` = rank of ``V_i -> V_j`` for ``i <= j`` (``None`` below the diagonal)."""
    n = len(fam.grid)
    r = [[None] * n for _ in range(n)]
    for i in range(n):
        r[i][i] = fam.dims[i]
        A = linalg.eye(fam.dims[i])
        for j in range(i + 1, n):
            A = linalg.matmul(fam.maps[j - 1], A, fam.p)
            r[i][j] = linalg.rank(A, fam.p)
    return r


def barcode_from_ranks(r, grid, prefix: str = "b") -> Barcode:
    """Bars ``[g_i, g_{j+1})`` by inclusion-exclusion; bars alive at the last grid value run to ``inf``."""
    n = len(grid)

    def R(i, j):
        if i < 0 or j >= n:
            return 0
        return r[i][j]

    entries = []
    for i in range(n):
        for j in range(i, n):
            mult = R(i, j) - R(i - 1, j) - R(i, j + 1) + R(i - 1, j + 1)
            assert mult >= 0, f"negative multiplicity {mult} at ({i}, {j})"
            hi = grid[j + 1] if j + 1 < n else INF
            for _ in range(mult):
                entries.append((f"{prefix}{len(entries)}", Interval(grid[i], hi, True, False)))
    return Barcode(tuple(entries))


def _module_of(fam: GridFamily, prefix: str) -> PersistenceModule:
    return PersistenceModule(barcode_from_ranks(rank_function(fam), fam.grid, prefix))


def kernel_module(f: ModuleMorphism) -> PersistenceModule:
    return _module_of(kernel_family(f), "k")


def image_module(f: ModuleMorphism) -> PersistenceModule:
    return _module_of(image_family(f), "m")


def cokernel_module(f: ModuleMorphism) -> PersistenceModule:
    return _module_of(cokernel_family(f), "q")


def is_delta_trivial_module(M: PersistenceModule, delta) -> bool:
    return all(is_delta_trivial(iv, delta) for iv in M.bars.intervals)


# -- induced matchings -----------------------------------------------------------------

def _grouped(bc: Barcode, key, order):
    groups = {}
    for pos, (k, iv) in enumerate(bc):
        groups.setdefault(key(iv), []).append((order(iv), pos, k))
    return {g: [k for *_, k in sorted(items)] for g, items in groups.items()}


def canonical_injection_sub(sub: Barcode, ambient: Barcode) -> dict:
    """Bars of a submodule to bars of the ambient module.

    Bars sharing a right endpoint are paired longest-first; each sub bar
    lands on a bar with the same right endpoint reaching at least as far
    down.
    """
    S = _grouped(sub, lambda iv: iv.hi, lambda iv: iv.lo)
    A = _grouped(ambient, lambda iv: iv.hi, lambda iv: iv.lo)
    out = {}
    for b, ks in S.items():
        cands = A.get(b, [])
        assert len(ks) <= len(cands), f"submodule has too many bars ending at {b}"
        for k, c in zip(ks, cands):
            assert ambient[c].lo <= sub[k].lo
            out[k] = c
    return out


def canonical_injection_quotient(quot: Barcode, ambient: Barcode) -> dict:
    """Bars of a quotient to bars of the ambient module, grouped by left endpoint, longest-first."""
    Q = _grouped(quot, lambda iv: iv.lo, lambda iv: _neg(iv.hi))
    A = _grouped(ambient, lambda iv: iv.lo, lambda iv: _neg(iv.hi))
    out = {}
    for a, ks in Q.items():
        cands = A.get(a, [])
        assert len(ks) <= len(cands), f"quotient has too many bars starting at {a}"
        for k, c in zip(ks, cands):
            assert quot[k].hi <= ambient[c].hi
            out[k] = c
    return out


def _neg(x):
    return -x


def induced_matching(f: ModuleMorphism) -> OverlapMatching:
    """The matching ``B(M) -> B(N)`` through the barcode of ``im f``."""
    im = image_module(f).bars
    to_source = canonical_injection_quotient(im, f.source.bars)
    to_target = canonical_injection_sub(im, f.target.bars)
    pairs = frozenset((to_source[k], to_target[k]) for k in im.indices)
    return OverlapMatching(f.source.bars, f.target.bars, pairs)


# -- shifts and interleavings ----------------------------------------------------------

def shift_module(M: PersistenceModule, delta) -> PersistenceModule:
    return PersistenceModule(shift_barcode(M.bars, delta))


def shift_morphism(f: ModuleMorphism, delta) -> ModuleMorphism:
    delta = as_rational(delta)
    if delta < 0:
        raise ValueError("delta must be >= 0")
    return ModuleMorphism(
        shift_module(f.source, delta), shift_module(f.target, delta),
        tuple(t - delta for t in f.grid), f.matrices, f.p,
    )


def module_interleaving_failure(M, N, delta, f: ModuleMorphism, g: ModuleMorphism) -> Optional[str]:
    """First violated interleaving equation as text, or ``None``."""
    delta = as_rational(delta)
    if f.source != M or f.target != shift_module(N, delta):
        raise ValueError("f must go from M to N(delta)")
    if g.source != N or g.target != shift_module(M, delta):
        raise ValueError("g must go from N to M(delta)")
    if f.p != g.p:
        raise ValueError("f and g live over different fields")
    p = f.p
    ends = M.endpoints() | N.endpoints()
    ts = sorted({e - k * delta for e in ends for k in (0, 1, 2)})
    for X, Y, u, v, name in ((M, N, f, g, "g f"), (N, M, g, f, "f g")):
        for t in ts:
            lhs = linalg.matmul(v.at(t + delta), u.at(t), p)
            rhs = internal_matrix(X, t, t + 2 * delta)
            if not np.array_equal(lhs, rhs):
                return f"{name} differs from the internal 2delta map at t = {t}"
    return None


def check_module_interleaving(M, N, delta, f, g) -> bool:
    return module_interleaving_failure(M, N, delta, f, g) is None


def build_interleaving_from_matching(M: PersistenceModule, N: PersistenceModule, sigma: BarcodeMatching,
                                     delta, p: int = DEFAULT_FIELD):
    """Interleaving ``(f, g)`` from a delta-matching: matched bars map by 1, others by 0."""
    from .interleave import is_delta_matching

    delta = as_rational(delta)
    if sigma.source != M.bars or sigma.target != N.bars:
        raise ValueError("sigma must match the barcodes of M and N")
    if not is_delta_matching(sigma, delta):
        raise ValueError("sigma is not a delta-matching")
    f_entries, g_entries = [], []
    for a, b in sigma.sorted_pairs():
        I, J = M.bars[a], N.bars[b]
        if overlaps_above(I, shift(J, delta)):
            f_entries.append((b, a, 1))
        if overlaps_above(J, shift(I, delta)):
            g_entries.append((a, b, 1))
    f = from_interval_matrix(M, shift_module(N, delta), f_entries, p)
    g = from_interval_matrix(N, shift_module(M, delta), g_entries, p)
    return f, g


# -- morphism files --------------------------------------------------------------------

def parse_morphism(text: str, path: str | None = None, p: int | None = None):
    """Parse ``[source]``/``[target]``/``[matrix]`` sections.

    Returns ``(M, N, entries, p)``; a ``field:`` header overrides the
    default characteristic, and an explicit ``p`` argument overrides both.
    """
    sections = {"source": [], "target": [], "matrix": []}
    current = None
    field_p = DEFAULT_FIELD
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("[") and line.endswith("]") and line[1:-1] in sections:
            current = line[1:-1]
            continue
        if current is None:
            if not line or line.startswith("#"):
                continue
            key, sep, val = line.partition(":")
            if sep and key.strip() == "field":
                try:
                    field_p = int(val)
                except ValueError:
                    raise BarcodeParseError(f"bad field {val.strip()!r}", lineno, path) from None
                continue
            raise BarcodeParseError(f"unexpected line {line!r} before any section", lineno, path)
        sections[current].append((lineno, raw))

    def block(name):
        lines = sections[name]
        text = "\n".join(raw for _, raw in lines)
        try:
            bc = parse_barcode(text)
        except BarcodeParseError as exc:
            lineno = lines[exc.line - 1][0] if exc.line else None
            msg = str(exc).split(": ", 1)[-1]
            raise BarcodeParseError(msg, lineno, path) from None
        try:
            return PersistenceModule(bc)
        except ValueError as exc:
            raise BarcodeParseError(str(exc), lines[0][0] if lines else None, path) from None

    M, N = block("source"), block("target")
    entries = []
    for lineno, raw in sections["matrix"]:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise BarcodeParseError(f"matrix line needs '<target> <source> <scalar>': {line!r}", lineno, path)
        try:
            entries.append((parts[0], parts[1], int(parts[2])))
        except ValueError:
            raise BarcodeParseError(f"bad scalar {parts[2]!r}", lineno, path) from None
    return M, N, entries, (p if p is not None else field_p)


def format_morphism(M: PersistenceModule, N: PersistenceModule, entries, p: int = DEFAULT_FIELD) -> str:
    from .barcode import format_barcode

    out = [f"field: {p}", "[source]", format_barcode(M.bars).rstrip("\n"),
           "[target]", format_barcode(N.bars).rstrip("\n"), "[matrix]"]
    out += [f"{i} {j} {c}" for i, j, c in entries]
    return "\n".join(line for line in out if line != "") + "\n"


def load_morphism(path, p: int | None = None, delta=None) -> ModuleMorphism:
    """Read a morphism file; with ``delta`` the target is read as ``N(delta)``."""
    with open(path, encoding="utf-8") as fh:
        M, N, entries, p = parse_morphism(fh.read(), path=str(path), p=p)
    if delta is not None:
        N = shift_module(N, delta)
    return from_interval_matrix(M, N, entries, p)
