"""Sets with matchings, and finitely presented functors from the real line.

A :class:`StratifiedDiagram` with critical values ``c_0 < ... < c_{k-1}``
stores one finite set per stratum, in the order

    (-inf, c_0), {c_0}, (c_0, c_1), ..., {c_{k-1}}, (c_{k-1}, inf)

so even positions are open segments and odd positions are points.  Inside
an open segment all internal maps are identities; ``links[i]`` is the
matching from stratum ``i`` to stratum ``i + 1``.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from networkx.utils import UnionFind

from .barc_category import OverlapMatching
from .barcode import Barcode
from .intervals import INF, as_rational, contains, format_ext_real, make_interval

__all__ = [
    "Matching",
    "compose_matchings",
    "generalized_inverse",
    "identity_matching",
    "StratifiedDiagram",
    "NatTrans",
    "stratum_of",
    "stratum_samples",
    "evaluate",
    "internal",
    "refine",
    "functor_E",
    "functor_E_mor",
    "functor_F",
    "functor_F_mor",
    "pointwise_kernel",
    "pointwise_cokernel",
    "is_delta_trivial_diagram",
    "is_natural_isomorphism",
    "unit_isomorphism",
    "format_diagram",
    "parse_diagram",
]


@dataclass(frozen=True)
class Matching:
    """Partial injection between two finite sets of tokens."""

    source: frozenset
    target: frozenset
    pairs: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "source", frozenset(self.source))
        object.__setattr__(self, "target", frozenset(self.target))
        object.__setattr__(self, "pairs", frozenset(self.pairs))
        fwd, bwd = {}, {}
        for x, y in self.pairs:
            if x not in self.source or y not in self.target:
                raise ValueError(f"pair {(x, y)!r} outside source/target")
            if x in fwd or y in bwd:
                raise ValueError(f"pair {(x, y)!r} breaks injectivity")
            fwd[x], bwd[y] = y, x
        object.__setattr__(self, "_fwd", fwd)
        object.__setattr__(self, "_bwd", bwd)

    def __call__(self, x):
        return self._fwd.get(x)

    def preimage(self, y):
        return self._bwd.get(y)

    @property
    def domain(self) -> frozenset:
        return frozenset(self._fwd)

    @property
    def codomain(self) -> frozenset:
        return frozenset(self._bwd)


def identity_matching(S: Iterable) -> Matching:
    S = frozenset(S)
    return Matching(S, S, frozenset((x, x) for x in S))


def compose_matchings(tau: Matching, sigma: Matching) -> Matching:
    """``tau ∘ sigma`` as a composite of relations."""
    if sigma.target != tau.source:
        raise ValueError("target of sigma differs from source of tau")
    pairs = {(x, tau(y)) for x, y in sigma.pairs if tau(y) is not None}
    return Matching(sigma.source, tau.target, frozenset(pairs))


def generalized_inverse(sigma: Matching) -> Matching:
    return Matching(sigma.target, sigma.source, frozenset((y, x) for x, y in sigma.pairs))


@dataclass(frozen=True)
class StratifiedDiagram:
    critical: tuple
    strata: tuple
    links: tuple

    def __post_init__(self):
        crit = tuple(as_rational(c) for c in self.critical)
        if any(a >= b for a, b in zip(crit, crit[1:])):
            raise ValueError("critical values must be strictly increasing")
        strata = tuple(frozenset(s) for s in self.strata)
        if len(strata) != 2 * len(crit) + 1:
            raise ValueError(f"expected {2 * len(crit) + 1} strata, got {len(strata)}")
        links = tuple(self.links)
        if len(links) != 2 * len(crit):
            raise ValueError(f"expected {2 * len(crit)} links, got {len(links)}")
        for i, m in enumerate(links):
            if m.source != strata[i] or m.target != strata[i + 1]:
                raise ValueError(f"link {i} does not connect strata {i} and {i + 1}")
        object.__setattr__(self, "critical", crit)
        object.__setattr__(self, "strata", strata)
        object.__setattr__(self, "links", links)

    @classmethod
    def constant(cls, critical, elements=()) -> "StratifiedDiagram":
        """Diagram with the same set on every stratum and identity links."""
        n = 2 * len(critical) + 1
        S = frozenset(elements)
        return cls(tuple(critical), (S,) * n, (identity_matching(S),) * (n - 1))

    def __len__(self) -> int:
        return len(self.strata)


def stratum_of(critical, t) -> int:
    t = as_rational(t)
    i = bisect.bisect_left(critical, t)
    if i < len(critical) and critical[i] == t:
        return 2 * i + 1
    return 2 * i


def stratum_samples(critical) -> list[Fraction]:
    """One representative real number per stratum."""
    crit = list(critical)
    if not crit:
        return [Fraction(0)]
    out = [crit[0] - 1]
    for i, c in enumerate(crit):
        out.append(c)
        out.append((c + crit[i + 1]) / 2 if i + 1 < len(crit) else c + 1)
    return out


def evaluate(D: StratifiedDiagram, t) -> frozenset:
    return D.strata[stratum_of(D.critical, t)]


def _link_path(D: StratifiedDiagram, i: int, j: int) -> Matching:
    m = identity_matching(D.strata[i])
    for k in range(i, j):
        m = compose_matchings(D.links[k], m)
    return m


def internal(D: StratifiedDiagram, s, t) -> Matching:
    """The internal matching ``D_s -> D_t`` for ``s <= t``."""
    s, t = as_rational(s), as_rational(t)
    if s > t:
        raise ValueError("internal(D, s, t) needs s <= t")
    return _link_path(D, stratum_of(D.critical, s), stratum_of(D.critical, t))


def refine(D: StratifiedDiagram, extra: Iterable) -> StratifiedDiagram:
    """Insert additional critical values without changing the functor."""
    crit = list(D.critical)
    strata = list(D.strata)
    links = list(D.links)
    for v in sorted({as_rational(x) for x in extra}):
        pos = stratum_of(crit, v)
        if pos % 2 == 1:
            continue
        S = strata[pos]
        ident = identity_matching(S)
        strata[pos:pos + 1] = [S, S, S]
        links[pos:pos] = [ident, ident]
        crit.insert(pos // 2, v)
    return StratifiedDiagram(tuple(crit), tuple(strata), tuple(links))


@dataclass(frozen=True)
class NatTrans:
    """Natural transformation between diagrams on a shared grid."""

    source: StratifiedDiagram
    target: StratifiedDiagram
    components: tuple

    def __post_init__(self):
        if self.source.critical != self.target.critical:
            raise ValueError("natural transformation needs a shared critical grid")
        comps = tuple(self.components)
        if len(comps) != len(self.source.strata):
            raise ValueError("one component per stratum required")
        for i, c in enumerate(comps):
            if c.source != self.source.strata[i] or c.target != self.target.strata[i]:
                raise ValueError(f"component {i} has wrong source/target")
        object.__setattr__(self, "components", comps)
        bad = self.naturality_failure()
        if bad is not None:
            raise ValueError(f"naturality fails between strata {bad} and {bad + 1}")

    def naturality_failure(self):
        for i in range(len(self.source.links)):
            lhs = compose_matchings(self.components[i + 1], self.source.links[i])
            rhs = compose_matchings(self.target.links[i], self.components[i])
            if lhs != rhs:
                return i
        return None


# -- the functor E --------------------------------------------------------------

def _finite_endpoints(*barcodes: Barcode) -> list:
    vals = set()
    for C in barcodes:
        for iv in C.intervals:
            for v in (iv.lo, iv.hi):
                if v not in (INF, -INF):
                    vals.add(v)
    return sorted(vals)


def functor_E(C: Barcode, grid: Iterable | None = None) -> StratifiedDiagram:
    """Diagram whose value at ``t`` is the set of indices of intervals containing ``t``.

    The critical grid is the set of finite endpoints, enlarged by ``grid``
    if given.
    """
    crit = sorted(set(_finite_endpoints(C)) | {as_rational(g) for g in (grid or ())})
    strata = [frozenset(k for k, iv in C if contains(iv, t)) for t in stratum_samples(crit)]
    links = [
        Matching(a, b, frozenset((k, k) for k in a & b))
        for a, b in zip(strata, strata[1:])
    ]
    return StratifiedDiagram(tuple(crit), tuple(strata), tuple(links))


def functor_E_mor(sigma: OverlapMatching, grid: Iterable | None = None) -> NatTrans:
    crit = sorted(
        set(_finite_endpoints(sigma.source, sigma.target))
        | {as_rational(g) for g in (grid or ())}
    )
    src = functor_E(sigma.source, crit)
    tgt = functor_E(sigma.target, crit)
    comps = []
    for i, t in enumerate(stratum_samples(crit)):
        pairs = frozenset(
            (a, b)
            for a, b in sigma.pairs
            if contains(sigma.source[a], t) and contains(sigma.target[b], t)
        )
        comps.append(Matching(src.strata[i], tgt.strata[i], pairs))
    return NatTrans(src, tgt, tuple(comps))


# -- the functor F --------------------------------------------------------------

def _classes(D: StratifiedDiagram):
    """Chains of stratum elements glued along links, as sorted lists of (pos, token)."""
    nodes = [(pos, x) for pos, S in enumerate(D.strata) for x in sorted(S, key=str)]
    uf = UnionFind(nodes)
    for i, link in enumerate(D.links):
        for x, y in link.pairs:
            uf.union((i, x), (i + 1, y))
    groups = {}
    for node in nodes:
        groups.setdefault(uf[node], []).append(node)
    classes = [sorted(g, key=lambda n: n[0]) for g in groups.values()]
    classes.sort(key=lambda g: (g[0][0], str(g[0][1])))
    return classes


def _class_interval(D: StratifiedDiagram, cls):
    positions = [p for p, _ in cls]
    p0, p1 = positions[0], positions[-1]
    assert positions == list(range(p0, p1 + 1)), "class does not span consecutive strata"
    crit = D.critical
    if p0 % 2 == 1:
        lo, lo_closed = crit[(p0 - 1) // 2], True
    elif p0 == 0:
        lo, lo_closed = -INF, False
    else:
        lo, lo_closed = crit[p0 // 2 - 1], False
    if p1 % 2 == 1:
        hi, hi_closed = crit[(p1 - 1) // 2], True
    elif p1 == 2 * len(crit):
        hi, hi_closed = INF, False
    else:
        hi, hi_closed = crit[p1 // 2], False
    iv = make_interval(lo, lo_closed, hi, hi_closed)
    assert iv is not None
    return iv


def _class_names(classes) -> list[str]:
    firsts = [str(cls[0][1]) for cls in classes]
    if len(set(firsts)) == len(firsts):
        return firsts
    return [f"{cls[0][1]}@{cls[0][0]}" for cls in classes]


def _functor_F_with_classes(D: StratifiedDiagram):
    classes = _classes(D)
    names = _class_names(classes)
    where = {}
    entries = []
    for name, cls in zip(names, classes):
        entries.append((name, _class_interval(D, cls)))
        for node in cls:
            where[node] = name
    return Barcode(tuple(entries)), where


def functor_F(D: StratifiedDiagram) -> Barcode:
    """Barcode of the equivalence classes of stratum elements.

    Each class is named after the token of its lowest element (suffixed
    with ``@<stratum>`` when those tokens collide).
    """
    return _functor_F_with_classes(D)[0]


def functor_F_mor(eta: NatTrans) -> OverlapMatching:
    C, where_c = _functor_F_with_classes(eta.source)
    D, where_d = _functor_F_with_classes(eta.target)
    pairs = set()
    for pos, comp in enumerate(eta.components):
        for x, y in comp.pairs:
            pairs.add((where_c[(pos, x)], where_d[(pos, y)]))
    return OverlapMatching(C, D, frozenset(pairs))


# -- pointwise (co)kernels --------------------------------------------------------

def _restrict(D: StratifiedDiagram, keep) -> StratifiedDiagram:
    strata = tuple(frozenset(s) for s in keep)
    links = tuple(
        Matching(strata[i], strata[i + 1], frozenset(
            (x, y) for x, y in link.pairs if x in strata[i] and y in strata[i + 1]
        ))
        for i, link in enumerate(D.links)
    )
    return StratifiedDiagram(D.critical, strata, links)


def pointwise_kernel(eta: NatTrans) -> tuple[StratifiedDiagram, NatTrans]:
    """Unmatched source elements stratum by stratum, with the inclusion."""
    K = _restrict(eta.source, [S - c.domain for S, c in zip(eta.source.strata, eta.components)])
    incl = NatTrans(K, eta.source, tuple(
        Matching(S, T, frozenset((x, x) for x in S)) for S, T in zip(K.strata, eta.source.strata)
    ))
    return K, incl


def pointwise_cokernel(eta: NatTrans) -> tuple[StratifiedDiagram, NatTrans]:
    Q = _restrict(eta.target, [S - c.codomain for S, c in zip(eta.target.strata, eta.components)])
    proj = NatTrans(eta.target, Q, tuple(
        Matching(T, S, frozenset((x, x) for x in S)) for T, S in zip(eta.target.strata, Q.strata)
    ))
    return Q, proj


def is_delta_trivial_diagram(D: StratifiedDiagram, delta) -> bool:
    """True iff every internal map ``D_t -> D_{t+delta}`` is empty.

    The pair of strata hit by ``(t, t + delta)`` only changes at critical
    values and at critical values minus ``delta``, so it suffices to test
    those points and one point inside each gap between them.
    """
    delta = as_rational(delta)
    if delta < 0:
        raise ValueError("delta must be >= 0")
    breaks = sorted(set(D.critical) | {c - delta for c in D.critical})
    for t in stratum_samples(breaks):
        if internal(D, t, t + delta).pairs:
            return False
    return True


def is_natural_isomorphism(eta: NatTrans) -> bool:
    return all(
        c.domain == c.source and c.codomain == c.target for c in eta.components
    )


def unit_isomorphism(D: StratifiedDiagram) -> NatTrans:
    """The comparison ``D -> E(F(D))`` on D's grid, sending each element to its class."""
    C, where = _functor_F_with_classes(D)
    EFD = functor_E(C, D.critical)
    comps = tuple(
        Matching(S, EFD.strata[pos], frozenset((x, where[(pos, x)]) for x in S))
        for pos, S in enumerate(D.strata)
    )
    return NatTrans(D, EFD, comps)


# -- text format -------------------------------------------------------------------

def format_diagram(D: StratifiedDiagram) -> str:
    """Serialize as ``critical:``, then ``S<i>:`` element lines and ``L<i>:`` link lines."""
    lines = ["critical: " + " ".join(format_ext_real(c) for c in D.critical)]
    for i, S in enumerate(D.strata):
        lines.append(f"S{i}: " + " ".join(sorted(map(str, S))))
    for i, link in enumerate(D.links):
        pairs = sorted((str(x), str(y)) for x, y in link.pairs)
        lines.append(f"L{i}: " + ", ".join(f"{x}->{y}" for x, y in pairs))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def parse_diagram(text: str) -> StratifiedDiagram:
    crit = None
    strata, links = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition(":")
        key, val = key.strip(), val.strip()
        try:
            if not sep:
                raise ValueError("missing ':'")
            if key == "critical":
                crit = tuple(as_rational(v) for v in val.split())
            elif key.startswith("S") and key[1:].isdigit():
                strata[int(key[1:])] = frozenset(val.split())
            elif key.startswith("L") and key[1:].isdigit():
                pairs = []
                for item in filter(None, (p.strip() for p in val.split(","))):
                    x, arrow, y = item.partition("->")
                    if not arrow:
                        raise ValueError(f"bad pair {item!r}")
                    pairs.append((x.strip(), y.strip()))
                links[int(key[1:])] = pairs
            else:
                raise ValueError(f"unrecognized key {key!r}")
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if crit is None:
        raise ValueError("missing 'critical:' line")
    n = 2 * len(crit) + 1
    S = tuple(strata.get(i, frozenset()) for i in range(n))
    L = tuple(Matching(S[i], S[i + 1], frozenset(links.get(i, ()))) for i in range(n - 1))
    return StratifiedDiagram(crit, S, L)
