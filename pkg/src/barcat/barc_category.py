"""The category of barcodes with overlap matchings as morphisms.

A morphism ``C -> D`` is a partial injection on indices such that each
matched source interval overlaps its partner above.  Composition keeps
only the relational composites that still overlap above.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator

from .barcode import Barcode, BarcodeParseError, load_barcode, shift_barcode
from .intervals import (
    INF,
    intersection,
    is_delta_trivial,
    lower_difference,
    overlaps_above,
    threshold_le,
    upper_difference,
)
from .intervals import triviality_threshold as interval_threshold

__all__ = [
    "InvalidMatching",
    "BarcodeMatching",
    "OverlapMatching",
    "identity",
    "compose_overlap",
    "kernel",
    "cokernel",
    "image",
    "is_mono",
    "is_epi",
    "triviality_threshold",
    "is_delta_trivial_barcode",
    "threshold_le",
    "phi",
    "shift_matching",
    "iter_overlap_matchings",
    "parse_matching",
    "format_matching",
    "load_matching",
]


class InvalidMatching(ValueError):
    pass


@dataclass(frozen=True)
class BarcodeMatching:
    """A partial injection between the indices of two barcodes.

    No condition on the intervals is imposed; see :class:`OverlapMatching`.
    """

    source: Barcode
    target: Barcode
    pairs: frozenset = frozenset()

    def __post_init__(self):
        pairs = frozenset((str(a), str(b)) for a, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        fwd, bwd = {}, {}
        for a, b in pairs:
            if a not in self.source:
                raise InvalidMatching(f"unknown source index {a!r}")
            if b not in self.target:
                raise InvalidMatching(f"unknown target index {b!r}")
            if a in fwd:
                raise InvalidMatching(f"source index {a!r} matched twice")
            if b in bwd:
                raise InvalidMatching(f"target index {b!r} matched twice")
            fwd[a], bwd[b] = b, a
        object.__setattr__(self, "_fwd", fwd)
        object.__setattr__(self, "_bwd", bwd)
        self._validate()

    def _validate(self):
        pass

    def __call__(self, a: str):
        """Partner of source index ``a`` or ``None``."""
        return self._fwd.get(a)

    def preimage(self, b: str):
        return self._bwd.get(b)

    def sorted_pairs(self) -> list[tuple[str, str]]:
        return sorted(self.pairs)

    def interval_pairs(self):
        return [(self.source[a], self.target[b]) for a, b in self.sorted_pairs()]

    def __len__(self) -> int:
        return len(self.pairs)

    def then(self, other: "BarcodeMatching") -> "BarcodeMatching":
        """Relational composite ``other ∘ self`` (no overlap filtering)."""
        if self.target != other.source:
            raise InvalidMatching("composition of matchings with mismatched barcodes")
        pairs = {(a, other._fwd[b]) for a, b in self.pairs if b in other._fwd}
        return BarcodeMatching(self.source, other.target, frozenset(pairs))

    def __str__(self) -> str:
        body = ", ".join(f"{self.source[a]} -> {self.target[b]}" for a, b in self.sorted_pairs())
        return "{" + body + "}"


@dataclass(frozen=True)
class OverlapMatching(BarcodeMatching):
    """A morphism of barcodes: matched intervals overlap above."""

    def _validate(self):
        for a, b in self.pairs:
            I, J = self.source[a], self.target[b]
            if not overlaps_above(I, J):
                raise InvalidMatching(f"{a} {I} does not overlap {b} {J} above")

    @classmethod
    def from_matching(cls, m: BarcodeMatching) -> "OverlapMatching":
        return cls(m.source, m.target, m.pairs)


def identity(C: Barcode) -> OverlapMatching:
    return OverlapMatching(C, C, frozenset((k, k) for k in C.indices))


def compose_overlap(tau: OverlapMatching, sigma: OverlapMatching) -> OverlapMatching:
    """``tau ⊛ sigma``: the relational composite with non-overlapping pairs dropped."""
    if sigma.target != tau.source:
        raise InvalidMatching("target of sigma is not the source of tau")
    pairs = set()
    for a, b in sigma.pairs:
        c = tau(b)
        if c is not None and overlaps_above(sigma.source[a], tau.target[c]):
            pairs.add((a, c))
    return OverlapMatching(sigma.source, tau.target, frozenset(pairs))


def kernel(sigma: OverlapMatching) -> tuple[Barcode, OverlapMatching]:
    """Kernel barcode and its inclusion into the source.

    Unmatched intervals pass through unchanged; a matched ``I`` contributes
    the part of ``I`` beyond its partner, if nonempty.  Kernel entries keep
    the index of the interval they come from.
    """
    entries = []
    for k, I in sigma.source:
        b = sigma(k)
        K = I if b is None else upper_difference(I, sigma.target[b])
        if K is not None:
            entries.append((k, K))
    ker = Barcode(tuple(entries))
    return ker, OverlapMatching(ker, sigma.source, frozenset((k, k) for k in ker.indices))


def cokernel(sigma: OverlapMatching) -> tuple[Barcode, OverlapMatching]:
    """Cokernel barcode and the projection from the target onto it."""
    entries = []
    for k, J in sigma.target:
        a = sigma.preimage(k)
        Q = J if a is None else lower_difference(J, sigma.source[a])
        if Q is not None:
            entries.append((k, Q))
    coker = Barcode(tuple(entries))
    return coker, OverlapMatching(sigma.target, coker, frozenset((k, k) for k in coker.indices))


def image(sigma: OverlapMatching) -> tuple[Barcode, OverlapMatching, OverlapMatching]:
    """Epi-mono factorization ``C -> im -> D``; image entries use source indices."""
    entries = []
    mono = []
    for a, b in sigma.sorted_pairs():
        entries.append((a, intersection(sigma.source[a], sigma.target[b])))
        mono.append((a, b))
    im = Barcode(tuple(sorted(entries, key=lambda e: sigma.source.indices.index(e[0]))))
    epi = OverlapMatching(sigma.source, im, frozenset((a, a) for a in im.indices))
    return im, epi, OverlapMatching(im, sigma.target, frozenset(mono))


def is_mono(sigma: OverlapMatching) -> bool:
    return len(kernel(sigma)[0]) == 0


def is_epi(sigma: OverlapMatching) -> bool:
    return len(cokernel(sigma)[0]) == 0


def triviality_threshold(C: Barcode) -> tuple:
    """Infimal ``delta`` making every interval of ``C`` delta-trivial, with attainment."""
    value, attained = 0, True
    for iv in C.intervals:
        v, a = interval_threshold(iv)
        if v > value:
            value, attained = v, a
        elif v == value:
            attained = attained and a
    if value == INF:
        attained = False
    return value, attained


def is_delta_trivial_barcode(C: Barcode, delta) -> bool:
    return all(is_delta_trivial(iv, delta) for iv in C.intervals)


def phi(C: Barcode, delta) -> OverlapMatching:
    """Comparison morphism ``C -> C(delta)`` matching every non-delta-trivial interval to its shift."""
    target = shift_barcode(C, delta)
    pairs = frozenset((k, k) for k, iv in C if not is_delta_trivial(iv, delta))
    return OverlapMatching(C, target, pairs)


def shift_matching(m: BarcodeMatching, delta) -> BarcodeMatching:
    """Transport ``m: C -> D`` to ``C(delta) -> D(delta)``, keeping index pairs."""
    return type(m)(shift_barcode(m.source, delta), shift_barcode(m.target, delta), m.pairs)


def iter_overlap_matchings(C: Barcode, D: Barcode) -> Iterator[OverlapMatching]:
    """All overlap matchings ``C -> D``; exponential, for tiny barcodes only."""
    allowed = {
        a: [b for b, J in D if overlaps_above(I, J)] for a, I in C
    }
    src = list(C.indices)

    def rec(i, used, acc):
        if i == len(src):
            yield OverlapMatching(C, D, frozenset(acc))
            return
        a = src[i]
        yield from rec(i + 1, used, acc)
        for b in allowed[a]:
            if b not in used:
                yield from rec(i + 1, used | {b}, acc + [(a, b)])

    yield from rec(0, frozenset(), [])


# -- matching files -----------------------------------------------------------

def parse_matching(text: str, resolve, path: str | None = None, overlap: bool = True) -> BarcodeMatching:
    """Parse a matching file.

    ``resolve(ref)`` turns the ``source:``/``target:`` references into
    barcodes.  Pair lines read ``<source-index> -> <target-index>``.
    """
    refs = {}
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        # a distance report line may head a witness file
        if not line or line.startswith("#") or line.startswith(("d_B =", "d_I =")):
            continue
        if "->" in line:
            a, _, b = line.partition("->")
            a, b = a.strip(), b.strip()
            if not a or not b:
                raise BarcodeParseError(f"bad pair line {line!r}", lineno, path)
            pairs.append((a, b))
            continue
        key, sep, val = line.partition(":")
        key = key.strip()
        if not sep or key not in ("source", "target"):
            raise BarcodeParseError(f"unrecognized line {line!r}", lineno, path)
        try:
            refs[key] = resolve(val.strip())
        except OSError as exc:
            raise BarcodeParseError(f"cannot read {val.strip()!r}: {exc.strerror}", lineno, path) from None
    for key in ("source", "target"):
        if key not in refs:
            raise BarcodeParseError(f"missing '{key}:' header", None, path)
    cls = OverlapMatching if overlap else BarcodeMatching
    return cls(refs["source"], refs["target"], frozenset(pairs))


def format_matching(m: BarcodeMatching, source_ref: str = "-", target_ref: str = "-") -> str:
    lines = [f"source: {source_ref}", f"target: {target_ref}"]
    lines += [f"{a} -> {b}" for a, b in m.sorted_pairs()]
    return "\n".join(lines) + "\n"


def load_matching(path, overlap: bool = True, loader=None) -> BarcodeMatching:
    """Read a matching file; barcode references are resolved against its directory, then the cwd."""
    base = os.path.dirname(os.path.abspath(path))
    loader = loader or load_barcode

    def resolve(ref):
        # relative to the matching file first, then to the working directory
        local = os.path.join(base, ref)
        bare = ref.rsplit("[", 1)[0] if ref.endswith("]") else ref
        if os.path.isabs(ref) or os.path.exists(os.path.join(base, bare)) or not os.path.exists(bare):
            return loader(local)
        return loader(ref)

    with open(path, encoding="utf-8") as fh:
        return parse_matching(fh.read(), resolve, path=str(path), overlap=overlap)
