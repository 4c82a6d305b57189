"""Barcodes: finite indexed multisets of intervals, plus the text file format."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .intervals import Interval, as_rational, parse_interval, shift, translate

__all__ = [
    "Barcode",
    "BarcodeParseError",
    "multiplicity",
    "reindexes",
    "shift_barcode",
    "translate_barcode",
    "parse_barcode",
    "format_barcode",
    "load_barcode",
]


class BarcodeParseError(ValueError):
    """Raised on malformed barcode text; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line = line
        self.path = path


@dataclass(frozen=True)
class Barcode:
    """A finite barcode.

    ``entries`` is a tuple of ``(index, interval)`` pairs.  Indices are
    strings and must be pairwise distinct; they play the role of the
    indexing set of a multiset representation.
    """

    entries: tuple[tuple[str, Interval], ...] = ()

    def __post_init__(self):
        entries = tuple((str(k), iv) for k, iv in self.entries)
        seen = set()
        for k, iv in entries:
            if not isinstance(iv, Interval):
                raise TypeError(f"entry {k!r} is not an Interval")
            if k in seen:
                raise ValueError(f"duplicate barcode index {k!r}")
            seen.add(k)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_lookup", dict(entries))

    @classmethod
    def from_intervals(cls, intervals: Iterable[Union[Interval, str]], prefix: str = "b") -> "Barcode":
        """Index intervals as ``b0, b1, ...``; strings are parsed."""
        ivs = [parse_interval(iv) if isinstance(iv, str) else iv for iv in intervals]
        return cls(tuple((f"{prefix}{n}", iv) for n, iv in enumerate(ivs)))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[str, Interval]]:
        return iter(self.entries)

    def __getitem__(self, index: str) -> Interval:
        return self._lookup[index]

    def __contains__(self, index) -> bool:
        return index in self._lookup

    @property
    def indices(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.entries)

    @property
    def intervals(self) -> tuple[Interval, ...]:
        return tuple(iv for _, iv in self.entries)

    def interval_counts(self) -> Counter:
        return Counter(self.intervals)

    def sorted(self) -> "Barcode":
        """Same barcode with entries ordered by interval, then index."""
        return Barcode(tuple(sorted(self.entries, key=lambda e: (e[1].sort_key(), e[0]))))

    def __str__(self) -> str:
        return "{" + ", ".join(str(iv) for _, iv in self.entries) + "}"


def multiplicity(C: Barcode, I: Interval) -> int:
    return sum(1 for iv in C.intervals if iv == I)


def reindexes(C: Barcode, D: Barcode) -> bool:
    """True iff some base-preserving bijection relates the entries of C and D."""
    return C.interval_counts() == D.interval_counts()


def shift_barcode(C: Barcode, delta) -> Barcode:
    delta = as_rational(delta)
    return Barcode(tuple((k, shift(iv, delta)) for k, iv in C.entries))


def translate_barcode(C: Barcode, a) -> Barcode:
    return Barcode(tuple((k, translate(iv, a)) for k, iv in C.entries))


def parse_barcode(text: str, path: str | None = None) -> Barcode:
    """Parse the line format ``<index>: <interval>``.

    ``#`` starts a comment line; blank lines are skipped; a missing index
    becomes ``i<line-number>``.
    """
    entries = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" in line:
            index, _, rest = line.partition(":")
            index = index.strip()
            if not index or any(c.isspace() for c in index):
                raise BarcodeParseError(f"bad index {index!r}", lineno, path)
        else:
            index, rest = f"i{lineno}", line
        try:
            iv = parse_interval(rest)
        except ValueError as exc:
            raise BarcodeParseError(str(exc), lineno, path) from None
        if index in seen:
            raise BarcodeParseError(f"duplicate index {index!r}", lineno, path)
        seen.add(index)
        entries.append((index, iv))
    return Barcode(tuple(entries))


def format_barcode(C: Barcode) -> str:
    return "".join(f"{k}: {iv}\n" for k, iv in C.entries)


def load_barcode(path) -> Barcode:
    with open(path, encoding="utf-8") as fh:
        return parse_barcode(fh.read(), path=str(path))
