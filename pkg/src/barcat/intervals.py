"""Decorated real intervals with exact rational endpoints.

Endpoints are :class:`fractions.Fraction` values or ``±math.inf``.  An
interval carries an open/closed flag on each side; infinite sides are
always open.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

__all__ = [
    "INF",
    "Interval",
    "as_rational",
    "as_ext_real",
    "format_ext_real",
    "make_interval",
    "parse_interval",
    "contains",
    "bounds_above",
    "bounds_below",
    "overlaps_above",
    "intersection",
    "is_subset",
    "shift",
    "translate",
    "thicken",
    "is_delta_trivial",
    "triviality_threshold",
    "threshold_le",
    "upper_difference",
    "lower_difference",
]

INF = math.inf

ExtReal = Union[Fraction, float]
Rational = Union[Fraction, int, str]


def as_rational(x: Rational) -> Fraction:
    """Coerce an int, Fraction or decimal/ratio string to a Fraction."""
    if isinstance(x, float):
        raise TypeError("floating-point values are not accepted; use a string or Fraction")
    return Fraction(x)


def as_ext_real(x) -> ExtReal:
    if isinstance(x, float):
        if x in (INF, -INF):
            return x
        raise TypeError("only ±inf may be given as float")
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "infinity"):
            return INF
        if s in ("-inf", "-infinity"):
            return -INF
    return as_rational(x)


def format_ext_real(x: ExtReal) -> str:
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return str(x)


def _is_finite(x: ExtReal) -> bool:
    return not isinstance(x, float)


@dataclass(frozen=True)
class Interval:
    """A nonempty interval of the real line.

    ``lo``/``hi`` are extended rationals; ``lo_closed``/``hi_closed`` are
    the decorations.  Construction raises ``ValueError`` for empty or
    malformed intervals.
    """

    lo: ExtReal
    hi: ExtReal
    lo_closed: bool = True
    hi_closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", as_ext_real(self.lo))
        object.__setattr__(self, "hi", as_ext_real(self.hi))
        if self.lo == INF or self.hi == -INF:
            raise ValueError(f"bad endpoints {self.lo!r}, {self.hi!r}")
        if self.lo == -INF and self.lo_closed:
            raise ValueError("an infinite endpoint cannot be closed")
        if self.hi == INF and self.hi_closed:
            raise ValueError("an infinite endpoint cannot be closed")
        if not (self.lo < self.hi or (self.lo == self.hi and self.lo_closed and self.hi_closed)):
            raise ValueError(f"empty interval {self._text()}")

    @classmethod
    def closed(cls, lo, hi) -> "Interval":
        return cls(lo, hi, True, True)

    @classmethod
    def open(cls, lo, hi) -> "Interval":
        return cls(lo, hi, False, False)

    @classmethod
    def halfopen(cls, lo, hi) -> "Interval":
        """``[lo, hi)``; an infinite ``hi`` is fine."""
        return cls(lo, hi, True, False)

    @property
    def finite(self) -> bool:
        return _is_finite(self.lo) and _is_finite(self.hi)

    @property
    def length(self) -> ExtReal:
        return self.hi - self.lo

    def sort_key(self):
        return (self.lo, not self.lo_closed, self.hi, self.hi_closed)

    def __contains__(self, t) -> bool:
        return contains(self, t)

    def _text(self) -> str:
        return "{}{},{}{}".format(
            "[" if self.lo_closed else "(",
            format_ext_real(self.lo),
            format_ext_real(self.hi),
            "]" if self.hi_closed else ")",
        )

    def __str__(self) -> str:
        return self._text()

    def __repr__(self) -> str:
        return f"Interval({self._text()})"


def make_interval(lo, lo_closed: bool, hi, hi_closed: bool) -> Optional[Interval]:
    """Build an interval, returning ``None`` when the decorated range is empty."""
    if lo == -INF:
        lo_closed = False
    if hi == INF:
        hi_closed = False
    if lo < hi or (lo == hi and lo_closed and hi_closed and _is_finite(lo)):
        return Interval(lo, hi, lo_closed, hi_closed)
    return None


_INTERVAL_RE = re.compile(r"^\s*([\[\(])\s*([^,\s]+)\s*,\s*([^,\s\]\)]+)\s*([\]\)])\s*$")


def parse_interval(text: str) -> Interval:
    """Parse ``[0,4)``, ``(-inf,3/2]`` and friends."""
    m = _INTERVAL_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse interval {text!r}")
    left, lo, hi, right = m.groups()
    try:
        lo_v, hi_v = as_ext_real(lo), as_ext_real(hi)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad endpoint in {text!r}: {exc}") from None
    return Interval(lo_v, hi_v, left == "[", right == "]")


def contains(I: Interval, t) -> bool:
    above_lo = I.lo < t or (I.lo == t and I.lo_closed)
    below_hi = t < I.hi or (t == I.hi and I.hi_closed)
    return above_lo and below_hi


def bounds_above(I: Interval, J: Interval) -> bool:
    """True iff every point of ``J`` lies at or below some point of ``I``."""
    if J.hi < I.hi:
        return True
    return J.hi == I.hi and (not J.hi_closed or I.hi_closed)


def bounds_below(J: Interval, I: Interval) -> bool:
    """True iff every point of ``I`` lies at or above some point of ``J``."""
    if J.lo < I.lo:
        return True
    return J.lo == I.lo and (J.lo_closed or not I.lo_closed)


def intersection(I: Interval, J: Interval) -> Optional[Interval]:
    if I.lo > J.lo:
        lo, lo_closed = I.lo, I.lo_closed
    elif J.lo > I.lo:
        lo, lo_closed = J.lo, J.lo_closed
    else:
        lo, lo_closed = I.lo, I.lo_closed and J.lo_closed
    if I.hi < J.hi:
        hi, hi_closed = I.hi, I.hi_closed
    elif J.hi < I.hi:
        hi, hi_closed = J.hi, J.hi_closed
    else:
        hi, hi_closed = I.hi, I.hi_closed and J.hi_closed
    return make_interval(lo, lo_closed, hi, hi_closed)


def overlaps_above(I: Interval, J: Interval) -> bool:
    """``I`` meets ``J``, ``I`` bounds ``J`` above and ``J`` bounds ``I`` below."""
    return (
        intersection(I, J) is not None
        and bounds_above(I, J)
        and bounds_below(J, I)
    )


def is_subset(I: Interval, J: Interval) -> bool:
    """``I ⊆ J``."""
    return bounds_below(J, I) and bounds_above(J, I)


def translate(I: Interval, a) -> Interval:
    """Move both endpoints by ``a`` (any sign)."""
    a = as_rational(a)
    return Interval(I.lo + a, I.hi + a, I.lo_closed, I.hi_closed)


def shift(I: Interval, delta) -> Interval:
    """``{t : t + delta ∈ I}``, i.e. ``I`` moved down by ``delta >= 0``."""
    delta = as_rational(delta)
    if delta < 0:
        raise ValueError("shift requires delta >= 0")
    return translate(I, -delta)


def thicken(I: Interval, delta) -> Interval:
    """All points within distance ``delta`` of ``I``."""
    delta = as_rational(delta)
    if delta < 0:
        raise ValueError("thicken requires delta >= 0")
    return Interval(I.lo - delta, I.hi + delta, I.lo_closed, I.hi_closed)


def is_delta_trivial(I: Interval, delta) -> bool:
    """True iff no ``t`` has both ``t`` and ``t + delta`` in ``I``."""
    delta = as_rational(delta)
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if not I.finite:
        return False
    length = I.hi - I.lo
    if length < delta:
        return True
    return length == delta and not (I.lo_closed and I.hi_closed)


def triviality_threshold(I: Interval) -> tuple[ExtReal, bool]:
    """``(value, attained)`` with ``I`` delta-trivial iff ``delta >= value``
    (attained) or ``delta > value`` (not attained)."""
    if not I.finite:
        return INF, False
    return I.hi - I.lo, not (I.lo_closed and I.hi_closed)


def threshold_le(a: tuple[ExtReal, bool], b: tuple[ExtReal, bool]) -> bool:
    """Order on thresholds: ``a <= b`` iff everything trivial at ``b`` is trivial at ``a``."""
    (va, aa), (vb, ab) = a, b
    if va != vb:
        return va < vb
    return aa or not ab


def upper_difference(I: Interval, J: Interval) -> Optional[Interval]:
    """``I \\ J`` for ``I`` overlapping ``J`` above: the part of ``I`` past ``J``."""
    if not overlaps_above(I, J):
        raise ValueError(f"{I} does not overlap {J} above")
    return make_interval(J.hi, not J.hi_closed, I.hi, I.hi_closed)


def lower_difference(J: Interval, I: Interval) -> Optional[Interval]:
    """``J \\ I`` for ``I`` overlapping ``J`` above: the part of ``J`` before ``I``."""
    if not overlaps_above(I, J):
        raise ValueError(f"{I} does not overlap {J} above")
    return make_interval(J.lo, J.lo_closed, I.lo, not I.lo_closed)
