from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from barcat.intervals import (
    INF,
    Interval,
    bounds_above,
    bounds_below,
    contains,
    is_delta_trivial,
    is_subset,
    lower_difference,
    make_interval,
    overlaps_above,
    parse_interval,
    shift,
    thicken,
    threshold_le,
    triviality_threshold,
    upper_difference,
)

from oracles import bounds_above_sampled, bounds_below_sampled, members, same_points
from strategies import SAMPLES, deltas, intervals

P = parse_interval


def test_parse_and_format():
    assert str(P("[0,4)")) == "[0,4)"
    assert str(P("(-inf,2]")) == "(-inf,2]"
    assert P("[1.5, 3/2]") == Interval(Fraction(3, 2), Fraction(3, 2), True, True)
    assert P("(0,inf)").hi == INF


@pytest.mark.parametrize("text", ["[0,1", "0,1)", "[2,1)", "[1,1)", "[-inf,2)", "[a,2)", "[0,inf]"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        P(text)


def test_rejects_floats():
    with pytest.raises(TypeError):
        Interval(0.5, 1)


def test_contains_examples():
    assert contains(P("[0,2)"), 0)
    assert not contains(P("[0,2)"), 2)
    assert contains(P("(-inf,3)"), -1000)


def test_bounds_examples():
    assert bounds_above(P("[1,3)"), P("[0,2)"))
    assert not bounds_above(P("[0,2)"), P("[0,2]"))
    assert bounds_below(P("[0,2)"), P("[1,3)"))
    assert not bounds_below(P("(0,2)"), P("[0,1]"))
    # the sampled quantifier oracle agrees on these
    assert bounds_above_sampled(P("[1,3)"), P("[0,2)"))
    assert not bounds_above_sampled(P("[0,2)"), P("[0,2]"))
    assert not bounds_below_sampled(P("(0,2)"), P("[0,1]"))


@given(intervals())
def test_bounds_reflexive(I):
    assert bounds_above(I, I) and bounds_below(I, I) and overlaps_above(I, I)


def test_overlaps_above_examples():
    assert overlaps_above(P("[1,3)"), P("[0,2)"))
    assert not overlaps_above(P("[0,3)"), P("[1,2)"))


def test_shift_thicken_examples():
    assert shift(P("[2,4)"), 2) == P("[0,2)")
    assert shift(P("[0,1]"), 0) == P("[0,1]")
    assert shift(P("(-inf,3)"), 1) == P("(-inf,2)")
    assert thicken(P("[1,2)"), 1) == P("[0,3)")
    assert thicken(P("[0,0]"), 1) == P("[-1,1]")
    with pytest.raises(ValueError):
        shift(P("[0,1)"), -1)


@given(intervals(), deltas)
def test_shift_pointwise(I, d):
    S = shift(I, d)
    assert all(contains(S, t) == contains(I, t + d) for t in SAMPLES)


@given(intervals(), deltas)
def test_thicken_pointwise(I, d):
    T = thicken(I, d)
    for t in SAMPLES:
        # t is within d of I iff the closed window [t-d, t+d] meets I
        window = Interval(t - d, t + d, True, True)
        near = any(contains(I, s) for s in SAMPLES if window.lo <= s <= window.hi) or (
            contains(I, window.lo) or contains(I, window.hi)
            or (window.lo <= I.lo <= window.hi and I.lo != -INF and not I.lo_closed and I.lo < window.hi)
            or (window.lo <= I.hi <= window.hi and I.hi != INF and not I.hi_closed and I.hi > window.lo)
        )
        assert near == contains(T, t), (I, d, t)


def test_delta_trivial_examples():
    assert is_delta_trivial(P("[0,2)"), 2)
    assert not is_delta_trivial(P("[0,3)"), 2)
    assert not is_delta_trivial(P("[0,2]"), 2)
    assert not is_delta_trivial(P("[0,0]"), 0)
    assert is_delta_trivial(P("[0,0]"), Fraction(1, 100))
    assert not is_delta_trivial(P("[0,inf)"), 100)


@given(intervals(), deltas)
def test_delta_trivial_matches_witness_search(I, d):
    witness = any(contains(I, t) and contains(I, t + d) for t in SAMPLES)
    assert is_delta_trivial(I, d) == (not witness)


@given(intervals(), deltas, deltas)
def test_shift_thicken_additive(I, a, b):
    assert shift(shift(I, a), b) == shift(I, a + b)
    assert thicken(thicken(I, a), b) == thicken(I, a + b)


@given(intervals(), deltas, deltas)
def test_monotone_in_delta(I, a, b):
    a, b = min(a, b), max(a, b)
    if is_delta_trivial(I, a):
        assert is_delta_trivial(I, b)
    assert is_subset(thicken(I, a), thicken(I, b))


@given(intervals(), intervals())
def test_bounds_agree_with_quantifier_oracle(I, J):
    assert bounds_above(I, J) == bounds_above_sampled(I, J)
    assert bounds_below(J, I) == bounds_below_sampled(J, I)


@given(intervals(), intervals())
def test_overlap_implies_meeting(I, J):
    if overlaps_above(I, J):
        assert members(I) & members(J)


def test_difference_examples():
    assert upper_difference(P("[2,4)"), P("[0,4)")) is None
    assert upper_difference(P("[1,3)"), P("[0,2)")) == P("[2,3)")
    assert upper_difference(P("[0,2]"), P("[0,2)")) == P("[2,2]")
    assert lower_difference(P("[0,4)"), P("[2,4)")) == P("[0,2)")
    assert lower_difference(P("[0,2)"), P("[1,3)")) == P("[0,1)")
    assert lower_difference(P("[0,2)"), P("[0,2)")) is None
    with pytest.raises(ValueError):
        upper_difference(P("[0,3)"), P("[1,2)"))


@given(intervals(), intervals())
def test_differences_are_set_differences(I, J):
    if not overlaps_above(I, J):
        return
    up = upper_difference(I, J)
    low = lower_difference(J, I)
    assert (members(up) if up else frozenset()) == members(I) - members(J)
    assert (members(low) if low else frozenset()) == members(J) - members(I)
    if up is not None:
        assert overlaps_above(up, I)
    if low is not None:
        assert overlaps_above(J, low)


@given(intervals(), deltas)
def test_triviality_threshold(I, d):
    v, attained = triviality_threshold(I)
    expected = d > v or (d == v and attained)
    assert is_delta_trivial(I, d) == expected


def test_threshold_order():
    assert threshold_le((2, True), (3, True))
    assert threshold_le((2, True), (2, False))
    assert not threshold_le((2, False), (2, True))
    assert threshold_le((INF, False), (INF, False))


def test_make_interval_empty():
    assert make_interval(1, False, 1, True) is None
    assert make_interval(2, True, 1, True) is None
    assert make_interval(INF, False, INF, False) is None
