from __future__ import annotations

from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solred.reals import (
    AffineExponents,
    Average,
    Complement,
    CutVerdict,
    DyadicSeries,
    ExactRational,
    Interval,
    ListExponents,
    Scale,
    certify_in_open_unit,
    enclose,
    left_cut_member,
)

THIRD_SERIES = DyadicSeries(AffineExponents(2, 2))


def exact_value(real) -> Q:
    """Closed-form value of a reference real, computed independently."""
    if isinstance(real, ExactRational):
        return real.value
    if isinstance(real, DyadicSeries):
        gen = real.exponents
        if isinstance(gen, ListExponents):
            return sum((Q(1, 2 ** e) for e in gen.values), Q(0))
        return Q(1, 2 ** gen.t) / (1 - Q(1, 2 ** gen.s))
    if isinstance(real, Scale):
        return real.factor * exact_value(real.inner)
    if isinstance(real, Average):
        return (exact_value(real.left) + exact_value(real.right)) / 2
    if isinstance(real, Complement):
        return 1 - exact_value(real.inner)
    raise AssertionError(f"unhandled constructor {type(real)}")


def test_interval_validation():
    box = Interval(Q(1, 4), Q(1, 2))
    assert box.width == Q(1, 4)
    assert box.contains(Q(1, 3))
    assert not box.contains(Q(3, 4))
    assert Interval(Q(1, 2), Q(1, 2)).is_point()
    assert not box.is_point()
    with pytest.raises(ValueError):
        Interval(Q(1, 2), Q(1, 4))


def test_enclose_exact_rational_is_point():
    box = enclose(ExactRational(Q(1, 2)), Q(1, 8))
    assert (box.lo, box.hi) == (Q(1, 2), Q(1, 2))


def test_enclose_geometric_series_tail_bound():
    box = enclose(THIRD_SERIES, Q(1, 64))
    assert (box.lo, box.hi) == (Q(21, 64), Q(22, 64))
    assert box.contains(Q(1, 3))


def test_enclose_complement_of_point():
    box = enclose(Complement(ExactRational(Q(1, 4))), Q(1, 16))
    assert (box.lo, box.hi) == (Q(3, 4), Q(3, 4))


def test_enclose_scale_and_average_are_exact():
    scale = Scale(ExactRational(Q(1, 3)), Q(1, 4))
    avg = Average(ExactRational(Q(1, 12)), ExactRational(Q(1, 4)))
    assert enclose(scale, Q(1, 2 ** 20)).is_point()
    assert enclose(scale, Q(1, 2 ** 20)).lo == Q(1, 12)
    assert enclose(avg, Q(1, 2 ** 20)).lo == Q(1, 6)


def test_enclose_finite_exponent_list_becomes_exact():
    series = DyadicSeries(ListExponents((1, 3)))
    box = enclose(series, Q(1, 1024))
    assert box.is_point() and box.lo == Q(5, 8)


def test_series_partial_sums_strictly_increase():
    prev = Q(-1)
    for k in range(1, 12):
        partial, _ = THIRD_SERIES.partial_state(k)
        assert partial > prev
        prev = partial


def test_left_cut_member_rational_cases():
    third = ExactRational(Q(1, 3))
    assert left_cut_member(third, Q(1, 2), 10) is CutVerdict.NOT_IN_LEFT_CUT
    assert left_cut_member(third, Q(1, 3), 10) is CutVerdict.NOT_IN_LEFT_CUT
    assert left_cut_member(third, Q(1, 4), 10) is CutVerdict.IN_LEFT_CUT


def test_left_cut_member_series_straddle_is_unknown():
    assert left_cut_member(THIRD_SERIES, Q(1, 3), 5) is CutVerdict.UNKNOWN
    assert left_cut_member(THIRD_SERIES, Q(21, 64), 5) is CutVerdict.IN_LEFT_CUT
    assert left_cut_member(THIRD_SERIES, Q(3, 8), 5) is CutVerdict.NOT_IN_LEFT_CUT


def test_left_cut_member_certainty_is_monotone_in_budget():
    for q in (Q(21, 64), Q(3, 8), Q(1, 3)):
        verdicts = [left_cut_member(THIRD_SERIES, q, b) for b in range(1, 40, 3)]
        settled = [v for v in verdicts if v is not CutVerdict.UNKNOWN]
        assert len(set(settled)) <= 1
        for early, late in zip(verdicts, verdicts[1:]):
            if early is not CutVerdict.UNKNOWN:
                assert late is early


def test_certify_in_open_unit_rejects_endpoints():
    assert not certify_in_open_unit(ExactRational(Q(0)))
    assert not certify_in_open_unit(ExactRational(Q(1)))
    assert certify_in_open_unit(ExactRational(Q(1, 2)))
    assert certify_in_open_unit(THIRD_SERIES)
    assert certify_in_open_unit(Complement(THIRD_SERIES))


def rationals_unit():
    return st.fractions(min_value=0, max_value=1, max_denominator=512)


@st.composite
def reference_reals(draw, depth=2):
    if depth == 0:
        choice = draw(st.integers(0, 1))
    else:
        choice = draw(st.integers(0, 4))
    if choice == 0:
        return ExactRational(draw(rationals_unit()))
    if choice == 1:
        if draw(st.booleans()):
            slope = draw(st.integers(1, 4))
            offset = draw(st.integers(1, 6))
            return DyadicSeries(AffineExponents(slope, offset))
        exps = draw(st.lists(st.integers(1, 12), min_size=1, max_size=4, unique=True))
        return DyadicSeries(ListExponents(tuple(sorted(exps))))
    if choice == 2:
        factor = draw(st.fractions(min_value=Q(1, 64), max_value=1, max_denominator=64))
        return Scale(draw(reference_reals(depth=depth - 1)), factor)
    if choice == 3:
        return Average(draw(reference_reals(depth=depth - 1)),
                       draw(reference_reals(depth=depth - 1)))
    return Complement(draw(reference_reals(depth=depth - 1)))


@settings(max_examples=150, deadline=None)
@given(real=reference_reals(), k=st.integers(1, 30))
def test_enclosures_contain_exact_value_and_nest(real, k):
    value = exact_value(real)
    coarse = enclose(real, Q(1, 2 ** k))
    fine = enclose(real, Q(1, 2 ** (k + 7)))
    for box, precision in ((coarse, Q(1, 2 ** k)), (fine, Q(1, 2 ** (k + 7)))):
        assert box.contains(value)
        assert box.width <= precision
    assert coarse.lo <= fine.lo and fine.hi <= coarse.hi


@settings(max_examples=100, deadline=None)
@given(real=reference_reals(), q=rationals_unit(), budget=st.integers(1, 24))
def test_left_cut_member_never_contradicts_exact_value(real, q, budget):
    value = exact_value(real)
    verdict = left_cut_member(real, q, budget)
    if verdict is CutVerdict.IN_LEFT_CUT:
        assert q < value
    elif verdict is CutVerdict.NOT_IN_LEFT_CUT:
        assert q >= value


@settings(max_examples=100, deadline=None)
@given(a=rationals_unit(), b=rationals_unit())
def test_rational_arithmetic_is_exact(a, b):
    assert (a + b) - b == a
