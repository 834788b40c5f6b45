import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effdyn.numerics import Interval, eval_f, eval_J, iv_arith, log2

F = Fraction


def rationals(max_num=1000, max_den=60):
    return st.builds(
        F,
        st.integers(min_value=-max_num, max_value=max_num),
        st.integers(min_value=1, max_value=max_den),
    )


def intervals():
    return st.builds(lambda a, b: Interval.make(a, b), rationals(), rationals())


def test_exact_rational_add():
    r = iv_arith(Interval.point(F(1, 4)), Interval.point(F(1, 2)), "add")
    assert r == Interval.point(F(3, 4))


def test_unit_square_mul():
    u = Interval.make(0, 1)
    assert iv_arith(u, u, "mul") == Interval.make(0, 1)


def test_dist_corner_enumeration():
    # oracle: enumerate corner combinations of |x - y|
    a = Interval.make(F(1, 3), F(1, 2))
    b = Interval.make(0, F(1, 4))
    corners = [abs(x - y) for x in (a.lo, a.hi) for y in (b.lo, b.hi)]
    expected = Interval(min(corners), max(corners))  # disjoint case: corners suffice
    assert iv_arith(a, b, "dist") == expected
    assert expected == Interval.make(F(1, 12), F(1, 2))


def test_dist_overlapping_reaches_zero():
    a = Interval.make(0, 1)
    b = Interval.make(F(1, 2), 2)
    assert iv_arith(a, b, "dist").lo == 0


@given(intervals(), intervals(), st.sampled_from(["add", "sub", "mul", "dist", "min", "max"]))
def test_iv_arith_encloses_sampled_points(a, b, op):
    result = iv_arith(a, b, op)
    fn = {
        "add": lambda x, y: x + y,
        "sub": lambda x, y: x - y,
        "mul": lambda x, y: x * y,
        "dist": lambda x, y: abs(x - y),
        "min": min,
        "max": max,
    }[op]
    for x in (a.lo, a.midpoint, a.hi):
        for y in (b.lo, b.midpoint, b.hi):
            assert result.contains(fn(x, y))


@given(intervals(), intervals(), st.sampled_from(["add", "sub", "mul", "dist", "min", "max"]))
def test_inclusion_monotonicity(a, b, op):
    wider_a = Interval(a.lo - 1, a.hi + 1)
    wider_b = Interval(b.lo - F(1, 3), b.hi + F(1, 3))
    assert iv_arith(wider_a, wider_b, op).contains_interval(iv_arith(a, b, op))


def test_outward_rounding():
    iv = Interval.make(F(1, 3), F(2, 3))
    rounded = iv.outward(4)
    assert rounded.contains_interval(iv)
    assert rounded.lo.denominator <= 16 and rounded.hi.denominator <= 16


def test_log2_exact_on_powers_of_two():
    assert log2(1) == Interval.point(0)
    assert log2(2) == Interval.point(1)
    assert log2(F(1, 8)) == Interval.point(-3)
    assert log2(1024) == Interval.point(10)


@pytest.mark.parametrize("q", [F(3), F(5, 7), F(100), F(999, 1000), F(1, 3)])
def test_log2_agrees_with_float(q):
    enclosure = log2(q, 30)
    assert enclosure.width <= F(1, 2**30)
    assert enclosure.lo <= F(math.log2(q)).limit_denominator(10**12) <= enclosure.hi or (
        abs(float(enclosure.midpoint) - math.log2(q)) < 1e-8
    )


def test_log2_rejects_nonpositive():
    with pytest.raises(ValueError):
        log2(0)
    with pytest.raises(ValueError):
        log2(F(-1, 2))


def test_f_at_one_is_exact():
    assert eval_f(1) == Interval.point(1)


def test_f_at_two_is_exact_four():
    # log2(2) = 1, so f(2) = 1 + 1 + 2*log2(2) = 4 with every step exact
    assert eval_f(2) == Interval.point(4)


def test_f_at_hundred():
    enclosure = eval_f(100)
    assert enclosure.width <= F(1, 2**20)
    assert enclosure.lo <= F(1351, 100) <= enclosure.hi or abs(float(enclosure.midpoint) - 13.5126) < 0.01


def test_f_rejects_below_one():
    with pytest.raises(ValueError):
        eval_f(F(1, 2))


def test_J_reference_values():
    assert eval_J(0) == Interval.point(0)
    # J(1) = 1 + 2*log2(2) = 3 exactly
    assert eval_J(1) == Interval.point(3)
    j = eval_J(F(100))
    expected = 100 + 2 * math.log2(101)
    assert abs(float(j.midpoint) - expected) < 1e-5


@settings(max_examples=40)
@given(
    st.integers(min_value=1, max_value=500),
    st.integers(min_value=1, max_value=500),
    st.fractions(min_value=F(1, 100), max_value=F(99, 100)),
)
def test_f_concavity(a, b, lam):
    x, y = F(a), F(a + b)
    mid = lam * x + (1 - lam) * y
    lhs = eval_f(mid)
    rhs = eval_f(x).scale(lam) + eval_f(y).scale(1 - lam)
    # concavity up to enclosure slack
    assert lhs.hi >= rhs.lo


def test_xf_of_inverse_monotone():
    # x * f(1/x) increasing on a rational grid of (0, 1/2]
    grid = [F(k, 64) for k in range(1, 33)]
    values = [eval_f(1 / x).scale(x) for x in grid]
    for left, right in zip(values, values[1:]):
        assert left.lo <= right.hi  # increasing within enclosure width
    # strict growth at a coarser scale
    assert values[0].hi < values[-1].lo


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        Interval(F(1), F(0))
