import random
from fractions import Fraction

from effdyn import dynamics as dy
from effdyn import measure as ms
from effdyn import space as sp
from effdyn import stats as stt

F = Fraction

LINE = sp.unit_interval()
WHEEL = sp.circle()
SEQ2 = sp.cantor(2)


def left_half(space):
    return ms.AlmostDecidableSet.from_interval(space, 0, F(1, 2))


def seeded_point(seed, bits):
    rng = random.Random(seed)
    return sp.rational_point(LINE, F(rng.getrandbits(bits) | 1, 1 << bits))


def test_birkhoff_rotation_equidistributes():
    sys = dy.rotation(sp.sqrt2_minus_1(WHEEL))
    x = sp.rational_point(WHEEL, 0)
    result = stt.birkhoff_average(sys, x, left_half(WHEEL), 10_000)
    assert abs(float(result.average) - 0.5) <= 0.01
    assert result.undecided <= 5


def test_birkhoff_doubling_seeded():
    sys = dy.doubling()
    x = seeded_point(0, 10_064)
    result = stt.birkhoff_average(sys, x, left_half(LINE), 10_000)
    assert abs(float(result.average) - 0.5) <= 0.02
    assert result.undecided == 0


def test_birkhoff_periodic_exact_half():
    sys = dy.doubling()
    x = sp.rational_point(LINE, F(1, 3))
    for n in (2, 10, 1000):
        result = stt.birkhoff_average(sys, x, left_half(LINE), n)
        assert result.average == F(1, 2)
        assert result.undecided == 0


def test_birkhoff_counts_partition_horizon():
    sys = dy.doubling()
    x = sp.rational_point(LINE, F(5, 16))  # hits the cut once
    result = stt.birkhoff_average(sys, x, left_half(LINE), 6)
    assert result.inside + result.outside + result.undecided == 6
    assert result.undecided == 1
    assert result.average + result.complement_average + F(result.undecided, 6) == 1


def test_birkhoff_rational_rotation_exact_frequency():
    sys = dy.rotation(F(2, 5))
    x = sp.rational_point(WHEEL, F(1, 8))  # orbit avoids the cut points
    result = stt.birkhoff_average(sys, x, left_half(WHEEL), 5)
    orbit = dy.exact_orbit(sys, F(1, 8), 5)
    expected = sum(1 for v in orbit if 0 <= v < F(1, 2))
    assert result.undecided == 0
    assert result.inside == expected
    # an orbit through the cut point 0 reports it undecided on the circle
    through_zero = stt.birkhoff_average(sys, sp.rational_point(WHEEL, 0), left_half(WHEEL), 5)
    assert through_zero.undecided == 1


def test_empirical_measure_wrapper():
    sys = dy.doubling()
    emp = stt.EmpiricalMeasure(sys, sp.rational_point(LINE, F(1, 3)), 100)
    assert emp.frequency(left_half(LINE)).average == F(1, 2)


def test_typicality_seeded_doubling_passes():
    sys = dy.doubling()
    mu = ms.ComputableMeasure.lebesgue(LINE)
    x = seeded_point(0, 20_064)
    family = stt.dyadic_ball_family(LINE, 3)
    result = stt.typicality_test(sys, mu, x, family, 20_000, tol=0.03)
    assert result.verdict is True
    assert result.max_residual <= 0.03


def test_typicality_periodic_negative_control():
    sys = dy.doubling()
    mu = ms.ComputableMeasure.lebesgue(LINE)
    x = sp.rational_point(LINE, F(1, 3))
    family = stt.dyadic_ball_family(LINE, 3)
    result = stt.typicality_test(sys, mu, x, family, 20_000, tol=0.02)
    assert result.verdict is False
    assert result.max_residual >= 0.1


def test_typicality_below_horizon_is_inconclusive():
    sys = dy.doubling()
    mu = ms.ComputableMeasure.lebesgue(LINE)
    x = seeded_point(1, 256)
    family = stt.dyadic_ball_family(LINE, 2)
    result = stt.typicality_test(sys, mu, x, family, 1, tol=0.05)
    assert result.verdict is None
    assert result.max_residual <= 1.0


def test_recurrence_rotation_convergent_denominator():
    sys = dy.rotation(sp.sqrt2_minus_1(WHEEL))
    x = sp.rational_point(WHEEL, F(1, 3))
    bound = stt.recurrence_stat(sys, x, 70)
    assert bound <= F(51, 10_000)


def test_recurrence_periodic_point_reaches_zero():
    sys = dy.doubling()
    x = sp.rational_point(LINE, F(1, 3))
    assert stt.recurrence_stat(sys, x, 2) == 0
    assert stt.recurrence_stat(sys, x, 50) == 0


def test_recurrence_shift_seeded_prefix_recurs():
    rng = random.Random(11)
    symbols = tuple(rng.randrange(2) for _ in range((1 << 12) + 128))
    x = sp.sequence_point(SEQ2, lambda j: symbols[j])
    bound = stt.recurrence_stat(dy.shift(2), x, 1 << 12)
    assert bound <= F(1, 256)


def test_recurrence_non_increasing():
    sys = dy.rotation(sp.sqrt2_minus_1(WHEEL))
    x = sp.rational_point(WHEEL, 0)
    values = [stt.recurrence_stat(sys, x, n) for n in (5, 12, 29, 70)]
    assert all(a >= b for a, b in zip(values, values[1:]))
