import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effdyn import dynamics as dy
from effdyn import measure as ms
from effdyn import space as sp
from effdyn import symbolic as sb

F = Fraction

LINE = sp.unit_interval()
WHEEL = sp.circle()
SEQ2 = sp.cantor(2)


def test_symbolic_word_serialization():
    w = sb.SymbolicWord((0, 1, None, 0), 2)
    assert str(w) == "01?0"
    assert sb.SymbolicWord.parse("01?0", 2) == w
    assert w.known_prefix == (0, 1)
    assert w.truncated


def test_code_orbit_period_two():
    sys = dy.doubling()
    x = sp.rational_point(LINE, F(1, 3))
    word = sb.code_orbit(sys, x, sb.halves(LINE), 6)
    assert str(word) == "010101"


def test_code_orbit_boundary_hit():
    sys = dy.doubling()
    x = sp.rational_point(LINE, F(5, 16))
    word = sb.code_orbit(sys, x, sb.halves(LINE), 5)
    # 5/16 -> 5/8 -> 1/4 -> 1/2 -> 0: the cut point itself is Unknown,
    # the endpoint 0 is interior to [0, 1/2)
    assert str(word) == "010?0"


def test_code_orbit_rotation_quarter():
    sys = dy.rotation(F(1, 4))
    x = sp.rational_point(WHEEL, F(1, 8))
    word = sb.code_orbit(sys, x, sb.halves(WHEEL), 4)
    assert str(word) == "0011"


def test_code_orbit_fast_path_matches_enclosure_path():
    sys = dy.doubling()
    partition = sb.dyadic_intervals(LINE, 2)
    rng = random.Random(5)
    for _ in range(10):
        q = F(rng.getrandbits(40) | 1, 1 << 40)
        exact_point = sp.rational_point(LINE, q)
        fast = sb.code_orbit(sys, exact_point, partition, 20)

        def approximator(n, q=q):
            from effdyn.numerics import dyadic_floor

            return LINE.encode_dyadic(dyadic_floor(q, n + 2))

        hidden = sp.from_fast_sequence(LINE, approximator)
        slow = sb.code_orbit(sys, hidden, partition, 20, precision=30)
        assert fast.symbols == slow.symbols


def test_code_orbit_on_shift():
    sys = dy.shift(2)
    x = sp.word_point(SEQ2, (1, 0, 0, 1, 1, 0), repeat=True)
    word = sb.code_orbit(sys, x, sb.cylinders(SEQ2, 1), 6)
    assert str(word) == "100110"


def test_cylinder_measure_doubling_dyadic():
    sys = dy.doubling()
    mu = ms.ComputableMeasure.lebesgue(LINE)
    partition = sb.halves(LINE)
    assert sb.cylinder_measure(sys, mu, partition, (0, 1, 1, 0)) == F(1, 16)
    assert sb.cylinder_measure(sys, mu, partition, ()) == F(1)


def test_cylinder_measure_markov():
    sys = dy.shift(2)
    chain = ms.ComputableMeasure.markov(SEQ2, [[F(9, 10), F(1, 10)], [F(1, 2), F(1, 2)]])
    partition = sb.cylinders(SEQ2, 1)
    assert sb.cylinder_measure(sys, chain, partition, (0, 0, 1)) == F(5, 6) * F(9, 10) * F(1, 10)


def test_cylinder_measure_rotation_rational():
    sys = dy.rotation(F(1, 4))
    mu = ms.ComputableMeasure.lebesgue(WHEEL)
    partition = sb.halves(WHEEL)
    # orbit of the atom structure under quarter rotation: each length-2
    # cylinder is an arc of length 1/4
    total = F(0)
    for w in [(0, 0), (0, 1), (1, 0), (1, 1)]:
        total += sb.cylinder_measure(sys, mu, partition, w)
    assert total == 1
    assert sb.cylinder_measure(sys, mu, partition, (0, 0)) == F(1, 4)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=1, max_value=6))
def test_cylinder_additivity_doubling(n):
    sys = dy.doubling()
    mu = ms.ComputableMeasure.lebesgue(LINE)
    partition = sb.halves(LINE)
    rng = random.Random(n)
    word = tuple(rng.randrange(2) for _ in range(n))
    parent = sb.cylinder_measure(sys, mu, partition, word)
    children = sum(
        sb.cylinder_measure(sys, mu, partition, word + (a,)) for a in range(2)
    )
    assert parent == children


def test_cylinder_additivity_markov():
    sys = dy.shift(2)
    chain = ms.ComputableMeasure.markov(SEQ2, [[F(9, 10), F(1, 10)], [F(1, 2), F(1, 2)]])
    partition = sb.cylinders(SEQ2, 1)
    for word in [(0,), (1,), (0, 1), (1, 1, 0)]:
        parent = sb.cylinder_measure(sys, chain, partition, word)
        children = sum(
            sb.cylinder_measure(sys, chain, partition, word + (a,)) for a in range(2)
        )
        assert parent == children


def test_cylinder_measures_sum_to_one_per_level():
    sys = dy.tent()
    mu = ms.ComputableMeasure.lebesgue(LINE)
    partition = sb.halves(LINE)
    for n in (1, 2, 3, 5):
        total = F(0)
        for value in range(2**n):
            word = tuple((value >> (n - 1 - i)) & 1 for i in range(n))
            total += sb.cylinder_measure(sys, mu, partition, word)
        assert total == 1


def test_mc_estimate_brackets_exact_value():
    sys = dy.doubling()
    mu = ms.ComputableMeasure.lebesgue(LINE)
    partition = sb.halves(LINE)
    word = (0, 1)
    est = sb.mc_cylinder_estimate(sys, partition, word, samples=3000, seed=9)
    exact = float(sb.cylinder_measure(sys, mu, partition, word))
    assert abs(est.value - exact) <= 3 * est.half_width + 0.02


# -- reconstruction -----------------------------------------------------------


def dyadic_pseudo_orbit(sys, q, n, precision):
    from effdyn.numerics import dyadic_floor

    values = dy.exact_orbit(sys, q, n)
    return [sys.space.encode_dyadic(dyadic_floor(v, precision)) for v in values]


def test_reconstruct_matches_coding_when_eps_small():
    sys = dy.doubling()
    partition = sb.halves(LINE)
    x = sp.rational_point(LINE, F(1, 3))
    n = 24
    pseudo = dyadic_pseudo_orbit(sys, F(1, 3), n, 10)
    word = sb.reconstruct_symbols(partition, F(1, 100), pseudo)
    coded = sb.code_orbit(sys, x, partition, n)
    assert word.symbols == coded.symbols
    assert not word.truncated


def test_reconstruct_ambiguous_near_boundary_is_deterministic():
    partition = sb.halves(LINE)
    index = LINE.encode_dyadic(F(31, 64))  # 0.484, within eps of the cut
    first = sb.reconstruct_symbols(partition, F(1, 20), [index])
    second = sb.reconstruct_symbols(partition, F(1, 20), [index])
    assert first.symbols == second.symbols  # fixed dovetail order
    assert first.symbols[0] in (0, 1)


def test_reconstruct_mismatch_density_bound():
    sys = dy.doubling()
    partition = sb.halves(LINE)
    mu = ms.ComputableMeasure.lebesgue(LINE)
    rng = random.Random(17)
    eps = F(1, 32)
    n = 4000
    q = F(rng.getrandbits(n + 16) | 1, 1 << (n + 16))
    pseudo = dyadic_pseudo_orbit(sys, q, n, 8)  # 2^-8 < eps
    reconstructed = sb.reconstruct_symbols(partition, eps, pseudo)
    true_word = sb.code_orbit(sys, sp.rational_point(LINE, q), partition, n)
    assert not true_word.truncated
    density = sb.mismatch_fraction(reconstructed, true_word)
    bound = partition.boundary_neighborhood_measure(mu, 2 * eps) + F(5, 100)
    assert density <= bound


def test_reconstruct_stalls_when_ball_misses_atoms():
    # a partition with a hole around 1/2: the eps-ball sits inside the hole
    partition = sb.ComputablePartition(
        LINE,
        (((F(0), F(1, 4)),), ((F(3, 4), F(1)),)),
        boundary_points=(F(1, 4), F(3, 4)),
        name="holey",
    )
    index = LINE.encode_dyadic(F(1, 2))
    with pytest.raises(sb.ReconstructStalled) as info:
        sb.reconstruct_symbols(partition, F(1, 16), [index], budget=600)
    assert info.value.position == 0


def test_reconstruct_on_sequence_space():
    partition = sb.cylinders(SEQ2, 1)
    pseudo = [SEQ2.encode_word((1, 0, 1)), SEQ2.encode_word((0, 1))]
    word = sb.reconstruct_symbols(partition, F(1, 4), pseudo)
    assert word.symbols == (1, 0)


def test_boundary_neighborhood_measure():
    partition = sb.halves(LINE)
    mu = ms.ComputableMeasure.lebesgue(LINE)
    assert partition.boundary_neighborhood_measure(mu, F(1, 16)) == F(1, 8)
    wheel_partition = sb.halves(WHEEL)
    mu_wheel = ms.ComputableMeasure.lebesgue(WHEEL)
    assert wheel_partition.boundary_neighborhood_measure(mu_wheel, F(1, 16)) == F(1, 4)


def test_min_boundary_distance():
    partition = sb.halves(LINE)
    values = dy.exact_orbit(dy.doubling(), F(1, 3), 8)
    assert partition.min_boundary_distance(values) == F(1, 6)
