import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from effdyn import space as sp

F = Fraction


@pytest.fixture
def line():
    return sp.unit_interval()


@pytest.fixture
def wheel():
    return sp.circle()


@pytest.fixture
def seq2():
    return sp.cantor(2)


def test_pairing_roundtrip():
    for a in range(25):
        for b in range(25):
            assert sp.unpair(sp.pair(a, b)) == (a, b)


def test_dyadic_encode_decode_roundtrip(line):
    for level in range(6):
        for num in range(2**level + 1):
            q = F(num, 2**level)
            assert line.decode(line.encode_dyadic(q)) == q


def test_word_encode_decode_roundtrip(seq2):
    words = [(), (0,), (1,), (0, 1), (1, 1, 0), (0, 0, 0, 1)]
    for w in words:
        assert seq2.decode(seq2.encode_word(w)) == w
    tern = sp.cantor(3)
    for w in [(), (2,), (1, 2, 0), (2, 2, 2, 1)]:
        assert tern.decode(tern.encode_word(w)) == w


def test_decode_total_on_naturals(line, seq2):
    for i in range(200):
        v = line.decode(i)
        assert 0 <= v <= 1
        w = seq2.decode(i)
        assert all(c in (0, 1) for c in w)


def test_interval_distance(line):
    x = sp.rational_point(line, F(1, 4))
    y = sp.rational_point(line, F(3, 4))
    d = sp.dist(x, y, 12)
    assert d.contains(F(1, 2))
    assert d.width <= F(1, 2**12)


def test_circle_wraparound(wheel):
    x = sp.rational_point(wheel, F(0))
    y = sp.rational_point(wheel, F(3, 4))
    d = sp.dist(x, y, 10)
    assert d.contains(F(1, 4))


def test_cantor_first_disagreement(seq2):
    x = sp.word_point(seq2, (0, 1, 0, 0, 0))
    y = sp.word_point(seq2, (0, 0, 1, 1, 1))
    d = sp.dist(x, y, 8)
    assert d.contains(F(1, 2))


def test_space_mismatch_raises(line, wheel):
    x = sp.rational_point(line, F(1, 2))
    y = sp.rational_point(wheel, F(1, 2))
    with pytest.raises(sp.SpaceMismatch):
        sp.dist(x, y, 4)


def test_approx_ball_contains_rational_point(line):
    x = sp.rational_point(line, F(1, 3))
    for n in range(1, 12):
        ball = sp.approx(x, n)
        assert ball.radius == F(2, 2**n)
        # exact check: true point within the returned ball
        assert abs(ball.center_desc - F(1, 3)) < ball.radius


def test_approx_dyadic_truncation_of_reference(line):
    # limit of floor(2^n * pi/4) / 2^n, presented as a fast sequence
    def approximator(n):
        m = n + 2
        num = int(math.pi / 4 * 2**m)  # desk-scale reference truncation
        return line.encode_dyadic(F(num, 2**m))

    x = sp.from_fast_sequence(line, approximator)
    ball = sp.approx(x, 5)
    assert ball.radius == F(1, 16)
    assert abs(ball.center_desc - F(785398, 10**6)) < F(1, 64)


def test_approx_cantor_prefix(seq2):
    x = sp.word_point(seq2, (0, 1, 1, 0), repeat=True)
    ball = sp.approx(x, 4)
    assert len(ball.center_desc) >= 4
    assert ball.center_desc[:4] == (0, 1, 1, 0)
    assert ball.radius == F(1, 8)


def test_fastness_audit_on_constructed_points(line, wheel, seq2):
    points = [
        sp.rational_point(line, F(1, 3)),
        sp.rational_point(wheel, F(5, 7)),
        sp.word_point(seq2, (1, 0, 1), repeat=True),
        sp.sqrt2_minus_1(wheel),
    ]
    for x in points:
        for n in range(1, 14):
            a = x.approx_desc(n)
            b = x.approx_desc(n + 1)
            assert x.space.dist_desc(a, b) < F(1, 2**n)


def test_sqrt2_minus_1_value(wheel):
    x = sp.sqrt2_minus_1(wheel)
    v = x.approx_desc(30)
    assert abs(float(v) - (math.sqrt(2) - 1)) < 2**-28


def test_member_semidecide_positive(line):
    x = sp.rational_point(line, F(1, 4))
    u = sp.EnumeratedOpenSet.from_balls(
        line, [sp.IdealBall(line, line.encode_dyadic(F(1, 4)), F(1, 8))]
    )
    witness = sp.member_semidecide(x, u, 12)
    assert witness is not None


def test_member_semidecide_boundary_never_halts(line):
    # U exhausts [0, 1/2) but x = 1/2 sits on the boundary: semi-decision
    # can never certify, at any budget
    x = sp.rational_point(line, F(1, 2))

    def stages(budget):
        return tuple(
            sp.IdealBall(line, line.encode_dyadic(F(1, 4)), F(1, 4) - F(1, 2**j))
            for j in range(3, budget + 3)
        )

    u = sp.EnumeratedOpenSet.from_stages(line, stages)
    for budget in (4, 8, 16):
        assert sp.member_semidecide(x, u, budget) is None


def test_member_semidecide_via_second_ball(line):
    x = sp.rational_point(line, F(3, 10))
    u = sp.EnumeratedOpenSet.from_balls(
        line,
        [
            sp.IdealBall(line, line.encode_dyadic(F(1, 4)), F(1, 10)),
            sp.IdealBall(line, line.encode_dyadic(F(3, 8)), F(1, 10)),
        ],
    )
    witness = sp.member_semidecide(x, u, 16)
    assert witness is not None
    assert witness.contains_desc(F(3, 10))


def test_member_semidecide_monotone_in_budget(line):
    x = sp.rational_point(line, F(3, 10))
    u = sp.EnumeratedOpenSet.from_balls(
        line, [sp.IdealBall(line, line.encode_dyadic(F(1, 4)), F(1, 10))]
    )
    results = [sp.member_semidecide(x, u, m) is not None for m in range(0, 24)]
    # once inside, always inside
    assert results == sorted(results)


@settings(max_examples=60)
@given(st.integers(min_value=0, max_value=400), st.integers(min_value=0, max_value=400))
def test_metric_axioms_on_ideal_points(i, j):
    for spc in (sp.unit_interval(), sp.circle(), sp.cantor(2)):
        dij = spc.ideal_dist(i, j)
        dji = spc.ideal_dist(j, i)
        assert dij == dji  # symmetry is exact
        assert dij.lo >= 0
        if spc.decode(i) == spc.decode(j):
            assert dij == sp.Interval.point(0)


@settings(max_examples=30)
@given(
    st.integers(min_value=0, max_value=120),
    st.integers(min_value=0, max_value=120),
    st.integers(min_value=0, max_value=120),
)
def test_triangle_inequality_on_ideal_points(i, j, k):
    for spc in (sp.unit_interval(), sp.circle(), sp.cantor(3)):
        dik = spc.ideal_dist(i, k).lo
        detour = spc.ideal_dist(i, j).hi + spc.ideal_dist(j, k).hi
        assert dik <= detour


def test_product_space_max_metric():
    pr = sp.product(sp.unit_interval(), sp.circle())
    u = (F(0), F(0))
    v = (F(1, 4), F(7, 8))
    assert pr.dist_desc(u, v) == max(F(1, 4), F(1, 8))
