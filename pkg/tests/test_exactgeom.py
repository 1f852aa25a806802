import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diogon.exactgeom import (
    DomainError,
    NotRealizable,
    RadicandMismatch,
    Surd,
    cm3,
    cm3_int,
    cm4,
    cm4_squared,
    dist2,
    embed,
    format_surd,
    is_square,
    orient,
    parse_surd,
    rational_sqrt,
    sign_of,
    squarefree_split,
)
from diogon.model import ALL_PERMS, QuadDistances, SquaredQuad, relabel_tuple
from oracles import heron16

TRAP = QuadDistances(2, 3, 2, 4, 4, 4)

rats = st.fractions(min_value=-50, max_value=50, max_denominator=30)
squarefree = st.sampled_from([2, 3, 5, 6, 7, 10, 11, 13, 15, 30])


def _is_squarefree(n):
    return all(n % (p * p) for p in range(2, math.isqrt(n) + 1))


@given(st.integers(0, 10**6))
def test_squarefree_split_reassembles(n):
    s, r = squarefree_split(n)
    assert s * r * r == n
    if n:
        assert _is_squarefree(s)


def test_squarefree_split_known():
    assert squarefree_split(0) == (0, 0)
    assert squarefree_split(72) == (2, 6)
    assert squarefree_split(15 * 16) == (15, 4)
    with pytest.raises(DomainError):
        squarefree_split(-3)


def test_is_square_and_rational_sqrt():
    assert [n for n in range(30) if is_square(n)] == [0, 1, 4, 9, 16, 25]
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None


def test_surd_normalizes():
    assert Surd(3, 2, 1) == Surd(5)
    assert Surd(3, 1, 12) == Surd(3, 2, 3)
    assert Surd(1, 0, 7).is_rational
    assert Surd.sqrt(Fraction(15, 4)) == Surd(0, Fraction(1, 2), 15)


@given(rats, rats, rats, rats, squarefree)
def test_surd_field_ops_match_floats(a, b, c, d, s):
    x, y = Surd(a, b, s), Surd(c, d, s)
    assert math.isclose(float(x + y), float(x) + float(y), abs_tol=1e-9)
    assert math.isclose(float(x * y), float(x) * float(y), rel_tol=1e-9, abs_tol=1e-9)
    assert x - x == Surd(0)
    # conjugate product is rational
    assert (Surd(a, b, s) * Surd(a, -b, s)).is_rational


def test_mixed_radicands_rejected():
    with pytest.raises(RadicandMismatch):
        Surd(0, 1, 2) + Surd(0, 1, 3)


@given(st.integers(1, 10**6), st.integers(1, 10**6), squarefree)
def test_sign_exact_near_zero(p, q, s):
    # sign(p - q*sqrt(s)) = sign(p^2 - s*q^2) for positive p, q
    expect = (p * p > s * q * q) - (p * p < s * q * q)
    assert sign_of(Surd(p, -q, s)) == expect
    assert sign_of(Surd(-p, q, s)) == -expect


def test_sign_of_pell_convergent():
    # 1351 - 390*sqrt(12) is positive but tiny
    x = Surd(1351, -390, 12)
    assert sign_of(x) == 1
    assert float(x) < 1e-3


@given(rats, rats, squarefree)
def test_format_parse_roundtrip(a, b, s):
    x = Surd(a, b, s)
    assert parse_surd(format_surd(x)) == x


def test_format_examples():
    assert format_surd(Surd(Fraction(11, 4), 0, 1)) == "11/4"
    assert format_surd(Surd(0, Fraction(3, 4), 15)) == "0/1+3/4*sqrt(15)"
    assert format_surd(Surd(1, -2, 3)) == "1/1-2/1*sqrt(3)"
    with pytest.raises(ValueError):
        parse_surd("0.5")


@given(st.integers(0, 400), st.integers(0, 400), st.integers(0, 400))
def test_cm3_symmetric(x, y, z):
    vals = {cm3(*p) for p in itertools.permutations((x, y, z))}
    assert len(vals) == 1


def test_cm3_is_heron_and_zero_exactly_on_flat_triangles():
    for a, b, c in itertools.product(range(1, 51), repeat=3):
        t = cm3_int(a * a, b * b, c * c)
        assert t == heron16(a, b, c)
        flat = a + b == c or a + c == b or b + c == a
        assert (t == 0) == flat


def test_cm3_rejects_negative():
    with pytest.raises(DomainError):
        cm3(-1, 1, 1)


def test_cm4_reference_tetrahedra():
    assert cm4_squared(1, 1, 1, 1, 1, 1) == 4
    # corner of the unit cube: V = 1/6, 288 V^2 = 8
    assert cm4_squared(1, 1, 1, 2, 2, 2) == 8
    assert cm4(TRAP) == 0


@given(st.tuples(*[st.integers(1, 30)] * 6))
def test_cm4_invariant_under_relabeling(t):
    q = QuadDistances(*t)
    base = cm4(q)
    for perm in ALL_PERMS:
        assert cm4(QuadDistances(*relabel_tuple(t, perm))) == base


points = st.tuples(rats, rats)


@given(points, points, points, points)
def test_cm4_zero_for_planar_points(a, b, c, d):
    assert cm4_squared(*SquaredQuad.from_points(a, b, c, d).squared_points()) == 0


def test_embed_trapezoid_2344():
    emb = embed(TRAP)
    assert emb and emb.radicand == 15
    a, b, c, d = emb.points
    assert c == (Surd(Fraction(11, 4)), Surd(0, Fraction(3, 4), 15))
    assert d == (Surd(1), Surd(0, 1, 15))


@pytest.mark.parametrize(
    "t",
    [(2, 3, 2, 4, 4, 4), (3, 4, 3, 4, 5, 5), (3, 9, 8, 11, 9, 13), (2, 48, 28, 56, 49, 56), (1, 1, 1, 3, 2, 2)],
)
def test_embed_reproduces_distances(t):
    q = QuadDistances(*t)
    emb = embed(q)
    assert emb
    pts = dict(zip("ABCD", emb.points))
    for name, v in zip(("AB", "BC", "CD", "DA", "AC", "BD"), t):
        assert dist2(pts[name[0]], pts[name[1]]) == v * v


def test_embed_degenerate_is_flat():
    emb = embed(QuadDistances(1, 1, 1, 3, 2, 2))
    assert all(p[1] == 0 for p in emb.points)


def test_embed_failures():
    bad = embed(QuadDistances(1, 1, 1, 1, 1, 1))
    assert isinstance(bad, NotRealizable) and not bad and bad.reason == "nonplanar"
    assert embed(QuadDistances(1, 1, 1, 1, 3, 1)).reason == "triangle"


def test_orient():
    o, p = (Surd(0), Surd(0)), (Surd(1), Surd(0))
    assert orient(o, p, (Surd(0), Surd(0, 1, 2))) == 1
    assert orient(o, p, (Surd(0), Surd(0, -1, 2))) == -1
    assert orient(o, p, (Surd(5), Surd(0))) == 0


@settings(max_examples=50)
@given(rats, rats, rats, squarefree)
def test_dist2_symmetric(a, b, c, s):
    p, q = (Surd(a), Surd(0, b, s)), (Surd(c), Surd(0))
    assert dist2(p, q) == dist2(q, p)
