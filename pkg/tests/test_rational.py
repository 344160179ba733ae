from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stabcert.rational import (
    OffsetSurd,
    QuadSurd,
    rational_from_str,
    rational_to_str,
    sqrt_exact,
    surd_compare,
    surd_product,
    surd_ratio,
)

rationals = st.fractions(min_value=-(10**6), max_value=10**6, max_denominator=10**6)


@given(rationals, rationals)
def test_rational_arithmetic_stays_reduced(a, b):
    from math import gcd

    for value in (a + b, a - b, a * b):
        assert gcd(abs(value.numerator), value.denominator) == 1
        assert value.denominator > 0


@given(rationals, rationals, rationals)
def test_rational_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c


def test_rational_division_exact():
    assert F(1, 3) + F(1, 6) == F(1, 2)
    assert F(30, 11) * F(1, 3) == F(10, 11)
    assert F(20, 21) * F(21, 22) == F(10, 11)
    with pytest.raises(ZeroDivisionError):
        F(1) / F(0)


def test_serialization_p_over_q():
    assert rational_to_str(F(9, 11)) == "9/11"
    assert rational_to_str(F(3)) == "3/1"
    assert rational_to_str(F(-3, 4)) == "-3/4"
    assert rational_from_str("979826999/65363627000") == F(979826999, 65363627000)
    x = F(-123456, 789)
    assert rational_from_str(rational_to_str(x)) == x


def test_sqrt_exact():
    assert sqrt_exact(F(4, 9)) == F(2, 3)
    assert sqrt_exact(F(0)) == 0
    assert sqrt_exact(F(2)) is None
    assert sqrt_exact(F(-1)) is None
    assert sqrt_exact(F(979826999**2, 65363627000**2)) == F(979826999, 65363627000)


class TestQuadSurd:
    def test_canonicalization_folds_perfect_squares(self):
        s = QuadSurd.make(1, F(4, 9))
        assert s.is_rational() and s.as_rational() == F(2, 3)
        z = QuadSurd.make(0, F(7))
        assert z.as_rational() == 0
        assert QuadSurd.make(3, 0).as_rational() == 0

    def test_square(self):
        assert QuadSurd.make(F(1, 2), 8).square() == 2
        assert QuadSurd.make(F(-2, 3), F(3, 5)).square() == F(4, 15)

    def test_compare_examples(self):
        assert surd_compare(QuadSurd.make(1, F(2, 3)), 1) == -1
        assert surd_compare(QuadSurd.make(1, F(4, 9)), F(2, 3)) == 0
        # squares: 2 vs 49/25
        assert surd_compare(QuadSurd.make(F(1, 2), 8), F(7, 5)) == 1

    def test_compare_signs(self):
        s = QuadSurd.make(-1, 2)
        assert s.compare_rational(0) == -1
        assert s.compare_rational(-2) == 1  # -1.414 > -2
        assert s.compare_rational(-1) == -1
        assert QuadSurd.make(0, 5).compare_rational(0) == 0

    def test_product(self):
        assert surd_product(QuadSurd.make(1, 2), QuadSurd.make(1, 2)) == 2
        p = surd_product(QuadSurd.make(1, 2), QuadSurd.make(1, 3))
        assert isinstance(p, QuadSurd) and p.coeff == 1 and p.radicand == 6

    def test_barrier_style_product_collapses(self):
        # x0*y0 with x0 = sqrt(e/(2 a g)), y0 = (1/(2 b)) sqrt(a e g / 2) -> e/(4 b)
        e, a, g, b = F(9, 11), F(18, 11), F(77, 142), F(3, 2)
        x0 = QuadSurd.make(1, e / (2 * a * g))
        y0 = QuadSurd.make(1 / (2 * b), a * e * g / 2)
        assert surd_product(x0, y0) == e / (4 * b)
        assert surd_ratio(y0, x0) == a * g / (2 * b)

    def test_float_mirror_agrees(self):
        import random

        rng = random.Random(5)
        for _ in range(200):
            coeff = F(rng.randrange(-50, 51) or 1, rng.randrange(1, 30))
            rad = F(rng.randrange(0, 80), rng.randrange(1, 30))
            s = QuadSurd.make(coeff, rad)
            hi = float(s.approx_mp(50))
            assert s.approx() == pytest.approx(hi, rel=1e-12, abs=1e-300)
            assert float(s.square()) == pytest.approx(hi * hi, rel=1e-12, abs=1e-300)

    def test_str_roundtrip(self):
        s = QuadSurd.make(F(-1, 2), F(8, 3))
        assert QuadSurd.from_str(str(s)) == s
        assert str(QuadSurd.make(1, F(2, 3))) == "1/1*sqrt(2/3)"

    def test_negative_radicand_rejected(self):
        with pytest.raises(ValueError):
            QuadSurd.make(1, -2)


class TestOffsetSurd:
    def test_compare(self):
        # 1 - sqrt(2/3) vs rationals
        low = OffsetSurd.make(1, QuadSurd.make(-1, F(2, 3)))
        assert low.compare_rational(0) == 1  # 1 - 0.816 > 0
        assert low.compare_rational(F(1, 2)) == -1
        assert low.compare_rational(1) == -1
        hi = OffsetSurd.make(1, QuadSurd.make(1, F(2, 3)))
        assert hi.compare_rational(1) == 1
        assert hi.compare_rational(2) == -1

    def test_rational_collapse(self):
        x = OffsetSurd.make(F(3, 8), QuadSurd.make(1, F(1, 64)))
        assert x.is_rational() and x.as_rational() == F(1, 2)
        assert x.compare_rational(F(1, 2)) == 0

    def test_scale_shift(self):
        x = OffsetSurd.make(F(1, 2), QuadSurd.make(1, 2))
        y = x.scale(2).shift(3)
        assert y.offset == 4 and y.surd.coeff == 2 and y.surd.radicand == 2

    def test_str_roundtrip(self):
        x = OffsetSurd.make(F(3, 8), QuadSurd.make(1, F(1, 24)))
        assert OffsetSurd.from_str(str(x)) == x
