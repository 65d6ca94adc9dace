from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from toricgwpt.exact_arith import (I, GaussianRational, QForm, TruncatedULaurent, exp_series,
                                   series_inverse, series_product, substitute_q_to_u)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gaussians = st.builds(GaussianRational, fractions, fractions)


def series_strategy(min_exp=-3, max_len=8):
    return st.builds(lambda lo, cs: TruncatedULaurent(lo, cs),
                     st.integers(min_exp, 2), st.lists(gaussians, min_size=1, max_size=max_len))


def sympy_coeffs(expr, lo, hi):
    u = sympy.Symbol("u")
    ser = sympy.series(expr(u), u, 0, hi + 1).removeO()
    return {k: sympy.nsimplify(ser.coeff(u, k)) for k in range(lo, hi + 1)}


def to_sympy(g: GaussianRational):
    return sympy.Rational(g.re.numerator, g.re.denominator) + sympy.I * sympy.Rational(
        g.im.numerator, g.im.denominator)


class TestGaussianRational:
    def test_i_squared(self):
        assert I * I == GaussianRational(-1)
        assert I ** 4 == 1
        assert I ** -1 == -I

    @given(gaussians, gaussians)
    def test_field_axioms(self, a, b):
        assert a + b == b + a
        assert a * b == b * a
        if b:
            assert (a / b) * b == a

    @given(gaussians)
    def test_text_round_trip(self, a):
        assert GaussianRational.parse(str(a)) == a

    @pytest.mark.parametrize("text,value", [
        ("3/4", GaussianRational(Fraction(3, 4))),
        ("-i", -I),
        ("1/2 - 1/3 i", GaussianRational(Fraction(1, 2), Fraction(-1, 3))),
        ("-5/2 i", GaussianRational(0, Fraction(-5, 2))),
    ])
    def test_parse(self, text, value):
        assert GaussianRational.parse(text) == value

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            GaussianRational(0.5)
        with pytest.raises(TypeError):
            GaussianRational.coerce(1j)


class TestTruncatedSeries:
    def test_exp_of_iu(self):
        e = exp_series(I, 3)
        assert e.coefficients == (1, I, GaussianRational(Fraction(-1, 2)), GaussianRational(0, Fraction(-1, 6)))

    def test_exp_against_sympy(self):
        c = GaussianRational(Fraction(3, 2), Fraction(-1, 3))
        ours = exp_series(c, 9)
        ref = sympy_coeffs(lambda u: sympy.exp(to_sympy(c) * u), 0, 9)
        for k, v in ref.items():
            assert sympy.simplify(to_sympy(ours[k]) - v) == 0

    def test_exp_negative_order_rejected(self):
        with pytest.raises(ValueError):
            exp_series(I, -1)

    def test_unknown_coefficient_is_an_error(self):
        s = TruncatedULaurent.monomial(0, 1, 4)
        assert s[-3] == 0
        with pytest.raises(IndexError):
            s[5]

    @given(series_strategy(), series_strategy(), series_strategy())
    @settings(max_examples=60)
    def test_product_is_associative_on_overlap(self, a, b, c):
        left = series_product(series_product(a, b), c)
        right = series_product(a, series_product(b, c))
        assert left.agrees_with(right)

    @given(series_strategy())
    @settings(max_examples=60)
    def test_inverse(self, a):
        if a.strip().valuation() is None:
            with pytest.raises(ZeroDivisionError):
                series_inverse(a)
            return
        prod = series_product(a, series_inverse(a)).strip()
        assert prod.valuation() == 0
        assert all(c == (1 if k == 0 else 0) for k, c in prod.items())

    def test_inverse_of_zero_raises(self):
        with pytest.raises(ZeroDivisionError):
            series_inverse(TruncatedULaurent.zero(5))

    def test_product_truncation_order(self):
        a = TruncatedULaurent(-2, [1, 0, 1], 0)
        b = TruncatedULaurent(1, [1, 1, 1, 1], 4)
        p = series_product(a, b)
        assert p.min_exponent == -1
        assert p.order == min(0 + 1, 4 - 2)

    @given(series_strategy())
    def test_text_round_trip(self, a):
        assert TruncatedULaurent.parse(str(a)) == a

    def test_first_mismatch(self):
        a = TruncatedULaurent(0, [1, 2, 3], 2)
        b = TruncatedULaurent(0, [1, 2, 4, 5], 3)
        assert a.first_mismatch(b) == 2
        assert a.first_mismatch(a) is None


class TestQForm:
    def test_from_q_sign_convention(self):
        f = QForm.from_q({1: 1, 2: 1})
        assert f.numerator == {Fraction(1): -1, Fraction(2): 1}
        assert str(f) == "q + q^2"

    def test_reduce_cancels_exact_factor(self):
        f = QForm.from_q({1: 1, 2: 1, 3: -1, 4: -1}, {1: 1})
        r = f.reduce()
        assert not r.denominator
        assert r == QForm.from_q({1: 1, 3: -1})

    def test_reduce_keeps_genuine_pole(self):
        f = QForm.from_q({0: 1}, {1: 1})
        assert f.reduce().denominator == {1: 1}

    def test_equality_by_cross_multiplication(self):
        f = QForm.from_q({0: 1, 1: 1}, {2: 1})  # (1+q)/(1-q^2) = 1/(1-q)
        g = QForm.from_q({0: 1}, {1: 1})  # 1/(1+q)
        assert f != g
        assert QForm.from_q({0: 1, 1: -1}, {2: 1}) == g

    @pytest.mark.parametrize("text", [
        "q + q^2",
        "-(-q)^(-1/2) + (-q)^(1/2)",
        "(1 + q) / (1-(-q)^2)",
        "1/3*q^3",
        "0",
    ])
    def test_text_round_trip(self, text):
        f = QForm.parse(text)
        assert QForm.parse(str(f)) == f

    @given(st.dictionaries(st.integers(-4, 6), fractions, max_size=5),
           st.dictionaries(st.integers(-4, 6), fractions, max_size=5))
    @settings(max_examples=50)
    def test_ring_operations_commute_with_substitution(self, a, b):
        fa, fb = QForm.from_q(a), QForm.from_q(b)
        order = 6
        lhs = substitute_q_to_u(fa * fb, order)
        rhs = series_product(substitute_q_to_u(fa, order + 8), substitute_q_to_u(fb, order + 8))
        assert lhs.agrees_with(rhs)
        assert substitute_q_to_u(fa + fb, order).agrees_with(
            substitute_q_to_u(fa, order) + substitute_q_to_u(fb, order))


class TestSubstitution:
    def test_q_itself(self):
        s = substitute_q_to_u(QForm.from_q({1: 1}), 3)
        assert s.coefficients == (-1, -I, GaussianRational(Fraction(1, 2)), GaussianRational(0, Fraction(1, 6)))

    def test_principal_numerator(self):
        # q + q^2 = -e^{iu} + e^{2iu}
        s = substitute_q_to_u(QForm.from_q({1: 1, 2: 1}), 3)
        assert s.coefficients == (0, I, GaussianRational(Fraction(-3, 2)), GaussianRational(0, Fraction(-7, 6)))

    def test_simple_pole_against_sympy(self):
        s = substitute_q_to_u(QForm.from_q({0: 1}, {1: 1}), 5)
        ref = sympy_coeffs(lambda u: 1 / (1 - sympy.exp(sympy.I * u)), -1, 5)
        assert s.min_exponent == -1
        for k, v in ref.items():
            assert sympy.simplify(to_sympy(s[k]) - v) == 0

    def test_half_integer_exponents(self):
        # (-q)^{1/2} - (-q)^{-1/2} = 2i sin(u/2)
        f = QForm({Fraction(1, 2): 1, Fraction(-1, 2): -1})
        s = substitute_q_to_u(f, 7)
        ref = sympy_coeffs(lambda u: 2 * sympy.I * sympy.sin(u / 2), 0, 7)
        for k, v in ref.items():
            assert sympy.simplify(to_sympy(s[k]) - v) == 0
