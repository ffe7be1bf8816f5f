from fractions import Fraction
from random import Random

import pytest
import sympy

from config import Config

from errors import OutOfDomainError, PoleError, SpecSemanticError
from polyseq import (
    ParityRule, Piece, PiecewiseSequence, PointwiseRule, Polynomial, RationalFunction,
    N, asymptotic_expand, ratfun_multiply, rule_multiply, rule_shift, seq_eval, shift_index,
)

n = RationalFunction.variable()


class TestPolynomial:
    def test_normalizes_trailing_zeros(self):
        p = Polynomial((1, 2, 0, 0))
        assert p.degree == 1
        assert p.coefficients == (Fraction(1), Fraction(2))
        assert Polynomial().degree == -1
        assert Polynomial((0, 0)).is_zero

    def test_evaluation_and_arithmetic(self):
        x = Polynomial.variable()
        p = (x - 1) * (2 * x - 5)
        assert p(3) == 2
        assert p.coefficients == (Fraction(5), Fraction(-7), Fraction(2))
        assert (p - p).is_zero
        assert (x ** 3)(2) == 8

    def test_negative_power(self):
        with pytest.raises(ValueError):
            Polynomial.variable() ** -1

    def test_divmod(self):
        x = Polynomial.variable()
        q, r = divmod(x * x - 1, x - 1)
        assert q == x + 1
        assert r.is_zero
        with pytest.raises(ZeroDivisionError):
            divmod(x, Polynomial())

    def test_gcd_is_monic(self):
        x = Polynomial.variable()
        g = Polynomial.gcd(2 * (x - 1) * (x + 2), 3 * (x - 1) * (x - 7))
        assert g == x - 1

    def test_shift(self):
        x = Polynomial.variable()
        p = 3 * x - 2
        assert p.shift(-1) == 3 * x - 5
        assert p.shift(0) is p

    @pytest.mark.parametrize("poly, text", [
        (Polynomial((-5, 7, -2)), "-2*n^2 + 7*n - 5"),
        (Polynomial((0, 0, Fraction(1, 4))), "1/4*n^2"),
        (Polynomial(), "0"),
        (Polynomial((2, -1)), "-n + 2"),
    ])
    def test_to_dsl(self, poly, text):
        assert poly.to_dsl() == text


class TestRationalFunction:
    def test_canonical_form(self):
        f = (2 * n - 2) / (4 * n * n - 4)
        assert f == 1 / (2 * n + 2)
        assert f.denominator.leading == 1

    def test_evaluation_and_poles(self):
        f = 1 / (n - 2)
        assert f(3) == 1
        assert f.has_pole_at(2)
        with pytest.raises(PoleError):
            f(2)

    def test_zeros(self):
        f = (n - 3) / (n + 1)
        assert f.is_zero_at(3)
        assert not f.is_zero_at(4)

    def test_degree(self):
        assert (n * n / (n + 1)).degree == 1
        assert RationalFunction.from_value(0).degree is None
        assert RationalFunction.from_value(Fraction(2, 3)).is_constant

    def test_shift(self):
        f = n / (2 * n - 1)
        assert f.shift(-1)(5) == f(4)

    def test_multiply_and_shift_index(self):
        r = -(3 * n - 2)
        assert ratfun_multiply(r, shift_index(r, -1)) == 9 * n * n - 21 * n + 10
        assert ratfun_multiply((n - 1) / (2 * n - 1), 2 * n - 1) == n - 1
        assert shift_index(n, 1) == n + 1

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            n / RationalFunction.from_value(0)

    def test_reflected_operations(self):
        assert (1 - n)(4) == -3
        assert (Fraction(1, 2) / n)(2) == Fraction(1, 4)


    @pytest.mark.parametrize("seed", range(5))
    def test_shift_round_trip(self, seed):
        rng = Random(seed)

        def random_polynomial():
            coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(rng.randint(0, 4))]
            return Polynomial(tuple(coeffs) + (rng.choice([-3, -1, 1, 2]),))

        for f in (RationalFunction(random_polynomial()),
                  RationalFunction(random_polynomial(), random_polynomial())):
            for k in range(-3, 4):
                assert shift_index(shift_index(f, k), -k) == f
                if not f.has_pole_at(7 + k):
                    assert shift_index(f, k)(7) == f(7 + k)

    def test_backed_by_sympy_poly(self):
        f = (n - 1) / (2 * n + 4)
        assert f.numerator.poly == sympy.Poly(N / 2 - sympy.Rational(1, 2), N, domain=sympy.QQ)
        assert f.denominator.poly == sympy.Poly(N + 2, N, domain=sympy.QQ)


class TestParityRule:
    def test_make_collapses_equal_laws(self):
        assert ParityRule.make(n, n) == n
        assert isinstance(ParityRule.make(n, 2 * n), ParityRule)

    def test_branch_selection(self):
        rule = ParityRule.make(n, 2 * n)
        assert rule(4) == 4
        assert rule(5) == 10

    def test_odd_shift_swaps_branches(self):
        rule = ParityRule.make(n, 2 * n)
        shifted = rule.shift(-1)
        for k in range(2, 10):
            assert shifted(k) == rule(k - 1)

    def test_multiply_with_parity(self):
        rule = rule_multiply(ParityRule.make(n, 2 * n), n)
        assert rule(3) == 18
        assert rule(4) == 16

    def test_to_dsl(self):
        assert ParityRule.make(n, 2 * n).to_dsl() == "alt(n, 2*n)"


class TestPointwiseRule:
    def test_memoized_and_shiftable(self):
        calls = []

        def square(k):
            calls.append(k)
            return k * k

        rule = PointwiseRule(square, "square")
        assert rule(3) == 9
        assert rule(3) == 9
        assert calls == [3]
        assert rule_shift(rule, -1)(4) == 9

    def test_cache_is_bounded(self):
        rule = PointwiseRule(lambda k: k + 1)
        assert rule.cache_info().maxsize == Config.POINTWISE_CACHE_SIZE
        rule(1)
        rule(1)
        assert rule.cache_info().hits == 1

    def test_str_is_the_label(self):
        rule = PointwiseRule(lambda k: k, "ident")
        assert str(rule) == "ident"
        assert str(PiecewiseSequence.with_head([1], rule)) == "a(n) = { 1 for n in 1..1; ident for n >= 2 }"

    def test_no_closed_form(self):
        with pytest.raises(SpecSemanticError):
            PointwiseRule(lambda k: k).to_dsl()


class TestPiecewiseSequence:
    def test_coverage(self):
        seq = PiecewiseSequence.with_head([1, 1], -(n - 1) * (2 * n - 5))
        assert seq.values(1, 5) == [1, 1, -2, -9, -20]
        assert seq_eval(seq, 6) == -35

    def test_below_start(self):
        seq = PiecewiseSequence.from_rule(n)
        with pytest.raises(OutOfDomainError):
            seq(0)

    @pytest.mark.parametrize("pieces", [
        (Piece(1, 2, n),),
        (Piece(1, 2, n), Piece(4, None, n)),
        (Piece(1, 3, n), Piece(3, None, n)),
        (Piece(2, None, n),),
        (Piece(1, None, n), Piece(5, None, n)),
    ])
    def test_invalid_coverage(self, pieces):
        with pytest.raises(SpecSemanticError):
            PiecewiseSequence(pieces)

    def test_first_pole_and_zero(self):
        seq = PiecewiseSequence.from_rule((n - 3) / (n - 5))
        assert seq.first_zero(10) == 3
        assert seq.first_pole(10) == 5
        assert seq.first_pole(4) is None

    def test_to_dsl(self):
        seq = PiecewiseSequence.with_head([1], n - 1, name="a")
        assert seq.to_dsl() == "a(n) = { 1 for n in 1..1; n - 1 for n >= 2 }"
        assert PiecewiseSequence.from_rule(2, name="b").to_dsl() == "b(n) = 2"

    @pytest.mark.parametrize("seq", [
        PiecewiseSequence.with_head([1, 1], -(n - 1) * (2 * n - 5)),
        PiecewiseSequence.with_head([1], -(3 * n - 2), start_index=0, name="r"),
        PiecewiseSequence((Piece(1, 3, n), Piece(4, 9, n * n), Piece(10, None, 1 / n)), 1),
    ])
    def test_every_index_has_exactly_one_piece(self, seq):
        start = seq.start_index
        for k in range(start, start + 10 ** 4 + 1):
            assert sum(piece.contains(k) for piece in seq.pieces) == 1
            assert seq.piece_at(k).contains(k)


class TestAsymptoticExpansion:
    def test_worpitzky_rho_of_the_conjecture(self):
        rho = (-2 * n * n + 7 * n - 5) / (9 * n * n - 21 * n + 10)
        expansion = asymptotic_expand(rho, -2)
        assert expansion.top_degree == 0
        assert expansion.coefficients == (Fraction(-2, 9), Fraction(7, 27), Fraction(8, 27))
        assert expansion.coefficient(-1) == Fraction(7, 27)

    def test_transformed_numerator(self):
        a = -(3 * n - 2) * (3 * n - 5) * (n - 1) ** 2 / ((2 * n - 3) * (2 * n - 1))
        expansion = asymptotic_expand(a, -1)
        assert expansion.top_degree == 2
        assert expansion.coefficients == (
            Fraction(-9, 4), Fraction(21, 4), Fraction(-49, 16), Fraction(3, 16),
        )

    def test_polynomial_is_its_own_expansion(self):
        expansion = asymptotic_expand(-2 * n * n + 7 * n - 5, 0)
        assert expansion.coefficients == (Fraction(-2), Fraction(7), Fraction(-5))

    def test_expansion_tracks_large_n(self):
        rho = (-2 * n * n + 7 * n - 5) / (9 * n * n - 21 * n + 10)
        expansion = asymptotic_expand(rho, -2)
        big = 10 ** 4
        assert abs(expansion(big) - rho(big)) < Fraction(1, big ** 2)

    def test_remainder_constant_does_not_grow(self):
        rho = (-2 * n * n + 7 * n - 5) / (9 * n * n - 21 * n + 10)
        expansion = asymptotic_expand(rho, -2)
        constants = [abs(expansion(big) - rho(big)) * big ** 3 for big in (10 ** 3, 10 ** 4, 10 ** 6)]
        assert all(later <= earlier for earlier, later in zip(constants, constants[1:]))
        assert constants[0] < 1

    def test_order_above_top(self):
        with pytest.raises(OutOfDomainError):
            asymptotic_expand(1 / n, 0)
