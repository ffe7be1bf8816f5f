from fractions import Fraction

import pytest

from cfengine import convergents, evaluate
from errors import GaussParameterError, OutOfDomainError
from exactnum import leibniz_partial_sum, pi_quarter
from gausshyp import (
    GaussParameters, coefficient_rule, contiguous_ratio_partial, f21_partial_sum, gauss_cf,
    gauss_coefficients, pochhammer, specialization_cf,
)
from polyseq import ParityRule

HALF = Fraction(1, 2)


@pytest.fixture
def kernel_params():
    return GaussParameters(HALF, 0, HALF, -1)


class TestParameters:
    @pytest.mark.parametrize("c, k", [(0, 0), (-1, 1), (-3, 3)])
    def test_non_positive_integer_c(self, c, k):
        with pytest.raises(GaussParameterError) as info:
            GaussParameters(1, 1, c, HALF)
        assert info.value.k == k

    def test_negative_fraction_c_is_allowed(self):
        assert GaussParameters(1, 1, Fraction(-1, 2), HALF).c == Fraction(-1, 2)

    def test_str(self, kernel_params):
        assert str(kernel_params) == "(1/2, 0; 1/2; -1)"


class TestSeries:
    def test_pochhammer(self):
        assert pochhammer(HALF, 0) == 1
        assert pochhammer(HALF, 3) == Fraction(15, 8)
        assert pochhammer(1, 5) == 120
        with pytest.raises(OutOfDomainError):
            pochhammer(1, -1)

    def test_kernel_denominator_series_is_one(self, kernel_params):
        assert f21_partial_sum(kernel_params, 10) == 1

    def test_arctan_series_is_leibniz(self):
        p = GaussParameters(HALF, 1, Fraction(3, 2), -1)
        for N in range(6):
            assert f21_partial_sum(p, N) == leibniz_partial_sum(N)

    def test_arctan_partial_sums_bracket_pi_quarter(self):
        p = GaussParameters(HALF, 1, Fraction(3, 2), -1)
        quarter = pi_quarter(40).to_fraction()
        total = Fraction(0)
        for N in range(201):
            total = f21_partial_sum(p, N)
            if N % 2 == 0:
                assert total > quarter
            else:
                assert total < quarter
        assert abs(total - quarter) < Fraction(1, 400)

    def test_contiguous_ratio_at_the_kernel(self, kernel_params):
        assert contiguous_ratio_partial(kernel_params, 2) == Fraction(13, 15)


class TestCoefficients:
    def test_kernel_coefficients(self, kernel_params):
        d = gauss_coefficients(kernel_params, 100)
        assert len(d) == 100
        assert (d[1], d[2], d[3]) == (Fraction(1, 3), Fraction(4, 15), Fraction(9, 35))
        assert all(d[k] == Fraction(k * k, 4 * k * k - 1) for k in range(1, 101))

    def test_coefficients_approach_one_quarter(self, kernel_params):
        d = gauss_coefficients(kernel_params, 200)
        assert all(abs(d[k] - Fraction(1, 4)) < Fraction(1, 8 * k * k) for k in range(2, 201))

    def test_kernel_laws_coincide(self, kernel_params):
        assert not isinstance(coefficient_rule(kernel_params), ParityRule)

    def test_alternating_laws(self):
        p = GaussParameters(1, 1, 2, HALF)
        assert isinstance(coefficient_rule(p), ParityRule)
        d = gauss_coefficients(p, 3)
        assert d[1] == Fraction(1, 6)
        assert d[2] == Fraction(1, 3)
        assert d[3] == Fraction(1, 5)

    def test_index_bounds(self, kernel_params):
        d = gauss_coefficients(kernel_params, 3)
        with pytest.raises(OutOfDomainError):
            d[0]
        with pytest.raises(OutOfDomainError):
            d[4]


class TestContinuedFraction:
    def test_kernel_numerators(self):
        cf = specialization_cf("direct")
        assert cf.b0 == 0
        assert cf.a.values(1, 4) == [1, Fraction(-1, 3), Fraction(-4, 15), Fraction(-9, 35)]
        assert cf.b.values(1, 20) == [1] * 20

    def test_classical_kernel_convergents(self):
        cf = specialization_cf("classical")
        values = [c.value for c in convergents(cf, 4)]
        assert values == [1, Fraction(3, 4), Fraction(19, 24), Fraction(40, 51)]

    def test_direct_kernel_grows_like_harmonic_numbers(self):
        values = [c.value for c in convergents(specialization_cf("direct"), 4)]
        assert values == [1, Fraction(3, 2), Fraction(11, 6), Fraction(25, 12)]

    def test_classical_kernel_value(self):
        evaluation = evaluate(specialization_cf("classical"), 8, 10 ** 5)
        assert evaluation.value.round_to(8) == pi_quarter(8)

    def test_classical_fraction_matches_series_ratio(self):
        p = GaussParameters(1, 1, 2, HALF)
        value = convergents(gauss_cf(p, convention="classical"), 60)[-1].value
        assert abs(value - contiguous_ratio_partial(p, 200)) < Fraction(1, 10 ** 15)

    def test_labels(self, kernel_params):
        assert gauss_cf(kernel_params).label == "gauss(1/2, 0; 1/2; -1)"
        assert gauss_cf(kernel_params, convention="classical").label.endswith("-classical")

    def test_zero_argument(self):
        with pytest.raises(GaussParameterError):
            gauss_cf(GaussParameters(1, 1, 2, 0))

    def test_unknown_convention(self, kernel_params):
        with pytest.raises(OutOfDomainError):
            gauss_cf(kernel_params, convention="other")
