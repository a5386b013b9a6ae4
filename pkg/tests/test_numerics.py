"""Tests for the reference integrator, log-domain helpers, and root finder."""

import math

import numpy as np
import pytest

from stripquad.errors import (
    BracketViolation,
    InvalidInterval,
    InvalidParameter,
    PanelLimitExceeded,
)
from stripquad.numerics import (
    IntegrationResult,
    LogProduct,
    ThreeTermRecurrence,
    hermite_recurrence,
    integrate_reference,
    legendre_recurrence,
    log_sum_exp,
    poly_roots_by_newton,
)


class TestIntegrateReference:
    def test_constant_one(self):
        res = integrate_reference(lambda x: np.zeros_like(x), 0.0, 1.0, 1e-10)
        assert res.value == pytest.approx(1.0, rel=1e-12)
        assert res.panels_used >= 1
        assert res.abs_error_estimate >= 0.0

    def test_exponential(self):
        res = integrate_reference(lambda x: -x, 0.0, 40.0, 1e-12)
        assert res.value == pytest.approx(1.0 - math.exp(-40.0), rel=1e-12)

    def test_sech_full_line_surrogate(self):
        # antiderivative of sech is 2*arctan(e^x); on [-40, 40] the value
        # is within 4e-40 of pi
        oracle = 2.0 * (math.atan(math.exp(40.0)) - math.atan(math.exp(-40.0)))
        assert oracle == pytest.approx(math.pi, abs=1e-15)
        res = integrate_reference(lambda x: np.log(1.0 / np.cosh(x)), -40.0, 40.0, 1e-12)
        assert res.value == pytest.approx(math.pi, rel=1e-12)

    def test_scalar_callable_is_accepted(self):
        res = integrate_reference(lambda x: -x * x, -3.0, 3.0, 1e-10)
        ref = integrate_reference(lambda x: -(np.asarray(x) ** 2), -3.0, 3.0, 1e-10)
        assert res.value == pytest.approx(ref.value, rel=1e-12)

    def test_deep_log_scale_panels(self):
        # integrand about e^-700 everywhere; panels must not flush to zero
        res = integrate_reference(lambda x: -700.0 + 0.0 * x, 0.0, 1.0, 1e-10)
        assert res.value == pytest.approx(math.exp(-700.0), rel=1e-10)

    def test_vanishing_integrand(self):
        res = integrate_reference(lambda x: np.full_like(x, -math.inf), 0.0, 1.0, 1e-10)
        assert res.value == 0.0

    @pytest.mark.parametrize("a,b", [(1.0, 1.0), (2.0, 1.0),
                                     (-math.inf, 0.0), (0.0, math.nan)])
    def test_invalid_interval(self, a, b):
        with pytest.raises(InvalidInterval):
            integrate_reference(lambda x: 0.0 * x, a, b, 1e-8)

    @pytest.mark.parametrize("tol", [1e-15, 0.5, 0.01, -1e-6])
    def test_rel_tol_range(self, tol):
        with pytest.raises(InvalidParameter):
            integrate_reference(lambda x: 0.0 * x, 0.0, 1.0, tol)

    def test_panel_budget(self):
        wiggly = lambda x: np.sin(20.0 * x)
        with pytest.raises(PanelLimitExceeded):
            integrate_reference(wiggly, 0.0, 1.0, 1e-9, panel_budget=3)

    def test_breakpoints_seed_panels(self):
        res = integrate_reference(lambda x: -np.abs(x), -1.0, 1.0, 1e-10,
                                  breakpoints=[0.0])
        assert res.value == pytest.approx(2.0 * (1.0 - math.exp(-1.0)), rel=1e-10)

    def test_monotone_under_domination(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            a = rng.uniform(-4.0, 0.0)
            b = a + rng.uniform(0.5, 5.0)
            p = rng.uniform(0.2, 2.0)
            shift = rng.uniform(0.0, 3.0)
            log_g = lambda x, p=p: -p * x ** 2
            log_f = lambda x, p=p, s=shift: -p * x ** 2 - s
            rf = integrate_reference(log_f, a, b, 1e-10)
            rg = integrate_reference(log_g, a, b, 1e-10)
            assert rf.value <= (rg.value + rf.abs_error_estimate
                                + rg.abs_error_estimate)

    def test_splitting_invariance(self):
        rng = np.random.default_rng(7)
        log_f = lambda x: -0.3 * x ** 2 + np.sin(x)
        for _ in range(100):
            a = rng.uniform(-5.0, 2.0)
            b = a + rng.uniform(1.0, 6.0)
            c = rng.uniform(a + 1e-3, b - 1e-3)
            whole = integrate_reference(log_f, a, b, 1e-11)
            left = integrate_reference(log_f, a, c, 1e-11)
            right = integrate_reference(log_f, c, b, 1e-11)
            tol = (whole.abs_error_estimate + left.abs_error_estimate
                   + right.abs_error_estimate + 1e-13 * abs(whole.value))
            assert abs(whole.value - (left.value + right.value)) <= tol


class TestLogSumExp:
    def test_two_equal_terms(self):
        assert log_sum_exp([0.0, 0.0]) == pytest.approx(math.log(2.0), rel=1e-15)

    def test_empty_mass(self):
        assert log_sum_exp([-math.inf]) == -math.inf
        assert log_sum_exp([]) == -math.inf

    def test_max_subtraction_identity(self):
        # frozen from a 25-digit evaluation of ln(1 + e^-0.5)
        expected = -1000.0 + 0.47407698418010668087
        assert log_sum_exp([-1000.0, -1000.5]) == pytest.approx(expected, rel=1e-15)

    def test_never_nan(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            k = rng.integers(0, 6)
            terms = list(rng.uniform(-1e308, 700.0, size=k))
            if rng.random() < 0.5:
                terms.append(-math.inf)
            assert not math.isnan(log_sum_exp(terms))


class TestPolyRoots:
    def test_legendre_degree_two(self):
        roots = poly_roots_by_newton(legendre_recurrence(), 2,
                                     [(-0.9, -0.3), (0.3, 0.9)])
        r = 1.0 / math.sqrt(3.0)
        assert roots == pytest.approx([-r, r], rel=1e-14)

    def test_hermite_degree_two(self):
        roots = poly_roots_by_newton(hermite_recurrence(), 2,
                                     [(-1.2, -0.3), (0.3, 1.2)])
        r = 1.0 / math.sqrt(2.0)
        assert roots == pytest.approx([-r, r], rel=1e-14)

    def test_single_root_symmetric_bracket(self):
        for rec in (legendre_recurrence(), hermite_recurrence()):
            roots = poly_roots_by_newton(rec, 1, [(-0.7, 0.7)])
            assert roots == [0.0]

    @pytest.mark.parametrize("n", [5, 8, 13, 21])
    def test_against_eigenvalue_oracle(self, n):
        # brackets from numpy's independent Golub-Welsch route
        oracle = np.polynomial.legendre.leggauss(n)[0]
        brackets = [(x - 1e-3, x + 1e-3) for x in oracle]
        roots = np.array(poly_roots_by_newton(legendre_recurrence(), n, brackets))
        assert np.max(np.abs(roots - oracle)) < 1e-12
        # strictly increasing and antisymmetric
        assert np.all(np.diff(roots) > 0)
        assert np.max(np.abs(roots + roots[::-1])) < 1e-13

    def test_no_sign_change_raises(self):
        with pytest.raises(BracketViolation):
            poly_roots_by_newton(legendre_recurrence(), 2,
                                 [(-0.9, -0.7), (0.3, 0.9)])

    def test_bad_brackets(self):
        rec = legendre_recurrence()
        with pytest.raises(InvalidParameter):
            poly_roots_by_newton(rec, 2, [(-0.9, -0.3)])
        with pytest.raises(InvalidParameter):
            poly_roots_by_newton(rec, 2, [(-0.9, 0.4), (0.3, 0.9)])
        with pytest.raises(InvalidParameter):
            poly_roots_by_newton(rec, 0, [])

    def test_rescaling_keeps_high_degree_finite(self):
        rec = hermite_recurrence()
        p, dp, log_scale = rec.value_and_derivative(400, 25.0)
        assert math.isfinite(p) and math.isfinite(dp)
        # true magnitude is astronomically large, carried in log_scale
        assert log_scale > 0.0
        assert math.log(abs(p)) + log_scale > 700.0


class TestLogProduct:
    def test_sign_zero_iff_minus_inf(self):
        assert LogProduct.from_value(0.0) == LogProduct(-math.inf, 0)
        with pytest.raises(InvalidParameter):
            LogProduct(-math.inf, 1)
        with pytest.raises(InvalidParameter):
            LogProduct(0.0, 0)
        with pytest.raises(InvalidParameter):
            LogProduct(0.0, 2)

    def test_product_of_many_small_factors(self):
        acc = LogProduct.one()
        for _ in range(3000):
            acc = acc * LogProduct.from_value(math.tanh(1.0) ** 2)
        # direct product would underflow; the log form stays exact
        assert acc.log_magnitude == pytest.approx(6000.0 * math.log(math.tanh(1.0)), rel=1e-12)
        assert acc.sign == 1
        assert acc.value == 0.0  # underflows only on final exponentiation

    def test_signed_values(self):
        v = LogProduct.from_value(-2.5) * LogProduct.from_value(3.0)
        assert v.sign == -1
        assert v.value == pytest.approx(-7.5, rel=1e-14)


def test_integration_result_invariants():
    res = IntegrationResult(1.0, 0.0, 1)
    assert res.value >= -res.abs_error_estimate
