"""Tests for the four rule constructors: node layout, weights, exactness."""

import io
import math

import numpy as np
import pytest

from stripquad.errors import InvalidParameter
from stripquad.numerics import hermite_orthonormal_recurrence, legendre_recurrence
from stripquad.rules import (
    RuleKind,
    emit_rule_csv,
    gauss_hermite_rule,
    min_separation,
    scaled_clenshaw_curtis,
    scaled_gauss_legendre,
    scaling_factor,
    trapezoidal_rule,
)
from stripquad.weights import DEWeight, SEWeight, StripDomain

D1 = StripDomain(1.0)
SE11 = SEWeight(1.0, 1.0)


def _eval_poly(rec, degree, xs):
    out = []
    for x in xs:
        p, _, log_scale = rec.value_and_derivative(degree, x)
        out.append(p * math.exp(log_scale))
    return np.array(out)


class TestTrapezoidal:
    def test_se_step(self):
        rule = trapezoidal_rule(D1, SE11, 8)
        assert rule.meta.xi_min == pytest.approx(math.sqrt(math.pi / 4.0), rel=1e-15)
        assert rule.n == 17
        assert np.all(rule.weights == rule.meta.xi_min)

    def test_de_step(self):
        rule = trapezoidal_rule(D1, DEWeight(1.0, 1.0, 1.0), 10)
        assert rule.meta.xi_min == pytest.approx(math.log(20.0 * math.pi) / 10.0,
                                                 rel=1e-15)

    def test_center_node_exact_zero(self):
        rule = trapezoidal_rule(D1, SE11, 5)
        assert rule.nodes[5] == 0.0

    def test_de_small_m_guard(self):
        with pytest.raises(InvalidParameter):
            trapezoidal_rule(D1, DEWeight(1.0, 1.0, 0.01), 1)

    def test_rejects_bad_m(self):
        with pytest.raises(InvalidParameter):
            trapezoidal_rule(D1, SE11, 0)
        with pytest.raises(InvalidParameter):
            trapezoidal_rule(D1, SE11, 2.5)


class TestScalingFactor:
    def test_se(self):
        assert scaling_factor(SEWeight(1.0, 1.0), 16, 1.0) == 4.0

    def test_de(self):
        assert scaling_factor(DEWeight(1.0, 1.0, 1.0), 20, 2.0) == \
            pytest.approx(2.0 * math.log(20.0), rel=1e-15)

    def test_de_gamma_l_guard(self):
        with pytest.raises(InvalidParameter):
            scaling_factor(DEWeight(1.0, 1.0, 0.5), 16, 1.0)
        # boundary accepted
        assert scaling_factor(DEWeight(1.0, 1.0, 0.5), 16, 2.0) > 0.0


class TestGaussLegendre:
    def test_two_point(self):
        rule = scaled_gauss_legendre(2, 1.0)
        r = 1.0 / math.sqrt(3.0)
        assert rule.nodes == pytest.approx([-r, r], rel=1e-14)
        assert rule.weights == pytest.approx([1.0, 1.0], rel=1e-14)

    def test_two_point_scaled(self):
        rule = scaled_gauss_legendre(2, 3.0)
        assert rule.nodes == pytest.approx([-math.sqrt(3.0), math.sqrt(3.0)], rel=1e-14)
        assert rule.weights == pytest.approx([3.0, 3.0], rel=1e-14)
        assert math.fsum(rule.weights) == pytest.approx(6.0, rel=1e-14)

    @pytest.mark.parametrize("n", [1, 3, 7, 15, 33])
    def test_odd_middle_node_is_zero(self, n):
        rule = scaled_gauss_legendre(n, 2.0)
        assert rule.nodes[n // 2] == 0.0

    @pytest.mark.parametrize("n", list(range(1, 21)) + [50])
    def test_against_eigenvalue_oracle(self, n):
        x_ref, w_ref = np.polynomial.legendre.leggauss(n)
        rule = scaled_gauss_legendre(n, 1.0)
        assert np.max(np.abs(rule.nodes - x_ref)) < 1e-12
        assert np.max(np.abs(rule.weights - w_ref)) < 1e-12

    @pytest.mark.parametrize("n", [3, 8, 33])
    def test_theta_brackets(self, n):
        rule = scaled_gauss_legendre(n, 1.0)
        theta = np.arccos(np.clip(rule.nodes, -1.0, 1.0))
        for i in range(1, n // 2 + 1):
            t = theta[i - 1]
            assert (1.0 - i / (n + 1.0)) * math.pi <= t + 1e-12
            assert t - 1e-12 <= (1.0 - (i - 0.5) / n) * math.pi

    def test_exactness_random_polynomials(self):
        # random combinations of Legendre polynomials; the reference integral
        # is 2T*c0 by orthogonality
        rng = np.random.default_rng(53)
        rec = legendre_recurrence()
        checked = 0
        for n in (2, 3, 5, 9, 17, 33, 50):
            rule = scaled_gauss_legendre(n, 2.5)
            T = 2.5
            for _ in range(30):
                degree = int(rng.integers(0, 2 * n))
                coeff = rng.uniform(-1.0, 1.0, size=degree + 1)
                coeff[0] = rng.uniform(0.5, 1.5)
                vals = np.zeros_like(rule.nodes)
                for j in range(degree + 1):
                    vals += coeff[j] * _eval_poly(rec, j, rule.nodes / T)
                approx = float(rule.weights @ vals)
                exact = 2.0 * T * coeff[0]
                assert abs(approx - exact) <= 1e-10 * abs(exact)
                checked += 1
            if checked >= 200:
                break
        assert checked >= 200

    def test_positive_weights(self):
        for n in (1, 2, 9, 40, 64):
            assert np.all(scaled_gauss_legendre(n, 1.0).weights > 0.0)


class TestClenshawCurtis:
    def test_three_point_simpson(self):
        rule = scaled_clenshaw_curtis(3, 1.0)
        assert rule.nodes == pytest.approx([-1.0, 0.0, 1.0], abs=1e-15)
        assert rule.weights == pytest.approx([1/3, 4/3, 1/3], rel=1e-14)

    def test_two_point_endpoints(self):
        rule = scaled_clenshaw_curtis(2, 5.0)
        assert rule.nodes == pytest.approx([-5.0, 5.0], rel=1e-15)
        assert rule.weights == pytest.approx([5.0, 5.0], rel=1e-15)

    @pytest.mark.parametrize("n", [2, 3, 4, 9, 16, 33, 64, 101])
    def test_weight_sum_is_full_length(self, n):
        rule = scaled_clenshaw_curtis(n, 3.0)
        assert math.fsum(rule.weights) == pytest.approx(6.0, rel=1e-13)

    @pytest.mark.parametrize("n", [2, 5, 12, 33, 64])
    def test_exactness_to_degree_n_minus_1(self, n):
        # Chebyshev combinations: integral of T_j over [-1,1] is 0 for odd j
        # and 2/(1-j^2) for even j
        rng = np.random.default_rng(59)
        T = 1.7
        rule = scaled_clenshaw_curtis(n, T)
        theta = np.arccos(np.clip(rule.nodes / T, -1.0, 1.0))
        for _ in range(20):
            coeff = rng.uniform(-1.0, 1.0, size=n)   # degrees 0..n-1
            vals = np.zeros_like(rule.nodes)
            exact = 0.0
            for j, c in enumerate(coeff):
                vals += c * np.cos(j * theta)
                if j % 2 == 0:
                    exact += c * 2.0 / (1.0 - j * j) if j else 2.0 * c
            approx = float(rule.weights @ vals)
            assert abs(approx - T * exact) <= 1e-10 * max(1.0, abs(T * exact))

    def test_positive_weights_in_range(self):
        for n in (2, 3, 10, 65, 129, 257):
            assert np.all(scaled_clenshaw_curtis(n, 1.0).weights > 0.0)

    def test_rejects_n_one(self):
        with pytest.raises(InvalidParameter):
            scaled_clenshaw_curtis(1, 1.0)


class TestGaussHermite:
    def test_one_point(self):
        rule = gauss_hermite_rule(1)
        assert rule.nodes == pytest.approx([0.0], abs=0.0)
        assert rule.weights == pytest.approx([math.sqrt(math.pi)], rel=1e-15)

    def test_two_point(self):
        rule = gauss_hermite_rule(2)
        r = 1.0 / math.sqrt(2.0)
        w = math.sqrt(math.pi) / 2.0 * math.exp(0.5)
        assert rule.nodes == pytest.approx([-r, r], rel=1e-14)
        assert rule.weights == pytest.approx([w, w], rel=1e-13)

    @pytest.mark.parametrize("n", list(range(1, 21)) + [64, 160])
    def test_against_eigenvalue_oracle(self, n):
        x_ref, w_ref = np.polynomial.hermite.hermgauss(n)
        rule = gauss_hermite_rule(n)
        assert np.max(np.abs(rule.nodes - x_ref)) < 1e-12
        mod_ref = w_ref * np.exp(x_ref * x_ref)
        assert np.max(np.abs(rule.weights / mod_ref - 1.0)) < 1e-10

    def test_min_separation_bracket_n10(self):
        rule = gauss_hermite_rule(10)
        xi = min_separation(rule)
        assert math.pi / math.sqrt(21.0) < xi <= math.sqrt(10.5) / math.sqrt(21.0)

    def test_exactness_weighted_polynomials(self):
        # combinations of orthonormal Hermite polynomials against exp(-x^2);
        # only the constant term integrates to something nonzero
        rng = np.random.default_rng(61)
        rec = hermite_orthonormal_recurrence()
        for n in (2, 5, 10, 25, 50):
            rule = gauss_hermite_rule(n)
            for _ in range(10):
                degree = int(rng.integers(0, 2 * n))
                coeff = rng.uniform(-1.0, 1.0, size=degree + 1)
                coeff[0] = rng.uniform(0.5, 1.5)
                vals = np.zeros_like(rule.nodes)
                for j in range(degree + 1):
                    vals += coeff[j] * _eval_poly(rec, j, rule.nodes)
                # rule approximates integral of f = p(x) e^{-x^2}
                f_at_nodes = vals * np.exp(-rule.nodes ** 2)
                approx = float(rule.weights @ f_at_nodes)
                exact = coeff[0] * math.pi ** 0.25
                assert abs(approx - exact) <= 1e-9 * abs(exact)

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_high_degree_log_path(self):
        rule = gauss_hermite_rule(400)
        assert np.all(np.isfinite(rule.weights))
        assert np.all(rule.weights > 0.0)
        # nodes still match the eigenvalue oracle (whose raw weights
        # underflow up here, which is why ours are assembled in log scale)
        x_ref, _ = np.polynomial.hermite.hermgauss(400)
        assert np.max(np.abs(rule.nodes - x_ref)) < 1e-11

    def test_n_cap(self):
        with pytest.raises(InvalidParameter):
            gauss_hermite_rule(501)
        with pytest.raises(InvalidParameter):
            gauss_hermite_rule(0)


class TestCommonInvariants:
    @pytest.mark.parametrize("make", [
        lambda: trapezoidal_rule(D1, SE11, 12),
        lambda: scaled_gauss_legendre(14, 2.0),
        lambda: scaled_gauss_legendre(15, 2.0),
        lambda: scaled_clenshaw_curtis(14, 2.0),
        lambda: scaled_clenshaw_curtis(15, 2.0),
        lambda: gauss_hermite_rule(14),
        lambda: gauss_hermite_rule(15),
    ])
    def test_antithetic_symmetry_and_ordering(self, make):
        rule = make()
        assert np.all(np.diff(rule.nodes) > 0.0)
        assert np.max(np.abs(rule.nodes + rule.nodes[::-1])) <= 1e-13
        gap = float(np.min(np.diff(rule.nodes)))
        assert rule.meta.xi_min == pytest.approx(gap, abs=1e-13)

    def test_min_separation_equals_meta(self):
        rule = trapezoidal_rule(D1, SE11, 9)
        assert min_separation(rule) == pytest.approx(rule.meta.xi_min,
                                                     rel=1e-13)

    @pytest.mark.parametrize("n", [3, 8, 17, 33, 64])
    def test_gl_minimum_gap_estimate(self, n):
        # central-gap estimate (9 - pi^2/2) T / n^2 undershoots the true gap
        T = 3.0
        rule = scaled_gauss_legendre(n, T)
        assert min_separation(rule) >= (9.0 - math.pi ** 2 / 2.0) * T / n ** 2

    def test_min_separation_needs_two_nodes(self):
        with pytest.raises(InvalidParameter):
            min_separation(gauss_hermite_rule(1))

    def test_nodes_are_immutable(self):
        rule = gauss_hermite_rule(4)
        with pytest.raises(ValueError):
            rule.nodes[0] = 0.0


class TestRuleCsv:
    def test_layout_and_roundtrip(self):
        rule = gauss_hermite_rule(10)
        buf = io.StringIO()
        emit_rule_csv(rule, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "index,node,weight"
        assert len(lines) == 11
        nodes = [float(line.split(",")[1]) for line in lines[1:]]
        weights = [float(line.split(",")[2]) for line in lines[1:]]
        assert nodes == list(rule.nodes)
        assert weights == list(rule.weights)
        assert [int(line.split(",")[0]) for line in lines[1:]] == list(range(1, 11))
