import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import eval_genlaguerre

from wishart_tw.errors import DomainError
from wishart_tw.specfun import airy, airy_arrays, laguerre_weighted, laguerre_weighted_all, log_gamma


def maclaurin_airy(x, terms=80):
    """Ai and Ai' from the two power series f and g, summed in exact order."""
    c1 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
    c2 = 3.0 ** (-1.0 / 3.0) / math.gamma(1.0 / 3.0)
    f = g = 0.0
    fp = gp = 0.0
    tf, tg = 1.0, x
    for k in range(terms):
        f += tf
        g += tg
        # derivative terms: d/dx x^(3k) and x^(3k+1)
        if k > 0:
            fp += tf * 3 * k / x if x != 0 else 0.0
        gp += tg * (3 * k + 1) / x if x != 0 else (1.0 if k == 0 else 0.0)
        tf *= x**3 / ((3 * k + 2) * (3 * k + 3))
        tg *= x**3 / ((3 * k + 3) * (3 * k + 4))
    return c1 * f - c2 * g, c1 * fp - c2 * gp


def asymptotic_airy(x, terms=12):
    """Large-x expansion of Ai and Ai' with the standard u_k, v_k coefficients."""
    zeta = 2.0 / 3.0 * x**1.5
    u = [1.0]
    v = [1.0]
    for k in range(1, terms):
        uk = u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
        u.append(uk)
        v.append(-uk * (6 * k + 1) / (6 * k - 1))
    s_u = sum((-1) ** k * u[k] / zeta**k for k in range(terms))
    s_v = sum((-1) ** k * v[k] / zeta**k for k in range(terms))
    ai = math.exp(-zeta) / (2 * math.sqrt(math.pi) * x**0.25) * s_u
    aip = -(x**0.25) * math.exp(-zeta) / (2 * math.sqrt(math.pi)) * s_v
    return ai, aip


class TestAiry:
    def test_values_at_zero(self):
        v = airy(0.0)
        assert v.ai == pytest.approx(3 ** (-2 / 3) / math.gamma(2 / 3), abs=1e-15)
        assert v.ai_prime == pytest.approx(-(3 ** (-1 / 3)) / math.gamma(1 / 3), abs=1e-15)

    def test_maclaurin_oracle_at_one(self):
        ai, aip = maclaurin_airy(1.0)
        assert ai == pytest.approx(0.1352924163, abs=1e-10)
        assert airy(1.0).ai == pytest.approx(ai, abs=1e-12)
        assert airy(1.0).ai_prime == pytest.approx(aip, abs=1e-12)

    @pytest.mark.parametrize("x", [-6.0, -3.3, -1.0, -0.2, 0.4, 1.5, 2.5])
    def test_against_series(self, x):
        ai, aip = maclaurin_airy(x, terms=120)
        v = airy(x)
        assert v.ai == pytest.approx(ai, abs=1e-12)
        assert v.ai_prime == pytest.approx(aip, abs=1e-12)

    @pytest.mark.parametrize("x", [8.0, 10.0, 14.0, 20.0])
    def test_against_asymptotic_expansion(self, x):
        ai, aip = asymptotic_airy(x)
        v = airy(x)
        assert v.ai == pytest.approx(ai, rel=1e-11, abs=1e-11)
        assert v.ai_prime == pytest.approx(aip, rel=1e-11, abs=1e-11)

    @pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.0, 5.0, 10.0])
    def test_tail_bounds(self, x):
        v = airy(x)
        env = math.exp(-2 / 3 * x**1.5) / (2 * math.sqrt(math.pi))
        assert 0 <= v.ai <= env / x**0.25
        assert abs(v.ai_prime) <= (1 + 7 / (48 * x**1.5)) * x**0.25 * env

    def test_differential_equation_residual(self):
        # five-point stencil keeps both roundoff and truncation near 1e-10
        x = np.linspace(-15, 20, 3501)
        h = 1e-3
        d = [airy_arrays(x + j * h)[1] for j in (-2, -1, 1, 2)]
        ai, _ = airy_arrays(x)
        second = (d[0] - 8 * d[1] + 8 * d[2] - d[3]) / (12 * h)
        assert np.max(np.abs(second - x * ai)) < 1e-9

    def test_monotone_decay(self):
        ai, _ = airy_arrays(np.linspace(1, 20, 400))
        assert np.all(np.diff(ai) < 0)

    @pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
    def test_nonfinite_rejected(self, bad):
        with pytest.raises(DomainError):
            airy(bad)


class TestLogGamma:
    def test_special_values(self):
        assert log_gamma(1.0) == 0.0
        assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-15)

    @pytest.mark.parametrize("n", range(0, 21))
    def test_factorials(self, n):
        assert math.exp(log_gamma(n + 1.0)) == pytest.approx(math.factorial(n), rel=1e-13)

    def test_large_argument_finite(self):
        assert math.isfinite(log_gamma(171.0))
        with pytest.raises(OverflowError):
            math.gamma(172.0)
        x = 1e6
        stirling = (x - 0.5) * math.log(x) - x + 0.5 * math.log(2 * math.pi) + 1 / (12 * x)
        assert log_gamma(x) == pytest.approx(stirling, rel=1e-13)

    @pytest.mark.parametrize("bad", [0.0, -1.0, -0.5])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            log_gamma(bad)

    @given(st.floats(min_value=0.01, max_value=1e4))
    def test_recurrence(self, x):
        assert log_gamma(x + 1) == pytest.approx(log_gamma(x) + math.log(x), rel=1e-12, abs=1e-12)


class TestLaguerre:
    def test_degree_zero(self):
        assert laguerre_weighted(0, 0.0, 0.0) == 1.0
        x, a = 2.7, 1.5
        expect = x ** (a / 2) * math.exp(-x / 2) / math.sqrt(math.gamma(a + 1))
        assert laguerre_weighted(0, a, x) == pytest.approx(expect, rel=1e-14)

    @pytest.mark.parametrize("x", [0.0, 0.3, 1.0, 4.0, 12.0])
    def test_degree_one(self, x):
        assert laguerre_weighted(1, 0.0, x) == pytest.approx((1 - x) * math.exp(-x / 2), abs=1e-15)

    @pytest.mark.parametrize("k,alpha", [(3, 0.0), (7, 2.5), (15, 10.0), (40, 0.5)])
    def test_against_polynomial_oracle(self, k, alpha):
        x = np.linspace(0.05, 60, 120)
        norm = math.exp(0.5 * (math.lgamma(k + 1) - math.lgamma(k + alpha + 1)))
        ref = norm * x ** (alpha / 2) * np.exp(-x / 2) * eval_genlaguerre(k, alpha, x)
        assert np.max(np.abs(laguerre_weighted(k, alpha, x) - ref)) < 1e-12

    @pytest.mark.parametrize("k,alpha", [(5, 2.0), (20, 10.0)])
    def test_unit_norm(self, k, alpha):
        val, _ = integrate.quad(lambda t: laguerre_weighted(k, alpha, t) ** 2, 0, np.inf, limit=400)
        assert abs(val - 1) < 1e-8

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 5.0])
    def test_orthonormality(self, alpha):
        kmax = 20
        top = 40 * (kmax + alpha)
        # x = u^2 removes the x^alpha endpoint behaviour
        nodes, weights = np.polynomial.legendre.leggauss(40)
        edges = np.linspace(0, math.sqrt(top), 400)
        u = np.concatenate([(a + b) / 2 + (b - a) / 2 * nodes for a, b in zip(edges[:-1], edges[1:])])
        w = np.concatenate([(b - a) / 2 * weights for a, b in zip(edges[:-1], edges[1:])]) * 2 * u
        phi = laguerre_weighted_all(kmax, alpha, u * u)
        gram = (phi * w) @ phi.T
        assert np.max(np.abs(gram - np.eye(kmax + 1))) < 1e-7

    def test_large_degree_no_overflow(self):
        k, alpha = 10_000, 5.0
        x = np.array([1.0, 100.0, 4 * k, 10 * (k + alpha)])
        vals = laguerre_weighted(k, alpha, x)
        assert np.all(np.isfinite(vals))
        assert np.all(np.abs(vals) <= 1.0)
        assert vals[-1] == 0.0 or abs(vals[-1]) < 1e-300

    def test_all_matches_single(self):
        x = np.linspace(0.1, 50, 37)
        table = laguerre_weighted_all(25, 1.5, x)
        for k in (0, 1, 9, 25):
            assert np.array_equal(table[k], laguerre_weighted(k, 1.5, x))

    def test_at_zero(self):
        assert laguerre_weighted(6, 0.0, 0.0) == pytest.approx(1.0)
        assert laguerre_weighted(6, 2.0, 0.0) == 0.0

    @pytest.mark.parametrize("alpha", [-1.0, -2.0])
    def test_alpha_domain(self, alpha):
        with pytest.raises(DomainError):
            laguerre_weighted(2, alpha, 1.0)

    def test_negative_x_rejected(self):
        with pytest.raises(DomainError):
            laguerre_weighted(2, 0.0, -1.0)

    @settings(max_examples=40, deadline=None)
    @given(
        k=st.integers(min_value=0, max_value=60),
        alpha=st.floats(min_value=-0.9, max_value=30),
        x=st.floats(min_value=1e-3, max_value=300),
    )
    def test_bounded_by_one(self, k, alpha, x):
        # orthonormal Laguerre functions satisfy |phi_k| <= 1 for alpha >= 0
        v = laguerre_weighted(k, alpha, x)
        assert math.isfinite(v)
        if alpha >= 0:
            assert abs(v) <= 1.0 + 1e-12
