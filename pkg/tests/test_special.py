import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import beta as beta_fn

from dualhop_meta.errors import DomainError, QuadratureError
from dualhop_meta.quadrature import QuadratureSettings, integrate
from dualhop_meta.special import hyp2f1_line, hyp2f1_line_many, reg_inc_beta


def v_form(b, alpha, theta):
    """Independent oracle: 1 + 2 int_0^1 (1 - (1 + theta v^alpha)^-b) v^-3 dv."""
    def part(fn):
        return quad(fn, 0.0, 1.0, epsabs=1e-13, epsrel=1e-12, limit=500)[0]
    def g(v):
        # expm1/log1p keep the small-v cancellation out of the oracle.
        if isinstance(b, complex):
            return -(mpmath.expm1(-b * math.log1p(theta * v ** alpha))) * v ** -3
        return -math.expm1(-b * math.log1p(theta * v ** alpha)) * v ** -3
    if isinstance(b, complex):
        return 1.0 + 2.0 * complex(
            part(lambda v: float(complex(g(v)).real)), part(lambda v: float(complex(g(v)).imag))
        )
    return 1.0 + 2.0 * part(g)


def mp_hyp2f1(b, alpha, theta):
    d = 2.0 / alpha
    return complex(mpmath.hyp2f1(b, -d, 1.0 - d, -theta))


class TestQuadrature:
    def test_polynomial_exact(self):
        value, err = integrate(lambda x: x ** 5, [0.0, 2.0])
        assert value[0] == pytest.approx(64.0 / 6.0, abs=1e-12)

    def test_vector_valued(self):
        k = np.arange(1, 4)
        value, _ = integrate(lambda x: np.sin(np.outer(x, k)), [0.0, math.pi])
        np.testing.assert_allclose(value, (1 - np.cos(k * math.pi)) / k, atol=1e-10)

    def test_singular_endpoint(self):
        value, _ = integrate(lambda x: x ** -0.5, [0.0, 1.0])
        assert value[0] == pytest.approx(2.0, abs=1e-8)

    def test_budget_exhaustion_keeps_partial_estimate(self):
        tight = QuadratureSettings(abs_tol=1e-14, rel_tol=1e-14, max_subdivisions=3)
        with pytest.raises(QuadratureError) as info:
            integrate(lambda x: np.sin(200 * x), [0.0, 1.0], tight)
        assert info.value.estimate is not None
        assert info.value.error is not None

    def test_bad_settings(self):
        with pytest.raises(ValueError):
            QuadratureSettings(abs_tol=0.0)


class TestHyp2f1Line:
    @pytest.mark.parametrize("alpha,theta", [(3.0, 0.7), (4.0, 2.0), (2.5, 10.0)])
    def test_order_zero(self, alpha, theta):
        assert hyp2f1_line(0, alpha, theta) == 1.0

    @pytest.mark.parametrize("b", [0.5, 1.0, 2.0, -1.0, 1 + 2j])
    def test_theta_zero(self, b):
        assert hyp2f1_line(b, 4.0, 0.0) == 1.0

    def test_arctan_closed_form(self):
        assert hyp2f1_line(1, 4.0, 1.0) == pytest.approx(1.0 + math.pi / 4, abs=1e-10)
        assert hyp2f1_line(1, 4.0, 1.0) == pytest.approx(1.785398, abs=5e-7)

    def test_terminating_series(self):
        assert hyp2f1_line(-1, 4.0, 0.1) == pytest.approx(0.9, abs=1e-12)
        assert hyp2f1_line(-1, 3.0, 0.4) == pytest.approx(1.0 - 0.8, abs=1e-12)

    def test_real_order_returns_real(self):
        assert isinstance(hyp2f1_line(2.0, 4.0, 1.0), float)
        assert isinstance(hyp2f1_line(2.0 + 0j, 4.0, 1.0), complex)

    @pytest.mark.parametrize("b", [-1.0, 0.5, 1.0, 2.0, 1j, 1 + 2j])
    @pytest.mark.parametrize("theta", [0.1, 1.0, 10.0])
    @pytest.mark.parametrize("alpha", [3.0, 4.0])
    def test_two_representations_agree(self, b, theta, alpha):
        ours = hyp2f1_line(b, alpha, theta)
        assert abs(ours - v_form(b, alpha, theta)) <= 1e-8

    @pytest.mark.parametrize("b", [0.5, 2.0, 3j, 2 - 5j, -0.5])
    @pytest.mark.parametrize("theta", [0.3, 5.0])
    @pytest.mark.parametrize("alpha", [2.5, 3.0, 4.0, 6.0])
    def test_matches_series_library(self, b, theta, alpha):
        ours = hyp2f1_line(b, alpha, theta)
        assert abs(ours - mp_hyp2f1(b, alpha, theta)) <= 1e-8 * max(1.0, abs(ours))

    def test_large_imaginary_order(self):
        ours = hyp2f1_line(400j, 4.0, 10.0)
        assert abs(ours - mp_hyp2f1(400j, 4.0, 10.0)) <= 1e-7 * abs(ours)

    def test_many_matches_scalar(self):
        bs = np.array([0.0, 0.5j, 1 + 1j, 3.0 - 2j])
        many = hyp2f1_line_many(bs, 3.0, 2.0)
        for b, v in zip(bs, many):
            assert v == pytest.approx(hyp2f1_line(complex(b), 3.0, 2.0), abs=1e-9)

    @pytest.mark.parametrize("alpha", [2.0, 1.5])
    def test_alpha_domain(self, alpha):
        with pytest.raises(DomainError):
            hyp2f1_line(1.0, alpha, 1.0)

    def test_theta_domain(self):
        with pytest.raises(DomainError):
            hyp2f1_line(1.0, 4.0, -0.1)

    def test_nonfinite_order(self):
        with pytest.raises(DomainError):
            hyp2f1_line(math.nan, 4.0, 1.0)

    def test_quadrature_failure_propagates(self):
        with pytest.raises(QuadratureError):
            hyp2f1_line(5000j, 4.0, 10.0, QuadratureSettings(max_subdivisions=10))

    @settings(max_examples=40, deadline=None)
    @given(
        re=st.floats(-3, 3), im=st.floats(-30, 30),
        alpha=st.floats(2.2, 6.0), theta=st.floats(0.0, 20.0),
    )
    def test_conjugate_symmetry(self, re, im, alpha, theta):
        b = complex(re, im)
        assert hyp2f1_line(b.conjugate(), alpha, theta) == pytest.approx(
            hyp2f1_line(b, alpha, theta).conjugate(), abs=1e-12
        )

    @settings(max_examples=40, deadline=None)
    @given(
        b=st.floats(0.0, 5.0), alpha=st.floats(2.2, 6.0),
        theta=st.floats(0.0, 50.0), dtheta=st.floats(0.0, 5.0), db=st.floats(0.0, 2.0),
    )
    def test_real_order_monotone(self, b, alpha, theta, dtheta, db):
        base = hyp2f1_line(b, alpha, theta)
        assert base >= 1.0 - 1e-12
        assert hyp2f1_line(b, alpha, theta + dtheta) >= base - 1e-9
        assert hyp2f1_line(b + db, alpha, theta) >= base - 1e-9


class TestRegIncBeta:
    @pytest.mark.parametrize("a,b", [(0.3, 0.7), (2.0, 5.0), (40.0, 3.0)])
    def test_endpoints(self, a, b):
        assert reg_inc_beta(0.0, a, b) == 0.0
        assert reg_inc_beta(1.0, a, b) == 1.0

    def test_uniform(self):
        assert reg_inc_beta(0.5, 1.0, 1.0) == pytest.approx(0.5, abs=1e-15)

    def test_integration_oracle(self):
        oracle = quad(lambda t: t * (1 - t) ** 4 / beta_fn(2, 5), 0.0, 0.3, epsabs=1e-14)[0]
        assert reg_inc_beta(0.3, 2.0, 5.0) == pytest.approx(oracle, abs=1e-12)
        assert reg_inc_beta(0.3, 2.0, 5.0) == pytest.approx(0.579825, abs=1e-12)

    @pytest.mark.parametrize("x", [0.01, 0.2, 0.5, 0.77, 0.99])
    @pytest.mark.parametrize("a,b", [(0.5, 0.5), (1.7, 9.0), (12.0, 0.8), (150.0, 40.0)])
    def test_against_quadrature(self, x, a, b):
        # Oracle: integrate the Beta density directly.
        logB = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
        dens = lambda t: math.exp((a - 1) * math.log(t) + (b - 1) * math.log1p(-t) - logB)  # noqa: E731
        lo, hi = (0.0, x) if x < 0.5 else (x, 1.0)
        mass = quad(dens, lo, hi, epsabs=1e-14, epsrel=1e-13, limit=400)[0]
        oracle = mass if x < 0.5 else 1.0 - mass
        assert reg_inc_beta(x, a, b) == pytest.approx(oracle, abs=1e-10)

    @settings(max_examples=60, deadline=None)
    @given(x=st.floats(0.0, 1.0), a=st.floats(0.05, 200.0), b=st.floats(0.05, 200.0))
    def test_symmetry_identity(self, x, a, b):
        x = 1.0 - (1.0 - x)  # make 1 - x exact in floating point
        assert reg_inc_beta(x, a, b) + reg_inc_beta(1.0 - x, b, a) == pytest.approx(1.0, abs=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(
        x=st.floats(0.0, 1.0), dx=st.floats(0.0, 1.0),
        a=st.floats(0.1, 50.0), b=st.floats(0.1, 50.0),
    )
    def test_monotone_in_x(self, x, dx, a, b):
        y = min(1.0, x + dx)
        assert reg_inc_beta(y, a, b) >= reg_inc_beta(x, a, b) - 1e-12

    @pytest.mark.parametrize("a,b", [(0.0, 1.0), (1.0, -2.0)])
    def test_shape_domain(self, a, b):
        with pytest.raises(DomainError):
            reg_inc_beta(0.5, a, b)

    def test_x_domain(self):
        with pytest.raises(DomainError):
            reg_inc_beta(1.5, 1.0, 1.0)
