import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualhop_meta.errors import DomainError
from dualhop_meta.moments import (
    coverage_probability,
    csp_variance,
    is_divergent,
    mean_local_delay,
    moment_dual_hop,
    moment_first_hop,
    moment_tier,
    moment_total,
    moment_total_many,
)
from dualhop_meta.network import association_probability, default_config


def config(theta=1.0, alpha=4.0, bias2=1.0, lambda2=70.0):
    cfg = default_config(theta).with_tier(2, bias=bias2, density=lambda2)
    return cfg.with_tier(1, path_loss_exponent=alpha).with_tier(2, path_loss_exponent=alpha)


ARCTAN = 1.0 + math.pi / 4.0
C2 = math.sqrt(10.0) / 35.0  # competing-tier term seen by relays at the default densities


class TestExamples:
    def test_tier_first_moment(self):
        assert moment_tier(1, config(), 2) == pytest.approx(1.0 / (C2 + ARCTAN), abs=1e-12)
        assert moment_tier(1, config(), 2) == pytest.approx(0.53312, abs=5e-6)

    def test_tier_negative_order(self):
        assert moment_tier(-1, config(0.1), 2) == pytest.approx(1.0 / (C2 + 0.9), abs=1e-12)
        assert moment_tier(-1, config(0.1), 2) == pytest.approx(1.00974, abs=5e-6)

    def test_first_hop(self):
        assert moment_first_hop(0, config()) == 1.0
        assert moment_first_hop(1, config()) == pytest.approx(1.0 / ARCTAN, abs=1e-12)
        assert moment_first_hop(-1, config(0.1)) == pytest.approx(1.0 / 0.9, abs=1e-12)

    def test_first_hop_divergence(self):
        assert is_divergent(moment_first_hop(-1, config(1.0)))

    def test_dual_hop(self):
        cfg = config()
        assert moment_dual_hop(0, cfg) == pytest.approx(association_probability(cfg, 2), abs=1e-14)
        assert moment_dual_hop(1, cfg) == pytest.approx(0.29860, abs=5e-6)
        assert moment_dual_hop(1, config(0.0)) == pytest.approx(association_probability(cfg, 2))

    def test_total(self):
        assert moment_total(0, config()) == pytest.approx(1.0, abs=1e-14)
        # Direct-link term: tier-1 competing term is 35 / sqrt(10).
        direct = 1.0 / (35.0 / math.sqrt(10.0) + ARCTAN)
        assert moment_total(1, config()) == pytest.approx(
            1.0 / ARCTAN / (C2 + ARCTAN) + direct, abs=1e-12
        )
        assert moment_total(1, config()) == pytest.approx(0.37640, abs=5e-6)
        assert moment_total(1, config(0.0)) == pytest.approx(1.0, abs=1e-14)

    def test_coverage(self):
        assert coverage_probability(config()) == pytest.approx(0.3764, abs=5e-5)
        assert coverage_probability(config(1e-12)) == pytest.approx(1.0, abs=1e-5)
        assert coverage_probability(config(bias2=10.0)) < coverage_probability(config())

    def test_variance_limits(self):
        assert csp_variance(config(0.0)) == 0.0
        assert csp_variance(config(1e6)) < 1e-3
        assert csp_variance(config()) > 0.0

    def test_local_delay(self):
        expected = (1 / 0.9) * (1 / (C2 + 0.9)) + 1 / (35 / math.sqrt(10) + 0.9)
        assert mean_local_delay(config(0.1)) == pytest.approx(expected, abs=1e-12)
        assert mean_local_delay(config(0.1)) == pytest.approx(1.2055, abs=5e-5)
        assert mean_local_delay(config(0.0)) == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("theta", [1.0, 2.0, 50.0])
    def test_local_delay_divergent(self, theta):
        assert is_divergent(mean_local_delay(config(theta)))

    def test_divergence_only_for_negative_real(self):
        assert not is_divergent(moment_total(-1 + 0.5j, config(5.0)))
        assert is_divergent(math.inf) and not is_divergent(1.0) and not is_divergent(1j)

    def test_bad_order(self):
        with pytest.raises(DomainError):
            moment_total(math.nan, config())
        with pytest.raises(DomainError):
            moment_total("1", config())

    def test_many_matches_scalar(self):
        bs = [0.3j, 1.0 + 2.0j, 5j]
        many = moment_total_many(bs, config(2.0))
        for b, v in zip(bs, many):
            assert v == pytest.approx(moment_total(b, config(2.0)), abs=1e-12)
        with pytest.raises(DomainError):
            moment_total_many([-1.0], config())


GRID = list(itertools.product([0.1, 1.0, 10.0], [3.0, 4.0], [1.0, 10.0, 30.0]))


class TestInvariants:
    @pytest.mark.parametrize("theta,alpha,bias2", GRID)
    def test_zeroth_moment(self, theta, alpha, bias2):
        assert moment_total(0, config(theta, alpha, bias2)) == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("theta,alpha,bias2", GRID)
    def test_jensen_chain(self, theta, alpha, bias2):
        cfg = config(theta, alpha, bias2)
        m1, m2 = moment_total(1, cfg), moment_total(2, cfg)
        assert m1 * m1 <= m2 + 1e-10
        assert m2 <= m1 + 1e-10
        assert m1 <= 1.0

    @pytest.mark.parametrize("theta,alpha,bias2", GRID)
    def test_non_increasing_in_order(self, theta, alpha, bias2):
        cfg = config(theta, alpha, bias2)
        values = [moment_total(b, cfg) for b in (0.5, 1.0, 2.0, 3.0)]
        assert all(0.0 <= v <= 1.0 for v in values)
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))

    @settings(max_examples=30, deadline=None)
    @given(re=st.floats(-0.5, 3), im=st.floats(-20, 20), theta=st.floats(0.01, 20))
    def test_conjugate_symmetry(self, re, im, theta):
        b = complex(re, im)
        cfg = config(theta)
        assert moment_total(b.conjugate(), cfg) == pytest.approx(
            moment_total(b, cfg).conjugate(), abs=1e-12
        )

    @settings(max_examples=30, deadline=None)
    @given(
        b=st.floats(0.1, 4), theta_d=st.floats(0, 20), theta_2=st.floats(0, 20),
        dt=st.floats(0.01, 5),
    )
    def test_monotone_in_thresholds(self, b, theta_d, theta_2, dt):
        from dataclasses import replace

        cfg = replace(default_config(), theta_d=theta_d, theta_2=theta_2)
        base = moment_total(b, cfg)
        assert moment_total(b, replace(cfg, theta_d=theta_d + dt)) <= base + 1e-12
        assert moment_total(b, replace(cfg, theta_2=theta_2 + dt)) <= base + 1e-12

    @pytest.mark.parametrize("theta", [0.01, 0.1, 1.0, 10.0, 100.0])
    def test_bias_loss(self, theta):
        values = [coverage_probability(config(theta, bias2=b)) for b in (1.0, 10.0, 30.0)]
        assert values[0] > values[1] > values[2]

    @pytest.mark.parametrize("alpha", [3.0, 4.0])
    def test_delay_growth(self, alpha):
        delays = [
            mean_local_delay(config(0.1, alpha, bias2=10.0, lambda2=lam))
            for lam in range(10, 101, 10)
        ]
        assert all(math.isfinite(d) and d >= 1.0 for d in delays)
        assert all(b >= a - 1e-12 for a, b in zip(delays, delays[1:]))

    def test_delay_alpha_ordering(self):
        for lam in range(10, 101, 10):
            d3 = mean_local_delay(config(0.1, 3.0, bias2=10.0, lambda2=lam))
            d4 = mean_local_delay(config(0.1, 4.0, bias2=10.0, lambda2=lam))
            assert d3 >= d4

    def test_unequal_alpha_runs(self):
        cfg = config().with_tier(2, path_loss_exponent=3.0)
        # Verbatim per-tier formula: the zeroth moment is the (unnormalised)
        # association sum, see test_network.
        a = association_probability(cfg, 1) + association_probability(cfg, 2)
        assert moment_total(0, cfg) == pytest.approx(a, abs=1e-12)
        assert 0.0 < moment_total(1, cfg) < 1.0
