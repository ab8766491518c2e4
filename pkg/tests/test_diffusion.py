import math

import numpy as np
import pytest
from scipy.integrate import quad

from dofp.config import DEFAULTS
from dofp.diffusion import (DiffusionPoint, density, equation_residual,
                            fourier_transform, log_slope, moment,
                            regime_report)
from dofp.errors import DomainError
from dofp.poisson import PgfRequest, pgf
from dofp.randomtime import DistributedOrder, time_density, time_moment
from dofp.specfun import gamma_fn, mittag_leffler


def heat_kernel(x, t):
    return math.exp(-x * x / (4.0 * t)) / math.sqrt(4.0 * math.pi * t)


class TestDensity:
    def test_classical_heat_kernel(self):
        p = DistributedOrder(nu1=0.5, nu2=1.0, n1=0.0, lam=1.0)
        for x in (0.0, 0.7, 2.0):
            for t in (0.5, 1.5):
                pt = DiffusionPoint(x=x, t=t, p=p)
                assert density(pt) == pytest.approx(heat_kernel(x, t), rel=1e-7)

    def test_symmetry_exact(self, unit_rate_order):
        for x in (0.4, 1.3):
            a = density(DiffusionPoint(x=x, t=1.0, p=unit_rate_order))
            b = density(DiffusionPoint(x=-x, t=1.0, p=unit_rate_order))
            assert a == b

    def test_normalization(self, unit_rate_order):
        val, _ = quad(lambda x: density(DiffusionPoint(x=x, t=1.0, p=unit_rate_order)),
                      0.0, 12.0, limit=80)
        assert 2.0 * val == pytest.approx(1.0, abs=1e-5)

    def test_origin_value_against_direct_subordination(self, unit_rate_order):
        p = unit_rate_order
        want, _ = quad(lambda u: time_density(p, u, 1.0) / math.sqrt(4.0 * math.pi * u),
                       0.0, 30.0, limit=200, points=[1e-6, 0.1])
        got = density(DiffusionPoint(x=0.0, t=1.0, p=p))
        assert got == pytest.approx(want, abs=1e-6)

    def test_rejects_non_unit_rate(self):
        p = DistributedOrder(nu1=0.4, nu2=0.8, n1=0.5, lam=2.0)
        with pytest.raises(DomainError):
            DiffusionPoint(x=0.0, t=1.0, p=p)


class TestFourierTransform:
    def test_normalized_at_zero(self, unit_rate_order):
        assert fourier_transform(0.0, 1.0, unit_rate_order) == 1.0

    def test_single_order_reduction(self):
        p = DistributedOrder(nu1=0.4, nu2=0.8, n1=0.0, lam=1.0)
        for th in (0.5, 1.0, 2.0):
            want = mittag_leffler(0.8, 1.0, -th * th * 1.0 ** 0.8)
            assert fourier_transform(th, 1.0, p) == pytest.approx(want, rel=1e-12)

    def test_shares_generating_function_path(self, unit_rate_order):
        # theta^2 plays the role of the count argument: same code path
        for th in (0.4, 0.8):
            u = 1.0 - th * th
            a = fourier_transform(th, 1.0, unit_rate_order)
            b = pgf(PgfRequest(p=unit_rate_order, u=u, t=1.0))
            assert a == pytest.approx(b, abs=1e-12)

    def test_matches_numerical_fourier_integral(self, unit_rate_order):
        p = unit_rate_order
        theta = 1.0
        val, _ = quad(lambda x: 2.0 * math.cos(theta * x)
                      * density(DiffusionPoint(x=x, t=1.0, p=p)),
                      0.0, 12.0, limit=100)
        assert fourier_transform(theta, 1.0, p) == pytest.approx(val, abs=1e-4)


class TestMoments:
    def test_odd_moments_vanish(self, unit_rate_order):
        for k in (1, 3, 5):
            assert moment(unit_rate_order, k, 1.0) == 0.0

    def test_second_moment_closed_form(self, unit_rate_order):
        p = unit_rate_order
        for t in (0.3, 1.0, 4.0):
            x = p.n1 * t ** 0.4 / p.n2
            want = 2.0 * t ** 0.8 / p.n2 * mittag_leffler(0.4, 1.8, -x)
            assert moment(p, 2, t) == pytest.approx(want, rel=1e-10)

    def test_second_moment_against_quadrature(self, unit_rate_order):
        p = unit_rate_order
        got, _ = quad(lambda x: 2.0 * x * x * density(DiffusionPoint(x=x, t=1.0, p=p)),
                      0.0, 14.0, limit=100)
        assert got == pytest.approx(moment(p, 2, 1.0), rel=1e-4)

    @pytest.mark.parametrize("h", [1, 2])
    def test_moment_ladder(self, unit_rate_order, h):
        p = unit_rate_order
        want = (math.factorial(2 * h) / math.factorial(h)) * time_moment(p, h, 1.0)
        assert moment(p, 2 * h, 1.0) == pytest.approx(want, rel=1e-10)

    def test_squared_operator_comparison_small_t(self, unit_rate_order):
        # asymptotic regime probe at the config small-t point (the pinned
        # 1e-3 probe sits outside the regime; see ledger)
        p = unit_rate_order
        t = DEFAULTS.small_t_probe
        want = 2.0 * t ** (2 * p.nu2) / (p.n2 ** 2 * gamma_fn(2 * p.nu2 + 1.0))
        assert time_moment(p, 2, t) / want == pytest.approx(1.0, abs=0.05)


class TestRegimeReport:
    def test_retardation_case(self):
        rep = regime_report(DistributedOrder(nu1=0.3, nu2=0.45, n1=0.5, lam=1.0))
        assert rep.label == "retardation-emphasized"
        assert rep.large_t_exponent_time == pytest.approx(0.6)
        assert rep.small_t_exponent_time == pytest.approx(0.9)

    def test_acceleration_case(self):
        rep = regime_report(DistributedOrder(nu1=0.6, nu2=0.9, n1=0.5, lam=1.0))
        assert rep.label == "acceleration"
        assert rep.large_t_exponent_time == pytest.approx(1.2)
        assert rep.small_t_exponent_time == pytest.approx(1.8)

    def test_mixed_case(self):
        rep = regime_report(DistributedOrder(nu1=0.3, nu2=0.8, n1=0.5, lam=1.0))
        assert rep.label == "mixed"
        assert rep.small_t_exponent_time == pytest.approx(1.6)

    def test_prefactors(self, unit_rate_order):
        rep = regime_report(unit_rate_order)
        p = unit_rate_order
        assert rep.large_t_prefactor_time == pytest.approx(
            2.0 / (p.n1 ** 2 * gamma_fn(1.0 + 2 * p.nu1)), rel=1e-14)

    def test_slopes_match_reported_exponents(self, unit_rate_order):
        p = unit_rate_order
        rep = regime_report(p)
        s_small = log_slope(lambda t: moment(p, 2, t), 1e-3)
        s_large = log_slope(lambda t: moment(p, 2, t), 1e4)
        assert abs(s_small - rep.small_t_exponent_diffusion) < 0.05
        assert abs(s_large - rep.large_t_exponent_diffusion) < 0.05
        q_small = log_slope(lambda t: time_moment(p, 2, t), 1e-3)
        q_large = log_slope(lambda t: time_moment(p, 2, t), 1e4)
        assert abs(q_small - rep.small_t_exponent_time) < 0.05
        assert abs(q_large - rep.large_t_exponent_time) < 0.05


class TestEquationResidual:
    def test_zero_frequency(self, unit_rate_order):
        assert equation_residual(unit_rate_order, 0.0, 1.0) == 0.0

    def test_classical_relaxation(self):
        p = DistributedOrder(nu1=0.5, nu2=1.0, n1=0.0, lam=1.0)
        r = equation_residual(p, 1.0, 1.0, n=2048)
        assert r < 1e-5

    def test_generic_residual_small(self, unit_rate_order):
        r = equation_residual(unit_rate_order, 1.0, 1.0, n=2048)
        assert r < 5e-3
        r2 = equation_residual(unit_rate_order, 1.0, 1.0, n=4096)
        assert 0.4 * r <= r2 <= 0.6 * r
