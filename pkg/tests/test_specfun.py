import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dofp.errors import (CancellationError, DomainError, OverflowRangeError,
                         PoleError, QuadratureError)
from dofp.specfun import (GmlArgs, SeriesControl, gamma_fn, gml,
                          gml_integral_rep, kummer_1f1, mittag_leffler,
                          ml_asymptotic_tail, wright)
from oracles import mp_gml, mp_ml, mp_wright

E = math.e
SQRT_PI = math.sqrt(math.pi)


class TestGamma:
    def test_trivial_values(self):
        assert gamma_fn(1.0) == 1.0
        assert gamma_fn(0.5) == pytest.approx(SQRT_PI, rel=1e-15)

    def test_frozen_reference_value(self):
        # mpmath 50-digit evaluation, frozen
        assert gamma_fn(7.3) == pytest.approx(1271.423633663909273058, rel=1e-14)

    def test_accuracy_over_range(self):
        # >= 12 significant digits away from poles on [-170, 170]
        import mpmath as mp
        rng = np.random.default_rng(0)
        xs = np.concatenate([rng.uniform(-170, 170, 40), [-169.5, 169.5, -0.5]])
        for x in xs:
            if abs(x - round(x)) < 1e-3:
                continue
            ref = float(mp.gamma(mp.mpf(float(x))))
            assert gamma_fn(float(x)) == pytest.approx(ref, rel=1e-12)

    @pytest.mark.parametrize("x", [0.0, -1.0, -42.0])
    def test_pole_error(self, x):
        with pytest.raises(PoleError):
            gamma_fn(x)

    def test_overflow_distinct_from_pole(self):
        with pytest.raises(OverflowRangeError):
            gamma_fn(200.0)


class TestMittagLeffler:
    def test_exponential_reduction(self):
        assert mittag_leffler(1.0, 1.0, 1.0) == pytest.approx(E, rel=1e-14)

    def test_cosh_reduction(self):
        assert mittag_leffler(2.0, 1.0, 4.0) == pytest.approx(math.cosh(2.0), rel=1e-13)

    def test_frozen_negative_argument(self):
        # 500-term compensated series at 50 digits, frozen
        assert mittag_leffler(0.7, 1.0, -3.0) == pytest.approx(
            0.137897109665027071834, rel=1e-12)

    def test_large_negative_inversion_route(self):
        # series is hopeless here (peak term ~ 1e40); checked against an
        # independent high-precision inversion, frozen
        assert mittag_leffler(0.4, 1.0, -40.0) == pytest.approx(
            0.0166489051523282232, rel=1e-10)

    def test_algebraic_tail(self):
        t = 1e4
        val = mittag_leffler(0.4, 1.0, -t ** 0.4)
        assert val * t ** 0.4 * gamma_fn(1.0 - 0.4) == pytest.approx(1.0, rel=0.02)
        assert ml_asymptotic_tail(0.4, 1.0, 1.0, 1.0, t) == pytest.approx(val, rel=0.02)

    def test_positive_overflow_signalled(self):
        with pytest.raises(OverflowRangeError):
            mittag_leffler(0.5, 1.0, 800.0)

    def test_invalid_alpha(self):
        with pytest.raises(DomainError):
            mittag_leffler(-0.5, 1.0, 1.0)


class TestGml:
    def test_exponential_reduction(self):
        assert gml(GmlArgs(1.0, 1.0, 1.0, 1.0)) == pytest.approx(E, rel=1e-14)

    def test_z_zero_is_reciprocal_gamma(self):
        assert gml(GmlArgs(0.7, 2.0, 3.0, 0.0)) == pytest.approx(1.0, rel=1e-15)

    def test_frozen_negative_argument(self):
        assert gml(GmlArgs(0.5, 1.0, 2.0, -1.0)) == pytest.approx(
            0.1543715613719084393361, rel=1e-12)

    def test_large_argument_high_order(self):
        # frozen from mpmath transform inversion (series unusable)
        assert gml(GmlArgs(0.4, 2.6, 3.0, -39.8)) == pytest.approx(
            1.67213115368233254e-5, rel=1e-9)

    @given(st.floats(0.2, 1.5), st.floats(0.2, 3.0), st.floats(0.1, 4.0))
    @settings(max_examples=40, deadline=None)
    def test_z_zero_property(self, alpha, beta, gam):
        assert gml(GmlArgs(alpha, beta, gam, 0.0)) == pytest.approx(
            1.0 / gamma_fn(beta), rel=1e-13)

    def test_reduces_to_two_parameter_on_grid(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            alpha = rng.uniform(0.2, 1.8)
            beta = rng.uniform(0.3, 3.0)
            z = rng.uniform(-4.0, 2.0)
            a = gml(GmlArgs(alpha, beta, 1.0, z))
            b = mittag_leffler(alpha, beta, z)
            assert a == pytest.approx(b, rel=1e-12, abs=1e-12)

    def test_against_series_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            alpha = rng.uniform(0.3, 1.2)
            beta = rng.uniform(0.5, 2.5)
            gam = rng.uniform(0.5, 3.0)
            z = rng.uniform(-3.0, 1.5)
            assert gml(GmlArgs(alpha, beta, gam, z)) == pytest.approx(
                mp_gml(alpha, beta, gam, z), rel=1e-11, abs=1e-13)

    def test_invalid_gamma(self):
        with pytest.raises(DomainError):
            GmlArgs(0.5, 1.0, -1.0, 0.5)


class TestGmlIntegralRep:
    def test_matches_two_parameter_series(self):
        want = mittag_leffler(0.6, 1.0, -1.0)
        got = gml_integral_rep(1, 0.6, 1.0, 1.0, 1.0)
        assert got == pytest.approx(want, abs=1e-8)

    def test_grid_against_series(self):
        for k in (1, 2, 3):
            for nu in (0.3, 0.5, 0.7):
                for t in (0.5, 1.0, 2.0):
                    want = gml(GmlArgs(nu, 1.0, float(k), -t ** nu))
                    got = gml_integral_rep(k, nu, 1.0, 1.0, t)
                    assert got == pytest.approx(want, abs=1e-8), (k, nu, t)

    def test_small_t_route_equality(self):
        got = gml_integral_rep(2, 0.5, 2.0, 1.0, 1e-6)
        assert got == pytest.approx(mp_gml(0.5, 2.0, 2.0, -1e-3), abs=1e-9)

    def test_small_t_limit(self):
        # the limit value is approached like c*k*t^nu, so the 1e-6 window at
        # t = 1e-6 is reachable for weights c below ~1e-4/k
        got = gml_integral_rep(2, 0.5, 2.0, 1e-4, 1e-6)
        assert got == pytest.approx(1.0 / gamma_fn(2.0), abs=1e-6)

    def test_large_t_tail(self):
        got = gml_integral_rep(2, 0.5, 2.0, 1.0, 1e3)
        tail = 1.0 / (1e3 * gamma_fn(1.0))
        assert got == pytest.approx(tail, rel=0.05)

    def test_order_lowering_branch(self):
        # beta above the representation strip goes through the reduction
        want = gml(GmlArgs(0.4, 1.9, 1.0, -1.0))
        got = gml_integral_rep(1, 0.4, 1.9, 1.0, 1.0)
        assert got == pytest.approx(want, abs=5e-8)


class TestWright:
    def test_alpha_zero_collapses_to_exponential(self):
        assert wright(0.0, 2.0, 1.0) == pytest.approx(E / gamma_fn(2.0), rel=1e-14)

    def test_leading_term_at_x_zero(self):
        assert wright(-0.5, 0.5, 0.0) == pytest.approx(1.0 / SQRT_PI, rel=1e-15)

    def test_heat_kernel_reduction(self):
        # frozen oracle value; equals exp(-1/4)/sqrt(pi)
        got = wright(-0.5, 0.5, -1.0)
        assert got == pytest.approx(0.4393912894677223970469, rel=1e-12)
        assert got == pytest.approx(math.exp(-0.25) / SQRT_PI, rel=1e-12)

    def test_against_series_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(12):
            alpha = rng.uniform(-0.9, 1.0)
            beta = rng.uniform(0.2, 2.0)
            x = rng.uniform(-2.0, 2.0)
            assert wright(alpha, beta, x) == pytest.approx(
                mp_wright(alpha, beta, x), rel=1e-10, abs=1e-12)

    def test_cancellation_error_raised(self):
        with pytest.raises(CancellationError):
            wright(-0.5, 0.5, -20.0)

    def test_overflow_signalled_separately(self):
        with pytest.raises(OverflowRangeError):
            wright(-0.7, 0.3, -200.0)

    def test_invalid_alpha(self):
        with pytest.raises(DomainError):
            wright(-1.0, 1.0, 0.5)


class TestKummer:
    def test_self_reduction(self):
        assert kummer_1f1(2.3, 2.3, 1.0) == pytest.approx(E, rel=1e-14)

    def test_expm1_reduction(self):
        assert kummer_1f1(1.0, 2.0, 1.0) == pytest.approx(E - 1.0, rel=1e-14)

    def test_gml_identity_route(self):
        # frozen via the identity with the three-parameter function
        got = kummer_1f1(3.0, 1.5, -2.0)
        assert got == pytest.approx(-0.07499627330169028927567, rel=1e-11)
        assert got == pytest.approx(
            gamma_fn(1.5) * gml(GmlArgs(1.0, 1.5, 3.0, -2.0)), rel=1e-10)

    def test_gml_identity_on_grid(self):
        # first-parameter 1 has no inversion fallback, so give the guard a
        # budget matching the 1e-10 identity tolerance
        ctl = SeriesControl(rel_tol=1e-11, abs_tol=1e-13)
        rng = np.random.default_rng(5)
        for _ in range(30):
            a = rng.uniform(0.3, 3.0)
            c = rng.uniform(0.4, 4.0)
            z = rng.uniform(-4.0, 3.0)
            assert kummer_1f1(a, c, z, ctl) == pytest.approx(
                gamma_fn(c) * gml(GmlArgs(1.0, c, a, z), ctl), rel=1e-10, abs=1e-12)

    def test_pole_in_c(self):
        with pytest.raises(PoleError):
            kummer_1f1(1.0, -2.0, 0.5)


class TestSeriesControl:
    def test_invariants(self):
        with pytest.raises(DomainError):
            SeriesControl(abs_tol=0.0)
        with pytest.raises(DomainError):
            SeriesControl(max_terms=0)
        with pytest.raises(DomainError):
            SeriesControl(summation_mode="fancy")

    def test_plain_mode_still_accurate_for_benign_series(self):
        ctl = SeriesControl(summation_mode="plain")
        assert mittag_leffler(0.9, 1.0, -0.5, ctl) == pytest.approx(
            mp_ml(0.9, 1.0, -0.5), rel=1e-12)
