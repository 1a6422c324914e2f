"""Numerical oracles: Bessel evaluation, quadrature, Legendre-Q route."""

import math

import mpmath
import numpy as np
import pytest
from scipy.special import spherical_jn

from sphlaplace.errors import (
    DomainError,
    QuadratureConvergenceError,
    UnsupportedOrderError,
)
from sphlaplace.oracles import (
    LEGENDRE_MAX_ORDER,
    OracleResult,
    QuadratureConfig,
    laplace_quadrature,
    legendre_q_oracle,
    quadrature_transform,
    sph_bessel_j,
)

# absolute floor matters near the zeros of j_l where relative error
# is unbounded for any finite-precision method
REL_TOL = 1e-13
ABS_TOL = 1e-14


class TestSphBesselJ:
    def test_at_zero(self):
        assert sph_bessel_j(0, 0.0) == 1.0
        for l in (1, 2, 7, 40):
            assert sph_bessel_j(l, 0.0) == 0.0

    def test_against_scipy_scan(self):
        ts = np.concatenate(
            [
                np.geomspace(1e-4, 0.9, 20),
                np.linspace(1.0, 30.0, 80),
                np.geomspace(31.0, 200.0, 20),
            ]
        )
        for l in list(range(21)) + [30, 40, 50]:
            ref = spherical_jn(l, ts)
            for t, r in zip(ts, ref):
                got = sph_bessel_j(l, float(t))
                err = abs(got - r)
                assert err <= max(REL_TOL * abs(r), ABS_TOL), (l, t, got, r)

    def test_branch_boundaries_are_seamless(self):
        # the evaluation switches methods near t^2 = 2l+3 and t = l;
        # values on both sides of each boundary must agree with scipy
        for l in (4, 10, 25):
            for edge in (math.sqrt(2 * l + 3), float(l)):
                for t in (edge * 0.999, edge * 1.001):
                    got = sph_bessel_j(l, t)
                    ref = float(spherical_jn(l, t))
                    assert abs(got - ref) <= max(REL_TOL * abs(ref), ABS_TOL)

    def test_three_term_recurrence(self):
        # j_{l-1} + j_{l+1} = (2l+1)/t * j_l
        for t in (1.0, 5.0, 20.0):
            for l in range(1, 21):
                a = sph_bessel_j(l - 1, t)
                b = sph_bessel_j(l, t)
                c = sph_bessel_j(l + 1, t)
                resid = a + c - (2 * l + 1) / t * b
                scale = max(abs(a), abs(b), abs(c))
                assert abs(resid) <= 1e-12 * max(scale, 1e-300)

    def test_spot_values(self):
        assert abs(sph_bessel_j(0, math.pi)) <= 1e-16
        assert abs(sph_bessel_j(2, 1.0) - 0.062035052011373853) <= 1e-15
        # deep series regime
        got = sph_bessel_j(5, 0.1)
        ref = float(spherical_jn(5, 0.1))
        assert abs(got - ref) <= REL_TOL * abs(ref)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            sph_bessel_j(-1, 1.0)
        with pytest.raises(DomainError):
            sph_bessel_j(2, -0.5)
        with pytest.raises(DomainError):
            sph_bessel_j(2, float("nan"))


class TestQuadratureConfig:
    def test_defaults(self):
        cfg = QuadratureConfig()
        assert cfg.abs_tolerance == 1e-10
        assert cfg.max_subintervals == 4096
        assert cfg.tail_cutoff_factor == 0.1

    def test_validation(self):
        with pytest.raises(DomainError):
            QuadratureConfig(abs_tolerance=0.0)
        with pytest.raises(DomainError):
            QuadratureConfig(max_subintervals=7)
        with pytest.raises(DomainError):
            QuadratureConfig(tail_cutoff_factor=0.0)
        with pytest.raises(DomainError):
            QuadratureConfig(tail_cutoff_factor=1.5)


class TestQuadratureTransform:
    def test_pinned_values(self):
        r = quadrature_transform(0, 1.0)
        assert abs(r.value - math.pi / 4) <= r.error_estimate
        assert r.error_estimate <= 1e-10
        assert r.subintervals_used >= 1
        r = quadrature_transform(1, 2.0)
        assert abs(r.value - (1 - 2 * math.atan(0.5))) <= r.error_estimate

    def test_estimates_are_sound(self):
        # the independent high-precision route bounds the true error
        for l in (0, 2, 5, 10):
            for p in (0.01, 0.5, 1.0, 10.0, 1000.0):
                ref = legendre_q_oracle(l, p)
                r = quadrature_transform(l, p)
                assert abs(r.value - ref) <= r.error_estimate + 1e-12 * abs(ref), (
                    l,
                    p,
                )

    def test_small_p_acceleration(self):
        # far more oscillation periods than the budget has panels; the
        # series extrapolation must still land inside its claimed error
        for l, p in ((2, 1e-5), (8, 0.01), (15, 0.01)):
            ref = legendre_q_oracle(l, p)
            r = quadrature_transform(l, p)
            assert abs(r.value - ref) <= r.error_estimate + 1e-12 * abs(ref)
            assert r.subintervals_used <= 600

    def test_tail_bound_soundness(self):
        # halving the tolerance may move the value at most by the error
        # the looser run claimed
        loose = quadrature_transform(3, 1.0, QuadratureConfig(abs_tolerance=2e-10))
        tight = quadrature_transform(3, 1.0, QuadratureConfig(abs_tolerance=1e-10))
        assert abs(loose.value - tight.value) <= loose.error_estimate

    def test_budget_exhaustion_raises_with_partial(self):
        # 40 rad/s oscillation: ~20 periods per panel, hopeless for an
        # unrefined 16-point rule, so 8 subintervals cannot suffice
        with pytest.raises(QuadratureConvergenceError) as exc_info:
            laplace_quadrature(
                lambda t: math.cos(40.0 * t),
                0.5,
                QuadratureConfig(max_subintervals=8),
            )
        partial = exc_info.value.partial
        assert isinstance(partial, OracleResult)
        assert partial.error_estimate > QuadratureConfig().abs_tolerance

    def test_budget_exhaustion_on_accelerated_path(self):
        # at p=1e-6 the tail needs ~1e6 panels, so the series extrapolation
        # engages; 8 subintervals end before it has enough partial sums
        with pytest.raises(QuadratureConvergenceError) as exc_info:
            quadrature_transform(2, 1e-6, QuadratureConfig(max_subintervals=8))
        assert isinstance(exc_info.value.partial, OracleResult)

    def test_generic_integrand(self):
        # pure exponential: integral of e^{-pt} from 0 is 1/p
        r = laplace_quadrature(lambda t: 1.0, 2.0, QuadratureConfig())
        assert abs(r.value - 0.5) <= r.error_estimate
        # damped cosine: p/(p^2 + w^2)
        r = laplace_quadrature(lambda t: math.cos(40.0 * t), 0.5, QuadratureConfig())
        want = 0.5 / (0.25 + 1600.0)
        assert abs(r.value - want) <= r.error_estimate

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            quadrature_transform(-1, 1.0)
        with pytest.raises(DomainError):
            quadrature_transform(2, 0.0)
        with pytest.raises(DomainError):
            quadrature_transform(2, float("nan"))


class TestLegendreRoute:
    def test_low_orders_are_elementary(self):
        # l=0 reduces to arctan(1/p), l=1 to 1 - p*arctan(1/p)
        for p in (0.3, 1.0, 7.0):
            assert abs(legendre_q_oracle(0, p) - math.atan(1 / p)) <= 1e-15
            # the double-precision reference itself cancels at larger p,
            # so the comparison is absolute at rounding scale
            want = 1 - p * math.atan(1 / p)
            assert abs(legendre_q_oracle(1, p) - want) <= 1e-15

    def test_against_mpmath(self):
        mpmath.mp.dps = 40
        for l in (5, 20, 37):
            for p in (0.3, 2.0, 100.0):
                z = mpmath.mpc(0, p)
                ref = complex(mpmath.mpc(1j) ** (l + 1) * mpmath.legenq(l, 0, z, type=3))
                got = legendre_q_oracle(l, p)
                assert abs(got - ref.real) <= 1e-13 * abs(ref.real)
                assert abs(ref.imag) <= 1e-20 * abs(ref.real)

    def test_order_cap(self):
        assert LEGENDRE_MAX_ORDER == 40
        legendre_q_oracle(40, 1.0)
        with pytest.raises(UnsupportedOrderError):
            legendre_q_oracle(41, 1.0)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            legendre_q_oracle(2, 0.0)
        with pytest.raises(DomainError):
            legendre_q_oracle(2, -3.0)
        with pytest.raises(DomainError):
            legendre_q_oracle(-1, 1.0)


class TestOracleConcordance:
    def test_routes_agree(self):
        # two fully independent numerical routes; disagreement beyond the
        # stated budgets would mean at least one of them lies
        for l in (0, 1, 3, 6, 10):
            for p in (0.1, 0.5, 1.0, 2.0, 10.0):
                quad = quadrature_transform(l, p)
                leg = legendre_q_oracle(l, p)
                budget = 10.0 * (quad.error_estimate + 1e-12 * abs(leg))
                assert abs(quad.value - leg) <= budget, (l, p)
