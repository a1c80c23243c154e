"""Tests for kernel generators, mollifier families, and tail masses."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonlocal_limits import (
    DivergenceError,
    default_s_ladder,
    integrate_log_tail,
    make_custom_profile,
    make_exp_generator,
    make_family,
    make_hyperbolic_profile,
    make_log_generator,
    make_power_generator,
    make_power_profile,
    standard_family,
    tail_mass_quadrature,
    verify_family,
)
from nonlocal_limits.mollifiers import RADIUS_CAP


def bounded_range_profile():
    """Profile V(t) = 1 - e^(-t), whose range never exceeds 1."""
    return make_custom_profile(
        lambda t: 1.0 - np.exp(-np.asarray(t, dtype=float)),
        lambda t: np.exp(-np.asarray(t, dtype=float)),
        lambda v: -np.log(1.0 - np.asarray(v, dtype=float)),
    )


class TestPowerGenerator:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.7])
    def test_power_law(self, alpha):
        gen = make_power_generator(alpha)
        v = np.geomspace(0.1, 100.0, 9)
        np.testing.assert_allclose(gen.f(v), v**alpha, rtol=1e-14)
        np.testing.assert_allclose(gen.f_prime(v), alpha * v ** (alpha - 1.0), rtol=1e-13)
        np.testing.assert_allclose(gen.f_inverse(gen.f(v)), v, rtol=1e-13)
        assert gen.params() == {"alpha": alpha}

    @pytest.mark.parametrize("alpha", [0.0, -1.0])
    def test_nonpositive_alpha_rejected(self, alpha):
        with pytest.raises(ValueError):
            make_power_generator(alpha)

    def test_log_hooks_match_direct_logs(self):
        gen = make_power_generator(1.5)
        log_v = np.linspace(-3.0, 5.0, 11)
        v = np.exp(log_v)
        np.testing.assert_allclose(gen.log_f(log_v), np.log(gen.f(v)), rtol=1e-13)
        y = np.asarray(gen.log_f(log_v))
        np.testing.assert_allclose(gen.log_f_inverse(y), log_v, rtol=1e-13, atol=1e-13)
        a = 0.3
        direct = np.log(gen.f_prime(v) / gen.f(v) ** (a + 1.0))
        np.testing.assert_allclose(gen.log_kernel(log_v, a), direct, rtol=1e-12, atol=1e-12)

    @given(
        alpha=st.floats(0.1, 5.0, allow_nan=False),
        v=st.floats(1e-3, 1e3, allow_nan=False),
    )
    @settings(max_examples=60, deadline=None)
    def test_inverse_roundtrip_property(self, alpha, v):
        gen = make_power_generator(alpha)
        assert math.isclose(float(gen.f_inverse(gen.f(v))), v, rel_tol=1e-10)


class TestExpGenerator:
    def test_exponential_law(self):
        gen = make_exp_generator()
        v = np.linspace(0.1, 20.0, 9)
        np.testing.assert_allclose(gen.f(v), np.exp(v), rtol=1e-14)
        np.testing.assert_allclose(gen.f_prime(v), np.exp(v), rtol=1e-14)
        np.testing.assert_allclose(gen.f_inverse(np.exp(v)), v, rtol=1e-14)
        assert gen.params() == {}

    def test_log_kernel_is_linear_in_volume(self):
        # f'/f^(a+1) = e^(-aV): the kernel log is exactly -a V.
        gen = make_exp_generator()
        log_v = np.linspace(-2.0, 3.0, 7)
        a = 0.25
        np.testing.assert_allclose(gen.log_kernel(log_v, a), -a * np.exp(log_v), rtol=1e-14)


class TestLogGenerator:
    def test_degenerate_region_below_unit_volume(self):
        gen = make_log_generator()
        assert gen.domain_floor_in_V == 1.0
        out = np.asarray(gen.log_f(np.array([-0.5, 0.0, 1.0])))
        assert out[0] == -math.inf and out[1] == -math.inf
        assert out[2] == pytest.approx(0.0, abs=1e-15)

    def test_log_law_above_floor(self):
        gen = make_log_generator()
        v = np.geomspace(1.5, 1e4, 9)
        np.testing.assert_allclose(gen.f(v), np.log(v), rtol=1e-14)
        np.testing.assert_allclose(gen.f_prime(v), 1.0 / v, rtol=1e-14)
        np.testing.assert_allclose(gen.f_inverse(np.log(v)), v, rtol=1e-13)


class TestKernelIdentity:
    def kernel_oracle(self, gen, profile, a, t):
        v = np.asarray(profile.eval(t), dtype=float)
        return a * np.asarray(gen.f_prime(v)) / np.asarray(gen.f(v)) ** (a + 1.0)

    @pytest.mark.parametrize(
        "make_gen", [lambda: make_power_generator(0.5), make_exp_generator, make_log_generator]
    )
    def test_evaluate_matches_direct_formula(self, make_gen):
        gen = make_gen()
        profile = make_power_profile(2)
        family = make_family(gen, profile, [0.4, 0.1])
        t = np.geomspace(1.5, 20.0, 9)
        for n in range(2):
            direct = self.kernel_oracle(gen, profile, family.a(n), t)
            np.testing.assert_allclose(family.evaluate(n, t), direct, rtol=1e-12)

    def test_evaluate_vanishes_at_and_below_floor(self):
        family = make_family(make_log_generator(), make_power_profile(2), [0.4, 0.2])
        assert family.domain_floor == pytest.approx(1.0, rel=1e-12)
        np.testing.assert_array_equal(family.evaluate(0, np.array([0.5, 1.0])), 0.0)
        assert family.evaluate(0, 2.0) > 0.0

    def test_cross_ladder_ratio_identity(self):
        # rho_n / rho_m = (a_n/a_m) f(V)^(a_m - a_n) for every generator.
        family = standard_family(2, 2.0, s_ladder=(0.2, 0.1))
        t = np.geomspace(0.3, 30.0, 7)
        a0, a1 = family.a(0), family.a(1)
        lhs = family.evaluate(1, t) / family.evaluate(0, t)
        rhs = (a1 / a0) * t ** (a0 - a1)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-13)


class TestFamilyValidation:
    def test_empty_ladder_rejected(self):
        with pytest.raises(ValueError):
            make_family(make_power_generator(1.0), make_power_profile(1), [])

    def test_nonpositive_weights_rejected(self):
        with pytest.raises(ValueError):
            make_family(make_power_generator(1.0), make_power_profile(1), [0.4, 0.0])

    def test_non_decreasing_ladder_rejected(self):
        with pytest.raises(ValueError, match="strictly decreasing"):
            make_family(make_power_generator(1.0), make_power_profile(1), [0.1, 0.4])
        with pytest.raises(ValueError, match="strictly decreasing"):
            make_family(make_power_generator(1.0), make_power_profile(1), [0.4, 0.4])

    def test_log_generator_needs_unbounded_range(self):
        with pytest.raises(ValueError, match="range exceeds 1"):
            make_family(make_log_generator(), bounded_range_profile(), [0.4, 0.2])

    def test_default_ladder(self):
        assert list(default_s_ladder()) == [0.2, 0.1, 0.05, 0.025, 0.0125]

    def test_standard_family_weights(self):
        family = standard_family(3, 2.0)
        assert len(family) == 5
        for n, s in enumerate(default_s_ladder()):
            assert family.a(n) == pytest.approx(2.0 * s, rel=1e-15)
        assert family.domain_floor == 0.0


class TestTailMass:
    def test_standard_family_power_tail(self):
        family = standard_family(1, 1.0)
        for n in range(len(family)):
            for delta in (0.3, 2.0, 50.0):
                assert family.tail_mass(n, delta) == pytest.approx(
                    delta ** -family.a(n), rel=1e-13
                )

    def test_exp_generator_tail(self):
        family = make_family(make_exp_generator(), make_power_profile(1), [0.4, 0.1])
        for delta in (0.5, 2.0, 10.0):
            assert family.tail_mass(0, delta) == pytest.approx(math.exp(-0.4 * delta), rel=1e-13)

    def test_log_generator_tail(self):
        family = make_family(make_log_generator(), make_power_profile(1), [0.4, 0.1])
        for delta in (1.5, 5.0, 100.0):
            assert family.tail_mass(1, delta) == pytest.approx(
                math.log(delta) ** -0.1, rel=1e-13
            )

    def test_log_tail_mass_consistency(self):
        family = standard_family(2, 2.0)
        deltas = np.array([0.4, 3.0, 80.0])
        for n in (0, 3):
            direct = np.log([family.tail_mass(n, d) for d in deltas])
            np.testing.assert_allclose(
                [family.log_tail_mass(n, d) for d in deltas], direct, rtol=1e-13
            )
            np.testing.assert_allclose(
                family.log_tail_mass_from_log(n, np.log(deltas)), direct, rtol=1e-13
            )

    def test_log_tail_survives_underflowing_radii(self):
        # At log-radius 2000 the radius itself overflows a float but the
        # log tail is plain arithmetic: -a * log(delta).
        family = standard_family(1, 1.0)
        assert family.log_tail_mass_from_log(0, 2000.0) == pytest.approx(-400.0, rel=1e-13)

    def test_tail_mass_below_floor_rejected(self):
        family = make_family(make_log_generator(), make_power_profile(2), [0.4, 0.2])
        with pytest.raises(ValueError, match="floor"):
            family.tail_mass(0, 0.5)
        with pytest.raises(ValueError, match="floor"):
            family.log_tail_mass(0, 1.0)

    @given(
        delta=st.floats(1.1, 1e4),
        scale=st.floats(0.05, 0.5),
    )
    @settings(max_examples=50, deadline=None)
    def test_tail_monotonicity_property(self, delta, scale):
        family = make_family(
            make_power_generator(1.0), make_power_profile(1), [2.0 * scale, scale]
        )
        # Deeper tails weigh less; smaller exponents weigh more (delta > 1).
        assert family.tail_mass(0, delta * 2.0) < family.tail_mass(0, delta)
        assert family.tail_mass(1, delta) > family.tail_mass(0, delta)


class TestTailIdentity:
    """Quadrature of the shell integrand against the closed-form tail."""

    A_SEQ = (0.4, 0.2, 0.1, 0.05, 0.025)
    DELTAS = (2.0, 10.0)

    @pytest.mark.parametrize(
        "make_gen", [lambda: make_power_generator(0.5), make_exp_generator, make_log_generator]
    )
    def test_quadrature_matches_closed_form(self, make_gen):
        family = make_family(make_gen(), make_power_profile(1), self.A_SEQ)
        combos = 0
        for n in range(len(family)):
            for delta in self.DELTAS:
                closed = family.tail_mass(n, delta)
                assert abs(tail_mass_quadrature(family, n, delta) - closed) <= 1e-8
                combos += 1
        assert combos == 10

    @pytest.mark.parametrize(
        "profile", [make_power_profile(2), make_hyperbolic_profile(-1.0, 2)]
    )
    def test_quadrature_across_profiles(self, profile):
        family = make_family(make_power_generator(2.0), profile, [0.4, 0.1])
        for n in range(2):
            for delta in (0.7, 4.0):
                closed = family.tail_mass(n, delta)
                assert abs(tail_mass_quadrature(family, n, delta) - closed) <= 1e-8

    def test_log_generator_over_exponential_volume_is_flagged(self):
        # ln V' and -ln V cancel catastrophically when the volume grows
        # exponentially, so the radius-space quadrature turns to noise and
        # the integrator reports it; the closed form stays exact.
        family = make_family(make_log_generator(), make_hyperbolic_profile(-1.0, 2), [0.4, 0.1])
        assert 0.0 < family.tail_mass(0, 2.0) < 1.0
        with pytest.raises(DivergenceError):
            tail_mass_quadrature(family, 0, 2.0)

    def test_delta_at_floor_rejected(self):
        family = make_family(make_log_generator(), make_power_profile(1), [0.4, 0.1])
        with pytest.raises(ValueError, match="floor"):
            tail_mass_quadrature(family, 0, 1.0)


class TestIntegrateLogTail:
    def test_exact_double_exponential_integral(self):
        # integral of e^w e^(-e^w) over [w0, inf) equals e^(-e^(w0)).
        value = integrate_log_tail(lambda w: w - np.exp(w), 0.0)
        assert value == pytest.approx(math.exp(-1.0), rel=1e-10)

    def test_growing_integrand_raises(self):
        with pytest.raises(DivergenceError):
            integrate_log_tail(lambda w: 0.1 * np.asarray(w, dtype=float), 0.0)

    def test_constant_integrand_raises(self):
        with pytest.raises(DivergenceError):
            integrate_log_tail(lambda w: np.zeros_like(np.asarray(w, dtype=float)), 0.0)


class TestRadiusSampling:
    def _ks(self, radii, cdf_values):
        xs = np.sort(np.asarray(radii))
        n = xs.size
        cdf = cdf_values(xs)
        d_plus = np.max(np.arange(1, n + 1) / n - cdf)
        d_minus = np.max(cdf - np.arange(0, n) / n)
        return max(d_plus, d_minus)

    def test_power_tail_sampling_law(self):
        # Survival P(r >= t) = (delta/t)^a conditioned on r >= delta.
        family = standard_family(1, 1.0)
        rng = np.random.default_rng(np.random.Philox(key=42))
        q = rng.uniform(size=1_000_000)
        radii = family.sample_radius(0, 0.5, q)
        a = family.a(0)
        ks = self._ks(radii, lambda t: 1.0 - (0.5 / t) ** a)
        assert ks < 1.95e-3  # Kolmogorov critical value at level 1e-3

    def test_exp_generator_sampling_law(self):
        family = make_family(make_exp_generator(), make_power_profile(1), [0.4, 0.2, 0.1])
        rng = np.random.default_rng(np.random.Philox(key=7))
        q = rng.uniform(size=1_000_000)
        radii = family.sample_radius(1, 0.5, q)
        ks = self._ks(radii, lambda t: 1.0 - np.exp(-0.2 * (t - 0.5)))
        assert ks < 1.95e-3

    def test_uniforms_outside_unit_interval_rejected(self):
        family = standard_family(1, 1.0)
        for bad in (0.0, 1.0, -0.1, 1.1):
            with pytest.raises(ValueError):
                family.sample_radius(0, 0.5, bad)
        with pytest.raises(ValueError):
            family.sample_radius(0, 0.5, np.array([0.5, 1.0]))

    def test_scalar_and_bounds(self):
        family = standard_family(1, 1.0)
        r = family.sample_radius(0, 0.5, 0.5)
        assert isinstance(r, float) and r >= 0.5
        # Inverting the survival law is decreasing in q.
        assert family.sample_radius(0, 0.5, 0.9) < family.sample_radius(0, 0.5, 0.1)

    def test_extreme_uniform_caps_radius(self):
        family = standard_family(1, 1.0)
        assert family.sample_radius(0, 0.5, 1e-300) == RADIUS_CAP


class TestVerifyFamily:
    @pytest.mark.parametrize(
        "family",
        [
            standard_family(1, 2.0),
            standard_family(2, 2.0),
            make_family(make_exp_generator(), make_power_profile(1), [0.4, 0.2, 0.1, 0.05]),
            make_family(make_log_generator(), make_power_profile(1), [0.4, 0.2, 0.1, 0.05]),
            make_family(make_power_generator(2.0), make_hyperbolic_profile(-1.0, 2), [0.4, 0.1, 0.025]),
        ],
        ids=["standard-1d", "standard-2d", "exp", "log", "power-hyperbolic"],
    )
    def test_valid_families_pass(self, family):
        report = verify_family(family)
        assert report.passed, report.messages
        assert report.decreasing_ok and report.ratio_monotone_ok
        assert report.vanishing_product_ok and report.pointwise_decay_ok
        assert report.ratio_identity_residual <= 1e-9
        assert report.approx_identity_ok
        assert report.tail_table.shape == (report.tail_table.shape[0], len(family))
        assert report.messages == []
