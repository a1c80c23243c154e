"""Tests for test functions, norms, energy estimators, and decomposition."""

import math

import numpy as np
import pytest

from conftest import grid_energy_line

from nonlocal_limits import (
    CircleSpace,
    EnergyEstimate,
    EuclideanSpace,
    ball_indicator,
    decompose_energy,
    energy_mc,
    energy_quadrature_1d,
    make_family,
    make_log_generator,
    make_power_generator,
    make_power_profile,
    make_warped_line,
    norm_p_pow,
    smooth_bump,
    standard_family,
    tent,
)


def interval_indicator_energy(a: float, length: float = 1.0) -> float:
    """Closed-form energy of an interval indicator under the t^(-a-1) kernel."""
    return 4.0 * length ** (1.0 - a) / (1.0 - a)


class TestTestFunction:
    def test_shapes(self):
        s = np.array([0.0, 0.5, 1.0, 2.0])
        np.testing.assert_allclose(
            ball_indicator([0.0], 1.0, 1.0).shape(s), [1.0, 1.0, 0.0, 0.0]
        )
        np.testing.assert_allclose(tent([0.0], 1.0, 1.0).shape(s), [1.0, 0.5, 0.0, 0.0])
        np.testing.assert_allclose(
            smooth_bump([0.0], 1.0, 1.0).shape(s), [1.0, 0.75**2, 0.0, 0.0]
        )

    def test_invalid_parameters(self):
        with pytest.raises(ValueError, match="radius"):
            ball_indicator([0.0], 0.0, 1.0)
        with pytest.raises(ValueError, match="p"):
            tent([0.0], 1.0, 0.5)

    def test_lipschitz_constants(self):
        assert ball_indicator([0.0], 2.0, 1.0).lipschitz() is None
        assert tent([0.0], 2.0, 1.0).lipschitz() == pytest.approx(0.5)
        bump = smooth_bump([0.0], 2.0, 1.0)
        assert bump.lipschitz() == pytest.approx(8.0 / (3.0 * math.sqrt(3.0)) / 2.0)

    def test_evaluate_uses_the_metric(self):
        space = EuclideanSpace(2)
        u = tent([1.0, 0.0], 2.0, 1.0)
        val = u.evaluate(space, np.array([[1.0, 1.0]]))
        assert val[0] == pytest.approx(0.5, rel=1e-15)


class TestNorms:
    def test_indicator_norm_is_ball_volume(self):
        line, plane = EuclideanSpace(1), EuclideanSpace(2)
        assert norm_p_pow(line, ball_indicator([0.0], 1.0, 1.0)).value == pytest.approx(
            2.0, rel=1e-13
        )
        est = norm_p_pow(plane, ball_indicator([0.0, 0.0], 1.0, 2.0))
        assert est.value == pytest.approx(math.pi, rel=1e-13)
        assert est.stderr == 0.0

    def test_tent_norms(self):
        line = EuclideanSpace(1)
        assert norm_p_pow(line, tent([0.0], 1.0, 1.0)).value == pytest.approx(1.0, rel=1e-12)
        assert norm_p_pow(line, tent([0.0], 1.0, 2.0)).value == pytest.approx(
            2.0 / 3.0, rel=1e-12
        )

    def test_smooth_bump_norm(self):
        # radial integral of (1 - rho^2)^4 rho over [0, 1] is 1/10.
        plane = EuclideanSpace(2)
        est = norm_p_pow(plane, smooth_bump([0.0, 0.0], 1.0, 2.0))
        assert est.value == pytest.approx(math.pi / 5.0, rel=1e-12)


class TestEnergyEstimateInvariant:
    def test_parts_must_sum(self):
        with pytest.raises(ValueError, match="near_part"):
            EnergyEstimate(
                value=1.0,
                stat_stderr=0.0,
                near_part=0.3,
                far_part=0.3,
                deterministic_bias_bound=0.0,
                params={},
            )


class TestQuadrature1d:
    def test_interval_indicator_closed_form(self, line, line_family_p1):
        u = ball_indicator([0.5], 0.5, 1.0)
        for n in range(len(line_family_p1)):
            a = line_family_p1.a(n)
            est = energy_quadrature_1d(line, u, line_family_p1, n)
            assert est.value == pytest.approx(interval_indicator_energy(a), rel=1e-12)
            assert est.stat_stderr == 0.0
            assert est.params["method"] == "quadrature"

    def test_wide_indicator_closed_form(self, line):
        family = standard_family(1, 1.0)
        u = ball_indicator([0.0], 1.0, 1.0)
        est = energy_quadrature_1d(line, u, family, 1)
        assert est.value == pytest.approx(interval_indicator_energy(0.1, 2.0), rel=1e-12)

    def test_tent_frozen_value(self, line):
        family = standard_family(1, 2.0)
        est = energy_quadrature_1d(line, tent([0.0], 1.0, 2.0), family, 0, tol=1e-6)
        assert est.value == pytest.approx(3.3058754263460415, rel=1e-8)

    def test_tent_against_grid_oracle(self, line):
        family = standard_family(1, 1.0)
        a = family.a(0)
        quad_val = energy_quadrature_1d(line, tent([0.0], 1.0, 1.0), family, 0, tol=1e-6).value
        grid_val = grid_energy_line(
            lambda x: np.maximum(1.0 - np.abs(x), 0.0),
            (-1.0, 1.0),
            lambda g: a * g ** (-a - 1.0),
            lambda g: g**-a,
            n_cells=6000,
        )
        assert grid_val == pytest.approx(quad_val, rel=2e-3)

    def test_near_cutoff_bias_is_covered(self, line, line_family_p1):
        u = ball_indicator([0.5], 0.5, 1.0)
        full = energy_quadrature_1d(line, u, line_family_p1, 1)
        cut = energy_quadrature_1d(line, u, line_family_p1, 1, r0=0.05)
        drop = full.value - cut.value
        assert 0.0 <= drop <= cut.deterministic_bias_bound
        assert full.deterministic_bias_bound == 0.0

    def test_circle_rungs_decrease(self):
        circle = CircleSpace(1.0)
        family = standard_family(1, 1.0)
        u = ball_indicator([0.0], 1.0, 1.0)
        rungs = [energy_quadrature_1d(circle, u, family, n).value for n in range(4)]
        assert all(b < a for a, b in zip(rungs, rungs[1:]))

    def test_warped_line_matches_interval_form(self):
        # d(x, y) = V^-1(|x - y|) turns the warped energy into the flat
        # interval computation.
        space = make_warped_line(make_power_profile(2))
        family = make_family(make_power_generator(1.0), make_power_profile(2), (0.2, 0.1))
        u = ball_indicator([0.5], math.sqrt(0.5), 1.0)
        for n in range(2):
            a = family.a(n)
            est = energy_quadrature_1d(space, u, family, n)
            assert est.value == pytest.approx(interval_indicator_energy(a), rel=1e-10)

    def test_rejects_multidimensional_charts(self, plane):
        family = standard_family(2, 2.0)
        with pytest.raises(ValueError):
            energy_quadrature_1d(plane, ball_indicator([0.0, 0.0], 1.0, 2.0), family, 0)


class TestMonteCarlo:
    def test_matches_quadrature_on_the_line(self, line, line_family_p1):
        u = ball_indicator([0.5], 0.5, 1.0)
        est = energy_mc(line, u, line_family_p1, 0, samples=400_000, seed=3, force=True)
        ref = energy_quadrature_1d(line, u, line_family_p1, 0, r0=est.params["r0"])
        z = (est.value - ref.value) / est.stat_stderr
        assert abs(z) < 4.0

    def test_one_dimensional_chart_needs_force(self, line, line_family_p1):
        with pytest.raises(ValueError, match="force"):
            energy_mc(line, ball_indicator([0.5], 0.5, 1.0), line_family_p1, 0, samples=100)

    def test_plane_bump_frozen_quadrature_value(self, plane):
        family = standard_family(2, 2.0)
        u = smooth_bump([0.0, 0.0], 1.0, 2.0)
        est = energy_mc(plane, u, family, 0, samples=300_000, seed=9)
        tol = 3.0 * est.stat_stderr + est.deterministic_bias_bound
        assert abs(est.value - 5.111400) <= tol

    def test_bit_identical_across_worker_counts(self, plane):
        family = standard_family(2, 2.0)
        u = smooth_bump([0.0, 0.0], 1.0, 2.0)
        one = energy_mc(plane, u, family, 0, samples=300_000, seed=9, workers=1)
        three = energy_mc(plane, u, family, 0, samples=300_000, seed=9, workers=3)
        assert one.value == three.value
        assert one.stat_stderr == three.stat_stderr

    def test_seed_changes_the_stream(self, plane):
        family = standard_family(2, 2.0)
        u = smooth_bump([0.0, 0.0], 1.0, 2.0)
        one = energy_mc(plane, u, family, 0, samples=100_000, seed=9)
        other = energy_mc(plane, u, family, 0, samples=100_000, seed=10)
        assert one.value != other.value

    def test_invalid_arguments(self, plane):
        family = standard_family(2, 2.0)
        u = smooth_bump([0.0, 0.0], 1.0, 2.0)
        with pytest.raises(ValueError, match="samples"):
            energy_mc(plane, u, family, 0, samples=0)
        log_family = make_family(make_log_generator(), make_power_profile(2), (0.4, 0.2))
        with pytest.raises(ValueError, match="floor"):
            energy_mc(plane, u, log_family, 0, samples=100, r0=0.5)


class TestDecomposition:
    def test_parts_sum_exactly(self, line, line_family_p1):
        u = ball_indicator([0.5], 0.5, 1.0)
        dec = decompose_energy(line, u, line_family_p1, 1, R=10.0, samples=200_000, seed=4)
        assert dec.I + dec.II + dec.III == dec.total
        assert dec.total == pytest.approx(dec.estimate.value, rel=1e-12)

    def test_interval_closed_forms(self, line, line_family_p1):
        # At R = 10 the near part misses 4 R^-a of the closed form; the far
        # part II carries exactly that mass and III is empty on the line.
        u = ball_indicator([0.5], 0.5, 1.0)
        a = line_family_p1.a(1)
        dec = decompose_energy(line, u, line_family_p1, 1, R=10.0, samples=600_000, seed=4)
        closed_I = interval_indicator_energy(a) - 4.0 * 10.0**-a
        closed_II = 4.0 * 10.0**-a
        collar = dec.estimate.deterministic_bias_bound
        assert abs(dec.I - closed_I) <= 4.0 * dec.stderr_I + collar
        assert abs(dec.II - closed_II) <= 4.0 * dec.stderr_II
        assert dec.III == 0.0
        assert dec.stderr_III == 0.0

    def test_invalid_radius(self, line, line_family_p1):
        u = ball_indicator([0.5], 0.5, 1.0)
        with pytest.raises(ValueError, match="R"):
            decompose_energy(line, u, line_family_p1, 1, R=0.0, samples=100)
