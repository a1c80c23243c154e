"""Tests for ladder runs, extrapolation, predictions, and validators."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonlocal_limits import (
    CircleSpace,
    EnergyEstimate,
    EuclideanSpace,
    HypothesisViolation,
    ball_indicator,
    check_ms,
    energy_quadrature_1d,
    extrapolate,
    make_exp_generator,
    make_family,
    make_log_generator,
    make_power_generator,
    make_power_profile,
    make_warped_line,
    predict_limit,
    run_ladder,
    smooth_bump,
    standard_family,
    validate_assumption1,
)


def rung(a, value, stderr=0.0, bias=0.0):
    """Synthetic ladder point carrying only what extrapolate reads."""
    return EnergyEstimate(
        value=value,
        stat_stderr=stderr,
        near_part=0.0,
        far_part=value,
        deterministic_bias_bound=bias,
        params={"a_n": a},
    )


class TestExtrapolate:
    def test_affine_uses_three_smallest_weights(self):
        ladder = [rung(a, 4.0 / (1.0 - a)) for a in (0.2, 0.1, 0.05, 0.025)]
        ex = extrapolate(ladder)
        assert ex.model == "affine"
        assert ex.used_a == (0.1, 0.05, 0.025)
        assert ex.limit == pytest.approx(3.9856050382366175, rel=1e-13)
        assert len(ex.coefficients) == 2

    def test_quadratic_uses_all_five(self):
        ladder = [rung(a, 4.0 / (1.0 - a)) for a in (0.2, 0.1, 0.05, 0.025, 0.0125)]
        ex = extrapolate(ladder, model="quadratic")
        assert ex.limit == pytest.approx(4.001987055833524, rel=1e-13)
        assert len(ex.coefficients) == 3
        assert len(ex.used_a) == 5

    def test_constant_ladder_is_exact(self):
        ex = extrapolate([rung(a, 7.25) for a in (0.2, 0.1, 0.05)])
        assert ex.limit == pytest.approx(7.25, rel=1e-13)

    def test_stderr_covers_near_bias(self):
        ladder = [rung(a, 4.0 / (1.0 - a), bias=0.01) for a in (0.2, 0.1, 0.05)]
        assert extrapolate(ladder).stderr >= 0.01

    def test_input_validation(self):
        ok = [rung(a, 1.0) for a in (0.3, 0.2, 0.1)]
        with pytest.raises(ValueError, match="at least 3"):
            extrapolate(ok[:2])
        with pytest.raises(ValueError, match="strictly decreasing"):
            extrapolate(list(reversed(ok)))
        with pytest.raises(ValueError, match="at least 5"):
            extrapolate([rung(a, 1.0) for a in (0.4, 0.3, 0.2, 0.1)], model="quadratic")
        with pytest.raises(ValueError, match="model"):
            extrapolate(ok, model="cubic")

    @given(
        c0=st.floats(-5.0, 5.0),
        c1=st.floats(-5.0, 5.0),
    )
    @settings(max_examples=60, deadline=None)
    def test_affine_data_recovers_the_intercept(self, c0, c1):
        ladder = [rung(a, c0 + c1 * a) for a in (0.2, 0.1, 0.05, 0.025)]
        ex = extrapolate(ladder)
        assert ex.limit == pytest.approx(c0, rel=1e-9, abs=1e-9)


class TestRunLadder:
    def test_coarsest_first_and_matches_quadrature(self, line, line_family_p1):
        u = ball_indicator([0.5], 0.5, 1.0)
        ladder = run_ladder(line, u, line_family_p1)
        assert [e.params["a_n"] for e in ladder] == [0.2, 0.1, 0.05, 0.025]
        for est in ladder:
            n = est.params["n"]
            direct = energy_quadrature_1d(line, u, line_family_p1, n)
            assert est.value == pytest.approx(direct.value, rel=1e-12)
            assert est.params["method"] == "quadrature"

    def test_requires_a_test_function(self, line, line_family_p1):
        with pytest.raises(TypeError, match="TestFunction"):
            run_ladder(line, lambda x: x, line_family_p1)

    def test_divergent_coarsest_level_is_flagged(self, line):
        # An indicator has no fractional regularity at a >= 1; the probe
        # must refuse rather than report quadrature garbage.
        family = make_family(make_power_generator(1.0), make_power_profile(1), (1.2, 1.1))
        with pytest.raises(HypothesisViolation, match="coarsest"):
            run_ladder(line, ball_indicator([0.5], 0.5, 1.0), family)


class TestPredictLimit:
    def test_line_indicator(self, line):
        pl = predict_limit(line, ball_indicator([0.5], 0.5, 1.0), family=standard_family(1, 1.0))
        assert pl.value == pytest.approx(4.0, rel=1e-12)
        assert pl.s_normalized == pytest.approx(4.0, rel=1e-12)
        assert pl.rcd_bound == pytest.approx(4.0, rel=1e-12)
        assert pl.avr == pytest.approx(2.0, rel=1e-12)
        assert pl.alpha == pytest.approx(1.0)

    def test_plane_bump(self, plane):
        pl = predict_limit(
            plane, smooth_bump([0.0, 0.0], 1.0, 2.0), family=standard_family(2, 2.0)
        )
        assert pl.value == pytest.approx(2.0 * math.pi**2 / 5.0, rel=1e-12)
        assert pl.avr == pytest.approx(math.pi, rel=1e-12)

    def test_finite_space_predicts_zero(self):
        pl = predict_limit(
            CircleSpace(1.0), ball_indicator([0.0], 1.0, 1.0), family=standard_family(1, 1.0)
        )
        assert pl.value == 0.0
        assert pl.avr == 0.0
        assert pl.avr_stderr == 0.0

    def test_warped_line(self):
        space = make_warped_line(make_power_profile(2))
        family = make_family(make_power_generator(1.0), make_power_profile(2), (0.2, 0.1))
        u = ball_indicator([0.5], math.sqrt(0.5), 1.0)
        pl = predict_limit(space, u, family=family)
        assert pl.value == pytest.approx(4.0, rel=1e-10)

    def test_non_power_generator_has_no_s_scale(self, line):
        family = make_family(make_exp_generator(), make_power_profile(1), (0.4, 0.2, 0.1))
        pl = predict_limit(line, ball_indicator([0.5], 0.5, 1.0), family=family)
        assert pl.s_normalized is None
        assert pl.alpha is None


class TestCheckMs:
    def test_line_indicator_passes(self, line, line_family_p1):
        u = ball_indicator([0.5], 0.5, 1.0)
        report = check_ms(line, u, line_family_p1)
        assert report.passed
        assert report.limit_estimate == pytest.approx(3.985605038236612, rel=1e-10)
        assert report.predicted_limit == pytest.approx(4.0, rel=1e-12)
        assert report.relative_deviation == pytest.approx(0.0036, abs=5e-4)
        assert report.rcd_ok
        assert report.normalization == "raw" and report.scale == 1.0
        assert len(report.rows) == 4
        assert report.rows[0]["method"] == "quadrature"
        assert sorted(report.validators) == [
            "bgi",
            "family",
            "messages",
            "profile",
            "volume_bound",
        ]

    def test_report_serializes_to_json(self, line, line_family_p1):
        u = ball_indicator([0.5], 0.5, 1.0)
        report = check_ms(line, u, line_family_p1, skip_validate=True)
        data = report.to_dict()
        text = json.dumps(data, sort_keys=True, allow_nan=False)
        assert data["verdict"] == "PASS"
        assert data["extrapolation"]["limit"] == pytest.approx(report.limit_estimate)
        assert data["validators"] is None
        assert "ladder" in data and "prediction" in data and len(text) > 200

    def test_s_normalized_scale(self, line):
        family = standard_family(1, 2.0, s_ladder=(0.1, 0.05, 0.025, 0.0125))
        u = ball_indicator([0.5], 0.5, 2.0)
        report = check_ms(line, u, family, normalization="s", skip_validate=True)
        assert report.scale == pytest.approx(0.5, rel=1e-15)
        assert report.passed
        assert report.predicted_limit == pytest.approx(2.0, rel=1e-12)
        assert report.limit_estimate == pytest.approx(1.9928, abs=2e-3)

    def test_s_scale_requires_power_generator(self, line):
        family = make_family(make_exp_generator(), make_power_profile(1), (0.4, 0.2, 0.1))
        with pytest.raises(ValueError, match="power"):
            check_ms(
                line, ball_indicator([0.5], 0.5, 1.0), family,
                normalization="s", skip_validate=True,
            )

    def test_finite_space_uses_the_absolute_floor(self):
        circle = CircleSpace(1.0)
        family = standard_family(1, 1.0, s_ladder=(0.2, 0.1, 0.05, 0.025))
        report = check_ms(circle, ball_indicator([0.0], 1.0, 1.0), family, skip_validate=True)
        assert report.passed
        assert report.predicted_limit == 0.0
        assert math.isnan(report.relative_deviation)
        assert abs(report.limit_estimate) <= report.absolute_floor
        values = [row["value"] for row in report.rows]
        assert all(b < a for a, b in zip(values, values[1:]))


class TestValidateAssumption1:
    def test_plane_iterated_limits(self, plane):
        family = standard_family(2, 2.0)
        report = validate_assumption1(plane, family, samples=50_000)
        assert report.a_limit_n_then_R == pytest.approx(math.pi, rel=1e-10)
        assert report.a_limit_R_then_n == 0.0
        assert report.a_center_spread == 0.0
        assert report.avr_reference == pytest.approx(math.pi, rel=1e-12)
        assert report.a_deviation <= 1e-10
        assert report.b_decay_ok
        assert report.c_bounded_ok and report.c_nonincreasing_ok
        c = np.asarray(report.c_values, dtype=float)
        assert np.all(np.isfinite(c))

    def test_finite_space_tails_vanish(self):
        circle = CircleSpace(1.0)
        family = standard_family(1, 1.0)
        report = validate_assumption1(circle, family, R_ladder=(1.0, 2.0), samples=20_000)
        assert report.a_limit_R_then_n == 0.0
        assert abs(report.a_limit_n_then_R) <= 0.05
        assert report.a_center_spread == 0.0

    def test_input_validation(self, line, line_family_p1):
        with pytest.raises(ValueError, match="at least 2"):
            validate_assumption1(line, line_family_p1, R_ladder=(2.0,))
        log_family = make_family(make_log_generator(), make_power_profile(1), (0.4, 0.2))
        with pytest.raises(ValueError, match="floor"):
            validate_assumption1(line, log_family, R_ladder=(0.5, 2.0))
