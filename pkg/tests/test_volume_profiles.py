"""Volume profiles: power and hyperbolic growth, diagnostics."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from nonlocal_limits import (
    check_profile,
    make_custom_profile,
    make_hyperbolic_profile,
    make_power_profile,
)


class TestPowerProfile:
    def test_values(self):
        p = make_power_profile(2)
        assert p.eval(3.0) == 9.0
        assert p.deriv(3.0) == 6.0

    def test_identity_profile(self):
        p = make_power_profile(1)
        assert p.eval(5.0) == 5.0
        assert p.deriv(5.0) == 1.0

    def test_inverse_fourth_root(self):
        p = make_power_profile(4)
        assert p.inverse(16.0) == 2.0

    def test_rejects_degree_zero(self):
        with pytest.raises(ValueError):
            make_power_profile(0)

    def test_log_hooks_match_direct_logs(self):
        p = make_power_profile(3)
        w = np.linspace(-5.0, 5.0, 31)
        t = np.exp(w)
        assert np.allclose(p.log_eval_exp(w), np.log(p.eval(t)), rtol=1e-12)
        assert np.allclose(p.log_deriv_exp(w), np.log(p.deriv(t)), rtol=1e-12)

    @given(
        st.integers(min_value=1, max_value=6),
        st.floats(min_value=1e-6, max_value=1e6),
    )
    @settings(max_examples=60, deadline=None)
    def test_inverse_roundtrip(self, N, t):
        p = make_power_profile(N)
        assert p.inverse(p.eval(t)) == pytest.approx(t, rel=1e-10)

    def test_diagnostics_pass(self):
        diag = check_profile(make_power_profile(2))
        assert diag.passed
        assert not diag.monotone_violations


class TestHyperbolicProfile:
    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            make_hyperbolic_profile(0.0, 3)
        with pytest.raises(ValueError):
            make_hyperbolic_profile(1.0, 3)
        with pytest.raises(ValueError):
            make_hyperbolic_profile(-1.0, 1)

    @pytest.mark.parametrize("K,N", [(-1.0, 2), (-1.0, 3), (-2.0, 4)])
    def test_deriv_is_shell_density(self, K, N):
        p = make_hyperbolic_profile(K, N)
        c = math.sqrt(-K / (N - 1))
        for t in (0.3, 1.0, 4.0):
            assert p.deriv(t) == pytest.approx(math.sinh(c * t) ** (N - 1), rel=1e-12)

    @pytest.mark.parametrize("K,N", [(-1.0, 2), (-1.0, 3), (-2.0, 4), (-0.5, 5)])
    def test_eval_matches_quadrature(self, K, N):
        p = make_hyperbolic_profile(K, N)
        c = math.sqrt(-K / (N - 1))
        for t in (0.05, 0.7, 3.0, 12.0):
            ref, _ = quad(lambda r: math.sinh(c * r) ** (N - 1), 0.0, t)
            assert float(p.eval(t)) == pytest.approx(ref, rel=1e-8)

    def test_inverse_roundtrip(self):
        p = make_hyperbolic_profile(-1.0, 3)
        for t in np.geomspace(1e-3, 40.0, 17):
            assert float(p.inverse(p.eval(t))) == pytest.approx(t, rel=1e-9)

    def test_diagnostics_pass(self):
        assert check_profile(make_hyperbolic_profile(-1.0, 3)).passed

    def test_large_argument_stays_finite_in_log(self):
        p = make_hyperbolic_profile(-1.0, 2)
        w = np.array([10.0, 50.0, 200.0])
        log_v = p.log_eval_exp(w)
        assert np.all(np.isfinite(log_v))
        # growth rate approaches c (N - 1) = 1 per unit radius in ln V
        assert (log_v[2] - log_v[1]) / (np.exp(w[2]) - np.exp(w[1])) == pytest.approx(
            1.0, rel=1e-6
        )


class TestCustomProfile:
    def test_wraps_callables(self):
        p = make_custom_profile(
            lambda t: np.asarray(t) ** 3,
            lambda t: 3.0 * np.asarray(t) ** 2,
            lambda v: np.asarray(v) ** (1.0 / 3.0),
        )
        assert float(p.eval(2.0)) == pytest.approx(8.0, rel=1e-12)
        assert check_profile(p).passed

    def test_diagnostics_flag_non_monotone(self):
        p = make_custom_profile(
            lambda t: np.sin(np.asarray(t, dtype=float)),
            lambda t: np.cos(np.asarray(t, dtype=float)),
            lambda v: np.arcsin(np.clip(np.asarray(v, dtype=float), -1.0, 1.0)),
        )
        diag = check_profile(p)
        assert not diag.passed
        assert diag.monotone_violations
        assert diag.messages

    def test_diagnostics_flag_wrong_derivative(self):
        p = make_custom_profile(
            lambda t: np.asarray(t, dtype=float) ** 2,
            lambda t: np.ones_like(np.asarray(t, dtype=float)),
            lambda v: np.sqrt(np.asarray(v, dtype=float)),
        )
        diag = check_profile(p)
        assert not diag.passed
        assert any("deriv" in m for m in diag.messages)
