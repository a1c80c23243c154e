"""Reference volume profiles: growth functions V with derivative S and inverse.

A profile is a strictly increasing C^1 function V on [0, inf) with V(0) = 0
(model cases) or on [floor, inf) for restricted domains.  Profiles supply the
radial weight in mollifier families and the comparison denominator in ball
volume ratios.  Model profiles are the pure power t^N and the constant
curvature integral of sinh^(N-1); arbitrary callables are accepted through
:func:`make_custom_profile`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import quad
from scipy.interpolate import CubicSpline, PchipInterpolator
from scipy.optimize import brentq

__all__ = [
    "VolumeProfile",
    "ProfileDiagnostics",
    "make_power_profile",
    "make_hyperbolic_profile",
    "make_custom_profile",
    "check_profile",
]

# Relative width of the inverse root bracket after bisection.
_INVERSE_TOL = 1e-14


class VolumeProfile:
    """Base interface: evaluation, derivative, inverse, and log-scale hooks.

    Attributes:
        kind: one of ``"power"``, ``"hyperbolic"``, ``"custom"``.
        domain_floor: infimum of the valid radius domain (0 for model
            profiles; positive for restricted ones).
        params: constructor parameters, echoed into reports.
    """

    kind: str = "custom"

    def __init__(self, domain_floor: float = 0.0, params: dict | None = None):
        self.domain_floor = float(domain_floor)
        self.params = dict(params or {})

    def eval(self, t):
        """Return V(t) elementwise."""
        raise NotImplementedError

    def deriv(self, t):
        """Return S(t) = V'(t) elementwise."""
        raise NotImplementedError

    def inverse(self, v):
        """Return V^(-1)(v) elementwise."""
        raise NotImplementedError

    # Log-scale hooks used by tail quadrature.  They evaluate at t = e^w so
    # integrands stay representable when t itself would overflow.
    def log_eval_exp(self, w):
        """Return ln V(e^w), finite wherever V(e^w) is representable."""
        with np.errstate(over="ignore", divide="ignore"):
            return np.log(self.eval(np.exp(np.asarray(w, dtype=float))))

    def log_deriv_exp(self, w):
        """Return ln S(e^w)."""
        with np.errstate(over="ignore", divide="ignore"):
            return np.log(self.deriv(np.exp(np.asarray(w, dtype=float))))

    def inverse_from_log(self, log_v: float) -> float:
        """Return V^(-1)(v) given ln v, capped at the largest representable t.

        Radius sampling needs this for heavy-tailed quantiles whose linear
        value overflows float64.
        """
        if log_v > 700.0:
            return math.inf
        return float(self.inverse(math.exp(log_v)))

    def __repr__(self):  # pragma: no cover - cosmetic
        inner = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{type(self).__name__}({inner})"


class PowerProfile(VolumeProfile):
    """V(t) = t^N with exact derivative and inverse."""

    kind = "power"

    def __init__(self, N: int):
        if N < 1:
            raise ValueError(f"power profile needs N >= 1, got {N}")
        super().__init__(0.0, {"N": N})
        self.N = int(N)

    def eval(self, t):
        return np.asarray(t, dtype=float) ** self.N

    def deriv(self, t):
        t = np.asarray(t, dtype=float)
        return self.N * t ** (self.N - 1)

    def inverse(self, v):
        return np.asarray(v, dtype=float) ** (1.0 / self.N)

    def log_eval_exp(self, w):
        return self.N * np.asarray(w, dtype=float)

    def log_deriv_exp(self, w):
        return math.log(self.N) + (self.N - 1) * np.asarray(w, dtype=float)

    def inverse_from_log(self, log_v: float) -> float:
        log_t = log_v / self.N
        if log_t > 700.0:
            return math.inf
        return math.exp(log_t)


class HyperbolicProfile(VolumeProfile):
    """V(t) = integral of sinh^(N-1)(c r) on [0, t] with c = sqrt(-K/(N-1)).

    Evaluation uses a node table filled by composite Gauss-Legendre
    quadrature at construction, with a cubic spline between nodes whose
    monotonicity is verified (falling back to a shape-preserving
    interpolant if the check ever fails).  Beyond the table the exact
    asymptotic antiderivative of the dominant exponential takes over.
    """

    kind = "hyperbolic"

    # Below this radius a two-term series is more accurate than the table.
    _T_SERIES = 1e-8

    def __init__(self, K: float, N: int):
        if K >= 0:
            raise ValueError(f"hyperbolic profile needs K < 0, got {K}")
        if N < 2:
            raise ValueError(f"hyperbolic profile needs N >= 2, got {N}")
        super().__init__(0.0, {"K": float(K), "N": int(N)})
        self.K = float(K)
        self.N = int(N)
        self.c = math.sqrt(-self.K / (self.N - 1))
        # Exponential growth rate of the integrand.
        self._rate = self.c * (self.N - 1)
        self._t_cap = 640.0 / self._rate
        self._build_table()

    def _integrand(self, r):
        return np.sinh(self.c * np.asarray(r, dtype=float)) ** (self.N - 1)

    def _series(self, t):
        # Two-term expansion of the sinh power integral, exact to O((ct)^4).
        t = np.asarray(t, dtype=float)
        lead = self.c ** (self.N - 1) * t**self.N / self.N
        return lead * (1.0 + (self.N - 1) * (self.c * t) ** 2 * self.N / (6.0 * (self.N + 2)))

    def _build_table(self):
        # Log-spaced nodes where V is polynomially small (relative accuracy),
        # then uniform steps through the exponential-growth region.  The
        # density targets 1e-8 value accuracy and 1e-6 spline-derivative
        # accuracy, the tolerances the diagnostics enforce.
        join = 1.0 / self.c
        small = np.geomspace(self._T_SERIES, join, 2600)
        step = 0.02 / self._rate
        big = np.arange(join + step, self._t_cap + step, step)
        nodes = np.concatenate([small, big])
        # 15-point Gauss-Legendre per segment: machine precision for the
        # smooth integrand on these widths.
        x, wts = np.polynomial.legendre.leggauss(15)
        lo, hi = nodes[:-1], nodes[1:]
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        pts = mid[:, None] + half[:, None] * x[None, :]
        seg = half * (self._integrand(pts) @ wts)
        vals = np.concatenate([[float(self._series(nodes[0]))], seg])
        vals = np.cumsum(vals)
        self._nodes = nodes
        self._vals = vals
        self._spline = CubicSpline(nodes, vals)
        probe = np.linspace(nodes[0], nodes[-1], 4 * len(nodes))
        if np.any(self._spline(probe, 1) <= 0.0):
            self._spline = PchipInterpolator(nodes, vals)
        self._v_cap = float(vals[-1])

    def _eval_asymptotic(self, t):
        # integral of e^(rate*r)/2^(N-1) from t_cap to t, plus table top;
        # relative error ~ e^(-2 c t_cap), far below float64 resolution.
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore"):
            growth = (np.exp(self._rate * t) - math.exp(self._rate * self._t_cap)) / (
                self._rate * 2.0 ** (self.N - 1)
            )
        return self._v_cap + growth

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        out = np.empty_like(t, dtype=float)
        tiny = t < self._T_SERIES
        big = t > self._t_cap
        mid = ~tiny & ~big
        out[tiny] = self._series(t[tiny])
        out[mid] = self._spline(t[mid])
        out[big] = self._eval_asymptotic(t[big])
        return out if out.ndim else out[()]

    def deriv(self, t):
        return self._integrand(t)

    def _inverse_scalar(self, v: float) -> float:
        if v <= 0.0:
            return 0.0
        if v >= self._v_cap:
            arg = v - self._v_cap + math.exp(self._rate * self._t_cap) / (
                self._rate * 2.0 ** (self.N - 1)
            )
            return math.log(arg * self._rate * 2.0 ** (self.N - 1)) / self._rate
        if v <= self._vals[0]:
            return (v * self.N / self.c ** (self.N - 1)) ** (1.0 / self.N)
        i = int(np.searchsorted(self._vals, v))
        lo, hi = self._nodes[max(i - 1, 0)], self._nodes[min(i, len(self._nodes) - 1)]
        if lo == hi:
            return float(lo)
        t = brentq(lambda x: float(self._spline(x)) - v, lo, hi, xtol=_INVERSE_TOL * (1.0 + hi))
        # Two Newton polish steps against the analytic derivative.
        for _ in range(2):
            t -= (float(self.eval(t)) - v) / float(self.deriv(t))
        return float(t)

    def inverse(self, v):
        v = np.asarray(v, dtype=float)
        if v.ndim == 0:
            return self._inverse_scalar(float(v))
        return np.array([self._inverse_scalar(float(x)) for x in v.ravel()]).reshape(v.shape)

    # Both log hooks share the same saturation (radius argument clamped at
    # e^700, value at 1e307) so their difference, which sets the kernel
    # decay, keeps its sign and scale for radii far beyond float range.
    _LOG_CAP = 1e307

    def log_eval_exp(self, w):
        w = np.asarray(w, dtype=float)
        t = np.exp(np.minimum(w, 700.0))
        out = np.empty_like(t)
        inside = t <= self._t_cap
        with np.errstate(divide="ignore"):
            out[inside] = np.log(self.eval(t[inside]))
        far = ~inside
        if np.any(far):
            # ln V ~ rate*t - ln(rate 2^(N-1)) once the exponential dominates.
            out[far] = np.minimum(
                self._rate * t[far] - math.log(self._rate * 2.0 ** (self.N - 1)),
                self._LOG_CAP,
            )
        return out if out.ndim else out[()]

    def log_deriv_exp(self, w):
        w = np.asarray(w, dtype=float)
        t = np.exp(np.minimum(w, 700.0))
        out = np.empty_like(t)
        small = self.c * t < 300.0
        with np.errstate(divide="ignore"):
            out[small] = np.log(self.deriv(t[small]))
        big = ~small
        if np.any(big):
            out[big] = np.minimum(
                (self.N - 1) * (self.c * t[big] - math.log(2.0)), self._LOG_CAP
            )
        return out if out.ndim else out[()]


class CustomProfile(VolumeProfile):
    """Profile built from user callables; inverse by bracketed root finding."""

    kind = "custom"

    def __init__(
        self,
        eval_fn: Callable,
        deriv_fn: Callable,
        inverse_fn: Callable | None = None,
        domain_floor: float = 0.0,
        name: str = "custom",
    ):
        super().__init__(domain_floor, {"name": name})
        self._eval_fn = eval_fn
        self._deriv_fn = deriv_fn
        self._inverse_fn = inverse_fn

    def eval(self, t):
        return self._eval_fn(np.asarray(t, dtype=float))

    def deriv(self, t):
        return self._deriv_fn(np.asarray(t, dtype=float))

    def _inverse_scalar(self, v: float) -> float:
        if self._inverse_fn is not None:
            return float(self._inverse_fn(v))
        lo = self.domain_floor
        hi = max(1.0, lo + 1.0)
        while float(self.eval(hi)) < v:
            hi *= 2.0
            if hi > 1e300:
                raise ValueError(f"inverse bracket for v={v} exceeds representable range")
        if float(self.eval(lo)) > v:
            raise ValueError(f"v={v} below profile range (floor {lo})")
        t = brentq(lambda x: float(self.eval(x)) - v, lo, hi, xtol=_INVERSE_TOL * (1.0 + hi))
        d = float(self.deriv(t))
        if d > 0.0:
            for _ in range(2):
                t -= (float(self.eval(t)) - v) / float(self.deriv(t))
        return float(t)

    def inverse(self, v):
        v = np.asarray(v, dtype=float)
        if v.ndim == 0:
            return self._inverse_scalar(float(v))
        return np.array([self._inverse_scalar(float(x)) for x in v.ravel()]).reshape(v.shape)


def make_power_profile(N: int) -> VolumeProfile:
    """Return the pure power profile V(t) = t^N.

    Args:
        N: positive integer exponent.

    Returns:
        A :class:`VolumeProfile` with exact derivative and inverse.
    """
    return PowerProfile(N)


def make_hyperbolic_profile(K: float, N: int) -> VolumeProfile:
    """Return the constant-curvature profile for curvature K < 0.

    V(t) is the integral of sinh^(N-1)(r sqrt(-K/(N-1))) over [0, t];
    for K = -1, N = 2 this is cosh(t) - 1 in closed form, which the test
    suite uses as an oracle.

    Args:
        K: negative curvature parameter.
        N: integer dimension parameter, at least 2.
    """
    return HyperbolicProfile(K, N)


def make_custom_profile(
    eval_fn: Callable,
    deriv_fn: Callable,
    inverse_fn: Callable | None = None,
    domain_floor: float = 0.0,
    name: str = "custom",
) -> VolumeProfile:
    """Wrap user callables as a profile.

    The callables must accept numpy arrays.  If ``inverse_fn`` is omitted
    the inverse is computed by bracketed bisection refined with Newton
    steps, which requires ``eval_fn`` to be strictly increasing.
    """
    return CustomProfile(eval_fn, deriv_fn, inverse_fn, domain_floor, name)


@dataclass(frozen=True)
class ProfileDiagnostics:
    """Result of :func:`check_profile`.

    Attributes:
        grid: radii the checks ran on.
        values: V at the grid.
        monotone_violations: indices i with V(t_i) >= V(t_(i+1)).
        deriv_residuals: relative mismatch of central differences vs deriv.
        inverse_residuals: relative error of inverse(eval(t)) round trips.
        passed: True iff all checks met their tolerances.
        messages: human-readable failure descriptions.
    """

    grid: NDArray[np.float64]
    values: NDArray[np.float64]
    monotone_violations: list[int]
    deriv_residuals: NDArray[np.float64]
    inverse_residuals: NDArray[np.float64]
    passed: bool
    messages: list[str] = field(default_factory=list)

    DERIV_TOL = 1e-6
    INVERSE_TOL = 1e-10


def check_profile(
    profile: VolumeProfile, grid: Sequence[float] | None = None
) -> ProfileDiagnostics:
    """Validate monotonicity, derivative consistency, and inverse round trips.

    Args:
        profile: profile under test.
        grid: strictly increasing radii inside the profile domain; defaults
            to a log-spaced grid spanning six orders of magnitude above the
            domain floor.

    Returns:
        :class:`ProfileDiagnostics` with per-point residuals; ``passed``
        requires zero monotonicity violations, derivative agreement within
        1e-6 relative, and inverse round trips within 1e-10 relative.

    Raises:
        ValueError: empty grid.
    """
    if grid is None:
        grid = profile.domain_floor + np.geomspace(1e-5, 30.0, 160)
    grid = np.asarray(list(grid), dtype=float)
    if grid.size == 0:
        raise ValueError("check_profile needs a non-empty grid")
    values = np.asarray(profile.eval(grid), dtype=float)

    messages: list[str] = []
    monotone_violations = [int(i) for i in np.nonzero(np.diff(values) <= 0.0)[0]]
    if monotone_violations:
        messages.append(f"monotonicity fails at grid indices {monotone_violations}")

    # Step scales with the local radius (curvature of V grows like 1/t
    # toward 0 for power-like profiles) but is capped for exponential-type
    # growth where the curvature scale is constant.
    h = 6e-6 * np.minimum(grid, 10.0)
    h = np.maximum(h, 1e-12)
    h = np.minimum(h, (grid - profile.domain_floor) * 0.5, out=h, where=grid - profile.domain_floor > 0)
    fd = (np.asarray(profile.eval(grid + h)) - np.asarray(profile.eval(grid - h))) / (2.0 * h)
    deriv = np.asarray(profile.deriv(grid), dtype=float)
    deriv_residuals = np.abs(fd - deriv) / np.maximum(np.abs(deriv), 1e-300)
    if np.any(deriv_residuals > ProfileDiagnostics.DERIV_TOL):
        worst = float(np.max(deriv_residuals))
        messages.append(f"derivative mismatch up to {worst:.3e} relative")

    try:
        roundtrip = np.asarray(profile.inverse(values), dtype=float)
        inverse_residuals = np.abs(roundtrip - grid) / (1.0 + np.abs(grid))
    except (ValueError, RuntimeError) as exc:
        # Non-monotone profiles can defeat the bracketed inverse entirely.
        inverse_residuals = np.full_like(grid, np.inf)
        messages.append(f"inverse round trip failed: {exc}")
    if np.any(inverse_residuals > ProfileDiagnostics.INVERSE_TOL):
        worst = float(np.max(inverse_residuals))
        messages.append(f"inverse round trip off by {worst:.3e} relative")

    passed = not messages
    return ProfileDiagnostics(
        grid=grid,
        values=values,
        monotone_violations=monotone_violations,
        deriv_residuals=deriv_residuals,
        inverse_residuals=inverse_residuals,
        passed=passed,
        messages=messages,
    )
