"""Concrete metric measure spaces and their geometric validators.

Each space couples a distance, a reference measure with exact ball
volumes, and the volume profile it is naturally compared against.  The
validators check the volume-ratio monotonicity, estimate the asymptotic
volume ratio and the density at a point, bound ball volumes uniformly,
and integrate mollifier mass outside large balls.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray

from .mollifiers import MollifierFamily, integrate_log_tail
from .volume_profiles import VolumeProfile, make_power_profile

__all__ = [
    "Space",
    "EuclideanSpace",
    "NormedSpace",
    "WarpedLine",
    "CircleSpace",
    "HeisenbergSpace",
    "BallVolume",
    "ValueWithError",
    "BgiReport",
    "VolumeBoundReport",
    "make_euclidean",
    "make_normed",
    "make_warped_line",
    "make_circle",
    "make_heisenberg",
    "mc_ball_volume",
    "check_bgi",
    "estimate_avr",
    "estimate_density",
    "check_volume_bound",
    "tail_mollifier_mass",
]


class BallVolume(NamedTuple):
    """Ball volume with its statistical error (0 when exact)."""

    value: float
    stderr: float


class ValueWithError(NamedTuple):
    """A scalar estimate with a one-sigma error bar (0 when exact)."""

    value: float
    stderr: float


def _unit_ball_volume(N: int) -> float:
    return math.pi ** (N / 2.0) / math.gamma(N / 2.0 + 1.0)


def _q_ball_volume(N: int, q: float) -> float:
    log_v = N * (math.log(2.0) + math.lgamma(1.0 + 1.0 / q)) - math.lgamma(1.0 + N / q)
    return math.exp(log_v)


class Space:
    """Base interface for a metric measure space.

    Attributes:
        name: identifier used in configs and reports.
        chart_dim: coordinate dimension of points.
        base_point: distinguished center, shape (chart_dim,).
        diameter: metric diameter, may be inf.
        natural_profile: the volume profile the space is compared against.
    """

    name: str = "base"
    chart_dim: int = 0
    diameter: float = math.inf

    base_point: NDArray[np.float64]
    natural_profile: VolumeProfile

    def distance(self, x, y):
        """Return d(x, y) elementwise over leading axes of (..., chart_dim)."""
        raise NotImplementedError

    def ball_volume(self, x, r: float) -> BallVolume:
        """Return the measure of the ball of radius r at x."""
        raise NotImplementedError

    def log_ball_volume(self, w):
        """Return ln m(B_t) at t = e^w for the center-independent volume."""
        raise NotImplementedError

    def bounding_box(self, x, r: float) -> tuple[NDArray, NDArray]:
        """Return chart bounds (lo, hi) of a box containing the ball at x."""
        raise NotImplementedError

    def sample_ball(self, x, r: float, rng: np.random.Generator, size: int):
        """Draw uniform points in the ball at x; density is 1/ball volume."""
        raise NotImplementedError

    def sample_direction(self, rng: np.random.Generator, size: int):
        """Draw unit-sphere directions from the cone (polar) measure."""
        raise NotImplementedError

    def shell_point(self, x, rho, sigma):
        """Return the point at distance rho from x along direction sigma."""
        raise NotImplementedError

    def params(self) -> dict:
        return {}

    def __repr__(self):  # pragma: no cover - cosmetic
        inner = ", ".join(f"{k}={v}" for k, v in self.params().items())
        return f"{type(self).__name__}({inner})"


class EuclideanSpace(Space):
    """R^N with the Euclidean norm and Lebesgue measure."""

    def __init__(self, N: int):
        if N < 1 or N != int(N):
            raise ValueError(f"dimension must be a positive integer, got {N}")
        self.N = int(N)
        self.name = f"euclidean-{self.N}"
        self.chart_dim = self.N
        self.base_point = np.zeros(self.N)
        self.natural_profile = make_power_profile(self.N)
        self.unit_volume = _unit_ball_volume(self.N)

    def distance(self, x, y):
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        return np.linalg.norm(x - y, axis=-1)

    def ball_volume(self, x, r: float) -> BallVolume:
        return BallVolume(self.unit_volume * float(r) ** self.N, 0.0)

    def log_ball_volume(self, w):
        return math.log(self.unit_volume) + self.N * np.asarray(w, dtype=float)

    def bounding_box(self, x, r: float):
        x = np.asarray(x, dtype=float)
        return x - r, x + r

    def sample_ball(self, x, r: float, rng: np.random.Generator, size: int):
        sigma = self.sample_direction(rng, size)
        s = r * rng.random(size) ** (1.0 / self.N)
        return np.asarray(x, dtype=float) + s[:, None] * sigma

    def sample_direction(self, rng: np.random.Generator, size: int):
        g = rng.standard_normal((size, self.N))
        return g / np.linalg.norm(g, axis=-1, keepdims=True)

    def shell_point(self, x, rho, sigma):
        rho = np.asarray(rho, dtype=float)
        return np.asarray(x, dtype=float) + rho[..., None] * np.asarray(sigma, dtype=float)

    def params(self):
        return {"N": self.N}


class NormedSpace(Space):
    """R^N under the q-norm with Lebesgue measure, q >= 1."""

    def __init__(self, N: int, q: float):
        if N < 1 or N != int(N):
            raise ValueError(f"dimension must be a positive integer, got {N}")
        if not (q >= 1.0 and math.isfinite(q)):
            raise ValueError(f"q-norm exponent must satisfy 1 <= q < inf, got {q}")
        self.N = int(N)
        self.q = float(q)
        self.name = f"normed-{self.N}-q{self.q:g}"
        self.chart_dim = self.N
        self.base_point = np.zeros(self.N)
        self.natural_profile = make_power_profile(self.N)
        self.unit_volume = _q_ball_volume(self.N, self.q)

    def distance(self, x, y):
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        return np.sum(np.abs(x - y) ** self.q, axis=-1) ** (1.0 / self.q)

    def ball_volume(self, x, r: float) -> BallVolume:
        return BallVolume(self.unit_volume * float(r) ** self.N, 0.0)

    def log_ball_volume(self, w):
        return math.log(self.unit_volume) + self.N * np.asarray(w, dtype=float)

    def bounding_box(self, x, r: float):
        x = np.asarray(x, dtype=float)
        return x - r, x + r

    def sample_ball(self, x, r: float, rng: np.random.Generator, size: int):
        sigma = self.sample_direction(rng, size)
        s = r * rng.random(size) ** (1.0 / self.N)
        return np.asarray(x, dtype=float) + s[:, None] * sigma

    def sample_direction(self, rng: np.random.Generator, size: int):
        # |g_i|^q ~ Gamma(1/q) gives g with density proportional to
        # exp(-sum |x_i|^q); normalizing yields the cone measure that makes
        # the polar factorization of Lebesgue measure exact.
        mag = rng.gamma(1.0 / self.q, size=(size, self.N)) ** (1.0 / self.q)
        g = np.where(rng.random((size, self.N)) < 0.5, mag, -mag)
        norms = np.sum(np.abs(g) ** self.q, axis=-1) ** (1.0 / self.q)
        return g / norms[:, None]

    def shell_point(self, x, rho, sigma):
        rho = np.asarray(rho, dtype=float)
        return np.asarray(x, dtype=float) + rho[..., None] * np.asarray(sigma, dtype=float)

    def params(self):
        return {"N": self.N, "q": self.q}


class WarpedLine(Space):
    """The line with d(x, y) = V^(-1)(|x - y|) and length measure.

    The inverse profile must be subadditive for d to satisfy the triangle
    inequality; this is checked on random pairs at construction.
    """

    _SUBADD_TRIALS = 10_000

    def __init__(self, profile: VolumeProfile):
        if profile.domain_floor > 0.0:
            raise ValueError("warped line needs a profile defined down to 0")
        self.profile = profile
        self.name = f"warped-line-{profile.kind}"
        self.chart_dim = 1
        self.base_point = np.zeros(1)
        self.natural_profile = profile
        rng = np.random.default_rng(179424673)
        a = 10.0 ** rng.uniform(-3.0, 3.0, self._SUBADD_TRIALS)
        b = 10.0 ** rng.uniform(-3.0, 3.0, self._SUBADD_TRIALS)
        lhs = np.asarray(profile.inverse(a + b), dtype=float)
        rhs = np.asarray(profile.inverse(a), dtype=float) + np.asarray(
            profile.inverse(b), dtype=float
        )
        bad = lhs > rhs * (1.0 + 1e-10)
        if np.any(bad):
            i = int(np.argmax(bad))
            raise ValueError(
                "inverse profile is not subadditive: "
                f"V^-1({a[i]:.3g}+{b[i]:.3g}) > V^-1({a[i]:.3g})+V^-1({b[i]:.3g})"
            )

    def distance(self, x, y):
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        gap = np.abs(x - y)[..., 0] if (x - y).ndim else np.abs(x - y)
        return np.asarray(self.profile.inverse(gap), dtype=float)

    def ball_volume(self, x, r: float) -> BallVolume:
        return BallVolume(2.0 * float(self.profile.eval(float(r))), 0.0)

    def log_ball_volume(self, w):
        return math.log(2.0) + np.asarray(self.profile.log_eval_exp(w), dtype=float)

    def bounding_box(self, x, r: float):
        x = np.asarray(x, dtype=float)
        half = float(self.profile.eval(float(r)))
        return x - half, x + half

    def sample_ball(self, x, r: float, rng: np.random.Generator, size: int):
        half = float(self.profile.eval(float(r)))
        return np.asarray(x, dtype=float) + rng.uniform(-half, half, (size, 1))

    def sample_direction(self, rng: np.random.Generator, size: int):
        return np.where(rng.random((size, 1)) < 0.5, -1.0, 1.0)

    def shell_point(self, x, rho, sigma):
        step = np.asarray(self.profile.eval(np.asarray(rho, dtype=float)), dtype=float)
        return np.asarray(x, dtype=float) + step[..., None] * np.asarray(sigma, dtype=float)

    def params(self):
        return {"profile": self.profile.kind, **self.profile.params}


class CircleSpace(Space):
    """A circle of radius R with arc-length distance and measure.

    Points are angles in [0, 2 pi); the diameter is pi R and the total
    measure 2 pi R, so the asymptotic volume ratio vanishes.
    """

    def __init__(self, radius: float):
        if radius <= 0:
            raise ValueError(f"circle radius must be positive, got {radius}")
        self.radius = float(radius)
        self.name = f"circle-R{self.radius:g}"
        self.chart_dim = 1
        self.base_point = np.zeros(1)
        self.diameter = math.pi * self.radius
        self.total_measure = 2.0 * math.pi * self.radius
        self.natural_profile = make_power_profile(1)

    def distance(self, x, y):
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        diff = np.abs(x - y)[..., 0] % (2.0 * math.pi)
        return self.radius * (math.pi - np.abs(diff - math.pi))

    def ball_volume(self, x, r: float) -> BallVolume:
        return BallVolume(min(2.0 * float(r), self.total_measure), 0.0)

    def log_ball_volume(self, w):
        w = np.asarray(w, dtype=float)
        return np.minimum(math.log(2.0) + w, math.log(self.total_measure))

    def bounding_box(self, x, r: float):
        x = np.asarray(x, dtype=float)
        half = min(float(r) / self.radius, math.pi)
        return x - half, x + half

    def sample_ball(self, x, r: float, rng: np.random.Generator, size: int):
        half = min(float(r) / self.radius, math.pi)
        ang = np.asarray(x, dtype=float) + rng.uniform(-half, half, (size, 1))
        return ang % (2.0 * math.pi)

    def sample_direction(self, rng: np.random.Generator, size: int):
        return np.where(rng.random((size, 1)) < 0.5, -1.0, 1.0)

    def shell_point(self, x, rho, sigma):
        step = np.asarray(rho, dtype=float) / self.radius
        ang = np.asarray(x, dtype=float) + step[..., None] * np.asarray(sigma, dtype=float)
        return ang % (2.0 * math.pi)

    def params(self):
        return {"radius": self.radius}


class HeisenbergSpace(Space):
    """The first Heisenberg group on R^3 with a homogeneous gauge metric.

    Points are (x, y, t); the group product is
    (z, t) * (z', t') = (z + z', t + t' + 2 Im(conj(z) z')) with z = x + iy,
    the gauge is ||(z, t)|| = (|z|^4 + t^2)^(1/4), and the distance is the
    gauge norm of the group difference.  Lebesgue measure is the Haar
    measure and scales as r^4 under the dilations (z, t) -> (r z, r^2 t),
    so balls have volume c r^4; the constant is estimated once by
    stratified rejection sampling and cached.
    """

    _CK_SAMPLES = 10_000_000
    _ck_cache: BallVolume | None = None

    def __init__(self):
        self.name = "heisenberg"
        self.chart_dim = 3
        self.base_point = np.zeros(3)
        self.natural_profile = make_power_profile(4)
        if HeisenbergSpace._ck_cache is None:
            HeisenbergSpace._ck_cache = mc_ball_volume(
                self, np.zeros(3), 1.0, self._CK_SAMPLES, np.random.Generator(
                    np.random.Philox(key=823764283)
                )
            )
        self.unit_volume = HeisenbergSpace._ck_cache.value
        self.unit_volume_stderr = HeisenbergSpace._ck_cache.stderr

    @staticmethod
    def gauge(p):
        p = np.asarray(p, dtype=float)
        zsq = p[..., 0] ** 2 + p[..., 1] ** 2
        return (zsq**2 + p[..., 2] ** 2) ** 0.25

    @staticmethod
    def group_product(p, q):
        p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
        p, q = np.broadcast_arrays(p, q)
        out = np.empty(p.shape)
        out[..., 0] = p[..., 0] + q[..., 0]
        out[..., 1] = p[..., 1] + q[..., 1]
        # Im(conj(z) z') = x y' - y x'
        out[..., 2] = (
            p[..., 2]
            + q[..., 2]
            + 2.0 * (p[..., 0] * q[..., 1] - p[..., 1] * q[..., 0])
        )
        return out

    @staticmethod
    def group_inverse(p):
        return -np.asarray(p, dtype=float)

    @staticmethod
    def dilate(p, r):
        p = np.asarray(p, dtype=float)
        r = np.asarray(r, dtype=float)
        out = np.empty(np.broadcast_shapes(p.shape, r[..., None].shape))
        out[..., 0] = r * p[..., 0]
        out[..., 1] = r * p[..., 1]
        out[..., 2] = r**2 * p[..., 2]
        return out

    def distance(self, x, y):
        return self.gauge(self.group_product(self.group_inverse(y), x))

    def ball_volume(self, x, r: float) -> BallVolume:
        r = float(r)
        return BallVolume(self.unit_volume * r**4, self.unit_volume_stderr * r**4)

    def log_ball_volume(self, w):
        return math.log(self.unit_volume) + 4.0 * np.asarray(w, dtype=float)

    def bounding_box(self, x, r: float):
        # B_r(x) = x * B_r(0); the group product shifts the t-coordinate by
        # up to 2 |z_x| |zeta| on top of the translate.
        x = np.asarray(x, dtype=float)
        r = float(r)
        zx = math.hypot(x[0], x[1])
        half = np.array([r, r, r**2 + 2.0 * zx * r])
        return x - half, x + half

    def sample_ball(self, x, r: float, rng: np.random.Generator, size: int):
        out = np.empty((size, 3))
        have = 0
        while have < size:
            m = max(int((size - have) * 1.8) + 16, 64)
            cand = rng.uniform(-1.0, 1.0, (m, 3))
            keep = cand[self.gauge(cand) <= 1.0]
            take = min(size - have, keep.shape[0])
            out[have : have + take] = keep[:take]
            have += take
        return self.group_product(np.asarray(x, dtype=float), self.dilate(out, r))

    def sample_direction(self, rng: np.random.Generator, size: int):
        out = np.empty((size, 3))
        have = 0
        while have < size:
            m = max(int((size - have) * 1.8) + 16, 64)
            cand = rng.uniform(-1.0, 1.0, (m, 3))
            g = self.gauge(cand)
            keep = cand[(g <= 1.0) & (g > 0.0)]
            take = min(size - have, keep.shape[0])
            out[have : have + take] = keep[:take]
            have += take
        return self.dilate(out, 1.0 / self.gauge(out))

    def shell_point(self, x, rho, sigma):
        rho = np.asarray(rho, dtype=float)
        return self.group_product(
            np.asarray(x, dtype=float), self.dilate(np.asarray(sigma, dtype=float), rho)
        )

    def params(self):
        return {"metric": "gauge", "homogeneous_dim": 4}


def make_euclidean(N: int) -> Space:
    """Return R^N with the Euclidean metric and Lebesgue measure."""
    return EuclideanSpace(N)


def make_normed(N: int, q: float) -> Space:
    """Return R^N with the q-norm metric and Lebesgue measure."""
    return NormedSpace(N, q)


def make_warped_line(profile: VolumeProfile) -> Space:
    """Return the line with distance V^(-1)(|x - y|) for the given V."""
    return WarpedLine(profile)


def make_circle(radius: float) -> Space:
    """Return the circle of the given radius with arc-length metric."""
    return CircleSpace(radius)


def make_heisenberg() -> Space:
    """Return the gauge-metric Heisenberg group on R^3."""
    return HeisenbergSpace()


def mc_ball_volume(
    space: Space, x, r: float, n_samples: int, rng: np.random.Generator
) -> BallVolume:
    """Estimate a ball volume by rejection sampling in a bounding box.

    Samples are stratified over the 2^min(chart_dim, 3) sign-orthants of
    the box; the standard error combines the per-stratum binomial
    variances.
    """
    x = np.asarray(x, dtype=float)
    lo, hi = space.bounding_box(x, r)
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    box_vol = float(np.prod(hi - lo))
    d = space.chart_dim
    n_strata = 2 ** min(d, 3)
    signs = np.array(
        [[1.0 if (s >> i) & 1 else -1.0 for i in range(d)] for s in range(n_strata)]
    )
    per = n_samples // n_strata
    batch = 1_000_000
    p_hat = np.empty(n_strata)
    var = 0.0
    for s in range(n_strata):
        hits = 0
        done = 0
        while done < per:
            m = min(batch, per - done)
            u = rng.random((m, d)) * signs[s]
            pts = mid + u * half
            hits += int(np.count_nonzero(space.distance(pts, x) <= r))
            done += m
        p_hat[s] = hits / per
        var += p_hat[s] * (1.0 - p_hat[s]) / per
    p = float(np.mean(p_hat))
    stderr = box_vol * math.sqrt(var) / n_strata
    return BallVolume(box_vol * p, stderr)


@dataclass(frozen=True)
class BgiReport:
    """Volume-ratio monotonicity diagnostics at the base point.

    Attributes:
        grid: radii where the ratio m(B_r)/V(r) was evaluated.
        ratios: the ratio values.
        ratio_stderrs: statistical errors of the ratios (0 when exact).
        violations: index pairs (i, j), i < j, where the ratio increases
            beyond combined tolerance.
        avr_estimate: extrapolated large-radius limit of the ratio.
        density_estimate: small-radius limit of the ratio at the center.
        k_bound: sup of the ratios over the upper half of the grid.
        passed: no violations.
        messages: failure descriptions.
    """

    grid: NDArray[np.float64]
    ratios: NDArray[np.float64]
    ratio_stderrs: NDArray[np.float64]
    violations: list[tuple[int, int]]
    avr_estimate: ValueWithError
    density_estimate: ValueWithError
    k_bound: float
    passed: bool
    messages: list[str] = field(default_factory=list)


def _ratio_curve(space: Space, V: VolumeProfile, r_grid: NDArray) -> tuple[NDArray, NDArray]:
    vols = np.empty(r_grid.size)
    errs = np.empty(r_grid.size)
    for i, r in enumerate(r_grid):
        vols[i], errs[i] = space.ball_volume(space.base_point, float(r))
    ref = np.asarray(V.eval(r_grid), dtype=float)
    return vols / ref, errs / ref


def check_bgi(space: Space, V: VolumeProfile | None = None, r_grid=None) -> BgiReport:
    """Check that r -> m(B_r(x0))/V(r) is non-increasing.

    Args:
        space: space under test.
        V: reference profile (default: the space's natural profile).
        r_grid: strictly increasing radii; defaults to four decades around
            1 (clipped to the diameter when finite).

    Returns:
        :class:`BgiReport`; violations are index pairs whose ratio
        increases beyond 1e-9 relative plus three combined stderrs.
    """
    if V is None:
        V = space.natural_profile
    if r_grid is None:
        hi = 4.0 * space.diameter if math.isfinite(space.diameter) else 1e2
        r_grid = np.geomspace(1e-2, hi, 41)
    r_grid = np.asarray(r_grid, dtype=float)
    if r_grid.size < 2 or np.any(np.diff(r_grid) <= 0):
        raise ValueError("r_grid must be strictly increasing with >= 2 points")

    ratios, errs = _ratio_curve(space, V, r_grid)
    violations: list[tuple[int, int]] = []
    for i in range(r_grid.size):
        for j in range(i + 1, r_grid.size):
            tol = 1e-9 * abs(ratios[i]) + 3.0 * (errs[i] + errs[j])
            if ratios[j] > ratios[i] + tol:
                violations.append((i, j))

    avr = estimate_avr(space, V, r_grid[-3:])
    dens = estimate_density(space, V, space.base_point, r_grid[:3][::-1])
    upper = ratios[r_grid.size // 2 :]
    messages = []
    if violations:
        messages.append(f"volume ratio increases on {len(violations)} grid pairs")
    return BgiReport(
        grid=r_grid,
        ratios=ratios,
        ratio_stderrs=errs,
        violations=violations,
        avr_estimate=avr,
        density_estimate=dens,
        k_bound=float(np.max(upper)),
        passed=not violations,
        messages=messages,
    )


def estimate_avr(space: Space, V: VolumeProfile | None = None, r_ladder=None) -> ValueWithError:
    """Estimate the large-radius limit of m(B_r(x0))/V(r).

    Bounded-diameter spaces report 0 exactly.  Otherwise the three largest
    ladder radii are extrapolated affinely in 1/r, which is exact both for
    constant ratios and for ratios decaying like (total measure)/V(r).
    """
    if math.isfinite(space.diameter):
        return ValueWithError(0.0, 0.0)
    if V is None:
        V = space.natural_profile
    if r_ladder is None:
        r_ladder = np.geomspace(1e2, 1e4, 5)
    r_ladder = np.asarray(r_ladder, dtype=float)
    if r_ladder.size < 1 or np.any(np.diff(r_ladder) <= 0):
        raise ValueError("r_ladder must be increasing")
    ratios, errs = _ratio_curve(space, V, r_ladder)
    take = min(3, r_ladder.size)
    x = 1.0 / r_ladder[-take:]
    y = ratios[-take:]
    if take == 1 or np.all(y == y[0]):
        # constant ratios need no fit; keeps closed-form cases exact
        value, resid = float(y[0]), 0.0
    else:
        coef, res = np.polyfit(x, y, 1, full=True)[:2]
        value = float(coef[-1])
        resid = math.sqrt(float(res[0]) / take) if len(res) else 0.0
    stderr = float(np.max(errs[-take:])) + resid
    value = max(value, 0.0)
    if stderr > 0.1 * max(value, 1e-300):
        warnings.warn(
            f"asymptotic volume ratio estimate has stderr {stderr:.2e} "
            f"above 10% of the value {value:.2e}",
            RuntimeWarning,
            stacklevel=2,
        )
    return ValueWithError(value, stderr)


def estimate_density(
    space: Space, V: VolumeProfile | None = None, x=None, r_ladder_down=None
) -> ValueWithError:
    """Estimate the density lim_{r -> 0} m(B_r(x))/V(r) at a point.

    Uses the smallest-radius ratio with one Richardson (Aitken) refinement
    when the decrements resolve a geometric trend.
    """
    if V is None:
        V = space.natural_profile
    if x is None:
        x = space.base_point
    if r_ladder_down is None:
        r_ladder_down = np.array([1e-2, 1e-3, 1e-4])
    r = np.asarray(r_ladder_down, dtype=float)
    if r.size < 1 or np.any(np.diff(r) >= 0):
        raise ValueError("r_ladder_down must be decreasing")
    vols = np.empty(r.size)
    errs = np.empty(r.size)
    for i, ri in enumerate(r):
        vols[i], errs[i] = space.ball_volume(np.asarray(x, dtype=float), float(ri))
    ratios = vols / np.asarray(V.eval(r), dtype=float)
    rerrs = errs / np.asarray(V.eval(r), dtype=float)
    value = float(ratios[-1])
    if r.size >= 3:
        d1, d2 = ratios[-2] - ratios[-3], ratios[-1] - ratios[-2]
        denom = d2 - d1
        noise = 3.0 * float(np.max(rerrs[-3:])) + 1e-12 * abs(value)
        if abs(denom) > noise and abs(d2) > noise:
            value = float(ratios[-1] - d2 * d2 / denom)
    stderr = float(np.max(rerrs)) + abs(value - float(ratios[-1]))
    return ValueWithError(value, stderr)


@dataclass(frozen=True)
class VolumeBoundReport:
    """Uniform volume bound m(B_r(x)) <= k V(r) over sampled centers.

    Attributes:
        k: empirical sup of m(B_r(x))/V(r) over centers and radii.
        per_decade_max: max ratio within each radius decade.
        bounded_ok: no decade-to-decade growth above 10%.
        centers: sampled centers, shape (n_centers, chart_dim).
        messages: failure descriptions.
    """

    k: float
    per_decade_max: NDArray[np.float64]
    bounded_ok: bool
    centers: NDArray[np.float64]
    messages: list[str] = field(default_factory=list)


def check_volume_bound(
    space: Space,
    V: VolumeProfile | None = None,
    r_grid=None,
    n_centers: int = 16,
    seed: int = 0,
) -> VolumeBoundReport:
    """Bound ball volumes against a profile over random centers.

    The centers are drawn uniformly from a ball around the base point with
    radius equal to the largest grid radius.
    """
    if V is None:
        V = space.natural_profile
    if r_grid is None:
        hi = space.diameter if math.isfinite(space.diameter) else 1e3
        r_grid = np.geomspace(1e-1, hi, 25)
    r_grid = np.asarray(r_grid, dtype=float)
    if n_centers < 16:
        raise ValueError("need at least 16 centers")
    rng = np.random.Generator(np.random.Philox(key=seed))
    centers = space.sample_ball(space.base_point, float(r_grid[-1]), rng, n_centers)
    ref = np.asarray(V.eval(r_grid), dtype=float)
    table = np.empty((n_centers, r_grid.size))
    for i in range(n_centers):
        for j, r in enumerate(r_grid):
            table[i, j] = space.ball_volume(centers[i], float(r)).value
    ratios = table / ref
    per_radius = np.max(ratios, axis=0)

    decades = np.floor(np.log10(r_grid)).astype(int)
    uniq = np.unique(decades)
    per_decade = np.array([np.max(per_radius[decades == d]) for d in uniq])
    growth_ok = bool(np.all(per_decade[1:] <= per_decade[:-1] * 1.1))
    messages = []
    if not growth_ok:
        messages.append(
            "empirical volume bound grows by more than 10% per decade; "
            "no uniform constant is supported by this grid"
        )
    return VolumeBoundReport(
        k=float(np.max(per_radius)),
        per_decade_max=per_decade,
        bounded_ok=growth_ok,
        centers=np.asarray(centers, dtype=float),
        messages=messages,
    )


def tail_mollifier_mass(
    space: Space, family: MollifierFamily, n: int, x=None, R: float = 1.0
) -> float:
    """Integrate the mollifier over the complement of the ball B_R(x).

    Uses the parts-integrated form
    integral_R^inf (m(B_t(x)) - m(B_R(x))) (-rho_n'(t)) dt
    evaluated in log-radius coordinates so double-exponential tails stay
    representable.

    Returns:
        The tail mass; exactly 0 when R is at least the diameter.

    Raises:
        DivergenceError: the volume growth outpaces the kernel decay.
    """
    if x is None:
        x = space.base_point
    R = float(R)
    if R >= space.diameter:
        return 0.0
    if R <= family.domain_floor:
        raise ValueError(f"R must exceed the family domain floor {family.domain_floor}")
    log_m_R = float(space.log_ball_volume(math.log(R)))

    def log_g(w):
        w = np.asarray(w, dtype=float)
        log_m = np.asarray(space.log_ball_volume(w), dtype=float)
        with np.errstate(invalid="ignore", divide="ignore"):
            gap = log_m + np.log1p(-np.exp(np.minimum(log_m_R - log_m, 0.0)))
        gap = np.where(log_m <= log_m_R, -np.inf, gap)
        return gap + family.log_neg_deriv_integrand(n, w)

    return integrate_log_tail(log_g, math.log(R))
