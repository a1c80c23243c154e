"""Nonlocal energy estimation by 1-D quadrature or shell-sampled Monte Carlo.

The energy of u against the n-th mollifier is the double integral of
|u(x) - u(y)|^p rho_n(d(x, y)).  One-dimensional charts are integrated
deterministically with closed-form far tails; higher-dimensional spaces
use importance sampling whose radial law reproduces the kernel exactly,
so the kernel cancels from the weights.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import IntegrationWarning, quad

from .mollifiers import MollifierFamily, integrate_log_tail
from .spaces import Space, ValueWithError

__all__ = [
    "TestFunction",
    "EnergyEstimate",
    "EnergyDecomposition",
    "ball_indicator",
    "tent",
    "smooth_bump",
    "norm_p_pow",
    "energy_quadrature_1d",
    "energy_mc",
    "decompose_energy",
    "DEFAULT_MC_BATCH",
]

DEFAULT_MC_BATCH = 250_000


@dataclass(frozen=True)
class TestFunction:
    """A radial test function supported on a metric ball.

    Attributes:
        kind: one of ``ball_indicator``, ``tent``, ``smooth_bump``.
        center: chart coordinates of the support center.
        radius: support radius in the metric.
        p: integrability exponent, >= 1.
    """

    kind: str
    center: NDArray[np.float64]
    radius: float
    p: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.atleast_1d(np.asarray(self.center, float)))
        if self.radius <= 0:
            raise ValueError(f"support radius must be positive, got {self.radius}")
        if self.p < 1:
            raise ValueError(f"exponent p must be >= 1, got {self.p}")

    @property
    def support_radius(self) -> float:
        return self.radius

    def shape(self, s):
        """Profile value at scaled distance s = d/radius, vanishing at s >= 1."""
        s = np.asarray(s, dtype=float)
        if self.kind == "ball_indicator":
            out = np.where(s < 1.0, 1.0, 0.0)
        elif self.kind == "tent":
            out = np.maximum(1.0 - s, 0.0)
        elif self.kind == "smooth_bump":
            out = np.where(s < 1.0, np.maximum(1.0 - s * s, 0.0) ** 2, 0.0)
        else:  # pragma: no cover - guarded by constructors
            raise ValueError(f"unknown test function kind {self.kind!r}")
        return out if out.ndim else out[()]

    def evaluate(self, space: Space, points):
        """Evaluate u at chart points of shape (..., chart_dim)."""
        d = np.asarray(space.distance(points, self.center), dtype=float)
        return self.shape(d / self.radius)

    def lipschitz(self) -> float | None:
        """Metric Lipschitz constant, or None for the indicator."""
        if self.kind == "ball_indicator":
            return None
        if self.kind == "tent":
            return 1.0 / self.radius
        # max |d/ds (1-s^2)^2| = 8/(3 sqrt(3)) at s = 1/sqrt(3)
        return 8.0 / (3.0 * math.sqrt(3.0)) / self.radius

    def kink_radii(self) -> list[float]:
        """Metric radii where the profile loses smoothness."""
        if self.kind == "tent":
            return [0.0, self.radius]
        return [self.radius]


def ball_indicator(center, radius: float, p: float) -> TestFunction:
    """Indicator of the metric ball of the given center and radius."""
    return TestFunction("ball_indicator", center, radius, p)


def tent(center, radius: float, p: float) -> TestFunction:
    """Tent profile 1 - d/radius, clipped at 0."""
    return TestFunction("tent", center, radius, p)


def smooth_bump(center, radius: float, p: float) -> TestFunction:
    """C^1 bump (1 - (d/radius)^2)^2 on the support ball."""
    return TestFunction("smooth_bump", center, radius, p)


@dataclass(frozen=True)
class EnergyEstimate:
    """An energy value split into near and far parts.

    Attributes:
        value: total estimate, equal to near_part + far_part.
        stat_stderr: one-sigma statistical error (0 for quadrature).
        near_part: contribution of distances below the cutoff (0 when the
            near region is left to the bias bound).
        far_part: contribution of distances at or above the cutoff.
        deterministic_bias_bound: upper bound on the neglected near-region
            energy.
        params: run parameters (n, a_n, r0, samples, seed, R, x0, method).
    """

    value: float
    stat_stderr: float
    near_part: float
    far_part: float
    deterministic_bias_bound: float
    params: dict

    def __post_init__(self):
        if not math.isclose(
            self.value, self.near_part + self.far_part, rel_tol=1e-12, abs_tol=1e-300
        ):
            raise ValueError("value must equal near_part + far_part")


def _volume_coefficient(space: Space) -> float:
    """Return c with m(B_t) = c V_natural(t) below any diameter cap."""
    probe = 1.0
    if math.isfinite(space.diameter):
        probe = 0.25 * space.diameter
    vol = space.ball_volume(space.base_point, probe).value
    return vol / float(space.natural_profile.eval(probe))


def norm_p_pow(space: Space, u: TestFunction) -> ValueWithError:
    """Return ||u||_p^p with respect to the space's measure.

    Exact for indicators (the measure of the support ball); otherwise an
    adaptive shell quadrature against the exact ball-volume derivative.
    """
    if u.kind == "ball_indicator":
        vol = space.ball_volume(u.center, u.radius)
        return ValueWithError(vol.value, vol.stderr)
    if math.isfinite(space.diameter) and u.radius >= space.diameter:
        raise ValueError("test function support must fit inside the space")
    c = _volume_coefficient(space)
    S = space.natural_profile.deriv

    def g(t):
        return float(u.shape(t / u.radius)) ** u.p * c * float(S(t))

    val, err = quad(g, 0.0, u.radius, epsabs=1e-13, epsrel=1e-11, limit=200)
    rel_c = space.ball_volume(space.base_point, 1.0).stderr / max(
        space.ball_volume(space.base_point, 1.0).value, 1e-300
    )
    return ValueWithError(float(val), float(err) + rel_c * float(val))


def _near_bias_bound(
    space: Space, u: TestFunction, family: MollifierFamily, n: int, r0: float
) -> float:
    """Bound the energy carried by pairs at distance below r0.

    Indicators contribute only through a boundary collar of width r0;
    Lipschitz profiles through the p-th moment of the kernel near the
    diagonal.  Both bounds vanish with r0 at fixed n.
    """
    if r0 <= 0.0:
        return 0.0
    c = _volume_coefficient(space)
    lip = u.lipschitz()
    if lip is None:
        if family.domain_floor > 0.0:
            # kernels with a positive domain floor carry infinite mass at
            # the floor distance, so the jump collar is unbounded
            return math.inf
        log_t_r0 = family.log_tail_mass(n, r0)

        def g(w):
            w = np.asarray(w, dtype=float)
            log_T = np.asarray(family.log_tail_mass_from_log(n, -w), dtype=float)
            # ln[delta * (T(delta) - T(r0))], stable for T(delta) >> T(r0)
            lead = -w + log_T
            with np.errstate(divide="ignore", invalid="ignore"):
                res = lead + np.log1p(-np.exp(np.minimum(log_t_r0 - log_T, 0.0)))
            res = np.where(np.isfinite(log_T), res, -np.inf)
            return res if w.ndim else res[()]

        # integral of (T(delta) - T(r0)) over (0, r0] in log coordinates
        collar = integrate_log_tail(g, -math.log(r0))
        S_edge = float(space.natural_profile.deriv(u.radius))
        return 2.0 * c * c * S_edge * collar

    def g(w):
        w = np.asarray(w, dtype=float)
        return u.p * (-w) + family.log_shell_integrand(n, -w)

    moment = integrate_log_tail(g, -math.log(r0))
    reach = space.ball_volume(u.center, u.radius + r0).value
    return float(reach * lip**u.p * c * moment)


def _default_r0(u: TestFunction, family: MollifierFamily, n: int) -> float:
    """Cutoff keeping at least 99% of the tail mass seen from a reference
    scale of 1e-3 support radii."""
    delta_ref = max(u.support_radius * 1e-3, family.domain_floor * (1.0 + 1e-9))
    if delta_ref <= family.domain_floor:
        delta_ref = family.domain_floor * (1.0 + 1e-9) + 1e-300
    r0 = float(family.sample_radius(n, delta_ref, 0.99))
    return max(r0, delta_ref)


def _chart_gap(space: Space, t: float) -> float:
    """Chart displacement realizing metric distance t on a 1-D chart."""
    prof = getattr(space, "profile", None)
    if prof is not None:
        return float(prof.eval(t))
    radius = getattr(space, "radius", None)
    if radius is not None:
        return float(t)  # arc-length chart
    return float(t)


def _one_sided_tail(space: Space, family: MollifierFamily, n: int, gap: float) -> float:
    """Mollifier mass on one chart side beyond a displacement gap."""
    prof = getattr(space, "profile", None)
    if prof is not None:
        t = float(prof.inverse(gap))
    else:
        t = gap
    t = max(t, family.domain_floor * (1.0 + 1e-15))
    radius = getattr(space, "radius", None)
    if radius is not None:
        half = math.pi * radius
        if t >= half:
            return 0.0
        return math.exp(family.log_tail_mass(n, t)) - math.exp(
            family.log_tail_mass(n, half)
        )
    if t <= family.domain_floor:
        return math.inf
    return math.exp(family.log_tail_mass(n, t))


def energy_quadrature_1d(
    space: Space,
    u: TestFunction,
    family: MollifierFamily,
    n: int,
    r0: float = 0.0,
    tol: float = 1e-9,
) -> EnergyEstimate:
    """Integrate the energy exactly on a 1-D chart.

    The outer variable runs over the support interval only; the
    cross-term with the far complement is folded in through closed-form
    one-sided tail masses, using the symmetry of the integrand.  Inner
    integrals split at the kernel singularity, the profile kinks, and the
    kernel's domain floor.

    Args:
        space: a space with a 1-D chart.
        u: test function.
        family: mollifier family over the space's natural profile.
        n: ladder index.
        r0: optional near cutoff; 0 integrates the full energy exactly.
        tol: relative tolerance passed to the adaptive rule.

    Returns:
        :class:`EnergyEstimate` with zero statistical error.
    """
    if space.chart_dim != 1:
        raise ValueError("energy_quadrature_1d needs a 1-D chart")
    a_n = family.a(n)
    circle_radius = getattr(space, "radius", None)
    if circle_radius is not None and u.radius >= math.pi * circle_radius:
        raise ValueError("test function support must fit inside the circle")
    # the circle integrates in arc length so the chart measure is length
    # everywhere; the center angle converts accordingly
    cx = float(u.center[0]) * (circle_radius if circle_radius is not None else 1.0)
    g_supp = _chart_gap(space, u.radius)
    g_floor = _chart_gap(space, family.domain_floor) if family.domain_floor > 0 else 0.0
    g_cut = max(_chart_gap(space, r0) if r0 > 0 else 0.0, g_floor)

    def u_of(xi: float) -> float:
        if circle_radius is not None:
            diff = abs(xi - cx) % (2.0 * math.pi * circle_radius)
            d = min(diff, 2.0 * math.pi * circle_radius - diff)
        else:
            prof = getattr(space, "profile", None)
            d = float(prof.inverse(abs(xi - cx))) if prof is not None else abs(xi - cx)
        return float(u.shape(d / u.radius))

    def kernel_of_gap(g: float) -> float:
        prof = getattr(space, "profile", None)
        t = float(prof.inverse(g)) if prof is not None else g
        if t <= family.domain_floor:
            return 0.0
        return float(family.evaluate(n, t))

    kinks = []
    for t_k in u.kink_radii():
        g_k = _chart_gap(space, t_k) if t_k > 0 else 0.0
        if g_k == 0.0:
            kinks.append(cx)
        else:
            kinks.extend([cx - g_k, cx + g_k])
    lo, hi = cx - g_supp, cx + g_supp

    quad_opts = dict(epsabs=1e-13, epsrel=tol, limit=300)
    flagged = 0

    def inner(x: float) -> float:
        ux = u_of(x)
        if circle_radius is not None:
            half = math.pi * circle_radius
            y_lo, y_hi = x - half, x + half
            pts = []
            for k in kinks:
                for shift in (-1, 0, 1):
                    yk = k + shift * 2.0 * half
                    if y_lo < yk < y_hi:
                        pts.append(yk)
        else:
            y_lo, y_hi = lo, hi
            pts = [k for k in kinks if y_lo < k < y_hi]
        for off in (g_cut,) if g_cut > 0 else ():
            for yk in (x - off, x + off):
                if y_lo < yk < y_hi:
                    pts.append(yk)

        def f(y: float) -> float:
            g = abs(y - x)
            if g <= g_cut:
                return 0.0
            diff = abs(ux - u_of(y))
            if diff == 0.0:
                return 0.0
            return diff**u.p * kernel_of_gap(g)

        total = 0.0
        segments = sorted({y_lo, y_hi, x, *pts})
        segments = [s for s in segments if y_lo <= s <= y_hi]
        for s0, s1 in zip(segments[:-1], segments[1:]):
            if s1 - s0 <= 0:
                continue
            val, _ = quad(f, s0, s1, **quad_opts)
            total += val
        if ux > 0.0:
            # closed-form tails over the support complement; the line case
            # adds two copies (the inner range was the support only, and
            # the symmetric x-outside region doubles the cross term), the
            # circle one (its inner range was the whole circle already)
            gap_r = max(hi - x, g_cut)
            gap_l = max(x - lo, g_cut)
            tails = _one_sided_tail(space, family, n, gap_r) + _one_sided_tail(
                space, family, n, gap_l
            )
            total += (1.0 if circle_radius is not None else 2.0) * ux**u.p * tails
        return total

    outer_pts = [k for k in kinks if lo < k < hi]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value = 0.0
        segments = sorted({lo, hi, *outer_pts})
        for s0, s1 in zip(segments[:-1], segments[1:]):
            val, _ = quad(inner, s0, s1, **quad_opts)
            value += val
        flagged = sum(1 for w in caught if issubclass(w.category, IntegrationWarning))

    bias = _near_bias_bound(space, u, family, n, r0) if r0 > 0 else 0.0
    params = {
        "n": n,
        "a_n": a_n,
        "r0": r0,
        "samples": 0,
        "seed": None,
        "R": None,
        "x0": [float(v) for v in u.center],
        "method": "quadrature",
        "quad_flagged": flagged,
    }
    return EnergyEstimate(
        value=float(value),
        stat_stderr=0.0,
        near_part=0.0,
        far_part=float(value),
        deterministic_bias_bound=float(bias),
        params=params,
    )


def _mc_batches(
    space: Space,
    u: TestFunction,
    family: MollifierFamily,
    n: int,
    r0: float,
    samples: int,
    seed: int,
    batch: int,
    workers: int,
    extra: Callable | None = None,
):
    """Yield per-batch (count, sum, sumsq, extras) in fixed batch order.

    Each batch derives its own counter-based stream from (seed, index), so
    the merged moments do not depend on the worker schedule.
    """
    c_m = _volume_coefficient(space)
    t_r0 = family.tail_mass(n, r0)
    m_P = space.ball_volume(u.center, u.radius).value
    const = m_P * c_m * t_r0

    n_batches = (samples + batch - 1) // batch
    sizes = [batch] * (n_batches - 1) + [samples - batch * (n_batches - 1)]

    def run(idx: int):
        rng = np.random.Generator(np.random.Philox(key=[seed, idx]))
        m = sizes[idx]
        x = space.sample_ball(u.center, u.radius, rng, m)
        q = rng.random(m)
        r = np.asarray(family.sample_radius(n, r0, q), dtype=float)
        sigma = space.sample_direction(rng, m)
        y = space.shell_point(x, r, sigma)
        ux = np.asarray(u.evaluate(space, x), dtype=float)
        uy = np.asarray(u.evaluate(space, y), dtype=float)
        in_y = np.asarray(space.distance(y, u.center), dtype=float) <= u.radius
        w = const * np.abs(ux - uy) ** u.p / (1.0 + in_y)
        out = (m, float(np.sum(w)), float(np.sum(w * w)))
        if extra is not None:
            return out + (extra(x, y, r, w),)
        return out

    if workers <= 1:
        return [run(i) for i in range(n_batches)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, range(n_batches)))


def energy_mc(
    space: Space,
    u: TestFunction,
    family: MollifierFamily,
    n: int,
    samples: int,
    seed: int = 0,
    r0: float | None = None,
    workers: int = 1,
    batch: int = DEFAULT_MC_BATCH,
    force: bool = False,
) -> EnergyEstimate:
    """Estimate the far-field energy by shell-sampled Monte Carlo.

    One endpoint is drawn uniformly from the support ball, the other from
    the metric sphere at a kernel-distributed radius; the kernel cancels
    from the importance weight, leaving constant scale times
    |u(x) - u(y)|^p over a pair-counting symmetrization.  The near region
    d < r0 is excluded and covered by a deterministic bias bound.

    Args:
        space: target space (chart dimension >= 2 unless force).
        u: test function.
        family: mollifier family over the space's natural profile.
        n: ladder index.
        samples: total number of pair samples.
        seed: stream key; estimates are bit-identical across worker counts.
        r0: near cutoff; default keeps 99% of the reference tail mass.
        workers: thread count for batch evaluation.
        batch: samples per stream batch (fixed for determinism).
        force: allow 1-D charts.

    Returns:
        :class:`EnergyEstimate` with statistical stderr.

    Raises:
        ValueError: r0 at or below the kernel's domain floor.
        RuntimeError: non-finite moments (overflowing weights).
    """
    if space.chart_dim < 2 and not force:
        raise ValueError("energy_mc expects chart_dim >= 2; pass force=True to override")
    if samples < 1:
        raise ValueError("samples must be positive")
    if r0 is None:
        r0 = _default_r0(u, family, n)
    if r0 <= family.domain_floor:
        raise ValueError(f"r0 must exceed the kernel domain floor {family.domain_floor}")

    parts = _mc_batches(space, u, family, n, r0, samples, seed, batch, workers)
    count = sum(p[0] for p in parts)
    total = math.fsum(p[1] for p in parts)
    total_sq = math.fsum(p[2] for p in parts)
    if not (math.isfinite(total) and math.isfinite(total_sq)):
        raise RuntimeError(
            f"non-finite Monte Carlo moments (sum={total}, sumsq={total_sq}); "
            "the weight distribution is too heavy for this configuration"
        )
    mean = total / count
    var = max(total_sq - count * mean * mean, 0.0) / max(count - 1, 1)
    value = 2.0 * mean
    stderr = 2.0 * math.sqrt(var / count)
    bias = _near_bias_bound(space, u, family, n, r0)
    params = {
        "n": n,
        "a_n": family.a(n),
        "r0": float(r0),
        "samples": samples,
        "seed": seed,
        "R": None,
        "x0": [float(v) for v in u.center],
        "method": "monte-carlo",
    }
    return EnergyEstimate(
        value=value,
        stat_stderr=stderr,
        near_part=0.0,
        far_part=value,
        deterministic_bias_bound=float(bias),
        params=params,
    )


@dataclass(frozen=True)
class EnergyDecomposition:
    """Partition of the energy into the three proof regions.

    Attributes:
        I: energy at distances below R.
        II: far energy where one endpoint is much closer to x0.
        III: far energy with comparable distances to x0.
        stderr_I, stderr_II, stderr_III: per-part statistical errors.
        total: I + II + III.
        estimate: the underlying full-energy estimate (same stream).
    """

    I: float
    II: float
    III: float
    stderr_I: float
    stderr_II: float
    stderr_III: float
    total: float
    estimate: EnergyEstimate


def decompose_energy(
    space: Space,
    u: TestFunction,
    family: MollifierFamily,
    n: int,
    R: float,
    x0=None,
    samples: int = 1_000_000,
    seed: int = 0,
    r0: float | None = None,
    workers: int = 1,
    batch: int = DEFAULT_MC_BATCH,
) -> EnergyDecomposition:
    """Split the energy by distance scale and relative position to x0.

    Region I collects pairs with d(x, y) < R; the far pairs split by
    whether d(y, x0) leaves the band [d(x, x0)/2, 2 d(x, x0)] (region II)
    or stays inside it (region III).  All three shares reuse one sample
    stream, so I + II + III equals the total by construction.
    """
    if R <= 0:
        raise ValueError("R must be positive")
    if x0 is None:
        x0 = space.base_point
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if r0 is None:
        r0 = _default_r0(u, family, n)
    if r0 <= family.domain_floor:
        raise ValueError(f"r0 must exceed the kernel domain floor {family.domain_floor}")

    def label_sums(x, y, r, w):
        dx0 = np.asarray(space.distance(x, x0), dtype=float)
        dy0 = np.asarray(space.distance(y, x0), dtype=float)
        in_I = r < R
        comparable = (~in_I) & (dy0 >= 0.5 * dx0) & (dy0 <= 2.0 * dx0)
        in_II = ~(in_I | comparable)
        sums = []
        for mask in (in_I, in_II, comparable):
            wm = w[mask]
            sums.append((float(np.sum(wm)), float(np.sum(wm * wm))))
        return sums

    parts = _mc_batches(
        space, u, family, n, r0, samples, seed, batch, workers, extra=label_sums
    )
    count = sum(p[0] for p in parts)
    region_vals = []
    region_errs = []
    for k in range(3):
        s = math.fsum(p[3][k][0] for p in parts)
        sq = math.fsum(p[3][k][1] for p in parts)
        mean = s / count
        var = max(sq - count * mean * mean, 0.0) / max(count - 1, 1)
        region_vals.append(2.0 * mean)
        region_errs.append(2.0 * math.sqrt(var / count))
    total = math.fsum(region_vals)

    grand = math.fsum(p[1] for p in parts)
    grand_sq = math.fsum(p[2] for p in parts)
    mean = grand / count
    var = max(grand_sq - count * mean * mean, 0.0) / max(count - 1, 1)
    est = EnergyEstimate(
        value=2.0 * mean,
        stat_stderr=2.0 * math.sqrt(var / count),
        near_part=0.0,
        far_part=2.0 * mean,
        deterministic_bias_bound=_near_bias_bound(space, u, family, n, r0),
        params={
            "n": n,
            "a_n": family.a(n),
            "r0": float(r0),
            "samples": samples,
            "seed": seed,
            "R": float(R),
            "x0": [float(v) for v in x0],
            "method": "monte-carlo",
        },
    )
    return EnergyDecomposition(
        I=region_vals[0],
        II=region_vals[1],
        III=region_vals[2],
        stderr_I=region_errs[0],
        stderr_II=region_errs[1],
        stderr_III=region_errs[2],
        total=total,
        estimate=est,
    )
