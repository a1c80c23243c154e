"""Radial mollifier families built from generators over a volume profile.

A generator is a positive, strictly increasing, unbounded C^2 function f.
Composed with a profile V and a decreasing weight sequence (a_n) it yields
the radial kernels

    rho_n(t) = a_n * f'(V(t)) / f(V(t))^(a_n + 1),

whose defining property is the closed-form tail integral

    int_d^inf S(t) rho_n(t) dt = f(V(d))^(-a_n).

That identity powers exact tail masses, inverse-CDF radius sampling, and
the heavy-tail importance weights used by the energy estimators.  All tail
quadrature runs in the variable w = ln t with per-generator log-space
kernels, so the small-weight regime (a_n down to ~0.005) stays inside
float64 range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import warnings

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import IntegrationWarning, quad

from .volume_profiles import VolumeProfile

__all__ = [
    "Generator",
    "MollifierFamily",
    "MollifierReport",
    "DivergenceError",
    "make_power_generator",
    "make_exp_generator",
    "make_log_generator",
    "make_family",
    "standard_family",
    "default_s_ladder",
    "tail_mass_quadrature",
    "integrate_log_tail",
    "verify_family",
    "RADIUS_CAP",
    "DEFAULT_S_LADDER",
]

# Radii beyond this cap are indistinguishable to any bounded-support
# integrand; capping keeps heavy-tail quantiles finite.
RADIUS_CAP = 1e30

DEFAULT_S_LADDER = (0.2, 0.1, 0.05, 0.025, 0.0125)


class DivergenceError(RuntimeError):
    """A tail integral failed the convergence sniff (growing segments)."""


class Generator:
    """Base interface for mollifier generators.

    Attributes:
        kind: ``"power"``, ``"exp"``, or ``"log"``.
        domain_floor_in_V: infimum of valid f arguments (0 except for the
            log generator, which needs V > 1).
    """

    kind: str = "base"
    domain_floor_in_V: float = 0.0

    def f(self, s):
        raise NotImplementedError

    def f_prime(self, s):
        raise NotImplementedError

    def f_inverse(self, y):
        raise NotImplementedError

    # Log-space kernels.  Arguments and results are natural logs; each kind
    # implements them in closed form so no exp/log round trip can overflow.
    def log_f(self, log_v):
        """Return ln f(V) given ln V."""
        raise NotImplementedError

    def log_f_inverse(self, log_y):
        """Return ln f^(-1)(y) given ln y (may be +-inf at the caps)."""
        raise NotImplementedError

    def log_kernel(self, log_v, a: float):
        """Return ln[f'(V)/f(V)^(a+1)] given ln V."""
        raise NotImplementedError

    def log_neg_kernel_deriv(self, log_v, a: float):
        """Return ln[((a+1)f'(V)^2 - f''(V)f(V))/f(V)^(a+2)] given ln V.

        This is the V-dependent factor of -d/dt rho_n(t) after the chain
        rule strips one S(t).
        """
        raise NotImplementedError

    def params(self) -> dict:
        return {}

    def __repr__(self):  # pragma: no cover - cosmetic
        inner = ", ".join(f"{k}={v}" for k, v in self.params().items())
        return f"{type(self).__name__}({inner})"


class PowerGenerator(Generator):
    """f(s) = s^alpha for alpha > 0."""

    kind = "power"

    def __init__(self, alpha: float):
        if alpha <= 0:
            raise ValueError(f"power generator needs alpha > 0, got {alpha}")
        self.alpha = float(alpha)

    def f(self, s):
        return np.asarray(s, dtype=float) ** self.alpha

    def f_prime(self, s):
        return self.alpha * np.asarray(s, dtype=float) ** (self.alpha - 1.0)

    def f_inverse(self, y):
        return np.asarray(y, dtype=float) ** (1.0 / self.alpha)

    def log_f(self, log_v):
        return self.alpha * np.asarray(log_v, dtype=float)

    def log_f_inverse(self, log_y):
        return np.asarray(log_y, dtype=float) / self.alpha

    def log_kernel(self, log_v, a: float):
        return math.log(self.alpha) - (self.alpha * a + 1.0) * np.asarray(log_v, dtype=float)

    def log_neg_kernel_deriv(self, log_v, a: float):
        coeff = self.alpha * (a * self.alpha + 1.0)
        return math.log(coeff) - (self.alpha * a + 2.0) * np.asarray(log_v, dtype=float)

    def params(self):
        return {"alpha": self.alpha}


class ExpGenerator(Generator):
    """f(s) = e^s; the kernel collapses to a_n * e^(-a_n V)."""

    kind = "exp"

    def f(self, s):
        return np.exp(np.asarray(s, dtype=float))

    def f_prime(self, s):
        return np.exp(np.asarray(s, dtype=float))

    def f_inverse(self, y):
        return np.log(np.asarray(y, dtype=float))

    def log_f(self, log_v):
        with np.errstate(over="ignore"):
            return np.exp(np.asarray(log_v, dtype=float))

    def log_f_inverse(self, log_y):
        # f^(-1)(y) = ln y, so ln f^(-1)(y) = ln(ln y); ln y <= 0 means the
        # radius falls below the sampling floor and is clamped by the caller.
        log_y = np.asarray(log_y, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(log_y > 0.0, np.log(np.maximum(log_y, 1e-300)), -np.inf)

    def log_kernel(self, log_v, a: float):
        with np.errstate(over="ignore"):
            v = np.exp(np.asarray(log_v, dtype=float))
        return -a * v

    def log_neg_kernel_deriv(self, log_v, a: float):
        with np.errstate(over="ignore"):
            v = np.exp(np.asarray(log_v, dtype=float))
        return math.log(a) - a * v

    def params(self):
        return {}


class LogGenerator(Generator):
    """f(s) = ln s on s > 1; integrals restrict to V(t) > 1."""

    kind = "log"
    domain_floor_in_V = 1.0

    def f(self, s):
        return np.log(np.asarray(s, dtype=float))

    def f_prime(self, s):
        return 1.0 / np.asarray(s, dtype=float)

    def f_inverse(self, y):
        return np.exp(np.asarray(y, dtype=float))

    def log_f(self, log_v):
        log_v = np.asarray(log_v, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(log_v > 0.0, np.log(np.maximum(log_v, 1e-300)), -np.inf)

    def log_f_inverse(self, log_y):
        with np.errstate(over="ignore"):
            return np.exp(np.asarray(log_y, dtype=float))

    def log_kernel(self, log_v, a: float):
        log_v = np.asarray(log_v, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(
                log_v > 0.0,
                -log_v - (a + 1.0) * np.log(np.maximum(log_v, 1e-300)),
                -np.inf,
            )

    def log_neg_kernel_deriv(self, log_v, a: float):
        log_v = np.asarray(log_v, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(
                log_v > 0.0,
                np.log(a + 1.0 + np.maximum(log_v, 0.0))
                - 2.0 * log_v
                - (a + 2.0) * np.log(np.maximum(log_v, 1e-300)),
                -np.inf,
            )

    def params(self):
        return {}


def make_power_generator(alpha: float) -> Generator:
    """Return the generator f(s) = s^alpha."""
    return PowerGenerator(alpha)


def make_exp_generator() -> Generator:
    """Return the generator f(s) = e^s."""
    return ExpGenerator()


def make_log_generator() -> Generator:
    """Return the generator f(s) = ln s, defined for V > 1."""
    return LogGenerator()


def default_s_ladder() -> NDArray[np.float64]:
    """Return the default geometric s-ladder {0.2, 0.1, 0.05, 0.025, 0.0125}."""
    return np.asarray(DEFAULT_S_LADDER, dtype=float)


class MollifierFamily:
    """A generator, a profile, and a decreasing weight ladder a_n.

    Construct through :func:`make_family`.  Immutable; every method is pure
    and safe to call from parallel workers.
    """

    def __init__(self, generator: Generator, profile: VolumeProfile, a_seq):
        a = np.asarray(list(a_seq), dtype=float)
        if a.size == 0:
            raise ValueError("a_seq must be non-empty")
        if np.any(a <= 0.0):
            raise ValueError("a_seq must be strictly positive")
        if a.size > 1 and np.any(np.diff(a) >= 0.0):
            raise ValueError("a_seq must be strictly decreasing")
        if generator.kind == "log":
            # The log generator needs V to exceed 1 somewhere reachable.
            probe = float(profile.eval(max(1.0, profile.domain_floor + 1.0) * 1e6))
            if not probe > 1.0:
                raise ValueError("log generator needs a profile whose range exceeds 1")
        self.generator = generator
        self.profile = profile
        self.a_seq = a
        if generator.domain_floor_in_V > 0.0:
            floor = float(profile.inverse(generator.domain_floor_in_V))
        else:
            floor = profile.domain_floor
        #: Radii at or below this evaluate to kernel 0 (restricted domain).
        self.domain_floor = max(floor, profile.domain_floor)

    def __len__(self) -> int:
        return int(self.a_seq.size)

    def a(self, n: int) -> float:
        """Return the ladder weight a_n."""
        return float(self.a_seq[n])

    def evaluate(self, n: int, t):
        """Return rho_n(t) elementwise; 0 at or below the domain floor."""
        a = self.a(n)
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            log_v = np.log(self.profile.eval(np.maximum(t, 1e-300)))
            out = a * np.exp(self.generator.log_kernel(log_v, a))
        out = np.where(t > self.domain_floor, out, 0.0)
        return out if out.ndim else float(out)

    def log_tail_mass(self, n: int, delta: float) -> float:
        """Return ln of the closed-form tail mass f(V(delta))^(-a_n)."""
        if delta <= self.domain_floor:
            raise ValueError(
                f"delta={delta} is inside the degenerate region (floor {self.domain_floor})"
            )
        log_v = float(self.profile.log_eval_exp(math.log(delta)))
        log_f = float(self.generator.log_f(log_v))
        return -self.a(n) * log_f

    def tail_mass(self, n: int, delta: float) -> float:
        """Return the closed-form tail integral of S * rho_n over [delta, inf).

        Raises:
            ValueError: ``delta`` at or below the family's domain floor.
        """
        return math.exp(self.log_tail_mass(n, delta))

    def log_tail_mass_from_log(self, n: int, log_delta):
        """Vectorized ln tail mass as a function of ln delta.

        Unlike :meth:`log_tail_mass` this accepts radii whose float value
        would underflow; callers must keep ln delta above ln(domain floor).
        """
        log_v = self.profile.log_eval_exp(np.asarray(log_delta, dtype=float))
        return -self.a(n) * self.generator.log_f(log_v)

    def sample_radius(self, n: int, delta_min: float, q):
        """Map uniform variates q in (0,1) to radii with the tail law.

        Conditional on r >= delta_min the survival function is
        P(r >= t) = tail_mass(t)/tail_mass(delta_min); the density in t is
        S(t) rho_n(t) / tail_mass(delta_min).  Radii beyond
        :data:`RADIUS_CAP` are clamped (bounded-support integrands cannot
        distinguish them).

        Args:
            n: ladder index.
            delta_min: sampling floor, above the family's domain floor.
            q: scalar or array of uniforms in (0, 1).

        Raises:
            ValueError: q outside (0, 1).
        """
        a = self.a(n)
        q = np.asarray(q, dtype=float)
        if np.any((q <= 0.0) | (q >= 1.0)):
            raise ValueError("q must lie strictly inside (0, 1)")
        log_t_floor = self.log_tail_mass(n, delta_min)
        # Solve f(V(r))^(-a) = q * T: in logs, ln f(V(r)) = -(ln q + ln T)/a.
        log_y = -(np.log(q) + log_t_floor) / a
        log_s = self.generator.log_f_inverse(log_y)
        if np.ndim(log_s) == 0:
            r = self.profile.inverse_from_log(float(log_s)) if math.isfinite(log_s) else (
                RADIUS_CAP if log_s > 0 else delta_min
            )
            return float(min(max(r, delta_min), RADIUS_CAP))
        out = np.empty_like(log_s)
        finite = np.isfinite(log_s)
        out[~finite] = np.where(log_s[~finite] > 0, RADIUS_CAP, delta_min)
        if np.any(finite):
            ls = log_s[finite]
            if self.profile.kind == "power":
                with np.errstate(over="ignore"):
                    out[finite] = np.exp(np.minimum(ls / self.profile.N, math.log(RADIUS_CAP)))
            else:
                out[finite] = [self.profile.inverse_from_log(float(v)) for v in ls]
        return np.minimum(np.maximum(out, delta_min), RADIUS_CAP)

    # Log-space tail integrands used by quadrature (w = ln t).
    def log_shell_integrand(self, n: int, w):
        """Return ln[S(t) rho_n(t) t] at t = e^w."""
        a = self.a(n)
        w = np.asarray(w, dtype=float)
        log_v = self.profile.log_eval_exp(w)
        return (
            self.profile.log_deriv_exp(w)
            + math.log(a)
            + self.generator.log_kernel(log_v, a)
            + w
        )

    def log_neg_deriv_integrand(self, n: int, w):
        """Return ln[-rho_n'(t) t] at t = e^w."""
        a = self.a(n)
        w = np.asarray(w, dtype=float)
        log_v = self.profile.log_eval_exp(w)
        return (
            math.log(a)
            + self.profile.log_deriv_exp(w)
            + self.generator.log_neg_kernel_deriv(log_v, a)
            + w
        )


def make_family(generator: Generator, profile: VolumeProfile, a_seq) -> MollifierFamily:
    """Build a mollifier family; validates the ladder and domain compatibility.

    Args:
        generator: kernel generator.
        profile: volume profile V.
        a_seq: strictly decreasing positive weights.

    Raises:
        ValueError: non-decreasing ladder, or a log generator over a profile
            whose range never exceeds 1.
    """
    return MollifierFamily(generator, profile, a_seq)


def standard_family(N: int, p: float, s_ladder=None) -> MollifierFamily:
    """Return the fractional-seminorm family on an N-homogeneous scale.

    Generator s^(1/N) over V = t^N with a_n = s_n * p gives the kernel
    a_n / (N t^(a_n + N)), the textbook weight of the fractional seminorm.
    """
    from .volume_profiles import make_power_profile

    s = default_s_ladder() if s_ladder is None else np.asarray(list(s_ladder), dtype=float)
    return make_family(make_power_generator(1.0 / N), make_power_profile(N), s * p)


def integrate_log_tail(log_g, w_start: float, *, rel_tol: float = 1e-11) -> float:
    """Integrate exp(log_g(w)) over [w_start, inf) with a divergence sniff.

    ``log_g`` must be vectorized and may return -inf where the integrand
    vanishes.  Divergence is declared when three successive doubling
    segments fail to decrease.

    Raises:
        DivergenceError: the tail keeps growing.
    """

    def g(w):
        with np.errstate(over="ignore"):
            return np.exp(log_g(np.asarray(w, dtype=float)))

    # Doubling windows: for any integrable kernel that is eventually
    # decreasing, window masses at most double and eventually shrink; a
    # divergent tail keeps its masses non-decreasing (or blows up).  Slow
    # shrinkage (power decay in w) is fine and is left to the adaptive
    # infinite-range rule below.
    width = max(1.0, abs(w_start)) * 0.5
    segs: list[float] = []
    total = 0.0
    lo = w_start
    converged_probe = False
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        for _ in range(48):
            hi = lo + width
            s = quad(g, lo, hi, limit=100)[0]
            if not math.isfinite(s) or s > 1e250:
                raise DivergenceError(
                    "tail window mass overflows; not integrable at working precision"
                )
            segs.append(s)
            total += s
            if s < 1e-13 * max(total, 1e-300) and total > 0.0:
                converged_probe = True
                break
            lo = hi
            width *= 2.0
        if not converged_probe and len(segs) >= 3:
            a, b, c = segs[-3], segs[-2], segs[-1]
            if a > 1e-13 * max(total, 1e-300) and c >= b * (1.0 - 1e-12) and b >= a * (1.0 - 1e-12):
                raise DivergenceError(
                    "tail integral has non-decreasing doubling segments; "
                    "the kernel is not integrable against this growth"
                )
        value, _ = quad(g, w_start, np.inf, limit=400, epsabs=1e-13, epsrel=rel_tol)
    return float(value)


def tail_mass_quadrature(family: MollifierFamily, n: int, delta: float) -> float:
    """Tail mass by adaptive quadrature, independent of the closed form.

    Integrates S(t) rho_n(t) over [delta, inf) in the variable w = ln t.
    Used to cross-check :meth:`MollifierFamily.tail_mass`.
    """
    if delta <= family.domain_floor:
        raise ValueError(f"delta={delta} at or below domain floor {family.domain_floor}")
    return integrate_log_tail(lambda w: family.log_shell_integrand(n, w), math.log(delta))


@dataclass(frozen=True)
class MollifierReport:
    """Validation summary for a family.

    Attributes:
        decreasing_ok: each rho_n strictly decreasing on the radius grid.
        ratio_monotone_ok: rho_n/rho_m non-decreasing in t for a_n < a_m.
        vanishing_product_ok: rho_n(t) V(t) decays along the grid tail.
        pointwise_decay_ok: ladder-wise decay bound at fixed t.
        ratio_identity_residual: worst relative error of the closed-form
            cross-ladder ratio (a_n/a_m) f(V)^(a_m - a_n).
        tail_table: tail masses, shape (len(R_ladder), len(a_seq)).
        tail_limits: per-R extrapolated n-limit of the tail mass.
        approx_identity_ok: the iterated limit equals 1 within 1e-3.
        passed: conjunction of all checks.
        messages: failure descriptions.
    """

    decreasing_ok: bool
    ratio_monotone_ok: bool
    vanishing_product_ok: bool
    pointwise_decay_ok: bool
    ratio_identity_residual: float
    tail_table: NDArray[np.float64]
    tail_limits: NDArray[np.float64]
    approx_identity_ok: bool
    passed: bool
    messages: list[str] = field(default_factory=list)


def _log_affine_limit(a: NDArray[np.float64], log_values: NDArray[np.float64]) -> float:
    """Extrapolate exp(log_values)(a) -> a=0 by an affine fit of the logs.

    Exact for tails of the form C^(-a), which is every closed-form tail
    mass here; taking logs as input keeps underflowed tails exact.
    """
    take = min(3, a.size)
    x = a[-take:]
    y = log_values[-take:]
    if take == 1:
        return float(np.exp(y[0]))
    coef = np.polyfit(x, y, 1)
    intercept = float(coef[-1])
    # An intercept below the rounding noise of the data is zero: huge log
    # tails (|y| ~ 1e40) leave ~|y|*eps*cond of irreducible intercept noise.
    if abs(intercept) <= 1e-10 * float(np.max(np.abs(y))):
        intercept = 0.0
    return float(np.exp(intercept))


def verify_family(
    family: MollifierFamily,
    t_grid=None,
    n_pairs: Sequence[tuple[int, int]] | None = None,
    R_ladder=None,
) -> MollifierReport:
    """Check the family invariants and the approximation-of-identity limit.

    Args:
        family: family under test.
        t_grid: radii for kernel-shape checks (default: log grid spanning
            the family domain).
        n_pairs: ladder index pairs (m, n) with a_n < a_m for the ratio
            monotonicity check (default: successive pairs).
        R_ladder: radii for the tail-mass table (default {1, 10, 100} above
            the domain floor).

    Returns:
        :class:`MollifierReport`; failures are reported, never raised.
    """
    floor = family.domain_floor
    if t_grid is None:
        lo = max(floor * 1.001, 1e-3) if floor > 0 else 1e-3
        t_grid = np.geomspace(lo + 1e-12, max(1e4, lo * 1e4), 160)
    t_grid = np.asarray(t_grid, dtype=float)
    t_grid = t_grid[t_grid > floor]
    if n_pairs is None:
        n_pairs = [(i, i + 1) for i in range(len(family) - 1)]
    if R_ladder is None:
        base = max(floor, 0.0)
        R_ladder = np.asarray([base + 1.0, base + 10.0, base + 100.0])
    R_ladder = np.asarray(R_ladder, dtype=float)

    messages: list[str] = []
    # All shape checks run on ln rho: raw kernels underflow on wide grids
    # while the log forms stay exact.
    gen = family.generator
    log_v = np.asarray(family.profile.log_eval_exp(np.log(t_grid)), dtype=float)
    log_rho = np.stack(
        [math.log(family.a(n)) + gen.log_kernel(log_v, family.a(n)) for n in range(len(family))]
    )

    # Kernels may round to ln rho = -inf far out (double-exponential decay);
    # a finite prefix followed by -inf is still strictly decreasing, while a
    # finite value after -inf or a nan is a wiring bug.
    finite_rows = np.isfinite(log_rho)
    decreasing_ok = True
    for n in range(len(family)):
        row, fin = log_rho[n], finite_rows[n]
        prefix = bool(np.all(fin[: int(fin.sum())])) and not np.any(np.isnan(row))
        if not (prefix and np.all(np.diff(row[fin]) < 0.0)):
            decreasing_ok = False
            messages.append("some rho_n is not strictly decreasing on the grid")
            break

    ratio_monotone_ok = True
    for m, n in n_pairs:
        if family.a(n) >= family.a(m):
            ratio_monotone_ok = False
            messages.append(f"ladder pair ({m},{n}) is not decreasing in a")
            continue
        both = finite_rows[m] & finite_rows[n]
        log_ratio = log_rho[n][both] - log_rho[m][both]
        if np.any(np.diff(log_ratio) < -1e-12):
            ratio_monotone_ok = False
            messages.append(f"ratio rho_{n}/rho_{m} decreases somewhere on the grid")

    # Decay of rho_n V: extend past the grid in y = ln f(V) space so the
    # span scales with 1/a_n; the f^(-a_n) factor alone drops by a*span
    # there, so half that (capped) is a safe required drop.  Points whose
    # radius exceeds float range are masked out and the requirement shrinks
    # with the representable span.
    vanishing_product_ok = True
    lf_grid = np.asarray(gen.log_f(log_v), dtype=float)
    y_end = float(lf_grid[np.isfinite(lf_grid)][-1])
    for n in range(len(family)):
        a_n = family.a(n)
        ys = y_end + np.linspace(0.0, 4.0 * math.log(10.0) / a_n + 4.0, 64)
        lv = np.asarray(gen.log_f_inverse(ys), dtype=float)
        with np.errstate(invalid="ignore"):
            vals = gen.log_kernel(lv, a_n) + lv
        # lv beyond ~1e12 absorbs the kernel's log-correction terms in the
        # +lv cancellation; drop those points rather than trust zeros.
        kept = np.isfinite(vals) & (np.abs(lv) <= 1e12)
        ys_k, vals_k = ys[kept], vals[kept]
        if ys_k.size < 2:
            continue
        required = min(math.log(50.0), 0.5 * a_n * (ys_k[-1] - ys_k[0]))
        ok_n = bool(
            np.all(np.diff(vals_k) <= 1e-9) and vals_k[-1] - vals_k[0] <= -required
        )
        if not ok_n:
            vanishing_product_ok = False
            messages.append(f"rho_{n}(t) V(t) does not decay beyond the grid")
            break

    # Ratio identity doubles as the pointwise-decay mechanism: it bounds
    # rho at the ladder foot by a_last/a_first times a grid-bounded factor.
    # Checked where both kernels are representable as raw doubles; beyond
    # that the identity is about values smaller than any float.
    worst = 0.0
    for m, n in n_pairs:
        am, an = family.a(m), family.a(n)
        both = (log_rho[m] > -700.0) & (log_rho[n] > -700.0)
        if not np.any(both):
            continue
        log_pred = math.log(an / am) + (am - an) * np.asarray(gen.log_f(log_v[both]), dtype=float)
        log_act = log_rho[n][both] - log_rho[m][both]
        worst = max(worst, float(np.max(np.abs(np.expm1(log_act - log_pred)))))
    ratio_identity_residual = worst
    pointwise_decay_ok = ratio_identity_residual < 1e-9
    if not pointwise_decay_ok:
        messages.append(
            f"cross-ladder ratio identity off by {ratio_identity_residual:.3e} relative"
        )

    log_tail = np.array(
        [[family.log_tail_mass(n, float(R)) for n in range(len(family))] for R in R_ladder]
    )
    tail_table = np.exp(log_tail)
    tail_limits = np.array(
        [_log_affine_limit(family.a_seq, log_tail[i]) for i in range(len(R_ladder))]
    )
    approx_identity_ok = bool(np.max(np.abs(tail_limits - 1.0)) <= 1e-3)
    if not approx_identity_ok:
        messages.append(
            f"iterated tail limits {tail_limits} are not 1 within 1e-3"
        )

    passed = not messages
    return MollifierReport(
        decreasing_ok=decreasing_ok,
        ratio_monotone_ok=ratio_monotone_ok,
        vanishing_product_ok=vanishing_product_ok,
        pointwise_decay_ok=pointwise_decay_ok,
        ratio_identity_residual=ratio_identity_residual,
        tail_table=tail_table,
        tail_limits=tail_limits,
        approx_identity_ok=approx_identity_ok,
        passed=passed,
        messages=messages,
    )
