"""Energy ladders, limit extrapolation, and the full validator chain.

The central object is the ladder of energies E_n computed along a
mollifier family's decreasing a_n sequence.  An affine (default) or
quadratic fit in a_n extrapolates the ladder to a_n = 0; the result is
compared against the predicted limit 2 * AVR * ||u||_p^p, where the
asymptotic volume ratio AVR is exact for the closed-form spaces and
carries a statistical error when it comes from Monte Carlo volumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .energy import (
    EnergyEstimate,
    TestFunction,
    ball_indicator,
    decompose_energy,
    energy_mc,
    energy_quadrature_1d,
    norm_p_pow,
)
from .mollifiers import DivergenceError, MollifierFamily, verify_family
from .spaces import (
    Space,
    check_bgi,
    check_volume_bound,
    tail_mollifier_mass,
)
from .volume_profiles import VolumeProfile, check_profile

__all__ = [
    "AsymptoticReport",
    "Assumption1Report",
    "Extrapolation",
    "HypothesisViolation",
    "PredictedLimit",
    "check_ms",
    "extrapolate",
    "predict_limit",
    "run_ladder",
    "validate_assumption1",
]


class HypothesisViolation(RuntimeError):
    """The coarsest ladder energy is not demonstrably finite and stable."""


def _unit_ball_volume(N: float) -> float:
    return math.pi ** (N / 2.0) / math.gamma(N / 2.0 + 1.0)


def _power_alpha(family: MollifierFamily) -> float | None:
    """Exponent of the family's generator when it is a power law."""
    return family.generator.params().get("alpha")


def _profile_degree(profile: VolumeProfile) -> float | None:
    """Homogeneity degree N of a power-law profile, else None."""
    if getattr(profile, "kind", None) == "power":
        return float(profile.N)
    return None


@dataclass(frozen=True)
class Extrapolation:
    """Limit of a ladder from a least-squares fit in a_n.

    Attributes:
        model: "affine" or "quadratic".
        limit: fitted value at a_n = 0.
        stderr: fit-covariance error plus the largest near-field bias
            bound among the points used.
        coefficients: fitted polynomial coefficients, constant first.
        used_a: the a_n values that entered the fit.
    """

    model: str
    limit: float
    stderr: float
    coefficients: tuple[float, ...]
    used_a: tuple[float, ...]


def run_ladder(
    space: Space,
    u: TestFunction,
    family: MollifierFamily,
    *,
    method: str = "auto",
    samples: int = 1_000_000,
    seed: int = 0,
    r0: float | None = None,
    workers: int = 1,
    quad_tol: float = 1e-9,
) -> list[EnergyEstimate]:
    """Compute the energy at every ladder index, coarsest first.

    The coarsest level (largest a_n) is probed for stability before the
    rest run: the estimate must be finite, and for Monte Carlo runs the
    half-sample estimate must agree with the full one.  A divergent or
    wildly drifting coarsest level means u lies outside every fractional
    class the family can see.

    Args:
        space: target space.
        u: test function.
        family: mollifier family over the space's natural profile.
        method: "quadrature", "monte-carlo", or "auto" (quadrature on 1-D
            charts, Monte Carlo otherwise).
        samples: Monte Carlo sample count per rung.
        seed: base stream key (shared by all rungs; rungs differ by a_n).
        r0: near cutoff override for Monte Carlo rungs.
        workers: thread count handed to the Monte Carlo estimator.
        quad_tol: relative tolerance for quadrature rungs.

    Raises:
        TypeError: u is not a TestFunction (the energy needs compact
            support; heavier-tailed inputs are out of contract).
        HypothesisViolation: the coarsest level is non-finite or unstable.
    """
    if not isinstance(u, TestFunction):
        raise TypeError("run_ladder requires a TestFunction (bounded support)")
    if method == "auto":
        method = "quadrature" if space.chart_dim == 1 else "monte-carlo"
    if method not in ("quadrature", "monte-carlo"):
        raise ValueError(f"unknown method {method!r}")

    a_values = [family.a(n) for n in range(len(family))]
    coarsest = int(np.argmax(a_values))

    def run_one(n: int, n_samples: int) -> EnergyEstimate:
        if method == "quadrature":
            return energy_quadrature_1d(space, u, family, n, tol=quad_tol)
        return energy_mc(
            space,
            u,
            family,
            n,
            samples=n_samples,
            seed=seed,
            r0=r0,
            workers=workers,
            force=space.chart_dim < 2,
        )

    try:
        head = run_one(coarsest, samples)
        if method == "quadrature":
            # a cut rung bounds its own excluded collar; computing that
            # bound raises DivergenceError on non-integrable kernels, and
            # a finite full rung must sit inside the bound of the cut one
            probe_r0 = max(
                u.radius * 1e-3, family.domain_floor * (1.0 + 1e-6)
            )
            probe = energy_quadrature_1d(
                space, u, family, coarsest, r0=probe_r0, tol=quad_tol
            )
            drift = head.value - probe.value
            allowed = probe.deterministic_bias_bound
            ok = (
                math.isfinite(head.value)
                and head.value >= -1e-9 * max(1.0, abs(probe.value))
                and math.isfinite(allowed)
                and -1e-9 * max(1.0, abs(head.value))
                <= drift
                <= allowed * (1.0 + 1e-9) + 1e-12
            )
            if not ok:
                raise HypothesisViolation(
                    f"coarsest level a={a_values[coarsest]:g} is unstable: "
                    f"full rung {head.value:g}, cut rung {probe.value:g}, "
                    f"collar allowance {allowed:g}"
                )
        if method == "monte-carlo" and samples >= 2:
            half = run_one(coarsest, samples // 2)
            drift = abs(head.value - half.value)
            allowed = max(
                8.0 * (head.stat_stderr + half.stat_stderr),
                0.5 * max(abs(head.value), abs(half.value)),
            )
            if not (math.isfinite(drift) and drift <= allowed):
                raise HypothesisViolation(
                    f"coarsest level a={a_values[coarsest]:g} drifts by {drift:g} "
                    f"between half and full sample runs (allowed {allowed:g})"
                )
    except (DivergenceError, RuntimeError, OverflowError) as exc:
        if isinstance(exc, HypothesisViolation):
            raise
        raise HypothesisViolation(
            f"coarsest level a={a_values[coarsest]:g} diverges: {exc}"
        ) from exc
    if not math.isfinite(head.value):
        raise HypothesisViolation(
            f"coarsest level a={a_values[coarsest]:g} has non-finite energy "
            f"{head.value}; no finite rung exists above it"
        )

    out: list[EnergyEstimate] = [head]
    for n in range(len(family)):
        if n == coarsest:
            continue
        out.append(run_one(n, samples))
    order = np.argsort([-e.params["a_n"] for e in out])
    return [out[i] for i in order]


def extrapolate(ladder: list[EnergyEstimate], model: str = "affine") -> Extrapolation:
    """Fit the ladder against a_n and read off the a_n = 0 intercept.

    The affine model fits the three smallest a_n only: the solvable cases
    have convex E(a) curves, and distant rungs drag an affine intercept
    away from the limit.  The quadratic model uses every rung and needs
    at least five.  Weighted least squares uses 1/stderr^2 when any rung
    carries statistical error, unit weights otherwise; the quoted
    uncertainty adds the worst near-field bias bound of the fitted rungs.

    Raises:
        ValueError: fewer points than the model needs, or a_n not
            strictly decreasing.
    """
    if model not in ("affine", "quadratic"):
        raise ValueError(f"unknown extrapolation model {model!r}")
    a = np.array([e.params["a_n"] for e in ladder], dtype=float)
    if a.size < 3:
        raise ValueError("extrapolation needs at least 3 ladder points")
    if np.any(np.diff(a) >= 0.0):
        raise ValueError("ladder a_n values must be strictly decreasing")
    if model == "quadratic" and a.size < 5:
        raise ValueError("the quadratic model needs at least 5 ladder points")

    if model == "affine":
        idx = np.argsort(a)[:3]
        idx = idx[np.argsort(-a[idx])]
        degree = 1
    else:
        idx = np.arange(a.size)
        degree = 2
    xs = a[idx]
    ys = np.array([ladder[i].value for i in idx], dtype=float)
    errs = np.array([ladder[i].stat_stderr for i in idx], dtype=float)
    biases = np.array(
        [ladder[i].deterministic_bias_bound for i in idx], dtype=float
    )

    X = np.vander(xs, degree + 1, increasing=True)
    if np.any(errs > 0.0):
        w = 1.0 / np.maximum(errs, 1e-300) ** 2
    else:
        w = np.ones_like(xs)
    Xw = X * w[:, None]
    gram = X.T @ Xw
    try:
        cov = np.linalg.inv(gram)
    except np.linalg.LinAlgError as exc:
        raise ValueError("ill-conditioned ladder design") from exc
    beta = cov @ (Xw.T @ ys)
    resid = ys - X @ beta
    dof = xs.size - (degree + 1)
    if np.any(errs > 0.0):
        var0 = cov[0, 0]
    else:
        scale = float(resid @ resid) / dof if dof > 0 else 0.0
        var0 = cov[0, 0] * scale
    stderr = math.sqrt(max(var0, 0.0)) + float(np.max(biases, initial=0.0))
    return Extrapolation(
        model=model,
        limit=float(beta[0]),
        stderr=float(stderr),
        coefficients=tuple(float(b) for b in beta),
        used_a=tuple(float(v) for v in xs),
    )


@dataclass(frozen=True)
class PredictedLimit:
    """Limit predictions in both scale conventions plus the cone bound.

    Attributes:
        value: 2 * AVR * ||u||_p^p, the limit of E_n as defined here
            (ladder coefficient a_n inside the kernel).
        stderr: propagated from the AVR and norm errors.
        s_normalized: (2 / (alpha p)) * AVR * ||u||_p^p, the limit after
            rescaling rungs by s_n = a_n/(alpha p); None when the
            generator is not a power law.
        rcd_bound: (2 N omega_N / p) * ||u||_p^p in the s-normalized
            scale, the model-cone ceiling; None off power profiles.
        avr, avr_stderr: the asymptotic volume ratio used.
        avr_provenance: "exact AVR" or "estimated AVR".
        norm_value, norm_stderr: ||u||_p^p.
        alpha: generator exponent when power, else None.
        degree: profile homogeneity N when power, else None.
    """

    value: float
    stderr: float
    s_normalized: float | None
    rcd_bound: float | None
    avr: float
    avr_stderr: float
    avr_provenance: str
    norm_value: float
    norm_stderr: float
    alpha: float | None
    degree: float | None


def predict_limit(
    space: Space,
    u: TestFunction,
    p: float | None = None,
    family: MollifierFamily | None = None,
    profile: VolumeProfile | None = None,
) -> PredictedLimit:
    """Predict the ladder limit 2 * AVR * ||u||_p^p for this scenario.

    AVR is the large-radius limit of m(B_r)/V(r): zero for finite-measure
    spaces, the exact volume ratio for the homogeneous model spaces, and
    a Monte Carlo estimate (with stderr) when ball volumes are sampled.

    Args:
        space: target space.
        u: test function (provides p when not given).
        p: integrability exponent; defaults to u.p.
        family: optional family, used to read the generator exponent for
            the s-normalized prediction.
        profile: reference growth profile (default: the space's natural
            profile).
    """
    if p is None:
        p = u.p
    if profile is None:
        profile = space.natural_profile
    if math.isfinite(space.diameter):
        avr, avr_err, prov = 0.0, 0.0, "exact AVR"
    else:
        probe = 1.0
        vol = space.ball_volume(space.base_point, probe)
        ref = float(profile.eval(probe))
        avr = vol.value / ref
        avr_err = vol.stderr / ref
        prov = "exact AVR" if avr_err == 0.0 else "estimated AVR"
    norm = norm_p_pow(space, u)
    value = 2.0 * avr * norm.value
    stderr = 2.0 * math.hypot(avr * norm.stderr, norm.value * avr_err)
    alpha = _power_alpha(family) if family is not None else None
    s_norm = value / (alpha * p) if alpha else None
    degree = _profile_degree(profile)
    rcd = None
    if degree is not None:
        rcd = (2.0 * degree * _unit_ball_volume(degree) / p) * norm.value
    return PredictedLimit(
        value=float(value),
        stderr=float(stderr),
        s_normalized=None if s_norm is None else float(s_norm),
        rcd_bound=None if rcd is None else float(rcd),
        avr=float(avr),
        avr_stderr=float(avr_err),
        avr_provenance=prov,
        norm_value=float(norm.value),
        norm_stderr=float(norm.stderr),
        alpha=alpha,
        degree=degree,
    )


@dataclass(frozen=True)
class AsymptoticReport:
    """Full ladder-to-limit comparison in a fixed scale convention.

    All energies, limits, and bounds are expressed in the requested
    normalization: "raw" reports E_n as defined; "s" divides by
    alpha * p, putting the ladder coefficient outside the kernel.

    Attributes:
        space_name, u_kind: scenario identifiers.
        normalization: "raw" or "s".
        scale: multiplier taking raw energies to the reported scale.
        rows: per-rung dicts {n, a_n, s_n, value, stderr, near_bias,
            method}.
        model: extrapolation model id.
        limit_estimate, limit_stderr: extrapolated limit.
        predicted_limit, predicted_stderr: 2 * AVR * ||u||_p^p (scaled).
        avr, avr_stderr, avr_provenance: the constant L and its origin.
        relative_deviation: |limit - predicted| / predicted (nan when the
            prediction is zero; see absolute_deviation).
        absolute_deviation: |limit - predicted|.
        tolerance: relative acceptance tolerance.
        absolute_floor: acceptance band when the prediction is zero.
        passed: acceptance verdict.
        rcd_bound: model-cone ceiling in the reported scale (None when
            unavailable); rcd_ok: limit below it within uncertainty.
        validators: per-validator pass flags, or None when skipped.
        notes: free-form remarks.
    """

    space_name: str
    u_kind: str
    normalization: str
    scale: float
    rows: tuple[dict, ...]
    model: str
    limit_estimate: float
    limit_stderr: float
    predicted_limit: float
    predicted_stderr: float
    avr: float
    avr_stderr: float
    avr_provenance: str
    relative_deviation: float
    absolute_deviation: float
    tolerance: float
    absolute_floor: float
    passed: bool
    rcd_bound: float | None
    rcd_ok: bool | None
    validators: dict | None
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        """JSON-ready dict; non-finite floats become None."""

        def clean(v):
            if isinstance(v, float) and not math.isfinite(v):
                return None
            if isinstance(v, dict):
                return {k: clean(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            return v

        return {
            "space": self.space_name,
            "u": self.u_kind,
            "normalization": self.normalization,
            "scale": self.scale,
            "ladder": clean(list(self.rows)),
            "extrapolation": {
                "model": self.model,
                "limit": clean(self.limit_estimate),
                "stderr": clean(self.limit_stderr),
            },
            "prediction": {
                "value": clean(self.predicted_limit),
                "stderr": clean(self.predicted_stderr),
                "avr": clean(self.avr),
                "avr_stderr": clean(self.avr_stderr),
                "provenance": self.avr_provenance,
            },
            "relative_deviation": clean(self.relative_deviation),
            "absolute_deviation": clean(self.absolute_deviation),
            "tolerance": self.tolerance,
            "absolute_floor": self.absolute_floor,
            "rcd_bound": clean(self.rcd_bound),
            "rcd_ok": self.rcd_ok,
            "validators": clean(self.validators) if self.validators else None,
            "verdict": "PASS" if self.passed else "FAIL",
            "notes": list(self.notes),
        }


def _run_validators(space: Space, family: MollifierFamily) -> dict:
    """Run the precondition chain and collect pass flags."""
    prof = check_profile(family.profile)
    fam = verify_family(family)
    if math.isfinite(space.diameter):
        bgi_flag: bool | str = "waived"
    else:
        bgi_flag = bool(check_bgi(space).passed)
    vol = check_volume_bound(space)
    return {
        "profile": bool(prof.passed),
        "family": bool(fam.passed),
        "bgi": bgi_flag,
        "volume_bound": bool(vol.bounded_ok) and math.isfinite(vol.k),
        "messages": list(prof.messages) + list(fam.messages) + list(vol.messages),
    }


def check_ms(
    space: Space,
    u: TestFunction,
    family: MollifierFamily,
    tol: float = 0.05,
    *,
    abs_floor: float = 0.05,
    method: str = "auto",
    samples: int = 1_000_000,
    seed: int = 0,
    workers: int = 1,
    r0: float | None = None,
    model: str = "affine",
    normalization: str = "raw",
    skip_validate: bool = False,
) -> AsymptoticReport:
    """Run the ladder, extrapolate, and compare with the predicted limit.

    The verdict is |limit - predicted| <= tol * predicted + combined
    uncertainty, or |limit| <= abs_floor when the predicted limit is zero
    (finite-measure spaces).  The verdict is scale-invariant; the report
    numbers are expressed in the requested normalization.

    Raises:
        HypothesisViolation: validator chain failed, or the coarsest
            rung diverges.
        ValueError: unknown normalization, or "s" without a power
            generator.
    """
    if normalization not in ("raw", "s"):
        raise ValueError(f"unknown normalization {normalization!r}")
    validators = None
    if not skip_validate:
        validators = _run_validators(space, family)
        failed = [
            k
            for k in ("profile", "family", "bgi", "volume_bound")
            if validators[k] is False
        ]
        if failed:
            raise HypothesisViolation(
                "validator chain failed: " + ", ".join(failed)
            )

    ladder = run_ladder(
        space,
        u,
        family,
        method=method,
        samples=samples,
        seed=seed,
        r0=r0,
        workers=workers,
    )
    extrap = extrapolate(ladder, model=model)
    pred = predict_limit(space, u, family=family)

    scale = 1.0
    if normalization == "s":
        if not pred.alpha:
            raise ValueError("s-normalization needs a power-law generator")
        scale = 1.0 / (pred.alpha * u.p)

    rows = tuple(
        {
            "n": e.params["n"],
            "a_n": e.params["a_n"],
            "s_n": (e.params["a_n"] / (pred.alpha * u.p)) if pred.alpha else None,
            "value": e.value * scale,
            "stderr": e.stat_stderr * scale,
            "near_bias": e.deterministic_bias_bound * scale,
            "method": e.params["method"],
        }
        for e in ladder
    )
    limit = extrap.limit * scale
    limit_err = extrap.stderr * scale
    predicted = pred.value * scale
    predicted_err = pred.stderr * scale
    abs_dev = abs(limit - predicted)
    rel_dev = abs_dev / abs(predicted) if predicted != 0.0 else math.nan
    combined = limit_err + predicted_err
    if predicted == 0.0:
        passed = abs(limit) <= abs_floor + combined
    else:
        passed = abs_dev <= tol * abs(predicted) + combined

    rcd = None
    rcd_ok = None
    if pred.rcd_bound is not None and pred.alpha:
        # the cone bound lives in the s-normalized scale; map to raw via
        # the exact rung relation E_raw = (alpha p) E_s
        rcd = pred.rcd_bound * (1.0 if normalization == "s" else pred.alpha * u.p)
        # Spaces with AVR = omega_N sit exactly on the bound, so the
        # one-sided check needs the usual three-sigma slack.
        rcd_ok = bool(limit <= rcd + 3.0 * combined + 1e-12 * abs(rcd))

    notes = []
    if family.domain_floor > 0.0:
        notes.append(
            "kernel domain floor is positive: distances at the floor carry "
            "unbounded mass and near-floor behavior follows the literal "
            "restriction f(V) > domain value"
        )
    return AsymptoticReport(
        space_name=space.name,
        u_kind=u.kind,
        normalization=normalization,
        scale=scale,
        rows=rows,
        model=extrap.model,
        limit_estimate=float(limit),
        limit_stderr=float(limit_err),
        predicted_limit=float(predicted),
        predicted_stderr=float(predicted_err),
        avr=pred.avr,
        avr_stderr=pred.avr_stderr,
        avr_provenance=pred.avr_provenance,
        relative_deviation=float(rel_dev),
        absolute_deviation=float(abs_dev),
        tolerance=float(tol),
        absolute_floor=float(abs_floor),
        passed=bool(passed),
        rcd_bound=rcd,
        rcd_ok=rcd_ok,
        validators=validators,
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class Assumption1Report:
    """Tabulated evidence for the three structural assumptions.

    Part A tabulates the mollifier tail mass over (R, n) and extrapolates
    both iterated limits; part B tabulates the short-range energy share
    and checks decay in n at fixed R; part C reports the sup over sampled
    centers of the tail mass per R.

    Attributes:
        r_grid, a_values: table axes (rows R, columns a_n).
        a_table: tail masses at the base point.
        a_center_spread: worst absolute deviation of the table across the
            sampled centers.
        a_limit_n_then_R: per-R extrapolation in a_n, then large-R value.
        a_limit_R_then_n: large-R value per n, then extrapolation in a_n.
        avr_reference: the AVR the A-limit should reproduce.
        a_deviation: |a_limit_n_then_R - avr_reference|.
        b_table: short-range (distance < R) energy share per (R, n).
        b_stderr: statistical errors of the B entries.
        b_decay_ok: B entries non-increasing in n at fixed R within noise.
        c_values: per-R sup over centers and n of the tail mass.
        c_bounded_ok: all sup values finite.
        c_nonincreasing_ok: sup values non-increasing over the upper half
            of the R grid.
        centers: sampled centers used for the center sweeps.
        notes: free-form remarks.
    """

    r_grid: tuple[float, ...]
    a_values: tuple[float, ...]
    a_table: tuple[tuple[float, ...], ...]
    a_center_spread: float
    a_limit_n_then_R: float
    a_limit_R_then_n: float
    avr_reference: float
    a_deviation: float
    b_table: tuple[tuple[float, ...], ...]
    b_stderr: tuple[tuple[float, ...], ...]
    b_decay_ok: bool
    c_values: tuple[float, ...]
    c_bounded_ok: bool
    c_nonincreasing_ok: bool
    centers: tuple[tuple[float, ...], ...]
    notes: tuple[str, ...] = ()


def _limit_in_a(a: NDArray[np.float64], vals: NDArray[np.float64]) -> float:
    """Extrapolate a table row to a = 0.

    Tail masses obey ln(value) = const - a * rate exactly, so the fit runs
    on logs when all entries are positive and falls back to a plain
    affine fit otherwise (zeros stay zero).
    """
    vals = np.asarray(vals, dtype=float)
    if np.all(vals <= 0.0):
        return 0.0
    if np.all(vals > 0.0):
        coef = np.polyfit(a, np.log(vals), 1)
        intercept = coef[1]
        if abs(intercept) <= 1e-10 * float(np.max(np.abs(np.log(vals)))):
            intercept = 0.0
        return float(math.exp(intercept))
    coef = np.polyfit(a, vals, 1)
    return float(coef[1])


def validate_assumption1(
    space: Space,
    family: MollifierFamily,
    x_sample=None,
    R_ladder=None,
    n_ladder=None,
    *,
    u: TestFunction | None = None,
    samples: int = 200_000,
    seed: int = 0,
    workers: int = 1,
) -> Assumption1Report:
    """Tabulate the tail-mass and short-range-energy evidence tables.

    Nothing is raised on scientific grounds; every finding lands in the
    report.  The iterated tail-mass limits are reported in both orders
    because they genuinely differ on infinite spaces (n first recovers
    the volume ratio; R first collapses to zero at fixed n).

    Args:
        space: target space.
        family: mollifier family.
        x_sample: centers for the center sweeps (default: base point plus
            three sampled from a moderate ball).
        R_ladder: tail radii (default four doubling steps from 2.5).
        n_ladder: ladder indices (default: all).
        u: short-range test function (default: an indicator at the base
            point with unit radius, p = 1).
        samples: Monte Carlo samples per B-table cell.
        seed: stream key for B-table cells and center sampling.
        workers: thread count for B-table cells.
    """
    if R_ladder is None:
        R_ladder = [2.5, 5.0, 10.0, 20.0, 40.0]
    r_grid = [float(R) for R in R_ladder]
    if len(r_grid) < 2:
        raise ValueError("the R ladder needs at least 2 radii")
    if any(R <= family.domain_floor for R in r_grid):
        raise ValueError("all R values must exceed the family domain floor")
    if n_ladder is None:
        n_ladder = list(range(len(family)))
    n_grid = [int(n) for n in n_ladder]
    a_vals = np.array([family.a(n) for n in n_grid], dtype=float)
    if x_sample is None:
        rng = np.random.default_rng(seed)
        reach = space.diameter / 4.0 if math.isfinite(space.diameter) else 2.0
        sampled = space.sample_ball(space.base_point, reach, rng, 3)
        x_sample = [space.base_point] + [np.asarray(p) for p in sampled]
    centers = [np.atleast_1d(np.asarray(x, dtype=float)) for x in x_sample]

    def tail_table(center) -> NDArray[np.float64]:
        out = np.empty((len(r_grid), len(n_grid)))
        for i, R in enumerate(r_grid):
            for j, n in enumerate(n_grid):
                out[i, j] = tail_mollifier_mass(space, family, n, x=center, R=R)
        return out

    a_table = tail_table(centers[0])
    spread = 0.0
    for c in centers[1:]:
        spread = max(spread, float(np.max(np.abs(tail_table(c) - a_table))))

    per_R_limits = np.array([_limit_in_a(a_vals, row) for row in a_table])
    a_limit_n_then_R = float(np.mean(per_R_limits[-min(3, len(r_grid)) :]))
    # other order: the R limit at fixed n is 0 whenever the column keeps
    # decaying geometrically, which is every infinite space; only a
    # column that has flattened out keeps its last value
    per_n_far = np.where(
        a_table[-1, :] <= 0.999 * np.maximum(a_table[-2, :], 1e-300),
        0.0,
        a_table[-1, :],
    )
    a_limit_R_then_n = float(_limit_in_a(a_vals, per_n_far))

    if math.isfinite(space.diameter):
        avr_ref = 0.0
    else:
        vol = space.ball_volume(space.base_point, 1.0)
        avr_ref = vol.value / float(space.natural_profile.eval(1.0))

    if u is None:
        radius = 1.0
        if math.isfinite(space.diameter):
            radius = min(1.0, space.diameter / 4.0)
        u = ball_indicator(space.base_point, radius, 1.0)

    b_table = np.empty((len(r_grid), len(n_grid)))
    b_err = np.empty_like(b_table)
    for i, R in enumerate(r_grid):
        for j, n in enumerate(n_grid):
            dec = decompose_energy(
                space,
                u,
                family,
                n,
                R=R,
                samples=samples,
                seed=seed,
                workers=workers,
            )
            b_table[i, j] = dec.I
            b_err[i, j] = dec.stderr_I
    b_ok = True
    for i in range(len(r_grid)):
        for j in range(len(n_grid) - 1):
            slack = 3.0 * (b_err[i, j] + b_err[i, j + 1])
            if b_table[i, j + 1] > b_table[i, j] + slack:
                b_ok = False

    c_vals = []
    for i, R in enumerate(r_grid):
        sup = float(np.max(a_table[i, :]))
        for c in centers[1:]:
            for n in n_grid:
                sup = max(sup, tail_mollifier_mass(space, family, n, x=c, R=R))
        c_vals.append(sup)
    c_bounded = all(math.isfinite(v) for v in c_vals)
    upper = c_vals[len(c_vals) // 2 :]
    c_noninc = all(
        upper[k + 1] <= upper[k] * (1.0 + 1e-9) + 1e-300
        for k in range(len(upper) - 1)
    )

    notes = [
        "ball volumes are center-independent in closed form for every "
        "implemented space, so center sweeps measure only numerical noise"
    ]
    return Assumption1Report(
        r_grid=tuple(r_grid),
        a_values=tuple(float(v) for v in a_vals),
        a_table=tuple(tuple(float(v) for v in row) for row in a_table),
        a_center_spread=spread,
        a_limit_n_then_R=a_limit_n_then_R,
        a_limit_R_then_n=a_limit_R_then_n,
        avr_reference=float(avr_ref),
        a_deviation=float(abs(a_limit_n_then_R - avr_ref)),
        b_table=tuple(tuple(float(v) for v in row) for row in b_table),
        b_stderr=tuple(tuple(float(v) for v in row) for row in b_err),
        b_decay_ok=bool(b_ok),
        c_values=tuple(float(v) for v in c_vals),
        c_bounded_ok=bool(c_bounded),
        c_nonincreasing_ok=bool(c_noninc),
        centers=tuple(tuple(float(v) for v in c) for c in centers),
        notes=tuple(notes),
    )
