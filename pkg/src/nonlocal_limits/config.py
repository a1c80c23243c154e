"""Experiment configuration: JSON specs resolved into library objects.

A config is one JSON object per experiment.  Every field the run depends
on is resolved here, with defaults made explicit, so the echoed config in
a report fully describes the run.  Worker counts and output paths are
not part of the scientific configuration and never appear in reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .energy import TestFunction, ball_indicator, smooth_bump, tent
from .mollifiers import (
    MollifierFamily,
    make_exp_generator,
    make_family,
    make_log_generator,
    make_power_generator,
    standard_family,
)
from .spaces import (
    CircleSpace,
    EuclideanSpace,
    HeisenbergSpace,
    NormedSpace,
    Space,
    WarpedLine,
)
from .volume_profiles import (
    VolumeProfile,
    make_hyperbolic_profile,
    make_power_profile,
)

__all__ = [
    "ConfigError",
    "ScenarioError",
    "ExperimentConfig",
    "load_config",
    "parse_config",
]


class ConfigError(Exception):
    """Unusable configuration: unknown kinds, missing fields, bad types."""


class ScenarioError(Exception):
    """Well-formed configuration describing a scientifically invalid run."""


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def _get(table: dict, key: str, context: str):
    _require(key in table, f"{context}: missing required field {key!r}")
    return table[key]


def _build_profile(spec: dict) -> VolumeProfile:
    kind = _get(spec, "kind", "profile")
    if kind == "power":
        return make_power_profile(int(_get(spec, "N", "profile")))
    if kind == "hyperbolic":
        return make_hyperbolic_profile(
            float(spec.get("K", -1.0)), int(_get(spec, "N", "profile"))
        )
    raise ConfigError(f"profile: unknown kind {kind!r}")


def _build_space(spec: dict) -> Space:
    kind = _get(spec, "kind", "space")
    if kind == "euclidean":
        return EuclideanSpace(int(_get(spec, "N", "space")))
    if kind == "normed":
        return NormedSpace(int(_get(spec, "N", "space")), float(spec.get("q", 1.0)))
    if kind == "warped-line":
        return WarpedLine(_build_profile(_get(spec, "profile", "space")))
    if kind == "circle":
        return CircleSpace(float(spec.get("radius", 1.0)))
    if kind == "heisenberg":
        return HeisenbergSpace()
    raise ConfigError(f"space: unknown kind {kind!r}")


def _build_generator(spec: dict):
    kind = _get(spec, "kind", "generator")
    if kind == "power":
        return make_power_generator(float(spec.get("alpha", 1.0)))
    if kind == "exp":
        return make_exp_generator()
    if kind == "log":
        return make_log_generator()
    raise ConfigError(f"generator: unknown kind {kind!r}")


def _build_u(spec: dict) -> TestFunction:
    kind = _get(spec, "kind", "u")
    makers = {
        "ball_indicator": ball_indicator,
        "tent": tent,
        "smooth_bump": smooth_bump,
    }
    _require(kind in makers, f"u: unknown kind {kind!r}")
    center = np.asarray(_get(spec, "center", "u"), dtype=float)
    radius = float(_get(spec, "radius", "u"))
    p = float(_get(spec, "p", "u"))
    _require(radius > 0.0, "u: radius must be positive")
    _require(p >= 1.0, "u: p must be at least 1")
    return makers[kind](center, radius, p)


@dataclass
class ExperimentConfig:
    """A fully resolved experiment.

    Attributes:
        scenario: free-form experiment name.
        space: resolved space.
        u: resolved test function.
        family_spec: the family portion of the raw config; the family
            itself is built lazily because a bad ladder is a scientific
            finding, not a parse error.
        method: "auto", "quadrature", or "monte-carlo".
        samples, seed, r0, tol: estimator options.
        model: extrapolation model id.
        rel_tol, abs_floor: acceptance tolerances.
        normalization: "raw" or "s".
        assumption_R: R ladder for the tail-mass tables.
        assumption_samples: Monte Carlo samples per short-range cell.
        decompose_R, decompose_n: split radius and ladder index for the
            three-part decomposition command.
        echo: resolved config dict for self-describing reports.
    """

    scenario: str
    space: Space
    u: TestFunction
    family_spec: dict
    method: str
    samples: int
    seed: int | None
    r0: float | None
    tol: float
    model: str
    rel_tol: float
    abs_floor: float
    normalization: str
    assumption_R: tuple[float, ...]
    assumption_samples: int
    decompose_R: float
    decompose_n: int
    echo: dict = field(repr=False)

    def resolved_method(self) -> str:
        if self.method != "auto":
            return self.method
        return "quadrature" if self.space.chart_dim == 1 else "monte-carlo"

    def family(self) -> MollifierFamily:
        """Build the mollifier family.

        Raises:
            ScenarioError: the ladder violates the family contract (for
                example a non-decreasing a-sequence).
        """
        spec = self.family_spec
        try:
            if "standard" in spec:
                std = spec["standard"]
                return standard_family(
                    int(_get(std, "N", "family.standard")),
                    float(std.get("p", self.u.p)),
                    s_ladder=[float(v) for v in _get(std, "s", "family.standard")],
                )
            gen = _build_generator(_get(spec, "generator", "family"))
            prof = _build_profile(_get(spec, "profile", "family"))
            a_seq = [float(v) for v in _get(spec, "a", "family")]
            return make_family(gen, prof, a_seq)
        except ValueError as exc:
            raise ScenarioError(str(exc)) from exc


def parse_config(
    raw: dict,
    *,
    seed_override: int | None = None,
    samples_override: int | None = None,
) -> ExperimentConfig:
    """Resolve a raw config dict, applying command-line overrides.

    Raises:
        ConfigError: missing or malformed fields, or a Monte Carlo
            scenario without a seed.
    """
    _require(isinstance(raw, dict), "config root must be a JSON object")
    space = _build_space(_get(raw, "space", "config"))
    u = _build_u(_get(raw, "u", "config"))
    family_spec = _get(raw, "family", "config")
    _require(isinstance(family_spec, dict), "family must be an object")

    est = dict(raw.get("estimator", {}))
    method = str(est.get("method", "auto"))
    _require(
        method in ("auto", "quadrature", "monte-carlo"),
        f"estimator.method: unknown method {method!r}",
    )
    samples = int(est.get("samples", 1_000_000))
    _require(samples > 0, "estimator.samples must be positive")
    seed = est.get("seed")
    if seed_override is not None:
        seed = seed_override
    if seed is not None:
        seed = int(seed)
    if samples_override is not None:
        samples = int(samples_override)
    r0 = est.get("r0")
    if r0 is not None:
        r0 = float(r0)
    tol = float(est.get("tol", 1e-9))

    resolved_method = method
    if resolved_method == "auto":
        resolved_method = "quadrature" if space.chart_dim == 1 else "monte-carlo"
    if resolved_method == "monte-carlo" and seed is None:
        raise ConfigError("estimator.seed is mandatory for Monte Carlo scenarios")

    ex = dict(raw.get("extrapolation", {}))
    model = str(ex.get("model", "affine"))
    _require(model in ("affine", "quadratic"), f"unknown extrapolation model {model!r}")

    tolerance = dict(raw.get("tolerance", {}))
    rel_tol = float(tolerance.get("rel", 0.05))
    abs_floor = float(tolerance.get("abs", 0.05))
    normalization = str(raw.get("normalization", "raw"))
    _require(
        normalization in ("raw", "s"),
        f"unknown normalization {normalization!r}",
    )

    assumption = dict(raw.get("assumption", {}))
    assumption_R = tuple(
        float(v) for v in assumption.get("R", (2.5, 5.0, 10.0, 20.0, 40.0))
    )
    assumption_samples = int(assumption.get("samples", 200_000))

    dec = dict(raw.get("decompose", {}))
    decompose_R = float(dec.get("R", 10.0))
    decompose_n = int(dec.get("n", 0))

    echo = {
        "scenario": str(raw.get("scenario", "unnamed")),
        "space": {"kind": raw["space"]["kind"], **space.params()},
        "u": {
            "kind": u.kind,
            "center": [float(v) for v in np.atleast_1d(u.center)],
            "radius": u.radius,
            "p": u.p,
        },
        "family": family_spec,
        "estimator": {
            "method": method,
            "resolved_method": resolved_method,
            "samples": samples,
            "seed": seed,
            "r0": r0,
            "tol": tol,
        },
        "extrapolation": {"model": model},
        "tolerance": {"rel": rel_tol, "abs": abs_floor},
        "normalization": normalization,
        "assumption": {"R": list(assumption_R), "samples": assumption_samples},
        "decompose": {"R": decompose_R, "n": decompose_n},
    }
    return ExperimentConfig(
        scenario=echo["scenario"],
        space=space,
        u=u,
        family_spec=family_spec,
        method=method,
        samples=samples,
        seed=seed,
        r0=r0,
        tol=tol,
        model=model,
        rel_tol=rel_tol,
        abs_floor=abs_floor,
        normalization=normalization,
        assumption_R=assumption_R,
        assumption_samples=assumption_samples,
        decompose_R=decompose_R,
        decompose_n=decompose_n,
        echo=echo,
    )


def load_config(
    path: str | Path,
    *,
    seed_override: int | None = None,
    samples_override: int | None = None,
) -> ExperimentConfig:
    """Load and resolve a JSON config file.

    Raises:
        ConfigError: unreadable file, invalid JSON, or contract failures.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return parse_config(
        raw, seed_override=seed_override, samples_override=samples_override
    )
