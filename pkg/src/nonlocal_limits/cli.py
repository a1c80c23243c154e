"""Batch front-end: run configured experiments and write reports.

Subcommands:
    verify       run the validator chain and the assumption tables.
    ms-limit     run the ladder, extrapolate, compare with the prediction.
    decompose    split one rung into near / cross / far parts.
    avr          estimate the asymptotic volume ratio with its ratio table.
    tail-table   tabulate mollifier tail masses over the (R, n) grid.

Exit codes: 0 on pass, 1 on scientific failure, 2 on usage or config
errors.  Reports are JSON with sorted keys and contain no worker counts,
paths, or timestamps, so reruns of the same config are byte-identical
regardless of parallelism.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from .asymptotics import (
    HypothesisViolation,
    check_ms,
    validate_assumption1,
)
from .config import ConfigError, ExperimentConfig, ScenarioError, load_config
from .energy import decompose_energy
from .mollifiers import verify_family
from .spaces import (
    check_bgi,
    check_volume_bound,
    estimate_avr,
    tail_mollifier_mass,
)
from .volume_profiles import check_profile

__all__ = [
    "main",
    "cmd_verify",
    "cmd_ms_limit",
    "cmd_decompose",
    "cmd_avr",
    "cmd_tail_table",
]


def _clean(v):
    """Make a value JSON-safe: tuples to lists, non-finite floats to None."""
    if isinstance(v, float):
        return v if math.isfinite(v) else None
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if hasattr(v, "item") and not hasattr(v, "ndim"):
        return _clean(v.item())
    if hasattr(v, "tolist"):
        return _clean(v.tolist())
    return v


def _write_report(out_dir: Path, payload: dict) -> Path:
    path = out_dir / "report.json"
    text = json.dumps(_clean(payload), sort_keys=True, indent=2, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def _write_ladder_csv(out_dir: Path, rows, predicted: float) -> Path:
    path = out_dir / "ladder.csv"
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["a_n", "E_n", "stderr", "predicted"])
        for row in rows:
            writer.writerow(
                [
                    repr(float(row["a_n"])),
                    repr(float(row["value"])),
                    repr(float(row["stderr"])),
                    repr(float(predicted)),
                ]
            )
    return path


def _write_tails_csv(out_dir: Path, r_grid, a_values, table) -> Path:
    path = out_dir / "tails.csv"
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["R", "a_n", "tail_mass"])
        for i, R in enumerate(r_grid):
            for j, a in enumerate(a_values):
                writer.writerow([repr(float(R)), repr(float(a)), repr(float(table[i][j]))])
    return path


def _report_diag(diag) -> dict:
    return {"passed": bool(diag.passed), "messages": [str(m) for m in diag.messages]}


def cmd_verify(cfg: ExperimentConfig, workers: int, out_dir: Path) -> int:
    """Run the full validator chain; exit 0 iff every check passes."""
    family = cfg.family()
    space = cfg.space
    prof = check_profile(family.profile)
    fam = verify_family(family)
    finite = math.isfinite(space.diameter)
    bgi = None if finite else check_bgi(space)
    vol = check_volume_bound(space)
    seed = 0 if cfg.seed is None else cfg.seed
    assumption = validate_assumption1(
        space,
        family,
        R_ladder=cfg.assumption_R,
        u=cfg.u,
        samples=cfg.assumption_samples,
        seed=seed,
        workers=workers,
    )
    avr_ref = assumption.avr_reference
    a_dev_ok = assumption.a_deviation <= max(0.05 * abs(avr_ref), 0.05)
    flags = {
        "profile": bool(prof.passed),
        "family": bool(fam.passed),
        "bgi": "waived" if finite else bool(bgi.passed),
        "volume_bound": bool(vol.bounded_ok) and math.isfinite(vol.k),
        "assumption_tail_limit": bool(a_dev_ok),
        "assumption_short_range_decay": bool(assumption.b_decay_ok),
        "assumption_center_bound": bool(
            assumption.c_bounded_ok and assumption.c_nonincreasing_ok
        ),
    }
    passed = all(v is True or v == "waived" for v in flags.values())
    payload = {
        "command": "verify",
        "config": cfg.echo,
        "validators": {
            "profile": _report_diag(prof),
            "family": {
                "passed": bool(fam.passed),
                "decreasing": bool(fam.decreasing_ok),
                "ratio_monotone": bool(fam.ratio_monotone_ok),
                "vanishing_product": bool(fam.vanishing_product_ok),
                "pointwise_decay": bool(fam.pointwise_decay_ok),
                "approx_identity": bool(fam.approx_identity_ok),
                "messages": [str(m) for m in fam.messages],
            },
            "bgi": "waived" if finite else _report_diag(bgi),
            "volume_bound": {
                "passed": flags["volume_bound"],
                "k": vol.k,
                "per_decade_max": vol.per_decade_max,
                "messages": [str(m) for m in vol.messages],
            },
        },
        "assumption1": {
            "provenance": "exact",
            "R": list(assumption.r_grid),
            "a": list(assumption.a_values),
            "tail_table": [list(r) for r in assumption.a_table],
            "center_spread": assumption.a_center_spread,
            "limit_n_then_R": assumption.a_limit_n_then_R,
            "limit_R_then_n": assumption.a_limit_R_then_n,
            "avr_reference": assumption.avr_reference,
            "deviation": assumption.a_deviation,
            "short_range": {
                "provenance": "monte-carlo",
                "table": [list(r) for r in assumption.b_table],
                "stderr": [list(r) for r in assumption.b_stderr],
                "decay_ok": bool(assumption.b_decay_ok),
            },
            "center_sup": list(assumption.c_values),
            "notes": list(assumption.notes),
        },
        "flags": flags,
        "verdict": "PASS" if passed else "FAIL",
    }
    _write_report(out_dir, payload)
    _write_tails_csv(out_dir, assumption.r_grid, assumption.a_values, assumption.a_table)
    print(
        "verify "
        + " ".join(f"{k}={v}" for k, v in flags.items())
        + f" {'PASS' if passed else 'FAIL'}"
    )
    return 0 if passed else 1


def cmd_ms_limit(
    cfg: ExperimentConfig, workers: int, out_dir: Path, skip_validate: bool
) -> int:
    """Run the ladder-to-limit comparison and write report plus CSV."""
    family = cfg.family()
    report = check_ms(
        cfg.space,
        cfg.u,
        family,
        tol=cfg.rel_tol,
        abs_floor=cfg.abs_floor,
        method=cfg.method,
        samples=cfg.samples,
        seed=0 if cfg.seed is None else cfg.seed,
        workers=workers,
        r0=cfg.r0,
        model=cfg.model,
        normalization=cfg.normalization,
        skip_validate=skip_validate,
    )
    payload = {
        "command": "ms-limit",
        "config": cfg.echo,
        "report": report.to_dict(),
    }
    _write_report(out_dir, payload)
    _write_ladder_csv(out_dir, report.rows, report.predicted_limit)
    if math.isnan(report.relative_deviation):
        dev = f"abs {report.absolute_deviation:.3g}"
    else:
        dev = f"{100.0 * report.relative_deviation:.1f}%"
    print(
        f"limit {report.limit_estimate:.2f} "
        f"predicted {report.predicted_limit:.2f} "
        f"dev {dev} {'PASS' if report.passed else 'FAIL'}"
    )
    return 0 if report.passed else 1


def cmd_decompose(cfg: ExperimentConfig, workers: int, out_dir: Path) -> int:
    """Split one rung into near / cross / far parts at the split radius."""
    if cfg.seed is None:
        raise ConfigError("estimator.seed is mandatory for Monte Carlo scenarios")
    family = cfg.family()
    dec = decompose_energy(
        cfg.space,
        cfg.u,
        family,
        cfg.decompose_n,
        R=cfg.decompose_R,
        samples=cfg.samples,
        seed=cfg.seed,
        r0=cfg.r0,
        workers=workers,
    )
    residual = abs(dec.I + dec.II + dec.III - dec.total)
    passed = residual <= 1e-12 * max(1.0, abs(dec.total))
    payload = {
        "command": "decompose",
        "config": cfg.echo,
        "decomposition": {
            "provenance": "monte-carlo",
            "R": cfg.decompose_R,
            "n": cfg.decompose_n,
            "a_n": family.a(cfg.decompose_n),
            "near": {"value": dec.I, "stderr": dec.stderr_I},
            "cross": {"value": dec.II, "stderr": dec.stderr_II},
            "far": {"value": dec.III, "stderr": dec.stderr_III},
            "total": {"value": dec.total, "stderr": dec.estimate.stat_stderr},
            "additivity_residual": residual,
        },
        "verdict": "PASS" if passed else "FAIL",
    }
    _write_report(out_dir, payload)
    print(
        f"I {dec.I:.6g} II {dec.II:.6g} III {dec.III:.6g} "
        f"total {dec.total:.6g} residual {residual:.3g} "
        f"{'PASS' if passed else 'FAIL'}"
    )
    return 0 if passed else 1


def cmd_avr(cfg: ExperimentConfig, out_dir: Path) -> int:
    """Report the asymptotic volume ratio and its ball-ratio table."""
    space = cfg.space
    finite = math.isfinite(space.diameter)
    if finite:
        value, stderr, provenance = 0.0, 0.0, "exact"
        ratios = []
        bgi_passed = True
        decade_spread = 0.0
    else:
        est = estimate_avr(space)
        value, stderr = est.value, est.stderr
        # exactness of the underlying ball volumes, not of the r-fit
        exact_volumes = space.ball_volume(space.base_point, 1.0).stderr == 0.0
        provenance = "exact" if exact_volumes else "monte-carlo"
        bgi = check_bgi(space)
        bgi_passed = bool(bgi.passed)
        ratios = [
            {"r": float(r), "ratio": float(q), "stderr": float(e)}
            for r, q, e in zip(bgi.grid, bgi.ratios, bgi.ratio_stderrs)
        ]
        decade = [q["ratio"] for q in ratios if ratios[-1]["r"] / 10.0 <= q["r"]]
        decade_spread = (
            (max(decade) - min(decade)) / max(abs(value), 1e-300) if decade else 0.0
        )
    payload = {
        "command": "avr",
        "config": cfg.echo,
        "avr": {
            "value": value,
            "stderr": stderr,
            "provenance": provenance,
            "decade_spread": decade_spread,
        },
        "ratios": ratios,
        "bgi_passed": bgi_passed,
        "verdict": "PASS" if bgi_passed else "FAIL",
    }
    _write_report(out_dir, payload)
    print(f"AVR {value:.6g} +/- {stderr:.2g} ({provenance})")
    return 0 if bgi_passed else 1


def cmd_tail_table(cfg: ExperimentConfig, out_dir: Path) -> int:
    """Tabulate tail masses of the family over the configured (R, n) grid."""
    family = cfg.family()
    space = cfg.space
    r_grid = list(cfg.assumption_R)
    a_values = [family.a(n) for n in range(len(family))]
    table = [
        [tail_mollifier_mass(space, family, n, R=R) for n in range(len(family))]
        for R in r_grid
    ]
    payload = {
        "command": "tail-table",
        "config": cfg.echo,
        "table": {
            "provenance": "exact",
            "R": r_grid,
            "a": a_values,
            "tail_mass": table,
        },
        "verdict": "PASS",
    }
    _write_report(out_dir, payload)
    _write_tails_csv(out_dir, r_grid, a_values, table)
    print(f"tail table {len(r_grid)}x{len(a_values)} written")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nonlocal-limits",
        description="Nonlocal energy ladders and their small-exponent limits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("verify", "run the validator chain and assumption tables"),
        ("ms-limit", "run the ladder and compare with the predicted limit"),
        ("decompose", "split one rung into near/cross/far parts"),
        ("avr", "estimate the asymptotic volume ratio"),
        ("tail-table", "tabulate mollifier tail masses"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="path to the JSON config")
        cmd.add_argument("--seed", type=int, default=None, help="override the seed")
        cmd.add_argument(
            "--samples", type=int, default=None, help="override the sample count"
        )
        cmd.add_argument(
            "--workers", type=int, default=1, help="worker threads (results identical)"
        )
        cmd.add_argument("--out", default=".", help="output directory")
        cmd.add_argument(
            "--skip-validate",
            action="store_true",
            help="skip the validator chain before ms-limit",
        )
    return parser


def main(argv=None) -> int:
    """Entry point; returns the process exit code."""
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(
            args.config, seed_override=args.seed, samples_override=args.samples
        )
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"cannot create output directory {out_dir}: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "verify":
            return cmd_verify(cfg, args.workers, out_dir)
        if args.command == "ms-limit":
            return cmd_ms_limit(cfg, args.workers, out_dir, args.skip_validate)
        if args.command == "decompose":
            return cmd_decompose(cfg, args.workers, out_dir)
        if args.command == "avr":
            return cmd_avr(cfg, out_dir)
        if args.command == "tail-table":
            return cmd_tail_table(cfg, out_dir)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ScenarioError, HypothesisViolation) as exc:
        label = (
            "hypothesis violation"
            if isinstance(exc, HypothesisViolation)
            else "scenario error"
        )
        _write_report(
            out_dir,
            {
                "command": args.command,
                "config": cfg.echo,
                "error": {"kind": label, "message": str(exc)},
                "verdict": "FAIL",
            },
        )
        print(f"{label}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
