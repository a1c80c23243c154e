"""The precondition chain and the command-line front end.

Every scientific claim rests on checkable hypotheses: the volume profile
is an increasing bijection with subadditive inverse, the kernel family
is decreasing with unit-mass tails, ball volumes grow within a doubling
envelope, and the tail mass concentrates uniformly over centers.  Each
check is a standalone report; the command line chains them and freezes
everything into a self-describing report.json.
"""

import json
import tempfile
from pathlib import Path

from nonlocal_limits import (
    EuclideanSpace,
    check_bgi,
    check_profile,
    check_volume_bound,
    standard_family,
    validate_assumption1,
    verify_family,
)
from nonlocal_limits.cli import main as cli_main


def main():
    plane = EuclideanSpace(2)
    family = standard_family(2, 2.0)

    print("== kernel family ==")
    fam = verify_family(family)
    print(
        f"decreasing {fam.decreasing_ok}, tails normalized "
        f"{fam.approx_identity_ok}, ratio identity residual "
        f"{fam.ratio_identity_residual:.2e}, passed {fam.passed}"
    )

    print("\n== space geometry ==")
    prof = check_profile(plane.natural_profile)
    bgi = check_bgi(plane)
    vol = check_volume_bound(plane)
    print(f"profile passed {prof.passed}, volume growth passed {bgi.passed}")
    print(f"doubling-envelope constant k = {vol.k:.4f}, bounded {vol.bounded_ok}")

    print("\n== tail-mass concentration ==")
    a1 = validate_assumption1(plane, family, samples=50_000)
    print(
        f"iterated tail limit {a1.a_limit_n_then_R:.6f} "
        f"(volume ratio reference {a1.avr_reference:.6f}), "
        f"short-range decay ok {a1.b_decay_ok}, "
        f"center sup finite {a1.c_bounded_ok}"
    )

    print("\n== command line ==")
    config = {
        "scenario": "demo-plane",
        "space": {"kind": "euclidean", "N": 2},
        "u": {"kind": "smooth_bump", "center": [0.0, 0.0], "radius": 1.0, "p": 2.0},
        "family": {"standard": {"N": 2, "p": 2.0, "s": [0.2, 0.1, 0.05, 0.025]}},
        "estimator": {"method": "monte-carlo", "samples": 200000, "seed": 11},
        "tolerance": {"rel": 0.05},
    }
    with tempfile.TemporaryDirectory() as tmp:
        cfg = Path(tmp) / "config.json"
        cfg.write_text(json.dumps(config))
        out = Path(tmp) / "run"
        rc = cli_main(["ms-limit", "--config", str(cfg), "--out", str(out)])
        report = json.loads((out / "report.json").read_text())
        print(f"exit code {rc}, artifacts {sorted(p.name for p in out.iterdir())}")
        print(f"verdict {report['report']['verdict']}")


if __name__ == "__main__":
    main()
