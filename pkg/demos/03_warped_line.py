"""A non-Euclidean volume profile: the half-line warped by V(t) = t^2.

The warped line carries the measure whose balls grow quadratically, so
the kernel family must be built over the same profile.  Volume ratio and
density come out exactly 2, and the limit of the energy ladder lands on
2 * AVR * ||u||_1 = 4 for the indicator of a set of measure 1.
"""

import math

from nonlocal_limits import (
    ball_indicator,
    check_ms,
    estimate_avr,
    estimate_density,
    make_family,
    make_power_generator,
    make_power_profile,
    make_warped_line,
)


def main():
    profile = make_power_profile(2)
    space = make_warped_line(profile)

    avr = estimate_avr(space)
    density = estimate_density(space)
    print(f"volume ratio {avr.value} +- {avr.stderr}, density {density.value} +- {density.stderr}")

    # Ball of measure 1 around the base point: radius sqrt(1/2) on each side.
    u = ball_indicator([0.5], math.sqrt(0.5), 1.0)
    family = make_family(make_power_generator(1.0), profile, (0.2, 0.1, 0.05, 0.025))

    report = check_ms(space, u, family, tol=0.02)
    print("\n== ladder over the quadratic-volume kernel ==")
    for row in report.rows:
        print(f"a_n = {row['a_n']:<6g} E_n = {row['value']:.6f}")
    print(
        f"\nlimit {report.limit_estimate:.6f} vs predicted {report.predicted_limit:.6f}"
        f" ({report.relative_deviation:.2%} off), verdict "
        f"{'PASS' if report.passed else 'FAIL'}"
    )


if __name__ == "__main__":
    main()
