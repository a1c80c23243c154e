"""Vanishing limit on a finite-measure space.

On the unit circle the ball volume saturates at the total measure, the
asymptotic volume ratio is zero, and the energy ladder must decrease to
zero instead of approaching a positive limit.  The verdict then runs
against an absolute floor because a relative deviation from zero is
meaningless.
"""

from nonlocal_limits import (
    CircleSpace,
    ball_indicator,
    check_ms,
    estimate_avr,
    standard_family,
)


def main():
    space = CircleSpace(1.0)
    saturated = space.ball_volume(0.0, 10.0).value
    print(f"diameter {space.diameter:.6f}, ball volume saturates at {saturated:.6f}")

    avr = estimate_avr(space)
    print(f"asymptotic volume ratio: {avr.value} (exact for bounded diameter)")

    u = ball_indicator([0.0], 1.0, 1.0)
    family = standard_family(1, 1.0, s_ladder=(0.2, 0.1, 0.05, 0.025))
    report = check_ms(space, u, family, abs_floor=0.05)

    print("\n== ladder decreases toward zero ==")
    for row in report.rows:
        print(f"a_n = {row['a_n']:<6g} E_n = {row['value']:.6f}")

    print(
        f"\nextrapolated limit {report.limit_estimate:.5f} "
        f"(absolute floor {report.absolute_floor}), verdict "
        f"{'PASS' if report.passed else 'FAIL'}"
    )


if __name__ == "__main__":
    main()
