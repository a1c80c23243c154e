"""The Heisenberg group: a homogeneous space with no Euclidean structure.

Points (x, y, z) multiply by the group law, distances come from the
Koranyi gauge, and dilations scale the gauge linearly while scaling the
volume like r^4.  Homogeneity makes the volume ratio constant in r, so
the small-exponent limit still equals 2 * AVR * ||u||_p^p even though
the homogeneous dimension 4 exceeds the topological dimension 3.
"""

import numpy as np

from nonlocal_limits import (
    HeisenbergSpace,
    check_ms,
    mc_ball_volume,
    smooth_bump,
    standard_family,
)


def main():
    space = HeisenbergSpace()

    print("== group structure ==")
    p = np.array([1.0, 0.5, -0.3])
    q = np.array([-0.2, 2.0, 0.7])
    pq = space.group_product(p, q)
    print(f"p * q = {pq}")
    left_shift = space.distance(space.group_product(p, q), space.group_product(p, p))
    print(f"left-invariance check: d(pq, pp) = d(q, p) -> {left_shift:.6f} = {space.distance(q, p):.6f}")

    print("\n== volume ratio m(B_r) / r^4 is constant ==")
    for i, r in enumerate(np.geomspace(0.5, 5.0, 5)):
        rng = np.random.default_rng(np.random.Philox(key=[77, i]))
        est = mc_ball_volume(space, space.base_point, float(r), 400_000, rng)
        print(f"r = {r:6.3f}  m(B_r) / r^4 = {est.value / r**4:.5f} +- {est.stderr / r**4:.5f}")

    print("\n== small-exponent limit ==")
    u = smooth_bump([0.0, 0.0, 0.0], 1.0, 2.0)
    family = standard_family(4, 2.0, s_ladder=(0.2, 0.1, 0.05, 0.025))
    report = check_ms(
        space, u, family, tol=0.10,
        method="monte-carlo", samples=400_000, seed=2, workers=2,
    )
    print(
        f"limit {report.limit_estimate:.4f} vs predicted {report.predicted_limit:.4f}"
        f" ({report.relative_deviation:.2%} off), verdict "
        f"{'PASS' if report.passed else 'FAIL'}"
    )


if __name__ == "__main__":
    main()
