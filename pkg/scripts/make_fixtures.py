"""Regenerate the bundled fixtures/ directory.

Everything here is deterministic, so rerunning the script reproduces the
committed files byte for byte.
"""

import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from squarescope.curves import (  # noqa: E402
    ClosedCurve,
    ellipse_curve,
    circle_curve,
    random_generic_curve,
    save_curve,
)
from squarescope.reportio import (  # noqa: E402
    save_origin_path,
    save_relation,
    save_split_pair,
    save_trochoid_instance,
    write_report,
)
from squarescope.spirals import MultiplierRelation, SplitPair, spiral_path  # noqa: E402
from squarescope.trochoid import TrochoidInstance  # noqa: E402

OUT = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def diamond_slow(n: int = 1024) -> ClosedCurve:
    """Unit diamond with half the parameter spent on the first edge.

    The parameterization puts gamma(0) = (1, 0) and gamma(1/2) = (0, 1), so
    the corner construction at (u, v) = (0, 1/2) lands both corners exactly
    on the two remaining vertices and the anti-diagonal loop passes through
    the origin of the value plane.
    """
    v = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
    breaks = [0, n // 2, n // 2 + n // 6, n // 2 + n // 3, n]
    pts = np.empty((n, 2))
    for edge in range(4):
        lo, hi = breaks[edge], breaks[edge + 1]
        frac = (np.arange(lo, hi) - lo) / (hi - lo)
        pts[lo:hi] = v[edge] + frac[:, None] * (v[(edge + 1) % 4] - v[edge])
    return ClosedCurve(pts)


def main() -> None:
    os.makedirs(OUT, exist_ok=True)

    save_curve(ellipse_curve(2.0, 1.0, n_samples=1024), f"{OUT}/ellipse.json")
    save_curve(circle_curve(1.0, n_samples=1024), f"{OUT}/circle.json")
    for seed in range(1, 6):
        save_curve(
            random_generic_curve(seed, n_samples=1024),
            f"{OUT}/curve_seed{seed}.json",
        )
    save_curve(diamond_slow(), f"{OUT}/diamond_slow.json")

    t_max = 3.0 * np.pi
    save_origin_path(
        spiral_path(1.0, -0.2 + 1.0j, t_max, n=4096), f"{OUT}/path_spiral_a.json"
    )
    save_origin_path(
        spiral_path(0.8 * np.exp(0.25j * np.pi), -0.35 + 0.8j, t_max, n=4096),
        f"{OUT}/path_spiral_b.json",
    )
    save_relation(
        MultiplierRelation([1.0, 0.5j, -0.3]), f"{OUT}/relation.json"
    )
    save_split_pair(SplitPair(1 + 3j, 2 + 1j), f"{OUT}/split_pair.json")
    write_report({"offsets": [[0.3, 0.5, 0]]}, f"{OUT}/offsets.json")
    save_trochoid_instance(
        TrochoidInstance(
            alpha1=0.0,
            alpha2=0.0,
            beta1=1.0,
            beta2=1.0,
            t0=0.0,
            p=1.0,
            lam=0.7,
            r1=0.5,
            r2=0.5,
        ),
        f"{OUT}/trochoid_instance.json",
    )
    write_report(
        {"x": [[1.0, 0.0], [0.0, 1.0]], "a": [-0.2, 1.0]}, f"{OUT}/area_spec.json"
    )
    print(f"fixtures written to {os.path.abspath(OUT)}")


if __name__ == "__main__":
    main()
