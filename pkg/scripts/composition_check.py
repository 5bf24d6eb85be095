"""Compare n = 1 closed-form composition laws against the matrix product, and
check the mass-rate formula against finite differences along random worldlines."""
import argparse
import json

import numpy as np

from ubrel.kinematics import (
    KinematicParams,
    Worldline,
    compose_closed,
    compose_matrix,
    compose_printed,
    finite_difference_mass_rate,
    mass_rate,
)
from ubrel.relativity_groups import random_ub


def gap(x, y):
    return max(float(np.max(np.abs(x.v - y.v))), float(np.max(np.abs(x.f - y.f))), abs(x.r - y.r),
               float(np.max(np.abs(x.m_stress - y.m_stress))))


def random_params(rng, c):
    return KinematicParams.from_velocity([rng.uniform(-0.9, 0.9) * c], c, f=rng.uniform(-2, 2, 1),
                                         r=rng.uniform(-2, 2), m_stress=[[rng.uniform(-2, 2)]])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", type=int, default=1000)
    ap.add_argument("--worldlines", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    closed = printed = 0.0
    for _ in range(args.pairs):
        c = float(rng.uniform(0.5, 3.0))
        a, b = random_params(rng, c), random_params(rng, c)
        ref = compose_matrix(a, b)
        closed = max(closed, gap(compose_closed(a, b), ref))
        printed = max(printed, gap(compose_printed(a, b), ref))

    rel = 0.0
    for _ in range(args.worldlines):
        n = int(rng.integers(1, 4))
        g = random_ub(rng, n, c=float(rng.uniform(0.5, 3.0)), xi_scale=2.0)
        x0, v0 = rng.normal(size=(2, n + 1))
        p0, f0, w = rng.normal(size=(3, n + 1))
        wl = Worldline.sample(lambda t: x0 + v0 * t + np.sin(w * t), lambda t: p0 + f0 * t + t**2, 0.3, 2e-5)
        exact = mass_rate(g, v0 + w * np.cos(w * 0.3), f0 + 0.6)
        rel = max(rel, abs(exact - finite_difference_mass_rate(g, wl)) / abs(exact))

    print(json.dumps({"closed_vs_matrix": closed, "printed_vs_matrix": printed, "mass_rate_relative_gap": rel}, indent=2))


if __name__ == "__main__":
    main()
