"""Sweep c (or b) and report how fast each bracket table approaches its limit."""
import argparse
import json

from ubrel.lie_algebras import contract


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=("ub_three", "u1n_covariant"), default="ub_three")
    ap.add_argument("--n", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--values", type=float, nargs="+", default=[10, 20, 40, 80, 160])
    args = ap.parse_args()
    for n in args.n:
        rep = contract(args.family, n, args.values)
        print(json.dumps({"family": rep.family, "n": n, "values": rep.values, "deviations": rep.deviations,
                          "ratios": rep.ratios, "fitted_order": rep.fitted_order}))


if __name__ == "__main__":
    main()
