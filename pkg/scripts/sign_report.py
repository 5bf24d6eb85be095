"""Compare matrix-derived three-notation brackets with the printed sign conventions."""
import argparse
import json

from ubrel.lie_algebras import jacobi_check, printed_contracted_table, printed_three_table, sign_discrepancy_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--c", type=float, default=2.0)
    args = ap.parse_args()
    rep = sign_discrepancy_report(args.n, c=args.c)
    rep["jacobi_printed_finite"] = jacobi_check(printed_three_table(args.n, args.c))
    rep["jacobi_printed_contracted"] = jacobi_check(printed_contracted_table(args.n))
    print(json.dumps(rep, indent=2, default=str))


if __name__ == "__main__":
    main()
