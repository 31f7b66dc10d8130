"""Norming constants, W(n) and d_n against their closed-form asymptotics.

    python3 scripts/convergence_table.py --n 1e2,1e4,1e6 --out convergence.csv
"""
import argparse

from tmethod import distributions as D
from tmethod.convergence import REPORT_COLUMNS, convergence_report
from tmethod.io import CONVERGENCE_FORMAT, write_csv

DISTS = ("exponential", "normal", "lognormal", "rayleigh:2", "gamma:0.5", "gamma:1.5", "gumbel")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="1e2,1e4,1e6")
    ap.add_argument("--dists", nargs="+", default=list(DISTS))
    ap.add_argument("--out", default="convergence.csv")
    args = ap.parse_args()

    ns = [int(float(v)) for v in args.n.split(",")]
    rows = []
    for name in args.dists:
        dist = D.from_name(name)
        for n in ns:
            rep = convergence_report(dist, n)
            rows.append([dist.name] + [getattr(rep, c) for c in REPORT_COLUMNS])
            print(f"{dist.name:>14} n={n:<8g} W={rep.w_n: .4e} closed={rep.closed_form_w_n}"
                  f" d_n={rep.d_n:.3e}")
    write_csv(args.out, CONVERGENCE_FORMAT, ["dist", *REPORT_COLUMNS], rows)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
