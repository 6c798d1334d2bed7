"""The gamma factor over a fine alpha grid for N_G = 50 and 100.

The factor dips wherever alpha / (1 - alpha) is an integer; the grid is
built from exact fractions so those dips are hit.
"""

import argparse
import csv
from fractions import Fraction

from fgps import gamma_factor


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=400)
    parser.add_argument("--out", default="gamma_sweep.csv")
    args = parser.parse_args()

    alphas = sorted({Fraction(k, args.steps) for k in range(1, args.steps)} | {Fraction(m, m + 1) for m in range(1, 10)})
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n_g", "alpha", "gamma"])
        for n_g in (50, 100):
            for alpha in alphas:
                writer.writerow([n_g, "%.17g" % float(alpha), "%.17g" % gamma_factor(float(alpha), n_g)])
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
