"""Log10 of the error-bound trend estimate over (alpha, L) and over N_G.

Writes two CSVs: a surface over alpha and L at fixed N and N_G, and curves
over N_G for a few (N, L) pairs.
"""

import argparse
import csv

import numpy as np

from fgps import ErrorBoundInputs, bound_estimate


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=20)
    parser.add_argument("--ng", type=int, default=100)
    parser.add_argument("--prefix", default="error_trends")
    args = parser.parse_args()

    with open(f"{args.prefix}_surface.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["alpha", "memory_length", "log10_bound_estimate", "condition_tss", "condition_lmk"])
        for alpha in np.round(np.arange(0.02, 1.0, 0.02), 2):
            for memory_length in np.linspace(1.0, 100.0, 34):
                inputs = ErrorBoundInputs(args.n, args.ng, memory_length, alpha)
                est = bound_estimate(inputs)
                writer.writerow([alpha, "%.17g" % memory_length, "%.17g" % est.log10_value, est.valid, inputs.condition_lmk])

    with open(f"{args.prefix}_ng.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n", "memory_length", "n_g", "finite", "asymptotic"])
        for n, memory_length in ((2, 2.0), (20, 2.0), (20, 30.0)):
            for n_g in range(2, 401, 2):
                inputs = ErrorBoundInputs(n, n_g, memory_length, 0.5)
                finite = bound_estimate(inputs).log10_value
                asym = bound_estimate(inputs, "asymptotic").log10_value
                writer.writerow([n, memory_length, n_g, "%.17g" % finite, "%.17g" % asym])
    print(f"wrote {args.prefix}_surface.csv and {args.prefix}_ng.csv")


if __name__ == "__main__":
    main()
