"""Max-abs error of the FGPS derivative of sin over alpha for several (N, L).

Writes one CSV with columns n, memory_length, alpha, max_abs_error.
"""

import argparse
import csv
import time

import numpy as np

from fgps import PeriodicGrid, apply, build_operator, exact_sin_fd, gegenbauer_rule

CASES = [(20, 30.0), (100, 30.0), (20, 100.0), (100, 100.0), (100, 1.52)]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--ng", type=int, default=1000)
    parser.add_argument("--out", default="fd_accuracy.csv")
    args = parser.parse_args()

    rule = gegenbauer_rule(0.0, args.ng)
    alphas = np.round(np.arange(0.05, 1.0, 0.05), 2).tolist() + [0.99]
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n", "memory_length", "alpha", "max_abs_error"])
        for n, memory_length in CASES:
            grid = PeriodicGrid(n)
            start = time.perf_counter()
            for alpha in alphas:
                op = build_operator(alpha, memory_length, grid, rule)
                err = np.max(np.abs(apply(op, np.sin(grid.nodes)) - exact_sin_fd(alpha, memory_length, grid.nodes)))
                writer.writerow([n, memory_length, alpha, "%.17g" % err])
            print(f"N={n} L={memory_length:g}: {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
