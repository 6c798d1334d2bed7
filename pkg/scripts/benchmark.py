"""Solve the periodic benchmark at alpha = 0.99 and 0.5 and report J_N.

Also runs the alpha sweep 0.1, 0.2, 0.4, 0.5, 0.7, 0.8 and writes the
trajectories of every run to CSV files under --outdir.
"""

import argparse
import csv
import time
from pathlib import Path

import numpy as np

from fgps import BENCHMARK_PERIOD, PeriodicGrid, benchmark_problem, build_operator, discretize, gegenbauer_rule, solve
from fgps.ocp import trajectory_table

RUNS = [(0.99, 40), (0.5, 1000)] + [(a, 40) for a in (0.1, 0.2, 0.4, 0.5, 0.7, 0.8)]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=12)
    parser.add_argument("--memory-length", type=float, default=30.0)
    parser.add_argument("--outdir", default="benchmark_runs")
    args = parser.parse_args()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    grid = PeriodicGrid(args.n, BENCHMARK_PERIOD)
    for alpha, n_g in RUNS:
        start = time.perf_counter()
        op = build_operator(alpha, args.memory_length, grid, gegenbauer_rule(0.0, n_g))
        nlp = discretize(benchmark_problem(alpha, args.memory_length), grid, op)
        result = solve(nlp)
        seconds = time.perf_counter() - start
        flag = " collapsed" if result.collapsed else ""
        print(
            f"alpha={alpha:<5g} N_G={n_g:<5d} J_N={result.objective: .9e} "
            f"max_adfe={np.max(result.adfe):.1e} iters={result.iterations} {seconds:.2f}s{flag}"
        )
        header, table = trajectory_table(result, grid)
        with open(outdir / f"trajectory_alpha{alpha:g}_ng{n_g}.csv", "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows([["%.17g" % v for v in row] for row in table])


if __name__ == "__main__":
    main()
