"""Command-line front end.

Every command writes CSV or JSON, to ``--out`` or to standard output. Exit
codes: 0 success, 2 invalid input, 3 solver did not converge, 4 numeric
failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from .errors import ErrorBoundInputs, bound_estimate, gamma_factor
from .exceptions import DomainError, NumericError
from .fourier import PeriodicGrid
from .fracdiff import apply, build_operator
from .gegenbauer import gegenbauer_rule
from .nlp import SolverOptions
from .ocp import (
    BENCHMARK_PERIOD,
    benchmark_problem,
    discretize,
    problem_from_spec,
    result_to_dict,
    solve,
    trajectory_table,
)
from .reference import exact_sin_fd, quadrature_fd

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_CONVERGED = 3
EXIT_NUMERIC = 4

COMMANDS = ("fd", "matrix", "exact-sin", "error-sweep", "gamma", "solve-pfocp")

# per-command defaults for options left unset on the command line
_DEFAULTS = {
    "fd": {"n": 20, "n_g": 1000},
    "matrix": {"n": 20, "n_g": 1000},
    "exact-sin": {"n": 20, "n_g": 1000},
    "error-sweep": {"n": 20, "n_g": 1000},
    "gamma": {"n": 20, "n_g": None},
    "solve-pfocp": {"n": 12, "n_g": 1000},
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int = 20
    n_g: int | None = 1000
    alpha: float = 0.5
    memory_length: float = 30.0
    lambda_index: float = 0.0
    period: float | None = None
    output_path: str | None = None
    format: str = "csv"
    sample_count: int = 100
    alpha_grid: tuple[float, ...] | None = None
    problem_path: str | None = None
    max_iter: int = 5000
    feasibility_tol: float = 1e-8

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if self.n <= 0 or self.n % 2:
            raise DomainError(f"--n must be a positive even integer, got {self.n}")
        if self.n_g is not None and self.n_g < 0:
            raise DomainError(f"--ng must be non-negative, got {self.n_g}")
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"--alpha must lie in (0, 1), got {self.alpha}")
        if not self.memory_length > 0:
            raise DomainError(f"--memory-length must be positive, got {self.memory_length}")
        if not self.lambda_index > -0.5:
            raise DomainError(f"--lambda must exceed -1/2, got {self.lambda_index}")
        if self.period is not None and not self.period > 0:
            raise DomainError(f"--period must be positive, got {self.period}")
        if self.format not in ("csv", "json"):
            raise DomainError(f"--format must be csv or json, got {self.format!r}")
        if self.sample_count < 1:
            raise DomainError(f"--samples must be positive, got {self.sample_count}")
        if self.alpha_grid is not None:
            if not self.alpha_grid:
                raise DomainError("--alpha-grid is empty")
            for a in self.alpha_grid:
                if not 0.0 < a < 1.0:
                    raise DomainError(f"--alpha-grid entries must lie in (0, 1), got {a}")
        if self.max_iter < 1:
            raise DomainError(f"--max-iter must be positive, got {self.max_iter}")
        if not self.feasibility_tol > 0:
            raise DomainError(f"--feas-tol must be positive, got {self.feasibility_tol}")
        if self.command == "solve-pfocp" and self.problem_path is not None:
            if not Path(self.problem_path).is_file():
                raise DomainError(f"problem file {self.problem_path!r} not found")


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return "%.17g" % float(value)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json_text(document) -> str:
    return json.dumps(document, indent=2, allow_nan=True) + "\n"


def _write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write through a temporary file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(config: RunConfig, text: str) -> None:
    if config.output_path is None:
        sys.stdout.write(text)
    else:
        _write_atomic(config.output_path, text)


def _table(config: RunConfig, header, rows, extra: dict | None = None) -> str:
    if config.format == "csv":
        return _csv_text(header, rows)
    document = {"schema_version": 1, "parameters": _parameters(config), "columns": list(header)}
    document["rows"] = [[_json_value(v) for v in row] for row in rows]
    document.update(extra or {})
    return _json_text(document)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, str):
        return v
    v = float(v)
    # JSON has no literal for inf or nan
    return v if math.isfinite(v) else None


def _parameters(config: RunConfig) -> dict:
    params = asdict(config)
    params.pop("output_path")
    if params["alpha_grid"] is not None:
        params["alpha_grid"] = list(params["alpha_grid"])
    return params


def _grid(config: RunConfig, default_period: float = 2.0 * math.pi) -> PeriodicGrid:
    return PeriodicGrid(config.n, config.period if config.period is not None else default_period)


def _sin_errors(config: RunConfig, alpha: float):
    grid = _grid(config)
    rule = gegenbauer_rule(config.lambda_index, config.n_g)
    op = build_operator(alpha, config.memory_length, grid, rule)
    approx = apply(op, np.sin(grid.nodes))
    exact = None
    if math.isclose(grid.period, 2.0 * math.pi, rel_tol=1e-15):
        exact = exact_sin_fd(alpha, config.memory_length, grid.nodes)
    return grid, approx, exact


def cmd_fd(config: RunConfig) -> int:
    """FD of ``sin`` at the nodes with the exact value and the absolute error."""
    grid, approx, exact = _sin_errors(config, config.alpha)
    if exact is None:
        rows = [(t, a, "", "") for t, a in zip(grid.nodes, approx)]
        _emit(config, _table(config, ["t", "approx", "exact", "abs_error"], rows))
        return EXIT_OK

    err = np.abs(approx - exact)
    rows = list(zip(grid.nodes, approx, exact, err))
    max_err = float(np.max(err))
    if config.format == "csv":
        text = _csv_text(["t", "approx", "exact", "abs_error"], rows + [("max_abs_error", "", "", max_err)])
    else:
        text = _table(config, ["t", "approx", "exact", "abs_error"], rows, {"max_abs_error": max_err})
    _emit(config, text)
    return EXIT_OK


def cmd_matrix(config: RunConfig) -> int:
    """The integration matrix ``Q``; JSON output also carries the scale factor."""
    grid = _grid(config)
    op = build_operator(config.alpha, config.memory_length, grid, gegenbauer_rule(config.lambda_index, config.n_g))
    q = op.matrix()
    header = [f"q_{j}" for j in range(config.n)]
    if config.format == "csv":
        _emit(config, _csv_text(header, q))
    else:
        document = {
            "schema_version": 1,
            "parameters": _parameters(config),
            "scale": op.scale,
            "first_row": op.first_row.tolist(),
            "first_col": op.first_col.tolist(),
            "matrix": q.tolist(),
        }
        _emit(config, _json_text(document))
    return EXIT_OK


def cmd_exact_sin(config: RunConfig) -> int:
    """Closed-form FD of ``sin`` next to the adaptive quadrature oracle."""
    period = config.period if config.period is not None else 2.0 * math.pi
    t = np.linspace(0.0, period, config.sample_count)
    exact = exact_sin_fd(config.alpha, config.memory_length, t)
    quad = np.array([quadrature_fd(np.cos, config.alpha, config.memory_length, ti) for ti in t])
    rows = list(zip(t, exact, quad, np.abs(exact - quad)))
    _emit(config, _table(config, ["t", "exact", "quadrature", "abs_diff"], rows))
    return EXIT_OK


def _alpha_grid(config: RunConfig, default) -> tuple[float, ...]:
    return config.alpha_grid if config.alpha_grid is not None else tuple(default)


def cmd_error_sweep(config: RunConfig) -> int:
    """Observed FD-of-sin error and the trend estimate over an alpha grid."""
    alphas = _alpha_grid(config, (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99))
    rows = []
    for alpha in alphas:
        _, approx, exact = _sin_errors(config, alpha)
        observed = float(np.max(np.abs(approx - exact))) if exact is not None else math.nan
        inputs = ErrorBoundInputs(config.n, config.n_g, config.memory_length, alpha, lam=max(config.lambda_index, 0.0))
        est = bound_estimate(inputs)
        rows.append((alpha, observed, est.log10_value, inputs.condition_tss, inputs.condition_lmk))
    header = ["alpha", "max_abs_error", "log10_bound_estimate", "condition_tss", "condition_lmk"]
    _emit(config, _table(config, header, rows))
    return EXIT_OK


def cmd_gamma(config: RunConfig) -> int:
    """The gamma factor over an alpha grid, for one ``N_G`` or for 50 and 100."""
    alphas = _alpha_grid(config, np.round(np.arange(1, 100) / 100.0, 2))
    n_gs = (config.n_g,) if config.n_g is not None else (50, 100)
    rows = [(n_g, alpha, gamma_factor(alpha, n_g)) for n_g in n_gs for alpha in alphas]
    _emit(config, _table(config, ["n_g", "alpha", "gamma"], rows))
    return EXIT_OK


def _load_problem(config: RunConfig, alpha: float):
    if config.problem_path is None:
        period = config.period if config.period is not None else BENCHMARK_PERIOD
        return benchmark_problem(alpha, config.memory_length, period)
    try:
        spec = json.loads(Path(config.problem_path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read problem file: {exc}") from None
    return problem_from_spec(spec, alpha, config.memory_length, config.period)


def _solve_one(config: RunConfig, alpha: float):
    problem = _load_problem(config, alpha)
    grid = PeriodicGrid(config.n, problem.period)
    op = build_operator(alpha, config.memory_length, grid, gegenbauer_rule(config.lambda_index, config.n_g))
    nlp = discretize(problem, grid, op)
    options = SolverOptions(max_iter=config.max_iter, feasibility_tol=config.feasibility_tol)
    result = solve(nlp, options=options)
    params = _parameters(replace(config, alpha=alpha, alpha_grid=None))
    params["period"] = problem.period
    return grid, nlp, result, result_to_dict(result, nlp, params)


def _suffixed(path: Path, alpha: float, many: bool) -> Path:
    return path.with_name(f"{path.stem}_alpha{alpha:g}{path.suffix}") if many else path


def cmd_solve_pfocp(config: RunConfig) -> int:
    """Solve the benchmark (or a problem file) for one alpha or an alpha grid.

    With ``--out`` the JSON result goes to that path and the trajectory CSV
    next to it with a ``.csv`` suffix; an alpha grid appends ``_alpha<value>``
    to both names.
    """
    alphas = _alpha_grid(config, (config.alpha,))
    many = len(alphas) > 1
    status = EXIT_OK
    documents = []
    for alpha in alphas:
        grid, nlp, result, document = _solve_one(config, alpha)
        if not result.converged:
            status = EXIT_NOT_CONVERGED
        note = " (collapsed to static solution)" if result.collapsed else ""
        print(
            f"alpha={alpha:g} J_N={result.objective:.10e} converged={result.converged} "
            f"stop={result.stop_reason} iterations={result.iterations} "
            f"max_adfe={np.max(result.adfe):.3e}{note}",
            file=sys.stderr,
        )
        if config.output_path is not None:
            base = Path(config.output_path)
            json_path = _suffixed(base.with_suffix(".json"), alpha, many)
            _write_atomic(json_path, _json_text(document))
            header, table = trajectory_table(result, grid, config.sample_count)
            _write_atomic(json_path.with_suffix(".csv"), _csv_text(header, table))
        documents.append(document)

    if config.output_path is None:
        sys.stdout.write(_json_text(documents[0] if not many else documents))
    return status


HANDLERS = {
    "fd": cmd_fd,
    "matrix": cmd_matrix,
    "exact-sin": cmd_exact_sin,
    "error-sweep": cmd_error_sweep,
    "gamma": cmd_gamma,
    "solve-pfocp": cmd_solve_pfocp,
}


def _alpha_list(text: str) -> tuple[float, ...]:
    items = [s.strip() for s in text.split(",") if s.strip()]
    try:
        return tuple(float(s) for s in items)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated list of numbers: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fgps", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--n", type=int, default=None, help="number of Fourier nodes (even)")
    parser.add_argument("--ng", type=int, default=None, dest="n_g", help="Gegenbauer parameter N_G (N_G + 1 nodes)")
    parser.add_argument("--alpha", type=float, default=0.5)
    parser.add_argument("--memory-length", type=float, default=30.0)
    parser.add_argument("--lambda", type=float, default=0.0, dest="lambda_index")
    parser.add_argument("--period", type=float, default=None)
    parser.add_argument("--out", default=None, dest="output_path")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--samples", type=int, default=100, dest="sample_count")
    parser.add_argument("--alpha-grid", type=_alpha_list, default=None)
    parser.add_argument("--problem", default=None, dest="problem_path", help="polynomial problem spec (JSON)")
    parser.add_argument("--max-iter", type=int, default=5000)
    parser.add_argument("--feas-tol", type=float, default=1e-8, dest="feasibility_tol")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = vars(args).copy()
    defaults = _DEFAULTS[args.command]
    for key in ("n", "n_g"):
        if values[key] is None:
            values[key] = defaults[key]
    return RunConfig(**values)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE

    try:
        config = config_from_args(args)
        config.validate()
    except DomainError as exc:
        print(f"fgps: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        return HANDLERS[config.command](config)
    except DomainError as exc:
        print(f"fgps: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, FloatingPointError, OverflowError) as exc:
        print(f"fgps: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
