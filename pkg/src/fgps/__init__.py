"""Fourier-Gegenbauer pseudospectral periodic fractional derivatives and optimal control."""

from .errors import ErrorBoundInputs, bound_estimate, falling_factorial, gamma_factor, psi
from .exceptions import DomainError, NumericError
from .fourier import PeriodicGrid, cardinal_derivative, cardinal_eval, interpolate
from .fracdiff import FgpsOperator, apply, apply_at, build_operator
from .nlp import SolverOptions, augmented_lagrangian
from .ocp import (
    BENCHMARK_PERIOD,
    NlpResult,
    PfocpProblem,
    adfe,
    benchmark_problem,
    discretize,
    problem_from_spec,
    reconstruct,
    solve,
)
from .gegenbauer import GegenbauerRule, gegenbauer_rule, gg_nodes, integration_vector
from .reference import exact_sin_fd, mittag_leffler, quadrature_fd

__all__ = [
    "BENCHMARK_PERIOD",
    "NlpResult",
    "PfocpProblem",
    "SolverOptions",
    "adfe",
    "augmented_lagrangian",
    "benchmark_problem",
    "discretize",
    "problem_from_spec",
    "reconstruct",
    "solve",
    "DomainError",
    "ErrorBoundInputs",
    "FgpsOperator",
    "GegenbauerRule",
    "NumericError",
    "PeriodicGrid",
    "apply",
    "apply_at",
    "bound_estimate",
    "build_operator",
    "cardinal_derivative",
    "cardinal_eval",
    "exact_sin_fd",
    "falling_factorial",
    "gamma_factor",
    "gegenbauer_rule",
    "gg_nodes",
    "integration_vector",
    "interpolate",
    "mittag_leffler",
    "psi",
    "quadrature_fd",
]
