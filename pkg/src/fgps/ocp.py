r"""Periodic fractional optimal control by Fourier-Gegenbauer collocation.

The problem

.. math::

    \min \frac{1}{T}\int_0^T g(x, u, t)\,dt \quad\text{s.t.}\quad
    D^\alpha x = f(x, u, t),\; c(x, u, t) \le 0,

with :math:`T`-periodic states and controls, is collocated at the ``N`` grid
nodes. The objective becomes the node mean of ``g``, the dynamics become
``scale * Q x_i - f_i = 0`` for each state component, and the result is a
finite dimensional NLP in ``X = [x_1; ...; x_nx; u_1; ...; u_nu]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exceptions import DomainError
from .fourier import PeriodicGrid, interpolate
from .fracdiff import FgpsOperator, toeplitz_matvec
from .nlp import AlmOutcome, SolverOptions, augmented_lagrangian

#: period of the benchmark problem
BENCHMARK_PERIOD = 4.431736

#: below this sup-norm a solution counts as the trivial static one
STATIC_THRESHOLD = 1e-6

_FD_STEP = 1e-6


@dataclass(frozen=True, kw_only=True)
class PfocpProblem:
    """Periodic fractional optimal control problem.

    Callables are vectorized over nodes: ``x`` has shape ``(N, n_x)``, ``u``
    shape ``(N, n_u)`` and ``t`` shape ``(N,)``. ``running_cost`` returns
    ``(N,)``, ``dynamics`` ``(N, n_x)`` and ``inequalities`` ``(N, n_c)``.

    The optional derivative callables return, per node,

    * ``running_cost_grad``: ``(g_x, g_u)`` of shapes ``(N, n_x)``, ``(N, n_u)``
    * ``dynamics_jac``: ``(f_x, f_u)`` of shapes ``(N, n_x, n_x)``, ``(N, n_x, n_u)``
    * ``inequalities_jac``: ``(c_x, c_u)`` of shapes ``(N, n_c, n_x)``, ``(N, n_c, n_u)``

    and central differences are used for any that are missing.
    """

    n_x: int
    n_u: int
    period: float
    alpha: float
    memory_length: float
    running_cost: Callable
    dynamics: Callable
    n_c: int = 0
    inequalities: Callable | None = None
    running_cost_grad: Callable | None = None
    dynamics_jac: Callable | None = None
    inequalities_jac: Callable | None = None
    name: str = ""

    def __post_init__(self):
        if self.n_x < 1 or self.n_u < 0 or self.n_c < 0:
            raise DomainError("need n_x >= 1, n_u >= 0 and n_c >= 0")
        if not self.period > 0:
            raise DomainError(f"period must be positive, got {self.period}")
        if (self.n_c > 0) != (self.inequalities is not None):
            raise DomainError("inequalities must be given exactly when n_c > 0")


def benchmark_problem(
    alpha: float,
    memory_length: float = 30.0,
    period: float = BENCHMARK_PERIOD,
) -> PfocpProblem:
    """Two-state periodic benchmark with analytic derivatives.

    ``g = x1^2/2 + x2^4/4 - x2^2/2 + 0.12375 u^2`` and ``f = (x2, u)``.
    """

    def cost(x, u, t):
        x1, x2 = x[:, 0], x[:, 1]
        return 0.5 * x1**2 + 0.25 * x2**4 - 0.5 * x2**2 + 0.12375 * u[:, 0] ** 2

    def cost_grad(x, u, t):
        x1, x2 = x[:, 0], x[:, 1]
        return np.column_stack([x1, x2**3 - x2]), 0.2475 * u

    def dynamics(x, u, t):
        return np.column_stack([x[:, 1], u[:, 0]])

    def dynamics_jac(x, u, t):
        n = x.shape[0]
        f_x = np.zeros((n, 2, 2))
        f_x[:, 0, 1] = 1.0
        f_u = np.zeros((n, 2, 1))
        f_u[:, 1, 0] = 1.0
        return f_x, f_u

    return PfocpProblem(
        n_x=2,
        n_u=1,
        period=period,
        alpha=alpha,
        memory_length=memory_length,
        running_cost=cost,
        dynamics=dynamics,
        running_cost_grad=cost_grad,
        dynamics_jac=dynamics_jac,
        name="benchmark",
    )


@dataclass(frozen=True)
class Polynomial:
    """Sum of monomials ``coef * prod x_i^a_i * prod u_k^b_k * t^e``."""

    coefs: np.ndarray
    x_powers: np.ndarray
    u_powers: np.ndarray
    t_powers: np.ndarray

    @classmethod
    def from_terms(cls, terms, n_x: int, n_u: int) -> "Polynomial":
        coefs, xp, up, tp = [], [], [], []
        for term in terms:
            if not isinstance(term, dict) or "coef" not in term:
                raise DomainError(f"monomial must be an object with a 'coef' entry, got {term!r}")
            unknown = set(term) - {"coef", "x", "u", "t"}
            if unknown:
                raise DomainError(f"unknown monomial keys {sorted(unknown)}")
            x = list(term.get("x", [0] * n_x))
            u = list(term.get("u", [0] * n_u))
            e = term.get("t", 0)
            if len(x) != n_x or len(u) != n_u:
                raise DomainError(f"monomial exponents must have lengths {n_x} and {n_u}")
            for p in x + u + [e]:
                if not isinstance(p, int) or isinstance(p, bool) or p < 0:
                    raise DomainError(f"exponents must be non-negative integers, got {p!r}")
            coef = term["coef"]
            if not isinstance(coef, (int, float)) or isinstance(coef, bool) or not math.isfinite(coef):
                raise DomainError(f"coefficient must be a finite number, got {coef!r}")
            coefs.append(float(coef))
            xp.append(x)
            up.append(u)
            tp.append(e)
        m = len(coefs)
        return cls(
            np.array(coefs, dtype=float),
            np.array(xp, dtype=int).reshape(m, n_x),
            np.array(up, dtype=int).reshape(m, n_u),
            np.array(tp, dtype=int).reshape(m),
        )

    def _monomials(self, x, u, t, dx=None, du=None):
        # (N, m) monomial values, optionally differentiated once in one variable
        xp = self.x_powers.copy()
        up = self.u_powers.copy()
        factor = np.ones(len(self.coefs))
        if dx is not None:
            factor = xp[:, dx].astype(float)
            xp[:, dx] = np.maximum(xp[:, dx] - 1, 0)
        if du is not None:
            factor = up[:, du].astype(float)
            up[:, du] = np.maximum(up[:, du] - 1, 0)
        out = np.ones((x.shape[0], len(self.coefs)))
        for i in range(xp.shape[1]):
            out *= x[:, i : i + 1] ** xp[:, i]
        for k in range(up.shape[1]):
            out *= u[:, k : k + 1] ** up[:, k]
        out *= t[:, None] ** self.t_powers
        return out * factor

    def __call__(self, x, u, t):
        return self._monomials(x, u, t) @ self.coefs

    def grad(self, x, u, t):
        g_x = np.column_stack([self._monomials(x, u, t, dx=i) @ self.coefs for i in range(x.shape[1])])
        g_u = np.zeros((x.shape[0], u.shape[1]))
        for k in range(u.shape[1]):
            g_u[:, k] = self._monomials(x, u, t, du=k) @ self.coefs
        return g_x, g_u


def _stack_polys(polys):
    def value(x, u, t):
        return np.column_stack([p(x, u, t) for p in polys])

    def jac(x, u, t):
        grads = [p.grad(x, u, t) for p in polys]
        return np.stack([g[0] for g in grads], axis=1), np.stack([g[1] for g in grads], axis=1)

    return value, jac


def problem_from_spec(spec: dict, alpha: float, memory_length: float, period: float | None = None) -> PfocpProblem:
    """Build a polynomial problem from a parsed JSON document.

    The document has ``schema_version`` 1, integer ``n_x`` and ``n_u``,
    optional ``period``, ``running_cost`` (a list of monomials),
    ``dynamics`` (one monomial list per state) and optional ``inequalities``
    (one list per constraint). A monomial is
    ``{"coef": c, "x": [exponents], "u": [exponents], "t": e}``.
    """
    if not isinstance(spec, dict):
        raise DomainError("problem spec must be a JSON object")
    if spec.get("schema_version") != 1:
        raise DomainError(f"unsupported schema_version {spec.get('schema_version')!r}")
    try:
        n_x, n_u = spec["n_x"], spec["n_u"]
        cost_terms, dyn_terms = spec["running_cost"], spec["dynamics"]
    except KeyError as exc:
        raise DomainError(f"problem spec lacks {exc.args[0]!r}") from None
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in (n_x, n_u)):
        raise DomainError("n_x and n_u must be integers")
    if not isinstance(dyn_terms, list) or len(dyn_terms) != n_x:
        raise DomainError(f"dynamics must list {n_x} right-hand sides")
    ineq_terms = spec.get("inequalities", [])
    if not isinstance(ineq_terms, list):
        raise DomainError("inequalities must be a list")
    if period is None:
        period = float(spec.get("period", 2.0 * math.pi))

    cost = Polynomial.from_terms(cost_terms, n_x, n_u)
    dynamics, dynamics_jac = _stack_polys([Polynomial.from_terms(f, n_x, n_u) for f in dyn_terms])
    ineq, ineq_jac = None, None
    if ineq_terms:
        ineq, ineq_jac = _stack_polys([Polynomial.from_terms(c, n_x, n_u) for c in ineq_terms])

    return PfocpProblem(
        n_x=n_x,
        n_u=n_u,
        period=period,
        alpha=alpha,
        memory_length=memory_length,
        running_cost=cost,
        dynamics=dynamics,
        n_c=len(ineq_terms),
        inequalities=ineq,
        running_cost_grad=cost.grad,
        dynamics_jac=dynamics_jac,
        inequalities_jac=ineq_jac,
        name=str(spec.get("name", "")),
    )


@dataclass(frozen=True)
class VariableLayout:
    """Block layout ``[x_1; ...; x_nx; u_1; ...; u_nu]`` of node values."""

    n: int
    n_x: int
    n_u: int

    @property
    def size(self) -> int:
        return self.n * (self.n_x + self.n_u)

    def state(self, i: int) -> slice:
        return slice(i * self.n, (i + 1) * self.n)

    def control(self, k: int) -> slice:
        return slice((self.n_x + k) * self.n, (self.n_x + k + 1) * self.n)

    def split(self, X) -> tuple[np.ndarray, np.ndarray]:
        """``(states, controls)`` with shapes ``(N, n_x)`` and ``(N, n_u)``."""
        X = np.asarray(X, dtype=float)
        if X.shape != (self.size,):
            raise DomainError(f"decision vector must have {self.size} entries, got {X.shape}")
        blocks = X.reshape(self.n_x + self.n_u, self.n).T
        return blocks[:, : self.n_x], blocks[:, self.n_x :]

    def pack(self, states, controls) -> np.ndarray:
        states = np.asarray(states, dtype=float).reshape(self.n, self.n_x)
        controls = np.asarray(controls, dtype=float).reshape(self.n, self.n_u)
        return np.concatenate([states.T.reshape(-1), controls.T.reshape(-1)])


def _node_fd(fun, x, u, t):
    """Per-node central differences; every node is perturbed at once since nodes decouple."""
    base = np.asarray(fun(x, u, t))
    d_x = np.zeros(base.shape + (x.shape[1],))
    d_u = np.zeros(base.shape + (u.shape[1],))
    for arr, out in ((x, d_x), (u, d_u)):
        for i in range(arr.shape[1]):
            h = _FD_STEP * (1.0 + np.abs(arr[:, i]))
            plus, minus = arr.copy(), arr.copy()
            plus[:, i] += h
            minus[:, i] -= h
            if arr is x:
                diff = np.asarray(fun(plus, u, t)) - np.asarray(fun(minus, u, t))
            else:
                diff = np.asarray(fun(x, plus, t)) - np.asarray(fun(x, minus, t))
            step = 2.0 * h if diff.ndim == 1 else 2.0 * h[:, None]
            out[..., i] = diff / step
    return d_x, d_u


@dataclass(frozen=True, eq=False)
class DiscreteNlp:
    """Collocated form of a :class:`PfocpProblem` on one grid and operator."""

    problem: PfocpProblem
    operator: FgpsOperator
    layout: VariableLayout
    nodes: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.layout.size

    @property
    def n_eq(self) -> int:
        return self.layout.n * self.problem.n_x

    @property
    def n_ineq(self) -> int:
        return self.layout.n * self.problem.n_c

    def objective(self, X) -> float:
        x, u = self.layout.split(X)
        return math.fsum(self.problem.running_cost(x, u, self.nodes)) / self.layout.n

    def objective_grad(self, X) -> np.ndarray:
        x, u = self.layout.split(X)
        if self.problem.running_cost_grad is not None:
            g_x, g_u = self.problem.running_cost_grad(x, u, self.nodes)
        else:
            g_x, g_u = _node_fd(self.problem.running_cost, x, u, self.nodes)
        return self.layout.pack(g_x, g_u) / self.layout.n

    def _dynamics(self, x, u):
        f = np.asarray(self.problem.dynamics(x, u, self.nodes), dtype=float)
        if f.shape != (self.layout.n, self.problem.n_x):
            raise DomainError(f"dynamics returned shape {f.shape}, expected {(self.layout.n, self.problem.n_x)}")
        return f

    def residuals(self, X) -> np.ndarray:
        """Dynamics residuals ``scale * Q x_i - f_i`` stacked state by state."""
        x, u = self.layout.split(X)
        op = self.operator
        dx = op.scale * toeplitz_matvec(op.diagonals, x)
        return (dx - self._dynamics(x, u)).T.reshape(-1)

    def residuals_dense(self, X) -> np.ndarray:
        """Same as :meth:`residuals` through the dense matrix (reference path)."""
        x, u = self.layout.split(X)
        dx = self.operator.derivative_matrix() @ x
        return (dx - self._dynamics(x, u)).T.reshape(-1)

    def residual_jac(self, X) -> np.ndarray:
        x, u = self.layout.split(X)
        n, n_x = self.layout.n, self.problem.n_x
        if self.problem.dynamics_jac is not None:
            f_x, f_u = self.problem.dynamics_jac(x, u, self.nodes)
        else:
            f_x, f_u = _node_fd(self.problem.dynamics, x, u, self.nodes)

        jac = np.zeros((self.n_eq, self.size))
        dmat = self.operator.derivative_matrix()
        rows = np.arange(n)
        for i in range(n_x):
            block = slice(i * n, (i + 1) * n)
            jac[block, self.layout.state(i)] += dmat
            for m in range(n_x):
                jac[i * n + rows, m * n + rows] -= f_x[:, i, m]
            for k in range(self.problem.n_u):
                jac[i * n + rows, (n_x + k) * n + rows] -= f_u[:, i, k]
        return jac

    def inequalities(self, X) -> np.ndarray:
        """Inequality values ``c_k`` at the nodes, stacked constraint by constraint."""
        if self.problem.n_c == 0:
            return np.zeros(0)
        x, u = self.layout.split(X)
        c = np.asarray(self.problem.inequalities(x, u, self.nodes), dtype=float)
        if c.shape != (self.layout.n, self.problem.n_c):
            raise DomainError(f"inequalities returned shape {c.shape}, expected {(self.layout.n, self.problem.n_c)}")
        return c.T.reshape(-1)

    def inequality_jac(self, X) -> np.ndarray:
        n_c = self.problem.n_c
        if n_c == 0:
            return np.zeros((0, self.size))
        x, u = self.layout.split(X)
        if self.problem.inequalities_jac is not None:
            c_x, c_u = self.problem.inequalities_jac(x, u, self.nodes)
        else:
            c_x, c_u = _node_fd(self.problem.inequalities, x, u, self.nodes)

        n, n_x = self.layout.n, self.problem.n_x
        jac = np.zeros((self.n_ineq, self.size))
        rows = np.arange(n)
        for q in range(n_c):
            for m in range(n_x):
                jac[q * n + rows, m * n + rows] = c_x[:, q, m]
            for k in range(self.problem.n_u):
                jac[q * n + rows, (n_x + k) * n + rows] = c_u[:, q, k]
        return jac


def discretize(problem: PfocpProblem, grid: PeriodicGrid, operator: FgpsOperator) -> DiscreteNlp:
    """Collocate ``problem`` at the nodes of ``grid`` using ``operator``."""
    if operator.grid.n != grid.n or not math.isclose(operator.grid.period, grid.period, rel_tol=1e-14):
        raise DomainError("operator and grid disagree")
    if not math.isclose(grid.period, problem.period, rel_tol=1e-14):
        raise DomainError(f"grid period {grid.period} differs from problem period {problem.period}")
    if operator.alpha != problem.alpha or operator.memory_length != problem.memory_length:
        raise DomainError("operator order or memory length differs from the problem")

    nlp = DiscreteNlp(problem, operator, VariableLayout(grid.n, problem.n_x, problem.n_u), grid.nodes)
    # probe once so that shape errors surface here rather than inside the solver
    probe = np.zeros(nlp.size)
    nlp.residuals(probe)
    nlp.inequalities(probe)
    cost = np.asarray(problem.running_cost(*nlp.layout.split(probe), grid.nodes))
    if cost.shape != (grid.n,):
        raise DomainError(f"running cost returned shape {cost.shape}, expected {(grid.n,)}")
    return nlp


@dataclass(frozen=True)
class NlpResult:
    """Collocated solution with its feasibility errors."""

    states: np.ndarray
    controls: np.ndarray
    objective: float
    adfe: np.ndarray
    iterations: int
    converged: bool
    stop_reason: str
    escapes: int = 0

    @property
    def collapsed(self) -> bool:
        """True when the solution is the trivial static one."""
        sup = max(np.max(np.abs(self.states), initial=0.0), np.max(np.abs(self.controls), initial=0.0))
        return bool(sup < STATIC_THRESHOLD)


def adfe(result: NlpResult, operator: FgpsOperator, problem: PfocpProblem) -> np.ndarray:
    """Absolute discrete feasibility error ``|D x - f|`` at the nodes, shape ``(N, n_x)``."""
    states = np.asarray(result.states, dtype=float)
    controls = np.asarray(result.controls, dtype=float)
    if states.shape != (operator.n, problem.n_x) or controls.shape != (operator.n, problem.n_u):
        raise DomainError("result dimensions do not match the operator and problem")
    dx = operator.derivative_matrix() @ states
    f = np.asarray(problem.dynamics(states, controls, operator.grid.nodes), dtype=float)
    return np.abs(dx - f)


def solve(nlp: DiscreteNlp, initial_guess=None, options: SolverOptions | None = None) -> NlpResult:
    """Solve the collocated problem; the default start has every entry equal to 10."""
    options = options or SolverOptions()
    if initial_guess is None:
        x0 = np.full(nlp.size, 10.0)
    else:
        x0 = np.asarray(initial_guess, dtype=float)
        if x0.shape != (nlp.size,):
            raise DomainError(f"initial guess must have {nlp.size} entries, got {x0.shape}")

    outcome: AlmOutcome = augmented_lagrangian(nlp, x0, options)
    states, controls = nlp.layout.split(outcome.x)
    states, controls = states.copy(), controls.copy()
    partial = NlpResult(states, controls, outcome.objective, np.zeros_like(states), 0, False, "")
    errors = adfe(partial, nlp.operator, nlp.problem)
    return NlpResult(
        states=states,
        controls=controls,
        objective=outcome.objective,
        adfe=errors,
        iterations=outcome.iterations,
        converged=bool(outcome.converged),
        stop_reason=outcome.stop_reason,
        escapes=outcome.escapes,
    )


def reconstruct(result: NlpResult, grid: PeriodicGrid, t):
    """State and control trajectories at ``t`` through the Fourier interpolant."""
    return interpolate(grid, result.states, t), interpolate(grid, result.controls, t)


def result_to_dict(result: NlpResult, nlp: DiscreteNlp, parameters: dict | None = None) -> dict:
    """JSON-ready document describing a solve."""
    return {
        "schema_version": 1,
        "parameters": dict(parameters or {}),
        "objective": float(result.objective),
        "iterations": int(result.iterations),
        "converged": bool(result.converged),
        "stop_reason": result.stop_reason,
        "collapsed_to_static": result.collapsed,
        "max_adfe": float(np.max(result.adfe)),
        "nodes": nlp.nodes.tolist(),
        "states": result.states.T.tolist(),
        "controls": result.controls.T.tolist(),
        "adfe": result.adfe.T.tolist(),
    }


def trajectory_table(result: NlpResult, grid: PeriodicGrid, samples: int = 100):
    """Header and rows ``(t, x_1.., u_1..)`` at ``samples`` points of ``[0, T]``."""
    if samples < 1:
        raise DomainError(f"need at least one sample, got {samples}")
    t = np.linspace(0.0, grid.period, samples)
    x, u = reconstruct(result, grid, t)
    header = ["t"] + [f"x_{i + 1}" for i in range(x.shape[1])] + [f"u_{k + 1}" for k in range(u.shape[1])]
    return header, np.column_stack([t, x, u])
