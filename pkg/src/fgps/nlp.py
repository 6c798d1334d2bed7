"""Augmented Lagrangian solver with a BFGS inner minimizer.

Works on any object exposing ``size``, ``objective``, ``objective_grad``,
``residuals``, ``residual_jac``, ``inequalities`` and ``inequality_jac``.
Inequalities ``c <= 0`` become equalities ``c + s^2 = 0`` in extra slack
variables ``s`` appended to the decision vector.

After the first-order iteration settles, the reduced Hessian of the
Lagrangian on the null space of the constraint Jacobian is checked. If it
has a clearly negative eigenvalue the point is a saddle, and the iterate is
pushed along that direction before the iteration resumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg


@dataclass(frozen=True)
class SolverOptions:
    """Tolerances and limits of :func:`augmented_lagrangian`.

    ``max_iter`` caps the total number of BFGS iterations. ``step_tol`` and
    ``objective_tol`` are the two stopping rules, applied between successive
    outer iterates once the residual is below ``feasibility_tol``.
    """

    max_iter: int = 5000
    feasibility_tol: float = 1e-8
    step_tol: float = 1e-15
    objective_tol: float = 1e-15
    gradient_tol: float = 1e-12
    rho0: float = 10.0
    rho_growth: float = 10.0
    residual_shrink: float = 4.0
    rho_max: float = 1e12
    second_order: bool = True
    curvature_tol: float = 1e-8
    max_escapes: int = 20


@dataclass(frozen=True)
class AlmOutcome:
    x: np.ndarray
    objective: float
    residual_norm: float
    multipliers: np.ndarray
    iterations: int
    converged: bool
    stop_reason: str
    escapes: int


class _SlackForm:
    """Equality-only view of a problem with squared slacks for inequalities."""

    def __init__(self, nlp):
        self.nlp = nlp
        self.n = nlp.size
        self.p = len(nlp.inequalities(np.zeros(nlp.size)))
        self.size = self.n + self.p

    def objective(self, z):
        return self.nlp.objective(z[: self.n])

    def objective_grad(self, z):
        return np.concatenate([self.nlp.objective_grad(z[: self.n]), np.zeros(self.p)])

    def constraints(self, z):
        x, s = z[: self.n], z[self.n :]
        r = self.nlp.residuals(x)
        if self.p:
            r = np.concatenate([r, self.nlp.inequalities(x) + s * s])
        return r

    def jacobian(self, z):
        x, s = z[: self.n], z[self.n :]
        jac = self.nlp.residual_jac(x)
        if self.p:
            jac = np.hstack([jac, np.zeros((jac.shape[0], self.p))])
            ineq = np.hstack([self.nlp.inequality_jac(x), np.diag(2.0 * s)])
            jac = np.vstack([jac, ineq])
        return jac


def _merit(form, z, lam, rho):
    r = form.constraints(z)
    return form.objective(z) + lam @ r + 0.5 * rho * (r @ r)


def _merit_grad(form, z, lam, rho):
    r = form.constraints(z)
    return form.objective_grad(z) + form.jacobian(z).T @ (lam + rho * r)


def _lagrangian_grad(form, z, lam):
    return form.objective_grad(z) + form.jacobian(z).T @ lam


def _bfgs(form, z, lam, rho, options, budget):
    """Minimize the augmented Lagrangian from ``z``; returns ``(z, iterations)``."""
    f = _merit(form, z, lam, rho)
    g = _merit_grad(form, z, lam, rho)
    h = np.eye(z.size)
    first = True

    for it in range(budget):
        if np.max(np.abs(g), initial=0.0) <= options.gradient_tol:
            return z, it

        d = -h @ g
        slope = g @ d
        if slope >= 0:
            # lost descent; restart from steepest descent
            h = np.eye(z.size)
            d, slope = -g, -(g @ g)

        t = 1.0
        while True:
            z_new = z + t * d
            f_new = _merit(form, z_new, lam, rho)
            if f_new <= f + 1e-4 * t * slope:
                break
            t *= 0.5
            if t < 1e-20:
                return z, it

        g_new = _merit_grad(form, z_new, lam, rho)
        s, y = z_new - z, g_new - g
        z, f, g = z_new, f_new, g_new
        if np.linalg.norm(s) < options.step_tol:
            return z, it + 1

        sy = s @ y
        if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            if first:
                h = (sy / (y @ y)) * np.eye(z.size)
                first = False
            rho_k = 1.0 / sy
            hy = h @ y
            h = h + ((sy + y @ hy) * rho_k**2) * np.outer(s, s) - rho_k * (np.outer(hy, s) + np.outer(s, hy))
    return z, budget


def _negative_curvature(form, z, lam, options):
    """Unit direction of negative reduced curvature and its eigenvalue, or ``None``."""
    jac = form.jacobian(z)
    basis = linalg.null_space(jac) if jac.shape[0] else np.eye(form.size)
    if basis.shape[1] == 0:
        return None

    h = 1e-5 * (1.0 + np.linalg.norm(z) / math.sqrt(z.size))
    cols = []
    for v in basis.T:
        cols.append((_lagrangian_grad(form, z + h * v, lam) - _lagrangian_grad(form, z - h * v, lam)) / (2 * h))
    reduced = basis.T @ np.array(cols).T
    reduced = 0.5 * (reduced + reduced.T)

    values, vectors = np.linalg.eigh(reduced)
    scale = max(1.0, np.max(np.abs(values)))
    if values[0] >= -options.curvature_tol * scale:
        return None
    return basis @ vectors[:, 0], values[0]


def _escape(form, z, lam, rho, direction, curvature):
    """Backtracking step along a negative curvature direction; ``None`` if no decrease."""
    f0 = _merit(form, z, lam, rho)
    t = 1.0
    while t > 1e-8:
        for sign in (1.0, -1.0):
            z_new = z + sign * t * direction
            if _merit(form, z_new, lam, rho) <= f0 + 0.25 * t * t * curvature:
                return z_new
        t *= 0.5
    return None


def augmented_lagrangian(nlp, x0, options: SolverOptions | None = None) -> AlmOutcome:
    """Minimize ``nlp.objective`` subject to its residuals and inequalities."""
    options = options or SolverOptions()
    form = _SlackForm(nlp)
    x0 = np.asarray(x0, dtype=float)
    if form.p:
        # s = 0 is stationary in s, so a violated start must not pin the slack there
        slack = np.sqrt(np.maximum(-nlp.inequalities(x0), 1.0))
        z = np.concatenate([x0, slack])
    else:
        z = x0.copy()

    lam = np.zeros(len(form.constraints(z)))
    rho = options.rho0
    previous_norm = math.inf
    objective = form.objective(z)
    iterations = 0
    escapes = 0
    stop_reason = "max_iter"
    converged = False

    while iterations < options.max_iter:
        z_new, used = _bfgs(form, z, lam, rho, options, options.max_iter - iterations)
        iterations += used
        r = form.constraints(z_new)
        norm = np.max(np.abs(r), initial=0.0)
        objective_new = form.objective(z_new)
        step = np.linalg.norm(z_new - z)
        change = abs(objective_new - objective)
        z, objective = z_new, objective_new

        if norm <= options.feasibility_tol and (step < options.step_tol or change < options.objective_tol):
            found = None
            if options.second_order and escapes < options.max_escapes:
                found = _negative_curvature(form, z, lam, options)
            if found is not None:
                z_esc = _escape(form, z, lam, rho, *found)
                if z_esc is not None:
                    escapes += 1
                    z, objective = z_esc, form.objective(z_esc)
                    continue
            stop_reason = "step_tol" if step < options.step_tol else "objective_tol"
            converged = True
            break

        lam = lam + rho * r
        if norm > previous_norm / options.residual_shrink:
            rho = min(rho * options.rho_growth, options.rho_max)
        previous_norm = norm

    return AlmOutcome(
        x=z[: form.n].copy(),
        objective=form.objective(z),
        residual_norm=float(np.max(np.abs(form.constraints(z)), initial=0.0)),
        multipliers=lam,
        iterations=iterations,
        converged=converged,
        stop_reason=stop_reason,
        escapes=escapes,
    )
