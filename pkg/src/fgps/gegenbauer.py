r"""Gegenbauer-Gauss nodes and interpolatory integration weights.

The polynomials are evaluated in the Jacobi normalization
:math:`P_n^{(\lambda - 1/2, \lambda - 1/2)}`, which stays well defined at
:math:`\lambda = 0` (where the classical :math:`C_n^{(0)}` vanishes identically).
Only the zeros of the polynomials and interpolatory weights are consumed
downstream, so the normalization is immaterial to every caller.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, NumericError

_NEWTON_MAXITER = 100


def _check_lambda(lam: float) -> None:
    if not lam > -0.5:
        raise DomainError(f"Gegenbauer index must exceed -1/2, got {lam}")


def _recurrence(lam: float, degree: int, x: np.ndarray):
    """Return ``(P_n(x), P_{n-1}(x))`` by the symmetric Jacobi three-term recurrence."""
    a = lam - 0.5
    p_prev = np.ones_like(x)
    if degree == 0:
        return p_prev, np.zeros_like(x)

    p = (a + 1.0) * x
    for n in range(2, degree + 1):
        c = 2.0 * n + 2.0 * a
        a1 = 2.0 * n * (n + 2.0 * a) * (c - 2.0)
        a2 = (c - 1.0) * c * (c - 2.0)
        a3 = 2.0 * (n + a - 1.0) ** 2 * c
        p_prev, p = p, (a2 * x * p - a3 * p_prev) / a1
    return p, p_prev


def _poly_and_derivative(lam: float, degree: int, x: np.ndarray):
    # interior points only: (1 - x^2) P_n' = -n x P_n + (n + a) P_{n-1}
    p, p_prev = _recurrence(lam, degree, x)
    dp = (-degree * x * p + (degree + lam - 0.5) * p_prev) / (1.0 - x * x)
    return p, dp


def gegenbauer_poly_eval(lam: float, degree: int, x):
    r"""Evaluate the degree-``degree`` Gegenbauer polynomial of index ``lam`` at ``x``.

    The Jacobi normalization :math:`P_n^{(\lambda-1/2,\lambda-1/2)}` is used, so
    ``lam = 1/2`` gives the Legendre polynomials and ``lam = 0`` a multiple of the
    Chebyshev polynomials of the first kind.
    """
    _check_lambda(lam)
    if degree < 0:
        raise DomainError(f"degree must be non-negative, got {degree}")

    x = np.asarray(x, dtype=float)
    p, _ = _recurrence(lam, degree, x)
    return p if p.ndim else float(p)


def _newton_roots(lam: float, npoints: int) -> np.ndarray:
    # asymptotic angles; exact for lam = 0 and lam = 1
    k = np.arange(1, npoints + 1)
    theta = (k + 0.5 * lam - 0.5) * np.pi / (npoints + lam)
    x = np.cos(theta)[::-1].copy()

    converged = np.zeros(npoints, dtype=bool)
    for _ in range(_NEWTON_MAXITER):
        p, dp = _poly_and_derivative(lam, npoints, x)
        dx = p / dp
        x -= dx
        done = np.abs(dx) <= 4.0 * np.finfo(float).eps * np.maximum(1.0, np.abs(x))
        if np.all(converged | done):
            # one polishing step after the last update
            p, dp = _poly_and_derivative(lam, npoints, x)
            x -= p / dp
            break
        converged |= done
    else:
        index = int(np.flatnonzero(~converged)[0])
        raise NumericError(
            f"Newton iteration for Gegenbauer zeros did not converge "
            f"(lambda={lam}, n={npoints}) at index {index}",
            index=index,
        )

    return x


def gg_nodes(lam: float, n_g: int) -> np.ndarray:
    """Zeros of the degree ``n_g + 1`` Gegenbauer polynomial, sorted ascending."""
    _check_lambda(lam)
    if n_g < 0:
        raise DomainError(f"n_g must be non-negative, got {n_g}")

    npoints = n_g + 1
    if lam == 0:
        j = np.arange(npoints)
        x = -np.cos((2 * j + 1) * np.pi / (2 * npoints))
    else:
        x = _newton_roots(lam, npoints)

    if np.any(np.diff(x) <= 0) or np.any(np.abs(x) >= 1):
        raise NumericError(f"Gegenbauer zeros are not distinct (lambda={lam}, n={npoints})")

    # enforce the exact reflection symmetry of the zero set
    x = 0.5 * (x - x[::-1])
    return x


@functools.lru_cache(maxsize=32)
def _gauss_legendre_cached(npoints: int) -> tuple[np.ndarray, np.ndarray]:
    x = gg_nodes(0.5, npoints - 1)
    _, dp = _poly_and_derivative(0.5, npoints, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(npoints: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on :math:`[-1, 1]`."""
    if npoints < 1:
        raise DomainError(f"need at least one point, got {npoints}")
    return _gauss_legendre_cached(npoints)


def barycentric_weights(nodes: np.ndarray) -> np.ndarray:
    """Barycentric interpolation weights, rescaled to unit maximum modulus.

    The products are accumulated as logarithms so that a thousand nodes do not
    overflow.
    """
    nodes = np.asarray(nodes, dtype=float)
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    if np.any(diff == 0):
        raise DomainError("interpolation nodes must be distinct")

    logw = -np.sum(np.log(np.abs(diff)), axis=1)
    sign = np.prod(np.sign(diff), axis=1)
    return sign * np.exp(logw - logw.max())


def lagrange_matrix(nodes: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Matrix ``M[q, j] = l_j(x_q)`` of Lagrange basis values at points ``x``."""
    nodes = np.asarray(nodes, dtype=float)
    x = np.asarray(x, dtype=float)
    w = barycentric_weights(nodes)

    diff = x[:, None] - nodes[None, :]
    exact = diff == 0
    diff[exact] = 1.0
    with np.errstate(over="ignore", invalid="ignore"):
        terms = w[None, :] / diff
        m = terms / np.sum(terms, axis=1, keepdims=True)

    # a point within rounding of a node (1/diff overflows) counts as that node
    close = ~np.all(np.isfinite(terms), axis=1) & ~np.any(exact, axis=1)
    if np.any(close):
        nearest = np.argmin(np.abs(x[close, None] - nodes[None, :]), axis=1)
        exact[np.flatnonzero(close), nearest] = True

    rows = np.any(exact, axis=1)
    m[rows] = exact[rows].astype(float)
    return m


def integration_vector(nodes) -> np.ndarray:
    """Interpolatory weights ``P`` for :math:`\\int_{-1}^{1} h(x)\\,dx`.

    ``P @ h(nodes)`` is the exact integral of the polynomial interpolant of
    ``h`` at ``nodes``. It is assembled by integrating each Lagrange basis
    polynomial with a Gauss-Legendre rule having as many points as ``nodes``,
    which is exact for their degree.
    """
    nodes = np.asarray(nodes, dtype=float)
    if nodes.ndim != 1 or nodes.size == 0:
        raise DomainError("nodes must be a non-empty 1d array")
    if np.unique(nodes).size != nodes.size:
        raise DomainError("nodes must be distinct")
    if np.any(np.abs(nodes) >= 1):
        raise DomainError("nodes must lie inside (-1, 1)")

    xq, wq = gauss_legendre(nodes.size)
    return wq @ lagrange_matrix(nodes, xq)


def leading_coefficient(lam: float, degree: int) -> float:
    r"""Leading coefficient :math:`K_l^{(\lambda)}` of the shifted Gegenbauer polynomial.

    .. math::

        K_l^{(\lambda)} = 2^{2l - 1}
            \frac{\Gamma(2\lambda + 1)\Gamma(l + \lambda)}
                 {\Gamma(\lambda + 1)\Gamma(l + 2\lambda)}.

    At ``lam = 0`` the analytic limit of the gamma ratio is used.
    """
    _check_lambda(lam)
    if degree < 0:
        raise DomainError(f"degree must be non-negative, got {degree}")

    l = degree
    if lam == 0:
        # Gamma(l + lam) / Gamma(l + 2 lam) -> 1 for l >= 1 and -> 2 for l = 0
        ratio = 2.0 if l == 0 else 1.0
        return math.ldexp(ratio, 2 * l - 1)

    args_num = (2 * lam + 1, l + lam)
    args_den = (lam + 1, l + 2 * lam)
    for arg in args_num + args_den:
        if arg <= 0 and arg == math.floor(arg):
            raise DomainError(f"gamma pole at argument {arg}")

    logval = (2 * l - 1) * math.log(2.0)
    sign = 1.0
    for arg in args_num:
        logval += math.lgamma(arg)
        sign *= math.copysign(1.0, math.gamma(arg)) if arg < 0 else 1.0
    for arg in args_den:
        logval -= math.lgamma(arg)
        sign *= math.copysign(1.0, math.gamma(arg)) if arg < 0 else 1.0
    return sign * math.exp(logval)


@dataclass(frozen=True, eq=False)
class GegenbauerRule:
    """Gegenbauer-Gauss nodes with their plain integration weights.

    ``n_g + 1`` nodes are stored; ``shifted_nodes`` are the nodes mapped to
    :math:`(0, 1)`.
    """

    lam: float
    n_g: int
    nodes: np.ndarray
    shifted_nodes: np.ndarray
    integration_vector: np.ndarray

    @property
    def size(self) -> int:
        return self.n_g + 1


@functools.lru_cache(maxsize=32)
def gegenbauer_rule(lam: float = 0.0, n_g: int = 1000) -> GegenbauerRule:
    """Build (and cache) the Gegenbauer-Gauss rule of index ``lam`` with ``n_g + 1`` nodes."""
    nodes = gg_nodes(lam, n_g)
    shifted = (nodes + 1.0) / 2.0
    weights = integration_vector(nodes)
    for arr in (nodes, shifted, weights):
        arr.setflags(write=False)
    return GegenbauerRule(lam, n_g, nodes, shifted, weights)
