r"""Trigonometric Lagrange interpolation on an equispaced periodic grid.

For an even number of nodes :math:`N` on :math:`[0, T)` the cardinal function
attached to node :math:`t_j = T j / N` is

.. math::

    F_j(t) = \frac{1}{N} {\sum_{|k| \le N/2}}' \cos(\omega_k (t - t_j))
           = \frac{1}{N} \sin(N \nu_j) \cot(\nu_j),
    \qquad \omega_k = 2 \pi k / T, \quad \nu_j = \pi (t - t_j) / T,

where the primed sum gives the two :math:`|k| = N/2` terms half weight.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError

_NEAR_NODE = 1.0e-8


@dataclass(frozen=True)
class PeriodicGrid:
    """``n`` equally spaced nodes ``T j / n`` on ``[0, period)``."""

    n: int
    period: float = 2.0 * np.pi
    nodes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n <= 0 or self.n % 2:
            raise DomainError(f"number of nodes must be a positive even integer, got {self.n}")
        if not self.period > 0:
            raise DomainError(f"period must be positive, got {self.period}")

        nodes = self.period * np.arange(self.n) / self.n
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @property
    def wavenumbers(self) -> np.ndarray:
        """Wavenumbers ``k = -N/2, ..., N/2``."""
        return np.arange(-self.n // 2, self.n // 2 + 1)

    @property
    def primed_weights(self) -> np.ndarray:
        """Weights of the primed sum over :attr:`wavenumbers` (1/2 at both ends)."""
        w = np.ones(self.n + 1)
        w[0] = w[-1] = 0.5
        return w

    def reduce(self, t):
        """Offset ``t - t_j`` reduced into ``[-T/2, T/2)`` for each node ``j``."""
        # reduce t once so that all offsets share the same rounding
        s = _wrap(self, np.asarray(t, dtype=float))[..., None] - self.nodes
        return s - self.period * np.floor(s / self.period + 0.5)


def _check_index(grid: PeriodicGrid, j: int) -> None:
    if not 0 <= j < grid.n:
        raise DomainError(f"node index {j} outside [0, {grid.n})")


def _wrap(grid: PeriodicGrid, t: np.ndarray) -> np.ndarray:
    return t - grid.period * np.floor(t / grid.period)


def _offset(grid: PeriodicGrid, j: int, t) -> np.ndarray:
    s = _wrap(grid, np.asarray(t, dtype=float)) - grid.nodes[j]
    return s - grid.period * np.floor(s / grid.period + 0.5)


def _cardinal_sum(grid: PeriodicGrid, s: np.ndarray) -> np.ndarray:
    omega = 2.0 * np.pi * grid.wavenumbers / grid.period
    return np.cos(s[..., None] * omega) @ grid.primed_weights / grid.n


def _cardinal_from_offset(grid: PeriodicGrid, s: np.ndarray) -> np.ndarray:
    nu = np.pi * s / grid.period
    near = np.abs(nu) < _NEAR_NODE
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.sin(grid.n * nu) / (grid.n * np.tan(nu))
    if np.any(near):
        val = np.where(near, _cardinal_sum(grid, np.where(near, s, 0.0)), val)
    return val


def _unwrap(value, t):
    return float(value) if np.ndim(t) == 0 else value


def cardinal_eval(grid: PeriodicGrid, j: int, t):
    """Value of the cardinal function :math:`F_j` at ``t`` (scalar or array)."""
    _check_index(grid, j)
    return _unwrap(_cardinal_from_offset(grid, _offset(grid, j, t)), t)


def cardinal_eval_sum(grid: PeriodicGrid, j: int, t):
    """:math:`F_j(t)` by the explicit primed cosine sum (reference path)."""
    _check_index(grid, j)
    return _unwrap(_cardinal_sum(grid, _offset(grid, j, t)), t)


def _derivative_from_offset(grid: PeriodicGrid, s: np.ndarray, order: int) -> np.ndarray:
    """``order``-th derivative of :math:`F_j` in terms of the offset ``s = t - t_j``."""
    k = grid.wavenumbers
    n = order - 1
    sign = (-1.0) ** ((n + 2) // 2)
    phase = 0.5 * np.pi if order % 2 == 0 else 0.0
    coef = grid.primed_weights * k.astype(float) ** order
    omega = 2.0 * np.pi * k / grid.period
    scale = sign * (2.0 * np.pi / grid.period) ** order / grid.n
    return scale * (np.sin(s[..., None] * omega + phase) @ coef)


def cardinal_derivative(grid: PeriodicGrid, j: int, t):
    """First derivative :math:`F_j'(t)`."""
    _check_index(grid, j)
    return _unwrap(_derivative_from_offset(grid, _offset(grid, j, t), 1), t)


def cardinal_derivative_n(grid: PeriodicGrid, j: int, n: int, t):
    """Derivative :math:`F_j^{(n+1)}(t)`, i.e. the ``n``-th derivative of :math:`F_j'`."""
    _check_index(grid, j)
    if n < 0:
        raise DomainError(f"derivative order must be non-negative, got {n}")
    return _unwrap(_derivative_from_offset(grid, _offset(grid, j, t), n + 1), t)


def cardinal_matrix(grid: PeriodicGrid, t) -> np.ndarray:
    """Values ``F_j(t_i)`` for every point ``t_i`` and node ``j``; shape ``(len(t), N)``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return _cardinal_from_offset(grid, grid.reduce(t))


def cardinal_derivative_matrix(grid: PeriodicGrid, t) -> np.ndarray:
    """Values ``F_j'(t_i)``; shape ``(len(t), N)``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return _derivative_from_offset(grid, grid.reduce(t), 1)


def interpolate(grid: PeriodicGrid, samples, t):
    """Evaluate the trigonometric interpolant of ``samples`` at ``t``.

    ``samples`` may carry trailing dimensions, e.g. shape ``(N, m)`` for ``m``
    components interpolated at once.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] != grid.n:
        raise DomainError(f"expected {grid.n} samples, got {samples.shape[0]}")

    basis = cardinal_matrix(grid, t)
    value = np.tensordot(basis, samples, axes=(1, 0))
    if np.ndim(t) == 0:
        value = value[0]
        return float(value) if value.ndim == 0 else value
    return value
