r"""Periodic fractional derivatives through the Fourier-Gegenbauer integration matrix.

For :math:`0 < \alpha < 1` and memory length :math:`L`, the sliding-memory
derivative of a :math:`T`-periodic function reduces, after the substitution
:math:`\tau = t - L y^{1/(1-\alpha)}`, to

.. math::

    D^\alpha f(t) = \frac{L^{1-\alpha}}{\Gamma(2-\alpha)}
        \int_0^1 f'(t - L y^{1/(1-\alpha)}) \,\mathrm{d}y.

Replacing :math:`f` by its trigonometric interpolant and the integral by a
Gegenbauer-Gauss rule on :math:`(0, 1)` gives the matrix

.. math::

    Q_{l,j} = \frac{1}{2} \sum_q P_q F_j'(t_l - L \hat{z}_q^{1/(1-\alpha)}),

which depends on :math:`l - j` only, so it is Toeplitz and is stored through
its :math:`2N - 1` diagonals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError
from .fourier import (
    PeriodicGrid,
    _derivative_from_offset,
    cardinal_derivative,
    cardinal_derivative_matrix,
)
from .gegenbauer import GegenbauerRule, gegenbauer_rule

#: the integer order ceil(alpha); the reduced form here is only valid for m = 1
ORDER_CEILING = 1


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"fractional order must lie in (0, 1), got {alpha}")


def _check_memory(memory_length: float) -> None:
    if not memory_length > 0:
        raise DomainError(f"memory length must be positive, got {memory_length}")


def memory_argument(t, alpha: float, memory_length: float, y):
    """Map ``y`` in ``[0, 1]`` to the past time ``t - L y^{1/(1-alpha)}``."""
    _check_alpha(alpha)
    y = np.asarray(y, dtype=float)
    if np.any((y < 0) | (y > 1)):
        raise DomainError("y must lie in [0, 1]")
    value = np.asarray(t, dtype=float) - memory_length * _memory_power(y, alpha)
    return float(value) if value.ndim == 0 else value


def _memory_power(y: np.ndarray, alpha: float) -> np.ndarray:
    # y**(1/(1-alpha)); the exponent reaches 1e6 near alpha = 1, so underflow to 0 is expected
    with np.errstate(divide="ignore", under="ignore"):
        logy = np.log(y)
        return np.exp(logy / (1.0 - alpha))


def derivative_scale(alpha: float, memory_length: float) -> float:
    """The factor :math:`L^{1-\\alpha} / \\Gamma(2 - \\alpha)`."""
    _check_alpha(alpha)
    _check_memory(memory_length)
    return memory_length ** (1.0 - alpha) / math.gamma(2.0 - alpha)


def _quadrature_offsets(alpha: float, memory_length: float, rule: GegenbauerRule) -> np.ndarray:
    return memory_length * _memory_power(rule.shifted_nodes, alpha)


def fgpsq_entry(
    alpha: float,
    memory_length: float,
    grid: PeriodicGrid,
    rule: GegenbauerRule,
    l: int,
    j: int,
) -> float:
    """Single matrix entry ``Q[l, j]`` computed directly from its definition."""
    _check_alpha(alpha)
    _check_memory(memory_length)
    if not (0 <= l < grid.n and 0 <= j < grid.n):
        raise DomainError(f"entry ({l}, {j}) outside a {grid.n} x {grid.n} matrix")

    args = grid.nodes[l] - _quadrature_offsets(alpha, memory_length, rule)
    return 0.5 * float(rule.integration_vector @ cardinal_derivative(grid, j, args))


def _diagonals(alpha, memory_length, grid, rule) -> np.ndarray:
    # Q[l, j] = 1/2 P . F_0'(t_l - t_j - offsets); diagonal index d = l - j
    offsets = _quadrature_offsets(alpha, memory_length, rule)
    d = np.arange(-(grid.n - 1), grid.n)
    s = (grid.period * d / grid.n)[:, None] - offsets[None, :]
    s -= grid.period * np.floor(s / grid.period + 0.5)
    values = _derivative_from_offset(grid, s, 1)
    return 0.5 * (values @ rule.integration_vector)


@dataclass(frozen=True, eq=False)
class FgpsOperator:
    """Fourier-Gegenbauer fractional integration matrix with its scale factor.

    Only the ``2N - 1`` diagonals are stored: ``diagonals[N - 1 + l - j]`` is
    ``Q[l, j]``. Applying the operator to node samples of a periodic function
    approximates its periodic fractional derivative at the nodes.
    """

    alpha: float
    memory_length: float
    grid: PeriodicGrid
    rule: GegenbauerRule
    diagonals: np.ndarray = field(repr=False)
    scale: float

    order_ceiling = ORDER_CEILING

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def first_row(self) -> np.ndarray:
        """``Q[0, j]`` for ``j = 0..N-1``."""
        return self.diagonals[self.n - 1 :: -1]

    @property
    def first_col(self) -> np.ndarray:
        """``Q[l, 0]`` for ``l = 0..N-1``."""
        return self.diagonals[self.n - 1 :]

    def entry(self, l: int, j: int) -> float:
        return float(self.diagonals[self.n - 1 + l - j])

    def matrix(self) -> np.ndarray:
        """Dense ``N x N`` matrix ``Q`` (without the scale factor)."""
        idx = np.arange(self.n)
        return self.diagonals[self.n - 1 + idx[:, None] - idx[None, :]]

    def derivative_matrix(self) -> np.ndarray:
        """Dense matrix of the full operator, ``scale * Q``."""
        return self.scale * self.matrix()

    def apply(self, samples) -> np.ndarray:
        return apply(self, samples)

    def apply_at(self, samples, t):
        return apply_at(self, samples, t)


def build_operator(
    alpha: float,
    memory_length: float,
    grid: PeriodicGrid,
    rule: GegenbauerRule | None = None,
) -> FgpsOperator:
    """Assemble the Toeplitz integration matrix from its first row and column.

    ``rule`` defaults to the 1001-node Chebyshev-Gauss rule (index 0).
    """
    _check_alpha(alpha)
    _check_memory(memory_length)
    if rule is None:
        rule = gegenbauer_rule(0.0, 1000)

    diagonals = _diagonals(alpha, memory_length, grid, rule)
    diagonals.setflags(write=False)
    return FgpsOperator(
        alpha=alpha,
        memory_length=memory_length,
        grid=grid,
        rule=rule,
        diagonals=diagonals,
        scale=derivative_scale(alpha, memory_length),
    )


def _check_samples(op: FgpsOperator, samples) -> np.ndarray:
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] != op.n:
        raise DomainError(f"expected {op.n} samples, got {samples.shape[0]}")
    return samples


def toeplitz_matvec(diagonals: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``Q @ x`` for the Toeplitz ``Q`` with ``Q[l, j] = diagonals[n - 1 + l - j]``.

    ``x`` may have trailing dimensions; each column is multiplied.
    """
    n = x.shape[0]
    out = np.zeros(x.shape, dtype=float)
    for l in range(n):
        # row l reads diagonals[n - 1 + l - j] for j = 0..n-1, a reversed slice
        row = diagonals[l : l + n][::-1]
        out[l] = np.tensordot(row, x, axes=(0, 0))
    return out


def apply(op: FgpsOperator, samples) -> np.ndarray:
    """Approximate fractional derivative at the grid nodes from node samples."""
    samples = _check_samples(op, samples)
    return op.scale * toeplitz_matvec(op.diagonals, samples)


def apply_at(op: FgpsOperator, samples, t):
    """Approximate fractional derivative at arbitrary times ``t``.

    The quadrature is centred at ``t`` instead of a grid node; at ``t = t_l``
    this reproduces row ``l`` of :func:`apply`.
    """
    samples = _check_samples(op, samples)
    t = np.asarray(t, dtype=float)
    offsets = _quadrature_offsets(op.alpha, op.memory_length, op.rule)
    weights = 0.5 * op.rule.integration_vector

    rows = [weights @ cardinal_derivative_matrix(op.grid, ti - offsets) for ti in t.reshape(-1)]
    result = op.scale * (np.array(rows) @ samples)

    if t.ndim == 0:
        return float(result[0]) if result.ndim == 1 else result[0]
    return result.reshape(t.shape + samples.shape[1:])
