r"""A-priori error factors of the Fourier-Gegenbauer quadrature.

The quadrature error of a single matrix entry is bounded by

.. math::

    |E| \le D^\lambda A_{N,N_G}\, 2^{-2N_G-1} e^{N_G} N_G^{\lambda - N_G - 3/2},
    \qquad
    A_{N,N_G} = N^{N_G+1} \zeta^{-(N_G+1)}
        \left(\frac{L}{1-\alpha}\right)^{N_G+1} \gamma_{N_G}^\alpha
        \binom{N_G+1}{\lfloor N_G/2 \rfloor} c_1,

with :math:`\gamma_{N_G}^\alpha = \sum_{k=0}^{N_G+1} |(\alpha/(1-\alpha))^{(N_G-k+1)}|`
for :math:`\lambda \ge 0`. The constants :math:`D^\lambda, c_1` are unknown;
:func:`bound_estimate` sets them to one, so it predicts trends only and is not
a certified bound. Everything is accumulated in log space to survive
``N_G = 1000``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError
from .fourier import PeriodicGrid, cardinal_derivative_n
from .fracdiff import _check_alpha

#: Euler-Mascheroni constant
EULER_GAMMA = 0.5772156649015329

#: memory length above which the error bound is minimal at alpha = 1/2
LMK_THRESHOLD = math.exp(1.0 - EULER_GAMMA)


def falling_factorial(x: float, k: int) -> float:
    """Falling factorial ``x (x - 1) ... (x - k + 1)``; the empty product is 1."""
    if k < 0:
        raise DomainError(f"order must be non-negative, got {k}")
    result = 1.0
    for l in range(k):
        result *= x - l
    return result


def _log_abs_falling_factorials(x: float, kmax: int) -> np.ndarray:
    """``log |(x)^(k)|`` for ``k = 0..kmax`` (``-inf`` where the product vanishes)."""
    factors = np.abs(x - np.arange(kmax, dtype=float))
    with np.errstate(divide="ignore"):
        logs = np.log(factors)
    return np.concatenate([[0.0], np.cumsum(logs)])


def gamma_factor(alpha: float, n_g: int) -> float:
    r""":math:`\gamma_{N_G}^\alpha = \sum_{m=0}^{N_G+1} |(\alpha/(1-\alpha))^{(m)}|`.

    Returns ``inf`` when the sum overflows a double.
    """
    _check_alpha(alpha)
    if n_g < 0:
        raise DomainError(f"n_g must be non-negative, got {n_g}")

    ratio = alpha / (1.0 - alpha)
    # small orders are summed exactly; this keeps gamma(1/2) = 2 without rounding
    total = 0.0
    term = 1.0
    for m in range(n_g + 2):
        if m:
            term *= abs(ratio - (m - 1))
        if term == 0.0:
            break
        if not math.isfinite(term):
            return math.inf
        total += term
    return total if math.isfinite(total) else math.inf


def log_gamma_factor(alpha: float, n_g: int) -> float:
    """Natural log of :func:`gamma_factor`, finite even when the factor overflows."""
    _check_alpha(alpha)
    logs = _log_abs_falling_factorials(alpha / (1.0 - alpha), n_g + 1)
    logs = logs[np.isfinite(logs)]
    peak = logs.max()
    return float(peak + math.log(np.sum(np.exp(logs - peak))))


@dataclass(frozen=True)
class ErrorBoundInputs:
    """Parameters of the quadrature error bound.

    ``zeta`` stands for the unknown mean-value point in ``(0, 1)``; the default
    1 gives the most optimistic trend curve. ``period`` is only used by
    :func:`psi`.
    """

    n: int
    n_g: int
    memory_length: float
    alpha: float
    lam: float = 0.0
    zeta: float = 1.0
    period: float = 2.0 * math.pi

    def __post_init__(self):
        _check_alpha(self.alpha)
        if not self.memory_length > 0:
            raise DomainError(f"memory length must be positive, got {self.memory_length}")
        if not 0.0 < self.zeta <= 1.0:
            raise DomainError(f"zeta must lie in (0, 1], got {self.zeta}")
        if not self.lam > -0.5:
            raise DomainError(f"Gegenbauer index must exceed -1/2, got {self.lam}")
        if self.n_g < 0 or self.n <= 0:
            raise DomainError("n and n_g must be positive")

    @property
    def condition_tss(self) -> bool:
        """``L > 1 - alpha``, under which the bound holds."""
        return self.memory_length > 1.0 - self.alpha

    @property
    def condition_lmk(self) -> bool:
        """``L > exp(1 - gamma_em)``, under which the bound is smallest at ``alpha = 1/2``."""
        return self.memory_length > LMK_THRESHOLD


def psi_terms(inputs: ErrorBoundInputs, j: int, y: float, t: float) -> np.ndarray:
    r"""The ``N_G + 2`` summands of :func:`psi`, indexed by ``k``."""
    if not y > 0:
        raise DomainError(f"psi needs y > 0, got {y}")

    alpha, L, n_g = inputs.alpha, inputs.memory_length, inputs.n_g
    grid = PeriodicGrid(inputs.n, inputs.period)
    tau = t - L * y ** (1.0 / (1.0 - alpha))
    ratio = alpha / (alpha - 1.0)

    terms = np.empty(n_g + 2)
    for k in range(n_g + 2):
        power = k * alpha / (1.0 - alpha) + k - n_g - 1
        terms[k] = (
            math.comb(n_g + 1, k)
            * (L / (alpha - 1.0)) ** k
            * falling_factorial(ratio, n_g - k + 1)
            * y**power
            * cardinal_derivative_n(grid, j, k, tau)
        )
    return terms


def psi(inputs: ErrorBoundInputs, j: int, y: float, t: float) -> float:
    r"""The error coefficient function :math:`\psi_{L,N_G,j}^\alpha(y; t)`.

    .. math::

        \psi(y;t) = \sum_{k=0}^{N_G+1} \binom{N_G+1}{k}
            \left(\frac{L}{\alpha-1}\right)^k
            \left(\frac{\alpha}{\alpha-1}\right)^{(N_G-k+1)}
            y^{\frac{k\alpha}{1-\alpha} + k - N_G - 1}
            F_j^{(k+1)}(t - L y^{1/(1-\alpha)})

    summed term by term as written. The sum is not in general the
    ``(N_G + 1)``-th ``y``-derivative of ``F_j'(t - L y^{1/(1-alpha)})``: for
    ``N_G = 0`` the ``k = 1`` term alone is that derivative and the ``k = 0``
    term is extra.
    """
    return math.fsum(psi_terms(inputs, j, y, t))


@dataclass(frozen=True)
class BoundEstimate:
    """Trend estimate of the quadrature error bound.

    ``log10_value`` stays finite when ``value`` overflows. ``valid`` records
    whether ``L > 1 - alpha`` holds.
    """

    value: float
    log10_value: float
    valid: bool


def _log_binom_max(n_g: int) -> float:
    # max_k binom(N_G + 1, k) is attained at k = floor(N_G / 2)
    m = n_g // 2
    return math.lgamma(n_g + 2) - math.lgamma(m + 1) - math.lgamma(n_g + 2 - m)


def log_amplification(inputs: ErrorBoundInputs) -> float:
    """Natural log of the coefficient ``A`` with ``c_1 = 1``."""
    n_g = inputs.n_g
    return (
        (n_g + 1) * math.log(inputs.n)
        - (n_g + 1) * math.log(inputs.zeta)
        + (n_g + 1) * math.log(inputs.memory_length / (1.0 - inputs.alpha))
        + log_gamma_factor(inputs.alpha, n_g)
        + _log_binom_max(n_g)
    )


def _log_binom_asymptotic(n_g: int) -> float:
    # large-N_G replacements of the binomial factor, split by parity
    if n_g % 2 == 0:
        return 0.5 * n_g * math.log(2.0 * math.e) - 0.5 * math.log(n_g)
    m = n_g // 2
    return m * (1.0 + math.log(n_g)) - (m + 0.5) * math.log(m)


def bound_estimate(inputs: ErrorBoundInputs, branch: str = "finite") -> BoundEstimate:
    """Order-of-magnitude estimate of the quadrature error bound.

    Unknown constants are set to one. ``branch="finite"`` uses the exact
    central binomial coefficient; ``branch="asymptotic"`` its large-``N_G``
    parity-dependent forms. Only ``lam >= 0`` is supported; the
    ``-1/2 < lam < 0`` branches need a constant that has no known value.
    """
    if inputs.lam < 0:
        raise DomainError("the bound estimate is restricted to lam >= 0")
    if branch not in ("finite", "asymptotic"):
        raise DomainError(f"unknown branch {branch!r}")
    n_g = max(inputs.n_g, 1)

    log_amp = log_amplification(inputs)
    if branch == "asymptotic":
        log_amp += _log_binom_asymptotic(n_g) - _log_binom_max(inputs.n_g)

    log_value = (
        log_amp
        - (2 * n_g + 1) * math.log(2.0)
        + n_g
        + (inputs.lam - n_g - 1.5) * math.log(n_g)
    )
    try:
        value = math.exp(log_value)
    except OverflowError:
        value = math.inf
    return BoundEstimate(value, log_value / math.log(10.0), inputs.condition_tss)
