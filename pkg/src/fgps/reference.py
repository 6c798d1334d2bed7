r"""Independent reference values for the periodic fractional derivative.

* :func:`mittag_leffler` evaluates :math:`E_{a,b}(z) = \sum_k z^k / \Gamma(a k + b)`.
* :func:`exact_sin_fd` is the closed-form sliding-memory derivative of
  :math:`\sin t` for :math:`0 < \alpha < 1`,

  .. math::

      D^\alpha \sin t = a \sin(t - L) + b \cos(t - L),\quad
      a = L^{-\alpha}\left[E_{2,1-\alpha}(-L^2) - \frac{1}{\Gamma(1-\alpha)}\right],\quad
      b = L^{1-\alpha} E_{2,2-\alpha}(-L^2).

* :func:`quadrature_fd` integrates the reduced form with adaptive
  Gauss-Kronrod quadrature for any derivative :math:`f'`.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import integrate, special

from .exceptions import DomainError, NumericError
from .fracdiff import _check_alpha, _check_memory, derivative_scale

#: largest |z| for the double precision Taylor series
SERIES_RADIUS = 25.0

_MAX_TERMS = 100_000


def _series_double(a: float, b: float, z: float) -> float:
    peak = abs(z) ** (1.0 / a)
    terms = []
    biggest = 0.0
    for k in range(_MAX_TERMS):
        term = z**k * special.rgamma(a * k + b)
        terms.append(term)
        biggest = max(biggest, abs(term))
        if k > peak + 2 and abs(term) <= 1e-17 * biggest:
            return math.fsum(terms)
    raise NumericError("Mittag-Leffler series did not converge", estimate=math.fsum(terms))


def _series_mp(a: float, b: float, z: float) -> float:
    # the terms peak near exp(|z|^(1/a)); carry enough digits to absorb the cancellation
    peak = abs(z) ** (1.0 / a)
    digits = 25 + int(peak / math.log(10))
    with mpmath.workdps(digits):
        zz, aa, bb = mpmath.mpf(z), mpmath.mpf(a), mpmath.mpf(b)
        total = mpmath.mpf(0)
        biggest = mpmath.mpf(0)
        cutoff = mpmath.mpf(10) ** (-digits)
        for k in range(_MAX_TERMS):
            # the gamma argument must be formed exactly, not rounded in double precision
            term = zz**k * mpmath.rgamma(aa * k + bb)
            total += term
            biggest = max(biggest, abs(term))
            if k > peak + 2 and abs(term) <= cutoff * biggest:
                return float(total)
    raise NumericError("Mittag-Leffler series did not converge", estimate=float(total))


def _asymptotic_terms(b: float, x: float):
    """Algebraic correction terms ``-(-x)^(-k) / Gamma(b - 2k)`` up to optimal truncation."""
    terms = []
    previous = math.inf
    for k in range(1, 200):
        term = -((-x) ** (-k)) * special.rgamma(b - 2 * k)
        size = abs(term)
        if size > previous and previous != 0:
            break
        terms.append(term)
        if size == 0 and k > 2:
            break
        previous = size if size != 0 else previous
    return terms, previous


def _asymptotic(b: float, x: float) -> tuple[float, float]:
    """:math:`E_{2,b}(-x)` for large ``x > 0`` with an estimate of its error."""
    root = math.sqrt(x)
    oscillatory = root ** (1.0 - b) * math.cos(root + (1.0 - b) * math.pi / 2.0)
    terms, smallest = _asymptotic_terms(b, x)
    err = 0.0 if not terms or smallest == math.inf else smallest
    return oscillatory + math.fsum(terms), err


def mittag_leffler(a: float, b: float, z: float, method: str | None = None) -> float:
    r"""Two-parameter Mittag-Leffler function :math:`E_{a,b}(z)` for real ``z``.

    ``method`` forces a branch: ``"series"`` (double precision Taylor series),
    ``"mpseries"`` (Taylor series in extended precision) or ``"asymptotic"``
    (large negative argument, ``a = 2`` only). By default the double series is
    used for ``|z| <= 25``, the asymptotic expansion when ``a = 2``, ``z < -25``
    and its truncation error is negligible, and the extended precision series
    otherwise.
    """
    if not (a > 0 and b > 0):
        raise DomainError(f"Mittag-Leffler parameters must be positive, got a={a}, b={b}")

    if method is None:
        if abs(z) <= SERIES_RADIUS:
            method = "series"
        elif a == 2 and z < 0:
            value, err = _asymptotic(b, -z)
            scale = max(1.0, (-z) ** ((1.0 - b) / 2.0))
            if err <= 1e-15 * scale:
                return value
            method = "mpseries"
        else:
            method = "mpseries"

    if method == "series":
        return _series_double(a, b, z)
    if method == "mpseries":
        return _series_mp(a, b, z)
    if method == "asymptotic":
        if a != 2 or z >= 0:
            raise DomainError("the asymptotic branch covers a = 2 and z < 0 only")
        return _asymptotic(b, -z)[0]
    raise DomainError(f"unknown method {method!r}")


@dataclass(frozen=True)
class ExactSinFd:
    """Closed-form sliding-memory fractional derivative of ``sin``."""

    alpha: float
    memory_length: float
    coeff_a: float
    coeff_b: float

    def value(self, t):
        shifted = np.asarray(t, dtype=float) - self.memory_length
        out = self.coeff_a * np.sin(shifted) + self.coeff_b * np.cos(shifted)
        return float(out) if out.ndim == 0 else out

    __call__ = value


@functools.lru_cache(maxsize=256)
def exact_sin_coefficients(alpha: float, memory_length: float) -> ExactSinFd:
    _check_alpha(alpha)
    _check_memory(memory_length)
    L = memory_length
    z = -L * L
    a = L ** (-alpha) * (mittag_leffler(2.0, 1.0 - alpha, z) - special.rgamma(1.0 - alpha))
    b = L ** (1.0 - alpha) * mittag_leffler(2.0, 2.0 - alpha, z)
    return ExactSinFd(alpha, L, float(a), float(b))


def exact_sin_fd(alpha: float, memory_length: float, t):
    """Exact sliding-memory derivative of ``sin`` of order ``alpha`` at ``t``."""
    return exact_sin_coefficients(alpha, memory_length).value(t)


def quadrature_fd(fprime, alpha: float, memory_length: float, t: float, tol: float = 1e-11) -> float:
    r"""Adaptive evaluation of :math:`\frac{L^{1-\alpha}}{\Gamma(2-\alpha)}\int_0^1 f'(t - L y^{1/(1-\alpha)})\,dy`.

    Breakpoints ``y_k = (k / M)^{1 - alpha}`` split the interval into panels of
    equal length in the original time variable, which resolves the clustering
    of the integrand near ``y = 0`` or ``y = 1``.
    """
    scale = derivative_scale(alpha, memory_length)
    if tol < 1e-13:
        raise DomainError(f"tolerance below 1e-13 is not attainable, got {tol}")

    p = 1.0 / (1.0 - alpha)

    def integrand(y):
        return fprime(t - memory_length * y**p)

    npanels = 16 + int(math.ceil(memory_length))
    points = (np.arange(1, npanels) / npanels) ** (1.0 - alpha)
    result = integrate.quad(
        integrand,
        0.0,
        1.0,
        points=points,
        epsabs=tol / scale,
        epsrel=0.0,
        limit=50 * npanels,
        full_output=1,
    )
    value, abserr = result[0], result[1]
    if len(result) > 3 or abserr * scale > tol:
        raise NumericError(
            f"adaptive quadrature did not reach tol={tol} (error estimate {abserr * scale:.3g})",
            estimate=scale * value,
            error=scale * abserr,
        )
    return scale * value
