"""Floating-point McShane kernels and numerical checks of the P-operator identities.

``P f(x) = int_x^inf t f(t) dt``.  Everything here is a float cross-check of
the exact values in :mod:`mgn.coefficients`; nothing feeds back into the
exact recursion.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import expit

from .coefficients import a_coeff, f_kernel_value

__all__ = [
    "KernelEvalConfig",
    "InvalidDomainError",
    "NonConvergenceError",
    "eval_h",
    "eval_R",
    "eval_D",
    "gauss_legendre",
    "p_exponential_closed",
    "p_power_numeric",
    "verify_p_exponential",
    "accelerated_alternating_sum",
    "verify_corollary",
]

_PANEL_WIDTH = 2.0
_TAIL_CUTOFF = 1e-18


class InvalidDomainError(ValueError):
    pass


class NonConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class KernelEvalConfig:
    quadrature_points: int = 32
    series_terms: int = 64
    tolerance: float = 1e-9

    def __post_init__(self) -> None:
        if self.quadrature_points < 16:
            raise ValueError("quadrature_points must be >= 16")
        if self.series_terms < 8:
            raise ValueError("series_terms must be >= 8")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")


DEFAULT_CONFIG = KernelEvalConfig()


def eval_h(x):
    """``h(x) = 2 / (1 + e^(x/2))``, overflow-safe."""
    return 2.0 * expit(-0.5 * np.asarray(x, dtype=float)) if np.ndim(x) else 2.0 * float(expit(-0.5 * x))


@lru_cache(maxsize=None)
def _nodes(points: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(points)


def gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, points: int) -> float:
    """Composite Gauss-Legendre rule with panels no wider than a fixed width."""
    if b == a:
        return 0.0
    panels = max(1, math.ceil(abs(b - a) / _PANEL_WIDTH))
    x, w = _nodes(points)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return float(np.dot(weights, f(t)))


def _check_x(x: float) -> None:
    if not x > 0:
        raise InvalidDomainError(f"x must be positive, got {x}")


def eval_R(x: float, y: float, z: float, cfg: KernelEvalConfig = DEFAULT_CONFIG) -> float:
    _check_x(x)

    def integrand(t):
        return eval_h(z + t + y) + eval_h(z - t - y) + eval_h(z + t - y) + eval_h(z - t + y)

    return gauss_legendre(integrand, 0.0, x, cfg.quadrature_points) / (4.0 * x)


def eval_D(x: float, y: float, z: float, cfg: KernelEvalConfig = DEFAULT_CONFIG) -> float:
    _check_x(x)
    s = y + z  # depends on y, z only through the sum

    def integrand(t):
        return eval_h(t + s) + eval_h(s - t)

    return gauss_legendre(integrand, 0.0, x, cfg.quadrature_points) / (2.0 * x)


def p_exponential_closed(n: int, alpha: float, x: float) -> float:
    """``P^n e^(-alpha x)`` from the exact ``A_j^(n)`` coefficients."""
    return math.exp(-alpha * x) * sum(
        float(a_coeff(n, j)) * x**j * alpha ** (j - 2 * n) for j in range(n + 1)
    )


def p_power_numeric(
    f: Callable[[np.ndarray], np.ndarray], n: int, x: float, cfg: KernelEvalConfig = DEFAULT_CONFIG
) -> float:
    """``P^n f(x)`` by quadrature.

    The n nested integrals collapse (in the variable ``t^2/2``) to one:
    ``int_x^inf t (t^2 - x^2)^(n-1) / (2^(n-1) (n-1)!) f(t) dt``.
    """
    if n == 0:
        return float(f(np.array([x]))[0])
    scale = 1.0 / (2 ** (n - 1) * math.factorial(n - 1))

    def integrand(t):
        return scale * t * (t * t - x * x) ** (n - 1) * f(t)

    # extend the upper limit until the integrand is negligible and decaying
    upper = x + 1.0
    while True:
        probe = np.array([upper, 1.5 * upper])
        vals = np.abs(integrand(probe))
        if vals[0] < _TAIL_CUTOFF and vals[1] <= vals[0]:
            break
        upper *= 1.5
        if upper > 1e6:
            raise NonConvergenceError("integrand does not decay")
    body = gauss_legendre(integrand, x, upper, cfg.quadrature_points)
    tail = gauss_legendre(integrand, upper, 2 * upper, cfg.quadrature_points)
    if abs(tail) > cfg.tolerance:
        raise NonConvergenceError(f"tail estimate {tail:.3e} exceeds tolerance {cfg.tolerance:.1e}")
    return body


def verify_p_exponential(
    n: int, alpha: float, x: float, cfg: KernelEvalConfig = DEFAULT_CONFIG
) -> tuple[float, float]:
    """``(closed_form, numeric)`` values of ``P^n e^(-alpha x)``."""
    if n < 0 or n > 6:
        raise ValueError("n must be in 0..6")
    if not alpha > 0:
        raise InvalidDomainError("alpha must be positive")
    closed = p_exponential_closed(n, alpha, x)
    numeric = p_power_numeric(lambda t: np.exp(-alpha * t), n, x, cfg)
    return closed, numeric


def accelerated_alternating_sum(terms: np.ndarray) -> tuple[float, float]:
    """Sum an alternating series by repeated averaging of partial sums.

    Returns ``(estimate, remainder_bound)`` where the bound is the change in
    the estimate caused by the last term.  Also assigns the Abel/Euler value
    to series with polynomially growing terms.
    """
    partial = np.cumsum(np.asarray(terms, dtype=float))

    def collapse(sums: np.ndarray) -> float:
        s = sums.copy()
        while len(s) > 1:
            s = 0.5 * (s[:-1] + s[1:])
        return float(s[0])

    est = collapse(partial)
    prev = collapse(partial[:-1])
    return est, abs(est - prev)


def verify_corollary(
    n: int, m: int, k: int, cfg: KernelEvalConfig = DEFAULT_CONFIG
) -> tuple[float, float]:
    """``(closed_form, series_value)`` for ``P_x^n P_y^m h^(2k)(x+y)`` at the origin.

    Uses ``h(x) = 2 sum_{j>=1} (-1)^(j+1) e^(-j x/2)`` termwise; each term's
    operator image at 0 comes from :func:`p_exponential_closed`.
    """
    if not (0 <= n <= 3 and 0 <= m <= 3):
        raise ValueError("n and m must be in 0..3")
    if not 0 <= k <= n + m + 1:
        raise ValueError("k must be in 0..n+m+1")
    closed = float(f_kernel_value(n, m, k))
    terms = np.empty(cfg.series_terms)
    for j in range(1, cfg.series_terms + 1):
        alpha = j / 2
        sign = 1.0 if j % 2 else -1.0
        terms[j - 1] = (
            2.0 * sign * alpha ** (2 * k)
            * p_exponential_closed(n, alpha, 0.0)
            * p_exponential_closed(m, alpha, 0.0)
        )
    value, bound = accelerated_alternating_sum(terms)
    if bound > cfg.tolerance:
        raise NonConvergenceError(f"series remainder {bound:.3e} exceeds tolerance {cfg.tolerance:.1e}")
    return closed, value
