"""Exact coefficients used by the mixed psi/kappa_1 recursion.

Everything here returns :class:`fractions.Fraction` or plain ``int``;
there is no floating point path.  Tables grow on demand and are shared
between threads behind a lock, so concurrent callers always see the same
values.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, pi

__all__ = [
    "ZetaValue",
    "BetaTable",
    "bernoulli",
    "double_factorial",
    "zeta_pi_ratio",
    "beta_coeff",
    "beta_coeff_zeta_form",
    "beta_table",
    "a_coeff",
    "f_kernel_value",
]

_bernoulli_lock = threading.Lock()
_bernoulli_plus: list[Fraction] = []  # B_m with B_1 = +1/2 (Akiyama-Tanigawa output)


def _extend_bernoulli(m: int) -> None:
    with _bernoulli_lock:
        start = len(_bernoulli_plus)
        if start > m:
            return
        # Akiyama-Tanigawa restarted from scratch; cheap for the sizes used here
        row: list[Fraction] = []
        out: list[Fraction] = []
        for k in range(m + 1):
            row.append(Fraction(1, k + 1))
            for j in range(k, 0, -1):
                row[j - 1] = j * (row[j - 1] - row[j])
            out.append(row[0])
        _bernoulli_plus[:] = out


def bernoulli(m: int) -> Fraction:
    """Bernoulli number ``B_m`` with the convention ``B_1 = -1/2``."""
    if m < 0:
        raise ValueError(f"bernoulli index must be >= 0, got {m}")
    if len(_bernoulli_plus) <= m:
        _extend_bernoulli(max(m, 2 * len(_bernoulli_plus)))
    if m == 1:
        return Fraction(-1, 2)
    return _bernoulli_plus[m]


@lru_cache(maxsize=None)
def double_factorial(k: int) -> int:
    """``k!!`` with ``(-1)!! = 0!! = 1``."""
    if k < -1:
        raise ValueError(f"double factorial undefined for {k}")
    result = 1
    while k > 1:
        result *= k
        k -= 2
    return result


@lru_cache(maxsize=None)
def zeta_pi_ratio(m: int) -> Fraction:
    """Rational ``r`` with ``zeta(2m) = r * pi**(2m)``; ``m = 0`` gives ``-1/2``."""
    if m < 0:
        raise ValueError(f"zeta argument must be even and >= 0, got 2*{m}")
    sign = 1 if m % 2 == 1 else -1
    return sign * bernoulli(2 * m) * Fraction(2) ** (2 * m - 1) / factorial(2 * m)


@dataclass(frozen=True)
class ZetaValue:
    """Exact ``coeff * zeta(zeta_arg)``.

    ``zeta_arg is None`` marks a pure rational (no zeta factor).
    """

    coeff: Fraction
    zeta_arg: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        if self.zeta_arg is not None and (self.zeta_arg < 0 or self.zeta_arg % 2):
            raise ValueError(f"zeta argument must be even and >= 0, got {self.zeta_arg}")

    @property
    def pi_power(self) -> int:
        return 0 if self.zeta_arg is None else self.zeta_arg

    def pi_coefficient(self) -> Fraction:
        """Rational ``c`` with ``self == c * pi**pi_power``."""
        if self.zeta_arg is None:
            return self.coeff
        return self.coeff * zeta_pi_ratio(self.zeta_arg // 2)

    def normalized(self) -> Fraction:
        """Exact value divided by ``(2 pi^2)**(zeta_arg/2)``; the pi powers cancel."""
        half = self.pi_power // 2
        return self.pi_coefficient() / Fraction(2) ** half

    def __float__(self) -> float:
        return float(self.pi_coefficient()) * pi**self.pi_power

    def is_zero(self) -> bool:
        return self.coeff == 0


@lru_cache(maxsize=None)
def beta_coeff(l: int) -> Fraction:
    """Recursion weight ``beta_l = (-1)^(l-1) 2^l (2^(2l) - 2) B_2l / (2l)!``."""
    if l < 0:
        raise ValueError(f"beta index must be >= 0, got {l}")
    sign = 1 if l % 2 == 1 else -1
    return sign * Fraction(2**l * (4**l - 2)) * bernoulli(2 * l) / factorial(2 * l)


def beta_coeff_zeta_form(l: int) -> Fraction:
    """``beta_l`` evaluated as ``(2^(2l+1) - 4) zeta(2l) / (2 pi^2)^l``."""
    return ZetaValue(Fraction(2 ** (2 * l + 1) - 4), 2 * l).normalized()


@dataclass
class BetaTable:
    """Growable table of ``beta_l``; compares by value."""

    values: list[Fraction]

    def __getitem__(self, l: int) -> Fraction:
        while len(self.values) <= l:
            self.values.append(beta_coeff(len(self.values)))
        return self.values[l]

    def __len__(self) -> int:
        return len(self.values)


def beta_table(size: int) -> BetaTable:
    return BetaTable([beta_coeff(l) for l in range(size)])


@lru_cache(maxsize=None)
def a_coeff(n: int, k: int) -> Fraction:
    """Coefficient of ``x^k alpha^(k-2n) e^(-alpha x)`` in ``P^n e^(-alpha x)``.

    Zero outside ``0 <= k <= n``.
    """
    if n < 0 or k < 0 or k > n:
        return Fraction(0)
    return Fraction(factorial(2 * n - k), 2 ** (n - k) * factorial(k) * factorial(n - k))


def f_kernel_value(n: int, m: int, k: int) -> ZetaValue:
    """Exact ``P_x^n P_y^m h^(2k)(x+y)`` at ``x = y = 0``."""
    if min(n, m, k) < 0:
        raise ValueError("n, m, k must be nonnegative")
    front = double_factorial(2 * n - 1) * double_factorial(2 * m - 1)
    s = n + m - k
    if s > 0:
        return ZetaValue(Fraction(front * (2 ** (2 * s + 1) - 4)), 2 * s)
    if s == 0:
        return ZetaValue(Fraction(front))
    return ZetaValue(Fraction(0))
