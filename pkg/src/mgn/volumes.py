"""Weil-Petersson volume polynomials and the kappa_1/psi generating function.

Expanding ``(omega + 1/2 sum L_i^2 psi_i)^d / d!`` with ``omega = 2 pi^2 kappa_1``
gives the coefficient of ``pi^(2 k0) prod L_i^(2 k_i)`` as::

    2^k0 / (k0! prod 2^k_i k_i!) * <kappa1^k0 tau_k1 ... tau_kn>_g
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .engine import Engine, default_engine
from .keys import CorrelatorKey, EmptyPointsError, UnstableError, is_stable

__all__ = [
    "PiGradedPoly",
    "volume_polynomial",
    "volume_at",
    "generating_function_coeffs",
    "format_fraction",
]


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass
class PiGradedPoly:
    """Polynomial in ``L_1^2 .. L_n^2`` with coefficients ``q * pi^(2j)``.

    ``terms`` maps ``(exponents, pi_power)`` to ``q``, where ``exponents[i]``
    is the power of ``L_{i+1}^2`` and ``pi_power`` is the (even) power of pi.
    """

    g: int
    n: int
    terms: dict[tuple[tuple[int, ...], int], Fraction] = field(default_factory=dict)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int, Fraction]]:
        items = [(exps, p, q) for (exps, p), q in self.terms.items()]
        items.sort(key=lambda t: (-t[1], tuple(-e for e in t[0])))
        return items

    def __call__(self, lengths: Sequence[float]) -> float:
        if len(lengths) != self.n:
            raise ValueError(f"expected {self.n} lengths, got {len(lengths)}")
        total = 0.0
        for (exps, p), q in self.terms.items():
            mono = math.pi**p
            for L, e in zip(lengths, exps):
                mono *= L ** (2 * e)
            total += float(q) * mono
        return total

    def constant_term(self) -> Fraction:
        """Coefficient of the ``L = 0`` term (times ``pi^(2 dim)``)."""
        return self.terms.get(((0,) * self.n, 2 * (3 * self.g - 3 + self.n)), Fraction(0))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for exps, p, q in self.sorted_terms():
            factors = []
            if p:
                factors.append(f"pi^{p}")
            for i, e in enumerate(exps, start=1):
                if e:
                    factors.append(f"L{i}^{2 * e}")
            if not factors:
                out.append(format_fraction(q))
            elif q == 1:
                out.append("*".join(factors))
            else:
                out.append("*".join([format_fraction(q)] + factors))
        return " + ".join(out)

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "n": self.n,
            "terms": [
                {"L2_exponents": list(exps), "pi_power": p, "coeff": format_fraction(q)}
                for exps, p, q in self.sorted_terms()
            ],
        }


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def volume_polynomial(g: int, n: int, engine: Engine | None = None) -> PiGradedPoly:
    if n == 0:
        raise EmptyPointsError("volumes with no boundary components are not supported")
    if not is_stable(g, n):
        raise UnstableError(f"(g, n) = ({g}, {n}) is not stable")
    engine = engine or default_engine()
    dim = 3 * g - 3 + n
    poly = PiGradedPoly(g, n)
    for degree in range(dim + 1):
        k0 = dim - degree
        for exps in _compositions(degree, n):
            value = engine.intersection_number(CorrelatorKey(g, k0, exps))
            if not value:
                continue
            denom = math.factorial(k0)
            for k in exps:
                denom *= 2**k * math.factorial(k)
            poly.terms[(exps, 2 * k0)] = Fraction(2**k0, denom) * value
    return poly


def volume_at(g: int, n: int, lengths: Sequence[float], engine: Engine | None = None) -> float:
    if len(lengths) != n:
        raise ValueError(f"expected {n} lengths, got {len(lengths)}")
    return volume_polynomial(g, n, engine)(lengths)


def generating_function_coeffs(
    g_max: int, dim_max: int, engine: Engine | None = None
) -> list[tuple[int, int, tuple[int, ...], Fraction]]:
    """Coefficients of ``G(s, t_0, t_1, ...)`` up to genus and dimension bounds.

    Each entry is ``(g, k0, multiplicities, coeff)`` where ``multiplicities[a]``
    is the power of ``t_a`` and ``k0`` the power of ``s``.
    """
    engine = engine or default_engine()
    out = []
    for key, value in engine.compute_table(dim_max, g_max, dim_max + 3):
        counts = Counter(key.ks)
        mult = tuple(counts.get(a, 0) for a in range(max(key.ks) + 1))
        denom = math.factorial(key.k0) * math.prod(math.factorial(m) for m in mult)
        out.append((key.g, key.k0, mult, value / denom))
    return out
