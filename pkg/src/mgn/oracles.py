"""Independent checks for the recursion engine.

* genus-0 closed form ``(n-3)! / prod k_i!``
* a pure-psi DVV recursion written over labeled points, sharing nothing
  with :mod:`mgn.engine` except coefficient lookups
* string and dilaton equations
* push-forward reduction of kappa classes to psi classes on spaces with
  extra marked points
"""
from __future__ import annotations

import threading
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial, prod

from .coefficients import double_factorial
from .keys import CorrelatorKey, KappaPsiKey, UnstableError, dimension_gap, is_stable

__all__ = [
    "ReductionTerm",
    "genus0_closed_form",
    "dvv_intersection",
    "kappa_reduce",
    "oracle_intersection",
    "string_check",
    "dilaton_check",
]


@dataclass(frozen=True)
class ReductionTerm:
    coeff: int
    key: CorrelatorKey


def genus0_closed_form(ks) -> Fraction:
    ks = list(ks)
    n = len(ks)
    if n < 3:
        raise UnstableError(f"genus 0 needs at least 3 points, got {n}")
    if sum(ks) != n - 3:
        return Fraction(0)
    return Fraction(factorial(n - 3), prod(factorial(k) for k in ks))


_dvv_memo: dict[tuple[int, tuple[int, ...]], Fraction] = {}
_dvv_lock = threading.Lock()


def dvv_intersection(g: int, ks) -> Fraction:
    """Pure-psi intersection number ``<tau_k1 ... tau_kn>_g`` by DVV."""
    ks = tuple(ks)
    if not ks:
        raise ValueError("need at least one marked point")
    if not is_stable(g, len(ks)):
        raise UnstableError(f"(g, n) = ({g}, {len(ks)}) is not stable")
    return _dvv(g, tuple(sorted(ks)))


def _dvv(g: int, ks: tuple[int, ...]) -> Fraction:
    # ks ascending; degenerate input evaluates to zero
    n = len(ks)
    if g < 0 or n == 0 or 2 * g - 2 + n <= 0 or (ks and ks[0] < 0):
        return Fraction(0)
    if sum(ks) != 3 * g - 3 + n:
        return Fraction(0)
    if (g, n) == (0, 3):
        return Fraction(1)
    if (g, n) == (1, 1):
        return Fraction(1, 24)
    memo_key = (g, ks)
    with _dvv_lock:
        hit = _dvv_memo.get(memo_key)
    if hit is not None:
        return hit

    # distinguished point: last (largest) exponent, written as tau_{k+1}
    top = ks[-1]
    others = list(ks[:-1])
    k = top - 1
    acc = Fraction(0)
    for idx, kj in enumerate(others):
        rest = others[:idx] + others[idx + 1 :]
        coeff = Fraction(double_factorial(2 * (k + kj) + 1), double_factorial(2 * kj - 1))
        acc += coeff * _dvv(g, tuple(sorted(rest + [k + kj])))
    for a in range(k):
        b = k - 1 - a
        w = Fraction(double_factorial(2 * a + 1) * double_factorial(2 * b + 1), 2)
        acc += w * _dvv(g - 1, tuple(sorted(others + [a, b])))
        m = len(others)
        for r in range(m + 1):
            for subset in combinations(range(m), r):
                chosen = set(subset)
                left = [others[i] for i in subset] + [a]
                right = [others[i] for i in range(m) if i not in chosen] + [b]
                for g1 in range(g + 1):
                    acc += w * _dvv(g1, tuple(sorted(left))) * _dvv(g - g1, tuple(sorted(right)))
    value = acc / double_factorial(2 * k + 3)
    with _dvv_lock:
        _dvv_memo[memo_key] = value
    return value


def kappa_reduce(key: KappaPsiKey) -> list[ReductionTerm]:
    """Rewrite a kappa/psi correlator as an integer combination of pure-psi ones.

    The largest kappa index is eliminated first.
    """
    return _reduce(key, order=lambda kappas: 0)


def _reduce(key: KappaPsiKey, order) -> list[ReductionTerm]:
    acc: dict[CorrelatorKey, int] = defaultdict(int)
    stack = [(1, key.g, key.kappas, key.ks)]
    while stack:
        sign, g, kappas, ks = stack.pop()
        if not kappas:
            acc[CorrelatorKey(g, 0, ks)] += sign
            continue
        pick = order(kappas)
        a = kappas[pick]
        remaining = kappas[:pick] + kappas[pick + 1 :]
        # kappa_b on the smaller space pulls back to kappa_b - psi_new^b
        for r in range(len(remaining) + 1):
            for subset in combinations(range(len(remaining)), r):
                extra = sum(remaining[i] for i in subset)
                kept = tuple(remaining[i] for i in range(len(remaining)) if i not in subset)
                new_ks = ks + (a + 1 + extra,)
                stack.append(((-1) ** r * sign, g, kept, new_ks))
    terms = [ReductionTerm(c, k) for k, c in acc.items() if c]
    terms.sort(key=lambda t: (-t.key.n, tuple(-x for x in t.key.ks)))
    return terms


def oracle_intersection(key: CorrelatorKey) -> Fraction:
    """kappa reduction followed by DVV; zero if the dimension does not match."""
    if dimension_gap(key) != 0:
        return Fraction(0)
    total = Fraction(0)
    for term in kappa_reduce(KappaPsiKey.from_key(key)):
        if dimension_gap(term.key) == 0:
            total += term.coeff * dvv_intersection(term.key.g, term.key.ks)
    return total


def _pure(g: int, ks) -> Fraction:
    ks = tuple(ks)
    if not ks or not is_stable(g, len(ks)) or min(ks) < 0:
        return Fraction(0)
    return dvv_intersection(g, ks)


def _require_stable(g: int, ks: list[int]) -> None:
    if not ks or not is_stable(g, len(ks)):
        raise UnstableError(f"(g, n) = ({g}, {len(ks)}) is not stable")


def string_check(g: int, ks) -> bool:
    """``<tau0 prod tau_ki>_{g,n+1} == sum_j <tau_{kj-1} prod_{i != j} tau_ki>_{g,n}``."""
    ks = list(ks)
    _require_stable(g, ks)
    lhs = _pure(g, ks + [0])
    rhs = sum(
        (_pure(g, ks[:j] + [ks[j] - 1] + ks[j + 1 :]) for j in range(len(ks))),
        Fraction(0),
    )
    return lhs == rhs


def dilaton_check(g: int, ks) -> bool:
    """``<tau1 prod tau_ki>_{g,n+1} == (2g - 2 + n) <prod tau_ki>_{g,n}``."""
    ks = list(ks)
    _require_stable(g, ks)
    lhs = _pure(g, ks + [1])
    return lhs == (2 * g - 2 + len(ks)) * _pure(g, ks)
