"""Memoized exact evaluation of mixed kappa_1 / psi intersection numbers.

The recursion removes a distinguished marked point carrying ``tau_{k1}``::

    (2k1+1)!! <kappa1^k0 tau_k1 ... tau_kn>_g
        = sum over points j merging with point 1             (merge terms)
        + 1/2 sum over a non-separating pinch, genus g-1     (nonsep terms)
        + 1/2 sum over separating pinches g1 + g2 = g        (sep terms)

each weighted by ``beta_l`` and falling factorials of ``k0``.  The
``(g, n) = (0, 3)`` and ``(1, 1)`` correlators are axioms.
"""
from __future__ import annotations

import os
import threading
from collections import Counter, OrderedDict
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, factorial
from pathlib import Path
from typing import Iterator

from .coefficients import beta_coeff, double_factorial
from .keys import CorrelatorKey, dimension_gap, is_stable

__all__ = [
    "BoundExceededError",
    "BaseCaseError",
    "TermBreakdown",
    "CacheStats",
    "Engine",
    "default_engine",
    "intersection_number",
    "recursion_terms",
    "compute_table",
    "iter_keys",
    "partitions_into",
    "CACHE_HEADER",
]

CACHE_HEADER = "# mgn-cache v1"
DEFAULT_SAFETY_BOUND = 15

_ONE_24 = Fraction(1, 24)


class BoundExceededError(ValueError):
    pass


class BaseCaseError(ValueError):
    pass


@dataclass
class TermBreakdown:
    lhs_factor: Fraction
    boundary_terms: list[tuple[str, Fraction]]

    @property
    def total(self) -> Fraction:
        return sum((v for _, v in self.boundary_terms), Fraction(0))


@dataclass
class CacheStats:
    hits: int = 0
    misses: int = 0
    evictions: int = 0

    @property
    def hit_rate(self) -> float:
        total = self.hits + self.misses
        return self.hits / total if total else 0.0


def _falling(k0: int, l: int) -> int:
    return factorial(k0) // factorial(k0 - l)


def _base_value(g: int, n: int) -> Fraction | None:
    # callers have already checked the dimension gap
    if g == 0 and n == 3:
        return Fraction(1)
    if g == 1 and n == 1:
        return _ONE_24
    return None


def partitions_into(total: int, parts: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Nonincreasing tuples of ``parts`` nonnegative integers summing to ``total``."""
    if largest is None:
        largest = total
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(total, largest), -1, -1):
        if first * parts < total:
            break
        for tail in partitions_into(total - first, parts - 1, first):
            yield (first,) + tail


def iter_keys(max_dim: int, g_max: int, n_max: int) -> Iterator[CorrelatorKey]:
    """Dimension-matching keys in lexicographic ``(g, n, k0, ks)`` order."""
    for g in range(g_max + 1):
        for n in range(1, n_max + 1):
            dim = 3 * g - 3 + n
            if not is_stable(g, n) or dim > max_dim:
                continue
            for k0 in range(dim + 1):
                for ks in sorted(partitions_into(dim - k0, n)):
                    yield CorrelatorKey(g, k0, ks)


class Engine:
    """Recursion evaluator with a thread-safe memo cache.

    ``cache_cap`` bounds the number of cached entries (LRU eviction);
    ``None`` keeps everything.  Cached values never change results.
    """

    def __init__(self, cache_cap: int | None = None, safety_bound: int = DEFAULT_SAFETY_BOUND):
        if cache_cap is not None and cache_cap < 0:
            raise ValueError("cache_cap must be >= 0")
        self.cache_cap = cache_cap
        self.safety_bound = safety_bound
        self.stats = CacheStats()
        self._cache: OrderedDict[tuple, Fraction] = OrderedDict()
        self._lock = threading.Lock()

    # -- cache -------------------------------------------------------------

    def __len__(self) -> int:
        return len(self._cache)

    def clear(self) -> None:
        with self._lock:
            self._cache.clear()
            self.stats = CacheStats()

    def _lookup(self, ident: tuple) -> Fraction | None:
        with self._lock:
            value = self._cache.get(ident)
            if value is None:
                self.stats.misses += 1
            else:
                self.stats.hits += 1
                if self.cache_cap is not None:
                    self._cache.move_to_end(ident)
            return value

    def _store(self, ident: tuple, value: Fraction) -> None:
        if self.cache_cap == 0:
            return
        with self._lock:
            self._cache[ident] = value
            if self.cache_cap is not None:
                self._cache.move_to_end(ident)
                while len(self._cache) > self.cache_cap:
                    self._cache.popitem(last=False)
                    self.stats.evictions += 1

    def save(self, path: str | os.PathLike) -> None:
        with self._lock:
            items = sorted(self._cache.items(), key=lambda kv: (kv[0][0], len(kv[0][2]), kv[0][1], kv[0][2]))
        lines = [CACHE_HEADER]
        for (g, k0, ks), v in items:
            lines.append(f"{g} {k0} {','.join(map(str, ks))} {v.numerator}/{v.denominator}")
        Path(path).write_text("\n".join(lines) + "\n")

    def load(self, path: str | os.PathLike) -> int:
        """Merge records from a cache file; returns the number read."""
        text = Path(path).read_text().splitlines()
        if not text or text[0].strip() != CACHE_HEADER:
            raise ValueError(f"{path}: missing or unsupported cache header")
        count = 0
        for lineno, line in enumerate(text[1:], start=2):
            if not line.strip():
                continue
            try:
                g, k0, ks, value = line.split()
                num, den = value.split("/")
                ident = (int(g), int(k0), tuple(int(k) for k in ks.split(",")))
                self._store(ident, Fraction(int(num), int(den)))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: malformed cache record {line!r}") from exc
            count += 1
        return count

    # -- evaluation --------------------------------------------------------

    def value(self, g: int, k0: int, ks: tuple[int, ...]) -> Fraction:
        """Correlator value for raw data; zero for anything degenerate."""
        n = len(ks)
        if g < 0 or k0 < 0 or n == 0 or not is_stable(g, n):
            return Fraction(0)
        if min(ks) < 0:
            return Fraction(0)
        if 3 * g - 3 + n != k0 + sum(ks):
            return Fraction(0)
        base = _base_value(g, n)
        if base is not None:
            return base
        ks = tuple(sorted(ks, reverse=True))
        ident = (g, k0, ks)
        cached = self._lookup(ident)
        if cached is not None:
            return cached
        result = self._evaluate(g, k0, ks, ks[0])
        self._store(ident, result)
        return result

    def intersection_number(self, key: CorrelatorKey, first: int | None = None) -> Fraction:
        """``<kappa1^k0 prod tau_ki>_g`` as an exact rational.

        ``first`` binds the distinguished point to a point with that exponent
        instead of the default maximal one (used to check slot independence).
        """
        if first is None:
            return self.value(key.g, key.k0, key.ks)
        if first not in key.ks:
            raise ValueError(f"exponent {first} does not occur in {key.ks}")
        if dimension_gap(key) != 0:
            return Fraction(0)
        base = _base_value(key.g, key.n)
        if base is not None:
            return base
        return self._evaluate(key.g, key.k0, key.ks, first)

    def _evaluate(self, g: int, k0: int, ks: tuple[int, ...], k1: int) -> Fraction:
        rest = list(ks)
        rest.remove(k1)
        counts = Counter(rest)
        value = self.value
        total = Fraction(0)

        for l in range(k0 + 1):
            beta = beta_coeff(l)
            fall = _falling(k0, l)
            k0r = k0 - l

            # point-merging terms, grouped by equal exponents
            for kj, mult in counts.items():
                merged = list(rest)
                merged.remove(kj)
                merged.append(k1 + kj + l - 1)
                sub = value(g, k0r, tuple(merged))
                if sub:
                    w = fall * double_factorial(2 * (l + k1 + kj) - 1) // double_factorial(2 * kj - 1)
                    total += mult * w * beta * sub

            dsum = l + k1 - 2
            if dsum < 0:
                continue

            # non-separating pinch
            if g >= 1:
                acc = 0
                for d1 in range(dsum + 1):
                    d2 = dsum - d1
                    sub = value(g - 1, k0r, tuple(rest) + (d1, d2))
                    if sub:
                        acc += double_factorial(2 * d1 + 1) * double_factorial(2 * d2 + 1) * sub
                if acc:
                    total += Fraction(fall, 2) * beta * acc

            # separating pinch over sub-multisets of the remaining points
            total += beta * Fraction(factorial(k0), 2) * self._separating(g, k0r, dsum, counts)

        return total / double_factorial(2 * k1 + 1)

    def _separating(self, g: int, k0r: int, dsum: int, counts: Counter) -> Fraction:
        exps = sorted(counts)
        acc = Fraction(0)
        value = self.value
        for choice in product(*(range(counts[e] + 1) for e in exps)):
            mult = 1
            side_i: list[int] = []
            side_j: list[int] = []
            for e, c in zip(exps, choice):
                mult *= comb(counts[e], c)
                side_i.extend([e] * c)
                side_j.extend([e] * (counts[e] - c))
            sum_i = sum(side_i)
            for g1 in range(g + 1):
                g2 = g - g1
                if not is_stable(g1, len(side_i) + 1) or not is_stable(g2, len(side_j) + 1):
                    continue
                for d1 in range(dsum + 1):
                    m0 = 3 * g1 - 2 + len(side_i) - d1 - sum_i
                    n0 = k0r - m0
                    if m0 < 0 or n0 < 0:
                        continue
                    left = value(g1, m0, tuple(side_i) + (d1,))
                    if not left:
                        continue
                    d2 = dsum - d1
                    right = value(g2, n0, tuple(side_j) + (d2,))
                    if not right:
                        continue
                    w = double_factorial(2 * d1 + 1) * double_factorial(2 * d2 + 1)
                    acc += Fraction(mult * w, factorial(m0) * factorial(n0)) * left * right
        return acc

    # -- diagnostics -------------------------------------------------------

    def recursion_terms(self, key: CorrelatorKey) -> TermBreakdown:
        """Every nonzero summand of the recursion for ``key``, labeled point by point.

        Point 1 is the distinguished point (maximal exponent); points
        ``2..n`` follow in the canonical order of the remaining exponents.
        """
        if dimension_gap(key) != 0:
            raise ValueError(f"{key} has nonzero dimension gap")
        if _base_value(key.g, key.n) is not None:
            raise BaseCaseError(f"{key} is a base case of the recursion")
        g, k0 = key.g, key.k0
        k1 = key.ks[0]
        rest = list(key.ks[1:])
        labels = list(range(2, key.n + 1))
        value = self.value
        terms: list[tuple[str, Fraction]] = []

        for l in range(k0 + 1):
            beta = beta_coeff(l)
            fall = _falling(k0, l)
            for pos, (j, kj) in enumerate(zip(labels, rest)):
                others = rest[:pos] + rest[pos + 1 :]
                sub = value(g, k0 - l, tuple(others) + (k1 + kj + l - 1,))
                w = fall * double_factorial(2 * (l + k1 + kj) - 1) // double_factorial(2 * kj - 1)
                t = w * beta * sub
                if t:
                    terms.append((f"merge j={j}, l={l}", t))

            dsum = l + k1 - 2
            if dsum < 0:
                continue
            for d1 in range(dsum + 1):
                d2 = dsum - d1
                w = double_factorial(2 * d1 + 1) * double_factorial(2 * d2 + 1)
                if g >= 1:
                    t = Fraction(fall * w, 2) * beta * value(g - 1, k0 - l, tuple(rest) + (d1, d2))
                    if t:
                        terms.append((f"nonsep d=({d1},{d2}), l={l}", t))
            for mask in range(1 << len(rest)):
                side_i = [rest[p] for p in range(len(rest)) if mask >> p & 1]
                side_j = [rest[p] for p in range(len(rest)) if not mask >> p & 1]
                names = "{" + ",".join(str(labels[p]) for p in range(len(rest)) if mask >> p & 1) + "}"
                for g1 in range(g + 1):
                    for d1 in range(dsum + 1):
                        d2 = dsum - d1
                        m0 = 3 * g1 - 2 + len(side_i) - d1 - sum(side_i)
                        n0 = k0 - l - m0
                        if m0 < 0 or n0 < 0:
                            continue
                        w = double_factorial(2 * d1 + 1) * double_factorial(2 * d2 + 1)
                        t = (
                            Fraction(factorial(k0) * w, 2 * factorial(m0) * factorial(n0))
                            * beta
                            * value(g1, m0, tuple(side_i) + (d1,))
                            * value(g - g1, n0, tuple(side_j) + (d2,))
                        )
                        if t:
                            terms.append((f"sep g1={g1}, I={names}, d=({d1},{d2}), l={l}", t))

        return TermBreakdown(Fraction(double_factorial(2 * k1 + 1)), terms)

    def compute_table(
        self, max_dim: int, g_max: int, n_max: int
    ) -> list[tuple[CorrelatorKey, Fraction]]:
        if max_dim > self.safety_bound:
            raise BoundExceededError(
                f"max_dim {max_dim} exceeds the safety bound {self.safety_bound}"
            )
        return [(key, self.intersection_number(key)) for key in iter_keys(max_dim, g_max, n_max)]


_default = Engine()


def default_engine() -> Engine:
    return _default


def intersection_number(key: CorrelatorKey) -> Fraction:
    return _default.intersection_number(key)


def recursion_terms(key: CorrelatorKey) -> TermBreakdown:
    return _default.recursion_terms(key)


def compute_table(max_dim: int, g_max: int, n_max: int) -> list[tuple[CorrelatorKey, Fraction]]:
    return _default.compute_table(max_dim, g_max, n_max)
