"""Correlator keys, stability predicates and the bracket text format.

A correlator ``<kappa1^k0 tau_k1 ... tau_kn>_g`` is identified by its genus,
the power of kappa_1 and the multiset of psi exponents.  Marked points are
unlabeled: the exponents are stored sorted in descending order.

Text form::

    <kappa1^2 tau0 tau1^2>_1
    <kappa1^2 tau0 tau1^2>_g=1     (also accepted on input)
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

__all__ = [
    "CorrelatorKey",
    "KappaPsiKey",
    "UnstableError",
    "EmptyPointsError",
    "CorrelatorSyntaxError",
    "UnknownClassError",
    "is_stable",
    "canonicalize",
    "dimension_gap",
    "format_key",
    "parse_key",
]


class UnstableError(ValueError):
    """Raised for ``(g, n)`` with ``2g - 2 + n <= 0``."""


class EmptyPointsError(ValueError):
    """Raised for keys without marked points (n = 0 is not supported)."""


class CorrelatorSyntaxError(ValueError):
    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


class UnknownClassError(CorrelatorSyntaxError):
    pass


def is_stable(g: int, n: int) -> bool:
    return 2 * g - 2 + n > 0


def _check(g: int, n: int) -> None:
    if g < 0:
        raise ValueError(f"genus must be >= 0, got {g}")
    if n == 0:
        raise EmptyPointsError("correlators need at least one marked point")
    if not is_stable(g, n):
        raise UnstableError(f"(g, n) = ({g}, {n}) is not stable")


@dataclass(frozen=True, order=False)
class CorrelatorKey:
    g: int
    k0: int
    ks: tuple[int, ...]

    def __post_init__(self) -> None:
        ks = tuple(sorted((int(k) for k in self.ks), reverse=True))
        object.__setattr__(self, "ks", ks)
        if self.k0 < 0 or any(k < 0 for k in ks):
            raise ValueError(f"exponents must be nonnegative: k0={self.k0}, ks={ks}")
        _check(self.g, len(ks))

    @property
    def n(self) -> int:
        return len(self.ks)

    @property
    def dim(self) -> int:
        """Complex dimension ``3g - 3 + n`` of the moduli space."""
        return 3 * self.g - 3 + self.n

    def sort_key(self) -> tuple:
        return (self.g, self.n, self.k0, self.ks)

    def __str__(self) -> str:
        return format_key(self)


@dataclass(frozen=True)
class KappaPsiKey:
    """Key carrying arbitrary ``kappa_a`` factors; used by the reduction oracle."""

    g: int
    kappas: tuple[int, ...]
    ks: tuple[int, ...]

    def __post_init__(self) -> None:
        kappas = tuple(sorted((int(a) for a in self.kappas), reverse=True))
        ks = tuple(sorted((int(k) for k in self.ks), reverse=True))
        if any(a < 1 for a in kappas):
            raise ValueError(f"kappa indices must be >= 1, got {kappas}")
        if any(k < 0 for k in ks):
            raise ValueError(f"psi exponents must be >= 0, got {ks}")
        if not is_stable(self.g, len(ks)):
            raise UnstableError(f"(g, n) = ({self.g}, {len(ks)}) is not stable")
        object.__setattr__(self, "kappas", kappas)
        object.__setattr__(self, "ks", ks)

    @classmethod
    def from_key(cls, key: CorrelatorKey) -> "KappaPsiKey":
        return cls(key.g, (1,) * key.k0, key.ks)

    def to_key(self) -> CorrelatorKey:
        if any(a != 1 for a in self.kappas):
            raise ValueError("only kappa_1 factors convert to a CorrelatorKey")
        return CorrelatorKey(self.g, len(self.kappas), self.ks)


def canonicalize(g: int, k0: int, ks: Iterable[int]) -> CorrelatorKey:
    return CorrelatorKey(g, k0, tuple(ks))


def dimension_gap(key: CorrelatorKey) -> int:
    """``dim - degree``; the correlator vanishes unless this is zero."""
    return key.dim - key.k0 - sum(key.ks)


def format_key(key: CorrelatorKey) -> str:
    parts = []
    if key.k0:
        parts.append("kappa1" if key.k0 == 1 else f"kappa1^{key.k0}")
    for a, m in sorted(Counter(key.ks).items()):
        parts.append(f"tau{a}" if m == 1 else f"tau{a}^{m}")
    return f"<{' '.join(parts)}>_{key.g}"


_TOKEN = re.compile(
    r"(?P<space>\s+)"
    r"|(?P<kappa>kappa(?P<kidx>\d+)(?:\^(?P<kexp>\d+))?)"
    r"|(?P<tau>tau_?(?:\{(?P<tbr>\d+)\}|(?P<tidx>\d+))(?:\^(?P<texp>\d+))?)"
)
_SUFFIX = re.compile(r">_(?:g=)?(?P<g>\d+)\s*$")


def parse_key(text: str) -> CorrelatorKey:
    """Parse the bracket form, e.g. ``<kappa1^2 tau0 tau0>_g=1``.

    Offsets in :class:`CorrelatorSyntaxError` are byte offsets into ``text``.
    """
    raw = text
    start = len(text) - len(text.lstrip())
    text = text.rstrip()
    if not text[start:].startswith("<"):
        raise CorrelatorSyntaxError("expected '<'", _byte_offset(raw, start), raw)
    close = text.rfind(">")
    if close < 0:
        raise CorrelatorSyntaxError("missing '>'", _byte_offset(raw, len(text)), raw)
    suffix = _SUFFIX.match(text, close)
    if suffix is None:
        raise CorrelatorSyntaxError(
            "expected '_g=<genus>' after '>'", _byte_offset(raw, close + 1), raw
        )
    g = int(suffix["g"])

    k0 = 0
    ks: list[int] = []
    pos = start + 1
    seen_factor = False
    while pos < close:
        m = _TOKEN.match(text, pos, close)
        if m is None:
            raise CorrelatorSyntaxError("unexpected character", _byte_offset(raw, pos), raw)
        if m.lastgroup == "space" or m["space"]:
            pos = m.end()
            continue
        if seen_factor and not text[pos - 1].isspace():
            raise CorrelatorSyntaxError("factors must be space separated", _byte_offset(raw, pos), raw)
        if m["kappa"]:
            if m["kidx"] != "1":
                raise UnknownClassError(
                    f"unsupported class kappa{m['kidx']}", _byte_offset(raw, pos), raw
                )
            k0 += int(m["kexp"]) if m["kexp"] else 1
        else:
            idx = int(m["tbr"] if m["tbr"] is not None else m["tidx"])
            ks.extend([idx] * (int(m["texp"]) if m["texp"] else 1))
        seen_factor = True
        pos = m.end()
    return CorrelatorKey(g, k0, tuple(ks))


def _byte_offset(text: str, char_index: int) -> int:
    return len(text[:char_index].encode("utf-8"))
