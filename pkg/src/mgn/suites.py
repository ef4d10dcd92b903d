"""Verification suites shared by the ``verify`` subcommand."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import kernels
from .engine import Engine, default_engine, iter_keys
from .keys import is_stable
from .oracles import dilaton_check, dvv_intersection, oracle_intersection, string_check

__all__ = ["CheckResult", "SuiteReport", "SUITES", "run_suite"]


@dataclass
class CheckResult:
    label: str
    ok: bool
    detail: str = ""


@dataclass
class SuiteReport:
    name: str
    results: list[CheckResult] = field(default_factory=list)

    @property
    def failed(self) -> int:
        return sum(not r.ok for r in self.results)

    @property
    def passed(self) -> int:
        return len(self.results) - self.failed


def _dvv(engine: Engine, tol: float) -> Iterator[CheckResult]:
    for key in iter_keys(6, 3, 9):
        if key.k0:
            continue
        got = engine.intersection_number(key)
        want = dvv_intersection(key.g, key.ks)
        yield CheckResult(str(key), got == want, f"engine={got} dvv={want}")


def _kappa(engine: Engine, tol: float) -> Iterator[CheckResult]:
    for key in iter_keys(5, 2, 8):
        if not 1 <= key.k0 <= 3:
            continue
        got = engine.intersection_number(key)
        want = oracle_intersection(key)
        yield CheckResult(str(key), got == want, f"engine={got} oracle={want}")


def _string_dilaton(engine: Engine, tol: float) -> Iterator[CheckResult]:
    # keys are the left-hand sides; drop one tau0 / tau1 to get the smaller key
    for key in iter_keys(6, 3, 9):
        if key.k0:
            continue
        for removed, check, name in ((0, string_check, "string"), (1, dilaton_check, "dilaton")):
            if removed not in key.ks or not is_stable(key.g, key.n - 1):
                continue
            rest = list(key.ks)
            rest.remove(removed)
            yield CheckResult(f"{name} {key}", check(key.g, rest))


def _kernel(engine: Engine, tol: float) -> Iterator[CheckResult]:
    cfg = kernels.KernelEvalConfig(tolerance=tol)
    for n, m in itertools.product(range(4), repeat=2):
        for k in range(n + m + 1):
            try:
                closed, series = kernels.verify_corollary(n, m, k, cfg)
            except kernels.NonConvergenceError as exc:
                yield CheckResult(f"corollary n={n} m={m} k={k}", False, str(exc))
                continue
            yield CheckResult(
                f"corollary n={n} m={m} k={k}", abs(closed - series) <= tol, f"{closed!r} vs {series!r}"
            )
    for n, alpha, x in itertools.product(range(4), (0.5, 1.0, 2.0), (0.0, 1.0)):
        label = f"P^{n} exp(-{alpha} x) at x={x}"
        try:
            closed, numeric = kernels.verify_p_exponential(n, alpha, x, cfg)
        except kernels.NonConvergenceError as exc:
            yield CheckResult(label, False, str(exc))
            continue
        yield CheckResult(label, abs(closed - numeric) <= tol, f"{closed!r} vs {numeric!r}")
    xs = np.random.default_rng(0).uniform(-50, 50, 1000)
    err = float(np.max(np.abs(kernels.eval_h(xs) + kernels.eval_h(-xs) - 2.0)))
    yield CheckResult("h(x) + h(-x) = 2", err <= 4 * np.finfo(float).eps, f"max error {err:.2e}")
    grid = np.linspace(0.5, 10.0, 20)
    err = max(abs(kernels.eval_R(x, 0.0, z) - kernels.eval_D(x, 0.0, z)) for x in grid for z in grid)
    yield CheckResult("R(x,0,z) = D(x,0,z)", err <= 1e-12, f"max error {err:.2e}")


SUITES = {
    "dvv": _dvv,
    "kappa": _kappa,
    "kernel": _kernel,
    "string-dilaton": _string_dilaton,
}


def run_suite(name: str, tol: float = 1e-8, engine: Engine | None = None) -> list[SuiteReport]:
    engine = engine or default_engine()
    names = list(SUITES) if name == "all" else [name]
    return [SuiteReport(s, list(SUITES[s](engine, tol))) for s in names]
