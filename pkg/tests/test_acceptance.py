"""Acceptance criteria; one PASS/FAIL line per criterion in the terminal summary."""
import random
import time
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from mgn import kernels
from mgn.coefficients import a_coeff, beta_coeff, beta_coeff_zeta_form, double_factorial, f_kernel_value
from mgn.engine import Engine, iter_keys, partitions_into
from mgn.keys import canonicalize, is_stable, parse_key
from mgn.oracles import dvv_intersection, genus0_closed_form, oracle_intersection
from mgn.volumes import volume_polynomial

from conftest import ACCEPTANCE_LINES

F = Fraction


@pytest.fixture
def criterion(request):
    record = {"ok": False, "note": ""}
    yield record
    name = request.node.name.removeprefix("test_")
    status = "PASS" if record["ok"] else "FAIL"
    ACCEPTANCE_LINES.append(f"{status} {name}{': ' + record['note'] if record['note'] else ''}")
    print(ACCEPTANCE_LINES[-1])


def test_c1_genus0_exactness(criterion):
    engine = Engine()
    start = time.perf_counter()
    count = 0
    for n in range(4, 9):
        for ks in partitions_into(n - 3, n):
            assert engine.intersection_number(canonicalize(0, 0, ks)) == genus0_closed_form(ks), ks
            count += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 10
    criterion.update(ok=True, note=f"{count} keys, {elapsed:.2f}s")


def test_c2_dvv_equivalence(criterion):
    engine = Engine()
    start = time.perf_counter()
    count = 0
    for key in iter_keys(6, 3, 9):
        if key.k0 == 0:
            assert engine.intersection_number(key) == dvv_intersection(key.g, key.ks), key
            count += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 30
    criterion.update(ok=True, note=f"{count} keys, {elapsed:.2f}s")


def test_c3_kappa_oracle_equivalence(criterion):
    engine = Engine()
    start = time.perf_counter()
    count = 0
    for key in iter_keys(5, 2, 8):
        if 1 <= key.k0 <= 3:
            assert engine.intersection_number(key) == oracle_intersection(key), key
            count += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 60
    criterion.update(ok=True, note=f"{count} keys, {elapsed:.2f}s")


NAMED = [
    ("<tau0^3>_g=0", F(1)),
    ("<tau1>_g=1", F(1, 24)),
    ("<tau0 tau2>_g=1", F(1, 24)),
    ("<kappa1 tau0^4>_g=0", F(1)),
    ("<kappa1 tau1 tau0>_g=1", F(1, 12)),
    ("<kappa1^2 tau0^2>_g=1", F(1, 8)),
    ("<tau4>_g=2", F(1, 1152)),
]


def test_c4_named_values(criterion):
    engine = Engine()
    for text, expected in NAMED:
        assert engine.intersection_number(parse_key(text)) == expected, text
    criterion.update(ok=True, note=f"{len(NAMED)} values")


def _sympy_volume(g, n):
    poly = volume_polynomial(g, n, Engine())
    Ls = sp.symbols(f"L1:{n + 1}")
    pi = sp.Symbol("pi")
    expr = sum(
        sp.Rational(q.numerator, q.denominator) * pi**p * sp.Mul(*(L ** (2 * e) for L, e in zip(Ls, exps)))
        for (exps, p), q in poly.terms.items()
    )
    return sp.expand(expr), Ls, pi


def test_c5_volume_polynomials(criterion):
    expr, (L,), pi = _sympy_volume(1, 1)
    assert sp.expand(expr - (pi**2 / 12 + L**2 / 48)) == 0
    expr, Ls, pi = _sympy_volume(0, 4)
    assert sp.expand(expr - (2 * pi**2 + sum(x**2 for x in Ls) / 2)) == 0
    expr, (L1, L2), pi = _sympy_volume(1, 2)
    a = L1**2 + L2**2
    assert sp.expand(expr - (4 * pi**2 + a) * (12 * pi**2 + a) / 192) == 0
    criterion.update(ok=True, note="V11, V04, V12 exact")


def test_c6_coefficient_identities(criterion):
    for l in range(31):
        assert beta_coeff(l) == beta_coeff_zeta_form(l)
    for n in range(31):
        for k in range(1, n + 1):
            assert a_coeff(n, k) == (a_coeff(n, k - 1) - a_coeff(n - 1, k - 2)) / k
        assert a_coeff(n, 0) == double_factorial(2 * n - 1)
    for n in range(11):
        for m in range(11):
            for k in range(n + m):
                expected = double_factorial(2 * n - 1) * double_factorial(2 * m - 1) * beta_coeff(n + m - k)
                assert f_kernel_value(n, m, k).normalized() == expected
    criterion.update(ok=True, note="beta l<=30, A n<=30, f/beta n,m<=10")


def test_c7_kernel_numerics(criterion):
    cfg = kernels.KernelEvalConfig(tolerance=1e-8)
    worst_cor = 0.0
    for n in range(4):
        for m in range(4):
            for k in range(n + m + 1):
                closed, series = kernels.verify_corollary(n, m, k, cfg)
                worst_cor = max(worst_cor, abs(closed - series))
    assert worst_cor <= 1e-8

    cfg_p = kernels.KernelEvalConfig(tolerance=1e-9)
    worst_p = 0.0
    for n in range(4):
        for alpha in (0.5, 1.0, 2.0):
            for x in (0.0, 1.0):
                closed, numeric = kernels.verify_p_exponential(n, alpha, x, cfg_p)
                worst_p = max(worst_p, abs(closed - numeric))
    assert worst_p <= 1e-9

    xs = np.random.default_rng(7).uniform(-50, 50, 1000)
    worst_h = float(np.max(np.abs(kernels.eval_h(xs) + kernels.eval_h(-xs) - 2.0)))
    assert worst_h <= 4 * np.finfo(float).eps

    grid = np.linspace(0.5, 10.0, 20)
    worst_rd = max(abs(kernels.eval_R(x, 0.0, z) - kernels.eval_D(x, 0.0, z)) for x in grid for z in grid)
    assert worst_rd <= 1e-12
    criterion.update(
        ok=True,
        note=f"corollary {worst_cor:.1e}, P-exp {worst_p:.1e}, h-sym {worst_h:.1e}, R=D {worst_rd:.1e}",
    )


def test_c8_property_suites(criterion):
    engine = Engine()

    def pure(g, ks):
        if not ks or min(ks) < 0 or not is_stable(g, len(ks)):
            return F(0)
        return engine.intersection_number(canonicalize(g, 0, ks))

    relations = 0
    for key in iter_keys(6, 3, 9):
        if key.k0 or not is_stable(key.g, key.n - 1):
            continue
        value = engine.intersection_number(key)
        if 0 in key.ks:
            rest = list(key.ks)
            rest.remove(0)
            assert value == sum((pure(key.g, rest[:j] + [rest[j] - 1] + rest[j + 1 :]) for j in range(len(rest))), F(0))
            relations += 1
        if 1 in key.ks:
            rest = list(key.ks)
            rest.remove(1)
            assert value == (2 * key.g - 2 + len(rest)) * pure(key.g, rest)
            relations += 1

    rnd = random.Random(2024)
    keys = [rnd.choice(list(iter_keys(5, 2, 8))) for _ in range(120)]
    for key in keys:
        value = engine.intersection_number(key)
        ks = list(key.ks)
        rnd.shuffle(ks)
        assert engine.intersection_number(canonicalize(key.g, key.k0, ks)) == value
        for first in set(key.ks):
            assert engine.intersection_number(key, first=first) == value

    table = engine.compute_table(9, 4, 12)
    assert all(v > 0 for _, v in table)
    criterion.update(ok=True, note=f"{relations} string/dilaton relations, 120 random keys, {len(table)} positive entries")


def test_c9_performance(criterion):
    engine = Engine()
    start = time.perf_counter()
    table = engine.compute_table(9, 4, 12)
    elapsed = time.perf_counter() - start
    assert elapsed < 60
    s = engine.stats
    assert s.hits > 0
    criterion.update(
        ok=True,
        note=f"{len(table)} entries in {elapsed:.2f}s; cache hits={s.hits} misses={s.misses} hit-rate={s.hit_rate:.3f}",
    )
