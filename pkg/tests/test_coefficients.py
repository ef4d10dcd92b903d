from fractions import Fraction
from math import comb, pi

import pytest
from hypothesis import given, strategies as st

from mgn.coefficients import (
    BetaTable,
    ZetaValue,
    a_coeff,
    bernoulli,
    beta_coeff,
    beta_coeff_zeta_form,
    beta_table,
    double_factorial,
    f_kernel_value,
    zeta_pi_ratio,
)


def bernoulli_by_recurrence(m_max):
    """sum_{j=0}^{m} C(m+1, j) B_j = 0, B_0 = 1."""
    b = [Fraction(1)]
    for m in range(1, m_max + 1):
        b.append(-sum(comb(m + 1, j) * b[j] for j in range(m)) / (m + 1))
    return b


def test_bernoulli_small():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)


def test_bernoulli_matches_recurrence():
    ref = bernoulli_by_recurrence(60)
    assert [bernoulli(m) for m in range(61)] == ref


def test_bernoulli_rejects_negative():
    with pytest.raises(ValueError):
        bernoulli(-1)


@pytest.mark.parametrize("k, expected", [(-1, 1), (0, 1), (1, 1), (5, 15), (8, 8 * 6 * 4 * 2), (7, 105)])
def test_double_factorial(k, expected):
    assert double_factorial(k) == expected


def test_double_factorial_rejects_below_minus_one():
    with pytest.raises(ValueError):
        double_factorial(-2)


@pytest.mark.parametrize("l, expected", [(0, Fraction(1)), (1, Fraction(1, 3)), (2, Fraction(7, 90))])
def test_beta_values(l, expected):
    assert beta_coeff(l) == expected


@pytest.mark.parametrize("m, expected", [(0, Fraction(-1, 2)), (1, Fraction(1, 6)), (2, Fraction(1, 90)), (3, Fraction(1, 945))])
def test_zeta_pi_ratio_known_values(m, expected):
    assert zeta_pi_ratio(m) == expected


def test_beta_two_forms_agree():
    for l in range(31):
        assert beta_coeff(l) == beta_coeff_zeta_form(l)


def test_beta_table_grows_and_compares():
    t = beta_table(3)
    assert t == BetaTable([Fraction(1), Fraction(1, 3), Fraction(7, 90)])
    assert t[5] == beta_coeff(5)
    assert len(t) == 6


@pytest.mark.parametrize(
    "n, k, expected",
    [(2, 0, Fraction(3)), (2, 2, Fraction(1)), (3, 1, Fraction(15)), (2, -1, Fraction(0)), (2, 3, Fraction(0))],
)
def test_a_coeff_examples(n, k, expected):
    assert a_coeff(n, k) == expected


def test_a_coeff_recurrence_and_boundary():
    for n in range(31):
        assert a_coeff(n, 0) == double_factorial(2 * n - 1)
        for k in range(1, n + 1):
            assert a_coeff(n, k) == (a_coeff(n, k - 1) - a_coeff(n - 1, k - 2)) / k


def test_zeta_value_zero_argument():
    z = ZetaValue(Fraction(3), 0)
    assert z.pi_coefficient() == Fraction(-3, 2)
    assert float(z) == -1.5


def test_zeta_value_rejects_odd_argument():
    with pytest.raises(ValueError):
        ZetaValue(Fraction(1), 3)


def test_f_kernel_examples():
    assert f_kernel_value(1, 0, 1) == ZetaValue(Fraction(1))
    assert f_kernel_value(0, 0, 1).is_zero()
    v = f_kernel_value(1, 1, 0)
    assert v == ZetaValue(Fraction(28), 4)
    assert float(v) == pytest.approx(28 * pi**4 / 90, rel=1e-15)
    assert float(v) == pytest.approx(30.30505, abs=1e-5)


@given(st.integers(0, 10), st.integers(0, 10), st.integers(0, 25))
def test_f_kernel_symmetric(n, m, k):
    assert f_kernel_value(n, m, k) == f_kernel_value(m, n, k)


def test_f_kernel_linked_to_beta():
    for n in range(11):
        for m in range(11):
            for k in range(n + m):
                v = f_kernel_value(n, m, k)
                expected = double_factorial(2 * n - 1) * double_factorial(2 * m - 1) * beta_coeff(n + m - k)
                assert v.normalized() == expected
