"""Tests for the theta product and the elliptic shifted factorial."""

from __future__ import annotations

import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellsum import (
    EllipticNome,
    PochhammerPoleError,
    ThetaDomainError,
    TruncationBudgetError,
    TruncationPolicy,
    elliptic_pochhammer,
    ipow,
    pochhammer_product,
    relative_error,
    theta,
    theta_product,
)


def nome(p, q=0.5, **policy):
    return EllipticNome(p, q, TruncationPolicy(**policy) if policy else TruncationPolicy())


# ---------------------------------------------------------------------------
# theta
# ---------------------------------------------------------------------------


def test_theta_trigonometric_value():
    assert theta(0.5, nome(0.0)) == 0.5


def test_theta_vanishes_at_one():
    assert theta(1.0, nome(0.2)) == 0.0


def test_theta_direct_product_oracle():
    # Oracle: multiply (1 - p^j z)(1 - p^{j+1}/z) until |p|^j < 1e-17.
    p, z = 0.1, 2.0
    expected = 1.0
    pj = 1.0
    while pj >= 1e-17:
        expected *= (1.0 - pj * z) * (1.0 - pj * p / z)
        pj *= p
    frozen = -0.7390187237138385  # the oracle's value, high-precision checked
    assert abs(expected - frozen) < 1e-12 * abs(frozen)
    value = theta(2.0, nome(0.1))
    assert abs(value - frozen) < 1e-12 * abs(frozen)


def test_theta_zero_argument_rejected():
    with pytest.raises(ThetaDomainError):
        theta(0.0, nome(0.2))


def test_theta_zero_argument_allowed_trigonometric():
    assert theta(0.0, nome(0.0)) == 1.0


def test_theta_truncation_budget():
    tight = EllipticNome(0.99, 0.5, TruncationPolicy(max_terms=5))
    with pytest.raises(TruncationBudgetError):
        theta(0.7, tight)


def test_theta_deterministic_for_fixed_policy():
    n = nome(0.37 + 0.11j)
    assert theta(1.7 - 0.4j, n) == theta(1.7 - 0.4j, n)


def test_nome_validation():
    with pytest.raises(ValueError):
        EllipticNome(1.0, 0.5)
    with pytest.raises(ValueError):
        EllipticNome(0.2, 0.0)
    with pytest.raises(ValueError):
        TruncationPolicy(epsilon=0.0)
    with pytest.raises(ValueError):
        TruncationPolicy(max_terms=0)


def test_theta_product_empty_and_singleton():
    n = nome(0.2)
    assert theta_product([], n) == 1.0
    assert theta_product([1.3], n) == theta(1.3, n)


def test_theta_product_trigonometric_square():
    assert theta_product([0.5, 0.5], nome(0.0)) == pytest.approx(0.25)


# ---------------------------------------------------------------------------
# elliptic shifted factorial
# ---------------------------------------------------------------------------


def test_pochhammer_shift_zero_and_one():
    n = nome(0.2)
    assert elliptic_pochhammer(0.7, 0, n) == 1.0
    assert elliptic_pochhammer(0.7, 1, n) == theta(0.7, n)


def test_pochhammer_negative_one():
    n = nome(0.2, 0.6)
    value = elliptic_pochhammer(0.7, -1, n)
    assert value == pytest.approx(1.0 / theta(0.7 / 0.6, n))


def test_pochhammer_trigonometric_oracle():
    # (0.3)_3 at p = 0, q = 0.5 is (1 - 0.3)(1 - 0.15)(1 - 0.075).
    value = elliptic_pochhammer(0.3, 3, nome(0.0, 0.5))
    assert value == pytest.approx(0.7 * 0.85 * 0.925, rel=1e-15)


def test_pochhammer_zero_base_rejected():
    with pytest.raises(ThetaDomainError):
        elliptic_pochhammer(0.0, 2, nome(0.2))


def test_pochhammer_pole_reports_factor_index():
    # (q)_{-1} = 1/theta(1) divides by the zero of theta at 1.
    n = nome(0.2, 0.6)
    with pytest.raises(PochhammerPoleError) as excinfo:
        elliptic_pochhammer(0.6, -1, n)
    assert excinfo.value.factor_index == -1
    assert excinfo.value.shift == -1


def test_pochhammer_product_empty_singleton_pair():
    n = nome(0.1, 0.7)
    assert pochhammer_product([], 5, n) == 1.0
    assert pochhammer_product([0.4], 3, n) == elliptic_pochhammer(0.4, 3, n)
    pair = pochhammer_product([0.4, 1.2], 2, n)
    oracle = elliptic_pochhammer(0.4, 2, n) * elliptic_pochhammer(1.2, 2, n)
    assert pair == pytest.approx(oracle, rel=1e-15)


# ---------------------------------------------------------------------------
# integer powers
# ---------------------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=-40, max_value=40),
       st.integers(min_value=-40, max_value=40))
def test_ipow_adds_exponents(m, k):
    z = 0.8 + 0.3j
    assert relative_error(ipow(z, m + k), ipow(z, m) * ipow(z, k)) < 1e-12


def test_ipow_matches_builtin():
    for exponent in range(-12, 13):
        assert cmath.isclose(ipow(1.1 - 0.2j, exponent), (1.1 - 0.2j) ** exponent,
                             rel_tol=1e-13)
