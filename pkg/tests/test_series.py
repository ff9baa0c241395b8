"""
Truncated power series
"""
import logging
import math
from fractions import Fraction

import numpy as np
import pytest
from pydantic import ValidationError

from core.errors import ArgumentError, DomainError, SeriesOverflowError
from schemas.series import SeriesPoly
from services.series_service import (
    eval_at_scale,
    required_order,
    series_add,
    series_derivative,
    series_eval_real,
    series_exp,
    series_log,
    series_mul,
    series_resize,
    series_shift,
)


def poly(*coeffs):
    return SeriesPoly.from_coeffs(coeffs)


# ============================================
# SCHEMA
# ============================================

def test_length_must_match_order():
    with pytest.raises(ValidationError):
        SeriesPoly(order=3, coeffs=[1.0, 2.0])


def test_non_finite_coefficients_rejected():
    with pytest.raises(ValidationError):
        poly(1.0, math.nan)


def test_coefficients_are_read_only():
    P = poly(1.0, 2.0)
    with pytest.raises(ValueError):
        P.coeffs[0] = 5.0


def test_fraction_entries_switch_on_exact_mode():
    assert poly(Fraction(1), Fraction(1, 2)).exact
    assert not poly(1.0, 0.5).exact


# ============================================
# ARITHMETIC
# ============================================

@pytest.mark.parametrize(
    "a, b, expected",
    [
        ([1, 1, 0], [1, -1, 0], [1, 0, -1]),
        ([1, 1, 1], [1, 1, 1], [1, 2, 3]),
        ([3, -2, 5], [1, 0, 0], [3, -2, 5]),
    ],
)
def test_series_mul_examples(a, b, expected):
    assert np.allclose(series_mul(poly(*a), poly(*b)).coeffs, expected)


def test_series_mul_needs_equal_orders():
    with pytest.raises(ArgumentError):
        series_mul(poly(1, 1), poly(1, 1, 1))


def test_series_mul_exact():
    out = series_mul(poly(Fraction(1), Fraction(1, 2)), poly(Fraction(1), Fraction(1, 2)))
    assert list(out.coeffs) == [Fraction(1), Fraction(1)]


def test_series_add():
    assert np.allclose(series_add(poly(1, 2), poly(3, -2)).coeffs, [4, 0])


def test_series_exp_of_z():
    out = series_exp(poly(0, 1, 0, 0))
    assert np.allclose(out.coeffs, [1, 1, 1 / 2, 1 / 6])


def test_series_exp_geometric():
    q = [0.0] + [1.0 / k for k in range(1, 6)]
    assert np.allclose(series_exp(poly(*q)).coeffs, np.ones(6))


def test_series_exp_binomial():
    q = [0.0] + [2.0 / k for k in range(1, 5)]
    assert np.allclose(series_exp(poly(*q)).coeffs, [1, 2, 3, 4, 5])


def test_series_exp_exact():
    q = [Fraction(0)] + [Fraction(2, k) for k in range(1, 5)]
    assert list(series_exp(poly(*q)).coeffs) == [1, 2, 3, 4, 5]


def test_series_exp_exact_needs_zero_constant():
    with pytest.raises(DomainError):
        series_exp(poly(Fraction(1), Fraction(1)))


def test_series_exp_overflow():
    with pytest.raises(SeriesOverflowError):
        series_exp(poly(0.0, 1e300, 0.0, 0.0))


def test_series_log_examples():
    assert np.allclose(series_log(poly(1, 1, 1, 1, 1)).coeffs, [0, 1, 1 / 2, 1 / 3, 1 / 4])
    assert np.allclose(series_log(poly(1, 0, 0)).coeffs, [0, 0, 0])
    assert np.allclose(series_log(poly(1, 1, 1 / 2, 1 / 6)).coeffs, [0, 1, 0, 0], atol=1e-15)


def test_series_log_exact_inverts_exp():
    P = poly(Fraction(1), Fraction(1), Fraction(1, 2), Fraction(1, 6))
    assert list(series_log(P).coeffs) == [0, 1, 0, 0]


def test_series_log_needs_positive_constant():
    with pytest.raises(DomainError):
        series_log(poly(0, 1, 1))
    with pytest.raises(DomainError):
        series_log(poly(-1, 1))


def test_exp_then_log_recovers_exponent(rng):
    q = np.concatenate([[0.0], rng.uniform(-1, 1, 30)])
    back = series_log(series_exp(SeriesPoly(order=30, coeffs=q)))
    assert np.allclose(back.coeffs, q, atol=1e-10)


@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
def test_exp_then_log_at_order_200(seed):
    q = np.random.default_rng(seed).uniform(-2, 2, 201)
    back = series_log(series_exp(SeriesPoly(order=200, coeffs=q)))
    assert np.max(np.abs(back.coeffs - q)) <= 1e-9


def test_exp_turns_sums_into_products(rng):
    A = SeriesPoly(order=40, coeffs=np.concatenate([[0.0], rng.uniform(-0.5, 0.5, 40)]))
    B = SeriesPoly(order=40, coeffs=np.concatenate([[0.0], rng.uniform(-0.5, 0.5, 40)]))
    lhs = series_exp(series_add(A, B)).coeffs
    rhs = series_mul(series_exp(A), series_exp(B)).coeffs
    assert np.max(np.abs(lhs - rhs)) <= 1e-9 * np.max(np.abs(lhs))


def test_derivative_is_linear(rng):
    a, b = rng.uniform(-1, 1, 21), rng.uniform(-1, 1, 21)
    combined = series_derivative(SeriesPoly(order=20, coeffs=2 * a - 3 * b)).coeffs
    parts = 2 * series_derivative(SeriesPoly(order=20, coeffs=a)).coeffs - 3 * series_derivative(
        SeriesPoly(order=20, coeffs=b)
    ).coeffs
    assert np.allclose(combined, parts, rtol=1e-12, atol=1e-12)


def test_derivative_product_rule(rng):
    A = SeriesPoly(order=25, coeffs=rng.uniform(-1, 1, 26))
    B = SeriesPoly(order=25, coeffs=rng.uniform(-1, 1, 26))
    lhs = series_derivative(series_mul(A, B)).coeffs
    rhs = series_add(
        series_mul(series_derivative(A), series_resize(B, 24)),
        series_mul(series_resize(A, 24), series_derivative(B)),
    ).coeffs
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12)


def test_derivative_product_rule_exact():
    A = poly(Fraction(1), Fraction(1, 2), Fraction(-1, 3))
    B = poly(Fraction(2), Fraction(0), Fraction(5, 7))
    lhs = series_derivative(series_mul(A, B)).coeffs
    rhs = series_add(
        series_mul(series_derivative(A), series_resize(B, 1)),
        series_mul(series_resize(A, 1), series_derivative(B)),
    ).coeffs
    assert list(lhs) == list(rhs)


def test_series_derivative_examples():
    assert np.allclose(series_derivative(poly(1, 1, 1, 1)).coeffs, [1, 2, 3])
    assert np.allclose(series_derivative(poly(0, 0, 1)).coeffs, [0, 2])
    assert np.allclose(series_derivative(poly(7, 0)).coeffs, [0])


def test_shift_and_resize():
    assert np.allclose(series_shift(poly(1, 2), 2).coeffs, [0, 0, 1, 2])
    assert np.allclose(series_resize(poly(1, 2, 3), 1).coeffs, [1, 2])
    assert np.allclose(series_resize(poly(1, 2), 3).coeffs, [1, 2, 0, 0])


# ============================================
# EVALUATION
# ============================================

def test_eval_geometric():
    value = series_eval_real(SeriesPoly(order=50, coeffs=np.ones(51)), 0.5)
    assert value == pytest.approx(2 - 2.0 ** -50, rel=1e-12)


def test_eval_at_zero_is_constant_term():
    assert series_eval_real(poly(3.5, 1, 2), 0.0) == 3.5


def test_eval_exp_series():
    coeffs = [1.0 / math.factorial(k) for k in range(31)]
    assert series_eval_real(poly(*coeffs), 0.9) == pytest.approx(math.exp(0.9), abs=1e-12)


def test_eval_exact_at_fraction():
    assert series_eval_real(poly(Fraction(1), Fraction(1)), Fraction(1, 3)) == Fraction(4, 3)


@pytest.mark.parametrize("x", [-0.1, 1.0, 1.5])
def test_eval_outside_unit_interval(x):
    with pytest.raises(DomainError):
        series_eval_real(poly(1, 1), x)


def test_required_order():
    assert required_order(10) == 210
    assert required_order(100) == 2000


def test_eval_at_scale_warns_on_short_series(caplog):
    with caplog.at_level(logging.WARNING, logger="services.series_service"):
        eval_at_scale(SeriesPoly(order=10, coeffs=np.ones(11)), 5)
    assert "rule asks for order" in caplog.text
