"""
Weights, Voronoi means and the coefficient lemmas
"""
import logging
import math
from fractions import Fraction

import numpy as np
import pytest

from core.errors import ArgumentError, PreconditionError, SpecValidationError
from schemas.series import SeriesPoly
from services.series_service import required_order, series_mul
from services.voronoi_service import (
    VoronoiService,
    build_weights,
    coefficient_asymptotic,
    constant_weights,
    lower_bound_constant,
    lower_ratio_check,
    norlund_mean,
    random_weights,
    ratio_bounds_check,
    reciprocal_coeffs,
    remainder_report,
    s_transform,
    s_transform_all,
    sandwich_ratio,
    smoothness_ratio,
    tauber_trajectory,
    upper_sum_check,
    v_coeff,
    voronoi_mean,
    weights_from_file,
)
from utils.families import coefficient_family


def ones(order):
    return SeriesPoly(order=order, coeffs=np.ones(order + 1))


# ============================================
# WEIGHTS
# ============================================

def test_unit_weights_are_geometric():
    w = constant_weights(1, 1000)
    assert np.max(np.abs(w.p - 1.0)) < 1e-12


def test_weights_two_are_binomial():
    w = constant_weights(2, 10)
    assert np.allclose(w.p, np.arange(1, 12))


@pytest.mark.parametrize("theta", [0.5, 2.0, 3.0])
def test_constant_weights_match_rising_factorial(theta):
    w = constant_weights(theta, 200)
    n = np.arange(201)
    expected = np.exp([math.lgamma(k + theta) - math.lgamma(theta) - math.lgamma(k + 1) for k in n])
    assert np.allclose(w.p, expected, rtol=1e-10, atol=0)


def test_half_weights_by_hand():
    w = constant_weights(0.5, 5)
    assert w.p[:3] == pytest.approx([1.0, 0.5, 0.375])


def test_exact_weights():
    w = constant_weights(Fraction(2), 6)
    assert w.exact
    assert list(w.p) == [Fraction(k + 1) for k in range(7)]


def test_recurrence_identity(bumpy_weights):
    w = bumpy_weights
    for n in (1, 7, 100, 2500):
        rhs = np.dot(w.d[:n], w.p[n - 1 :: -1])
        assert n * w.p[n] == pytest.approx(rhs, rel=1e-10)


def test_theta_caps_at_one():
    assert constant_weights(2.5, 3).theta == 1.0
    assert constant_weights(0.7, 3).theta == 0.7


def test_bound_violation_lists_indices():
    with pytest.raises(SpecValidationError) as exc:
        build_weights([1.0, 3.0, 1.0, 0.1], 0.5, 2.0)
    assert exc.value.context["indices"] == [2, 4]
    assert exc.value.exit_code == 2


@pytest.mark.parametrize("lo, hi", [(0.0, 1.0), (2.0, 1.0)])
def test_bad_random_bounds(lo, hi):
    with pytest.raises(ArgumentError):
        random_weights(lo, hi, 10, seed=1)


def test_random_weights_are_seeded():
    a = random_weights(0.5, 2.5, 50, seed=3)
    b = random_weights(0.5, 2.5, 50, seed=3)
    assert np.array_equal(a.p, b.p)
    assert np.all((a.d >= 0.5) & (a.d <= 2.5))


def test_weights_from_file(tmp_path):
    path = tmp_path / "d.txt"
    path.write_text("# d_k\n1, 2\n1.5\n")
    w = weights_from_file(path)
    assert list(w.d) == [1.0, 2.0, 1.5]
    assert (w.d_minus, w.d_plus) == (1.0, 2.0)
    assert w.p[1] == pytest.approx(1.0)


def test_empty_weight_file(tmp_path):
    path = tmp_path / "d.txt"
    path.write_text("# nothing\n")
    with pytest.raises(SpecValidationError):
        weights_from_file(path)


def test_malformed_weight_file(tmp_path):
    path = tmp_path / "d.txt"
    path.write_text("1.0 abc\n")
    with pytest.raises(SpecValidationError) as exc:
        weights_from_file(path)
    assert exc.value.context["path"] == str(path)


def test_missing_weight_file(tmp_path):
    with pytest.raises(SpecValidationError):
        weights_from_file(tmp_path / "absent.txt")


# ============================================
# MEANS AND TRANSFORMS
# ============================================

@pytest.mark.parametrize("n", [0, 1, 5, 100])
def test_mean_of_constant_series(bumpy_weights, n):
    a = coefficient_family("constant", 200)
    assert voronoi_mean(a, bumpy_weights, n) == pytest.approx(1.0)


def test_cesaro_means_of_alternating_series(cesaro_weights):
    a = coefficient_family("alternating", 10)
    assert voronoi_mean(a, cesaro_weights, 3) == pytest.approx(0.5)
    assert voronoi_mean(a, cesaro_weights, 2) == pytest.approx(2 / 3)


def test_exact_cesaro_mean():
    a = SeriesPoly.from_coeffs([Fraction((-1) ** k) for k in range(6)])
    w = constant_weights(Fraction(2), 5)
    assert voronoi_mean(a, w, 3) == Fraction(1, 2)
    assert voronoi_mean(a, w, 2) == Fraction(2, 3)


def test_mean_index_out_of_range(uniform_weights):
    with pytest.raises(ArgumentError):
        voronoi_mean(coefficient_family("ones", 10), uniform_weights, 11)


def test_identity_weights_give_partial_sums():
    a = coefficient_family("alt_harmonic", 20)
    raw = [1.0] + [0.0] * 20
    for n in (0, 3, 20):
        assert norlund_mean(a, raw, n) == pytest.approx(float(np.sum(a.coeffs[: n + 1])))


def test_flat_raw_weights_are_cesaro(cesaro_weights):
    a = coefficient_family("random:5", 30)
    raw = np.ones(31)
    for n in (1, 10, 30):
        assert norlund_mean(a, raw, n) == pytest.approx(voronoi_mean(a, cesaro_weights, n), rel=1e-9, abs=1e-12)


def test_raw_weights_must_not_vanish():
    with pytest.raises(SpecValidationError):
        norlund_mean(coefficient_family("ones", 3), [0.0, 0.0, 0.0, 0.0], 3)


def test_s_transform_examples(uniform_weights, cesaro_weights):
    assert s_transform(coefficient_family("constant", 10), cesaro_weights, 7) == 0
    z = coefficient_family("z", 10)
    assert all(s_transform(z, uniform_weights, j) == pytest.approx(1.0) for j in range(1, 11))
    alt = coefficient_family("alternating", 10)
    assert s_transform(alt, cesaro_weights, 2) == pytest.approx(0.0)
    assert s_transform(alt, cesaro_weights, 3) == pytest.approx(-2.0)


def test_s_transform_all_matches_pointwise(bumpy_weights):
    a = coefficient_family("random:11", 60)
    S = s_transform_all(a, bumpy_weights, 60)
    for j in (0, 1, 17, 60):
        assert S[j] == pytest.approx(s_transform(a, bumpy_weights, j), rel=1e-9, abs=1e-12)


def test_trajectory_of_constant_series(cesaro_weights):
    out = tauber_trajectory(coefficient_family("constant", 100), cesaro_weights, [1, 10, 100])
    assert np.all(out == 0)


def test_trajectory_of_alternating_series_decays(cesaro_weights):
    ns = [10, 100, 1000]
    out = tauber_trajectory(coefficient_family("alternating", 1000), cesaro_weights, ns)
    assert all(abs(v) <= 2 / n for v, n in zip(out, ns))


def test_trajectory_of_divergent_series_grows(uniform_weights):
    ns = [1, 10, 100]
    out = tauber_trajectory(coefficient_family("ones", 100), uniform_weights, ns)
    assert out == pytest.approx([(n + 1) / 2 for n in ns])


def test_trajectory_needs_positive_n(uniform_weights):
    with pytest.raises(ArgumentError):
        tauber_trajectory(coefficient_family("ones", 10), uniform_weights, [0, 5])


def test_convergent_series_is_summed(uniform_weights):
    n = 2000
    a = coefficient_family("log1p", n)
    assert abs(voronoi_mean(a, uniform_weights, n) - math.log(2)) <= 5e-3
    assert abs(tauber_trajectory(a, uniform_weights, [n])[0]) <= 5e-3


# ============================================
# REMAINDER
# ============================================

def test_remainder_of_constant_series(uniform_weights):
    report = remainder_report(coefficient_family("constant", 1000), uniform_weights, 50, tail_horizon=1000)
    assert report.lhs == pytest.approx(0.0, abs=1e-12)
    assert report.ratio == 0.0


@pytest.mark.parametrize("family", ["ones", "alt_harmonic", "random:2"])
def test_remainder_ratio_is_finite(uniform_weights, family):
    report = remainder_report(coefficient_family(family, 1000), uniform_weights, 50, tail_horizon=1000)
    assert math.isfinite(report.ratio)
    assert report.lhs >= 0 and report.rhs_sum1 >= 0 and report.rhs_sum2 >= 0


def test_remainder_rejects_short_horizon(uniform_weights):
    with pytest.raises(ArgumentError):
        remainder_report(coefficient_family("ones", 1000), uniform_weights, 50, tail_horizon=100)


def test_remainder_rejects_short_series(uniform_weights):
    with pytest.raises(ArgumentError):
        remainder_report(coefficient_family("ones", 300), uniform_weights, 50)


def test_remainder_default_horizon_covers_evaluation_order(uniform_weights, caplog):
    with caplog.at_level(logging.WARNING, logger="services.series_service"):
        report = remainder_report(coefficient_family("alt_harmonic", 1000), uniform_weights, 50)
    assert report.tail_horizon == required_order(50) == 1000
    assert "rule asks for order" not in caplog.text


@pytest.mark.parametrize("family", ["alt_harmonic", "log1p"])
@pytest.mark.parametrize("weights", ["uniform_weights", "bumpy_weights"])
def test_remainder_is_stable_under_horizon_doubling(request, weights, family):
    w = request.getfixturevalue(weights)
    a = coefficient_family(family, 1000)
    short = remainder_report(a, w, 50, tail_horizon=400)
    long = remainder_report(a, w, 50, tail_horizon=800)
    assert abs(long.ratio - short.ratio) <= 0.01 * short.ratio
    assert long.lhs == pytest.approx(short.lhs, rel=1e-12, abs=1e-15)


def test_remainder_row_is_flat(uniform_weights):
    row = remainder_report(coefficient_family("ones", 1000), uniform_weights, 50, tail_horizon=1000).row()
    assert set(row) == {"n", "voronoi_mean", "g_at_point", "correction", "lhs", "rhs_sum1", "rhs_sum2", "ratio"}
    assert isinstance(row["voronoi_mean"], float)


# ============================================
# COEFFICIENT LEMMAS
# ============================================

def test_lower_bound_constant():
    assert lower_bound_constant(0.3) == 0.5
    assert lower_bound_constant(1.0) == pytest.approx(math.exp(-0.5) / 4)
    assert lower_bound_constant(2.0) == pytest.approx(math.exp(-0.5) / 32)


def test_lower_ratio_geometric():
    check = lower_ratio_check(ones(required_order(100)), 1.0, 100)
    assert check.ratio == pytest.approx(101 * (1 - math.exp(-0.01)), rel=1e-6)
    assert check.passed


def test_lower_ratio_constant():
    b = SeriesPoly.from_coeffs([1.0] + [0.0] * required_order(10))
    check = lower_ratio_check(b, 0.1, 10)
    assert check.ratio == pytest.approx(1.0)
    assert check.floor == 0.5
    assert check.passed


def test_lower_ratio_squared_geometric():
    order = required_order(50)
    b = SeriesPoly(order=order, coeffs=np.arange(1.0, order + 2))
    check = lower_ratio_check(b, 2.0, 50)
    assert check.floor == pytest.approx(math.exp(-0.5) / 32)
    assert check.passed


def test_lower_ratio_hypothesis_fails():
    with pytest.raises(PreconditionError) as exc:
        lower_ratio_check(ones(required_order(10)), 0.5, 10)
    assert "x" in exc.value.context


def test_lower_ratio_rejects_negative_coefficients():
    with pytest.raises(SpecValidationError):
        lower_ratio_check(SeriesPoly.from_coeffs([1.0, -1.0, 0.0]), 1.0, 2)


def test_lower_ratio_needs_large_n():
    with pytest.raises(ArgumentError):
        lower_ratio_check(ones(300), 3.0, 5)


def test_upper_sum(bumpy_weights):
    for n in (1, 10, 300):
        assert upper_sum_check(bumpy_weights.p_series(), n).passed


def test_ratio_bounds_identity(bumpy_weights):
    check = ratio_bounds_check(bumpy_weights, 40, 40)
    assert check.ratio == pytest.approx(1.0)
    assert check.passed


def test_ratio_bounds_geometric(uniform_weights):
    n = 20
    check = ratio_bounds_check(uniform_weights, 2 * n, n)
    expected = (1 - math.exp(-1 / n)) / (1 - math.exp(-1 / (2 * n)))
    assert check.ratio == pytest.approx(expected, rel=1e-9)
    assert 2 * math.exp(-1 / n) <= check.ratio <= 2 * math.exp(1 / (2 * n))
    assert check.passed


def test_ratio_bounds_random(bumpy_weights):
    assert ratio_bounds_check(bumpy_weights, 400, 17).passed


def test_ratio_bounds_order(bumpy_weights):
    with pytest.raises(ArgumentError):
        ratio_bounds_check(bumpy_weights, 3, 5)


def test_sandwich(uniform_weights, bumpy_weights):
    check = sandwich_ratio(uniform_weights, 100)
    assert check.ratio == pytest.approx(100 * (1 - math.exp(-0.01)), rel=1e-6)
    assert check.passed
    assert all(sandwich_ratio(bumpy_weights, n).passed for n in (1, 10, 100, 400))


def test_smoothness(uniform_weights, bumpy_weights):
    assert smoothness_ratio(uniform_weights, 100, 50) == pytest.approx(0.0, abs=1e-9)
    assert smoothness_ratio(bumpy_weights, 100, 0) == 0.0
    assert math.isfinite(smoothness_ratio(bumpy_weights, 200, 60))
    with pytest.raises(ArgumentError):
        smoothness_ratio(bumpy_weights, 10, 6)


def test_reciprocal_examples(uniform_weights, cesaro_weights):
    assert np.allclose(reciprocal_coeffs(uniform_weights, 5).coeffs, [1, -1, 0, 0, 0, 0])
    assert np.allclose(reciprocal_coeffs(cesaro_weights, 5).coeffs, [1, -2, 1, 0, 0, 0], atol=1e-12)


def test_reciprocal_inverts_p(bumpy_weights):
    N = 200
    product = series_mul(bumpy_weights.p_series(N), reciprocal_coeffs(bumpy_weights, N)).coeffs
    assert product[0] == pytest.approx(1.0)
    assert np.max(np.abs(product[1:])) < 1e-9


@pytest.mark.parametrize("j", [1, 2, 10])
def test_v_coeff_at_zero(bumpy_weights, j):
    assert v_coeff(bumpy_weights, 0, j) == pytest.approx(1 / j)


def test_v_coeff_uniform(uniform_weights):
    for m, j in [(1, 1), (3, 4), (20, 7)]:
        assert v_coeff(uniform_weights, m, j) == pytest.approx(1 / (j * (j + 1)), abs=1e-12)


def test_v_coeff_exact():
    assert v_coeff(constant_weights(Fraction(1), 5), 2, 2) == Fraction(1, 6)


def test_v_coeff_nonnegative(bumpy_weights):
    for m in range(1, 6):
        assert v_coeff(bumpy_weights, m, 5) >= -1e-12


def test_v_coeff_needs_positive_j(bumpy_weights):
    with pytest.raises(ArgumentError):
        v_coeff(bumpy_weights, 2, 0)


def test_coefficient_asymptotic_of_constant(cesaro_weights):
    est = coefficient_asymptotic(coefficient_family("constant", 2000), cesaro_weights, 100)
    assert est.coefficient.real == pytest.approx(101.0)
    assert est.relative_error == pytest.approx(0.0, abs=1e-12)


# ============================================
# SERVICE
# ============================================

def test_service_binds_its_weights(bumpy_weights):
    service = VoronoiService(bumpy_weights)
    a = coefficient_family("alt_harmonic", required_order(40))
    assert service.mean(a, 40) == voronoi_mean(a, bumpy_weights, 40)
    assert np.array_equal(service.trajectory(a, [10, 40]), tauber_trajectory(a, bumpy_weights, [10, 40]))
    assert service.remainder(a, 40) == remainder_report(a, bumpy_weights, 40)
    assert service.sandwich(30) == sandwich_ratio(bumpy_weights, 30)
