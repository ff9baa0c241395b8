"""
Cycle types, exact laws and the sampler
"""
import math
from fractions import Fraction

import numpy as np
import pytest

from core.errors import ArgumentError, DomainError, ResourceError
from schemas.permutations import AdditiveSpec, CycleType, DistTable, MultiplicativeSpec
from services.permstat_service import (
    PermStatService,
    additive_dist,
    cycle_type_count,
    cycle_type_of,
    cycles_distribution,
    empirical_law,
    ewens_cycles_distribution,
    m_series,
    mean_mult_enum,
    mean_mult_gf,
    measure_prob,
    mult_s_transform,
    partitions,
    sample_cycle_type,
    sample_cycle_types,
)
from services.series_service import series_mul
from services.voronoi_service import constant_weights, random_weights, s_transform
from utils.families import fhat_family, hhat_family
from utils.partitions import check_guard, partition_count


# ============================================
# PARTITIONS
# ============================================

@pytest.mark.parametrize("n, count", [(0, 1), (1, 1), (4, 5), (10, 42), (30, 5604)])
def test_partition_counts(n, count):
    assert sum(1 for _ in partitions(n)) == count
    assert partition_count(n) == count


def test_partition_order():
    types = [t.multiplicities for t in partitions(4)]
    assert types == [{4: 1}, {3: 1, 1: 1}, {2: 2}, {2: 1, 1: 2}, {1: 4}]


def test_empty_partition():
    (only,) = list(partitions(0))
    assert only.multiplicities == {}
    assert only.num_cycles == 0


def test_guard():
    with pytest.raises(ResourceError) as exc:
        list(partitions(61))
    assert exc.value.exit_code == 3
    check_guard(61, override_guard=True)
    with pytest.raises(ResourceError):
        check_guard(91, override_guard=True)


def test_invalid_cycle_type():
    with pytest.raises(ValueError):
        CycleType(n=5, multiplicities={2: 1, 1: 1})


# ============================================
# CYCLE TYPES
# ============================================

@pytest.mark.parametrize(
    "n, mults, count",
    [(4, {2: 2}, 3), (6, {1: 6}, 1), (3, {3: 1}, 2), (5, {2: 1, 3: 1}, 20)],
)
def test_cycle_type_count(n, mults, count):
    out = cycle_type_count(CycleType(n=n, multiplicities=mults))
    assert out.exact == count
    assert out.log_count == pytest.approx(math.log(count), abs=1e-12)


def test_counts_add_up_to_factorial():
    assert sum(cycle_type_count(t).exact for t in partitions(8)) == math.factorial(8)


def test_large_count_is_log_only():
    out = cycle_type_count(CycleType(n=25, multiplicities={25: 1}))
    assert out.exact is None
    assert out.log_count == pytest.approx(math.lgamma(25))


def test_cycle_type_of():
    assert cycle_type_of([2, 3, 1]).multiplicities == {3: 1}
    assert cycle_type_of([0, 1]).multiplicities == {1: 2}
    assert cycle_type_of([2, 1, 4, 3, 5]).multiplicities == {2: 2, 1: 1}
    with pytest.raises(DomainError):
        cycle_type_of([1, 1])


def test_worked_example():
    t = CycleType(n=15, multiplicities={1: 3, 2: 1, 3: 2, 4: 1})
    assert t.num_cycles == 7
    f = MultiplicativeSpec(n=15, fhat=np.arange(1.0, 16.0))
    assert not f.bounded_flag
    assert f.evaluate(t) == pytest.approx(72.0)


def test_bounded_flag_must_match():
    with pytest.raises(ValueError):
        MultiplicativeSpec(n=2, fhat=[2.0, 1.0], bounded_flag=True)


# ============================================
# MEASURE
# ============================================

def test_measure_on_s2():
    w = constant_weights(2, 2)
    assert measure_prob(CycleType(n=2, multiplicities={1: 2}), w) == pytest.approx(2 / 3)
    assert measure_prob(CycleType(n=2, multiplicities={2: 1}), w) == pytest.approx(1 / 3)


def test_exact_measure():
    w = constant_weights(Fraction(2), 2)
    assert measure_prob(CycleType(n=2, multiplicities={1: 2}), w) == Fraction(2, 3)


def test_uniform_measure(uniform_weights):
    t = CycleType(n=7, multiplicities={3: 1, 2: 2})
    assert measure_prob(t, uniform_weights) == pytest.approx(1 / (3 * 4 * 2))


def test_measure_is_a_probability(bumpy_weights):
    assert sum(measure_prob(t, bumpy_weights) for t in partitions(12)) == pytest.approx(1.0, abs=1e-12)


def test_measure_matches_count_formula():
    w = random_weights(0.5, 2.5, 10, seed=4)
    for t in partitions(10):
        weight = np.prod([float(w.d[j - 1]) ** k for j, k in t.multiplicities.items()])
        expected = cycle_type_count(t).exact * weight / (math.factorial(10) * float(w.p[10]))
        assert measure_prob(t, w) == pytest.approx(expected, rel=1e-12)


def test_measure_beyond_table():
    with pytest.raises(ArgumentError):
        measure_prob(CycleType(n=4, multiplicities={4: 1}), constant_weights(1, 3))


# ============================================
# MEANS
# ============================================

@pytest.mark.parametrize(
    "d, fhat, n, expected",
    [(1.7, "one", 9, 1.0), (1, "derangement", 2, 0.5), (1, "const:2", 2, 3.0)],
)
def test_mean_examples(d, fhat, n, expected):
    w = constant_weights(d, n)
    f = fhat_family(fhat, n)
    assert mean_mult_gf(f, w) == pytest.approx(expected)
    assert mean_mult_enum(f, w) == pytest.approx(expected)


def test_derangement_mean_is_partial_exponential(uniform_weights):
    n = 10
    expected = sum((-1) ** k / math.factorial(k) for k in range(n + 1))
    assert mean_mult_gf(fhat_family("derangement", n), uniform_weights) == pytest.approx(expected)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_generating_function_matches_enumeration(seed):
    n = 12
    w = random_weights(0.5, 2.0, n, seed=seed)
    f = fhat_family(f"disc:{seed}", n)
    assert abs(mean_mult_gf(f, w) - mean_mult_enum(f, w)) < 1e-9


def test_enumeration_guard(uniform_weights):
    with pytest.raises(ResourceError):
        mean_mult_enum(fhat_family("one", 61), uniform_weights)


def test_mean_beyond_table():
    with pytest.raises(ArgumentError):
        mean_mult_gf(fhat_family("one", 5), constant_weights(1, 4))


def test_m_series_factorizes_the_mean(bumpy_weights):
    n = 30
    f = fhat_family("near:0.3:8", n)
    M = series_mul(bumpy_weights.p_series(n), m_series(f, bumpy_weights)).coeffs
    assert complex(M[n]) / bumpy_weights.p[n] == pytest.approx(mean_mult_gf(f, bumpy_weights), rel=1e-10)


def test_mult_s_transform_is_s_transform_of_m(bumpy_weights):
    n = 25
    f = fhat_family("phase:0.5", n)
    m = m_series(f, bumpy_weights)
    assert mult_s_transform(f, bumpy_weights) == pytest.approx(s_transform(m, bumpy_weights, n), rel=1e-9)
    assert mult_s_transform(f, bumpy_weights, 0) == 0.0


# ============================================
# DISTRIBUTIONS
# ============================================

def test_fixed_points_in_s3(uniform_weights):
    law = additive_dist(hhat_family("fixedpoints", 3), uniform_weights)
    assert law.values.tolist() == [0.0, 1.0, 3.0]
    assert law.probs == pytest.approx([1 / 3, 1 / 2, 1 / 6])


def test_zero_function_is_a_point_mass(bumpy_weights):
    law = additive_dist(hhat_family("zero", 9), bumpy_weights)
    assert law.values.tolist() == [0.0]
    assert law.probs[0] == pytest.approx(1.0)


def test_cycle_count_in_s3(uniform_weights):
    expected = [(1.0, 1 / 3), (2.0, 1 / 2), (3.0, 1 / 6)]
    for law in (
        additive_dist(hhat_family("cycles", 3), uniform_weights),
        cycles_distribution(uniform_weights, 3),
        cycles_distribution(uniform_weights, 3, method="gf"),
    ):
        assert law.values.tolist() == [v for v, _ in expected]
        assert law.probs == pytest.approx([p for _, p in expected])


def test_cycle_count_routes_agree(bumpy_weights):
    enum = cycles_distribution(bumpy_weights, 12, method="enumerate")
    gf = cycles_distribution(bumpy_weights, 12, method="gf")
    assert enum.total_variation(gf) < 1e-12


def test_single_element(bumpy_weights):
    assert cycles_distribution(bumpy_weights, 1).atoms == [(1.0, pytest.approx(1.0))]


def test_cycle_count_past_the_guard_uses_the_generating_function(uniform_weights):
    law = cycles_distribution(uniform_weights, 200)
    assert law.mean() == pytest.approx(sum(1 / k for k in range(1, 201)), rel=1e-9)


def test_unknown_method(uniform_weights):
    with pytest.raises(ArgumentError):
        cycles_distribution(uniform_weights, 5, method="fft")


@pytest.mark.parametrize("theta", [0.5, 1.5, 3.0])
def test_ewens_bernoulli_construction(theta):
    n = 15
    law = cycles_distribution(constant_weights(theta, n), n)
    assert law.total_variation(ewens_cycles_distribution(theta, n)) < 1e-10


def test_dist_table_rejects_bad_laws():
    with pytest.raises(ValueError):
        AdditiveSpec(n=2, hhat=[1.0])
    with pytest.raises(ValueError):
        DistTable(values=[0.0, 1.0], probs=[0.5, 0.6])
    with pytest.raises(ValueError):
        DistTable(values=[1.0, 0.0], probs=[0.5, 0.5])


# ============================================
# SAMPLING
# ============================================

def test_sampler_is_deterministic(bumpy_weights):
    a = sample_cycle_types(bumpy_weights, 30, 50, seed=9)
    b = sample_cycle_types(bumpy_weights, 30, 50, seed=9)
    assert a == b
    assert all(t.n == 30 for t in a)


def test_sampler_single_element(bumpy_weights):
    for seed in range(5):
        assert sample_cycle_type(bumpy_weights, 1, seed).multiplicities == {1: 1}


def test_sampler_matches_exact_law(cesaro_weights):
    n = 8
    samples = sample_cycle_types(cesaro_weights, n, 20000, seed=5)
    observed = empirical_law([t.num_cycles for t in samples])
    assert observed.total_variation(cycles_distribution(cesaro_weights, n)) <= 0.03


def test_empirical_law_needs_samples():
    with pytest.raises(ArgumentError):
        empirical_law([])


# ============================================
# SERVICE
# ============================================

def test_service_means_match_both_routes(bumpy_weights):
    f = fhat_family("derangement", 8)
    mean_gf, mean_enum = PermStatService(bumpy_weights).means(f)
    assert mean_gf == mean_mult_gf(f, bumpy_weights)
    assert mean_enum == pytest.approx(mean_gf, abs=1e-12)


def test_service_means_skip_enumeration_past_the_guard(uniform_weights):
    f = fhat_family("derangement", 100)
    mean_gf, mean_enum = PermStatService(uniform_weights).means(f)
    assert mean_enum is None
    assert mean_gf == pytest.approx(sum((-1) ** k / math.factorial(k) for k in range(101)))


def test_service_law_of_all_ones_is_the_cycle_count(cesaro_weights):
    service = PermStatService(cesaro_weights)
    law = service.law(hhat_family("cycles", 10))
    assert law.total_variation(service.cycles(10, method="gf")) <= 1e-12


def test_service_sample_is_seeded(bumpy_weights):
    assert PermStatService(bumpy_weights).sample(12, 20, 3) == sample_cycle_types(bumpy_weights, 12, 20, 3)
