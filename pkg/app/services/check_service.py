"""
Standard families and fitted-constant checks behind `check --suite`
"""
import logging
import math
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from core.config import settings
from core.errors import ArgumentError
from schemas.checks import FitResult, SuiteResult
from schemas.permutations import CycleType, DistTable
from services.clt_service import expansion_residual, log_difference_check
from services.permstat_service import (
    additive_dist,
    cycles_distribution,
    empirical_law,
    ewens_cycles_distribution,
    mean_mult_enum,
    mean_mult_gf,
    measure_prob,
    sample_cycle_types,
)
from services.voronoi_service import (
    constant_weights,
    lower_ratio_check,
    random_weights,
    ratio_bounds_check,
    sandwich_ratio,
    tauber_trajectory,
    upper_sum_check,
    v_coeff,
    voronoi_mean,
)
from utils.families import coefficient_family, fhat_family, hhat_family
from workers.sweep_tasks import dispatch_sweep, gap_task, kolmogorov_task, remainder_task

logger = logging.getLogger(__name__)

CHECK_COLUMNS = ["check", "instance", "n", "value", "bound", "pass"]
REMAINDER_COLUMNS = ["d", "coeffs", "n", "lhs", "rhs_sum1", "rhs_sum2", "ratio"]

VORONOI_CONSTANTS = (0.5, 0.7, 1, 2, 2.5)
VORONOI_RANDOM_COUNT = 20
VORONOI_COEFFS = ("ones", "alternating", "log1p", "alt_harmonic", "constant", "z")
CLT_D = (0.7, 1, 2)
CLT_HHAT = ("flat", "power:0.1", "sparse")
CLT_N = (20, 40, 60)
CLT_P = (4.0, math.inf)
GONCHAROV_N = (50, 200, 800)


def _row(check: str, instance: Any, n: Any, value: float, bound: float, passed: bool) -> Dict[str, Any]:
    return {"check": check, "instance": instance, "n": n, "value": value, "bound": bound, "pass": bool(passed)}


def _all_pass(rows: Sequence[Dict[str, Any]]) -> bool:
    return all(r["pass"] for r in rows)


def _seeds(seed: int, count: int) -> List[int]:
    """Independent child seeds for a family"""
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


# ============================================
# FITTED CONSTANTS
# ============================================

def fit_bound(values: Sequence[float], headroom: float = 2.0) -> FitResult:
    """
    Fit the constant on even-indexed members, test odd-indexed ones

    A NaN or infinite member fails the fit.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ArgumentError("fit_bound needs at least one value")
    if not np.all(np.isfinite(arr)):
        return FitResult(fitted=math.nan, holdout_max=math.nan, headroom=headroom, count=arr.size, passed=False)
    fitted = float(np.max(arr[0::2]))
    holdout = float(np.max(arr[1::2])) if arr.size > 1 else 0.0
    return FitResult(
        fitted=fitted,
        holdout_max=holdout,
        headroom=headroom,
        count=int(arr.size),
        passed=holdout <= headroom * fitted + settings.ZERO_TOL,
    )


# ============================================
# SUITES
# ============================================

def voronoi_suite(nmax: int, seed: int, **_) -> SuiteResult:
    """remainder_report ratios over constant and random weights and ten coefficient families"""
    ns = [16 * 2 ** k for k in range(12) if 16 * 2 ** k <= nmax]
    if not ns:
        raise ArgumentError("voronoi suite needs nmax >= 16", nmax=nmax)
    d_specs = [f"constant:{t}" for t in VORONOI_CONSTANTS]
    d_specs += [f"random:0.5:2.5:{s}" for s in _seeds(seed, VORONOI_RANDOM_COUNT)]
    coeffs = list(VORONOI_COEFFS) + [f"random:{s}" for s in _seeds(seed + 1, 4)]

    jobs = [
        {"d_spec": d, "coeffs": c, "n": n, "seed": seed}
        for d in d_specs
        for c in coeffs
        for n in ns
    ]
    rows = dispatch_sweep(remainder_task, jobs)
    fit = fit_bound([r["ratio"] for r in rows])
    logger.info("voronoi: %d ratios, fitted %.4g, holdout %.4g", len(rows), fit.fitted, fit.holdout_max)
    plot = {"voronoi_ratio": (("n", "ratio"), [(r["n"], r["ratio"]) for r in rows])}
    return SuiteResult(
        name="voronoi",
        columns=REMAINDER_COLUMNS,
        rows=rows,
        summary=fit.model_dump(by_alias=True),
        plot=plot,
        passed=fit.passed,
    )


def tauber_suite(nmax: int = 2000, **_) -> SuiteResult:
    """Cesaro value of sum (-1)^k, log(1+x) at its Abel value, vanishing S/(n p_n)"""
    n_top = max(nmax, 2)
    w = constant_weights(2, n_top)
    alternating = coefficient_family("alternating", n_top)
    log1p = coefficient_family("log1p", n_top)

    rows: List[Dict[str, Any]] = []
    for n in range(2, n_top + 1):
        err = abs(float(voronoi_mean(alternating, w, n)) - 0.5)
        rows.append(_row("cesaro", "alternating", n, err, 1.0 / n, err <= 1.0 / n))

    err = abs(float(voronoi_mean(log1p, w, n_top)) - math.log(2.0))
    rows.append(_row("abel_value", "log1p", n_top, err, 5e-3, err <= 5e-3))
    tail = abs(float(tauber_trajectory(log1p, w, [n_top])[0]))
    rows.append(_row("tauber_ratio", "log1p", n_top, tail, 5e-3, tail <= 5e-3))

    ns = list(range(1, n_top + 1))
    trajectory = tauber_trajectory(alternating, w, ns)
    for n, value in zip(ns, trajectory):
        v = abs(float(value))
        rows.append(_row("tauber_ratio", "alternating", n, v, 2.0 / n, v <= 2.0 / n))

    plot = {"tauber_alternating": (("n", "S/(n p_n)"), list(zip(ns, trajectory.tolist())))}
    return SuiteResult(name="tauber", columns=CHECK_COLUMNS, rows=rows, plot=plot, passed=_all_pass(rows))


def oracle_suite(seed: int, count: Optional[int] = None, **_) -> SuiteResult:
    """Generating-function means against brute-force enumeration, plus hand fixtures"""
    count = 200 if count is None else count
    tol = 1e-9
    rows: List[Dict[str, Any]] = []
    rng = np.random.default_rng(seed)
    for i in range(count):
        n = int(rng.integers(1, 21))
        w_seed, f_seed = (int(x) for x in rng.integers(0, 2 ** 32, size=2))
        w = random_weights(0.5, 2.0, n, w_seed)
        f = fhat_family(f"disc:{f_seed}", n)
        diff = abs(complex(mean_mult_gf(f, w)) - complex(mean_mult_enum(f, w)))
        rows.append(_row("gf_vs_enum", i, n, diff, tol, diff <= tol))

    uniform3 = constant_weights(1, 3)
    derangement = fhat_family("derangement", 2)
    value = abs(float(mean_mult_enum(derangement, constant_weights(1, 2))) - 0.5)
    rows.append(_row("fixture", "s2_derangements", 2, value, tol, value <= tol))

    law = additive_dist(hhat_family("fixedpoints", 3), uniform3)
    expected = DistTable(values=[0.0, 1.0, 3.0], probs=[1 / 3, 1 / 2, 1 / 6])
    tv = law.total_variation(expected)
    rows.append(_row("fixture", "s3_fixedpoints", 3, tv, tol, tv <= tol))

    exact = measure_prob(CycleType(n=3, multiplicities={1: 1, 2: 1}), constant_weights(Fraction(1), 3))
    value = abs(float(exact - Fraction(1, 2)))
    rows.append(_row("fixture", "s3_transposition_exact", 3, value, 0.0, exact == Fraction(1, 2)))

    w = random_weights(0.5, 2.0, 12, seed)
    tv = cycles_distribution(w, 12, method="gf").total_variation(cycles_distribution(w, 12, method="enumerate"))
    rows.append(_row("cycles_gf_vs_enum", "random", 12, tv, tol, tv <= tol))

    tv = ewens_cycles_distribution(1.5, 15).total_variation(cycles_distribution(constant_weights(1.5, 15), 15))
    rows.append(_row("ewens_oracle", "constant:1.5", 15, tv, tol, tv <= tol))
    return SuiteResult(name="oracle", columns=CHECK_COLUMNS, rows=rows, passed=_all_pass(rows))


def inequalities_suite(seed: int, count: Optional[int] = None, **_) -> SuiteResult:
    """Coefficient lemmas on sampled weights; every instance must hold exactly"""
    count = 500 if count is None else count
    n_top = 40
    order = 1000
    rng = np.random.default_rng(seed)
    pool = []
    for s in _seeds(seed, 10):
        lo = float(rng.uniform(0.3, 1.5))
        hi = lo + float(rng.uniform(0.0, 2.0))
        pool.append(random_weights(lo, hi, order, s))

    rows: List[Dict[str, Any]] = []
    for i in range(count):
        w = pool[i % len(pool)]
        n = int(rng.integers(1, n_top + 1))
        m = int(rng.integers(n, n_top + 1))
        r = ratio_bounds_check(w, m, n)
        rows.append(_row("ratio_bounds", i, n, r.ratio, r.upper, r.passed))
        s = sandwich_ratio(w, n)
        rows.append(_row("sandwich", i, n, s.ratio, s.upper, s.passed))
        u = upper_sum_check(w.p_series(), n)
        rows.append(_row("upper_sum", i, n, u.partial_sum, u.bound, u.passed))
        N = int(rng.integers(max(1, math.ceil(2 * w.d_plus)), n_top + 1))
        lr = lower_ratio_check(w.p_series(), w.d_plus, N)
        rows.append(_row("lower_ratio", i, N, lr.ratio, lr.floor, lr.passed))
        j = int(rng.integers(1, order + 1))
        v = abs(float(v_coeff(w, 0, j)) - 1.0 / j)
        rows.append(_row("v0_reciprocal", i, j, v, settings.INEQUALITY_SLACK, v <= settings.INEQUALITY_SLACK))
        f = fhat_family(f"disc:{int(rng.integers(0, 2 ** 32))}", 60)
        p = float(rng.uniform(1.2, 6.0))
        ld = log_difference_check(f, w, int(rng.integers(1, 201)), int(rng.integers(1, 201)), p)
        rows.append(_row("log_difference", i, ld.n, ld.lhs, ld.rhs, ld.passed))
    return SuiteResult(name="inequalities", columns=CHECK_COLUMNS, rows=rows, passed=_all_pass(rows))


def sampler_suite(seed: int, count: Optional[int] = None, **_) -> SuiteResult:
    """Empirical cycle-count law of the sampler against the exact law (n = 20, d = 2)"""
    count = 100_000 if count is None else count
    n = 20
    w = constant_weights(2, n)
    samples = sample_cycle_types(w, n, count, seed)
    empirical = empirical_law([t.num_cycles for t in samples])
    exact = cycles_distribution(w, n)
    tv = empirical.total_variation(exact)
    rows = [_row("total_variation", count, n, tv, 0.02, tv <= 0.02)]
    plot = {
        "sampler_empirical": (("cycles", "prob"), empirical.atoms),
        "sampler_exact": (("cycles", "prob"), exact.atoms),
    }
    return SuiteResult(name="sampler", columns=CHECK_COLUMNS, rows=rows, plot=plot, passed=_all_pass(rows))


def goncharov_suite(seed: int, **_) -> SuiteResult:
    """Kolmogorov distance of the standardized cycle count decreases in n (uniform permutations)"""
    jobs = [{"d_spec": "constant:1", "n": n, "oracle": True, "seed": seed} for n in GONCHAROV_N]
    points = dispatch_sweep(kolmogorov_task, jobs)
    rows = []
    for i, pt in enumerate(points):
        bound = points[i - 1]["distance"] if i else math.inf
        rows.append(_row("kolmogorov", "constant:1", pt["n"], pt["distance"], bound, pt["distance"] < bound))
    plot = {"goncharov": (("n", "kolmogorov_distance"), [(pt["n"], pt["distance"]) for pt in points])}
    return SuiteResult(name="goncharov", columns=CHECK_COLUMNS, rows=rows, plot=plot, passed=_all_pass(rows))


def clt_suite(seed: int, **_) -> SuiteResult:
    """Corrected gap over its budget with fitted headroom, and the quadratic residual window"""
    jobs = [
        {"d_spec": f"constant:{d}", "hhat": h, "n": n, "p": p, "seed": seed}
        for d in CLT_D
        for h in CLT_HHAT
        for p in CLT_P
        for n in CLT_N
    ]
    gaps = dispatch_sweep(gap_task, jobs)
    fit = fit_bound([g["ratio"] for g in gaps])
    rows = [
        _row("gap_ratio", f"{g['d']}|{g['hhat']}|p={g['p']}", g["n"], g["ratio"], fit.headroom * fit.fitted, fit.passed)
        for g in gaps
    ]

    n = 60
    for d in CLT_D:
        w = constant_weights(d, n)
        big = expansion_residual(fhat_family("eps:0.01", n), w, 2.0).residual
        small = expansion_residual(fhat_family("eps:0.005", n), w, 2.0).residual
        scale = small / big if big > 0 else math.nan
        rows.append(_row("residual_scaling", f"constant:{d}", n, scale, 0.45, 0.15 <= scale <= 0.45))

    plot = {"clt_gap": (("n", "gap"), [(g["n"], g["gap"]) for g in gaps])}
    return SuiteResult(
        name="clt",
        columns=CHECK_COLUMNS,
        rows=rows,
        summary=fit.model_dump(by_alias=True),
        plot=plot,
        passed=_all_pass(rows),
    )


SUITES: Dict[str, Callable[..., SuiteResult]] = {
    "voronoi": voronoi_suite,
    "tauber": tauber_suite,
    "oracle": oracle_suite,
    "inequalities": inequalities_suite,
    "sampler": sampler_suite,
    "goncharov": goncharov_suite,
    "clt": clt_suite,
}


def run_suite(name: str, nmax: Optional[int] = None, seed: Optional[int] = None, count: Optional[int] = None) -> SuiteResult:
    """
    Run one named suite

    Args:
        name: One of SUITES
        nmax: Scale for voronoi (default 512) and tauber (default 2000)
        seed: Family seed, defaults to settings.DEFAULT_SEED
        count: Instance count for oracle, inequalities and sampler

    Raises:
        ArgumentError: unknown suite
    """
    if name not in SUITES:
        raise ArgumentError("unknown suite", suite=name, known=sorted(SUITES))
    seed = settings.DEFAULT_SEED if seed is None else seed
    kwargs: Dict[str, Any] = {"seed": seed, "count": count}
    if nmax is not None:
        kwargs["nmax"] = nmax
    elif name == "voronoi":
        kwargs["nmax"] = 512
    logger.info("running suite %s (seed=%d)", name, seed)
    result = SUITES[name](**kwargs)
    logger.info("suite %s: %s", name, "pass" if result.passed else "FAIL")
    return result
