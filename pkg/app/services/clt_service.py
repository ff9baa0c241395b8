"""
Means of multiplicative functions and normal approximation of additive ones
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy.stats import norm

from core.config import settings
from core.errors import ArgumentError, DomainError, PreconditionError
from schemas.clt import (
    CltStats,
    DeltaBoundReport,
    EUBoundReport,
    ExpansionResidualReport,
    GapReport,
    GoncharovPoint,
    LogDifferenceCheck,
    MeanVsMReport,
    SumpnReport,
)
from schemas.permutations import AdditiveSpec, DistTable, MultiplicativeSpec
from schemas.weights import WeightSpec
from services.permstat_service import (
    additive_dist,
    cycles_distribution,
    ewens_cycles_distribution,
    mean_mult_gf,
)

logger = logging.getLogger(__name__)


# ============================================
# HELPERS
# ============================================

def _require_weights(n: int, w: WeightSpec) -> None:
    if n > w.n_max:
        raise ArgumentError("n beyond the weight table", n=n, n_max=w.n_max)


def _ratio(lhs: float, rhs: float) -> float:
    if rhs > 0:
        return lhs / rhs
    return 0.0 if lhs < settings.ZERO_TOL else math.inf


def _d(w: WeightSpec, n: int) -> np.ndarray:
    return w.d[:n].astype(float)


def _p(w: WeightSpec, n: int) -> np.ndarray:
    return w.p[: n + 1].astype(float)


def _p_ratio_gap(w: WeightSpec, n: int) -> np.ndarray:
    """p_{n-j}/p_n - 1 for j = 1..n"""
    p = _p(w, n)
    return p[n - 1 :: -1] / p[n] - 1.0 if n else np.zeros(0)


def _power_sum(values: np.ndarray, p: float) -> float:
    """sum_k |v_k|^p / k, or max |v_k| for p = inf"""
    a = np.abs(values)
    if a.size == 0:
        return 0.0
    if math.isinf(p):
        return float(np.max(a))
    return float(np.sum(a ** p / np.arange(1, a.size + 1)))


def _warn_unbounded(f: MultiplicativeSpec, op: str) -> None:
    if not f.bounded_flag:
        logger.warning("%s: some |fhat(j)| exceed 1; the estimate is outside its hypothesis", op)


def normal_cdf(x):
    """Phi(x)"""
    return norm.cdf(x)


def normal_pdf(x):
    return norm.pdf(x)


# ============================================
# MULTIPLICATIVE FUNCTIONS
# ============================================

def rho(f: MultiplicativeSpec, p: float, n: Optional[int] = None) -> float:
    """rho_n(p) = (sum_j |fhat(j) - 1|^p / j)^{1/p}; max |fhat(j) - 1| for p = inf"""
    if p <= 0:
        raise ArgumentError("p must be positive", p=p)
    n = f.n if n is None else n
    s = _power_sum(f.fhat[:n] - 1.0, p)
    return s if math.isinf(p) else s ** (1.0 / p)


def l_at_scale(f: MultiplicativeSpec, w: WeightSpec, n: int) -> complex:
    """L(e^{-1/n}) = sum_j d_j (fhat(j) - 1) e^{-j/n} / j"""
    if n < 1:
        raise ArgumentError("l_at_scale needs n >= 1", n=n)
    _require_weights(f.n, w)
    j = np.arange(1, f.n + 1)
    return complex(np.sum(_d(w, f.n) * (f.fhat - 1.0) * np.exp(-j / n) / j))


def l_at_one(f: MultiplicativeSpec, w: WeightSpec) -> complex:
    """L_n(1) = sum_{j<=n} d_j (fhat(j) - 1) / j"""
    _require_weights(f.n, w)
    j = np.arange(1, f.n + 1)
    return complex(np.sum(_d(w, f.n) * (f.fhat - 1.0) / j))


def delta_bound_report(f: MultiplicativeSpec, w: WeightSpec) -> DeltaBoundReport:
    """
    Delta_n = |M_n(f) - exp L_n(1)| against the bracketed bound

    The d_minus < 1 bracket has three sums; the d_minus >= 1 bracket has
    two, the second with the factor 1 + log(n/k).

    Raises:
        PreconditionError: some |fhat(j)| > 1
    """
    if not f.bounded_flag:
        raise PreconditionError("delta_bound_report needs |fhat(j)| <= 1", n=f.n)
    n = f.n
    _require_weights(n, w)
    if n == 0:
        return DeltaBoundReport(n=0, delta_n=0.0, rhs=0.0, ratio=0.0, branch="empty")

    delta = abs(complex(mean_mult_gf(f, w)) - np.exp(l_at_one(f, w)))
    dev = np.abs(f.fhat - 1.0)
    p = _p(w, n)
    k = np.arange(1, n + 1)
    first = float(np.dot(dev, p[n - 1 :: -1]) / np.sum(p))
    if w.d_minus < 1:
        branch = "d_minus<1"
        rhs = (
            first
            + float(n ** (-w.d_minus) * np.sum(dev * k ** (w.d_minus - 1.0)))
            + float(np.sum(dev)) / n
        )
    else:
        branch = "d_minus>=1"
        rhs = first + float(np.sum(dev * (1.0 + np.log(n / k)))) / n
    return DeltaBoundReport(n=n, delta_n=delta, rhs=rhs, ratio=_ratio(delta, rhs), branch=branch)


def expansion_residual(f: MultiplicativeSpec, w: WeightSpec, p: float) -> ExpansionResidualReport:
    """
    |M_N/p_N exp(-L_N(1)) - 1 - sum_j d_j (fhat(j)-1)/j (p_{N-j}/p_N - 1)| over rho^2

    Raises:
        PreconditionError: rho(p) above EXPANSION_DELTA
    """
    N = f.n
    _require_weights(N, w)
    r = rho(f, p)
    if r > settings.EXPANSION_DELTA:
        raise PreconditionError("rho above the expansion threshold", rho=r, delta=settings.EXPANSION_DELTA)
    if not p > max(1.0, 1.0 / w.d_minus):
        logger.warning("expansion_residual: p=%s not above max(1, 1/d_minus)", p)
    _warn_unbounded(f, "expansion_residual")
    if N == 0:
        return ExpansionResidualReport(n=0, p=p, residual=0.0, rho=r, ratio=0.0)

    j = np.arange(1, N + 1)
    first_order = complex(np.sum(_d(w, N) * (f.fhat - 1.0) / j * _p_ratio_gap(w, N)))
    scaled = complex(mean_mult_gf(f, w)) * np.exp(-l_at_one(f, w))
    residual = abs(scaled - 1.0 - first_order)
    return ExpansionResidualReport(n=N, p=p, residual=residual, rho=r, ratio=_ratio(residual, r * r))


def e_majorant(f: MultiplicativeSpec, u: float) -> float:
    """E(u) = exp(2 sum_{|fhat(k)-1| > u} |fhat(k) - 1| / k)"""
    if u <= 0:
        raise ArgumentError("u must be positive", u=u)
    dev = np.abs(f.fhat - 1.0)
    k = np.arange(1, f.n + 1)
    mask = dev > u
    return math.exp(2.0 * float(np.sum(dev[mask] / k[mask])))


def eu_bound_report(f: MultiplicativeSpec, w: WeightSpec, u: float) -> EUBoundReport:
    """|M_n/p_n| against |exp L_n(1)| E(u)^{d+}"""
    e_u = e_majorant(f, u)
    _require_weights(f.n, w)
    _warn_unbounded(f, "eu_bound_report")
    lhs = abs(complex(mean_mult_gf(f, w)))
    majorant = abs(np.exp(l_at_one(f, w))) * e_u ** w.d_plus
    return EUBoundReport(n=f.n, u=u, e_u=e_u, lhs=lhs, majorant=majorant, ratio=_ratio(lhs, majorant))


def log_difference_check(f: MultiplicativeSpec, w: WeightSpec, n: int, m: int, p: float) -> LogDifferenceCheck:
    """Both inequalities on L at e^{-1/n} and e^{-1/m}"""
    if n < 1 or m < 1:
        raise ArgumentError("log_difference_check needs n, m >= 1", n=n, m=m)
    if not p > 1:
        raise ArgumentError("log_difference_check needs p > 1", p=p)
    r = rho(f, p)
    Ln = l_at_scale(f, w, n)
    lhs = abs(Ln - l_at_scale(f, w, m))
    rhs = w.d_plus * r * (1.0 + abs(math.log(n / m)))
    single_lhs = abs(Ln)
    single_rhs = w.d_plus * r * (1.0 + math.log(n))
    slack = settings.INEQUALITY_SLACK
    return LogDifferenceCheck(
        n=n,
        m=m,
        p=p,
        lhs=lhs,
        rhs=rhs,
        single_lhs=single_lhs,
        single_rhs=single_rhs,
        passed=lhs <= rhs + slack and single_lhs <= single_rhs + slack,
    )


def mean_vs_m_report(f: MultiplicativeSpec, w: WeightSpec, p: float) -> MeanVsMReport:
    """
    Compare M_n/p_n with m(e^{-1/n}) = exp L(e^{-1/n})

    The weaker estimate assumes p > 1, the relative one p > max(1, 1/d_minus);
    violations are logged.
    """
    n = f.n
    if n < 1:
        raise ArgumentError("mean_vs_m_report needs n >= 1", n=n)
    if not p > max(1.0, 1.0 / w.d_minus):
        logger.warning("mean_vs_m_report: p=%s not above max(1, 1/d_minus)", p)
    _warn_unbounded(f, "mean_vs_m_report")
    m_val = np.exp(l_at_scale(f, w, n))
    deviation = abs(complex(mean_mult_gf(f, w)) - m_val)
    r = rho(f, p)
    m_abs = abs(m_val)
    return MeanVsMReport(
        n=n,
        p=p,
        deviation=deviation,
        rho=r,
        m_abs=m_abs,
        ratio_rho=_ratio(deviation, r),
        ratio_rho_m=_ratio(deviation, r * m_abs),
    )


def sumpn_report(w: WeightSpec, n: int, eps: float, q: float) -> SumpnReport:
    """
    Both weighted sums of p_j

    Raises:
        PreconditionError: q(d_minus - 1) - eps <= -1, or eps < 0, or q < 1
    """
    if n < 1:
        raise ArgumentError("sumpn_report needs n >= 1", n=n)
    _require_weights(n, w)
    if eps < 0 or q < 1 or not q * (w.d_minus - 1.0) - eps > -1.0:
        raise PreconditionError("sumpn_report needs q(d_minus-1) - eps > -1", eps=eps, q=q)
    p = _p(w, n)
    j = np.arange(1, n + 1)
    first = float(np.sum(j ** (-eps) * (p[1:] / p[n]) ** q)) / n ** (1.0 - eps)
    second = float(np.sum(np.abs(_p_ratio_gap(w, n)) ** q / j))
    return SumpnReport(n=n, eps=eps, q=q, first_ratio=first, second_sum=second)


# ============================================
# ADDITIVE FUNCTIONS
# ============================================

def _second_moment(h: AdditiveSpec, w: WeightSpec) -> float:
    k = np.arange(1, h.n + 1)
    return float(np.sum(_d(w, h.n) * h.hhat ** 2 / k))


def stats_bundle(h: AdditiveSpec, w: WeightSpec, p: float) -> CltStats:
    """
    A(n), C_n, L_{n,3}, L_{n,p}, L'_{n,2} and rho(p) of e^{i hhat}

    p should exceed max(2, 1/d_minus); otherwise a warning is logged.
    """
    n = h.n
    _require_weights(n, w)
    if not p > max(2.0, 1.0 / w.d_minus):
        logger.warning("stats_bundle: p=%s not above max(2, 1/d_minus=%s)", p, 1.0 / w.d_minus)
    k = np.arange(1, n + 1)
    d = _d(w, n)
    gap = _p_ratio_gap(w, n)
    hh = h.hhat
    return CltStats(
        n=n,
        p=p,
        A_n=float(np.sum(d * hh / k)),
        C_n=float(np.sum(d * hh / k * gap)),
        L_n3=_power_sum(hh, 3.0),
        L_np=_power_sum(hh, p),
        L_n2_prime=float(np.sum(hh ** 2 / k * np.abs(gap))),
        rho_p=rho(h.exponentiate(1.0), p),
        normalized=abs(_second_moment(h, w) - 1.0) <= settings.NORMALIZATION_TOL,
    )


def normalize_additive(h: AdditiveSpec, w: WeightSpec) -> AdditiveSpec:
    """Rescale hhat so that sum_k d_k hhat(k)^2 / k = 1"""
    _require_weights(h.n, w)
    s = _second_moment(h, w)
    if s <= 0:
        raise DomainError("cannot normalize a zero additive function", n=h.n)
    return AdditiveSpec(n=h.n, hhat=h.hhat / math.sqrt(s))


def char_fn(h: AdditiveSpec, w: WeightSpec, t: float, centered: bool = False) -> complex:
    """E exp(i t h), optionally times e^{-i t A(n)}"""
    value = complex(mean_mult_gf(h.exponentiate(t), w))
    if centered:
        k = np.arange(1, h.n + 1)
        A = float(np.sum(_d(w, h.n) * h.hhat / k))
        value *= complex(np.exp(-1j * t * A))
    return value


def phi_decay(h: AdditiveSpec, w: WeightSpec, t: float) -> float:
    """-log|phi_n(t)| / t^2 for the centered characteristic function"""
    if t == 0:
        raise ArgumentError("phi_decay needs t != 0")
    mod = abs(char_fn(h, w, t, centered=True))
    return math.inf if mod == 0 else -math.log(mod) / t ** 2


def _centered_law(h: AdditiveSpec, w: WeightSpec, p: float, override_guard: bool) -> Tuple[DistTable, CltStats]:
    if abs(_second_moment(h, w) - 1.0) > settings.NORMALIZATION_TOL:
        raise PreconditionError("additive function is not normalized", n=h.n)
    stats = stats_bundle(h, w, p)
    law = additive_dist(h, w, override_guard).shift(-stats.A_n)
    return law, stats


def _grid(law: DistTable) -> np.ndarray:
    return np.linspace(law.values[0] - 1.0, law.values[-1] + 1.0, settings.GAP_GRID_POINTS)


def _corrected(law: DistTable, x: np.ndarray, C_n: float, side: str) -> np.ndarray:
    # F_n(x) = P(h - A < x) is the left limit of the step function
    return law.cdf(x, side=side) - norm.cdf(x) + norm.pdf(x) * C_n


def corrected_gap(h: AdditiveSpec, w: WeightSpec, p: float, override_guard: bool = False) -> GapReport:
    """
    sup_x |F_n(x) - Phi(x) + phi(x) C_n| against L_{n,3} + L_{n,p}^{2/p} + L'_{n,2}

    The sup runs over both one-sided limits at every atom and a uniform grid.

    Raises:
        PreconditionError: hhat is not normalized
    """
    law, stats = _centered_law(h, w, p, override_guard)
    atoms = law.values
    grid = _grid(law)
    candidates = [
        (atoms, np.abs(_corrected(law, atoms, stats.C_n, "left"))),
        (atoms, np.abs(_corrected(law, atoms, stats.C_n, "right"))),
        (grid, np.abs(_corrected(law, grid, stats.C_n, "left"))),
    ]
    gap, argmax = -1.0, 0.0
    for xs, values in candidates:
        i = int(np.argmax(values))
        if values[i] > gap:
            gap, argmax = float(values[i]), float(xs[i])
    budget = stats.budget
    return GapReport(n=h.n, p=p, gap=gap, budget=budget, ratio=_ratio(gap, budget), argmax=argmax)


def gap_curve(h: AdditiveSpec, w: WeightSpec, override_guard: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """(x, F_n(x) - Phi(x) + phi(x) C_n) on the evaluation grid"""
    law, stats = _centered_law(h, w, math.inf, override_guard)
    x = _grid(law)
    return x, _corrected(law, x, stats.C_n, "left")


def goncharov_distance(w: WeightSpec, n: int, oracle: bool = False) -> GoncharovPoint:
    """
    Kolmogorov distance between the standardized cycle-count law and Phi

    oracle=True uses the Bernoulli-convolution law, constant weights only.
    """
    if oracle:
        if not w.is_constant:
            raise ArgumentError("the Bernoulli oracle needs constant weights", label=w.label)
        law, method = ewens_cycles_distribution(w.d_minus, n), "bernoulli"
    else:
        _require_weights(n, w)
        law, method = cycles_distribution(w, n), "exact"
    return GoncharovPoint(
        n=n,
        distance=law.kolmogorov_distance_to_normal(),
        mean=law.mean(),
        variance=law.variance(),
        method=method,
    )


# ============================================
# SERVICE
# ============================================

class CltService:
    """Service for the normal approximation and multiplicative bounds under one weight table"""

    def __init__(self, weights: WeightSpec):
        self.weights = weights

    def l_at_scale(self, f: MultiplicativeSpec, n: int) -> complex:
        return l_at_scale(f, self.weights, n)

    def delta_bound(self, f: MultiplicativeSpec) -> DeltaBoundReport:
        return delta_bound_report(f, self.weights)

    def expansion_residual(self, f: MultiplicativeSpec, p: float) -> ExpansionResidualReport:
        return expansion_residual(f, self.weights, p)

    def eu_bound(self, f: MultiplicativeSpec, u: float) -> EUBoundReport:
        return eu_bound_report(f, self.weights, u)

    def log_difference(self, f: MultiplicativeSpec, n: int, m: int, p: float) -> LogDifferenceCheck:
        return log_difference_check(f, self.weights, n, m, p)

    def mean_vs_m(self, f: MultiplicativeSpec, p: float) -> MeanVsMReport:
        return mean_vs_m_report(f, self.weights, p)

    def sumpn(self, n: int, eps: float, q: float) -> SumpnReport:
        return sumpn_report(self.weights, n, eps, q)

    def stats(self, h: AdditiveSpec, p: float) -> CltStats:
        return stats_bundle(h, self.weights, p)

    def normalize(self, h: AdditiveSpec) -> AdditiveSpec:
        return normalize_additive(h, self.weights)

    def char_fn(self, h: AdditiveSpec, t: float, centered: bool = False) -> complex:
        return char_fn(h, self.weights, t, centered)

    def phi_decay(self, h: AdditiveSpec, t: float) -> float:
        return phi_decay(h, self.weights, t)

    def gap(self, h: AdditiveSpec, p: float, normalize: bool = False, override_guard: bool = False) -> GapReport:
        """
        Corrected Kolmogorov gap of h

        Args:
            normalize: rescale h to unit variance first
        """
        if normalize:
            h = normalize_additive(h, self.weights)
        return corrected_gap(h, self.weights, p, override_guard)

    def gap_curve(self, h: AdditiveSpec, override_guard: bool = False) -> Tuple[np.ndarray, np.ndarray]:
        return gap_curve(h, self.weights, override_guard)

    def goncharov(self, n: int, oracle: bool = False) -> GoncharovPoint:
        return goncharov_distance(self.weights, n, oracle)
