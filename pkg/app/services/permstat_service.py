"""
Statistics of weighted random permutations
"""
import logging
import math
from fractions import Fraction
from typing import Any, Iterator, List, Optional, Sequence

import numpy as np
from scipy.special import gammaln

from core.config import settings
from core.errors import ArgumentError, DomainError
from schemas.permutations import (
    AdditiveSpec,
    CycleCount,
    CycleType,
    DistTable,
    MultiplicativeSpec,
)
from schemas.series import SeriesPoly
from schemas.weights import WeightSpec
from services.series_service import series_exp
from utils.partitions import PartitionIndex, check_guard, iter_multiplicities, partition_blocks

logger = logging.getLogger(__name__)


# ============================================
# HELPERS
# ============================================

def _require_weights(n: int, w: WeightSpec) -> None:
    if n > w.n_max:
        raise ArgumentError("n beyond the weight table", n=n, n_max=w.n_max)


def _float_d(w: WeightSpec) -> np.ndarray:
    return w.d.astype(float) if w.exact else w.d


def _float_p(w: WeightSpec) -> np.ndarray:
    return w.p.astype(float) if w.exact else w.p


def _log_probs(index: PartitionIndex, w: WeightSpec) -> np.ndarray:
    """log nu_{n,d} of every partition in the block"""
    d = _float_d(w)
    j = index.parts
    k = index.mults
    entry = k * (np.log(d[j - 1]) - np.log(j)) - gammaln(k + 1)
    return index.reduce_sum(entry) - math.log(float(w.p[index.n]))


def _unwrap(z: complex, real: bool) -> Any:
    return z.real if real else z


def _exp_coeffs(f: MultiplicativeSpec, w: WeightSpec, order: int, shift_one: bool) -> np.ndarray:
    """Coefficients of exp(sum_j d_j c_j z^j / j) with c_j = fhat(j) (or fhat(j) - 1)"""
    fh = f.fhat[:order]
    c = fh - 1.0 if shift_one else fh
    d = _float_d(w)[:order]
    q = np.concatenate([np.zeros(1, dtype=c.dtype), d * c / np.arange(1, order + 1)])
    if np.iscomplexobj(q) and np.all(q.imag == 0):
        q = q.real
    return series_exp(SeriesPoly(order=order, coeffs=q)).coeffs


# ============================================
# ENUMERATION
# ============================================

def partitions(n: int, override_guard: bool = False) -> Iterator[CycleType]:
    """
    Every partition of n once, descending-lexicographic

    Raises:
        ResourceError: n above the enumeration guard
    """
    check_guard(n, override_guard)
    for pairs in iter_multiplicities(n):
        yield CycleType.from_pairs(n, list(pairs))


def cycle_type_count(t: CycleType) -> CycleCount:
    """
    Number of permutations of type t: n! / prod_j (k_j! j^{k_j})

    Returns:
        CycleCount with the log-count, plus the exact integer for n <= EXACT_COUNT_GUARD
    """
    log_count = math.lgamma(t.n + 1) - sum(
        math.lgamma(k + 1) + k * math.log(j) for j, k in t.multiplicities.items()
    )
    exact = None
    if t.n <= settings.EXACT_COUNT_GUARD:
        denom = 1
        for j, k in t.multiplicities.items():
            denom *= math.factorial(k) * j ** k
        exact = math.factorial(t.n) // denom
    return CycleCount(log_count=log_count, exact=exact)


def cycle_type_of(images: Sequence[int]) -> CycleType:
    """
    Cycle type of a permutation in one-line notation

    Labels may be 0-based or 1-based.
    """
    values = [int(x) for x in images]
    n = len(values)
    base = 0 if n and min(values) == 0 else 1
    if sorted(values) != list(range(base, base + n)):
        raise DomainError("not a permutation in one-line notation", n=n)
    seen = [False] * n
    counts: dict = {}
    for start in range(n):
        if seen[start]:
            continue
        length, i = 0, start
        while not seen[i]:
            seen[i] = True
            i = values[i] - base
            length += 1
        counts[length] = counts.get(length, 0) + 1
    return CycleType(n=n, multiplicities=counts)


# ============================================
# MEASURE AND MEANS
# ============================================

def measure_prob(t: CycleType, w: WeightSpec) -> Any:
    """
    nu_{n,d} of the cycle type: prod_j (d_j/j)^{k_j} / k_j! / p_n

    Exact weights give a Fraction; otherwise the product is taken in log space.
    """
    _require_weights(t.n, w)
    if w.exact:
        out = Fraction(1)
        for j, k in t.multiplicities.items():
            out *= (w.d[j - 1] / j) ** k / math.factorial(k)
        return out / w.p[t.n]
    log_p = sum(
        k * (math.log(float(w.d[j - 1])) - math.log(j)) - math.lgamma(k + 1)
        for j, k in t.multiplicities.items()
    )
    return math.exp(log_p - math.log(float(w.p[t.n])))


def mean_mult_gf(f: MultiplicativeSpec, w: WeightSpec) -> Any:
    """M_n(f) = [z^n] exp(sum_j d_j fhat(j) z^j / j) / p_n"""
    n = f.n
    _require_weights(n, w)
    if n == 0:
        return 1.0
    M = _exp_coeffs(f, w, n, shift_one=False)
    return _unwrap(complex(M[n]) / float(w.p[n]), f.is_real)


def mean_mult_enum(f: MultiplicativeSpec, w: WeightSpec, override_guard: bool = False) -> Any:
    """Brute-force mean of f over all cycle types of n"""
    n = f.n
    _require_weights(n, w)
    total = 0j
    for index in partition_blocks(n, override_guard):
        probs = np.exp(_log_probs(index, w))
        values = index.reduce_prod(f.fhat[index.parts - 1].astype(complex) ** index.mults)
        total += complex(np.dot(probs, values))
    return _unwrap(total, f.is_real)


def m_series(f: MultiplicativeSpec, w: WeightSpec, order: Optional[int] = None) -> SeriesPoly:
    """m(z) = exp(sum_j d_j (fhat(j) - 1) z^j / j), so that M(z) = p(z) m(z)"""
    order = f.n if order is None else order
    if order < 0 or order > f.n:
        raise ArgumentError("order out of range", order=order, n=f.n)
    _require_weights(order, w)
    return SeriesPoly(order=order, coeffs=_exp_coeffs(f, w, order, shift_one=True))


def mult_s_transform(f: MultiplicativeSpec, w: WeightSpec, n: Optional[int] = None) -> Any:
    """S(m;n) = sum_{j<=n} d_j (fhat(j) - 1) M_{n-j}"""
    n = f.n if n is None else n
    if n < 0 or n > f.n:
        raise ArgumentError("n out of range", n=n, fn=f.n)
    _require_weights(n, w)
    if n == 0:
        return 0.0
    M = _exp_coeffs(f, w, n, shift_one=False)
    c = _float_d(w)[:n] * (f.fhat[:n] - 1.0)
    return _unwrap(complex(np.dot(c, M[n - 1 :: -1])), f.is_real)


# ============================================
# DISTRIBUTIONS
# ============================================

def additive_dist(h: AdditiveSpec, w: WeightSpec, override_guard: bool = False) -> DistTable:
    """
    Exact law of h under nu_{n,d}, values merged within VALUE_MERGE_TOL

    Raises:
        ResourceError: n above the enumeration guard
    """
    n = h.n
    _require_weights(n, w)
    values: List[np.ndarray] = []
    probs: List[np.ndarray] = []
    for index in partition_blocks(n, override_guard):
        values.append(index.reduce_sum(h.hhat[index.parts - 1] * index.mults) if n else np.zeros(1))
        probs.append(np.exp(_log_probs(index, w)))
    return DistTable.aggregate(np.concatenate(values), np.concatenate(probs))


def cycles_distribution(
    w: WeightSpec,
    n: int,
    method: Optional[str] = None,
    override_guard: bool = False,
) -> DistTable:
    """
    Law of the number of cycles

    Args:
        method: "enumerate" (additive_dist with hhat = 1), "gf" (bivariate
            generating function), or None to enumerate within the guard
    """
    _require_weights(n, w)
    if n == 0:
        return DistTable.point_mass(0.0)
    if method is None:
        method = "enumerate" if n <= settings.PARTITION_GUARD else "gf"
    if method == "enumerate":
        return additive_dist(AdditiveSpec(n=n, hhat=np.ones(n)), w, override_guard)
    if method != "gf":
        raise ArgumentError("unknown method", method=method)

    # [z^n x^k] exp(x D(z)) = [z^n] D(z)^k / k!
    D = np.concatenate([[0.0], _float_d(w)[:n] / np.arange(1, n + 1)])
    E = np.zeros(n + 1)
    E[0] = 1.0
    probs = np.empty(n)
    pn = float(w.p[n])
    for k in range(1, n + 1):
        E = np.convolve(E, D)[: n + 1] / k
        probs[k - 1] = E[n] / pn
    return DistTable(values=np.arange(1, n + 1, dtype=float), probs=probs)


def ewens_cycles_distribution(theta: float, n: int) -> DistTable:
    """Cycle count under Ewens(theta) as a sum of Bernoulli(theta/(theta+k-1))"""
    if theta <= 0:
        raise ArgumentError("theta must be positive", theta=theta)
    if n < 0:
        raise ArgumentError("n must be nonnegative", n=n)
    if n == 0:
        return DistTable.point_mass(0.0)
    law = np.array([1.0])
    for k in range(1, n + 1):
        q = theta / (theta + k - 1)
        law = np.convolve(law, [1.0 - q, q])
    return DistTable(values=np.arange(1, n + 1, dtype=float), probs=law[1:])


# ============================================
# SAMPLING
# ============================================

def _first_cycle_cdfs(w: WeightSpec, n: int) -> List[np.ndarray]:
    """cdfs[m] over j = 1..m of d_j p_{m-j} / (m p_m)"""
    d = _float_d(w)
    p = _float_p(w)
    cdfs: List[np.ndarray] = [np.zeros(0)]
    for m in range(1, n + 1):
        cdf = np.cumsum(d[:m] * p[m - 1 :: -1] / (m * p[m]))
        cdf[-1] = 1.0
        cdfs.append(cdf)
    return cdfs


def sample_cycle_types(w: WeightSpec, n: int, count: int, seed: int) -> List[CycleType]:
    """
    Draw `count` cycle types from nu_{n,d} on one RNG stream

    With m elements left the next cycle has length j with probability
    d_j p_{m-j} / (m p_m).
    """
    _require_weights(n, w)
    if count < 0:
        raise ArgumentError("count must be nonnegative", count=count)
    rng = np.random.default_rng(seed)
    cdfs = _first_cycle_cdfs(w, n)
    out: List[CycleType] = []
    for _ in range(count):
        m = n
        counts: dict = {}
        while m > 0:
            j = int(np.searchsorted(cdfs[m], rng.random(), side="right")) + 1
            j = min(j, m)
            counts[j] = counts.get(j, 0) + 1
            m -= j
        out.append(CycleType(n=n, multiplicities=counts))
    logger.debug("sampled %d cycle types at n=%d (seed=%d)", count, n, seed)
    return out


def sample_cycle_type(w: WeightSpec, n: int, seed: int) -> CycleType:
    """One cycle type; deterministic given seed"""
    return sample_cycle_types(w, n, 1, seed)[0]


def empirical_law(samples: Sequence[float]) -> DistTable:
    """Law of observed values, each sample weighted equally"""
    if not len(samples):
        raise ArgumentError("no samples")
    values, counts = np.unique(np.asarray(samples, dtype=float), return_counts=True)
    return DistTable(values=values, probs=counts / counts.sum())


# ============================================
# SERVICE
# ============================================

class PermStatService:
    """Service for laws and means of permutations drawn from nu_{n,d}"""

    def __init__(self, weights: WeightSpec):
        self.weights = weights

    def measure_prob(self, t: CycleType) -> Any:
        return measure_prob(t, self.weights)

    def means(self, f: MultiplicativeSpec, override_guard: bool = False) -> tuple:
        """
        Mean of f by the generating function and, within the guard, by enumeration

        Returns:
            (mean_gf, mean_enum); mean_enum is None past the enumeration guard
        """
        enum = None
        if f.n <= settings.PARTITION_GUARD or override_guard:
            enum = mean_mult_enum(f, self.weights, override_guard)
        return mean_mult_gf(f, self.weights), enum

    def m_series(self, f: MultiplicativeSpec, order: Optional[int] = None) -> SeriesPoly:
        return m_series(f, self.weights, order)

    def mult_s_transform(self, f: MultiplicativeSpec, n: Optional[int] = None) -> Any:
        return mult_s_transform(f, self.weights, n)

    def law(self, h: AdditiveSpec, override_guard: bool = False) -> DistTable:
        """Exact law of h; the cycle count goes through the generating function"""
        if h.n and np.all(h.hhat == 1.0):
            return cycles_distribution(self.weights, h.n, override_guard=override_guard)
        return additive_dist(h, self.weights, override_guard)

    def cycles(self, n: int, method: Optional[str] = None, override_guard: bool = False) -> DistTable:
        return cycles_distribution(self.weights, n, method, override_guard)

    def sample(self, n: int, count: int, seed: int) -> List[CycleType]:
        return sample_cycle_types(self.weights, n, count, seed)
