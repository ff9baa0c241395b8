"""
Voronoi (Norlund) summation service
"""
import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

import numpy as np

from core.config import settings
from core.errors import ArgumentError, SpecValidationError, PreconditionError
from schemas.series import SeriesPoly
from schemas.weights import (
    WeightSpec,
    RemainderReport,
    LowerRatioCheck,
    RatioBoundsCheck,
    UpperSumCheck,
    SandwichCheck,
    CoefficientEstimate,
)
from services.series_service import (
    series_exp,
    series_mul,
    series_shift,
    series_derivative,
    series_resize,
    series_eval_real,
    eval_at_scale,
    required_order,
)

logger = logging.getLogger(__name__)


# ============================================
# HELPERS
# ============================================

def _scalar(x: Any) -> Any:
    return x.item() if isinstance(x, np.generic) else x


def _numeric(arr: np.ndarray) -> np.ndarray:
    """Float (or complex) view of a possibly exact coefficient array"""
    if arr.dtype != object:
        return arr
    if any(isinstance(x, complex) for x in arr):
        return arr.astype(complex)
    return arr.astype(float)


def _check_index(name: str, value: int, a: Optional[SeriesPoly], w: Optional[WeightSpec]) -> None:
    limit = min(
        a.order if a is not None else value,
        w.n_max if w is not None else value,
    )
    if value < 0 or value > limit:
        raise ArgumentError(f"{name} out of range", **{name: value, "limit": limit})


def _safe_ratio(lhs: float, rhs: float) -> float:
    if rhs > 0:
        return lhs / rhs
    return 0.0 if lhs < settings.ZERO_TOL else math.inf


def _nonnegative(b: SeriesPoly) -> None:
    coeffs = _numeric(b.coeffs)
    if np.iscomplexobj(coeffs):
        raise SpecValidationError("coefficients must be real")
    bad = np.flatnonzero(coeffs < 0)
    if bad.size:
        raise SpecValidationError(
            "coefficients must be nonnegative", indices=bad[:10].tolist()
        )


# ============================================
# WEIGHTS
# ============================================

def build_weights(
    d: Union[Sequence[Any], np.ndarray],
    d_minus: Any,
    d_plus: Any,
    label: str = "custom",
) -> WeightSpec:
    """
    Validate d_1..d_N against [d_minus, d_plus] and derive p_0..p_N

    Args:
        d: Values d_1..d_N; Fraction entries switch on exact mode
        d_minus: Declared lower bound, > 0
        d_plus: Declared upper bound
        label: Provenance echoed in outputs

    Returns:
        WeightSpec with p from p(z) = exp(sum d_k z^k / k)

    Raises:
        SpecValidationError: a bound is violated; the message lists indices
    """
    values = list(d)
    exact = any(isinstance(x, Fraction) for x in values)
    arr = (
        np.array([Fraction(x) for x in values], dtype=object)
        if exact
        else np.asarray(values, dtype=float)
    )
    if arr.ndim != 1:
        raise SpecValidationError("d must be one-dimensional")
    if not d_minus > 0:
        raise SpecValidationError("d_minus must be positive", d_minus=float(d_minus))
    if d_plus < d_minus:
        raise SpecValidationError(
            "d_plus below d_minus", d_minus=float(d_minus), d_plus=float(d_plus)
        )
    if not exact and not np.all(np.isfinite(arr)):
        raise SpecValidationError(
            "d must be finite", indices=(np.flatnonzero(~np.isfinite(arr)) + 1).tolist()
        )
    offending = [k + 1 for k, x in enumerate(arr) if x < d_minus or x > d_plus]
    if offending:
        raise SpecValidationError(
            "d_k outside [d_minus, d_plus]",
            indices=offending[:10],
            count=len(offending),
        )

    N = len(arr)
    if exact:
        q = np.array([Fraction(0)] + [arr[k - 1] / k for k in range(1, N + 1)], dtype=object)
    else:
        q = np.concatenate([[0.0], arr / np.arange(1, N + 1)])
    p = series_exp(SeriesPoly(order=N, coeffs=q)).coeffs

    logger.debug("built %s weights up to n=%d", label, N)
    return WeightSpec(
        n_max=N,
        d=arr,
        d_minus=float(d_minus),
        d_plus=float(d_plus),
        p=p,
        theta=min(float(d_minus), 1.0),
        label=label,
    )


def constant_weights(theta: Any, n_max: int) -> WeightSpec:
    """d_k = theta for every k (the Ewens case)"""
    if n_max < 0:
        raise ArgumentError("n_max must be nonnegative", n_max=n_max)
    return build_weights([theta] * n_max, theta, theta, label=f"constant:{theta}")


def random_weights(lo: float, hi: float, n_max: int, seed: int) -> WeightSpec:
    """d_k drawn uniformly from [lo, hi] with an explicit seed"""
    if n_max < 0:
        raise ArgumentError("n_max must be nonnegative", n_max=n_max)
    if not 0 < lo <= hi:
        raise ArgumentError("random weights need 0 < lo <= hi", lo=lo, hi=hi)
    rng = np.random.default_rng(seed)
    d = rng.uniform(lo, hi, n_max)
    return build_weights(d, lo, hi, label=f"random:{lo}:{hi}:{seed}")


def weights_from_file(
    path: Union[str, Path],
    d_minus: Optional[float] = None,
    d_plus: Optional[float] = None,
) -> WeightSpec:
    """
    Read d_1..d_N from a whitespace/comma separated text file

    Bounds default to the observed min and max.

    Raises:
        SpecValidationError: unreadable file, malformed or empty contents
    """
    path = Path(path)
    try:
        text = path.read_text().replace(",", " ")
    except (OSError, UnicodeDecodeError) as e:
        raise SpecValidationError("cannot read weight file", path=str(path), reason=str(e)) from None
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    try:
        d = np.array([float(tok) for ln in lines for tok in ln.split()], dtype=float)
    except ValueError as e:
        raise SpecValidationError("malformed weight file", path=str(path), reason=str(e)) from None
    if d.size == 0:
        raise SpecValidationError("weight file holds no values", path=str(path))
    lo = float(d.min()) if d_minus is None else d_minus
    hi = float(d.max()) if d_plus is None else d_plus
    return build_weights(d, lo, hi, label=f"file:{path.name}")


# ============================================
# MEANS AND TRANSFORMS
# ============================================

def voronoi_mean(a: SeriesPoly, w: WeightSpec, n: int) -> Any:
    """V_n = (1/p_n) sum_{k<=n} a_k p_{n-k}; V_0 = a_0"""
    _check_index("n", n, a, w)
    if n == 0:
        return _scalar(a.coeffs[0])
    total = np.dot(a.coeffs[: n + 1], w.p[n::-1])
    return _scalar(total / w.p[n])


def norlund_mean(a: SeriesPoly, w_raw: Union[Sequence[Any], np.ndarray], n: int) -> Any:
    """
    Norlund mean with raw weights: sum_k w_k s_{n-k} / sum_k w_k

    s_m are the partial sums of a. With w = [1, 0, 0, ...] this is the
    plain partial sum s_n.
    """
    w_arr = np.asarray(w_raw, dtype=object if any(isinstance(x, Fraction) for x in w_raw) else float)
    _check_index("n", n, a, None)
    if len(w_arr) < n + 1:
        raise ArgumentError("too few raw weights", n=n, available=len(w_arr))
    head = w_arr[: n + 1]
    if any(x < 0 for x in head):
        raise SpecValidationError("raw weights must be nonnegative")
    W = sum(head)
    if W == 0:
        raise SpecValidationError("raw weights sum to zero", n=n)
    s = np.cumsum(a.coeffs[: n + 1])
    return _scalar(np.dot(head, s[::-1]) / W)


def s_transform(a: SeriesPoly, w: WeightSpec, j: int) -> Any:
    """S(g;j) = sum_{k<=j} a_k k p_{j-k}; S(g;0) = 0"""
    _check_index("j", j, a, w)
    if j == 0:
        return 0
    k = np.arange(j + 1)
    weighted = np.array([int(i) * a.coeffs[i] for i in k], dtype=object) if a.exact else k * a.coeffs[: j + 1]
    return _scalar(np.dot(weighted, w.p[j::-1]))


def s_transform_all(a: SeriesPoly, w: WeightSpec, horizon: int) -> np.ndarray:
    """S(g;0..horizon) as the coefficients of p(z) z g'(z)"""
    _check_index("horizon", horizon, a, w)
    if horizon == 0:
        return np.zeros(1, dtype=a.coeffs.dtype)
    zg = series_shift(series_derivative(series_resize(a, horizon)), 1)
    return series_mul(w.p_series(horizon), zg).coeffs


def tauber_trajectory(a: SeriesPoly, w: WeightSpec, n_list: Iterable[int]) -> np.ndarray:
    """S(g;n) / (n p_n) for each requested n"""
    ns = [int(n) for n in n_list]
    if not ns:
        return np.zeros(0)
    for n in ns:
        if n < 1:
            raise ArgumentError("tauber_trajectory needs n >= 1", n=n)
        _check_index("n", n, a, w)
    S = _numeric(s_transform_all(a, w, max(ns)))
    p = _numeric(w.p)
    return np.array([S[n] / (n * p[n]) for n in ns])


# ============================================
# REMAINDER
# ============================================

def remainder_report(
    a: SeriesPoly,
    w: WeightSpec,
    n: int,
    tail_horizon: Optional[int] = None,
) -> RemainderReport:
    """
    Evaluate both sides of the remainder inequality at n

    lhs = |V_n - g(e^{-1/n}) - S(g;n)/(n p_n)|, compared with
    n^{-theta} sum_{j<=n} |S(g;j)| j^{theta-2} / p_j plus
    (1/p(e^{-1/n})) sum_{n<j<=H} |S(g;j)| e^{-j/n} / j.

    Args:
        a: Coefficients of g, order >= tail_horizon
        w: Weights, n_max >= tail_horizon
        n: Index, >= 1
        tail_horizon: H, defaults to max(TAIL_HORIZON_FACTOR * n, required_order(n))
            so the tail reaches as far as g is evaluated

    Raises:
        ArgumentError: n < 1, H < 8n, or series too short for H
    """
    if n < 1:
        raise ArgumentError("remainder_report needs n >= 1", n=n)
    minimum = settings.TAIL_HORIZON_FACTOR * n
    H = max(minimum, required_order(n)) if tail_horizon is None else tail_horizon
    if H < minimum:
        raise ArgumentError("tail_horizon too short", tail_horizon=H, minimum=minimum)
    if a.order < H or w.n_max < H:
        raise ArgumentError(
            "series shorter than tail_horizon", tail_horizon=H, a_order=a.order, n_max=w.n_max
        )

    S_signed = _numeric(s_transform_all(a, w, H))
    S = np.abs(S_signed)
    p = _numeric(w.p)
    theta = w.theta

    V = complex(voronoi_mean(a, w, n))
    g_val = complex(eval_at_scale(a, n))
    correction = complex(S_signed[n]) / (n * p[n])
    lhs = abs(V - g_val - correction)

    j = np.arange(1, n + 1)
    rhs_sum1 = float(n ** (-theta) * np.sum(S[1 : n + 1] * j ** (theta - 2.0) / p[1 : n + 1]))
    jt = np.arange(n + 1, H + 1)
    tail = np.sum(S[n + 1 : H + 1] * np.exp(-jt / n) / jt) if H > n else 0.0
    rhs_sum2 = float(tail / w.p_at_scale(n))

    return RemainderReport(
        n=n,
        voronoi_mean=V,
        g_at_point=g_val,
        correction=correction,
        lhs=lhs,
        rhs_sum1=rhs_sum1,
        rhs_sum2=rhs_sum2,
        ratio=_safe_ratio(lhs, rhs_sum1 + rhs_sum2),
        tail_horizon=H,
    )


# ============================================
# COEFFICIENT LEMMAS
# ============================================

def lower_bound_constant(c: float) -> float:
    """K(c): 1/2 for c <= 1/2, else e^{-1/2} / (2 (2c)^c)"""
    if c <= 0.5:
        return 0.5
    return math.exp(-0.5) / (2.0 * (2.0 * c) ** c)


def lower_ratio_check(
    b: SeriesPoly,
    c: float,
    N: int,
    grid: Optional[Sequence[float]] = None,
) -> LowerRatioCheck:
    """
    Partial sum of b up to N against b(e^{-1/N})

    The hypothesis b'(x)/b(x) <= c/(1-x) is verified on a finite grid only.

    Raises:
        SpecValidationError: negative coefficient
        PreconditionError: the log-derivative bound fails at some grid x
        ArgumentError: N < 2c or N beyond the series order
    """
    _nonnegative(b)
    if c < 0:
        raise ArgumentError("c must be nonnegative", c=c)
    if N < 1 or N < 2 * c:
        raise ArgumentError("lower_ratio_check needs N >= max(1, 2c)", N=N, c=c)
    if N > b.order:
        raise ArgumentError("N beyond series order", N=N, order=b.order)

    coeffs = _numeric(b.coeffs)
    numeric = SeriesPoly(order=b.order, coeffs=coeffs)
    db = series_derivative(numeric) if b.order >= 1 else SeriesPoly.zeros(0)
    slack = settings.INEQUALITY_SLACK
    for x in grid if grid is not None else settings.LOG_DERIVATIVE_GRID:
        bx = series_eval_real(numeric, x)
        dbx = series_eval_real(db, x)
        if dbx * (1.0 - x) > c * bx * (1.0 + slack) + slack:
            raise PreconditionError(
                "log-derivative bound b'/b <= c/(1-x) fails", x=x, c=c
            )

    ratio = float(np.sum(coeffs[: N + 1])) / float(eval_at_scale(numeric, N))
    floor = lower_bound_constant(c)
    return LowerRatioCheck(ratio=ratio, floor=floor, passed=ratio >= floor)


def upper_sum_check(b: SeriesPoly, n: int) -> UpperSumCheck:
    """sum_{k<=n} b_k <= e * b(e^{-1/n}) for nonnegative b"""
    _nonnegative(b)
    if n < 1 or n > b.order:
        raise ArgumentError("n out of range", n=n, order=b.order)
    coeffs = _numeric(b.coeffs)
    partial = float(np.sum(coeffs[: n + 1]))
    bound = math.e * float(eval_at_scale(SeriesPoly(order=b.order, coeffs=coeffs), n))
    return UpperSumCheck(
        n=n,
        partial_sum=partial,
        bound=bound,
        passed=partial <= bound * (1.0 + settings.INEQUALITY_SLACK),
    )


def ratio_bounds_check(w: WeightSpec, m: int, n: int) -> RatioBoundsCheck:
    """(m/n)^{d-} e^{-d-/n} <= p(e^{-1/m}) / p(e^{-1/n}) <= (m/n)^{d+} e^{d+/m}"""
    if n < 1 or m < n:
        raise ArgumentError("ratio_bounds_check needs m >= n >= 1", m=m, n=n)
    ratio = w.p_at_scale(m) / w.p_at_scale(n)
    lower = (m / n) ** w.d_minus * math.exp(-w.d_minus / n)
    upper = (m / n) ** w.d_plus * math.exp(w.d_plus / m)
    slack = settings.INEQUALITY_SLACK
    passed = lower * (1.0 - slack) <= ratio <= upper * (1.0 + slack)
    return RatioBoundsCheck(m=m, n=n, ratio=ratio, lower=lower, upper=upper, passed=passed)


def sandwich_ratio(w: WeightSpec, n: int) -> SandwichCheck:
    """r_n = n p_n / p(e^{-1/n}), which lies in (0, d+ e]"""
    if n < 1 or n > w.n_max:
        raise ArgumentError("n out of range", n=n, n_max=w.n_max)
    r = n * float(w.p[n]) / w.p_at_scale(n)
    upper = w.d_plus * math.e
    return SandwichCheck(
        n=n, ratio=r, upper=upper, passed=0 < r <= upper * (1.0 + settings.INEQUALITY_SLACK)
    )


def smoothness_ratio(w: WeightSpec, n: int, s: int) -> float:
    """|p_{n+s} - p_n| / (p_n (s/n)^theta) for 0 <= s <= n/2"""
    if n < 1 or s < 0 or 2 * s > n:
        raise ArgumentError("smoothness_ratio needs 0 <= s <= n/2", n=n, s=s)
    if n + s > w.n_max:
        raise ArgumentError("n + s beyond n_max", n=n, s=s, n_max=w.n_max)
    if s == 0:
        return 0.0
    pn = float(w.p[n])
    return abs(float(w.p[n + s]) - pn) / (pn * (s / n) ** w.theta)


def reciprocal_coeffs(w: WeightSpec, N: int) -> SeriesPoly:
    """q(z) = 1/p(z) = exp(-sum d_k z^k / k) to order N"""
    if N < 0 or N > w.n_max:
        raise ArgumentError("N out of range", N=N, n_max=w.n_max)
    if w.exact:
        q = np.array([Fraction(0)] + [-w.d[k - 1] / k for k in range(1, N + 1)], dtype=object)
    else:
        q = np.concatenate([[0.0], -w.d[:N] / np.arange(1, N + 1)])
    return series_exp(SeriesPoly(order=N, coeffs=q))


def v_coeff(w: WeightSpec, m: int, j: int) -> Any:
    """v_{m,j} = sum_{s<=m} p_{m-s} q_s / (s + j)"""
    if j < 1:
        raise ArgumentError("v_coeff needs j >= 1", j=j)
    if m < 0 or m > w.n_max:
        raise ArgumentError("m out of range", m=m, n_max=w.n_max)
    q = reciprocal_coeffs(w, m).coeffs
    if w.exact:
        return sum((w.p[m - s] * q[s] / (s + j) for s in range(m + 1)), Fraction(0))
    s = np.arange(m + 1)
    return float(np.sum(w.p[m::-1] * q / (s + j)))


def coefficient_asymptotic(a: SeriesPoly, w: WeightSpec, n: int) -> CoefficientEstimate:
    """[z^n] p(z) g(z) against p_n g(e^{-1/n})"""
    if n < 1:
        raise ArgumentError("coefficient_asymptotic needs n >= 1", n=n)
    _check_index("n", n, a, w)
    pn = float(w.p[n])
    coefficient = complex(voronoi_mean(a, w, n)) * pn
    estimate = pn * complex(eval_at_scale(SeriesPoly(order=a.order, coeffs=_numeric(a.coeffs)), n))
    scale = abs(estimate) if abs(estimate) > settings.ZERO_TOL else 1.0
    return CoefficientEstimate(
        n=n,
        coefficient=coefficient,
        estimate=estimate,
        relative_error=abs(coefficient - estimate) / scale,
    )


# ============================================
# SERVICE
# ============================================

class VoronoiService:
    """Service for Voronoi means and weight diagnostics over one weight sequence"""

    def __init__(self, weights: WeightSpec):
        self.weights = weights

    def mean(self, a: SeriesPoly, n: int) -> Any:
        return voronoi_mean(a, self.weights, n)

    def s_transform(self, a: SeriesPoly, j: int) -> Any:
        return s_transform(a, self.weights, j)

    def s_transform_all(self, a: SeriesPoly, horizon: int) -> np.ndarray:
        return s_transform_all(a, self.weights, horizon)

    def trajectory(self, a: SeriesPoly, n_list: Iterable[int]) -> np.ndarray:
        return tauber_trajectory(a, self.weights, n_list)

    def remainder(self, a: SeriesPoly, n: int, tail_horizon: Optional[int] = None) -> RemainderReport:
        """
        Remainder report at n

        Args:
            a: Coefficients of g, long enough for the tail horizon
            n: Index, >= 1
            tail_horizon: Defaults to max(TAIL_HORIZON_FACTOR * n, required_order(n))

        Returns:
            RemainderReport
        """
        return remainder_report(a, self.weights, n, tail_horizon)

    def ratio_bounds(self, m: int, n: int) -> RatioBoundsCheck:
        return ratio_bounds_check(self.weights, m, n)

    def sandwich(self, n: int) -> SandwichCheck:
        return sandwich_ratio(self.weights, n)

    def smoothness(self, n: int, s: int) -> float:
        return smoothness_ratio(self.weights, n, s)

    def reciprocal(self, N: int) -> SeriesPoly:
        return reciprocal_coeffs(self.weights, N)

    def v_coeff(self, m: int, j: int) -> Any:
        return v_coeff(self.weights, m, j)

    def coefficient_asymptotic(self, a: SeriesPoly, n: int) -> CoefficientEstimate:
        return coefficient_asymptotic(a, self.weights, n)
