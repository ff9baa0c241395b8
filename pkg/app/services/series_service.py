"""
Truncated power-series arithmetic
"""
import logging
import math
from fractions import Fraction
from typing import Any, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from core.config import settings
from core.errors import ArgumentError, DomainError, SeriesOverflowError
from schemas.series import SeriesPoly

logger = logging.getLogger(__name__)


# ============================================
# HELPERS
# ============================================

def required_order(n: int) -> int:
    """Truncation order needed to evaluate a series at e^{-1/n}"""
    return max(settings.EVAL_ORDER_FACTOR * n, n + settings.EVAL_ORDER_PAD)


def _checked(coeffs: np.ndarray, op: str) -> SeriesPoly:
    if coeffs.dtype != object and not np.all(np.isfinite(coeffs)):
        bad = int(np.flatnonzero(~np.isfinite(coeffs))[0])
        raise SeriesOverflowError(f"{op} produced a non-finite coefficient", index=bad)
    return SeriesPoly(order=len(coeffs) - 1, coeffs=coeffs)


def _aligned(A: SeriesPoly, B: SeriesPoly) -> Tuple[np.ndarray, np.ndarray]:
    """Bring two coefficient arrays to a shared scalar type"""
    if A.exact and B.exact:
        return A.coeffs, B.coeffs
    a = A.coeffs.astype(complex if B.is_complex else float) if A.exact else A.coeffs
    b = B.coeffs.astype(complex if A.is_complex else float) if B.exact else B.coeffs
    return a, b


def _wide(dtype: np.dtype) -> type:
    """Extended-precision accumulator for the exp/log recurrences"""
    return np.clongdouble if np.issubdtype(dtype, np.complexfloating) else np.longdouble


def _require_same_order(A: SeriesPoly, B: SeriesPoly, op: str) -> None:
    if A.order != B.order:
        raise ArgumentError(f"{op} needs series of equal order", left=A.order, right=B.order)


# ============================================
# ARITHMETIC
# ============================================

def series_add(A: SeriesPoly, B: SeriesPoly) -> SeriesPoly:
    """Entrywise sum of two series of the same order"""
    _require_same_order(A, B, "series_add")
    a, b = _aligned(A, B)
    with np.errstate(over="ignore", invalid="ignore"):
        return _checked(a + b, "series_add")


def series_mul(A: SeriesPoly, B: SeriesPoly) -> SeriesPoly:
    """
    Cauchy product truncated at the common order

    Args:
        A: Left factor
        B: Right factor, same order as A

    Returns:
        Series whose n-th coefficient is sum_{k<=n} A_k B_{n-k}
    """
    _require_same_order(A, B, "series_mul")
    a, b = _aligned(A, B)
    N = A.order
    if a.dtype == object:
        out = np.empty(N + 1, dtype=object)
        for n in range(N + 1):
            out[n] = sum((a[k] * b[n - k] for k in range(n + 1)), Fraction(0))
        return _checked(out, "series_mul")
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.convolve(a, b)[: N + 1]
    return _checked(out, "series_mul")


def series_exp(Q: SeriesPoly) -> SeriesPoly:
    """
    exp(Q(z)) via P_n = (1/n) sum_{k=1}^n k Q_k P_{n-k}, P_0 = exp(Q_0)

    Args:
        Q: Exponent series with a real constant term

    Returns:
        Truncated expansion of exp(Q(z)) to Q.order

    Raises:
        DomainError: complex Q_0, or non-zero Q_0 in exact mode
        SeriesOverflowError: non-finite coefficients
    """
    q = Q.coeffs
    N = Q.order
    if Q.exact:
        if q[0] != 0:
            raise DomainError("exact series_exp needs Q_0 = 0", q0=str(q[0]))
        kq = [k * q[k] for k in range(N + 1)]
        out = np.empty(N + 1, dtype=object)
        out[0] = Fraction(1)
        for n in range(1, N + 1):
            out[n] = sum((kq[k] * out[n - k] for k in range(1, n + 1)), Fraction(0)) / n
        return _checked(out, "series_exp")

    q0 = q[0]
    if np.iscomplexobj(q) and q0.imag != 0:
        raise DomainError("series_exp needs a real constant term", q0=complex(q0))
    wide = _wide(q.dtype)
    with np.errstate(over="ignore", invalid="ignore"):
        kq = np.arange(N + 1) * q.astype(wide)
        out = np.empty(N + 1, dtype=wide)
        out[0] = np.exp(np.longdouble(q0.real))
        for n in range(1, N + 1):
            out[n] = np.dot(kq[1 : n + 1], out[n - 1 :: -1]) / n
        out = out.astype(q.dtype)
    return _checked(out, "series_exp")


def series_log(P: SeriesPoly) -> SeriesPoly:
    """
    log(P(z)) by inverting the exp recurrence

    Raises:
        DomainError: P_0 <= 0 (or P_0 != 1 in exact mode)
    """
    p = P.coeffs
    N = P.order
    if P.exact:
        if p[0] != 1:
            raise DomainError("exact series_log needs P_0 = 1", p0=str(p[0]))
        out = np.empty(N + 1, dtype=object)
        out[0] = Fraction(0)
        for n in range(1, N + 1):
            acc = sum((k * out[k] * p[n - k] for k in range(1, n)), Fraction(0))
            out[n] = p[n] - acc / n
        return _checked(out, "series_log")

    p0 = p[0]
    if (np.iscomplexobj(p) and p0.imag != 0) or p0.real <= 0:
        raise DomainError("series_log needs a positive real constant term", p0=complex(p0) if np.iscomplexobj(p) else float(p0))
    p0 = np.longdouble(p0.real)
    wide = _wide(p.dtype)
    pw = p.astype(wide)
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.empty(N + 1, dtype=wide)
        kl = np.zeros(N + 1, dtype=wide)
        out[0] = np.log(p0)
        for n in range(1, N + 1):
            acc = np.dot(kl[1:n], pw[n - 1 : 0 : -1]) if n > 1 else 0.0
            out[n] = (pw[n] - acc / n) / p0
            kl[n] = n * out[n]
        out = out.astype(p.dtype)
    return _checked(out, "series_log")


def series_derivative(P: SeriesPoly) -> SeriesPoly:
    """Derivative, one order lower; no zero padding"""
    if P.order < 1:
        raise ArgumentError("series_derivative needs order >= 1", order=P.order)
    k = np.arange(1, P.order + 1)
    if P.exact:
        out = np.array([int(j) * P.coeffs[j] for j in k], dtype=object)
    else:
        out = k * P.coeffs[1:]
    return _checked(out, "series_derivative")


def series_shift(P: SeriesPoly, k: int) -> SeriesPoly:
    """Multiply by z^k; the order grows by k"""
    if k < 0:
        raise ArgumentError("series_shift needs k >= 0", k=k)
    zero = Fraction(0) if P.exact else 0
    head = np.array([zero] * k, dtype=P.coeffs.dtype)
    return SeriesPoly(order=P.order + k, coeffs=np.concatenate([head, P.coeffs]))


def series_resize(P: SeriesPoly, order: int) -> SeriesPoly:
    """Truncate, or pad with zeros, to the given order"""
    if order < 0:
        raise ArgumentError("series_resize needs order >= 0", order=order)
    if order <= P.order:
        return SeriesPoly(order=order, coeffs=P.coeffs[: order + 1])
    zero = Fraction(0) if P.exact else 0
    tail = np.array([zero] * (order - P.order), dtype=P.coeffs.dtype)
    return SeriesPoly(order=order, coeffs=np.concatenate([P.coeffs, tail]))


# ============================================
# EVALUATION
# ============================================

def series_eval_real(P: SeriesPoly, x: Any) -> Any:
    """
    Horner evaluation of the truncated polynomial at 0 <= x < 1

    A Fraction argument on an exact series gives an exact result; otherwise
    the result is a float (or complex) scalar.
    """
    if not 0 <= x < 1:
        raise DomainError("series_eval_real needs 0 <= x < 1", x=float(x))
    if P.exact and isinstance(x, Fraction):
        acc = Fraction(0)
        for c in P.coeffs[::-1]:
            acc = acc * x + c
        return acc
    coeffs = P.coeffs.astype(float) if P.exact else P.coeffs
    return npoly.polyval(float(x), coeffs).item()


def eval_at_scale(P: SeriesPoly, n: int) -> Any:
    """P(e^{-1/n}); warns when the truncation order is below the evaluation rule"""
    if n < 1:
        raise ArgumentError("eval_at_scale needs n >= 1", n=n)
    if P.order < required_order(n):
        logger.warning(
            "evaluating order-%d series at e^(-1/%d); rule asks for order %d",
            P.order, n, required_order(n),
        )
    return series_eval_real(P, math.exp(-1.0 / n))
