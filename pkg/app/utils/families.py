"""
Named inputs: weight specs, coefficient sequences, hhat and fhat families
"""
import math
from typing import Optional, Tuple

import numpy as np

from core.errors import ArgumentError
from schemas.permutations import AdditiveSpec, MultiplicativeSpec
from schemas.series import SeriesPoly
from schemas.weights import WeightSpec
from services.voronoi_service import constant_weights, random_weights, weights_from_file


def _split(spec: str) -> Tuple[str, list]:
    head, _, rest = spec.partition(":")
    return head.strip().lower(), [x for x in rest.split(":")] if rest else []


def _float(value: str, spec: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ArgumentError("malformed number in family spec", spec=spec, value=value) from None


def _seed(args: list, pos: int, default: Optional[int], spec: str) -> int:
    if len(args) > pos:
        value = args[pos].strip()
        if not (value.isascii() and value.isdigit()):
            raise ArgumentError("seed must be a nonnegative integer", spec=spec, value=value)
        return int(value)
    if default is None:
        raise ArgumentError("random family needs a seed", spec=spec)
    return default


# ============================================
# WEIGHTS
# ============================================

def parse_d_spec(spec: str, n_max: int, seed: int) -> WeightSpec:
    """
    Build weights from a --d value

    constant:THETA, random:LO:HI[:SEED] or file:PATH.
    """
    kind, args = _split(spec)
    if kind == "constant" and len(args) == 1:
        return constant_weights(_float(args[0], spec), n_max)
    if kind == "random" and len(args) in (2, 3):
        lo, hi = _float(args[0], spec), _float(args[1], spec)
        return random_weights(lo, hi, n_max, _seed(args, 2, seed, spec))
    if kind == "file" and args:
        w = weights_from_file(":".join(args))
        if w.n_max < n_max:
            raise ArgumentError("weight file too short", path=":".join(args), have=w.n_max, need=n_max)
        return w
    raise ArgumentError("unknown d spec", spec=spec)


# ============================================
# COEFFICIENTS
# ============================================

def coefficient_family(name: str, order: int, seed: Optional[int] = None) -> SeriesPoly:
    """
    Coefficients a_0..a_order of g(z)

    ones, alternating, log1p (g = log(1+z)), alt_harmonic ((-1)^k/(k+1)),
    constant (a_0 = 1 only), z (a_1 = 1 only), random:SEED (uniform on [-1, 1]).
    """
    kind, args = _split(name)
    k = np.arange(order + 1)
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    if kind == "ones":
        a = np.ones(order + 1)
    elif kind == "alternating":
        a = sign
    elif kind == "log1p":
        a = np.concatenate([[0.0], -sign[1:] / k[1:]])
    elif kind == "alt_harmonic":
        a = sign / (k + 1)
    elif kind == "constant":
        a = np.zeros(order + 1)
        a[0] = 1.0
    elif kind == "z":
        a = np.zeros(order + 1)
        if order >= 1:
            a[1] = 1.0
    elif kind == "random":
        a = np.random.default_rng(_seed(args, 0, seed, name)).uniform(-1.0, 1.0, order + 1)
    else:
        raise ArgumentError("unknown coefficient family", spec=name)
    return SeriesPoly(order=order, coeffs=a)


# ============================================
# ADDITIVE / MULTIPLICATIVE
# ============================================

def hhat_family(name: str, n: int) -> AdditiveSpec:
    """
    hhat(1)..hhat(n)

    fixedpoints, cycles (alias flat), zero, power:A (j^-A), sparse
    (1 on powers of two), harmonic (1/sqrt(H_n)).
    """
    kind, args = _split(name)
    j = np.arange(1, n + 1, dtype=float)
    if kind == "fixedpoints":
        h = (j == 1).astype(float)
    elif kind in ("cycles", "flat"):
        h = np.ones(n)
    elif kind == "zero":
        h = np.zeros(n)
    elif kind == "power" and len(args) == 1:
        h = j ** (-_float(args[0], name))
    elif kind == "sparse":
        h = (np.bitwise_and(j.astype(np.int64), j.astype(np.int64) - 1) == 0).astype(float)
    elif kind == "harmonic":
        h = np.full(n, 1.0 / math.sqrt(float(np.sum(1.0 / j)))) if n else np.zeros(0)
    else:
        raise ArgumentError("unknown hhat family", spec=name)
    return AdditiveSpec(n=n, hhat=h)


def fhat_family(name: str, n: int, seed: Optional[int] = None) -> MultiplicativeSpec:
    """
    fhat(1)..fhat(n)

    one, derangement (fhat(1) = 0), flip1 (fhat(1) = -1), const:C,
    phase:S (e^{iS/j}), eps:E (1 + E (e^{ij} - 1)/j, 0 <= E <= 1), disc:SEED (uniform in
    the unit disc), near:R:SEED (e^{i theta_j}, |theta_j| <= R).
    """
    kind, args = _split(name)
    j = np.arange(1, n + 1, dtype=float)
    if kind == "one":
        f = np.ones(n)
    elif kind == "derangement":
        f = np.ones(n)
        f[:1] = 0.0
    elif kind == "flip1":
        f = np.ones(n)
        f[:1] = -1.0
    elif kind == "const" and len(args) == 1:
        f = np.full(n, _float(args[0], name))
    elif kind == "phase" and len(args) == 1:
        f = np.exp(1j * _float(args[0], name) / j)
    elif kind == "eps" and len(args) == 1:
        # convex combination of 1 and e^{ij}, so |fhat| <= 1 and fhat - 1 is linear in E
        eps = _float(args[0], name)
        if not 0 <= eps <= 1:
            raise ArgumentError("eps family needs 0 <= E <= 1", spec=name)
        f = 1.0 + eps * (np.exp(1j * j) - 1.0) / j
    elif kind == "disc":
        rng = np.random.default_rng(_seed(args, 0, seed, name))
        f = np.sqrt(rng.uniform(0.0, 1.0, n)) * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, n))
    elif kind == "near" and args:
        rng = np.random.default_rng(_seed(args, 1, seed, name))
        r = _float(args[0], name)
        f = np.exp(1j * rng.uniform(-r, r, n))
    else:
        raise ArgumentError("unknown fhat family", spec=name)
    return MultiplicativeSpec(n=n, fhat=f)
