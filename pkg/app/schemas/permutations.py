"""
Cycle types, multiplicative/additive functions and exact laws
"""
import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.stats import norm

from core.config import settings


# ============================================
# CYCLE TYPES
# ============================================

class CycleType(BaseModel):
    """Partition of n stored as a sparse map j -> k_j (cycle length -> count)"""
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=0)
    multiplicities: Dict[int, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_partition(self) -> "CycleType":
        if any(j < 1 or k < 1 for j, k in self.multiplicities.items()):
            raise ValueError("cycle lengths and multiplicities must be >= 1")
        total = sum(j * k for j, k in self.multiplicities.items())
        if total != self.n:
            raise ValueError(f"sum of j*k_j is {total}, expected {self.n}")
        return self

    @classmethod
    def from_pairs(cls, n: int, pairs: List[Tuple[int, int]]) -> "CycleType":
        return cls(n=n, multiplicities={int(j): int(k) for j, k in pairs})

    @property
    def num_cycles(self) -> int:
        return sum(self.multiplicities.values())

    def to_json(self) -> Dict[str, int]:
        """Sparse map with string keys, ascending cycle length"""
        return {str(j): self.multiplicities[j] for j in sorted(self.multiplicities)}


class CycleCount(BaseModel):
    """Number of permutations with a given cycle type"""
    log_count: float
    exact: Optional[int] = Field(default=None, description="Big-integer count in small-n mode")


# ============================================
# FUNCTIONS ON PERMUTATIONS
# ============================================

class MultiplicativeSpec(BaseModel):
    """f(sigma) = prod_j fhat(j)^{alpha_j(sigma)}"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int = Field(..., ge=0)
    fhat: np.ndarray = Field(..., description="fhat(1)..fhat(n)")
    bounded_flag: Optional[bool] = Field(default=None, description="All |fhat(j)| <= 1")

    @field_validator("fhat", mode="before")
    @classmethod
    def coerce_fhat(cls, v) -> np.ndarray:
        arr = np.asarray(v)
        arr = arr.astype(complex) if np.iscomplexobj(arr) else arr.astype(float)
        if arr.ndim != 1 or not np.all(np.isfinite(arr)):
            raise ValueError("fhat must be a finite one-dimensional array")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="before")
    @classmethod
    def fill_bounded(cls, data):
        if isinstance(data, dict) and data.get("bounded_flag") is None and "fhat" in data:
            data = dict(data)
            data["bounded_flag"] = _within_unit_disc(np.asarray(data["fhat"]))
        return data

    @model_validator(mode="after")
    def check_bounded(self) -> "MultiplicativeSpec":
        if len(self.fhat) != self.n:
            raise ValueError(f"expected {self.n} values of fhat, got {len(self.fhat)}")
        actual = _within_unit_disc(self.fhat)
        if self.bounded_flag != actual:
            raise ValueError(f"bounded_flag={self.bounded_flag} but the data says {actual}")
        return self

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.fhat) or bool(np.all(self.fhat.imag == 0))

    def evaluate(self, t: CycleType) -> complex:
        """f on a permutation of type t"""
        out = 1.0 + 0j
        for j, k in t.multiplicities.items():
            out *= complex(self.fhat[j - 1]) ** k
        return out


class AdditiveSpec(BaseModel):
    """h(sigma) = sum_j hhat(j) alpha_j(sigma)"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int = Field(..., ge=0)
    hhat: np.ndarray = Field(..., description="hhat(1)..hhat(n)")

    @field_validator("hhat", mode="before")
    @classmethod
    def coerce_hhat(cls, v) -> np.ndarray:
        arr = np.asarray(v, dtype=float)
        if arr.ndim != 1 or not np.all(np.isfinite(arr)):
            raise ValueError("hhat must be a finite one-dimensional real array")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def check_length(self) -> "AdditiveSpec":
        if len(self.hhat) != self.n:
            raise ValueError(f"expected {self.n} values of hhat, got {len(self.hhat)}")
        return self

    def evaluate(self, t: CycleType) -> float:
        return float(sum(self.hhat[j - 1] * k for j, k in t.multiplicities.items()))

    def exponentiate(self, t: float) -> MultiplicativeSpec:
        """The multiplicative function e^{i t h}"""
        return MultiplicativeSpec(n=self.n, fhat=np.exp(1j * t * self.hhat))


# ============================================
# DISTRIBUTIONS
# ============================================

class DistTable(BaseModel):
    """
    Exact law of a real statistic as a step function

    values are strictly increasing; probs are nonnegative and sum to one.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray
    probs: np.ndarray

    @field_validator("values", "probs", mode="before")
    @classmethod
    def coerce(cls, v) -> np.ndarray:
        arr = np.array(v, dtype=float)
        if arr.ndim != 1 or not np.all(np.isfinite(arr)):
            raise ValueError("atoms must be finite and one-dimensional")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def check_law(self) -> "DistTable":
        if len(self.values) != len(self.probs):
            raise ValueError("values and probs differ in length")
        if len(self.values) == 0:
            raise ValueError("a law needs at least one atom")
        if np.any(np.diff(self.values) <= 0):
            raise ValueError("values must be strictly increasing")
        if np.any(self.probs < 0):
            raise ValueError("probabilities must be nonnegative")
        total = float(np.sum(self.probs))
        if abs(total - 1.0) > settings.PROB_SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}")
        return self

    @classmethod
    def aggregate(cls, values: np.ndarray, probs: np.ndarray, tol: Optional[float] = None) -> "DistTable":
        """Sort (value, prob) pairs and merge values equal within tol"""
        tol = settings.VALUE_MERGE_TOL if tol is None else tol
        values = np.asarray(values, dtype=float)
        probs = np.asarray(probs, dtype=float)
        order = np.argsort(values, kind="stable")
        v, p = values[order], probs[order]
        starts = np.concatenate([[0], np.flatnonzero(np.diff(v) > tol) + 1])
        return cls(values=v[starts], probs=np.add.reduceat(p, starts))

    @classmethod
    def point_mass(cls, value: float) -> "DistTable":
        return cls(values=[value], probs=[1.0])

    @property
    def atoms(self) -> List[Tuple[float, float]]:
        return list(zip(self.values.tolist(), self.probs.tolist()))

    def cdf(self, x, side: str = "right") -> np.ndarray:
        """
        P(X <= x) for side="right", P(X < x) for side="left"
        """
        cum = np.concatenate([[0.0], np.cumsum(self.probs)])
        idx = np.searchsorted(self.values, x, side=side)
        return cum[idx]

    def mean(self) -> float:
        return float(np.dot(self.values, self.probs))

    def variance(self) -> float:
        mu = self.mean()
        return float(np.dot((self.values - mu) ** 2, self.probs))

    def shift(self, c: float) -> "DistTable":
        return DistTable(values=self.values + c, probs=self.probs)

    def standardized(self) -> "DistTable":
        sd = math.sqrt(self.variance())
        if sd == 0:
            raise ValueError("cannot standardize a degenerate law")
        return DistTable(values=(self.values - self.mean()) / sd, probs=self.probs)

    def characteristic(self, t: float) -> complex:
        return complex(np.dot(self.probs, np.exp(1j * t * self.values)))

    def total_variation(self, other: "DistTable") -> float:
        """Half the L1 distance between two laws on merged supports"""
        support = np.union1d(self.values, other.values)
        mine = np.zeros(len(support))
        theirs = np.zeros(len(support))
        mine[np.searchsorted(support, self.values)] = self.probs
        theirs[np.searchsorted(support, other.values)] = other.probs
        return 0.5 * float(np.sum(np.abs(mine - theirs)))

    def kolmogorov_distance_to_normal(self) -> float:
        """sup_x |F(x) - Phi(x)| for the standardized law, both one-sided limits at atoms"""
        z = self.standardized()
        phi = norm.cdf(z.values)
        right = np.cumsum(z.probs)
        left = right - z.probs
        return float(max(np.max(np.abs(right - phi)), np.max(np.abs(left - phi))))

    def to_json(self) -> List[List[float]]:
        return [[v, p] for v, p in self.atoms]


def _within_unit_disc(values: np.ndarray) -> bool:
    return bool(np.all(np.abs(values) <= 1.0 + settings.BOUNDED_TOL))
