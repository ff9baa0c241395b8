"""
Weight sequences and Voronoi-summation diagnostics
"""
import math
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from schemas.series import SeriesPoly


# ============================================
# WEIGHTS
# ============================================

class WeightSpec(BaseModel):
    """
    Data d_1..d_N with declared bounds and the derived coefficients
    p_0..p_N of p(z) = exp(sum d_k z^k / k).

    d[k - 1] holds d_k. Instances come from services.voronoi_service.build_weights,
    which validates the bounds and runs the recurrence.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n_max: int = Field(..., ge=0)
    d: np.ndarray = Field(..., description="d_1..d_{n_max}")
    d_minus: float = Field(..., gt=0)
    d_plus: float = Field(..., gt=0)
    p: np.ndarray = Field(..., description="p_0..p_{n_max}")
    theta: float = Field(..., gt=0, le=1, description="min(d_minus, 1)")
    label: str = Field(default="custom", description="Provenance, echoed in outputs")

    @field_validator("d", "p", mode="after")
    @classmethod
    def freeze(cls, v: np.ndarray) -> np.ndarray:
        v = v.copy() if v.flags.writeable else v
        v.setflags(write=False)
        return v

    @property
    def exact(self) -> bool:
        return self.p.dtype == object

    @property
    def is_constant(self) -> bool:
        return self.d_minus == self.d_plus

    def p_series(self, order: Optional[int] = None) -> SeriesPoly:
        """p(z) truncated at `order` (default n_max)"""
        order = self.n_max if order is None else order
        return SeriesPoly(order=order, coeffs=self.p[: order + 1])

    def p_at_scale(self, n: int) -> float:
        """p(e^{-1/n}) from the stored coefficients"""
        from services.series_service import eval_at_scale

        return float(eval_at_scale(self.p_series(), n))


# ============================================
# REPORTS
# ============================================

class RemainderReport(BaseModel):
    """Both sides of the remainder inequality for Voronoi means at one n"""
    n: int
    voronoi_mean: complex
    g_at_point: complex
    correction: complex
    lhs: float = Field(..., ge=0)
    rhs_sum1: float = Field(..., ge=0)
    rhs_sum2: float = Field(..., ge=0)
    ratio: float = Field(..., ge=0)
    tail_horizon: int

    def row(self) -> dict:
        return {
            "n": self.n,
            "voronoi_mean": _real_if_close(self.voronoi_mean),
            "g_at_point": _real_if_close(self.g_at_point),
            "correction": _real_if_close(self.correction),
            "lhs": self.lhs,
            "rhs_sum1": self.rhs_sum1,
            "rhs_sum2": self.rhs_sum2,
            "ratio": self.ratio,
        }


class LowerRatioCheck(BaseModel):
    """Partial sum against the series value at e^{-1/N}"""
    ratio: float
    floor: float
    passed: bool = Field(..., alias="pass")

    model_config = ConfigDict(populate_by_name=True)


class RatioBoundsCheck(BaseModel):
    """p(e^{-1/m}) / p(e^{-1/n}) against its power-law envelope"""
    m: int
    n: int
    ratio: float
    lower: float
    upper: float
    passed: bool = Field(..., alias="pass")

    model_config = ConfigDict(populate_by_name=True)


class UpperSumCheck(BaseModel):
    """sum_{k<=n} b_k against e * b(e^{-1/n})"""
    n: int
    partial_sum: float
    bound: float
    passed: bool = Field(..., alias="pass")

    model_config = ConfigDict(populate_by_name=True)


class SandwichCheck(BaseModel):
    """r_n = n p_n / p(e^{-1/n}) against its upper bound d+ * e"""
    n: int
    ratio: float
    upper: float
    passed: bool = Field(..., alias="pass")

    model_config = ConfigDict(populate_by_name=True)


class CoefficientEstimate(BaseModel):
    """[z^n] p(z) g(z) against p_n g(e^{-1/n})"""
    n: int
    coefficient: complex
    estimate: complex
    relative_error: float


def _real_if_close(z: complex) -> Any:
    z = complex(z)
    if z.imag == 0 or math.isclose(z.imag, 0.0, abs_tol=1e-15 * max(1.0, abs(z.real))):
        return z.real
    return str(z)
