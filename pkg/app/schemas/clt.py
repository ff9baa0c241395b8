"""
Limit-law diagnostics
"""
import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class CltStats(BaseModel):
    """
    Functionals of an additive function at a fixed n

    L_np is the power sum sum_k |hhat(k)|^p / k; for p = inf it holds
    max_k |hhat(k)|. Roots are taken where the functionals are combined.
    """
    n: int
    p: float
    A_n: float
    C_n: float
    L_n3: float = Field(..., ge=0)
    L_np: float = Field(..., ge=0)
    L_n2_prime: float = Field(..., ge=0)
    rho_p: float = Field(..., ge=0)
    normalized: bool

    @property
    def lp_term(self) -> float:
        """L_{n,p}^{2/p}, with max|hhat|^2 for p = inf"""
        if math.isinf(self.p):
            return self.L_np ** 2
        return self.L_np ** (2.0 / self.p)

    @property
    def budget(self) -> float:
        return self.L_n3 + self.lp_term + self.L_n2_prime


class GapReport(BaseModel):
    """Corrected Kolmogorov distance against its L-functional budget"""
    n: int
    p: float
    gap: float = Field(..., ge=0)
    budget: float = Field(..., ge=0)
    ratio: float = Field(..., ge=0)
    argmax: float = Field(..., description="Point where the sup was attained")


class DeltaBoundReport(BaseModel):
    """Distance of M_n/p_n from exp L_n(1) against the bracketed bound"""
    n: int
    delta_n: float = Field(..., ge=0)
    rhs: float = Field(..., ge=0)
    ratio: float = Field(..., ge=0)
    branch: str = Field(..., description="d_minus<1 or d_minus>=1")


class ExpansionResidualReport(BaseModel):
    n: int
    p: float
    residual: float = Field(..., ge=0)
    rho: float = Field(..., ge=0)
    ratio: float = Field(..., ge=0)


class EUBoundReport(BaseModel):
    n: int
    u: float
    e_u: float
    lhs: float = Field(..., ge=0)
    majorant: float = Field(..., ge=0)
    ratio: float = Field(..., ge=0)


class LogDifferenceCheck(BaseModel):
    """|L(e^{-1/n}) - L(e^{-1/m})| <= d+ rho (1 + |log(n/m)|)"""
    n: int
    m: int
    p: float
    lhs: float
    rhs: float
    single_lhs: float = Field(..., description="|L(e^{-1/n})|")
    single_rhs: float = Field(..., description="d+ rho (1 + log n)")
    passed: bool = Field(..., alias="pass")

    model_config = ConfigDict(populate_by_name=True)


class MeanVsMReport(BaseModel):
    """|M_n/p_n - m(e^{-1/n})| measured in units of rho and rho |m(e^{-1/n})|"""
    n: int
    p: float
    deviation: float = Field(..., ge=0)
    rho: float = Field(..., ge=0)
    m_abs: float = Field(..., ge=0)
    ratio_rho: float = Field(..., ge=0)
    ratio_rho_m: float = Field(..., ge=0)


class SumpnReport(BaseModel):
    n: int
    eps: float
    q: float
    first_ratio: float = Field(..., ge=0, description="sum j^-eps p_j^q / (n^(1-eps) p_n^q)")
    second_sum: float = Field(..., ge=0, description="sum (1/j) |p_{n-j}/p_n - 1|^q")


class GoncharovPoint(BaseModel):
    n: int
    distance: float = Field(..., ge=0)
    mean: float
    variance: float
    method: Optional[str] = None
