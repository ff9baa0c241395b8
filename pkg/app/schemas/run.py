"""
Run configuration for the command line
"""
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from core.config import settings

# ============================================
# ENUMS
# ============================================

class CommandEnum(str, Enum):
    """Command enumeration"""
    WEIGHTS = "weights"
    VORONOI = "voronoi"
    TAUBER = "tauber"
    MEAN = "mean"
    DIST = "dist"
    CLT = "clt"
    SAMPLE = "sample"
    CHECK = "check"


class FormatEnum(str, Enum):
    """Output format enumeration"""
    CSV = "csv"
    JSON = "json"


# Commands that work on one or more n
SWEEP_COMMANDS = {
    CommandEnum.WEIGHTS,
    CommandEnum.VORONOI,
    CommandEnum.TAUBER,
    CommandEnum.MEAN,
    CommandEnum.DIST,
    CommandEnum.CLT,
    CommandEnum.SAMPLE,
}

# Not part of the config echo: they do not change the numbers
ECHO_EXCLUDE = {"out", "plot_dir", "log_level"}


# ============================================
# RUN CONFIG
# ============================================

class RunConfig(BaseModel):
    """One command-line invocation"""
    model_config = ConfigDict(use_enum_values=True, frozen=True)

    command: CommandEnum = Field(..., description="Subcommand")
    d_spec: str = Field(default="constant:1", description="constant:THETA, random:LO:HI[:SEED] or file:PATH")
    n: Optional[int] = Field(default=None, ge=0, description="Single n")
    n_sweep: Optional[List[int]] = Field(default=None, description="Several n, run as independent tasks")
    p: float = Field(default=4.0, gt=0, description="Exponent of the L and rho functionals; inf allowed")
    u: float = Field(default=0.5, gt=0, description="Threshold of the E(u) majorant")
    seed: int = Field(default=settings.DEFAULT_SEED, ge=0, lt=2 ** 64)
    format: FormatEnum = FormatEnum.CSV
    out: Optional[str] = Field(default=None, description="Output file; stdout when omitted")
    override_guard: bool = False
    suite: Optional[str] = None
    nmax: Optional[int] = Field(default=None, ge=1)
    coeffs: str = Field(default="log1p", description="Coefficient family of g")
    hhat: str = Field(default="fixedpoints", description="Additive family")
    fhat: str = Field(default="derangement", description="Multiplicative family")
    count: Optional[int] = Field(default=None, ge=0)
    plot_dir: Optional[str] = None
    log_level: Optional[str] = None

    @field_validator("n_sweep", mode="before")
    @classmethod
    def assemble_sweep(cls, v: Any) -> Any:
        if isinstance(v, str):
            v = [int(i.strip()) for i in v.split(",") if i.strip()]
        return v or None

    @field_validator("n_sweep")
    @classmethod
    def check_sweep(cls, v: Optional[List[int]]) -> Optional[List[int]]:
        if v is not None and any(n < 0 for n in v):
            raise ValueError("n-sweep values must be nonnegative")
        return v

    @model_validator(mode="after")
    def check_command(self) -> "RunConfig":
        if self.command in {c.value for c in SWEEP_COMMANDS}:
            if self.n is None and self.n_sweep is None:
                raise ValueError(f"{self.command} needs --n or --n-sweep")
            if self.n is not None and self.n_sweep is not None:
                raise ValueError("give --n or --n-sweep, not both")
        if self.command == CommandEnum.CHECK.value and not self.suite:
            raise ValueError("check needs --suite")
        return self

    @property
    def ns(self) -> List[int]:
        """Requested n values in the given order"""
        return list(self.n_sweep) if self.n_sweep is not None else ([self.n] if self.n is not None else [])

    def echo(self) -> Dict[str, Any]:
        """Config fields that determine the output, for the file header"""
        return self.model_dump(exclude=ECHO_EXCLUDE)
