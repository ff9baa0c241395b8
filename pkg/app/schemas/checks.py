"""
Check-suite results
"""
from typing import Any, Dict, List

from pydantic import BaseModel, ConfigDict, Field


class FitResult(BaseModel):
    """Constant fitted on one half of a family and tested on the other"""
    fitted: float = Field(..., description="max over even-indexed members")
    holdout_max: float = Field(..., description="max over odd-indexed members")
    headroom: float
    count: int
    passed: bool = Field(..., alias="pass")

    model_config = ConfigDict(populate_by_name=True)


class SuiteResult(BaseModel):
    """Rows of one check suite plus its verdict"""
    name: str
    columns: List[str]
    rows: List[Dict[str, Any]] = Field(default_factory=list)
    summary: Dict[str, Any] = Field(default_factory=dict)
    plot: Dict[str, Any] = Field(default_factory=dict, description="name -> ((x, y) labels, points)")
    passed: bool = Field(..., alias="pass")

    model_config = ConfigDict(populate_by_name=True)
