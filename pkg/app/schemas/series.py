"""
Truncated power series schema
"""
from fractions import Fraction
from typing import Any, Iterable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class SeriesPoly(BaseModel):
    """
    Power series truncated at degree `order` (inclusive).

    coeffs[k] is the coefficient of z^k. Float and complex series are backed
    by float64/complex128 arrays; exact series hold Fraction objects in an
    object array. Arrays are read-only once validated.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    order: int = Field(..., ge=0, description="Truncation degree N")
    coeffs: np.ndarray = Field(..., description="N+1 coefficients")

    @field_validator("coeffs", mode="before")
    @classmethod
    def coerce_array(cls, v: Any) -> np.ndarray:
        arr = v if isinstance(v, np.ndarray) else _as_array(v)
        if arr.ndim != 1:
            raise ValueError("coeffs must be one-dimensional")
        if arr.dtype.kind in "biu":
            arr = arr.astype(float)
        if arr.dtype != object and not np.all(np.isfinite(arr)):
            raise ValueError("coeffs must be finite")
        arr = arr.copy() if arr.flags.writeable else arr
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def check_length(self) -> "SeriesPoly":
        if len(self.coeffs) != self.order + 1:
            raise ValueError(
                f"expected {self.order + 1} coefficients for order {self.order}, got {len(self.coeffs)}"
            )
        return self

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[Any]) -> "SeriesPoly":
        """Build a series whose order is len(coeffs) - 1"""
        arr = _as_array(coeffs)
        return cls(order=len(arr) - 1, coeffs=arr)

    @classmethod
    def zeros(cls, order: int, exact: bool = False) -> "SeriesPoly":
        if exact:
            return cls(order=order, coeffs=np.array([Fraction(0)] * (order + 1), dtype=object))
        return cls(order=order, coeffs=np.zeros(order + 1))

    @classmethod
    def one(cls, order: int, exact: bool = False) -> "SeriesPoly":
        """Multiplicative identity [1, 0, ..., 0]"""
        base = cls.zeros(order, exact=exact).coeffs.copy()
        base[0] = Fraction(1) if exact else 1.0
        return cls(order=order, coeffs=base)

    @property
    def exact(self) -> bool:
        return self.coeffs.dtype == object

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.coeffs)

    def __getitem__(self, k: int) -> Any:
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.order + 1


def _as_array(values: Iterable[Any]) -> np.ndarray:
    items = list(values)
    if not items:
        raise ValueError("a series needs at least one coefficient")
    if any(isinstance(x, Fraction) for x in items):
        return np.array([Fraction(x) for x in items], dtype=object)
    if any(isinstance(x, complex) or np.iscomplexobj(x) for x in items):
        return np.asarray(items, dtype=complex)
    return np.asarray(items, dtype=float)
