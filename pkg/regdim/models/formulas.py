"""
Formula Models

Closed-form dimension values. Infinity is carried by an explicit flag,
never by a sentinel float.
"""

import math
from typing import Optional

from pydantic import BaseModel, Field


class FormulaValue(BaseModel):
    """One closed-form quantity for a configured model."""
    name: str = Field(description="Quantity name, e.g. dimreg, T, assouad")
    value: Optional[float] = Field(default=None, description="Finite value; None when infinite or unavailable")
    infinite: bool = Field(default=False, description="True when the quantity is +infinity")
    note: str = Field(default="", description="Why no value is available, if any")

    @classmethod
    def finite(cls, name: str, value: float) -> "FormulaValue":
        return cls(name=name, value=float(value))

    @classmethod
    def infinity(cls, name: str) -> "FormulaValue":
        return cls(name=name, infinite=True)

    @classmethod
    def unavailable(cls, name: str, note: str = "no closed form") -> "FormulaValue":
        return cls(name=name, note=note)

    @property
    def as_float(self) -> float:
        if self.infinite:
            return math.inf
        return math.nan if self.value is None else self.value


class CarpetDimensions(BaseModel):
    """The four dimension curves of the epsilon carpet at one epsilon."""
    epsilon: float = Field(description="Carpet parameter in (0, 1/2]")
    dimreg: float = Field(description="Upper regularity dimension")
    assouad: float = Field(description="Assouad dimension of the carpet")
    sup_local: float = Field(description="Supremal upper local dimension")
    T: float = Field(description="Asymptote slope of the L^q spectrum")
    sup_local_branch: int = Field(description="Which of the two expressions attains sup_local (1 or 2)")
