"""
Scale Grids

Geometric radius grids discretizing "for all 0 < r < R". Radii are
scale * base^(-j) for j in [exp_min, exp_max]; radius pairs (R, r) are
drawn with integer exponent gaps in [gap_min, gap_max].
"""

import math
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from regdim.core.config import settings
from regdim.core.errors import InvalidArgumentError


class ScaleGrid(BaseModel):
    """Radius grid shared by every scan over scales."""

    model_config = ConfigDict(frozen=True)

    base: float = Field(default=settings.grid_base, gt=1, description="Ratio between consecutive radii")
    exp_min: int = Field(default=0, description="Exponent of the largest radius")
    exp_max: int = Field(default=24, description="Exponent of the smallest radius")
    gap_min: int = Field(default=settings.gap_min, ge=1, description="Smallest exponent gap between R and r")
    gap_max: int = Field(default=settings.gap_max, ge=1, description="Largest exponent gap between R and r")
    scale: float = Field(default=1.0, gt=0, description="Multiplier applied to every radius")

    @model_validator(mode="after")
    def _check_ranges(self) -> "ScaleGrid":
        if self.exp_min >= self.exp_max:
            raise ValueError(f"exp_min ({self.exp_min}) must be below exp_max ({self.exp_max})")
        if self.gap_min > self.gap_max:
            raise ValueError(f"gap_min ({self.gap_min}) exceeds gap_max ({self.gap_max})")
        return self

    @property
    def exponents(self) -> List[int]:
        return list(range(self.exp_min, self.exp_max + 1))

    def radius(self, j: int) -> float:
        return self.scale * self.base ** (-j)

    def radii(self) -> List[float]:
        """All radii, strictly decreasing."""
        return [self.radius(j) for j in self.exponents]

    def log_ratio(self, gap: int) -> float:
        """log(R/r) for a pair with the given exponent gap."""
        return gap * math.log(self.base)

    def gaps(self) -> List[int]:
        """Gaps that have at least one pair inside the grid."""
        top = min(self.gap_max, self.exp_max - self.exp_min)
        return list(range(self.gap_min, top + 1))

    def pairs(self, gap: int) -> List[Tuple[int, int]]:
        """Exponent pairs (i, i + gap): R = radius(i), r = radius(i + gap)."""
        return [(i, i + gap) for i in range(self.exp_min, self.exp_max - gap + 1)]

    def smallest_quartile(self) -> List[float]:
        """The smallest quarter of the radii (at least one)."""
        radii = self.radii()
        k = max(1, math.ceil(len(radii) / 4))
        return radii[-k:]

    def rescaled(self, factor: float) -> "ScaleGrid":
        """Same exponents with every radius multiplied by factor."""
        if factor <= 0:
            raise InvalidArgumentError(f"grid rescaling factor must be positive, got {factor}")
        return self.model_copy(update={"scale": self.scale * factor})
