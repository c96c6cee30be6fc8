"""
Estimate Models

Pydantic records returned by the estimators and the witness routines of the
model families. Infinite values are flagged explicitly.
"""

import math
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field


class ScaleWitness(BaseModel):
    """The (x, r, R) triple that attains an estimate."""
    x: Tuple[float, ...] = Field(description="Ball center coordinates")
    r: float = Field(description="Small radius")
    R: float = Field(description="Large radius")
    gap: int = Field(description="Exponent gap between R and r")


class GapValue(BaseModel):
    """Supremal ratio exponent observed at one exponent gap."""
    gap: int
    value: float


class DimEstimate(BaseModel):
    """A dimension estimate with its witness and the convergence curve over gaps."""
    value: float = Field(description="Estimated dimension")
    infinite: bool = Field(default=False, description="True when the estimate diverged")
    witness: Optional[ScaleWitness] = Field(default=None, description="Triple attaining the value")
    gap_curve: List[GapValue] = Field(default_factory=list, description="Sup exponent per exponent gap")
    conservative: bool = Field(default=True, description="Numerator lo / denominator hi were used")
    diagnostics: Dict[str, object] = Field(default_factory=dict, description="Scan tallies")


class TauPoint(BaseModel):
    """Fitted tau(q) at one moment order q."""
    q: float
    tau_hat: float
    fit_residual: float


class LqSpectrumEstimate(BaseModel):
    """Fitted L^q spectrum on negative q and the asymptote slope T."""
    points: List[TauPoint] = Field(default_factory=list)
    T_hat: float = Field(description="tau_hat(q*) / q* at the most negative q*")
    diagnostics: Dict[str, object] = Field(default_factory=dict, description="Packings with the interval end raised to q")


class ChainViolation(BaseModel):
    """One failed inequality lhs <= rhs + slack."""
    name: str
    lhs: float
    rhs: float
    slack: float


class ChainReport(BaseModel):
    """Estimates entering the dimension chain and any violated inequalities."""
    sup_local_hat: float
    T_hat: float
    dimreg_hat: float
    box_support_hat: float
    assouad_support_hat: float
    violations: List[ChainViolation] = Field(default_factory=list)
    local_dims: Dict[str, float] = Field(default_factory=dict, description="Upper local dimension per witness")

    @property
    def holds(self) -> bool:
        return not self.violations

    def values(self) -> Dict[str, float]:
        return {
            "sup_local": self.sup_local_hat,
            "T": self.T_hat,
            "dimreg": self.dimreg_hat,
            "box_support": self.box_support_hat,
            "assouad_support": self.assouad_support_hat,
        }


class TelescopeReport(BaseModel):
    """Consecutive ratios along a theta-chain and their product."""
    ratios: List[float]
    product: float
    direct: float

    @property
    def relative_error(self) -> float:
        if self.direct == 0:
            return math.inf
        return abs(self.product - self.direct) / abs(self.direct)


class DoublingWitness(BaseModel):
    """Lower bound on mu(B(x, R)) / mu(B(x, R/2)) at one scale."""
    R: float
    center: float
    ratio_lo: float = Field(description="Lower bound on the ratio (may be inf when it overflows)")
    log_ratio_lo: float = Field(description="Natural log of ratio_lo")


class NonDoublingRatio(BaseModel):
    """Lower bound on mu(B(x_i, 2 r_i)) / mu(B(x_i, r_i)) for one lens index."""
    i: int
    ratio_lo: float
    bound: float = Field(description="pi / (4 r_i)")


class DoublingRatioSample(BaseModel):
    """Upper bound on mu(B(x, 2 rho)) / mu(B(x, rho)) at one sampled ball."""
    x: Tuple[float, ...]
    rho: float
    ratio_hi: float
