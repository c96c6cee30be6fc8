"""
Measure Model Capability

Abstract interface every exactly-computable measure family implements.
Balls are open. All methods are pure; implementations cache only through
precomputed or lock-protected structures.
"""

from abc import ABC, abstractmethod
from fractions import Fraction
from numbers import Real
from typing import List, Sequence

from regdim.core.config import settings
from regdim.core.errors import InvalidArgumentError
from regdim.core.geometry import Point
from regdim.core.grid import ScaleGrid
from regdim.core.intervals import MassInterval

DEFAULT_TOL = settings.default_tol
PROB_SUM_TOL = 1e-12


def check_probabilities(probs: Sequence[Real]) -> None:
    """Weights must be positive and sum to one; exactly when all are rational."""
    if any(p <= 0 for p in probs):
        raise InvalidArgumentError("probabilities must be positive")
    total = sum(probs)
    if all(isinstance(p, (int, Fraction)) for p in probs):
        if total != 1:
            raise InvalidArgumentError(f"probabilities sum to {total}, not 1")
    elif abs(float(total) - 1.0) > PROB_SUM_TOL:
        raise InvalidArgumentError(f"probabilities sum to {float(total)}, not 1")


class MeasureModel(ABC):
    """A measure with a certified ball-mass oracle."""

    family: str = "abstract"
    is_probability: bool = True
    exact_masses: bool = False

    @property
    @abstractmethod
    def ambient_dim(self) -> int:
        """Dimension d of the ambient space R^d."""

    @abstractmethod
    def ball_mass(self, center: Point, radius: float, tol: float = DEFAULT_TOL) -> MassInterval:
        """Certified bounds on the mass of the open ball B(center, radius)."""

    @abstractmethod
    def support_net(self, scale: float) -> List[Point]:
        """Finite set with every support point within `scale` of one of its points."""

    @abstractmethod
    def witnesses(self) -> List[Point]:
        """Support points that are candidate extremal points for local scans."""

    def sample_points(self, grid: ScaleGrid) -> List[Point]:
        """Points used by regularity scans over `grid`; families add grid-specific extremal points."""
        return self.witnesses()

    def check_query(self, center: Point, radius: float) -> None:
        if center.dim != self.ambient_dim:
            raise InvalidArgumentError(
                f"{self.family} model lives in R^{self.ambient_dim}, got a point of dimension {center.dim}"
            )
        if not radius > 0:
            raise InvalidArgumentError(f"ball radius must be positive, got {radius}")
