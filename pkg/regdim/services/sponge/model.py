"""
Sponge Measure Model

Ball masses for sponge measures from approximate-cube masses. Mass queries
are symbolic: every point carries (or is converted to) a code, and cube
masses are read off cumulative log-conditional tables cached per code.
"""

import logging
import math
import threading
from enum import Enum
from typing import Dict, List

import numpy as np

from regdim.core.geometry import Point, SymbolicPoint
from regdim.core.grid import ScaleGrid
from regdim.core.intervals import MassInterval
from regdim.core.measure import DEFAULT_TOL, MeasureModel
from regdim.core.errors import InvalidArgumentError
from regdim.services.sponge.system import (
    DepthVector,
    SpongeSystem,
    code_from_point,
    coding_map,
    depth_vector,
    enumerate_cubes,
    extremal_code,
    require_vssc,
)

logger = logging.getLogger(__name__)

# digits extracted from coordinate-only points
COORDINATE_DEPTH = 30


class BallMode(str, Enum):
    """How ball masses are derived from cube masses."""
    SANDWICH = "sandwich"
    CUBE = "cube"


class _LogTable:
    """Prefix sums of log p_l(sigma^j omega) for one code, grown on demand."""

    def __init__(self, system: SpongeSystem, omega: SymbolicPoint):
        self.system = system
        self.omega = omega
        self.cum = np.zeros((system.d, 1))

    def upto(self, depth: int) -> np.ndarray:
        have = self.cum.shape[1] - 1
        if depth > have:
            depth = max(depth, 2 * have)
            rows = np.array(
                [[self.system.log_conditional(l, self.omega.digit(t)) for t in range(have + 1, depth + 1)]
                 for l in range(self.system.d)]
            )
            self.cum = np.concatenate([self.cum, self.cum[:, -1:] + np.cumsum(rows, axis=1)], axis=1)
        return self.cum


def ball_mass_sponge(system: SpongeSystem, omega: SymbolicPoint, r: float) -> MassInterval:
    """
    Certified bounds on mu(B(pi(omega), r)).

    lo is the mass of the approximate cube at r / (n_1 (n_1 + ... + n_d)),
    which lies inside the ball; hi is the mass of the cube at 2 n_1 r, which
    contains the ball. hi is clamped to 1.
    """
    require_vssc(system)
    system.check_code(omega)
    return _sandwich(system, lambda rho: log_cube_mass(system, omega, rho), r)


def log_cube_mass(system: SpongeSystem, omega: SymbolicPoint, r: float) -> float:
    """log of the approximate-cube mass at radius r (radii >= 1 give 0)."""
    if r >= 1:
        return 0.0
    ks = depth_vector(system, r)
    return sum(system.log_conditional(l, omega.digit(t)) for l in range(system.d) for t in range(1, ks[l] + 1))


def _sandwich(system: SpongeSystem, log_mass, r: float) -> MassInterval:
    n1 = system.bases[0]
    log_lo = log_mass(r / (n1 * sum(system.bases)))
    log_hi = log_mass(2.0 * n1 * r)
    return MassInterval.from_logs(log_lo, log_hi).clamped(1.0)


class SpongeModel(MeasureModel):
    """MeasureModel view of a sponge system."""

    family = "sponge"

    def __init__(self, system: SpongeSystem, mode: BallMode = BallMode.SANDWICH):
        require_vssc(system)
        self.system = system
        self.mode = BallMode(mode)
        self.exact_masses = self.mode == BallMode.CUBE
        self._tables: Dict[SymbolicPoint, _LogTable] = {}
        self._lock = threading.Lock()

    @property
    def ambient_dim(self) -> int:
        return self.system.d

    def log_cube_mass(self, omega: SymbolicPoint, r: float) -> float:
        """log_cube_mass read from the per-code cache."""
        if r >= 1:
            return 0.0
        ks = depth_vector(self.system, r)
        with self._lock:
            table = self._tables.get(omega)
            if table is None:
                table = self._tables[omega] = _LogTable(self.system, omega)
            cum = table.upto(max(ks))
        return float(sum(cum[l, k] for l, k in enumerate(ks)))

    def ball_mass(self, center: Point, radius: float, tol: float = DEFAULT_TOL) -> MassInterval:
        self.check_query(center, radius)
        omega = code_from_point(self.system, center, COORDINATE_DEPTH)
        if self.mode == BallMode.CUBE:
            log_m = self.log_cube_mass(omega, radius)
            return MassInterval.from_logs(log_m, log_m)
        return _sandwich(self.system, lambda rho: self.log_cube_mass(omega, rho), radius)

    def witnesses(self) -> List[Point]:
        """Pure repetitions of every digit plus two-digit codes i j-bar."""
        system = self.system
        codes = [SymbolicPoint.constant(i) for i in system.digits]
        codes += [SymbolicPoint((i,), (j,)) for i in system.digits for j in system.digits if i != j]
        return [coding_map(system, code) for code in codes]

    def sample_points(self, grid: ScaleGrid) -> List[Point]:
        """Witnesses plus the extremal code of every grid pair meeting the scale constraints."""
        points = self.witnesses()
        seen = {p.code for p in points}
        for gap in grid.gaps():
            for i, j in grid.pairs(gap):
                R, r = grid.radius(i), grid.radius(j)
                if R > 1:
                    continue
                try:
                    code = extremal_code(self.system, r, R)
                except InvalidArgumentError:
                    continue
                if code not in seen:
                    seen.add(code)
                    points.append(coding_map(self.system, code))
        logger.debug(f"Sponge sample set over {grid.exp_max - grid.exp_min + 1} radii: {len(points)} points")
        return points

    def cube_net_depth(self, scale: float) -> DepthVector:
        """Depth vector whose cubes have diameter below scale."""
        target = scale / (self.system.bases[-1] * math.sqrt(self.system.d))
        return depth_vector(self.system, min(1.0, target))

    def support_net(self, scale: float) -> List[Point]:
        """One support point per approximate cube of diameter below scale."""
        ks = self.cube_net_depth(scale)
        return [coding_map(self.system, code) for _, _, code in enumerate_cubes(self.system, ks)]
