"""
Sequence Measure Model

MeasureModel view of a sequence measure on the real line. Nets keep the
sparse atoms individually and one atom per scale-bucket where the atoms
are denser than the scale.
"""

import logging
import math
from typing import List

import numpy as np

from regdim.core.geometry import Point
from regdim.core.grid import ScaleGrid
from regdim.core.intervals import MassInterval
from regdim.core.measure import DEFAULT_TOL, MeasureModel
from regdim.services.sequence.measure import SequenceMeasure, ball_mass_seq

logger = logging.getLogger(__name__)

WITNESS_INDICES = (1, 2, 5, 20, 100)


def _points(m: SequenceMeasure, n: np.ndarray) -> np.ndarray:
    if m.x_kind.is_poly:
        return n.astype(float) ** -m.x_kind.param
    return m.x_kind.param ** n.astype(float)


def first_below(m: SequenceMeasure, ys: np.ndarray) -> np.ndarray:
    """Smallest n with x_n < y, elementwise (y > 0)."""
    ys = np.asarray(ys, dtype=float)
    lam = m.x_kind.param
    if m.x_kind.is_poly:
        guess = np.floor(ys ** (-1.0 / lam)) + 1
    else:
        guess = np.floor(np.log(ys) / math.log(lam)) + 1
    n = np.maximum(guess, 1).astype(np.int64)
    for _ in range(4):
        n = np.where(_points(m, n) >= ys, n + 1, n)
        n = np.where((n > 1) & (_points(m, np.maximum(n - 1, 1)) < ys), n - 1, n)
    return n


def dense_start(m: SequenceMeasure, scale: float) -> int:
    """Smallest n whose gap x_n - x_{n+1} is below scale."""
    lam = m.x_kind.param
    if m.x_kind.is_poly:
        guess = (lam / scale) ** (1.0 / (lam + 1.0))
    else:
        guess = math.log(scale / (1.0 - lam)) / math.log(lam)
    n = max(1, int(guess) - 2)
    gap = lambda k: m.point(k) - m.point(k + 1)
    while n > 1 and gap(n - 1) < scale:
        n -= 1
    while gap(n) >= scale:
        n += 1
    return n


class SequenceModel(MeasureModel):
    """Sequence measure as a one-dimensional MeasureModel."""

    family = "sequence"

    def __init__(self, measure: SequenceMeasure):
        self.measure = measure
        self.exact_masses = not measure.p_kind.is_poly

    @property
    def ambient_dim(self) -> int:
        return 1

    def ball_mass(self, center: Point, radius: float, tol: float = DEFAULT_TOL) -> MassInterval:
        self.check_query(center, radius)
        return ball_mass_seq(self.measure, center.coords[0], radius)

    def atom(self, n: int) -> Point:
        return Point((self.measure.point(n),))

    def witnesses(self) -> List[Point]:
        return [Point((0.0,))] + [self.atom(n) for n in WITNESS_INDICES]

    def sample_points(self, grid: ScaleGrid) -> List[Point]:
        """Witnesses plus atoms next to each grid radius and where the atom gap crosses it."""
        m = self.measure
        radii = np.array([r for r in grid.radii() if r < m.point(1)])
        indices = set(WITNESS_INDICES)
        if len(radii):
            for n in first_below(m, radii):
                indices.update((int(n) - 1, int(n)))
        for r in radii:
            n = dense_start(m, r)
            indices.update((n - 1, n))
        indices.discard(0)
        points = [Point((0.0,))] + [self.atom(n) for n in sorted(indices)]
        logger.debug(f"Sequence sample set: {len(points)} points")
        return points

    def support_net(self, scale: float) -> List[Point]:
        """0, every atom with gap at least scale, and one atom per scale-bucket below."""
        m = self.measure
        net = [Point((0.0,))]
        top = dense_start(m, scale)
        net += [self.atom(n) for n in range(1, top)]
        x_top = m.point(top)
        if x_top >= scale:
            j = np.arange(1, int(x_top / scale) + 1, dtype=float)
            reps = first_below(m, (j + 1.0) * scale)
            keep = (reps >= top) & (_points(m, reps) >= j * scale)
            for n in np.unique(reps[keep]):
                net.append(self.atom(int(n)))
        return net
