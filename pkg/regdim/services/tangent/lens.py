"""
Lens Measure

Lebesgue measure on the square [-3/2, 3/2]^2 with small lens-shaped pieces
cut out just inside the unit circle. Piece i sits at x_i on the circle,
at angle pi (1 - i^-1/2), and removes the points of B(x_i, 2^-i) whose
distance to the circle exceeds 4^-i. The measure is doubling; restricted
to the unit disc it is not.

Ball masses come from adaptive quadtree quadrature: square cells are
classified inside, outside or on the boundary of the region intersected
with the query disc, and only boundary cells are split.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from regdim.core.config import settings
from regdim.core.errors import InvalidArgumentError, PreconditionError
from regdim.core.geometry import Point
from regdim.core.intervals import MassInterval
from regdim.core.measure import DEFAULT_TOL, MeasureModel
from regdim.models.estimates import DoublingRatioSample, NonDoublingRatio

logger = logging.getLogger(__name__)

SQUARE_HALF_SIDE = 1.5
MAX_INDEX = 20


def _disc_bounds(ax, ay, side, cx, cy, radius):
    """(inside, outside) masks of cells [ax, ax+side] x [ay, ay+side] against the open disc."""
    near_x = np.maximum(np.maximum(cx - (ax + side), ax - cx), 0.0)
    near_y = np.maximum(np.maximum(cy - (ay + side), ay - cy), 0.0)
    far_x = np.maximum(np.abs(ax - cx), np.abs(ax + side - cx))
    far_y = np.maximum(np.abs(ay - cy), np.abs(ay + side - cy))
    inside = np.hypot(far_x, far_y) < radius
    outside = np.hypot(near_x, near_y) >= radius
    return inside, outside


@dataclass(frozen=True, eq=False)
class LensMeasure(MeasureModel):
    """Lebesgue measure on the square minus the lens pieces, optionally restricted to the unit disc."""

    i_max: int
    h: float
    restricted: bool
    centers: np.ndarray = field(repr=False)
    radii: np.ndarray = field(repr=False)

    family = "lens"
    is_probability = False

    @property
    def ambient_dim(self) -> int:
        return 2

    def center(self, i: int) -> Point:
        return Point.from_array(self.centers[i - 1])

    def radius(self, i: int) -> float:
        return float(self.radii[i - 1])

    def _pieces(self, x: np.ndarray, rho: float) -> np.ndarray:
        """Indices of lens pieces that can meet B(x, rho)."""
        dist = np.linalg.norm(self.centers - x, axis=1)
        return np.nonzero(dist < rho + self.radii)[0]

    def _classify(self, ax, ay, side, x, rho, pieces):
        inside, outside = _disc_bounds(ax, ay, side, x[0], x[1], rho)

        in_square = (ax >= -SQUARE_HALF_SIDE) & (ax + side <= SQUARE_HALF_SIDE) \
            & (ay >= -SQUARE_HALF_SIDE) & (ay + side <= SQUARE_HALF_SIDE)
        off_square = (ax >= SQUARE_HALF_SIDE) | (ax + side <= -SQUARE_HALF_SIDE) \
            | (ay >= SQUARE_HALF_SIDE) | (ay + side <= -SQUARE_HALF_SIDE)
        inside &= in_square
        outside |= off_square

        if self.restricted:
            in_disc, off_disc = _disc_bounds(ax, ay, side, 0.0, 0.0, 1.0)
            inside &= in_disc
            outside |= off_disc

        for i in pieces:
            r = self.radii[i]
            c = self.centers[i]
            in_lens, off_lens = _disc_bounds(ax, ay, side, c[0], c[1], r)
            in_core, off_core = _disc_bounds(ax, ay, side, 0.0, 0.0, 1.0 - r * r)
            inside &= off_lens | off_core
            outside |= in_lens & in_core
        return inside, outside & ~inside

    def ball_mass(self, center: Point, radius: float, tol: float = DEFAULT_TOL) -> MassInterval:
        """
        Quadrature bounds on the area of B(center, radius) within the region.

        Boundary cells are split until their side reaches h or their total
        area drops below tol times the certified inner area.
        """
        self.check_query(center, radius)
        x = center.as_array()
        pieces = self._pieces(x, radius)
        side = 2.0 * radius
        ax = np.array([x[0] - radius])
        ay = np.array([x[1] - radius])
        lo = 0.0
        boundary = 0.0
        levels = 0
        while len(ax):
            inside, outside = self._classify(ax, ay, side, x, radius, pieces)
            lo += float(inside.sum()) * side * side
            edge = ~(inside | outside)
            ax, ay = ax[edge], ay[edge]
            boundary = len(ax) * side * side
            if side <= self.h or boundary <= tol * lo:
                break
            half = side / 2.0
            ax = np.concatenate([ax, ax + half, ax, ax + half])
            ay = np.concatenate([ay, ay, ay + half, ay + half])
            side = half
            levels += 1
        hi = min(lo + boundary, math.pi * radius * radius)
        logger.debug(f"Lens quadrature at r={radius:.3g}: {levels} levels, width {boundary:.3g}")
        return MassInterval(min(lo, hi), hi)

    def witnesses(self) -> List[Point]:
        points = [self.center(i) for i in range(1, self.i_max + 1)]
        points.append(Point.of(0.0, 0.0))
        if not self.restricted:
            points += [Point.of(SQUARE_HALF_SIDE * sx, SQUARE_HALF_SIDE * sy) for sx in (-1, 1) for sy in (-1, 1)]
        return points

    def support_net(self, scale: float) -> List[Point]:
        """Grid nodes with spacing scale that lie within scale of the region."""
        ticks = np.arange(-SQUARE_HALF_SIDE, SQUARE_HALF_SIDE + scale / 2, scale)
        gx, gy = np.meshgrid(ticks, ticks, indexing="ij")
        gx, gy = gx.ravel(), gy.ravel()
        norm = np.hypot(gx, gy)
        keep = np.ones(len(gx), dtype=bool)
        if self.restricted:
            keep &= norm <= 1.0 + scale
        for c, r in zip(self.centers, self.radii):
            deep = (np.hypot(gx - c[0], gy - c[1]) < r - scale) & (norm < 1.0 - r * r - scale)
            keep &= ~deep
        return [Point.of(a, b) for a, b in zip(gx[keep], gy[keep])]


def build_lens_measure(i_max: int, h: Optional[float] = None, restricted: bool = False) -> LensMeasure:
    """Lens measure with pieces 1..i_max and finest quadrature cell side h."""
    if not 1 <= i_max <= MAX_INDEX:
        raise InvalidArgumentError(f"i_max must lie in [1, {MAX_INDEX}], got {i_max}")
    finest = 4.0 ** -i_max / 4.0
    h = min(settings.lens_cell_size, finest) if h is None else float(h)
    if not 0 < h <= finest:
        raise InvalidArgumentError(f"cell size {h:.3g} is too coarse for i_max={i_max}; need h <= {finest:.3g}")
    idx = np.arange(1, i_max + 1, dtype=float)
    theta = math.pi * (1.0 - idx ** -0.5)
    centers = np.column_stack([np.cos(theta), np.sin(theta)])
    radii = 2.0 ** -idx
    centers.setflags(write=False)
    radii.setflags(write=False)
    return LensMeasure(i_max, h, bool(restricted), centers, radii)


def nondoubling_ratios(lens: LensMeasure, i_list: Sequence[int], tol: float = 0.01) -> List[NonDoublingRatio]:
    """lo(B(x_i, 2 r_i)) / hi(B(x_i, r_i)) for each index i of the restricted measure."""
    if not lens.restricted:
        raise PreconditionError("nondoubling ratios need the measure restricted to the unit disc")
    out = []
    for i in i_list:
        if not 1 <= i <= lens.i_max:
            raise InvalidArgumentError(f"lens index {i} outside 1..{lens.i_max}")
        x, r = lens.center(i), lens.radius(i)
        big = lens.ball_mass(x, 2.0 * r, tol)
        small = lens.ball_mass(x, r, tol)
        out.append(NonDoublingRatio(i=i, ratio_lo=big.lo / small.hi, bound=math.pi / (4.0 * r)))
    return out


def lens_doubling_ratios(
    lens: LensMeasure, centers: Sequence[Point], radii: Sequence[float], tol: float = 0.01
) -> List[DoublingRatioSample]:
    """Upper bounds on mu(B(x, 2 rho)) / mu(B(x, rho)) at sampled balls."""
    out = []
    for x in centers:
        for rho in radii:
            small = lens.ball_mass(x, rho, tol)
            if small.lo == 0:
                logger.debug(f"Skipping B({x.coords}, {rho:.3g}): no certified mass")
                continue
            big = lens.ball_mass(x, 2.0 * rho, tol)
            out.append(DoublingRatioSample(x=x.coords, rho=rho, ratio_hi=big.hi / small.lo))
    return out
