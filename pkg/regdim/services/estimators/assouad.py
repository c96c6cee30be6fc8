"""
Assouad Dimension of the Support

Counts 2r-separated support points inside B(x, R) across grid pairs and
reports the largest exponent log N / log(R/r).
"""

import logging
import math
from typing import Dict, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from regdim.core.errors import InvalidArgumentError, NoDataError
from regdim.core.geometry import Point
from regdim.core.grid import ScaleGrid
from regdim.core.measure import MeasureModel

logger = logging.getLogger(__name__)


def separated_net(model: MeasureModel, r: float) -> np.ndarray:
    """Greedy 2r-separated subset of the support net at scale r, in net order."""
    net = model.support_net(r)
    if not net:
        raise NoDataError(f"empty support net at scale {r:.3g}")
    coords = np.array([p.coords for p in net], dtype=float)
    tree = cKDTree(coords)
    taken = np.zeros(len(coords), dtype=bool)
    for k in range(len(coords)):
        if not taken[tree.query_ball_point(coords[k], 2.0 * r)].any():
            taken[k] = True
    return coords[taken]


def estimate_assouad_support(
    model: MeasureModel,
    grid: ScaleGrid,
    sample_points: Optional[Sequence[Point]] = None,
) -> float:
    """Sup of log N(x, R, r) / log(R/r) over sampled centers and grid pairs with gap >= gap_min."""
    points = list(model.sample_points(grid) if sample_points is None else sample_points)
    if not points:
        raise InvalidArgumentError("Assouad scan needs at least one sample point")
    gaps = grid.gaps()
    if not gaps:
        raise InvalidArgumentError(f"grid exponents {grid.exp_min}..{grid.exp_max} admit no gap >= {grid.gap_min}")

    needed = sorted({j for g in gaps for _, j in grid.pairs(g)})
    trees: Dict[int, cKDTree] = {j: cKDTree(separated_net(model, grid.radius(j))) for j in needed}
    centers = np.array([p.coords for p in points], dtype=float)

    best = -math.inf
    for g in gaps:
        log_ratio = grid.log_ratio(g)
        for i, j in grid.pairs(g):
            counts = trees[j].query_ball_point(centers, grid.radius(i), return_length=True)
            top = int(np.max(counts))
            if top > 0:
                best = max(best, math.log(top) / log_ratio)
    if best == -math.inf:
        raise NoDataError("no support point fell inside any sampled ball")
    logger.debug(f"Assouad scan over {len(points)} centers and {len(needed)} net scales: {best:.4f}")
    return best
