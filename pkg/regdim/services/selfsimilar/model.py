"""
Self-Similar Measure Model

Certified ball masses by cylinder subdivision. Every cylinder is carried as
the image of the hull ball, so inside/outside tests against the query ball
are exact distance comparisons. Subdivision runs level by level on arrays.
"""

import logging
from typing import List

import numpy as np

from regdim.core.errors import PreconditionError
from regdim.core.geometry import Point, SymbolicPoint
from regdim.core.intervals import MassInterval
from regdim.core.measure import DEFAULT_TOL, MeasureModel
from regdim.services.selfsimilar.system import (
    SelfSimilarSystem,
    extremal_digit,
    point_from_code,
    require_certified,
)

logger = logging.getLogger(__name__)

MAX_LEVELS = 200
# relative floating-point slack on distance comparisons
ROUNDING = 64 * np.finfo(float).eps


def _expand(system: SelfSimilarSystem, centers, ratios, mats, masses):
    offs = np.einsum("kab,nb->kna", mats, system._shifts)
    k, n, d = len(ratios), system.size, system.dim
    centers = (centers[:, None, :] + ratios[:, None, None] * offs).reshape(k * n, d)
    mats = np.einsum("kab,nbc->knac", mats, system._qs).reshape(k * n, d, d)
    ratios = (ratios[:, None] * system.ratios[None, :]).reshape(k * n)
    masses = (masses[:, None] * system.prob_array[None, :]).reshape(k * n)
    return centers, ratios, mats, masses


def ball_mass_ss(system: SelfSimilarSystem, x: Point, r: float, tol: float = DEFAULT_TOL) -> MassInterval:
    """
    Certified mass of the open ball B(x, r).

    Cylinders whose bounding ball lies inside B(x, r) count towards both ends,
    those outside are dropped, and straddling cylinders are subdivided. Once
    their diameter falls below tol * r they may count towards hi only, as long
    as the width stays within tol of the total; otherwise they are split too.
    Raises PreconditionError when the width contract hi - lo <= tol * hi + tol
    cannot be met at floating-point resolution.
    """
    require_certified(system)
    xv = x.as_array()
    c0 = system.hull_center.as_array()
    rho0 = system.hull_radius
    slack = ROUNDING * (float(np.linalg.norm(xv)) + float(np.linalg.norm(c0)) + rho0 + r)

    d0 = float(np.linalg.norm(xv - c0))
    if d0 + rho0 < r - slack:
        return MassInterval.exact(1.0)
    if d0 - rho0 >= r + slack:
        return MassInterval.zero()

    centers = c0[None, :]
    ratios = np.ones(1)
    mats = np.eye(system.dim)[None]
    masses = np.ones(1)
    lo = 0.0
    pending = 0.0
    remaining = 0.0
    for _ in range(MAX_LEVELS):
        centers, ratios, mats, masses = _expand(system, centers, ratios, mats, masses)
        radii = ratios * rho0
        dist = np.linalg.norm(centers - xv, axis=1)
        inside = dist + radii < r - slack
        outside = dist - radii >= r + slack
        lo += float(masses[inside].sum())
        straddle = ~(inside | outside)
        # below rounding resolution
        floor = straddle & (radii <= slack)
        pending += float(masses[floor].sum())
        keep = straddle & ~floor
        small = keep & (2.0 * radii < tol * r)
        remaining = float(masses[keep].sum())
        if remaining == 0.0:
            break
        budget = 0.5 * tol * (lo + pending + remaining)
        if pending + remaining <= budget:
            break
        parked = float(masses[small].sum())
        # parked mass never exceeds tol / 2 of the final lo
        if parked > 0.0 and pending + parked <= 0.5 * tol * lo:
            pending += parked
            keep &= ~small
            remaining = float(masses[keep].sum())
            if remaining == 0.0:
                break
        centers, ratios, mats, masses = centers[keep], ratios[keep], mats[keep], masses[keep]
    pending += remaining

    hi = min(1.0, lo + pending)
    lo = min(lo, hi)
    if hi - lo > tol * hi + tol:
        raise PreconditionError(
            f"cannot resolve B({x.coords}, {r:.3g}) to tol {tol:g}: width {hi - lo:.3g} at floating-point resolution"
        )
    return MassInterval(lo, hi)


class SelfSimilarModel(MeasureModel):
    """MeasureModel view of a self-similar system."""

    family = "selfsimilar"

    def __init__(self, system: SelfSimilarSystem):
        require_certified(system)
        self.system = system
        self._witnesses = self._build_witnesses()

    @property
    def ambient_dim(self) -> int:
        return self.system.dim

    def ball_mass(self, center: Point, radius: float, tol: float = DEFAULT_TOL) -> MassInterval:
        self.check_query(center, radius)
        return ball_mass_ss(self.system, center, radius, tol)

    def extremal_point(self) -> Point:
        """Point coded by the repeated digit maximizing log p_i / log c_i."""
        return point_from_code(self.system, (), (extremal_digit(self.system),))

    def _build_witnesses(self) -> List[Point]:
        n = self.system.size
        points = [point_from_code(self.system, (), (i,)) for i in range(n)]
        points += [point_from_code(self.system, (i,), (j,)) for i in range(n) for j in range(n) if i != j]
        return points

    def witnesses(self) -> List[Point]:
        return list(self._witnesses)

    def support_net(self, scale: float) -> List[Point]:
        """Attractor points S_w(p_0) for cylinders of diameter at most scale."""
        system = self.system
        rho0 = system.hull_radius
        c0 = system.hull_center.as_array()
        anchor = system.maps[0].fixed_point().as_array() - c0

        centers = c0[None, :]
        ratios = np.ones(1)
        mats = np.eye(system.dim)[None]
        masses = np.ones(1)
        words = np.zeros((1, 0), dtype=int)
        net: List[Point] = []
        while len(ratios):
            done = 2.0 * ratios * rho0 <= scale
            if np.any(done):
                reps = centers[done] + ratios[done][:, None] * np.einsum("kab,b->ka", mats[done], anchor)
                for rep, word in zip(reps, words[done]):
                    net.append(Point.from_array(rep, SymbolicPoint(tuple(int(w) for w in word), (0,))))
            active = ~done
            if not np.any(active):
                break
            k = int(active.sum())
            words = np.concatenate(
                [np.repeat(words[active], system.size, axis=0), np.tile(np.arange(system.size), k)[:, None]],
                axis=1,
            )
            centers, ratios, mats, masses = _expand(
                system, centers[active], ratios[active], mats[active], masses[active]
            )
        logger.debug(f"Self-similar support net at scale {scale:.3g}: {len(net)} points")
        return net
