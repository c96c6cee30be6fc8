"""
Regularity Estimators

Finite-scale estimates of the upper regularity dimension, upper local
dimensions and doubling constants from certified ball masses. Interval
ends are always taken pessimistically: numerators use lo, denominators hi
for dimension exponents; doubling ratios use hi over lo.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

from regdim.core.diagnostics import ScanDiagnostics
from regdim.core.errors import InvalidArgumentError, NoDataError, PreconditionError
from regdim.core.geometry import Point
from regdim.core.grid import ScaleGrid
from regdim.core.intervals import MassInterval
from regdim.core.measure import DEFAULT_TOL, MeasureModel
from regdim.core.parallel import parallel_map
from regdim.models.estimates import DimEstimate, GapValue, ScaleWitness, TelescopeReport

logger = logging.getLogger(__name__)

NEG_INF = float("-inf")


def _mass_profile(model: MeasureModel, x: Point, radii: Sequence[float], tol: float) -> List[MassInterval]:
    return [model.ball_mass(x, r, tol) for r in radii]


def estimate_upper_regularity(
    model: MeasureModel,
    grid: ScaleGrid,
    sample_points: Optional[Sequence[Point]] = None,
    tol: float = DEFAULT_TOL,
    workers: int = 1,
) -> DimEstimate:
    """
    Sup over sampled centers and grid pairs R = radius(i), r = radius(i + gap) of
    log(mu(B(x,R)).lo / mu(B(x,r)).hi) / log(R/r), reported per gap and overall.
    """
    points = list(model.sample_points(grid) if sample_points is None else sample_points)
    if not points:
        raise InvalidArgumentError("upper regularity scan needs at least one sample point")
    gaps = grid.gaps()
    if not gaps:
        raise InvalidArgumentError(f"grid exponents {grid.exp_min}..{grid.exp_max} admit no gap >= {grid.gap_min}")

    radii = grid.radii()
    diag = ScanDiagnostics("dimreg")
    profiles = parallel_map(lambda x: _mass_profile(model, x, radii, tol), points, workers)
    diag.add_queries(len(points) * len(radii))

    best = {g: (NEG_INF, None) for g in gaps}
    for x, masses in zip(points, profiles):
        for g in gaps:
            log_ratio = grid.log_ratio(g)
            for i, j in grid.pairs(g):
                diag.add_triple()
                num, den = masses[i - grid.exp_min], masses[j - grid.exp_min]
                if den.log_hi == NEG_INF:
                    diag.skip_denominator()
                    continue
                if num.log_lo == NEG_INF:
                    diag.skip_numerator()
                    continue
                exponent = (num.log_lo - den.log_hi) / log_ratio
                if exponent > best[g][0]:
                    best[g] = (exponent, (x, radii[j - grid.exp_min], radii[i - grid.exp_min]))

    diag.finish()
    curve = [GapValue(gap=g, value=best[g][0]) for g in gaps if best[g][1] is not None]
    if not curve:
        raise NoDataError(f"all {diag.triples} triples were skipped (zero mass)")

    top = max(curve, key=lambda p: p.value)
    x, r, R = best[top.gap][1]
    logger.debug(f"dimreg scan over {len(points)} points: {top.value:.5f} at gap {top.gap}")
    return DimEstimate(
        value=top.value,
        witness=ScaleWitness(x=x.coords, r=r, R=R, gap=top.gap),
        gap_curve=curve,
        conservative=True,
        diagnostics=diag.to_dict(),
    )


def estimate_local_dim_upper(
    model: MeasureModel, x: Point, grid: ScaleGrid, tol: float = DEFAULT_TOL
) -> float:
    """Max of log(mu(B(x,r)).hi) / log r over the smallest quarter of the grid radii."""
    radii = [r for r in grid.smallest_quartile() if r < 1]
    if not radii:
        raise InvalidArgumentError("local dimension needs grid radii below 1")
    value = NEG_INF
    for r in radii:
        mass = model.ball_mass(x, r, tol)
        if mass.log_hi == NEG_INF:
            raise NoDataError(f"B({x.coords}, {r:.3g}) has zero mass; point is off the support")
        value = max(value, mass.log_hi / math.log(r))
    return value


def _chain_radii(grid: ScaleGrid, theta: float, chain: bool) -> List[Tuple[float, float]]:
    """(R, theta R) pairs: one per grid radius, or whole theta-chains down to the smallest radius."""
    radii = grid.radii()
    floor = radii[-1] * (1.0 - 1e-12)
    pairs = []
    seen = set()
    for R in radii:
        while theta * R >= floor:
            key = (R, theta * R)
            if key not in seen:
                seen.add(key)
                pairs.append(key)
            if not chain:
                break
            R = theta * R
    return pairs


def doubling_constant(
    model: MeasureModel,
    theta: float,
    grid: ScaleGrid,
    sample_points: Optional[Sequence[Point]] = None,
    tol: float = DEFAULT_TOL,
    workers: int = 1,
    chain: bool = False,
) -> float:
    """
    Observed sup of mu(B(x,R)).hi / mu(B(x,theta R)).lo: a lower bound for C(theta).

    With chain=True every theta-chain R, theta R, theta^2 R, ... from each grid
    radius is evaluated, so the same grid's regularity scan is a matched sample.
    """
    if not 0 < theta < 1:
        raise InvalidArgumentError(f"theta must lie in (0, 1), got {theta}")
    points = list(model.sample_points(grid) if sample_points is None else sample_points)
    if not points:
        raise InvalidArgumentError("doubling scan needs at least one sample point")
    pairs = _chain_radii(grid, theta, chain)

    def scan(x: Point) -> Tuple[float, int]:
        best, skipped = NEG_INF, 0
        for R, r in pairs:
            den = model.ball_mass(x, r, tol)
            if den.log_lo == NEG_INF:
                skipped += 1
                continue
            best = max(best, model.ball_mass(x, R, tol).log_hi - den.log_lo)
        return best, skipped

    results = parallel_map(scan, points, workers)
    skipped = sum(s for _, s in results)
    log_c = max(b for b, _ in results)
    if log_c == NEG_INF:
        raise NoDataError("every doubling ratio had a zero denominator")
    if skipped:
        logger.debug(f"doubling scan skipped {skipped} zero-mass balls")
    return math.exp(log_c)


def telescoping_ratios(model: MeasureModel, x: Point, R: float, theta: float, k: int) -> TelescopeReport:
    """Consecutive ratios mu(B(x, theta^j R)) / mu(B(x, theta^(j+1) R)), their product and the direct ratio."""
    if not model.exact_masses:
        raise PreconditionError(f"{model.family} model does not report exact ball masses")
    if k < 1:
        raise InvalidArgumentError(f"chain length must be positive, got {k}")
    masses = [model.ball_mass(x, R * theta ** j).lo for j in range(k + 1)]
    if masses[-1] == 0:
        raise NoDataError(f"B({x.coords}, {R * theta ** k:.3g}) has zero mass")
    ratios = [masses[j] / masses[j + 1] for j in range(k)]
    return TelescopeReport(ratios=ratios, product=math.prod(ratios), direct=masses[0] / masses[-1])
