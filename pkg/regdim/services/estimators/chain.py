"""
Dimension Chain

Estimates every quantity in the chains

    sup local dim <= T <= dim_reg,   dim_B supp <= dim_A supp <= dim_reg

and records the inequalities that fail by more than the chain tolerance.
"""

import logging
from typing import Optional, Sequence

from regdim.core.config import settings
from regdim.core.errors import NoDataError
from regdim.core.geometry import Point
from regdim.core.grid import ScaleGrid
from regdim.core.measure import DEFAULT_TOL, MeasureModel
from regdim.models.estimates import ChainReport, ChainViolation
from regdim.services.estimators.assouad import estimate_assouad_support
from regdim.services.estimators.regularity import estimate_local_dim_upper, estimate_upper_regularity
from regdim.services.estimators.spectrum import estimate_T, estimate_tau

logger = logging.getLogger(__name__)


def verify_dimension_chain(
    model: MeasureModel,
    grid: ScaleGrid,
    samples: Optional[Sequence[Point]] = None,
    tol: float = DEFAULT_TOL,
    workers: int = 1,
    q_list: Optional[Sequence[float]] = None,
    chain_tol: Optional[float] = None,
    spectrum_grid: Optional[ScaleGrid] = None,
) -> ChainReport:
    """
    Run all five estimators and check the chain inequalities.

    `spectrum_grid` (default: `grid`) is used for tau, T and the Assouad
    count, whose nets grow with the smallest radius.
    """
    q_list = settings.tau_q_list if q_list is None else q_list
    chain_tol = settings.chain_tol if chain_tol is None else chain_tol
    coarse = grid if spectrum_grid is None else spectrum_grid

    local_dims = {}
    for w in model.witnesses():
        try:
            local_dims[str(w.coords)] = estimate_local_dim_upper(model, w, grid, tol)
        except NoDataError:
            logger.debug(f"Witness {w.coords} has zero mass at small radii, skipped")
    if not local_dims:
        raise NoDataError("no witness carried mass at the smallest radii")

    sup_local = max(local_dims.values())
    T = estimate_T(model, q_list, coarse, tol, workers).T_hat
    dimreg = estimate_upper_regularity(model, grid, samples, tol, workers).value
    box = -estimate_tau(model, 0.0, coarse, tol, workers)[0]
    assouad = estimate_assouad_support(model, coarse, samples)

    checks = [
        ("sup_local <= T", sup_local, T),
        ("T <= dimreg", T, dimreg),
        ("box_support <= assouad_support", box, assouad),
        ("assouad_support <= dimreg", assouad, dimreg),
    ]
    violations = [
        ChainViolation(name=name, lhs=lhs, rhs=rhs, slack=chain_tol)
        for name, lhs, rhs in checks
        if lhs > rhs + chain_tol
    ]
    for v in violations:
        logger.info(f"Chain violation {v.name}: {v.lhs:.4f} > {v.rhs:.4f} + {v.slack}")
    return ChainReport(
        sup_local_hat=sup_local,
        T_hat=T,
        dimreg_hat=dimreg,
        box_support_hat=box,
        assouad_support_hat=assouad,
        violations=violations,
        local_dims=local_dims,
    )
