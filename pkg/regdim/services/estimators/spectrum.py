"""
L^q Spectrum Estimators

Greedy approximations of the packing function M_r^q, least-squares slopes
tau(q) of log M_r^q against log r, and the asymptote slope T.

The packing is built from the model's support net at the packing radius:
candidates are visited in ascending mass order when q < 0 and descending
order when q > 0, and a candidate is kept when it lies more than 2r from
every kept center. Sums are accumulated in log space.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import logsumexp

from regdim.core.config import settings
from regdim.core.diagnostics import ScanDiagnostics
from regdim.core.errors import InvalidArgumentError, NoDataError
from regdim.core.grid import ScaleGrid
from regdim.core.measure import DEFAULT_TOL, MeasureModel
from regdim.core.parallel import parallel_map
from regdim.models.estimates import LqSpectrumEstimate, TauPoint

logger = logging.getLogger(__name__)

MIN_FIT_RADII = 3
T_MOMENT = -10.0


@dataclass(frozen=True)
class NetMasses:
    """Support-net candidates at one packing radius with their log ball masses."""

    r: float
    coords: np.ndarray
    log_lo: np.ndarray
    log_hi: np.ndarray

    def __len__(self) -> int:
        return len(self.log_hi)


def net_masses(
    model: MeasureModel, r: float, net_scale_factor: float, tol: float = DEFAULT_TOL, workers: int = 1
) -> NetMasses:
    """Ball masses of radius r at every support-net point; zero-mass candidates are dropped."""
    if not r > 0:
        raise InvalidArgumentError(f"packing radius must be positive, got {r}")
    net = model.support_net(r * net_scale_factor)
    if not net:
        raise NoDataError(f"empty support net at scale {r * net_scale_factor:.3g}")
    masses = parallel_map(lambda x: model.ball_mass(x, r, tol), net, workers)
    keep = [k for k, m in enumerate(masses) if not m.is_zero]
    if not keep:
        raise NoDataError(f"every net ball of radius {r:.3g} has zero mass")
    return NetMasses(
        r=r,
        coords=np.array([net[k].coords for k in keep], dtype=float),
        log_lo=np.array([masses[k].log_lo for k in keep]),
        log_hi=np.array([masses[k].log_hi for k in keep]),
    )


def greedy_packing(net: NetMasses, q: float) -> np.ndarray:
    """Indices of a maximal 2r-separated subset, visited in the mass order suited to q."""
    if q < 0:
        order = np.argsort(net.log_hi, kind="stable")
    elif q > 0:
        order = np.argsort(-net.log_lo, kind="stable")
    else:
        order = np.arange(len(net))
    tree = cKDTree(net.coords)
    taken = np.zeros(len(net), dtype=bool)
    for k in order:
        near = tree.query_ball_point(net.coords[k], 2.0 * net.r)
        if not taken[near].any():
            taken[k] = True
    return np.nonzero(taken)[0]


def mass_end(q: float) -> str:
    """Interval end raised to q: hi when q < 0, lo when q > 0, none for counts."""
    if q == 0:
        return "count"
    return "hi" if q < 0 else "lo"


def _log_sum(net: NetMasses, chosen: np.ndarray, q: float, end: Optional[str] = None) -> float:
    end = end or mass_end(q)
    if end == "count":
        return math.log(len(chosen))
    logs = net.log_hi[chosen] if end == "hi" else net.log_lo[chosen]
    return float(logsumexp(q * logs))


def _note_packing(diagnostics: ScanDiagnostics, net: NetMasses, chosen: np.ndarray, q: float, value: float) -> None:
    end = mass_end(q)
    other = {"hi": "lo", "lo": "hi"}.get(end, end)
    diagnostics.notes.setdefault("packings", []).append({
        "r": net.r,
        "q": q,
        "size": int(len(chosen)),
        "mass_end": end,
        "log_sum": value,
        "log_sum_other_end": _log_sum(net, chosen, q, other),
    })


def log_packing_sum(
    model: MeasureModel,
    r: float,
    q: float,
    net_scale_factor: Optional[float] = None,
    tol: float = DEFAULT_TOL,
    workers: int = 1,
    net: Optional[NetMasses] = None,
    diagnostics: Optional[ScanDiagnostics] = None,
) -> float:
    """
    log of the greedy packing sum of mu(B(x_i, r))^q.

    Uses hi^q for q < 0 and lo^q for q > 0. With diagnostics, each packing is
    noted together with the sum over the other interval end.
    """
    if net is None:
        factor = settings.net_scale_factor if net_scale_factor is None else net_scale_factor
        net = net_masses(model, r, factor, tol, workers)
    chosen = greedy_packing(net, q)
    value = _log_sum(net, chosen, q)
    if diagnostics is not None:
        _note_packing(diagnostics, net, chosen, q, value)
    return value


def packing_sum(
    model: MeasureModel,
    r: float,
    q: float,
    net_scale_factor: Optional[float] = None,
    tol: float = DEFAULT_TOL,
    workers: int = 1,
    diagnostics: Optional[ScanDiagnostics] = None,
) -> float:
    """Greedy packing sum of mu(B(x_i, r))^q over 2r-separated net points."""
    value = log_packing_sum(model, r, q, net_scale_factor, tol, workers, diagnostics=diagnostics)
    return math.exp(value) if value < 709 else math.inf


def _fit(log_r: np.ndarray, log_m: np.ndarray) -> Tuple[float, float]:
    slope, intercept = np.polyfit(log_r, log_m, 1)
    residual = log_m - (slope * log_r + intercept)
    return float(slope), float(np.sqrt(np.mean(residual ** 2)))


def estimate_tau(
    model: MeasureModel,
    q: float,
    grid: ScaleGrid,
    tol: float = DEFAULT_TOL,
    workers: int = 1,
    net_scale_factor: Optional[float] = None,
    nets: Optional[Dict[float, NetMasses]] = None,
    diagnostics: Optional[ScanDiagnostics] = None,
) -> Tuple[float, float]:
    """Least-squares slope of log M_r^q against log r over the grid radii, and the RMS residual."""
    radii = grid.radii()
    if len(radii) < MIN_FIT_RADII:
        raise InvalidArgumentError(f"tau fit needs at least {MIN_FIT_RADII} radii, grid has {len(radii)}")
    factor = settings.net_scale_factor if net_scale_factor is None else net_scale_factor
    nets = {} if nets is None else nets
    log_m = []
    for r in radii:
        if r not in nets:
            nets[r] = net_masses(model, r, factor, tol, workers)
        log_m.append(log_packing_sum(model, r, q, net=nets[r], diagnostics=diagnostics))
    return _fit(np.log(radii), np.array(log_m))


def estimate_T(
    model: MeasureModel,
    q_list: Sequence[float],
    grid: ScaleGrid,
    tol: float = DEFAULT_TOL,
    workers: int = 1,
    net_scale_factor: Optional[float] = None,
) -> LqSpectrumEstimate:
    """tau(q) for every q in q_list and T = tau(q*) / q* at the most negative q*."""
    q_list = sorted(float(q) for q in q_list)
    if not q_list or q_list[0] > T_MOMENT:
        raise InvalidArgumentError(f"q_list needs a moment q <= {T_MOMENT:g}, got {q_list}")
    nets: Dict[float, NetMasses] = {}
    diag = ScanDiagnostics("T")
    points: List[TauPoint] = []
    for q in q_list:
        tau, residual = estimate_tau(model, q, grid, tol, workers, net_scale_factor, nets, diag)
        points.append(TauPoint(q=q, tau_hat=tau, fit_residual=residual))
    q_star = points[0]
    logger.debug(f"T estimate from q={q_star.q:g}: tau={q_star.tau_hat:.5f}")
    return LqSpectrumEstimate(points=points, T_hat=q_star.tau_hat / q_star.q, diagnostics=diag.finish().to_dict())
