"""
Estimate Command

Runs the configured estimators over the configured model and emits one CSV
row per reported value. A failing estimator becomes an error row and the
run continues.
"""

import logging
import time
from typing import Any, Callable, Dict, List, Optional

from regdim.cli.output import render_csv, write_output
from regdim.core.config import settings
from regdim.core.errors import RegDimError
from regdim.core.measure import MeasureModel
from regdim.models.run_config import RunConfig, load_run_config
from regdim.services.estimators import (
    doubling_constant,
    estimate_assouad_support,
    estimate_local_dim_upper,
    estimate_T,
    estimate_tau,
    estimate_upper_regularity,
    verify_dimension_chain,
)
from regdim.services.sequence import SequenceModel, doubling_violation_witness
from regdim.services.tangent import LensMeasure, nondoubling_ratios

logger = logging.getLogger(__name__)

COLUMNS = ("estimator", "value", "witness_x", "witness_r", "witness_R", "gap", "runtime_ms", "error")

Row = Dict[str, Any]


class EstimateRun:
    """One configured run: model, grids and run-wide overrides."""

    def __init__(self, config: RunConfig, tol: Optional[float] = None, threads: Optional[int] = None):
        self.config = config
        self.model: MeasureModel = config.build_model()
        self.grid = config.grid
        self.spectrum_grid = config.spectrum_grid or config.grid
        tols = config.tolerances
        self.tol = tol or tols.default_tol or settings.default_tol
        self.chain_tol = settings.chain_tol if tols.chain_tol is None else tols.chain_tol
        self.net_scale_factor = tols.net_scale_factor or settings.net_scale_factor
        self.workers = threads or settings.threads
        self.q_list = config.options.q_list or list(settings.tau_q_list)

    def dimreg(self) -> List[Row]:
        est = estimate_upper_regularity(self.model, self.grid, None, self.tol, self.workers)
        w = est.witness
        return [{"estimator": "dimreg", "value": est.value, "witness_x": w.x,
                 "witness_r": w.r, "witness_R": w.R, "gap": w.gap}]

    def local_dim(self) -> List[Row]:
        return [
            {"estimator": "local_dim", "value": estimate_local_dim_upper(self.model, x, self.grid, self.tol),
             "witness_x": x.coords}
            for x in self.model.witnesses()
        ]

    def doubling(self) -> List[Row]:
        theta = self.config.options.theta
        value = doubling_constant(
            self.model, theta, self.grid, None, self.tol, self.workers, chain=self.config.options.chain
        )
        return [{"estimator": f"doubling(theta={theta:g})", "value": value}]

    def tau(self) -> List[Row]:
        rows = []
        for q in self.q_list:
            tau, _ = estimate_tau(
                self.model, q, self.spectrum_grid, self.tol, self.workers, self.net_scale_factor
            )
            rows.append({"estimator": f"tau(q={q:g})", "value": tau})
        return rows

    def T(self) -> List[Row]:
        est = estimate_T(self.model, self.q_list, self.spectrum_grid, self.tol, self.workers, self.net_scale_factor)
        return [{"estimator": "T", "value": est.T_hat}]

    def assouad(self) -> List[Row]:
        return [{"estimator": "assouad_support", "value": estimate_assouad_support(self.model, self.spectrum_grid)}]

    def chain(self) -> List[Row]:
        report = verify_dimension_chain(
            self.model, self.grid, None, self.tol, self.workers, self.q_list, self.chain_tol, self.spectrum_grid
        )
        rows = [{"estimator": f"chain:{name}", "value": value} for name, value in report.values().items()]
        rows += [
            {"estimator": f"chain_violation:{v.name}", "value": v.lhs - v.rhs}
            for v in report.violations
        ]
        return rows

    def nondoubling(self) -> List[Row]:
        if not isinstance(self.model, LensMeasure):
            raise RegDimError("nondoubling ratios need a lens model")
        spec = self.config.model
        indices = spec.indices or list(range(min(5, spec.i_max), spec.i_max + 1))
        return [
            {"estimator": f"nondoubling(i={r.i})", "value": r.ratio_lo,
             "witness_x": self.model.center(r.i).coords, "witness_r": self.model.radius(r.i),
             "witness_R": 2 * self.model.radius(r.i)}
            for r in nondoubling_ratios(self.model, indices)
        ]

    def violation(self) -> List[Row]:
        if not isinstance(self.model, SequenceModel):
            raise RegDimError("doubling violation witnesses need a sequence model")
        radii = self.config.options.violation_radii or [2.0 ** -k for k in range(4, 15)]
        return [
            {"estimator": "violation", "value": w.ratio_lo, "witness_x": (w.center,),
             "witness_r": w.R / 2, "witness_R": w.R}
            for w in doubling_violation_witness(self.model.measure, radii)
        ]

    def run(self, name: str, timings: bool) -> List[Row]:
        runner: Callable[[], List[Row]] = getattr(self, name)
        started = time.perf_counter()
        try:
            rows = runner()
        except RegDimError as e:
            logger.warning(f"Estimator {name} failed: {e}")
            rows = [{"estimator": name, "error": str(e)}]
        except Exception as e:
            logger.error(f"Estimator {name} raised {type(e).__name__}: {e}")
            rows = [{"estimator": name, "error": f"{type(e).__name__}: {e}"}]
        if timings:
            elapsed = (time.perf_counter() - started) * 1000.0
            for row in rows:
                row["runtime_ms"] = round(elapsed, 3)
        return rows


def cmd_estimate(
    config_path: str,
    out: Optional[str] = None,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
    tol: Optional[float] = None,
    timings: bool = False,
) -> str:
    config, digest = load_run_config(config_path)
    if seed is not None:
        config = config.model_copy(update={"seed": seed})
    run = EstimateRun(config, tol, threads)
    logger.info(f"Running {', '.join(config.estimators)} on the {run.model.family} model with {run.workers} worker(s)")

    rows: List[Row] = []
    for name in config.estimators:
        rows += run.run(name, timings)
    text = render_csv(COLUMNS, rows, digest)
    write_output(text, out or config.output)
    return text
