"""Epsilon sweep over the epsilon-carpet family: the four dimension curves."""

import logging
from typing import Optional

import numpy as np

from regdim.cli.output import render_csv, write_output
from regdim.core.errors import ConfigError
from regdim.services.sponge import badcarpet_family

logger = logging.getLogger(__name__)

COLUMNS = ("epsilon", "dimreg", "T", "sup_local", "assouad", "sup_local_branch")


def cmd_sweep_epsilon(eps_min: float, eps_max: float, steps: int, out: Optional[str] = None) -> str:
    if not 0 < eps_min < eps_max <= 0.5:
        raise ConfigError(f"need 0 < eps_min < eps_max <= 1/2, got {eps_min}, {eps_max}", "eps")
    if steps < 2:
        raise ConfigError(f"sweep needs at least 2 steps, got {steps}", "steps")

    rows = []
    previous = None
    for eps in np.linspace(eps_min, eps_max, steps):
        dims = badcarpet_family(float(eps))
        if previous is not None and dims.sup_local_branch != previous.sup_local_branch:
            logger.info(f"sup_local switches branch between epsilon {previous.epsilon:.4f} and {dims.epsilon:.4f}")
        rows.append(dims.model_dump())
        previous = dims

    text = render_csv(COLUMNS, rows)
    write_output(text, out)
    return text
