"""Closed-form values for the configured model."""

import logging
from typing import Optional

from regdim.cli.output import render_csv, write_output
from regdim.models.run_config import load_run_config

logger = logging.getLogger(__name__)

COLUMNS = ("quantity", "value", "note")


def cmd_formula(config_path: str, out: Optional[str] = None) -> str:
    config, digest = load_run_config(config_path)
    model = config.build_base_model()
    rows = [
        {"quantity": f.name, "value": None if f.value is None and not f.infinite else f.as_float, "note": f.note}
        for f in config.model.formulas(model)
    ]
    logger.info(f"{len(rows)} closed-form values for the {config.model.family} model")
    text = render_csv(COLUMNS, rows, digest)
    write_output(text, out or config.output)
    return text
