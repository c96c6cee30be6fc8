"""
Command Line Interface

Entry point for the regdim batch commands: formula, estimate and sweep.
Logs go to stderr; tables go to --out or stdout.
"""

import argparse
import logging
import sys
from typing import List, Optional

from regdim.core.config import settings
from regdim.core.errors import ConfigError, RegDimError
from regdim.cli.commands import cmd_estimate, cmd_formula, cmd_sweep_epsilon

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTATION = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regdim",
        description="Regularity dimensions of fractal measures: closed forms and finite-scale estimates",
    )
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    formula = sub.add_parser("formula", help="Closed-form values for the configured model")
    formula.add_argument("--config", required=True, help="YAML run file")
    formula.add_argument("--out", help="CSV output path (default: stdout or the config's output)")

    estimate = sub.add_parser("estimate", help="Run the configured estimators")
    estimate.add_argument("--config", required=True, help="YAML run file")
    estimate.add_argument("--out", help="CSV output path (default: stdout or the config's output)")
    estimate.add_argument("--seed", type=int, help="Override the config seed")
    estimate.add_argument("--threads", type=int, help="Worker threads for ball-mass queries")
    estimate.add_argument("--tol", type=float, help="Override the mass tolerance")
    estimate.add_argument("--timings", action="store_true", help="Fill the runtime_ms column")

    sweep = sub.add_parser("sweep", help="Four dimension curves of the epsilon carpet")
    sweep.add_argument("--eps-min", type=float, required=True)
    sweep.add_argument("--eps-max", type=float, required=True)
    sweep.add_argument("--steps", type=int, default=50)
    sweep.add_argument("--out", help="CSV output path (default: stdout)")
    return parser


def run(args: argparse.Namespace) -> None:
    if args.command == "formula":
        cmd_formula(args.config, args.out)
    elif args.command == "estimate":
        if args.threads is not None and args.threads < 1:
            raise ConfigError(f"--threads must be at least 1, got {args.threads}", "threads")
        if args.tol is not None and not 0 < args.tol < 1:
            raise ConfigError(f"--tol must lie in (0, 1), got {args.tol}", "tol")
        cmd_estimate(args.config, args.out, args.seed, args.threads, args.tol, args.timings)
    else:
        cmd_sweep_epsilon(args.eps_min, args.eps_max, args.steps, args.out)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    # Configure logging
    logging.basicConfig(
        level=logging.DEBUG if args.debug else settings.effective_log_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    logger.debug(f"{settings.app_name} v{settings.app_version}: {args.command}")

    for problem in settings.validate_config():
        logger.warning(f"Config warning: {problem}")

    try:
        run(args)
    except ConfigError as e:
        logger.error(f"Config error: {e}")
        return EXIT_CONFIG
    except RegDimError as e:
        logger.error(f"Computation failed: {e}")
        return EXIT_COMPUTATION
    except Exception as e:
        logger.error(f"Computation failed with {type(e).__name__}: {e}")
        return EXIT_COMPUTATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
