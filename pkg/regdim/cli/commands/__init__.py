"""CLI commands, one module per subcommand."""

from regdim.cli.commands.estimate import cmd_estimate
from regdim.cli.commands.formula import cmd_formula
from regdim.cli.commands.sweep import cmd_sweep_epsilon

__all__ = ["cmd_estimate", "cmd_formula", "cmd_sweep_epsilon"]
