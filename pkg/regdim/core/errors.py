"""Exception hierarchy shared by models, estimators and the CLI."""

from typing import Optional


class RegDimError(Exception):
    """Base class for all regdim errors."""


class InvalidArgumentError(RegDimError, ValueError):
    """An argument is out of range or inconsistent with the model."""


class PreconditionError(RegDimError):
    """The operation needs a certified state the model does not have."""


class NoDataError(RegDimError):
    """Nothing left to estimate from (empty nets, all triples skipped, zero mass)."""


class ConfigError(RegDimError):
    """A run configuration could not be loaded or validated."""

    def __init__(self, message: str, key: Optional[str] = None):
        self.key = key
        super().__init__(f"{key}: {message}" if key else message)
