"""Core geometry, intervals, grids and the measure-model capability."""
from .config import Settings, get_settings, settings
from .errors import (
    RegDimError,
    InvalidArgumentError,
    PreconditionError,
    NoDataError,
    ConfigError,
)
from .geometry import (
    Point,
    SymbolicPoint,
    SimilarityMap,
    apply_similarity,
    invert_similarity,
    compose_similarities,
)
from .intervals import MassInterval, sum_intervals
from .grid import ScaleGrid
from .measure import MeasureModel, DEFAULT_TOL, check_probabilities
from .diagnostics import ScanDiagnostics
from .parallel import parallel_map

__all__ = [
    # Configuration
    "Settings", "get_settings", "settings",
    # Errors
    "RegDimError", "InvalidArgumentError", "PreconditionError", "NoDataError", "ConfigError",
    # Geometry
    "Point", "SymbolicPoint", "SimilarityMap",
    "apply_similarity", "invert_similarity", "compose_similarities",
    # Masses and scales
    "MassInterval", "sum_intervals", "ScaleGrid",
    "MeasureModel", "DEFAULT_TOL", "check_probabilities",
    # Execution
    "ScanDiagnostics", "parallel_map",
]
