"""Estimators over any MeasureModel."""
from .regularity import (
    estimate_upper_regularity,
    estimate_local_dim_upper,
    doubling_constant,
    telescoping_ratios,
)
from .spectrum import (
    NetMasses,
    net_masses,
    greedy_packing,
    packing_sum,
    log_packing_sum,
    estimate_tau,
    estimate_T,
)
from .assouad import separated_net, estimate_assouad_support
from .chain import verify_dimension_chain

__all__ = [
    # Regularity
    "estimate_upper_regularity", "estimate_local_dim_upper", "doubling_constant", "telescoping_ratios",
    # L^q spectrum
    "NetMasses", "net_masses", "greedy_packing", "packing_sum", "log_packing_sum", "estimate_tau", "estimate_T",
    # Support
    "separated_net", "estimate_assouad_support",
    # Chain
    "verify_dimension_chain",
]
