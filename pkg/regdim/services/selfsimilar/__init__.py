"""Self-similar measures under the strong separation condition."""
from .system import (
    SSCKind,
    SSCStatus,
    SelfSimilarSystem,
    Cylinder,
    build_selfsimilar,
    check_ssc,
    cylinder,
    point_from_code,
    extremal_digit,
    dim_reg_formula_ss,
    tau_formula_ss,
    moran_exponent,
    ahlfors_probs,
    cantor_system,
    lebesgue_interval_system,
    ahlfors_system,
    planar_gasket_system,
)
from .model import SelfSimilarModel, ball_mass_ss

__all__ = [
    # Systems
    "SSCKind", "SSCStatus", "SelfSimilarSystem", "Cylinder",
    "build_selfsimilar", "check_ssc", "cylinder", "point_from_code",
    # Closed forms
    "extremal_digit", "dim_reg_formula_ss", "tau_formula_ss", "moran_exponent", "ahlfors_probs",
    # Gallery
    "cantor_system", "lebesgue_interval_system", "ahlfors_system", "planar_gasket_system",
    # Model
    "SelfSimilarModel", "ball_mass_ss",
]
