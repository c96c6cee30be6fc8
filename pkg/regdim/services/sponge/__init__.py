"""Self-affine measures on Bedford-McMullen sponges."""
from .system import (
    DepthVector,
    SpongeSystem,
    build_sponge,
    check_vssc,
    depth_vector,
    approx_cube_mass,
    coding_map,
    code_from_point,
    enumerate_cubes,
    dim_reg_formula_sponge,
    scale_constraints,
    extremal_code,
    cube_ratio_factors,
)
from .model import BallMode, SpongeModel, ball_mass_sponge, log_cube_mass
from .badcarpet import (
    epsilon_carpet,
    three_axis_sponge,
    badcarpet_family,
    badcarpet_phase_transition,
    assouad_formula_epsilon_carpet,
    dim_reg_epsilon,
    sup_local_epsilon,
    t_epsilon,
)

__all__ = [
    # Systems
    "DepthVector", "SpongeSystem", "build_sponge", "check_vssc", "depth_vector",
    "approx_cube_mass", "coding_map", "code_from_point", "enumerate_cubes",
    # Closed forms
    "dim_reg_formula_sponge", "scale_constraints", "extremal_code", "cube_ratio_factors",
    # Model
    "BallMode", "SpongeModel", "ball_mass_sponge", "log_cube_mass",
    # Epsilon carpet
    "epsilon_carpet", "three_axis_sponge", "badcarpet_family", "badcarpet_phase_transition",
    "assouad_formula_epsilon_carpet", "dim_reg_epsilon", "sup_local_epsilon", "t_epsilon",
]
