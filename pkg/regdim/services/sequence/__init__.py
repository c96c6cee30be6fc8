"""Point-mass measures on convergent sequences."""
from .measure import (
    RateKind,
    Rate,
    Poly,
    Exp,
    SequenceMeasure,
    build_sequence_measure,
    atom_index,
    index_bounds,
    ball_mass_seq,
    dim_reg_formula_seq,
    local_dim_formula_seq,
    assouad_formula_seq,
    doubling_violation_witness,
)
from .model import SequenceModel

__all__ = [
    # Measures
    "RateKind", "Rate", "Poly", "Exp", "SequenceMeasure", "build_sequence_measure",
    # Ball masses
    "atom_index", "index_bounds", "ball_mass_seq",
    # Closed forms
    "dim_reg_formula_seq", "local_dim_formula_seq", "assouad_formula_seq", "doubling_violation_witness",
    # Model
    "SequenceModel",
]
