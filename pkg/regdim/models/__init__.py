"""Result and configuration models."""
from .estimates import (
    ScaleWitness, GapValue, DimEstimate, TauPoint, LqSpectrumEstimate,
    ChainViolation, ChainReport, TelescopeReport, DoublingWitness,
    NonDoublingRatio, DoublingRatioSample,
)
from .formulas import FormulaValue, CarpetDimensions

__all__ = [
    # Estimates
    "ScaleWitness", "GapValue", "DimEstimate", "TauPoint", "LqSpectrumEstimate",
    "ChainViolation", "ChainReport", "TelescopeReport",
    # Witnesses
    "DoublingWitness", "NonDoublingRatio", "DoublingRatioSample",
    # Formulas
    "FormulaValue", "CarpetDimensions",
]
