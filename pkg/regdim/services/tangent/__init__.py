"""Similarity pushforwards and the lens counterexample measure."""
from .pushforward import PushforwardModel, pushforward
from .lens import LensMeasure, build_lens_measure, nondoubling_ratios, lens_doubling_ratios

__all__ = [
    "PushforwardModel", "pushforward",
    "LensMeasure", "build_lens_measure", "nondoubling_ratios", "lens_doubling_ratios",
]
