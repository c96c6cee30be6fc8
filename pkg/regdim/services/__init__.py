"""Measure families and the estimators that run over them."""
