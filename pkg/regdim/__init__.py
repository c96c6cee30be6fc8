"""
regdim - certified ball masses and regularity dimensions of fractal measures.
"""

__version__ = "1.0.0"
__app_name__ = "regdim"
