"""
Epsilon Carpet Family

The planar sponge on bases (3, 4) with digits (0,2), (2,1), (2,3) weighted
(eps, 1 - 3 eps / 2, eps / 2), and its four dimension curves: upper
regularity, Assouad, supremal local dimension and the L^q asymptote T.
"""

import math
from fractions import Fraction
from typing import Union

from scipy.optimize import brentq

from regdim.core.errors import InvalidArgumentError
from regdim.models.formulas import CarpetDimensions
from regdim.services.sponge.system import SpongeSystem, build_sponge

Real = Union[float, Fraction]

CARPET_BASES = (3, 4)
CARPET_DIGITS = ((0, 2), (2, 1), (2, 3))


def _check_epsilon(epsilon: Real) -> None:
    if not 0 < epsilon <= Fraction(1, 2):
        raise InvalidArgumentError(f"epsilon must lie in (0, 1/2], got {epsilon}")


def epsilon_carpet(epsilon: Real) -> SpongeSystem:
    """Carpet with weights (eps, 1 - 3eps/2, eps/2); rational when epsilon is a Fraction."""
    _check_epsilon(epsilon)
    probs = [epsilon, 1 - 3 * epsilon / 2, epsilon / 2]
    return build_sponge(2, CARPET_BASES, CARPET_DIGITS, probs)


def three_axis_sponge() -> SpongeSystem:
    """Three-dimensional sponge on bases (3, 4, 5) with five uniformly weighted digits."""
    digits = [(0, 0, 0), (0, 2, 0), (2, 1, 1), (2, 3, 4), (0, 0, 4)]
    return build_sponge(3, (3, 4, 5), digits, [Fraction(1, 5)] * 5)


def assouad_formula_epsilon_carpet() -> float:
    """log 2 / log 3 + log 2 / log 4, independent of epsilon."""
    return math.log(2) / math.log(3) + math.log(2) / math.log(4)


def dim_reg_epsilon(epsilon: float) -> float:
    return -math.log(epsilon) / math.log(3) - math.log((epsilon / 2) / (1 - epsilon)) / math.log(4)


def t_epsilon(epsilon: float) -> float:
    return -math.log(epsilon) / math.log(3) + math.log(2) / math.log(4)


def _sup_local_branches(epsilon: float):
    first = -math.log(epsilon) / math.log(3)
    second = -math.log(1 - epsilon) / math.log(3) - math.log((epsilon / 2) / (1 - epsilon)) / math.log(4)
    return first, second


def sup_local_epsilon(epsilon: float) -> float:
    return max(_sup_local_branches(epsilon))


def badcarpet_family(epsilon: Real) -> CarpetDimensions:
    """The four dimension values of the epsilon carpet."""
    _check_epsilon(epsilon)
    eps = float(epsilon)
    first, second = _sup_local_branches(eps)
    return CarpetDimensions(
        epsilon=eps,
        dimreg=dim_reg_epsilon(eps),
        assouad=assouad_formula_epsilon_carpet(),
        sup_local=max(first, second),
        T=t_epsilon(eps),
        sup_local_branch=1 if first >= second else 2,
    )


def badcarpet_phase_transition() -> float:
    """Epsilon where the two supremal-local-dimension branches cross."""
    f = lambda e: _sup_local_branches(e)[0] - _sup_local_branches(e)[1]
    return float(brentq(f, 1e-6, 0.5, xtol=1e-14))
