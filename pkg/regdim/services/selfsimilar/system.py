"""
Self-Similar Systems

Iterated function systems of similarities with probability weights: hull
construction, strong-separation certification, exact cylinder arithmetic,
the coding map and closed-form dimension values.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import reduce
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from regdim.core.config import settings
from regdim.core.errors import InvalidArgumentError, PreconditionError
from regdim.core.geometry import Point, SimilarityMap, SymbolicPoint, apply_similarity, compose_similarities
from regdim.core.measure import check_probabilities

logger = logging.getLogger(__name__)

Real = Union[float, int, Fraction]

HULL_INFLATION = 1e-9
LOG_SPACE_DEPTH = 40
MAX_SSC_PAIRS = 200_000


class SSCKind(str, Enum):
    """Outcome of a strong-separation check."""
    CERTIFIED = "certified"
    UNKNOWN = "unknown"
    VIOLATED = "violated"


@dataclass(frozen=True)
class SSCStatus:
    """Separation status; delta_lower > 0 bounds the distance between first-level pieces."""
    kind: SSCKind = SSCKind.UNKNOWN
    delta_lower: Optional[float] = None
    min_distance: Optional[float] = None
    depth: int = 0

    @property
    def certified(self) -> bool:
        return self.kind == SSCKind.CERTIFIED


@dataclass(frozen=True, eq=False)
class SelfSimilarSystem:
    """Similarity maps S_i with weights p_i and an invariant bounding ball (hull)."""

    maps: Tuple[SimilarityMap, ...]
    probs: Tuple[Real, ...]
    hull_center: Point
    hull_radius: float
    ssc_status: SSCStatus = field(default_factory=SSCStatus)
    open_set: bool = False

    def __post_init__(self):
        d = self.dim
        ratios = np.array([float(m.ratio) for m in self.maps])
        qs = np.stack([m.orthogonal for m in self.maps])
        c = self.hull_center.as_array()
        # displacement of each first-level hull center from the parent center
        shifts = np.stack([apply_similarity(m, self.hull_center).as_array() - c for m in self.maps])
        for arr in (ratios, qs, shifts):
            arr.setflags(write=False)
        object.__setattr__(self, "_ratios", ratios)
        object.__setattr__(self, "_qs", qs.reshape(len(self.maps), d, d))
        object.__setattr__(self, "_shifts", shifts.reshape(len(self.maps), d))
        object.__setattr__(self, "_probs", np.array([float(p) for p in self.probs]))

    @property
    def dim(self) -> int:
        return self.hull_center.dim

    @property
    def size(self) -> int:
        return len(self.maps)

    @property
    def ratios(self) -> np.ndarray:
        return self._ratios

    @property
    def prob_array(self) -> np.ndarray:
        return self._probs

    @property
    def exact(self) -> bool:
        """True when weights and ratios are rationals."""
        return all(isinstance(v, (int, Fraction)) for v in self.probs) and all(
            isinstance(m.ratio, (int, Fraction)) for m in self.maps
        )

    def certified(self, max_depth: Optional[int] = None) -> "SelfSimilarSystem":
        """Copy carrying the result of check_ssc."""
        return replace(self, ssc_status=check_ssc(self, max_depth or settings.ssc_max_depth))

    def check_digit(self, digit: int) -> None:
        if not isinstance(digit, (int, np.integer)) or not 0 <= digit < self.size:
            raise InvalidArgumentError(f"digit {digit!r} outside alphabet 0..{self.size - 1}")


@dataclass(frozen=True)
class Cylinder:
    """Image of the hull under S_word, with its exact mass."""
    word: Tuple[int, ...]
    mass: Real
    log_mass: float
    ratio: Real
    center: Point
    radius: float


def build_selfsimilar(
    maps: Sequence[SimilarityMap],
    probs: Sequence[Real],
    open_set: bool = False,
) -> SelfSimilarSystem:
    """
    Build a self-similar system with an invariant hull.

    Args:
        maps: Contracting similarities, all on the same R^d
        probs: Positive weights summing to one
        open_set: Declare the open set condition for touching systems

    Returns:
        System with ssc_status Unknown (run check_ssc to certify)
    """
    maps, probs = tuple(maps), tuple(probs)
    if not maps:
        raise InvalidArgumentError("a self-similar system needs at least one map")
    if len(maps) != len(probs):
        raise InvalidArgumentError(f"{len(maps)} maps but {len(probs)} probabilities")
    d = maps[0].dim
    if any(m.dim != d for m in maps):
        raise InvalidArgumentError("all maps must act on the same R^d")
    for i, m in enumerate(maps):
        if not 0 < m.ratio < 1:
            raise InvalidArgumentError(f"map {i} has ratio {m.ratio}, expected a value in (0, 1)")
    check_probabilities(probs)

    fixed = np.stack([m.fixed_point().as_array() for m in maps])
    center = (fixed.min(axis=0) + fixed.max(axis=0)) / 2.0
    c_max = max(float(m.ratio) for m in maps)
    spread = max(
        float(np.linalg.norm(m.translation.as_array() - (np.eye(d) - m.linear) @ center)) for m in maps
    )
    radius = spread / (1.0 - c_max)
    radius = radius * (1.0 + HULL_INFLATION) + HULL_INFLATION

    system = SelfSimilarSystem(maps, probs, Point.from_array(center), radius, open_set=open_set)
    for i, m in enumerate(maps):
        image = apply_similarity(m, system.hull_center)
        if image.distance(system.hull_center) + float(m.ratio) * radius > radius + 1e-12:
            raise InvalidArgumentError(f"hull is not invariant under map {i}")
    logger.debug(f"Built self-similar system: {len(maps)} maps on R^{d}, hull radius {radius:.6g}")
    return system


def check_ssc(system: SelfSimilarSystem, max_depth: int) -> SSCStatus:
    """
    Certify the strong separation condition by refining pairs of hull images.

    Pairs of cylinders from distinct first-level branches are refined while
    their bounding balls may overlap or may realize the minimal distance.
    Certified(delta) is returned when every remaining pair is separated.
    """
    if max_depth < 1:
        raise InvalidArgumentError("max_depth must be at least 1")
    n, d = system.size, system.dim
    if n == 1:
        return SSCStatus(SSCKind.CERTIFIED, delta_lower=math.inf, min_distance=math.inf, depth=0)

    fixed = np.stack([m.fixed_point().as_array() for m in system.maps])
    for i in range(n):
        for j in range(i + 1, n):
            if np.linalg.norm(fixed[i] - fixed[j]) <= 1e-12:
                logger.debug(f"Maps {i} and {j} share a fixed point")
                return SSCStatus(SSCKind.VIOLATED, delta_lower=0.0, min_distance=0.0, depth=0)

    rho0 = system.hull_radius
    c0 = system.hull_center.as_array()
    anchor = fixed[0] - c0
    ratios, qs, shifts = system.ratios, system._qs, system._shifts

    def children(centers, rats, mats):
        offs = np.einsum("kab,nb->kna", mats, shifts)
        new_centers = centers[:, None, :] + rats[:, None, None] * offs
        new_mats = np.einsum("kab,nbc->knac", mats, qs)
        new_rats = rats[:, None] * ratios[None, :]
        return new_centers, new_rats, new_mats

    first_c, first_r, first_q = children(c0[None, :], np.ones(1), np.eye(d)[None])
    first_c, first_r, first_q = first_c[0], first_r[0], first_q[0]
    ia, ib = np.triu_indices(n, k=1)
    a_c, a_r, a_q = first_c[ia], first_r[ia], first_q[ia]
    b_c, b_r, b_q = first_c[ib], first_r[ib], first_q[ib]

    dropped_min = math.inf
    separation = None
    depth = 1
    while True:
        separation = np.linalg.norm(a_c - b_c, axis=1) - (a_r + b_r) * rho0
        rep_a = a_c + a_r[:, None] * np.einsum("kab,b->ka", a_q, anchor)
        rep_b = b_c + b_r[:, None] * np.einsum("kab,b->ka", b_q, anchor)
        upper = float(np.min(np.linalg.norm(rep_a - rep_b, axis=1)))
        keep = separation < upper
        if np.any(~keep):
            dropped_min = min(dropped_min, float(np.min(separation[~keep])))
        lower = min(dropped_min, float(np.min(separation[keep]))) if np.any(keep) else dropped_min
        tight = lower >= upper * (1.0 - 1e-9)
        if depth >= max_depth or tight or not np.any(keep) or int(keep.sum()) * n * n > MAX_SSC_PAIRS:
            break
        a_c, a_r, a_q = a_c[keep], a_r[keep], a_q[keep]
        b_c, b_r, b_q = b_c[keep], b_r[keep], b_q[keep]
        k = len(a_r)
        ac, ar, aq = children(a_c, a_r, a_q)
        bc, br, bq = children(b_c, b_r, b_q)
        # all child pairs (s, t) of each kept pair
        a_c = np.repeat(ac, n, axis=1).reshape(k * n * n, d)
        a_r = np.repeat(ar, n, axis=1).reshape(k * n * n)
        a_q = np.repeat(aq, n, axis=1).reshape(k * n * n, d, d)
        b_c = np.tile(bc, (1, n, 1)).reshape(k * n * n, d)
        b_r = np.tile(br, (1, n)).reshape(k * n * n)
        b_q = np.tile(bq, (1, n, 1, 1)).reshape(k * n * n, d, d)
        depth += 1

    if lower > 0:
        logger.debug(f"SSC certified at depth {depth} with delta >= {lower:.6g}")
        return SSCStatus(SSCKind.CERTIFIED, delta_lower=lower, min_distance=upper, depth=depth)
    gap = float(max(0.0, np.min(separation)))
    logger.debug(f"SSC not certified by depth {depth}; smallest hull gap {gap:.3g}")
    return SSCStatus(SSCKind.UNKNOWN, delta_lower=None, min_distance=gap, depth=depth)


def require_certified(system: SelfSimilarSystem) -> None:
    if not (system.ssc_status.certified or system.open_set):
        raise PreconditionError(
            f"ball masses need a certified separation condition (status: {system.ssc_status.kind.value})"
        )


def cylinder(system: SelfSimilarSystem, word: Sequence[int]) -> Cylinder:
    """Cylinder [word] with exact mass (rational when the weights are)."""
    word = tuple(int(w) for w in word)
    for w in word:
        system.check_digit(w)
    log_mass = sum(math.log(float(system.probs[w])) for w in word)
    if system.exact or len(word) <= LOG_SPACE_DEPTH:
        mass = reduce(lambda acc, w: acc * system.probs[w], word, Fraction(1) if system.exact else 1.0)
    else:
        mass = math.exp(log_mass)
    ratio = reduce(lambda acc, w: acc * system.maps[w].ratio, word, Fraction(1) if system.exact else 1.0)
    composed = _compose_word(system, word)
    center = apply_similarity(composed, system.hull_center)
    return Cylinder(word, mass, log_mass, ratio, center, float(ratio) * system.hull_radius)


def _compose_word(system: SelfSimilarSystem, word: Sequence[int]) -> SimilarityMap:
    return reduce(
        lambda acc, w: compose_similarities(acc, system.maps[w]),
        word,
        SimilarityMap.identity(system.dim),
    )


def point_from_code(system: SelfSimilarSystem, preperiod: Sequence[int], period: Sequence[int]) -> Point:
    """Coding map of the word preperiod + period repeated: S_pre(fixed point of S_period)."""
    preperiod, period = tuple(preperiod), tuple(period)
    if not period:
        raise InvalidArgumentError("period must be nonempty")
    for w in preperiod + period:
        system.check_digit(w)
    y = _compose_word(system, period).fixed_point()
    x = apply_similarity(_compose_word(system, preperiod), y)
    return Point(x.coords, SymbolicPoint(preperiod, period))


def extremal_digit(system: SelfSimilarSystem) -> int:
    """Digit maximizing log p_i / log c_i (first index on ties)."""
    values = [math.log(float(p)) / math.log(float(m.ratio)) for p, m in zip(system.probs, system.maps)]
    return int(np.argmax(values))


def dim_reg_formula_ss(system: SelfSimilarSystem) -> float:
    """max_i log p_i / log c_i, valid under the strong separation condition."""
    if not system.ssc_status.certified:
        raise PreconditionError("the closed form needs a certified strong separation condition")
    return max(math.log(float(p)) / math.log(float(m.ratio)) for p, m in zip(system.probs, system.maps))


def moran_exponent(ratios: Sequence[Real]) -> float:
    """The s solving sum_i c_i^s = 1."""
    cs = [float(c) for c in ratios]
    if any(not 0 < c < 1 for c in cs):
        raise InvalidArgumentError("Moran ratios must lie in (0, 1)")
    if len(cs) == 1:
        return 0.0
    f = lambda s: sum(c ** s for c in cs) - 1.0
    hi = 1.0
    while f(hi) > 0:
        hi *= 2.0
    return float(brentq(f, 0.0, hi, xtol=1e-14))


def ahlfors_probs(ratios: Sequence[Real]) -> List[float]:
    """Weights p_i = c_i^s making the measure Ahlfors-David s-regular."""
    s = moran_exponent(ratios)
    probs = [float(c) ** s for c in ratios]
    total = sum(probs)
    return [p / total for p in probs]


def tau_formula_ss(system: SelfSimilarSystem, q: float) -> float:
    """L^q-spectrum: the tau solving sum_i p_i^q c_i^(-tau) = 1."""
    ps = [float(p) for p in system.probs]
    cs = [float(m.ratio) for m in system.maps]
    f = lambda t: sum(p ** q * c ** (-t) for p, c in zip(ps, cs)) - 1.0
    lo, hi = -1.0, 1.0
    while f(lo) > 0:
        lo *= 2.0
    while f(hi) < 0:
        hi *= 2.0
    return float(brentq(f, lo, hi, xtol=1e-14))


# ===========================================
# Gallery
# ===========================================

def cantor_system(probs: Sequence[Real] = (Fraction(1, 2), Fraction(1, 2))) -> SelfSimilarSystem:
    """Middle-third Cantor measure with maps x/3 and x/3 + 2/3."""
    maps = [
        SimilarityMap.homothety(Fraction(1, 3), [0]),
        SimilarityMap.homothety(Fraction(1, 3), [Fraction(2, 3)]),
    ]
    return build_selfsimilar(maps, probs).certified()


def lebesgue_interval_system() -> SelfSimilarSystem:
    """Lebesgue measure on [0,1] from the touching maps x/2 and x/2 + 1/2."""
    maps = [
        SimilarityMap.homothety(Fraction(1, 2), [0]),
        SimilarityMap.homothety(Fraction(1, 2), [Fraction(1, 2)]),
    ]
    return build_selfsimilar(maps, [Fraction(1, 2), Fraction(1, 2)], open_set=True)


def ahlfors_system(ratios: Sequence[Real] = (Fraction(1, 2), Fraction(1, 4))) -> SelfSimilarSystem:
    """Two maps x -> c_1 x and x -> c_2 x + 1 - c_2 with p_i = c_i^s."""
    c1, c2 = ratios
    maps = [
        SimilarityMap.homothety(c1, [0]),
        SimilarityMap.homothety(c2, [1 - c2]),
    ]
    return build_selfsimilar(maps, ahlfors_probs(ratios)).certified()


def planar_gasket_system(side: float = 1.0, ratio: Real = Fraction(1, 4)) -> SelfSimilarSystem:
    """Three maps of the given ratio fixing the vertices of an equilateral triangle."""
    vertices = [(0.0, 0.0), (side, 0.0), (side / 2.0, side * math.sqrt(3.0) / 2.0)]
    c = float(ratio)
    maps = [SimilarityMap.homothety(ratio, [(1.0 - c) * vx, (1.0 - c) * vy]) for vx, vy in vertices]
    return build_selfsimilar(maps, [Fraction(1, 3)] * 3).certified()
