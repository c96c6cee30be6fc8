"""
Bedford-McMullen Sponges

Digit systems on the grid prod_l {0..n_l-1} with n_1 < ... < n_d, their
conditional digit probabilities, depth vectors, approximate cubes and the
closed-form upper regularity dimension.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Dict, Iterator, List, Mapping, Sequence, Tuple, Union

from regdim.core.errors import InvalidArgumentError, PreconditionError
from regdim.core.geometry import Point, SymbolicPoint
from regdim.core.measure import check_probabilities

logger = logging.getLogger(__name__)

Real = Union[float, int, Fraction]
Digit = Tuple[int, ...]

LOG_SPACE_FACTORS = 40
# floats within this relative distance of n^-k are treated as exactly n^-k
POWER_SNAP = 1e-12


@dataclass(frozen=True)
class DepthVector:
    """Per-axis depths k_l(r) with n_l^-(k_l+1) < r <= n_l^-k_l."""
    ks: Tuple[int, ...]

    def __getitem__(self, l: int) -> int:
        return self.ks[l]

    def __iter__(self):
        return iter(self.ks)

    def __len__(self) -> int:
        return len(self.ks)


@dataclass(frozen=True, eq=False)
class SpongeSystem:
    """Digit set I with weights and the per-axis conditional tables."""

    d: int
    bases: Tuple[int, ...]
    digits: Tuple[Digit, ...]
    probs: Mapping[Digit, Real]
    conditionals: Tuple[Dict[Digit, Real], ...]
    marginals: Tuple[Dict[Digit, Real], ...]

    @property
    def exact(self) -> bool:
        return all(isinstance(p, (int, Fraction)) for p in self.probs.values())

    @property
    def filler(self) -> Digit:
        """Lexicographically smallest digit."""
        return self.digits[0]

    def conditional(self, l: int, digit: Digit) -> Real:
        """p_l(digit): probability of the l-th coordinate given the first l-1 (l is 0-based)."""
        return self.conditionals[l][digit[: l + 1]]

    def log_conditional(self, l: int, digit: Digit) -> float:
        return math.log(float(self.conditional(l, digit)))

    def min_conditional(self, l: int) -> Real:
        return min(self.conditional(l, i) for i in self.digits)

    def argmin_digit(self, l: int) -> Digit:
        """Digit attaining the smallest p_l, lowest lexicographic on ties."""
        return min(self.digits, key=lambda i: (self.conditional(l, i), i))

    def check_code(self, omega: SymbolicPoint) -> None:
        bad = [i for i in omega.digits() if i not in self.probs]
        if bad:
            raise InvalidArgumentError(f"code uses digits outside I: {bad[:3]}")


def build_sponge(
    d: int,
    bases: Sequence[int],
    digits: Sequence[Sequence[int]],
    probs: Sequence[Real],
) -> SpongeSystem:
    """
    Build a sponge system and its conditional probability tables.

    Args:
        d: Ambient dimension (at least 2)
        bases: Strictly increasing integers n_1 < ... < n_d, each > 1
        digits: Digit set I, each digit a d-tuple with 0 <= i_l < n_l
        probs: Positive weights, one per digit, summing to one

    Returns:
        SpongeSystem with p_l tables for every realized prefix
    """
    bases = tuple(int(n) for n in bases)
    if d < 2:
        raise InvalidArgumentError(f"sponges need d >= 2, got {d}")
    if len(bases) != d:
        raise InvalidArgumentError(f"expected {d} bases, got {len(bases)}")
    if any(n <= 1 for n in bases) or any(a >= b for a, b in zip(bases, bases[1:])):
        raise InvalidArgumentError(f"bases must be strictly increasing integers > 1, got {bases}")
    digit_list = [tuple(int(v) for v in i) for i in digits]
    if not digit_list:
        raise InvalidArgumentError("digit set must be nonempty")
    if len(set(digit_list)) != len(digit_list):
        raise InvalidArgumentError("digit set contains duplicates")
    if len(digit_list) != len(probs):
        raise InvalidArgumentError(f"{len(digit_list)} digits but {len(probs)} probabilities")
    for i in digit_list:
        if len(i) != d or any(not 0 <= v < n for v, n in zip(i, bases)):
            raise InvalidArgumentError(f"digit {i} outside the grid {bases}")
    check_probabilities(probs)

    prob_map = dict(zip(digit_list, probs))
    zero = Fraction(0) if all(isinstance(p, (int, Fraction)) for p in probs) else 0.0
    marginals: List[Dict[Digit, Real]] = []
    for l in range(d + 1):
        table: Dict[Digit, Real] = {}
        for i, p in prob_map.items():
            table[i[:l]] = table.get(i[:l], zero) + p
        marginals.append(table)
    # conditioning on the empty prefix divides by the total mass 1
    conditionals = tuple(
        {prefix: mass / marginals[l][prefix[:l]] for prefix, mass in marginals[l + 1].items()}
        for l in range(d)
    )
    system = SpongeSystem(
        d=d,
        bases=bases,
        digits=tuple(sorted(digit_list)),
        probs=prob_map,
        conditionals=conditionals,
        marginals=tuple(marginals[1:]),
    )
    logger.debug(f"Built sponge on bases {bases} with {len(digit_list)} digits")
    return system


def check_vssc(system: SpongeSystem) -> bool:
    """Digits first differing on axis l must differ there by more than 1."""
    for a, b in itertools.combinations(system.digits, 2):
        l = next(k for k in range(system.d) if a[k] != b[k])
        if abs(a[l] - b[l]) <= 1:
            return False
    return True


def require_vssc(system: SpongeSystem) -> None:
    if not check_vssc(system):
        raise PreconditionError("the sponge digit set fails the very strong separation condition")


@lru_cache(maxsize=65536)
def _axis_depth(n: int, r: Real) -> int:
    exact = Fraction(r)
    k = max(0, int(math.floor(-math.log(float(r)) / math.log(n))) - 1)
    while n ** (k + 1) * exact <= 1:
        k += 1
    while k > 0 and n ** k * exact > 1:
        k -= 1
    if isinstance(r, float) and abs(float(n ** (k + 1) * exact) - 1.0) <= POWER_SNAP:
        k += 1
    return k


def depth_vector(system: SpongeSystem, r: Real) -> DepthVector:
    """Depths k_l(r), by integer comparison against exact powers of n_l."""
    if not 0 < r <= 1:
        raise InvalidArgumentError(f"depth vectors need r in (0, 1], got {r}")
    return DepthVector(tuple(_axis_depth(n, r) for n in system.bases))


def approx_cube_mass(system: SpongeSystem, omega: SymbolicPoint, r: Real) -> Real:
    """
    Mass of the approximate cube Q(omega, r).

    prod_l prod_{j < k_l(r)} p_l(sigma^j omega); a Fraction when the weights are
    rational, otherwise a float (summed in log space beyond 40 factors).
    """
    system.check_code(omega)
    ks = depth_vector(system, r)
    factors = [system.conditional(l, omega.digit(t)) for l in range(system.d) for t in range(1, ks[l] + 1)]
    if system.exact:
        return reduce(lambda acc, f: acc * f, factors, Fraction(1))
    if len(factors) <= LOG_SPACE_FACTORS:
        return reduce(lambda acc, f: acc * float(f), factors, 1.0)
    return math.exp(sum(math.log(float(f)) for f in factors))


def coding_map(system: SpongeSystem, omega: SymbolicPoint) -> Point:
    """pi(omega): coordinate l is the base-n_l expansion of the l-th digit stream."""
    system.check_code(omega)
    pre, per = omega.preperiod, omega.period
    coords = []
    for l, n in enumerate(system.bases):
        head = sum(Fraction(i[l], n ** t) for t, i in enumerate(pre, start=1))
        cycle = sum(Fraction(i[l], n ** t) for t, i in enumerate(per, start=1))
        tail = cycle / (1 - Fraction(1, n ** len(per))) / n ** len(pre)
        coords.append(float(head + tail))
    return Point(tuple(coords), omega)


def code_from_point(system: SpongeSystem, point: Point, depth: int) -> SymbolicPoint:
    """Symbolic address of a point: its code if it carries one, else its first `depth` digits."""
    if point.code is not None:
        system.check_code(point.code)
        return point.code
    if point.dim != system.d:
        raise InvalidArgumentError(f"point of dimension {point.dim} given to a sponge in R^{system.d}")
    coords = [Fraction(c) for c in point.coords]
    digits = []
    for t in range(1, depth + 1):
        digit = tuple(int(math.floor(c * n ** t)) % n for c, n in zip(coords, system.bases))
        if digit not in system.probs:
            raise InvalidArgumentError(f"point {point.coords} leaves the sponge at digit position {t}")
        digits.append(digit)
    return SymbolicPoint(tuple(digits), (system.filler,))


def enumerate_cubes(system: SpongeSystem, ks: DepthVector) -> Iterator[Tuple[Tuple[Digit, ...], Real, SymbolicPoint]]:
    """
    Every approximate cube at depth vector ks.

    Yields (projected digit sequence, exact mass, representative code). At
    position t only the axes l with k_l >= t are constrained, so a cube is a
    sequence of digit projections onto the first m(t) coordinates.
    """
    k1 = ks[0]
    axes = [sum(1 for k in ks if k >= t) for t in range(1, k1 + 1)]
    choices = {}
    for m in set(axes):
        proj = sorted(system.marginals[m - 1])
        choices[m] = [(prefix, system.marginals[m - 1][prefix], _completion(system, prefix)) for prefix in proj]
    one = Fraction(1) if system.exact else 1.0
    for combo in itertools.product(*(choices[m] for m in axes)):
        mass = reduce(lambda acc, c: acc * c[1], combo, one)
        code = SymbolicPoint(tuple(c[2] for c in combo), (system.filler,))
        yield tuple(c[0] for c in combo), mass, code


def _completion(system: SpongeSystem, prefix: Digit) -> Digit:
    return next(i for i in system.digits if i[: len(prefix)] == prefix)


def dim_reg_formula_sponge(system: SpongeSystem) -> float:
    """sum_l max_i -log p_l(i) / log n_l."""
    require_vssc(system)
    return sum(-math.log(float(system.min_conditional(l))) / math.log(n) for l, n in enumerate(system.bases))


def scale_constraints(system: SpongeSystem, r: float, R: float) -> List[str]:
    """Failing scale-separation inequalities for the pair (r, R); empty when all hold."""
    failures = []
    bases = system.bases
    if not r < R / bases[-1]:
        failures.append(f"r < R/n_d fails: r={r:.6g}, R/n_d={R / bases[-1]:.6g}")
    for l in range(system.d - 1):
        exponent = math.log(bases[l + 1]) / math.log(bases[l])
        lhs = exponent * (math.log(bases[l]) + math.log(R))
        if not lhs < math.log(r):
            failures.append(f"(n_{l + 1} R)^(log n_{l + 2}/log n_{l + 1}) < r fails for l={l + 1}")
    return failures


def extremal_code(system: SpongeSystem, r: float, R: float) -> SymbolicPoint:
    """
    Code realizing the extremal cube-mass ratio between scales R and r.

    Positions k_l(R)+1 .. k_l(r) carry the digit minimizing p_l; every other
    position carries the filler digit.
    """
    if system.d < 2:
        raise InvalidArgumentError("extremal codes need d >= 2")
    if not 0 < r < R <= 1:
        raise InvalidArgumentError(f"need 0 < r < R <= 1, got r={r}, R={R}")
    failures = scale_constraints(system, r, R)
    if failures:
        raise InvalidArgumentError("; ".join(failures))
    kR, kr = depth_vector(system, R), depth_vector(system, r)
    for l in range(system.d):
        if not kR[l] < kr[l]:
            raise InvalidArgumentError(f"empty block on axis {l + 1}: k(R)={kR[l]}, k(r)={kr[l]}")
    for l in range(system.d - 1):
        if not kr[l + 1] <= kR[l]:
            raise InvalidArgumentError(
                f"blocks overlap: k_{l + 2}(r)={kr[l + 1]} exceeds k_{l + 1}(R)={kR[l]}"
            )
    digits = []
    for t in range(1, kr[0] + 1):
        block = next((l for l in range(system.d) if kR[l] < t <= kr[l]), None)
        digits.append(system.argmin_digit(block) if block is not None else system.filler)
    return SymbolicPoint(tuple(digits), (system.filler,))


def cube_ratio_factors(system: SpongeSystem, omega: SymbolicPoint, r: Real, R: Real) -> List[Real]:
    """Conditionals p_l(sigma^j omega) for k_l(R) <= j < k_l(r); their product inverts the cube-mass ratio."""
    kR, kr = depth_vector(system, R), depth_vector(system, r)
    return [
        system.conditional(l, omega.digit(j + 1))
        for l in range(system.d)
        for j in range(kR[l], kr[l])
    ]
