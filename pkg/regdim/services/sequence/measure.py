"""
Sequence Measures

Point masses p(n) placed at x_n for a sequence x_n decreasing to 0.
Points and weights each decay polynomially (n^-lambda) or exponentially
(lambda^n). Ball masses are sums over an index range divided by the total
mass; exponential weights are summed in closed form, polynomial weights
from cached suffix sums plus certified tail bounds beyond N_max.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from regdim.core.config import settings
from regdim.core.errors import InvalidArgumentError, PreconditionError
from regdim.core.intervals import MassInterval
from regdim.models.estimates import DoublingWitness
from regdim.models.formulas import FormulaValue

logger = logging.getLogger(__name__)

MIN_N_MAX = 1000
# ranges shorter than this are summed term by term
DIRECT_SUM_LIMIT = 4096
EPS = float(np.finfo(float).eps)
# exponential points below exp(-700) are compared in log space
LOG_FLOOR = -700.0


class RateKind(str, Enum):
    POLY = "poly"
    EXP = "exp"


@dataclass(frozen=True)
class Rate:
    """Decay law n -> n^-param (POLY) or param^n (EXP)."""

    kind: RateKind
    param: float

    def __post_init__(self):
        object.__setattr__(self, "kind", RateKind(self.kind))
        object.__setattr__(self, "param", float(self.param))
        if self.kind == RateKind.POLY and not self.param > 0:
            raise InvalidArgumentError(f"polynomial rate needs a positive exponent, got {self.param}")
        if self.kind == RateKind.EXP and not 0 < self.param < 1:
            raise InvalidArgumentError(f"exponential rate needs a base in (0, 1), got {self.param}")

    @property
    def is_poly(self) -> bool:
        return self.kind == RateKind.POLY

    def log_value(self, n: float) -> float:
        if self.is_poly:
            return -self.param * math.log(n)
        return n * math.log(self.param)

    def value(self, n: int) -> float:
        if self.is_poly:
            return float(n) ** -self.param
        return self.param ** n

    def __str__(self) -> str:
        return f"{self.kind.value}({self.param:g})"


def Poly(param: float) -> Rate:
    return Rate(RateKind.POLY, param)


def Exp(param: float) -> Rate:
    return Rate(RateKind.EXP, param)


@dataclass(frozen=True, eq=False)
class SequenceMeasure:
    """Normalized point masses p(n) at x_n, n >= 1."""

    x_kind: Rate
    p_kind: Rate
    n_max: int
    normalizer: MassInterval
    suffix: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def is_mixed(self) -> bool:
        return self.x_kind.kind != self.p_kind.kind

    @property
    def alpha(self) -> float:
        """Bound on p(n) / p(n+1) over all n."""
        if self.p_kind.is_poly:
            return 2.0 ** self.p_kind.param
        return 1.0 / self.p_kind.param

    def point(self, n: int) -> float:
        return self.x_kind.value(n)

    def weight(self, n: int) -> float:
        return self.p_kind.value(n)

    def atom_mass(self, n: int) -> MassInterval:
        """Normalized mass of the atom at x_n."""
        return self._range_sum(n, n).divide(self.normalizer).clamped(1.0)

    def _range_sum(self, a: int, b: Optional[int]) -> MassInterval:
        """Unnormalized sum of p(n) for a <= n <= b (b None means infinity)."""
        if b is not None and b < a:
            return MassInterval.zero()
        if not self.p_kind.is_poly:
            return _geometric_sum(self.p_kind.param, a, b)
        return _poly_range_sum(self, a, b)


def _geometric_sum(w: float, a: int, b: Optional[int]) -> MassInterval:
    log_w = math.log(w)
    log_s = a * log_w - math.log1p(-w)
    if b is not None:
        log_s += math.log1p(-math.exp((b - a + 1) * log_w))
    return MassInterval.from_logs(log_s, log_s)


def _poly_tail(omega: float, a: int) -> Tuple[float, float]:
    """Bounds on sum_{n >= a} n^-omega from the trapezoid rule with a second-order correction."""
    a = float(a)
    integral = a ** (1.0 - omega) / (omega - 1.0)
    f = a ** -omega
    f1 = -omega * a ** (-omega - 1.0)
    f2 = omega * (omega + 1.0) * a ** (-omega - 2.0)
    lo = integral + 0.5 * f
    return lo, lo + (f2 - f1) / 12.0


def _direct_sum(omega: float, a: int, b: int) -> MassInterval:
    s = float(np.sum(np.arange(b, a - 1, -1, dtype=float) ** -omega))
    slack = (b - a + 2) * EPS * s
    return MassInterval(max(0.0, s - slack), s + slack)


def _poly_range_sum(m: SequenceMeasure, a: int, b: Optional[int]) -> MassInterval:
    omega = m.p_kind.param
    n_max = m.n_max
    if b is not None and b - a < DIRECT_SUM_LIMIT:
        return _direct_sum(omega, a, b)

    parts = MassInterval.zero()
    if a <= n_max:
        top = n_max if b is None else min(b, n_max)
        if top - a < DIRECT_SUM_LIMIT:
            parts = _direct_sum(omega, a, top)
        else:
            head = m.suffix[a] - m.suffix[top + 1]
            slack = n_max * EPS * m.suffix[a]
            parts = MassInterval(max(0.0, head - slack), head + slack)
        a = n_max + 1
        if b is not None and b <= n_max:
            return parts

    tail_lo, tail_hi = _poly_tail(omega, a)
    if b is not None:
        if b - a < DIRECT_SUM_LIMIT:
            return parts + _direct_sum(omega, a, b)
        cut_lo, cut_hi = _poly_tail(omega, b + 1)
        tail_lo, tail_hi = max(0.0, tail_lo - cut_hi), tail_hi - cut_lo
    return parts + MassInterval(tail_lo, tail_hi)


def build_sequence_measure(x_kind: Rate, p_kind: Rate, n_max: Optional[int] = None) -> SequenceMeasure:
    """
    Build the normalized measure with suffix sums of p(n) cached up to n_max.

    Polynomial weights need exponent omega > 1 to be summable.
    """
    n_max = int(settings.sequence_n_max if n_max is None else n_max)
    if n_max < MIN_N_MAX:
        raise InvalidArgumentError(f"n_max must be at least {MIN_N_MAX}, got {n_max}")
    if p_kind.is_poly and p_kind.param <= 1:
        raise InvalidArgumentError(f"weights n^-{p_kind.param:g} are not summable (need omega > 1)")

    if p_kind.is_poly:
        terms = np.arange(1, n_max + 1, dtype=float) ** -p_kind.param
        suffix = np.zeros(n_max + 2)
        # accumulate from the small end
        suffix[1:n_max + 1] = np.cumsum(terms[::-1])[::-1]
        head = MassInterval(suffix[1] * (1 - n_max * EPS), suffix[1] * (1 + n_max * EPS))
        lo, hi = _poly_tail(p_kind.param, n_max + 1)
        normalizer = head + MassInterval(lo, hi)
        measure = SequenceMeasure(x_kind, p_kind, n_max, normalizer, suffix)
    else:
        normalizer = _geometric_sum(p_kind.param, 1, None)
        measure = SequenceMeasure(x_kind, p_kind, n_max, normalizer)
    logger.debug(
        f"Sequence measure {x_kind}/{p_kind}: normalizer in [{normalizer.lo:.12g}, {normalizer.hi:.12g}]"
    )
    return measure


def _point_minus(m: SequenceMeasure, n: int, x: float) -> float:
    """x_n - x; exact for float inputs within a factor two of each other."""
    return m.point(n) - x


def _first_below(m: SequenceMeasure, y: float) -> int:
    """Closed-form guess for the smallest n with x_n < y (y > 0)."""
    if not y > 0:
        raise InvalidArgumentError(f"no atom lies below {y}")
    if y > m.point(1):
        return 1
    kind = m.x_kind
    if kind.is_poly:
        guess = math.floor(y ** (-1.0 / kind.param)) + 1
    else:
        guess = math.floor(math.log(y) / math.log(kind.param)) + 1
    return max(1, guess)


def _is_below(m: SequenceMeasure, n: int, x: float, r: float) -> bool:
    """x_n < x + r."""
    if not m.x_kind.is_poly and m.x_kind.log_value(n) < LOG_FLOOR:
        return True
    return _point_minus(m, n, x) < r


def _is_above(m: SequenceMeasure, n: int, x: float, r: float) -> bool:
    """x_n > x - r."""
    if not m.x_kind.is_poly and m.x_kind.log_value(n) < LOG_FLOOR:
        return x - r < 0
    return _point_minus(m, n, x) > -r


def atom_index(m: SequenceMeasure, x: float) -> Optional[int]:
    """n with x_n == x, if x is an atom."""
    if not 0 < x <= m.point(1):
        return None
    n = _first_below(m, x)
    for k in (n - 2, n - 1, n, n + 1):
        if k >= 1 and m.point(k) == x:
            return k
    return None


def index_bounds(m: SequenceMeasure, x: float, r: float) -> Tuple[Optional[int], int]:
    """
    Atoms of the open ball B(x, r) are x_n with k_under <= n <= k_over.

    k_over is the largest n with x_n > x - r (None when x - r <= 0, i.e.
    infinitely many); k_under is the smallest n with x_n < x + r.
    A ball left of the support (x + r <= 0) gives the empty range (0, 1).
    """
    if not r > 0:
        raise InvalidArgumentError(f"radius must be positive, got {r}")
    if x + r <= 0:
        return 0, 1

    k_under = 1 if x + r > m.point(1) else _first_below(m, x + r)
    while k_under > 1 and _is_below(m, k_under - 1, x, r):
        k_under -= 1
    while not _is_below(m, k_under, x, r):
        k_under += 1

    if r >= x:
        return None, k_under
    k_over = _first_below(m, x - r)
    while k_over > 0 and not _is_above(m, k_over, x, r):
        k_over -= 1
    while _is_above(m, k_over + 1, x, r):
        k_over += 1
    return k_over, k_under


def ball_mass_seq(m: SequenceMeasure, x: float, r: float) -> MassInterval:
    """Certified mass of the open ball B(x, r)."""
    k_over, k_under = index_bounds(m, x, r)
    if k_over is not None and k_over < k_under:
        return MassInterval.zero()
    return m._range_sum(k_under, k_over).divide(m.normalizer).clamped(1.0)


def dim_reg_formula_seq(m: SequenceMeasure) -> FormulaValue:
    """max{1, (omega - 1)/lambda}, log omega / log lambda, or infinity for mixed regimes."""
    lam, omega = m.x_kind.param, m.p_kind.param
    if m.is_mixed:
        return FormulaValue.infinity("dimreg")
    if m.x_kind.is_poly:
        return FormulaValue.finite("dimreg", max(1.0, (omega - 1.0) / lam))
    return FormulaValue.finite("dimreg", math.log(omega) / math.log(lam))


def local_dim_formula_seq(m: SequenceMeasure, x: float) -> FormulaValue:
    """Local dimension at a support point: 0 at atoms, the accumulation exponent at 0."""
    if x == 0:
        lam, omega = m.x_kind.param, m.p_kind.param
        if not m.is_mixed:
            if m.x_kind.is_poly:
                return FormulaValue.finite("local_dim", (omega - 1.0) / lam)
            return FormulaValue.finite("local_dim", math.log(omega) / math.log(lam))
        if m.x_kind.is_poly:
            return FormulaValue.infinity("local_dim")
        return FormulaValue.finite("local_dim", 0.0)
    if atom_index(m, x) is None:
        raise InvalidArgumentError(f"{x} is not a support point of the sequence measure")
    return FormulaValue.finite("local_dim", 0.0)


def assouad_formula_seq(m: SequenceMeasure) -> FormulaValue:
    """Assouad dimension of {x_n} with 0: 1 for polynomial points, 0 for exponential points."""
    return FormulaValue.finite("assouad", 1.0 if m.x_kind.is_poly else 0.0)


def doubling_violation_witness(m: SequenceMeasure, R_list: Sequence[float]) -> List[DoublingWitness]:
    """
    Lower bounds on mu(B(x, R)) / mu(B(x, R/2)) along decreasing R.

    Polynomial points with exponential weights are checked at x = 0;
    exponential points with polynomial weights at x = R.
    """
    if not m.is_mixed:
        raise InvalidArgumentError(f"{m.x_kind}/{m.p_kind} is doubling; witnesses need a mixed regime")
    out: List[DoublingWitness] = []
    for R in R_list:
        center = 0.0 if m.x_kind.is_poly else float(R)
        big = ball_mass_seq(m, center, R)
        small = ball_mass_seq(m, center, R / 2.0)
        if small.is_zero:
            raise PreconditionError(f"ball B({center}, {R / 2}) carries no mass")
        log_ratio = big.log_lo - small.log_hi
        ratio = math.exp(log_ratio) if log_ratio < 700 else math.inf
        out.append(DoublingWitness(R=R, center=center, ratio_lo=ratio, log_ratio_lo=log_ratio))
    logger.debug(f"Doubling witnesses for {m.x_kind}/{m.p_kind}: {len(out)} scales")
    return out
