"""
Mass Intervals

Certified lower/upper bounds on a measure value. Bounds are kept both as
floats and as natural logarithms so that masses far below the float range
(deep sponge cubes, geometric weights) stay comparable.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from regdim.core.errors import InvalidArgumentError

NEG_INF = float("-inf")


def _log(v: float) -> float:
    return math.log(v) if v > 0 else NEG_INF


def _exp(v: float) -> float:
    if v == NEG_INF:
        return 0.0
    try:
        return math.exp(v)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class MassInterval:
    """Closed interval [lo, hi] with 0 <= lo <= hi containing a mass."""

    lo: float
    hi: float
    log_lo: Optional[float] = None
    log_hi: Optional[float] = None

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if self.log_lo is None:
            object.__setattr__(self, "log_lo", _log(lo))
        if self.log_hi is None:
            object.__setattr__(self, "log_hi", _log(hi))
        if lo < 0 or math.isnan(lo) or math.isnan(hi):
            raise InvalidArgumentError(f"invalid mass bounds [{lo}, {hi}]")
        if self.log_lo > self.log_hi:
            raise InvalidArgumentError(f"mass interval has lo > hi: [{lo}, {hi}]")

    @classmethod
    def exact(cls, value: Union[float, Fraction]) -> "MassInterval":
        v = float(value)
        return cls(v, v)

    @classmethod
    def from_logs(cls, log_lo: float, log_hi: float) -> "MassInterval":
        return cls(_exp(log_lo), _exp(log_hi), log_lo, log_hi)

    @classmethod
    def zero(cls) -> "MassInterval":
        return cls(0.0, 0.0)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def is_exact(self) -> bool:
        return self.log_lo == self.log_hi

    @property
    def is_zero(self) -> bool:
        return self.hi == 0.0 and self.log_hi == NEG_INF

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= value <= self.hi + slack

    def overlaps(self, other: "MassInterval", slack: float = 0.0) -> bool:
        return self.lo <= other.hi + slack and other.lo <= self.hi + slack

    def scaled(self, factor: Union[float, Fraction]) -> "MassInterval":
        """Interval multiplied by a positive factor."""
        f = float(factor)
        if f <= 0:
            raise InvalidArgumentError(f"scale factor must be positive, got {factor}")
        lf = math.log(f)
        return MassInterval(self.lo * f, self.hi * f, self.log_lo + lf, self.log_hi + lf)

    def clamped(self, upper: float = 1.0) -> "MassInterval":
        """Clamp to [0, upper]."""
        if self.hi <= upper:
            return self
        lo = min(self.lo, upper)
        return MassInterval(lo, upper, min(self.log_lo, _log(upper)), _log(upper))

    def divide(self, other: "MassInterval") -> "MassInterval":
        """Outward quotient self / other."""
        if other.hi == 0 and other.log_hi == NEG_INF:
            raise InvalidArgumentError("division by a zero mass interval")
        log_lo = self.log_lo - other.log_hi
        log_hi = self.log_hi - other.log_lo if other.log_lo > NEG_INF else math.inf
        return MassInterval(_exp(log_lo), _exp(log_hi), log_lo, log_hi)

    def __add__(self, other: "MassInterval") -> "MassInterval":
        return MassInterval(
            self.lo + other.lo,
            self.hi + other.hi,
            _logaddexp(self.log_lo, other.log_lo),
            _logaddexp(self.log_hi, other.log_hi),
        )


def _logaddexp(a: float, b: float) -> float:
    if a == NEG_INF:
        return b
    if b == NEG_INF:
        return a
    m = max(a, b)
    return m + math.log1p(math.exp(-abs(a - b)))


def sum_intervals(parts: Iterable[MassInterval]) -> MassInterval:
    """Interval sum in input order."""
    total = MassInterval.zero()
    for part in parts:
        total = total + part
    return total
