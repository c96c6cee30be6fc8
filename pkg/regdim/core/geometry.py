"""
Euclidean Geometry

Points of R^d (optionally carrying a symbolic address), eventually periodic
code words, and similarity maps x -> ratio * Q x + t with their inverses and
compositions.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence, Tuple, Union

import numpy as np

from regdim.core.errors import InvalidArgumentError

ORTHOGONALITY_TOL = 1e-12

Real = Union[float, int, Fraction]


@dataclass(frozen=True)
class SymbolicPoint:
    """Eventually periodic infinite word: preperiod followed by period repeated forever."""

    preperiod: Tuple[Any, ...]
    period: Tuple[Any, ...]

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(self.preperiod))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise InvalidArgumentError("period of a symbolic point must be nonempty")

    def digit(self, t: int) -> Any:
        """Digit at position t (1-based)."""
        if t < 1:
            raise InvalidArgumentError(f"digit positions start at 1, got {t}")
        if t <= len(self.preperiod):
            return self.preperiod[t - 1]
        return self.period[(t - len(self.preperiod) - 1) % len(self.period)]

    def prefix(self, n: int) -> Tuple[Any, ...]:
        """First n digits."""
        return tuple(self.digit(t) for t in range(1, n + 1))

    def shift(self, j: int) -> "SymbolicPoint":
        """The shifted word sigma^j(self)."""
        if j <= len(self.preperiod):
            return SymbolicPoint(self.preperiod[j:], self.period)
        k = (j - len(self.preperiod)) % len(self.period)
        return SymbolicPoint((), self.period[k:] + self.period[:k])

    def digits(self) -> set:
        """Every digit the word uses."""
        return set(self.preperiod) | set(self.period)

    @classmethod
    def constant(cls, digit: Any) -> "SymbolicPoint":
        """The word digit, digit, digit, ..."""
        return cls((), (digit,))


@dataclass(frozen=True)
class Point:
    """A point of R^d; `code` is its symbolic address when the emitting model has one."""

    coords: Tuple[float, ...]
    code: Optional[SymbolicPoint] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(float(c) for c in self.coords))
        if not self.coords:
            raise InvalidArgumentError("a point needs at least one coordinate")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)

    def distance(self, other: "Point") -> float:
        if other.dim != self.dim:
            raise InvalidArgumentError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return float(np.linalg.norm(self.as_array() - other.as_array()))

    @classmethod
    def of(cls, *coords: Real, code: Optional[SymbolicPoint] = None) -> "Point":
        return cls(tuple(float(c) for c in coords), code)

    @classmethod
    def from_array(cls, arr: Sequence[float], code: Optional[SymbolicPoint] = None) -> "Point":
        return cls(tuple(float(c) for c in np.ravel(arr)), code)


@dataclass(frozen=True, eq=False)
class SimilarityMap:
    """x -> ratio * orthogonal @ x + translation."""

    ratio: Real
    orthogonal: np.ndarray
    translation: Point

    def __post_init__(self):
        q = np.array(self.orthogonal, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise InvalidArgumentError(f"orthogonal part must be square, got shape {q.shape}")
        if q.shape[0] != self.translation.dim:
            raise InvalidArgumentError(
                f"orthogonal part is {q.shape[0]}x{q.shape[0]} but translation has dimension {self.translation.dim}"
            )
        if not np.allclose(q.T @ q, np.eye(q.shape[0]), rtol=0.0, atol=ORTHOGONALITY_TOL):
            raise InvalidArgumentError("orthogonal part fails Q^T Q = I")
        if self.ratio <= 0:
            raise InvalidArgumentError(f"similarity ratio must be positive, got {self.ratio}")
        q.setflags(write=False)
        object.__setattr__(self, "orthogonal", q)

    @property
    def dim(self) -> int:
        return self.translation.dim

    @property
    def linear(self) -> np.ndarray:
        """ratio * Q as a matrix."""
        return float(self.ratio) * self.orthogonal

    def __call__(self, x: Point) -> Point:
        return apply_similarity(self, x)

    def fixed_point(self) -> Point:
        """Unique fixed point of a contraction."""
        if self.ratio >= 1:
            raise InvalidArgumentError("only contractions have a unique fixed point")
        a = np.eye(self.dim) - self.linear
        return Point.from_array(np.linalg.solve(a, self.translation.as_array()))

    @classmethod
    def identity(cls, d: int) -> "SimilarityMap":
        return cls(1, np.eye(d), Point((0.0,) * d))

    @classmethod
    def homothety(cls, ratio: Real, translation: Sequence[Real]) -> "SimilarityMap":
        """x -> ratio * x + translation."""
        t = Point.of(*translation)
        return cls(ratio, np.eye(t.dim), t)

    @classmethod
    def rotation2d(cls, ratio: Real, angle: float, translation: Sequence[Real] = (0.0, 0.0)) -> "SimilarityMap":
        c, s = np.cos(angle), np.sin(angle)
        return cls(ratio, np.array([[c, -s], [s, c]]), Point.of(*translation))


def apply_similarity(T: SimilarityMap, x: Point) -> Point:
    """Image T(x) = ratio * Q x + t."""
    if x.dim != T.dim:
        raise InvalidArgumentError(f"point of dimension {x.dim} given to a map on R^{T.dim}")
    y = float(T.ratio) * (T.orthogonal @ x.as_array()) + T.translation.as_array()
    return Point.from_array(y)


def invert_similarity(T: SimilarityMap) -> SimilarityMap:
    """Inverse map; its ratio is 1/ratio(T)."""
    ratio = 1 / T.ratio if isinstance(T.ratio, Fraction) else 1.0 / float(T.ratio)
    q_inv = T.orthogonal.T.copy()
    t_inv = -(1.0 / float(T.ratio)) * (q_inv @ T.translation.as_array())
    return SimilarityMap(ratio, q_inv, Point.from_array(t_inv))


def compose_similarities(S: SimilarityMap, T: SimilarityMap) -> SimilarityMap:
    """The composition S o T."""
    if S.dim != T.dim:
        raise InvalidArgumentError("cannot compose maps on different dimensions")
    ratio = S.ratio * T.ratio
    q = S.orthogonal @ T.orthogonal
    # nearest orthogonal matrix
    u, _, vt = np.linalg.svd(q)
    q = u @ vt
    t = float(S.ratio) * (S.orthogonal @ T.translation.as_array()) + S.translation.as_array()
    return SimilarityMap(ratio, q, Point.from_array(t))
