"""
Similarity Pushforwards

p * mu o T^-1 for a similarity T. The preimage of an open ball under T is
an open ball, so every mass query is one base query at the mapped center
and radius. Points emitted by the pushforward remember their exact base
preimage; queries at those points reuse it instead of inverting T. Only the
most recently emitted points are remembered (preimage_cache_size).
"""

import logging
import threading
from collections import OrderedDict
from fractions import Fraction
from typing import Iterable, List, Optional, Union

from regdim.core.config import settings
from regdim.core.errors import InvalidArgumentError
from regdim.core.geometry import Point, SimilarityMap, apply_similarity, invert_similarity
from regdim.core.grid import ScaleGrid
from regdim.core.intervals import MassInterval
from regdim.core.measure import DEFAULT_TOL, MeasureModel

logger = logging.getLogger(__name__)


class PushforwardModel(MeasureModel):
    """The measure p * base o T^-1."""

    family = "pushforward"

    def __init__(
        self,
        base: MeasureModel,
        T: SimilarityMap,
        scale_factor: Union[float, Fraction] = 1.0,
        cache_size: Optional[int] = None,
    ):
        if T.dim != base.ambient_dim:
            raise InvalidArgumentError(f"map acts on R^{T.dim} but the base model lives in R^{base.ambient_dim}")
        if not scale_factor > 0:
            raise InvalidArgumentError(f"scale factor must be positive, got {scale_factor}")
        self.base = base
        self.T = T
        self.T_inv = invert_similarity(T)
        self.scale_factor = scale_factor
        self.ratio = float(T.ratio)
        self.is_probability = base.is_probability and scale_factor == 1
        self.exact_masses = base.exact_masses
        self.cache_size = settings.preimage_cache_size if cache_size is None else cache_size
        if self.cache_size < 1:
            raise InvalidArgumentError(f"cache size must be at least 1, got {self.cache_size}")
        self._preimages: "OrderedDict[Point, Point]" = OrderedDict()
        self._lock = threading.Lock()

    @property
    def ambient_dim(self) -> int:
        return self.base.ambient_dim

    def _emit(self, base_points: Iterable[Point]) -> List[Point]:
        images = []
        with self._lock:
            for x in base_points:
                y = Point(apply_similarity(self.T, x).coords, x.code)
                self._preimages.setdefault(y, x)
                self._preimages.move_to_end(y)
                images.append(y)
            while len(self._preimages) > self.cache_size:
                self._preimages.popitem(last=False)
        return images

    def preimage(self, y: Point) -> Point:
        """T^-1(y), exact for points this model emitted."""
        with self._lock:
            x = self._preimages.get(y)
            if x is not None:
                self._preimages.move_to_end(y)
        return x if x is not None else apply_similarity(self.T_inv, y)

    def ball_mass(self, center: Point, radius: float, tol: float = DEFAULT_TOL) -> MassInterval:
        self.check_query(center, radius)
        base_mass = self.base.ball_mass(self.preimage(center), radius / self.ratio, tol)
        if base_mass.is_zero:
            return base_mass
        return base_mass.scaled(self.scale_factor)

    @property
    def cached_preimages(self) -> int:
        return len(self._preimages)

    def witnesses(self) -> List[Point]:
        return self._emit(self.base.witnesses())

    def support_net(self, scale: float) -> List[Point]:
        return self._emit(self.base.support_net(scale / self.ratio))

    def sample_points(self, grid: ScaleGrid) -> List[Point]:
        """Images of the base sample points for the grid pulled back by T."""
        return self._emit(self.base.sample_points(grid.rescaled(1.0 / self.ratio)))


def pushforward(
    base: MeasureModel, T: SimilarityMap, p: Union[float, Fraction] = 1.0, cache_size: Optional[int] = None
) -> PushforwardModel:
    """Lazy model of p * base o T^-1; nothing is copied."""
    return PushforwardModel(base, T, p, cache_size)
