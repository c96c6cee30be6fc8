"""Shared gallery models, grids and config-file helpers."""

from fractions import Fraction
from pathlib import Path
from typing import Callable

import pytest

from regdim.core.grid import ScaleGrid
from regdim.services.selfsimilar import (
    SelfSimilarModel,
    ahlfors_system,
    cantor_system,
    lebesgue_interval_system,
    planar_gasket_system,
)
from regdim.services.sequence import Exp, Poly, SequenceModel, build_sequence_measure
from regdim.services.sponge import BallMode, SpongeModel, epsilon_carpet


@pytest.fixture
def biased_cantor():
    return cantor_system([Fraction(7, 10), Fraction(3, 10)])


@pytest.fixture
def cantor_model(biased_cantor):
    return SelfSimilarModel(biased_cantor)


@pytest.fixture
def ahlfors_model():
    return SelfSimilarModel(ahlfors_system())


@pytest.fixture
def carpet_quarter():
    return epsilon_carpet(Fraction(1, 4))


@pytest.fixture
def carpet_cube_model(carpet_quarter):
    return SpongeModel(carpet_quarter, BallMode.CUBE)


@pytest.fixture
def exp_exp_model():
    return SequenceModel(build_sequence_measure(Exp(0.5), Exp(1 / 3), n_max=1000))


GALLERY = {
    "cantor": lambda: SelfSimilarModel(cantor_system([Fraction(7, 10), Fraction(3, 10)])),
    "ahlfors": lambda: SelfSimilarModel(ahlfors_system()),
    "lebesgue": lambda: SelfSimilarModel(lebesgue_interval_system()),
    "gasket": lambda: SelfSimilarModel(planar_gasket_system()),
    "carpet": lambda: SpongeModel(epsilon_carpet(Fraction(1, 4)), BallMode.CUBE),
    "sequence": lambda: SequenceModel(build_sequence_measure(Exp(0.5), Exp(1 / 3), n_max=1000)),
}


@pytest.fixture(params=sorted(GALLERY))
def gallery_model(request):
    """One model per family: self-similar, sponge and sequence."""
    return GALLERY[request.param]()


@pytest.fixture
def triadic_grid():
    return ScaleGrid(base=3, exp_min=0, exp_max=12, gap_min=8, gap_max=12)


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[[str], Path]:
    """Write a YAML run file into tmp_path and return its path."""

    def _write(text: str, name: str = "run.yaml") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
