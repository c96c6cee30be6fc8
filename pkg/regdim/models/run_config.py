"""
Run Configuration

YAML run files validated into pydantic models. Every field is checked
before any computation starts. Numbers may be written as decimals or as
exact fractions "a/b"; quoted numbers become Fractions and flow into the
rational arithmetic paths, bare YAML floats stay floats.
"""

import hashlib
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, List, Literal, Optional, Tuple, Union, get_args

import numpy as np
import yaml
from scipy.stats import ortho_group
from pydantic import AfterValidator, BaseModel, BeforeValidator, ConfigDict, Field, ValidationError, model_validator

from regdim.core.errors import ConfigError, InvalidArgumentError
from regdim.core.geometry import Point, SimilarityMap
from regdim.core.grid import ScaleGrid
from regdim.core.measure import MeasureModel, check_probabilities
from regdim.models.formulas import FormulaValue
from regdim.services.selfsimilar import (
    SelfSimilarModel,
    ahlfors_system,
    build_selfsimilar,
    cantor_system,
    dim_reg_formula_ss,
    lebesgue_interval_system,
    moran_exponent,
    planar_gasket_system,
)
from regdim.services.sequence import (
    Rate,
    SequenceModel,
    assouad_formula_seq,
    build_sequence_measure,
    dim_reg_formula_seq,
    local_dim_formula_seq,
)
from regdim.services.sponge import (
    SpongeModel,
    badcarpet_family,
    build_sponge,
    dim_reg_formula_sponge,
    epsilon_carpet,
    three_axis_sponge,
)
from regdim.services.tangent import build_lens_measure, pushforward


def _parse_number(value: Any) -> Union[Fraction, float, int]:
    if isinstance(value, bool):
        raise ValueError("expected a number, got a boolean")
    if isinstance(value, (int, float, Fraction)):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"'{value}' is neither a decimal nor a fraction a/b")
    raise ValueError(f"expected a number, got {type(value).__name__}")


Number = Annotated[Any, BeforeValidator(_parse_number)]


def _checked(check, *args):
    """Run a model-building check so its failure becomes a validation error."""
    try:
        return check(*args)
    except InvalidArgumentError as e:
        raise ValueError(str(e)) from e


def _check_ratios(ratios: List[Any]) -> List[Any]:
    for c in ratios:
        if not 0 < c < 1:
            raise ValueError(f"contraction ratio {c} is not in (0, 1)")
    return ratios


def _check_probs(probs: List[Any]) -> List[Any]:
    _checked(check_probabilities, probs)
    return probs


Ratios = Annotated[List[Number], AfterValidator(_check_ratios)]
Probs = Annotated[List[Number], AfterValidator(_check_probs)]


def _check_epsilon(epsilon: Any) -> Any:
    if not 0 < epsilon <= Fraction(1, 2):
        raise ValueError(f"epsilon must lie in (0, 1/2], got {epsilon}")
    return epsilon


def _check_positive(value: Any) -> Any:
    if not value > 0:
        raise ValueError(f"expected a positive number, got {value}")
    return value


Epsilon = Annotated[Number, AfterValidator(_check_epsilon)]
Positive = Annotated[Number, AfterValidator(_check_positive)]

EstimatorName = Literal["dimreg", "local_dim", "doubling", "tau", "T", "assouad", "chain", "nondoubling", "violation"]
ESTIMATORS = get_args(EstimatorName)


class _Spec(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SelfSimilarSpec(_Spec):
    """Self-similar system from a preset or from one-dimensional maps x -> c_i x + t_i."""
    family: Literal["selfsimilar"]
    preset: Optional[Literal["cantor", "lebesgue", "ahlfors", "gasket"]] = None
    ratios: Optional[Ratios] = Field(default=None, description="Contraction ratios c_i")
    translations: Optional[List[Number]] = Field(default=None, description="Translations t_i")
    probs: Optional[Probs] = Field(default=None, description="Weights p_i")
    ssc_depth: Optional[int] = Field(default=None, ge=1, description="SSC refinement depth")

    @model_validator(mode="after")
    def _check_maps(self) -> "SelfSimilarSpec":
        if self.preset is None:
            if not (self.ratios and self.translations and self.probs):
                raise ValueError("without a preset, ratios, translations and probs are all required")
            if not len(self.ratios) == len(self.translations) == len(self.probs):
                raise ValueError("ratios, translations and probs must have equal length")
        if self.preset == "ahlfors" and self.ratios and len(self.ratios) != 2:
            raise ValueError("the ahlfors preset takes exactly two ratios")
        _checked(self._system)
        return self

    def _system(self):
        if self.preset == "cantor":
            return cantor_system(self.probs) if self.probs else cantor_system()
        if self.preset == "lebesgue":
            return lebesgue_interval_system()
        if self.preset == "ahlfors":
            return ahlfors_system(self.ratios) if self.ratios else ahlfors_system()
        if self.preset == "gasket":
            return planar_gasket_system(ratio=self.ratios[0]) if self.ratios else planar_gasket_system()
        maps = [SimilarityMap.homothety(c, [t]) for c, t in zip(self.ratios, self.translations)]
        return build_selfsimilar(maps, self.probs)

    def build(self) -> MeasureModel:
        system = self._system()
        if self.preset is None:
            system = system.certified(self.ssc_depth) if self.ssc_depth else system.certified()
        return SelfSimilarModel(system)

    def formulas(self, model: MeasureModel) -> List[FormulaValue]:
        system = model.system
        if system.open_set or not system.ssc_status.certified:
            return [FormulaValue.unavailable("dimreg", "no closed form without strong separation")]
        value = dim_reg_formula_ss(system)
        return [
            FormulaValue.finite("dimreg", value),
            FormulaValue.finite("T", value),
            FormulaValue.finite("assouad", moran_exponent(system.ratios)),
        ]


class SpongeSpec(_Spec):
    """Bedford-McMullen sponge from a preset or explicit digits."""
    family: Literal["sponge"]
    preset: Optional[Literal["epsilon_carpet", "three_axis"]] = None
    epsilon: Optional[Epsilon] = Field(default=None, description="Carpet parameter in (0, 1/2]")
    bases: Optional[List[int]] = None
    digits: Optional[List[List[int]]] = None
    probs: Optional[Probs] = None
    mode: Literal["sandwich", "cube"] = Field(default="sandwich", description="Ball masses from the sandwich or the cube")

    @model_validator(mode="after")
    def _check_digits(self) -> "SpongeSpec":
        if self.preset == "epsilon_carpet" and self.epsilon is None:
            raise ValueError("epsilon_carpet needs epsilon")
        if self.preset is None and not (self.bases and self.digits and self.probs):
            raise ValueError("without a preset, bases, digits and probs are all required")
        _checked(self._system)
        return self

    def _system(self):
        if self.preset == "epsilon_carpet":
            return epsilon_carpet(self.epsilon)
        if self.preset == "three_axis":
            return three_axis_sponge()
        return build_sponge(len(self.bases), self.bases, self.digits, self.probs)

    def build(self) -> MeasureModel:
        return SpongeModel(self._system(), self.mode)

    def formulas(self, model: MeasureModel) -> List[FormulaValue]:
        if self.preset == "epsilon_carpet":
            dims = badcarpet_family(self.epsilon)
            return [
                FormulaValue.finite("dimreg", dims.dimreg),
                FormulaValue.finite("T", dims.T),
                FormulaValue.finite("sup_local", dims.sup_local),
                FormulaValue.finite("assouad", dims.assouad),
            ]
        return [FormulaValue.finite("dimreg", dim_reg_formula_sponge(model.system))]


class RateSpec(_Spec):
    kind: Literal["poly", "exp"]
    param: Number

    @model_validator(mode="after")
    def _check_rate(self) -> "RateSpec":
        _checked(Rate, self.kind, self.param)
        return self


class SequenceSpec(_Spec):
    """Point masses p(n) at x_n."""
    family: Literal["sequence"]
    points: RateSpec
    weights: RateSpec
    n_max: Optional[int] = Field(default=None, ge=1000)

    @model_validator(mode="after")
    def _check_summable(self) -> "SequenceSpec":
        if self.weights.kind == "poly" and not self.weights.param > 1:
            raise ValueError(f"weights n^-{self.weights.param} are not summable (need omega > 1)")
        return self

    def build(self) -> MeasureModel:
        measure = build_sequence_measure(
            Rate(self.points.kind, self.points.param), Rate(self.weights.kind, self.weights.param), self.n_max
        )
        return SequenceModel(measure)

    def formulas(self, model: MeasureModel) -> List[FormulaValue]:
        m = model.measure
        return [dim_reg_formula_seq(m), assouad_formula_seq(m), local_dim_formula_seq(m, 0.0)]


class LensSpec(_Spec):
    """Square minus lens pieces, optionally restricted to the unit disc."""
    family: Literal["lens"]
    i_max: int = Field(default=10, ge=1, le=20)
    h: Optional[float] = Field(default=None, gt=0)
    restricted: bool = False
    indices: Optional[List[int]] = Field(default=None, description="Lens indices for nondoubling ratios")

    @model_validator(mode="after")
    def _check_cells(self) -> "LensSpec":
        _checked(build_lens_measure, self.i_max, self.h, self.restricted)
        if self.indices and not all(1 <= i <= self.i_max for i in self.indices):
            raise ValueError(f"lens indices must lie in 1..{self.i_max}")
        return self

    def build(self) -> MeasureModel:
        return build_lens_measure(self.i_max, self.h, self.restricted)

    def formulas(self, model: MeasureModel) -> List[FormulaValue]:
        return [FormulaValue.unavailable("dimreg")]


ModelSpec = Annotated[Union[SelfSimilarSpec, SpongeSpec, SequenceSpec, LensSpec], Field(discriminator="family")]


class PushforwardSpec(_Spec):
    """Similarity applied to the configured model: p * mu o T^-1."""
    ratio: Positive = Field(description="Similarity ratio")
    translation: Optional[List[float]] = None
    random_orthogonal: bool = Field(default=False, description="Draw the orthogonal part from the run seed")
    scale_factor: Positive = 1

    def similarity(self, d: int, seed: int) -> SimilarityMap:
        if self.random_orthogonal:
            rng = np.random.default_rng(seed)
            q = ortho_group.rvs(d, random_state=rng) if d > 1 else np.array([[rng.choice([-1.0, 1.0])]])
        else:
            q = np.eye(d)
        t = self.translation or [0.0] * d
        if len(t) != d:
            raise ConfigError(f"translation has {len(t)} entries for a model in R^{d}", "pushforward.translation")
        return SimilarityMap(self.ratio, q, Point.of(*t))


class EstimatorOptions(_Spec):
    theta: float = Field(default=0.5, gt=0, lt=1, description="Doubling ratio R -> theta R")
    chain: bool = Field(default=True, description="Evaluate whole theta-chains in the doubling scan")
    q_list: Optional[List[float]] = Field(default=None, description="Moments for tau and T")
    violation_radii: Optional[List[float]] = Field(default=None, description="Decreasing R for violation witnesses")


class Tolerances(_Spec):
    default_tol: Optional[float] = Field(default=None, gt=0, lt=1)
    chain_tol: Optional[float] = Field(default=None, ge=0)
    net_scale_factor: Optional[float] = Field(default=None, gt=0)


class RunConfig(_Spec):
    """One batch run: a model, grids, the estimators to run and where to write."""
    model: ModelSpec
    pushforward: Optional[PushforwardSpec] = None
    grid: ScaleGrid = Field(default_factory=ScaleGrid)
    spectrum_grid: Optional[ScaleGrid] = Field(default=None, description="Coarser grid for tau, T and Assouad")
    estimators: List[EstimatorName] = Field(default_factory=lambda: ["dimreg"])
    options: EstimatorOptions = Field(default_factory=EstimatorOptions)
    output: Optional[str] = None
    seed: int = 0
    tolerances: Tolerances = Field(default_factory=Tolerances)

    def build_base_model(self) -> MeasureModel:
        try:
            return self.model.build()
        except InvalidArgumentError as e:
            raise ConfigError(f"invalid model: {e}", "model")

    def build_model(self) -> MeasureModel:
        model = self.build_base_model()
        if self.pushforward is not None:
            T = self.pushforward.similarity(model.ambient_dim, self.seed)
            model = pushforward(model, T, self.pushforward.scale_factor)
        return model


def _key(loc: Tuple[Any, ...]) -> str:
    return ".".join(str(part) for part in loc)


def load_run_config(path: Union[str, Path]) -> Tuple[RunConfig, str]:
    """Parse and validate a YAML run file; returns the config and the file's sha256."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}", "config")
    try:
        data = yaml.safe_load(raw)
    except yaml.YAMLError as e:
        raise ConfigError(f"config file {path} is not valid YAML: {e}", "config")
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a mapping", "config")
    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        key = _key(first["loc"])
        raise ConfigError(f"invalid config value at '{key}': {first['msg']}", key)
    return config, hashlib.sha256(raw).hexdigest()

