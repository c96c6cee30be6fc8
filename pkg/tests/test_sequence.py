"""Point-mass measures on convergent sequences."""

import math

import pytest

from regdim.core import InvalidArgumentError, Point, ScaleGrid
from regdim.services.estimators import estimate_assouad_support, estimate_local_dim_upper, estimate_upper_regularity
from regdim.services.sequence import (
    Exp,
    Poly,
    SequenceModel,
    assouad_formula_seq,
    atom_index,
    ball_mass_seq,
    build_sequence_measure,
    dim_reg_formula_seq,
    doubling_violation_witness,
    index_bounds,
    local_dim_formula_seq,
)


# ===========================================
# Rates and construction
# ===========================================

@pytest.mark.parametrize("make, param", [(Exp, 1.5), (Exp, 0.0), (Poly, 0.0), (Poly, -1.0)])
def test_rate_parameters_are_checked(make, param):
    with pytest.raises(InvalidArgumentError):
        make(param)


def test_polynomial_weights_must_be_summable():
    with pytest.raises(InvalidArgumentError):
        build_sequence_measure(Poly(1), Poly(1))


def test_n_max_has_a_floor():
    with pytest.raises(InvalidArgumentError):
        build_sequence_measure(Poly(1), Poly(2), n_max=10)


def test_polynomial_normalizer_brackets_zeta_two():
    m = build_sequence_measure(Poly(1), Poly(2), n_max=1000)
    assert m.normalizer.contains(math.pi ** 2 / 6)
    assert m.normalizer.width < 1e-9


def test_geometric_normalizer_is_exact():
    m = build_sequence_measure(Exp(0.5), Exp(0.5), n_max=1000)
    assert m.normalizer.lo == m.normalizer.hi == pytest.approx(1.0)


def test_atom_masses_sum_to_one():
    m = build_sequence_measure(Poly(1), Exp(0.5), n_max=1000)
    total = sum(m.atom_mass(n).lo for n in range(1, 60))
    assert total == pytest.approx(1.0, abs=1e-12)


# ===========================================
# Ball index bounds
# ===========================================

def test_index_bounds_of_an_interior_ball():
    m = build_sequence_measure(Poly(1), Poly(2), n_max=1000)
    # (0.15, 0.35) holds 1/3, 1/4, 1/5 and 1/6
    assert index_bounds(m, 0.25, 0.1) == (6, 3)


def test_ball_reaching_zero_has_no_upper_index():
    m = build_sequence_measure(Poly(1), Poly(2), n_max=1000)
    k_over, k_under = index_bounds(m, 0.25, 0.3)
    assert k_over is None
    # 1/2 lies inside (-0.05, 0.55), 1 does not
    assert k_under == 2


def test_balls_are_open():
    m = build_sequence_measure(Exp(0.5), Exp(0.5), n_max=1000)
    # 1/4 and 3/4 sit on the boundary of B(1/2, 1/4)
    assert index_bounds(m, 0.5, 0.25) == (1, 1)
    assert ball_mass_seq(m, 0.5, 0.25).lo == pytest.approx(0.5)


def test_empty_ball_between_atoms():
    m = build_sequence_measure(Poly(1), Poly(2), n_max=1000)
    assert ball_mass_seq(m, 0.7, 0.1).is_zero


@pytest.mark.parametrize("points, weights", [(Poly(1), Poly(2)), (Exp(0.5), Exp(0.25))])
def test_ball_left_of_the_support_is_empty(points, weights):
    m = build_sequence_measure(points, weights, n_max=1000)
    assert ball_mass_seq(m, -1.0, 0.5).is_zero
    # touches 0 but stays open
    assert ball_mass_seq(m, -0.5, 0.5).is_zero
    assert SequenceModel(m).ball_mass(Point.of(-1.0), 0.5).is_zero


@pytest.mark.parametrize("points, weights", [(Poly(1), Poly(2)), (Exp(0.5), Exp(0.25))])
def test_ball_right_of_the_support_is_empty(points, weights):
    m = build_sequence_measure(points, weights, n_max=1000)
    assert ball_mass_seq(m, 3.0, 0.5).is_zero


def test_geometric_ball_masses_at_zero_are_exact():
    m = build_sequence_measure(Exp(0.5), Exp(1 / 3), n_max=1000)
    for j in range(1, 30):
        assert ball_mass_seq(m, 0.0, 2.0 ** -j).lo == pytest.approx(3.0 ** -j, rel=1e-12)


def test_polynomial_ball_mass_matches_direct_sum():
    m = build_sequence_measure(Poly(1), Poly(2), n_max=10_000)
    # B(0, 1/100) holds n >= 101
    direct = math.pi ** 2 / 6 - sum(n ** -2.0 for n in range(1, 101))
    mass = ball_mass_seq(m, 0.0, 0.01)
    assert mass.contains(direct / (math.pi ** 2 / 6), slack=1e-12)
    assert mass.width < 1e-9


def test_deep_exponential_atoms_are_found():
    m = build_sequence_measure(Exp(0.5), Exp(1 / 3), n_max=1000)
    x = m.point(900)
    assert atom_index(m, x) == 900
    k_over, k_under = index_bounds(m, x, x / 4)
    assert k_over == k_under == 900


# ===========================================
# Closed forms
# ===========================================

@pytest.mark.parametrize("lam, omega, expected", [(1, 2, 1.0), (1, 3, 2.0), (2, 2, 1.0), (0.5, 4, 6.0)])
def test_polynomial_regime_formula(lam, omega, expected):
    m = build_sequence_measure(Poly(lam), Poly(omega), n_max=1000)
    assert dim_reg_formula_seq(m).value == pytest.approx(expected)


@pytest.mark.parametrize("lam, omega", [(0.5, 1 / 3), (0.5, 0.25)])
def test_exponential_regime_formula(lam, omega):
    m = build_sequence_measure(Exp(lam), Exp(omega), n_max=1000)
    assert dim_reg_formula_seq(m).value == pytest.approx(math.log(omega) / math.log(lam))


@pytest.mark.parametrize("points, weights", [(Poly(1), Exp(0.5)), (Exp(0.5), Poly(2))])
def test_mixed_regimes_are_not_doubling(points, weights):
    m = build_sequence_measure(points, weights, n_max=1000)
    value = dim_reg_formula_seq(m)
    assert value.infinite
    assert value.as_float == math.inf


def test_assouad_of_the_support():
    assert assouad_formula_seq(build_sequence_measure(Poly(1), Poly(2), n_max=1000)).value == 1.0
    assert assouad_formula_seq(build_sequence_measure(Exp(0.5), Exp(0.5), n_max=1000)).value == 0.0


def test_local_dimension_at_atoms_and_zero():
    m = build_sequence_measure(Poly(1), Poly(3), n_max=1000)
    assert local_dim_formula_seq(m, 0.25).value == 0.0
    assert local_dim_formula_seq(m, 0.0).value == pytest.approx(2.0)
    with pytest.raises(InvalidArgumentError):
        local_dim_formula_seq(m, 0.3)


# ===========================================
# Doubling violations
# ===========================================

def test_witnesses_need_a_mixed_regime():
    m = build_sequence_measure(Poly(1), Poly(2), n_max=1000)
    with pytest.raises(InvalidArgumentError):
        doubling_violation_witness(m, [0.1])


def test_polynomial_points_with_geometric_weights_blow_up_at_zero():
    m = build_sequence_measure(Poly(1), Exp(0.5), n_max=1000)
    radii = [2.0 ** -k for k in range(4, 15)]
    witnesses = doubling_violation_witness(m, radii)
    assert all(w.center == 0.0 for w in witnesses)
    # B(0, 1/16) holds n >= 17 and B(0, 1/32) holds n >= 33
    assert witnesses[0].log_ratio_lo == pytest.approx(16 * math.log(2), rel=1e-9)
    assert all(w.ratio_lo > 1e3 for w in witnesses)


def test_geometric_points_with_heavy_tails_grow_without_bound():
    m = build_sequence_measure(Exp(0.5), Poly(1.01), n_max=10_000)
    radii = [2.0 ** -k for k in range(4, 15)]
    witnesses = doubling_violation_witness(m, radii)
    ratios = [w.ratio_lo for w in witnesses]
    assert all(a < b for a, b in zip(ratios, ratios[1:]))
    assert any(w.ratio_lo > 1e3 and w.R >= 1e-4 for w in witnesses)


# ===========================================
# Model and estimator agreement
# ===========================================

def test_model_sample_points_include_zero_and_atoms(exp_exp_model):
    grid = ScaleGrid(base=2, exp_min=0, exp_max=20, gap_min=4, gap_max=8)
    points = exp_exp_model.sample_points(grid)
    assert points[0] == Point.of(0.0)
    assert len(points) == len(set(points))


def test_support_net_is_within_scale_of_every_atom(exp_exp_model):
    scale = 2.0 ** -6
    net = [p.coords[0] for p in exp_exp_model.support_net(scale)]
    for n in range(1, 40):
        x = exp_exp_model.measure.point(n)
        assert min(abs(x - y) for y in net) <= scale


def test_model_exact_masses_follow_the_weights():
    assert SequenceModel(build_sequence_measure(Exp(0.5), Exp(0.5), n_max=1000)).exact_masses
    assert not SequenceModel(build_sequence_measure(Exp(0.5), Poly(2), n_max=1000)).exact_masses


@pytest.mark.slow
@pytest.mark.parametrize("lam, omega", [(1, 2), (1, 3), (2, 2)])
def test_polynomial_estimate_matches_formula(lam, omega):
    m = build_sequence_measure(Poly(lam), Poly(omega))
    grid = ScaleGrid(base=2, exp_min=0, exp_max=56, gap_min=24, gap_max=32)
    estimate = estimate_upper_regularity(SequenceModel(m), grid, workers=4)
    assert abs(estimate.value - dim_reg_formula_seq(m).value) <= 0.05


@pytest.mark.slow
@pytest.mark.parametrize("lam, omega", [(0.5, 1 / 3), (0.5, 0.25)])
def test_exponential_estimate_matches_formula(lam, omega):
    m = build_sequence_measure(Exp(lam), Exp(omega))
    grid = ScaleGrid(base=2, exp_min=0, exp_max=56, gap_min=24, gap_max=32)
    estimate = estimate_upper_regularity(SequenceModel(m), grid, workers=4)
    assert abs(estimate.value - dim_reg_formula_seq(m).value) <= 0.05


# radii down to 1e-300 so constant factors vanish from log mass / log r
TINY_RADII = ScaleGrid(base=10, exp_min=200, exp_max=300, gap_min=1, gap_max=1)
# tail sums near zero stay above the smallest normal float
ZERO_RADII = ScaleGrid(base=10, exp_min=100, exp_max=150, gap_min=1, gap_max=1)


def test_estimated_local_dimension_at_an_atom_is_zero():
    model = SequenceModel(build_sequence_measure(Poly(1), Poly(2), n_max=1000))
    assert abs(estimate_local_dim_upper(model, model.atom(5), TINY_RADII)) <= 0.01


@pytest.mark.parametrize("lam, omega", [(1, 2), (1, 3), (2, 3)])
def test_estimated_local_dimension_at_zero(lam, omega):
    model = SequenceModel(build_sequence_measure(Poly(lam), Poly(omega), n_max=1000))
    value = estimate_local_dim_upper(model, Point.of(0.0), ZERO_RADII)
    assert abs(value - (omega - 1) / lam) <= 0.05


@pytest.mark.slow
def test_harmonic_points_have_assouad_dimension_one():
    model = SequenceModel(build_sequence_measure(Poly(1), Poly(2), n_max=1000))
    # B(0, R) is covered by atoms closer than r apart when R^2 <= r
    grid = ScaleGrid(base=2, exp_min=18, exp_max=36, gap_min=18, gap_max=18)
    assert abs(estimate_assouad_support(model, grid) - 1.0) <= 0.1


def test_geometric_points_have_assouad_dimension_zero():
    model = SequenceModel(build_sequence_measure(Exp(0.5), Exp(0.5), n_max=1000))
    near = estimate_assouad_support(model, ScaleGrid(base=2, exp_min=0, exp_max=30, gap_min=10, gap_max=10))
    far = estimate_assouad_support(model, ScaleGrid(base=2, exp_min=0, exp_max=30, gap_min=20, gap_max=20))
    # about log(gap) / gap
    assert far < near
    assert far < 0.3
