"""Self-similar systems: separation, cylinders, closed forms and ball masses."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from regdim.core import (
    InvalidArgumentError,
    MassInterval,
    Point,
    PreconditionError,
    SimilarityMap,
    apply_similarity,
    invert_similarity,
)
from regdim.services.selfsimilar import (
    SelfSimilarModel,
    SSCKind,
    ahlfors_system,
    ball_mass_ss,
    build_selfsimilar,
    cantor_system,
    cylinder,
    dim_reg_formula_ss,
    extremal_digit,
    lebesgue_interval_system,
    moran_exponent,
    planar_gasket_system,
    point_from_code,
    tau_formula_ss,
)

THIRD = Fraction(1, 3)


def _cantor_maps():
    return [SimilarityMap.homothety(THIRD, [0]), SimilarityMap.homothety(THIRD, [Fraction(2, 3)])]


# ===========================================
# Construction and separation
# ===========================================

def test_rational_probabilities_must_sum_to_one():
    with pytest.raises(InvalidArgumentError):
        build_selfsimilar(_cantor_maps(), [Fraction(1, 2), Fraction(1, 3)])


def test_maps_must_contract():
    maps = [SimilarityMap.homothety(1, [0]), SimilarityMap.homothety(THIRD, [Fraction(2, 3)])]
    with pytest.raises(InvalidArgumentError):
        build_selfsimilar(maps, [Fraction(1, 2), Fraction(1, 2)])


def test_cantor_is_strongly_separated(biased_cantor):
    status = biased_cantor.ssc_status
    assert status.kind == SSCKind.CERTIFIED
    assert status.delta_lower > 0
    assert status.delta_lower <= status.min_distance


def test_gasket_with_quarter_ratio_is_separated():
    assert planar_gasket_system().ssc_status.certified


def test_touching_maps_are_not_certified():
    system = build_selfsimilar(
        [SimilarityMap.homothety(Fraction(1, 2), [0]), SimilarityMap.homothety(Fraction(1, 2), [Fraction(1, 2)])],
        [Fraction(1, 2), Fraction(1, 2)],
    ).certified()
    assert not system.ssc_status.certified


def test_shared_fixed_point_violates_separation():
    maps = [SimilarityMap.homothety(THIRD, [0]), SimilarityMap.homothety(Fraction(1, 4), [0])]
    system = build_selfsimilar(maps, [Fraction(1, 2), Fraction(1, 2)]).certified()
    assert system.ssc_status.kind == SSCKind.VIOLATED


def test_model_requires_certified_separation():
    system = build_selfsimilar(_cantor_maps(), [Fraction(1, 2), Fraction(1, 2)])
    with pytest.raises(PreconditionError):
        SelfSimilarModel(system)


# ===========================================
# Cylinders and coding
# ===========================================

def test_cylinder_mass_is_exact(biased_cantor):
    c = cylinder(biased_cantor, (0, 1, 1))
    assert c.mass == Fraction(63, 1000)
    assert c.ratio == Fraction(1, 27)
    assert c.log_mass == pytest.approx(math.log(0.063))


def test_cylinder_rejects_unknown_digit(biased_cantor):
    with pytest.raises(InvalidArgumentError):
        cylinder(biased_cantor, (0, 2))


def test_coding_map_of_eventually_constant_words(biased_cantor):
    assert point_from_code(biased_cantor, (), (1,)).coords == pytest.approx((1.0,))
    assert point_from_code(biased_cantor, (0,), (1,)).coords == pytest.approx((1 / 3,))
    assert point_from_code(biased_cantor, (1,), (0,)).coords == pytest.approx((2 / 3,))


# ===========================================
# Closed forms
# ===========================================

def test_dim_reg_formula_biased_cantor(biased_cantor):
    assert dim_reg_formula_ss(biased_cantor) == pytest.approx(math.log(0.3) / math.log(1 / 3))
    assert dim_reg_formula_ss(biased_cantor) == pytest.approx(1.09590, abs=1e-5)
    assert extremal_digit(biased_cantor) == 1


def test_dim_reg_formula_needs_separation():
    system = build_selfsimilar(_cantor_maps(), [Fraction(1, 2), Fraction(1, 2)])
    with pytest.raises(PreconditionError):
        dim_reg_formula_ss(system)


def test_ahlfors_weights_make_every_digit_extremal():
    system = ahlfors_system()
    s = moran_exponent(system.ratios)
    assert dim_reg_formula_ss(system) == pytest.approx(s, abs=1e-12)
    assert sum(float(m.ratio) ** s for m in system.maps) == pytest.approx(1.0)


def test_moran_exponent_of_middle_thirds():
    assert moran_exponent([THIRD, THIRD]) == pytest.approx(math.log(2) / math.log(3))


@pytest.mark.parametrize("q, expected", [(0.0, -math.log(2) / math.log(3)), (1.0, 0.0), (2.0, math.log(2) / math.log(3))])
def test_tau_formula_uniform_cantor(q, expected):
    assert tau_formula_ss(cantor_system(), q) == pytest.approx(expected, abs=1e-12)


# ===========================================
# Ball masses
# ===========================================

def test_ball_covering_the_hull_has_full_mass(cantor_model):
    assert cantor_model.ball_mass(Point.of(0.5), 2.0).lo == 1.0


def test_far_ball_is_empty(cantor_model):
    assert cantor_model.ball_mass(Point.of(5.0), 0.5).is_zero


def test_ball_holding_one_first_level_piece(cantor_model):
    m = cantor_model.ball_mass(Point.of(0.0), 0.5)
    assert m.contains(0.7, slack=1e-12)
    assert m.width < 1e-9


def test_cylinder_balls_recover_cylinder_masses(biased_cantor, cantor_model):
    for depth in range(1, 4):
        for word in itertools.product(range(2), repeat=depth):
            c = cylinder(biased_cantor, word)
            m = cantor_model.ball_mass(c.center, 1.5 * c.radius)
            assert m.contains(float(c.mass), slack=1e-12)
            assert m.width <= 1e-6 * m.hi


def test_ball_masses_are_monotone_in_the_radius(cantor_model):
    x = Point.of(1 / 3)
    masses = [cantor_model.ball_mass(x, 3.0 ** -k) for k in range(12, -1, -1)]
    for small, big in zip(masses, masses[1:]):
        assert small.lo <= big.hi


@pytest.mark.parametrize("tol", [0.2, 0.02])
def test_width_stays_within_tolerance_of_the_mass(tol):
    gasket = planar_gasket_system()
    centers = [Point.of(0.1 * i + 0.03, 0.08 * j + 0.01) for i, j in itertools.product(range(10), range(11))]
    for x, r in itertools.product(centers, (0.3, 0.1, 0.03)):
        m = ball_mass_ss(gasket, x, r, tol=tol)
        assert m.hi - m.lo <= tol * m.hi + 1e-15


def test_lebesgue_ball_off_the_dyadic_grid():
    system = lebesgue_interval_system()
    for tol in (0.5, 0.05, 1e-6):
        m = ball_mass_ss(system, Point.of(1 / 3), 0.1, tol=tol)
        assert m.contains(0.2, slack=1e-12)
        assert m.hi - m.lo <= tol * m.hi


@pytest.mark.parametrize("make_system", [
    lambda: cantor_system([Fraction(7, 10), Fraction(3, 10)]),
    ahlfors_system,
    planar_gasket_system,
])
def test_mass_is_the_weighted_sum_of_its_pullbacks(make_system):
    system = make_system()
    rng = np.random.default_rng(7)
    lo = system.hull_center.as_array() - system.hull_radius
    for _ in range(40):
        x = Point.from_array(lo + 2.0 * system.hull_radius * rng.random(system.dim))
        r = float(10.0 ** rng.uniform(-2.5, -0.5))
        total = MassInterval.zero()
        for S, p in zip(system.maps, system.probs):
            y = apply_similarity(invert_similarity(S), x)
            pulled = ball_mass_ss(system, y, r / float(S.ratio))
            if not pulled.is_zero:
                total = total + pulled.scaled(p)
        m = ball_mass_ss(system, x, r)
        assert m.overlaps(total, slack=1e-6), (x.coords, r)


def test_open_set_system_allows_touching_pieces():
    model = SelfSimilarModel(lebesgue_interval_system())
    m = ball_mass_ss(model.system, Point.of(0.5), 0.25, tol=1e-6)
    assert m.contains(0.5, slack=1e-6)


def test_query_dimension_is_checked(cantor_model):
    with pytest.raises(InvalidArgumentError):
        cantor_model.ball_mass(Point.of(0.0, 0.0), 0.5)


def test_support_net_has_one_point_per_cylinder(cantor_model):
    net = cantor_model.support_net(1.01 * 3.0 ** -4)
    assert len(net) == 16
    assert all(p.code is not None for p in net)


def test_extremal_point_is_the_fixed_point_of_the_rare_digit(cantor_model):
    assert cantor_model.extremal_point().coords == pytest.approx((1.0,))
