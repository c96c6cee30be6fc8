"""Similarity pushforwards and the lens measure."""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import ortho_group

from regdim.core import InvalidArgumentError, Point, PreconditionError, ScaleGrid, SimilarityMap
from regdim.services.estimators import estimate_upper_regularity
from regdim.services.selfsimilar import SelfSimilarModel, planar_gasket_system
from regdim.services.tangent import (
    build_lens_measure,
    lens_doubling_ratios,
    nondoubling_ratios,
    pushforward,
)

SMALL_TRIADIC = ScaleGrid(base=3, exp_min=0, exp_max=8, gap_min=4, gap_max=6)


# ===========================================
# Pushforwards
# ===========================================

def test_map_dimension_must_match(cantor_model):
    with pytest.raises(InvalidArgumentError):
        pushforward(cantor_model, SimilarityMap.rotation2d(0.5, 0.3))


def test_scale_factor_must_be_positive(cantor_model):
    with pytest.raises(InvalidArgumentError):
        pushforward(cantor_model, SimilarityMap.homothety(Fraction(1, 2), [0]), 0)


def test_pushforward_ball_is_the_base_ball_pulled_back(cantor_model):
    T = SimilarityMap.homothety(Fraction(1, 2), [Fraction(1, 4)])
    push = pushforward(cantor_model, T)
    # T(0) = 1/4 and the radius halves
    m = push.ball_mass(Point.of(0.25), 0.25)
    assert m.contains(0.7, slack=1e-12)
    assert push.is_probability


def test_scale_factor_multiplies_masses(cantor_model):
    push = pushforward(cantor_model, SimilarityMap.homothety(Fraction(1, 2), [0]), 3)
    assert push.ball_mass(Point.of(0.5), 1.0).lo == pytest.approx(3.0)
    assert not push.is_probability


def test_emitted_points_remember_their_preimage(cantor_model):
    T = SimilarityMap.homothety(Fraction(1, 2), [Fraction(1, 4)])
    push = pushforward(cantor_model, T)
    for y, x in zip(push.witnesses(), cantor_model.witnesses()):
        assert push.preimage(y) == x


def test_mass_queries_do_not_grow_the_preimage_cache(cantor_model):
    push = pushforward(cantor_model, SimilarityMap.homothety(Fraction(1, 2), [0]))
    for k in range(200):
        push.ball_mass(Point.of(k / 400.0), 0.01)
    assert push.cached_preimages == 0


def test_preimage_cache_keeps_the_latest_points(cantor_model):
    push = pushforward(cantor_model, SimilarityMap.homothety(Fraction(1, 2), [0]), cache_size=8)
    for k in range(2, 7):
        net = push.support_net(3.0 ** -k)
        assert push.cached_preimages <= 8
    # the net was pulled back with twice the scale
    assert push.preimage(net[-1]) == cantor_model.support_net(2.0 * 3.0 ** -6)[-1]
    with pytest.raises(InvalidArgumentError):
        pushforward(cantor_model, SimilarityMap.homothety(Fraction(1, 2), [0]), cache_size=0)


def test_dimreg_is_invariant_under_a_dilation(cantor_model):
    T = SimilarityMap.homothety(Fraction(1, 2), [Fraction(1, 4)])
    push = pushforward(cantor_model, T)
    base = estimate_upper_regularity(cantor_model, SMALL_TRIADIC)
    pushed = estimate_upper_regularity(push, SMALL_TRIADIC.rescaled(0.5))
    assert abs(pushed.value - base.value) <= 1e-9


def test_dimreg_ignores_the_scale_factor(cantor_model):
    push = pushforward(cantor_model, SimilarityMap.homothety(Fraction(1, 2), [0]), 3)
    base = estimate_upper_regularity(cantor_model, SMALL_TRIADIC)
    pushed = estimate_upper_regularity(push, SMALL_TRIADIC.rescaled(0.5))
    assert abs(pushed.value - base.value) <= 1e-9


def _random_similarity(d: int, seed: int) -> SimilarityMap:
    rng = np.random.default_rng(seed)
    q = ortho_group.rvs(d, random_state=rng) if d > 1 else np.array([[rng.choice([-1.0, 1.0])]])
    # powers of two keep the rescaled radii exact
    ratio = Fraction(2) ** int(rng.integers(-3, 2))
    return SimilarityMap(ratio, q, Point.from_array(rng.normal(size=d)))


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(5))
def test_dimreg_is_invariant_under_random_similarities(gallery_model, seed):
    T = _random_similarity(gallery_model.ambient_dim, seed)
    push = pushforward(gallery_model, T)
    grid = ScaleGrid(base=2, exp_min=0, exp_max=10, gap_min=4, gap_max=6)
    base = estimate_upper_regularity(gallery_model, grid)
    pushed = estimate_upper_regularity(push, grid.rescaled(float(T.ratio)))
    assert abs(pushed.value - base.value) <= 1e-9


def test_dimreg_is_invariant_under_a_rotation():
    gasket = SelfSimilarModel(planar_gasket_system())
    grid = ScaleGrid(base=4, exp_min=0, exp_max=6, gap_min=2, gap_max=4)
    push = pushforward(gasket, SimilarityMap.rotation2d(Fraction(1, 4), 0.9, (1.0, -2.0)))
    base = estimate_upper_regularity(gasket, grid)
    pushed = estimate_upper_regularity(push, grid.rescaled(0.25))
    assert abs(pushed.value - base.value) <= 1e-9


# ===========================================
# Lens measure
# ===========================================

def test_lens_pieces_sit_on_the_unit_circle():
    lens = build_lens_measure(8)
    for i in range(1, 9):
        x = lens.center(i)
        assert np.hypot(*x.coords) == pytest.approx(1.0)
        assert lens.radius(i) == 2.0 ** -i
    assert lens.center(4).coords == pytest.approx((0.0, 1.0), abs=1e-12)


@pytest.mark.parametrize("i_max", [0, 21])
def test_lens_index_range_is_checked(i_max):
    with pytest.raises(InvalidArgumentError):
        build_lens_measure(i_max)


def test_coarse_cells_are_rejected():
    with pytest.raises(InvalidArgumentError):
        build_lens_measure(6, h=0.01)


def test_ball_away_from_the_pieces_is_a_disc():
    lens = build_lens_measure(6)
    m = lens.ball_mass(Point.of(0.0, 0.0), 0.25, tol=1e-3)
    assert m.contains(math.pi / 16, slack=1e-3)
    assert m.hi <= math.pi / 16 + 1e-12


def test_restriction_drops_mass_outside_the_disc():
    full = build_lens_measure(6)
    restricted = build_lens_measure(6, restricted=True)
    x = Point.of(1.0, 0.0)
    assert restricted.ball_mass(x, 0.25, tol=1e-3).hi < full.ball_mass(x, 0.25, tol=1e-3).lo
    assert not restricted.is_probability


def test_nondoubling_needs_the_restricted_measure():
    with pytest.raises(PreconditionError):
        nondoubling_ratios(build_lens_measure(6), [3])


def test_nondoubling_index_is_checked():
    with pytest.raises(InvalidArgumentError):
        nondoubling_ratios(build_lens_measure(6, restricted=True), [7])


def test_unrestricted_lens_stays_doubling():
    lens = build_lens_measure(6)
    centers = [lens.center(i) for i in (3, 5)] + [Point.of(0.0, 0.0)]
    radii = [2.0 ** -k for k in range(3, 9)]
    samples = lens_doubling_ratios(lens, centers, radii)
    assert samples
    assert max(s.ratio_hi for s in samples) <= 40


@pytest.mark.slow
def test_restricted_lens_ratios_grow_like_the_inverse_radius():
    lens = build_lens_measure(12, h=2.0 ** -26, restricted=True)
    ratios = nondoubling_ratios(lens, range(5, 11))
    values = [r.ratio_lo for r in ratios]
    assert all(a < b for a, b in zip(values, values[1:]))
    for r in ratios:
        assert r.ratio_lo >= 0.8 * r.bound
        assert r.bound == pytest.approx(math.pi / (4.0 * 2.0 ** -r.i))
