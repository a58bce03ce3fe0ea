import math

import numpy as np
import pytest

from bwangle._errors import NumericalFailure, ZeroWeight
from bwangle.geometry import (
    euclid_angle,
    pair_geometry,
    rho_angle,
    rho_angles,
    rho_cosines,
    rho_product,
    special_angle,
)
from bwangle.space import hexagon, hoelder, pathological


@pytest.fixture
def l1():
    return hoelder(1)


def test_l1_angles(l1):
    assert rho_angle(l1, [1, 0], [0, 1], 0).angle_rad == pytest.approx(math.pi / 2, abs=1e-12)
    assert rho_angle(l1, [1, 0], [1, 1], 0).angle_rad == pytest.approx(math.acos(0.75), abs=1e-12)


def test_pair_geometry(l1):
    geometry = pair_geometry(l1, [1, 0], [1, 1])
    assert geometry.s == pytest.approx(2.0)
    assert geometry.d == pytest.approx(1.0)
    assert geometry.Sigma == pytest.approx(5.0)
    assert geometry.Delta == pytest.approx(3.0)


def test_special_angles_match_general_formula(l1):
    x, y = [1, 0], [1, 1]
    for which in (1, 0, -1):
        general = rho_angle(l1, x, y, which)
        special = special_angle(l1, x, y, which)
        assert special.cosine == pytest.approx(general.cosine, abs=1e-12)

    assert special_angle(l1, x, y, 1).cosine == pytest.approx(15 / 16)
    assert special_angle(l1, x, y, -1).cosine == pytest.approx(3 / 5)

    with pytest.raises(AssertionError):
        special_angle(l1, x, y, 2)


@pytest.mark.parametrize("r", [2, 3, 5])
@pytest.mark.parametrize("rho", [-0.5, 0, 1])
def test_hexagon_products(r, rho):
    expected = (r * r - 1) * (r * r + 1) ** rho
    assert rho_product(hexagon(r), [1, r], [-1, r], rho) == pytest.approx(expected, rel=1e-12)


def test_undefined_angle():
    outcome = rho_angle(hexagon(3), [1, 3], [-1, 3], -0.5)
    assert not outcome.defined
    assert math.isnan(outcome.angle_rad)
    assert outcome.cosine == pytest.approx(8 / math.sqrt(10), abs=1e-12)
    assert "angle_rad" not in outcome.to_dict()


def test_angle_degrees(l1):
    outcome = rho_angle(l1, [1, 0], [0, 1], 0)
    assert outcome.angle_deg == pytest.approx(90.0)
    assert outcome.to_dict(degrees=True)["angle_deg"] == pytest.approx(90.0)


def test_product_homogeneity(l1):
    x, y = np.array([1.0, -2.0]), np.array([0.5, 3.0])
    for rho in (-2.0, 0.0, 1.5):
        assert rho_product(l1, 3 * x, -2 * y, rho) == pytest.approx(-6 * rho_product(l1, x, y, rho), rel=1e-12)


def test_product_zero_vector(l1):
    assert rho_product(l1, [0, 0], [1, 2], 0.3) == 0.0


def test_angle_zero_vector(l1):
    with pytest.raises(ZeroWeight):
        rho_angle(l1, [0, 0], [1, 2], 0)

    with pytest.raises(ZeroWeight):
        euclid_angle([0, 0], [1, 0])


def test_not_positive_definite_product():
    # the weight vanishes on both axes
    space = pathological("a")
    assert rho_product(space, [1, 0], [1, 1], 0) == 0.0


def test_euclidean_collapse():
    space = hoelder(2)
    rng = np.random.default_rng(0)
    X, Y = rng.normal(size=(200, 2)), rng.normal(size=(200, 2))
    expected = np.array([euclid_angle(x, y) for x, y in zip(X, Y)])

    for rho in (-5, -1, 0, 1, 5):
        angles, cosines = rho_angles(space, X, Y, rho)
        np.testing.assert_allclose(angles, expected, atol=1e-9)
        assert np.all(np.abs(cosines) <= 1 + 1e-12)


def test_vectorized_matches_scalar(l1):
    X = np.array([[1.0, 0.0], [1.0, 1.0], [2.0, -1.0]])
    Y = np.array([[0.0, 1.0], [-1.0, 3.0], [0.5, 0.5]])
    cosines = rho_cosines(l1, X, Y, 0.7)
    for x, y, cosine in zip(X, Y, cosines):
        assert rho_angle(l1, x, y, 0.7).cosine == pytest.approx(cosine, abs=1e-14)


def test_rho_cosines_zero_row(l1):
    with pytest.raises(ZeroWeight):
        rho_cosines(l1, np.array([[0.0, 0.0]]), np.array([[1.0, 0.0]]), 0)


def test_sigma_underflow():
    from bwangle.geometry.rho import cosine_from_terms

    with pytest.raises(NumericalFailure):
        cosine_from_terms(np.array([0.0]), np.array([0.0]), 1.0)


@pytest.mark.parametrize("space", [hoelder(1), hoelder(3), hexagon(2)], ids=lambda space: space.label)
@pytest.mark.parametrize("rho", [-2, 0, 1.5])
def test_product_symmetry_and_self_product(space, rho):
    x, y = [1.0, 0.5], [-0.3, 2.0]
    assert rho_product(space, x, y, rho) == pytest.approx(rho_product(space, y, x, rho), rel=1e-14)
    assert rho_product(space, x, x, rho) == pytest.approx(space.weights(np.asarray(x)) ** 2, rel=1e-12)


def test_angle_independent_of_rho_when_sigma_is_four():
    # in the max weight, s = sqrt(3) and d = 1 for these unit vectors
    space = hoelder("inf")
    x, y = [1.0, math.sqrt(3) - 1], [0.0, 1.0]
    assert pair_geometry(space, x, y).Sigma == pytest.approx(4.0, abs=1e-12)
    for rho in (-3, -1, 0, 1, 3):
        assert rho_angle(space, x, y, rho).angle_rad == pytest.approx(math.pi / 3, abs=1e-12)
