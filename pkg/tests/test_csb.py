import itertools

import numpy as np
import pytest

from bwangle.csb import csb_sup, has_angle, is_interval, validity_scan
from bwangle.csb._grid import grid_table, random_table
from bwangle.csb.search import nested_resolutions, top_indices
from bwangle.geometry import rho_product
from bwangle.space import hexagon, hoelder, line, pathological, product_space

FAST = {"resolution": 256, "refine": 20}


@pytest.mark.parametrize(
    "space",
    [
        hoelder(0.5),
        hoelder(1),
        hoelder(3),
        hoelder("inf"),
        hexagon(0.5),
        hexagon(2),
        product_space(line(), line(), 1),
        pathological("b"),
        pathological("c"),
    ],
    ids=lambda space: space.label,
)
def test_minus_one_is_universal(space):
    report = csb_sup(space, -1, **FAST)
    assert report.sup_estimate <= 1 + 1e-12
    assert report.holds


def test_euclidean_has_every_angle():
    for rho in (-4, -1, 0, 2, 5):
        assert has_angle(hoelder(2), rho, **FAST)


def test_hexagon_violation():
    report = csb_sup(hexagon(2), 0, **FAST)
    assert report.sup_estimate > 1
    assert not report.holds
    assert report.sup_estimate >= report.grid_estimate

    u, v = (np.asarray(vector) for vector in report.witness)
    assert hexagon(2).weights(u) == pytest.approx(1.0)
    assert hexagon(2).weights(v) == pytest.approx(1.0)


def test_l1_outside_its_interval():
    l1 = hoelder(1)
    assert has_angle(l1, 1, **FAST)
    assert has_angle(l1, 0, **FAST)
    assert not has_angle(l1, 1.1, **FAST)
    assert not has_angle(l1, -1.1, **FAST)


def test_refinement_never_decreases():
    coarse = csb_sup(hoelder(1), 1.5, resolution=64, refine=0)
    refined = csb_sup(hoelder(1), 1.5, resolution=64, refine=30)
    assert refined.sup_estimate >= coarse.sup_estimate
    assert refined.evaluations > coarse.evaluations


@pytest.mark.parametrize("space", [hoelder(3), hexagon(2)], ids=lambda space: space.label)
def test_estimate_grows_with_refinement(space):
    estimates = [csb_sup(space, 2.5, resolution=64, refine=steps).sup_estimate for steps in (0, 1, 5, 20)]
    assert estimates == sorted(estimates)


def test_deterministic():
    first = csb_sup(hexagon(3), 0.5, **FAST).to_dict()
    second = csb_sup(hexagon(3), 0.5, **FAST).to_dict()
    assert first == second


def test_random_pairs_in_dimension_3():
    report = csb_sup(hoelder(2, dimension=3), 2.0, resolution=2000, refine=5, seed=1)
    assert report.holds
    assert report.seed == 1
    assert len(report.witness[0]) == 3


def test_invalid_resolution():
    with pytest.raises(AssertionError):
        csb_sup(hoelder(2), 0, resolution=0)


@pytest.mark.parametrize("space", [hoelder(1), hexagon(2)], ids=lambda space: space.label)
def test_valid_exponents_form_an_interval(space):
    grid = np.linspace(-3, 3, 41)
    indicator = validity_scan(space, grid, **FAST)
    assert indicator.shape == (41,)
    assert is_interval(indicator)
    if space.label == hoelder(1).label:
        np.testing.assert_array_equal(indicator, np.abs(grid) <= 1 + 1e-9)


def test_is_interval():
    assert is_interval(np.array([False, True, True, False]))
    assert is_interval(np.array([False, False]))
    assert not is_interval(np.array([True, False, True]))


def test_top_indices_ties():
    values = np.array([1.0, 3.0, 3.0, 2.0, 3.0])
    assert top_indices(values, 2).tolist() == [1, 2]
    assert top_indices(values, 10).tolist() == [1, 2, 4, 3, 0]


def test_nested_resolutions():
    assert nested_resolutions(hexagon(2), 256) == [256, 128, 64, 32]
    assert nested_resolutions(hexagon(2), 96) == [96, 48]
    assert nested_resolutions(hexagon(2), 20) == [20]
    assert nested_resolutions(hoelder(2, dimension=3), 1000) == [1000]


@pytest.mark.parametrize("space", [hexagon(2), hexagon(3)], ids=lambda space: space.label)
@pytest.mark.parametrize("rho", [0.5, 3])
def test_estimate_grows_with_resolution(space, rho):
    estimates = [csb_sup(space, rho, resolution=n, refine=10).sup_estimate for n in (32, 64, 128)]
    assert estimates == sorted(estimates)


def _vertex_pairs_sup(space, rho) -> float:
    V = space.polygonal_vertices / space.weights(space.polygonal_vertices)[:, None]
    return max(abs(rho_product(space, u, v, rho)) for u, v in itertools.product(V, V))


@pytest.mark.parametrize("resolution", [32, 64, 1024])
@pytest.mark.parametrize("rho", [0.5, 3])
def test_vertex_pairs_bound_the_estimate(resolution, rho):
    space = hexagon(3)
    report = csb_sup(space, rho, resolution=resolution, refine=0)
    # (1, 3) and (-1, 3): |Delta / 4| = 8 and Sigma / 4 = 10
    assert report.sup_estimate >= 8 * 10**rho * (1 - 1e-12)
    assert report.sup_estimate >= _vertex_pairs_sup(space, rho) * (1 - 1e-12)


@pytest.mark.parametrize("space", [hexagon(2), hoelder(1), hoelder(3)], ids=lambda space: space.label)
def test_witness_reaches_the_estimate(space):
    report = csb_sup(space, 1.5, **FAST)
    u, v = report.witness
    assert abs(rho_product(space, u, v, 1.5)) == pytest.approx(report.sup_estimate, rel=1e-12)


def test_hexagon_corner_just_below_minus_one():
    # a convex corner of hexagon(3) breaks the inequality for every rho < -1
    report = csb_sup(hexagon(3), -1.001, **FAST)
    assert report.sup_estimate > 1 + 1e-7
    assert not report.holds


def test_grid_tables_ignore_the_seed():
    grid_table.cache_clear()
    first = csb_sup(hexagon(2), 0, resolution=64, refine=0, seed=1)
    second = csb_sup(hexagon(2), 0, resolution=64, refine=0, seed=2)
    assert first.sup_estimate == second.sup_estimate
    assert grid_table.cache_info().hits >= 1

    random_table.cache_clear()
    csb_sup(hoelder(2, dimension=3), 0, resolution=500, refine=0, seed=1)
    assert random_table.cache_info().currsize == 1


def test_settings_override():
    from bwangle import settings

    default = settings.csb_resolution
    with settings.override(csb_resolution=64, csb_refine=0):
        assert csb_sup(hexagon(2), 0).grid_resolution == 64
    assert settings.csb_resolution == default

    with pytest.raises(ValueError):
        with settings.override(csb_resolution=32):
            raise ValueError("restored anyway")
    assert settings.csb_resolution == default

    with pytest.raises(AssertionError):
        with settings.override(csb_resolutions=32):
            pass
