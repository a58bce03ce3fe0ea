import math

import numpy as np
import pytest

from bwangle._constants import CornerKinds
from bwangle._errors import InvalidSpace, NotPositiveDefinite, ParameterOutOfRange
from bwangle.corners import (
    analytic_corner_product,
    corner_pair_product,
    corner_violation,
    curvature_report,
    e_map,
    e_map_scan,
    find_corners,
    fit_segments,
    flat_segment_threshold,
    flat_segment_value,
    flat_segment_witness,
    optimal_flat_parameter,
    verify_corner,
)
from bwangle.geometry import rho_product
from bwangle.space import hexagon, hoelder, line, pathological, product_space

DELTAS = [0.1 * i for i in range(1, 11)]


def _corner(space, y_hat):
    corners = [corner for corner in find_corners(space) if np.allclose(corner.y_hat, y_hat, atol=1e-9)]
    assert len(corners) == 1
    return corners[0]


def test_l1_corners():
    corners = find_corners(hoelder(1))
    assert len(corners) == 4
    assert all(corner.kind == CornerKinds.CONVEX for corner in corners)

    top = _corner(hoelder(1), (0, 1))
    assert top.x_bar == pytest.approx((1, 0))
    assert top.m_minus == pytest.approx(-1.0, abs=1e-12)
    assert top.m_plus == pytest.approx(1.0, abs=1e-12)
    assert top.delta_max == pytest.approx(1.0)
    assert verify_corner(hoelder(1), top, DELTAS)


def test_hexagon_corners():
    space = hexagon(2)
    corners = find_corners(space)
    assert len(corners) == 6
    assert sum(corner.kind == CornerKinds.CONCAVE for corner in corners) == 2

    top = _corner(space, (0, 1))
    assert top.kind == CornerKinds.CONCAVE
    assert top.m_minus == pytest.approx(-1.0, abs=1e-12)
    assert top.m_plus == pytest.approx(1.0, abs=1e-12)
    assert verify_corner(space, top, DELTAS)

    u, v = top.unit_pair(1.0)
    np.testing.assert_allclose(u, [1, 2], atol=1e-12)
    np.testing.assert_allclose(v, [-1, 2], atol=1e-12)


def test_euclidean_circle_has_no_corner():
    assert find_corners(hoelder(2), 512) == []


def test_sampled_corners():
    # same sphere as l1, but without exact vertices
    space = product_space(line(), line(), 1)
    corners = find_corners(space, 1024)
    assert len(corners) == 4
    assert all(corner.kind == CornerKinds.CONVEX for corner in corners)

    top = [corner for corner in corners if np.allclose(corner.y_hat, (0, 1), atol=1e-9)]
    assert len(top) == 1
    assert top[0].m_minus == pytest.approx(-1.0, abs=1e-9)
    assert top[0].m_plus == pytest.approx(1.0, abs=1e-9)
    assert top[0].delta_max == pytest.approx(1.0)


def test_corner_detection_needs_a_plane():
    with pytest.raises(InvalidSpace):
        find_corners(hoelder(2, dimension=3))

    with pytest.raises(NotPositiveDefinite):
        find_corners(pathological("a"))


@pytest.mark.parametrize("rho", [-2.0, -1.0, 0.0, 1.5])
def test_corner_products_match_closed_form(rho):
    for space, y_hat in [(hoelder(1), (0, 1)), (hexagon(2), (0, 1)), (hexagon(3), (0, -1))]:
        witness = _corner(space, y_hat)
        for delta in DELTAS:
            numeric, analytic = corner_pair_product(space, witness, delta, rho)
            assert numeric == pytest.approx(analytic, abs=1e-9)


def test_hexagon_corner_product():
    witness = _corner(hexagon(2), (0, 1))
    numeric, analytic = corner_pair_product(hexagon(2), witness, 1.0, 0)
    assert numeric == pytest.approx(3.0, abs=1e-9)
    assert analytic == pytest.approx(3.0, abs=1e-12)
    np.testing.assert_allclose(analytic_corner_product(hexagon(2), witness, [0.0, 0.5], 0), [1.0, 2.0])


def test_corner_pair_outside_verified_range():
    witness = _corner(hoelder(1), (0, 1))
    with pytest.raises(ValueError):
        corner_pair_product(hoelder(1), witness, 1.5, 0)


def test_corner_violation():
    witness = _corner(hexagon(2), (0, 1))
    violation = corner_violation(hexagon(2), witness, 0)
    assert violation.violates
    assert violation.value == pytest.approx(3.0, abs=1e-9)
    assert violation.threshold_delta is None

    witness = _corner(hoelder(1), (0, 1))
    assert not corner_violation(hoelder(1), witness, 0).violates

    violation = corner_violation(hoelder(1), witness, -1.5)
    assert violation.violates
    assert 0 < violation.delta < violation.threshold_delta < 0.5


def test_fit_segments_polygon():
    polyline = fit_segments(hexagon(2))
    assert polyline.exact
    assert len(polyline.segments) == 6

    polyline = fit_segments(hoelder(2), 256)
    assert not polyline.exact
    assert polyline.segments == []


@pytest.mark.parametrize(
    "p, curved, convex",
    [(0.5, True, False), (1, False, False), (3, True, True), ("inf", False, False)],
)
def test_curvature_classes(p, curved, convex):
    report = curvature_report(hoelder(p))
    assert report.strictly_curved is curved
    assert report.strictly_convex is convex


def test_curvature_report_l1():
    report = curvature_report(hoelder(1))
    assert len(report.flat_segments) == 4
    assert len(report.corners) == 4
    assert report.resolution is None
    assert len(report.to_dict()["corners"]) == 4


def test_flat_segment_witness():
    l1 = hoelder(1)
    segment = curvature_report(l1).flat_segments[0]
    witness = flat_segment_witness(l1, segment, 1.1)

    assert witness.t == pytest.approx(math.sqrt(0.1 / 2.1))
    assert witness.value == pytest.approx(witness.formula, abs=1e-9)
    assert witness.value > 1
    assert l1.weights(np.asarray(witness.x)) == pytest.approx(1.0)
    assert rho_product(l1, witness.x, witness.y, 1.1) == pytest.approx(witness.value)


def test_flat_segment_formulas():
    assert flat_segment_value(0.0, 3.0) == 1.0
    assert flat_segment_value(0.5, 1.0) == pytest.approx(1 - 0.5**4)
    np.testing.assert_allclose(flat_segment_value(np.array([0.0, 0.5]), 0.0), [1.0, 0.75])

    assert optimal_flat_parameter(1.0) == 0.0
    assert optimal_flat_parameter(3.0) == pytest.approx(math.sqrt(0.5))

    assert flat_segment_threshold(0) == 1.0
    assert flat_segment_threshold(1e-3) == pytest.approx(1.0, abs=1e-5)
    t = 0.3
    assert flat_segment_value(t, flat_segment_threshold(t)) == pytest.approx(1.0, abs=1e-12)
    assert flat_segment_threshold(t) > 1

    with pytest.raises(ValueError):
        flat_segment_threshold(1.0)


@pytest.mark.parametrize("t", [1.0, 1.5, -2.0, [0.2, 1.2]])
def test_flat_segment_value_domain(t):
    with pytest.raises(ParameterOutOfRange):
        flat_segment_value(t, 2.0)


def test_e_map():
    assert e_map(hoelder(2), [1, 0], [0, 1], 1.0) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert e_map(hoelder(1), [1, 0], [0, 1], 0.0) == pytest.approx(0.0, abs=1e-12)
    assert e_map(hoelder(1), [1, 0], [0, 1], 1.0) == pytest.approx(0.75)


@pytest.mark.parametrize("p", [1, 2, 3, "inf"])
def test_e_map_scan(p):
    scan = e_map_scan(hoelder(p), [1, 0], [0, 1])
    assert scan.monotonic
    assert scan.inside
    assert len(scan.t) == 301
    assert scan.to_dict()["min"] < 0 < scan.to_dict()["max"]


def test_e_map_invalid_pairs():
    with pytest.raises(ValueError):
        e_map(hoelder(2), [2, 0], [0, 1], 0.0)

    with pytest.raises(ValueError):
        e_map(hoelder(2), [1, 0], [-1, 0], 0.0)
