import math

import numpy as np
import pytest

from bwangle._errors import NotPositiveDefinite
from bwangle.axioms import axiom_discrepancy, check_axioms, reproduce_counterexamples
from bwangle.space import hexagon, hoelder, line, pathological


@pytest.fixture
def l1_report():
    return check_axioms(hoelder(1), 0, samples=3000, seed=0)


def test_l1_is_an_angle_space(l1_report):
    for axiom in ["An1", "An2", "An3", "An4", "An5", "An6", "An7"]:
        assert l1_report.status(axiom) == "pass", axiom
    assert l1_report.is_angle_space
    assert l1_report.sample_count == 3000 + 2


def test_l1_counterexamples_are_found(l1_report):
    # the basis pair is checked first, so it is the reported witness
    for axiom in ["An8", "An9", "An10"]:
        result = l1_report.results[axiom]
        assert result.status == "fail"
        assert result.witness == {"x": [1.0, 0.0], "y": [0.0, 1.0]}
        assert result.discrepancy == pytest.approx(abs(2 * math.acos(0.75) - math.pi / 2), abs=1e-12)

    assert set(l1_report.failed) >= {"An8", "An9", "An10"}


def test_euclidean_plane_passes_everything():
    report = check_axioms(hoelder(2), 0.7, samples=2000, seed=3)
    assert report.failed == []
    assert report.status("An11") == "pass"
    assert report.notes == []


def test_undefined_angles_fail_continuity():
    space = hexagon(2)
    report = check_axioms(space, 0, samples=5000, seed=0)
    result = report.results["An1"]
    assert result.status == "fail"
    assert result.witness["kind"] == "undefined"
    assert not report.is_angle_space
    assert len(report.notes) == 1


@pytest.mark.parametrize("space, rho", [(hoelder(1), 0), (hexagon(2), 0), (hexagon(3), -0.5)])
def test_witnesses_replay(space, rho):
    report = check_axioms(space, rho, samples=3000, seed=1)
    for axiom, result in report.results.items():
        if result.status != "fail":
            continue
        replayed = axiom_discrepancy(space, rho, axiom, result.witness)
        assert replayed == pytest.approx(result.discrepancy, rel=1e-9, abs=1e-12), axiom


def test_seeded_reports_are_identical():
    first = check_axioms(hexagon(3), -0.5, samples=3000, seed=7).to_dict()
    second = check_axioms(hexagon(3), -0.5, samples=3000, seed=7).to_dict()
    assert first == second


def test_report_formats(l1_report):
    table = l1_report.to_frame()
    assert table.index.tolist() == [f"An{i}" for i in range(1, 12)]
    assert {"status", "discrepancy", "tolerance", "checked", "excluded", "witness"} <= set(table.columns)

    data = l1_report.to_dict()
    assert data["is_angle_space"]
    assert data["results"]["An8"]["status"] == "fail"


def test_real_line():
    report = check_axioms(line(), 0.5, samples=200)
    assert report.status("An11") == "skipped"
    assert report.is_angle_space


def test_not_positive_definite():
    with pytest.raises(NotPositiveDefinite):
        check_axioms(pathological("a"), 0)


def test_unknown_axiom():
    with pytest.raises(AssertionError):
        axiom_discrepancy(hoelder(1), 0, "An12", {"x": [1, 0], "y": [0, 1]})


def test_reproduce_counterexamples():
    table = reproduce_counterexamples()
    assert len(table) == 11
    assert table["holds"].all()
    np.testing.assert_allclose(table["computed"].iloc[0], np.pi / 2, atol=1e-12)
