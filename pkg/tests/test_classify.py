import math

import numpy as np
import pandas as pd
import pytest

from bwangle._constants import ClassKeys
from bwangle._errors import NotPositiveDefinite
from bwangle.classify import (
    class_report,
    conjecture_sweep,
    hexagon_family,
    hexagon_mu_bound,
    hoelder_family,
    product_conjecture,
    product_family,
    properness_table,
    rho_grid_from_spec,
    upsilon,
)
from bwangle.csb import has_angle
from bwangle.space import hexagon, hoelder, line, pathological

FAST = {"resolution": 256, "refine": 20}


@pytest.mark.parametrize("p", [1, "inf"])
def test_upsilon_polygonal_norms(p):
    result = upsilon(hoelder(p), **FAST)
    assert result.nu == pytest.approx(-1.0, abs=1e-3)
    assert result.mu == pytest.approx(1.0, abs=1e-3)
    assert result.contains(-1)
    assert result.contains(0)
    assert not result.contains(2)
    assert result.nu_bracket[0] <= result.nu <= result.nu_bracket[1]


def test_upsilon_euclidean_is_unbounded():
    result = upsilon(hoelder(2), **FAST)
    assert result.nu == -math.inf
    assert result.mu == math.inf
    assert not result.nu_attained
    assert result.to_dict()["mu"] == "inf"


@pytest.mark.parametrize("r", [2, 3, 5])
def test_upsilon_hexagon_below_bound(r):
    result = upsilon(hexagon(r), **FAST)
    assert result.mu <= hexagon_mu_bound(r) + 1e-3
    assert result.nu <= -1


def test_hexagon_mu_bound():
    assert hexagon_mu_bound(2) == pytest.approx(-math.log(3) / math.log(5))
    assert hexagon_mu_bound(1) is None


def test_upsilon_not_positive_definite():
    with pytest.raises(NotPositiveDefinite):
        upsilon(pathological("a"))


def test_class_report_l1():
    report = class_report(hoelder(1), [-1, 0, 1.5], **FAST)
    assert report.get(ClassKeys.PDBW)
    assert report.get(ClassKeys.NORM)
    assert not report.get(ClassKeys.IP_SPACE)
    assert report.get(ClassKeys.PDBW_RHO, -1.0)
    assert report.get(ClassKeys.NORM_RHO, 0.0)
    assert not report.get(ClassKeys.PDBW_RHO, 1.5)

    table = report.to_frame()
    assert list(table.columns) == ["class", "rho", "member", "evidence"]
    assert len(table) == 3 + 2 * 3

    with pytest.raises(KeyError):
        report.get(ClassKeys.PDBW_RHO, 7.0)


def test_class_report_not_a_norm():
    report = class_report(hoelder(0.5), [-1], **FAST)
    assert report.get(ClassKeys.PDBW)
    assert not report.get(ClassKeys.NORM)
    assert report.get(ClassKeys.PDBW_RHO, -1.0)
    assert not report.get(ClassKeys.NORM_RHO, -1.0)


def test_class_report_not_positive_definite():
    report = class_report(pathological("a"), [-1])
    assert not report.get(ClassKeys.PDBW)
    assert not report.get(ClassKeys.PDBW_RHO, -1.0)


def test_conjecture_sweep():
    sweep = conjecture_sweep(hoelder_family([1, 2]), [-1, 0, 2], resolution=128, refine=10)
    assert sweep["family_param"].tolist() == ["p=1", "p=2"]
    assert list(sweep.columns[:5]) == ["family_param", "nu", "mu", "nu_attained", "mu_attained"]
    assert sweep["rho=2"].tolist() == [0, 1]
    assert sweep["rho=-1"].tolist() == [1, 1]

    properness = properness_table(sweep).set_index("rho")
    assert properness.loc[2.0, "witnesses_properness"]
    assert not properness.loc[-1.0, "witnesses_properness"]
    assert properness.loc[2.0, "invalid_members"] == "p=1"


def test_families():
    assert [label for label, _ in product_family([1, "inf"])] == ["p=1", "p=inf"]
    assert [space.dimension for _, space in product_family([2])] == [2]
    assert [(label, space.family.is_convex) for label, space in hexagon_family([0.5, 2])] == [
        ("r=0.5", True),
        ("r=2", False),
    ]


def test_product_conjecture_euclidean():
    table = product_conjecture([("line x line", line(), line())], 2, **FAST)
    assert table["pair"].tolist() == ["line x line"]
    for column in ["nu_left", "nu_right", "nu_product"]:
        assert table.loc[0, column] == -math.inf
    for column in ["mu_left", "mu_right", "mu_product"]:
        assert table.loc[0, column] == math.inf


def test_rho_grid_from_spec():
    grid = rho_grid_from_spec("-3:3:41")
    assert len(grid) == 41
    assert grid[0] == -3 and grid[-1] == 3
    np.testing.assert_array_equal(rho_grid_from_spec("1, 2.5"), [1.0, 2.5])


def test_hexagon_lower_endpoint():
    # a convex corner breaks the inequality below -1, whatever the grid resolution
    result = upsilon(hexagon(3), **FAST)
    assert result.nu == pytest.approx(-1, abs=1e-3)
    assert result.nu_attained


def test_l1_endpoints_are_attained():
    l1 = hoelder(1)
    result = upsilon(l1, **FAST)
    assert result.nu_attained
    assert result.mu_attained
    assert has_angle(l1, result.nu, **FAST)
    assert has_angle(l1, result.mu, **FAST)
    assert not has_angle(l1, result.nu - 0.01, **FAST)
    assert not has_angle(l1, result.mu + 0.01, **FAST)


def test_products_of_lines_sweep_like_hoelder():
    grid, options = [-1, 0, 1.5], {"resolution": 128, "refine": 10}
    products = conjecture_sweep(product_family([1, 3]), grid, **options)
    hoelders = conjecture_sweep(hoelder_family([1, 3]), grid, **options)

    assert products["family_param"].tolist() == ["p=1", "p=3"]
    pd.testing.assert_frame_equal(products, hoelders, check_exact=False, atol=1e-3)
