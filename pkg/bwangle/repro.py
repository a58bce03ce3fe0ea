"""Reproduction suite: recompute every published value and closed form, and compare."""

import logging
import math

import numpy as np
import pandas as pd

from .axioms import check_axioms, reproduce_counterexamples
from .classify import hexagon_mu_bound, upsilon
from .corners import curvature_report, e_map, find_corners, flat_segment_threshold, flat_segment_witness
from .csb import csb_sup, has_angle
from .geometry import euclid_angle, rho_angle, rho_product
from .space import hexagon, hoelder, line, pathological, product_space, structure_report

log = logging.getLogger(__name__)

HEXAGON_RADII = (2.0, 3.0, 5.0)
COLLAPSE_EXPONENTS = (-5.0, -1.0, 0.0, 1.0, 5.0)


class _Checks:
    """Accumulates rows `(check, expected, computed, tolerance, passed)`"""

    def __init__(self):
        self.rows = []

    def close(self, check: str, computed: float, expected: float, tolerance: float):
        passed = bool(abs(computed - expected) <= tolerance)
        self._add(check, expected, computed, tolerance, passed)

    def at_most(self, check: str, computed: float, bound: float, tolerance: float = 0.0):
        self._add(check, f"<= {bound:.12g}", computed, tolerance, bool(computed <= bound + tolerance))

    def at_least(self, check: str, computed: float, bound: float):
        self._add(check, f"> {bound:.12g}", computed, None, bool(computed > bound))

    def flag(self, check: str, computed: bool, expected: bool = True):
        self._add(check, expected, bool(computed), None, bool(computed) == expected)

    def _add(self, check, expected, computed, tolerance, passed):
        log.info(f"{'PASS' if passed else 'FAIL'} {check}: {computed}")
        self.rows.append(
            {"check": check, "expected": expected, "computed": computed, "tolerance": tolerance, "passed": passed}
        )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=["check", "expected", "computed", "tolerance", "passed"])


def _angles(checks: _Checks):
    l1 = hoelder(1)
    checks.close("l1 angle_0((1,0),(0,1)) = pi/2", rho_angle(l1, [1, 0], [0, 1], 0).angle_rad, math.pi / 2, 1e-12)
    checks.close(
        "l1 angle_0((1,0),(1,1)) = arccos(3/4)", rho_angle(l1, [1, 0], [1, 1], 0).angle_rad, math.acos(0.75), 1e-12
    )
    for _, row in reproduce_counterexamples().iterrows():
        checks.close(f"l1 counterexample {row['quantity']}", row["computed"], row["expected"], 1e-12)

    checks.close("hexagon(2) <(1,2)|(-1,2)>_0 = 3", rho_product(hexagon(2), [1, 2], [-1, 2], 0), 3.0, 1e-12)
    for r in HEXAGON_RADII:
        for exponent in (-0.5, 0.0, 1.0):
            expected = (r * r - 1) * (r * r + 1) ** exponent
            checks.close(
                f"hexagon({r:g}) <(1,r)|(-1,r)>_{exponent:g} = (r^2-1)(r^2+1)^rho",
                rho_product(hexagon(r), [1, r], [-1, r], exponent),
                expected,
                1e-12 * max(1.0, abs(expected)),
            )

    outcome = rho_angle(hexagon(3), [1, 3], [-1, 3], -0.5)
    checks.flag("hexagon(3) angle_-0.5((1,3),(-1,3)) undefined", not outcome.defined)
    checks.close("hexagon(3) cosine at rho=-0.5 = 8/sqrt(10)", outcome.cosine, 8 / math.sqrt(10), 1e-12)


def _euclidean_collapse(checks: _Checks, pairs: int = 1000, seed: int = 0):
    space = hoelder(2)
    rng = np.random.default_rng(seed)
    X, Y = rng.normal(size=(pairs, 2)), rng.normal(size=(pairs, 2))
    worst = 0.0
    for rho in COLLAPSE_EXPONENTS:
        for x, y in zip(X, Y):
            worst = max(worst, abs(rho_angle(space, x, y, rho).angle_rad - euclid_angle(x, y)))
    checks.at_most("l2 angles equal Euclidean angles", worst, 1e-9)


def _universal_exponent(checks: _Checks):
    spaces = [
        hoelder(0.5),
        hoelder(1),
        hoelder(2),
        hoelder(3),
        hoelder("inf"),
        hexagon(0.5),
        hexagon(2),
        product_space(line(), line(), 1),
        pathological("b"),
        pathological("c"),
    ]
    for space in spaces:
        checks.at_most(f"{space.label} csb_sup at rho=-1", csb_sup(space, -1).sup_estimate, 1.0, 1e-12)


def _upsilon(checks: _Checks):
    for space in (hoelder(1), hoelder("inf")):
        result = upsilon(space)
        checks.close(f"{space.label} nu = -1", result.nu, -1.0, 1e-3)
        checks.close(f"{space.label} mu = 1", result.mu, 1.0, 1e-3)

    for r in HEXAGON_RADII:
        result = upsilon(hexagon(r))
        checks.at_most(f"hexagon({r:g}) mu below the single-pair bound", result.mu, hexagon_mu_bound(r), 1e-3)


def _corners(checks: _Checks):
    l1_corners = find_corners(hoelder(1))
    checks.close("l1 corner count", len(l1_corners), 4, 0)
    checks.flag("l1 corners are convex", all(corner.kind == "convex" for corner in l1_corners))

    concave = [corner for corner in find_corners(hexagon(2)) if corner.kind == "concave"]
    top = [corner for corner in concave if np.allclose(corner.y_hat, (0, 1))]
    checks.flag("hexagon(2) concave corner at (0,1)", len(top) == 1)
    if top:
        checks.close("hexagon(2) corner m_minus", top[0].m_minus, -1.0, 1e-12)
        checks.close("hexagon(2) corner m_plus", top[0].m_plus, 1.0, 1e-12)

    checks.at_least("hexagon(2) csb_sup at rho=0", csb_sup(hexagon(2), 0).sup_estimate, 1.0)

    l1 = hoelder(1)
    segment = curvature_report(l1).flat_segments[0]
    witness = flat_segment_witness(l1, segment, 1.1)
    checks.close("l1 flat segment pair at rho=1.1 matches (1-t^2)(1+t^2)^rho", witness.value, witness.formula, 1e-9)
    checks.at_least("l1 flat segment pair at rho=1.1", witness.value, 1.0)
    checks.flag("l1 has no 1.1-angle", has_angle(l1, 1.1), expected=False)
    checks.flag("l1 has no -1.1-angle", has_angle(l1, -1.1), expected=False)
    checks.close("flat segment threshold at t=1e-3", flat_segment_threshold(1e-3), 1.0, 1e-5)


def _curvature(checks: _Checks):
    for p, curved, convex in ((0.5, True, False), (1, False, False), (3, True, True)):
        report = curvature_report(hoelder(p))
        checks.flag(f"hoelder({p}) strictly curved", report.strictly_curved, curved)
        checks.flag(f"hoelder({p}) strictly convex", report.strictly_convex, convex)


def _products(checks: _Checks):
    for p, holds in ((2, True), (1, False), (3, False)):
        report = structure_report(product_space(line(), line(), p), tol=1e-12)
        checks.flag(f"line x line (p={p}) parallelogram identity", report.parallelogram_identity_holds, holds)


def _axioms(checks: _Checks):
    report = check_axioms(hoelder(1), 0)
    for axiom in ("An1", "An2", "An3", "An4", "An5", "An6", "An7"):
        checks.flag(f"l1 rho=0 {axiom} passes", report.status(axiom) == "pass")
    for axiom in ("An8", "An9", "An10"):
        checks.flag(f"l1 rho=0 {axiom} fails", report.status(axiom) == "fail")
    checks.close("l2 E(1) for (1,0), (0,1)", e_map(hoelder(2), [1, 0], [0, 1], 1.0), 1 / math.sqrt(2), 1e-12)


def reproduction_suite(include_slow: bool = True) -> pd.DataFrame:
    """Recompute every published value and closed form

    Args:
        include_slow: Whether to include the `(nu, mu)` computations, which run many CSB searches

    Returns:
        A dataframe with one row per check and columns `check`, `expected`, `computed`, `tolerance` and `passed`
    """
    checks = _Checks()
    _angles(checks)
    _euclidean_collapse(checks)
    _universal_exponent(checks)
    if include_slow:
        _upsilon(checks)
    _corners(checks)
    _curvature(checks)
    _products(checks)
    _axioms(checks)

    table = checks.to_frame()
    log.info(f"{table['passed'].sum()} of {len(table)} checks passed")
    return table
