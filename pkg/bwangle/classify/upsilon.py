import logging
import math
from dataclasses import dataclass, field
from typing import Callable

from .._errors import NotPositiveDefinite
from .._settings import settings
from ..csb import has_angle
from ..space import SpaceDescriptor, format_extended

log = logging.getLogger(__name__)


@dataclass
class UpsilonResult:
    """The pair `(nu, mu)`: infimum and supremum of the exponents whose angle the space has"""

    nu: float
    mu: float
    nu_attained: bool
    mu_attained: bool
    bracket_tol: float
    rho_cap: float
    csb_config: dict
    nu_bracket: tuple[float, float] = (-math.inf, -1.0)
    mu_bracket: tuple[float, float] = (-1.0, math.inf)
    evaluations: int = 0
    space_id: str = ""
    rho_valid: list[float] = field(default_factory=list, repr=False)

    def contains(self, rho: float, tolerance: float | None = None) -> bool:
        tolerance = self.bracket_tol if tolerance is None else tolerance
        return self.nu - tolerance <= rho <= self.mu + tolerance

    def to_dict(self) -> dict:
        return {
            "space": self.space_id,
            "nu": format_extended(self.nu),
            "mu": format_extended(self.mu),
            "nu_attained": self.nu_attained,
            "mu_attained": self.mu_attained,
            "nu_bracket": [format_extended(v) for v in self.nu_bracket],
            "mu_bracket": [format_extended(v) for v in self.mu_bracket],
            "bracket_tol": self.bracket_tol,
            "rho_cap": self.rho_cap,
            "csb_config": self.csb_config,
            "evaluations": self.evaluations,
        }


def _boundary(valid: Callable[[float], bool], direction: int, bracket_tol: float, rho_cap: float):
    """Last valid exponent on one side of -1, found by doubling steps then bisection"""
    inside, offset = -1.0, 1.0

    while True:
        candidate = -1.0 + direction * offset
        at_cap = abs(candidate) >= rho_cap
        if at_cap:
            candidate = direction * rho_cap
        if not valid(candidate):
            outside = candidate
            break
        inside = candidate
        if at_cap:
            return direction * math.inf, (inside, direction * math.inf)
        offset *= 2

    log.info(f"Boundary bracketed in [{min(inside, outside)}, {max(inside, outside)}]")
    while abs(outside - inside) > bracket_tol:
        middle = (inside + outside) / 2
        if valid(middle):
            inside = middle
        else:
            outside = middle

    return inside, (min(inside, outside), max(inside, outside))


def upsilon(
    space: SpaceDescriptor, bracket_tol: float | None = None, rho_cap: float | None = None, **csb_kwargs
) -> UpsilonResult:
    """Compute `(nu, mu)` by bisection of the CSB predicate around `rho = -1`

    The exponents for which a space has the angle form an interval containing `-1`. Starting from
    `-1`, steps double outward until the predicate fails, then the boundary is bisected down to
    `bracket_tol`. A side still valid at `|rho| = rho_cap` is reported as infinite.

    Args:
        space: A positive definite space
        bracket_tol: Width of the final bracket around each endpoint
        rho_cap: Exponent magnitude beyond which validity is extrapolated to infinity
        csb_kwargs: Forwarded to [`csb_sup`][bwangle.csb.csb_sup] (`resolution`, `refine`, `tol`, `seed`)

    Returns:
        An `UpsilonResult`
    """
    if not space.positive_definite:
        raise NotPositiveDefinite(f"Upsilon is only defined for positive definite spaces, {space.label} is not")
    if not space.continuous_weight:
        log.warning(f"The weight of {space.label} is discontinuous: the endpoints are reported but not guaranteed")

    bracket_tol = settings.bracket_tol if bracket_tol is None else bracket_tol
    rho_cap = settings.rho_cap if rho_cap is None else rho_cap
    assert bracket_tol > 0 and rho_cap > 1, "bracket_tol must be positive and rho_cap larger than 1"

    tested: dict[float, bool] = {}

    def valid(rho: float) -> bool:
        if rho not in tested:
            tested[rho] = has_angle(space, rho, **csb_kwargs)
        return tested[rho]

    mu, mu_bracket = _boundary(valid, +1, bracket_tol, rho_cap)
    nu, nu_bracket = _boundary(valid, -1, bracket_tol, rho_cap)

    result = UpsilonResult(
        nu=nu,
        mu=mu,
        nu_attained=math.isfinite(nu) and valid(nu),
        mu_attained=math.isfinite(mu) and valid(mu),
        bracket_tol=bracket_tol,
        rho_cap=rho_cap,
        csb_config={
            "resolution": csb_kwargs.get("resolution")
            or (settings.csb_resolution if space.dimension == 2 else settings.csb_random_pairs),
            "refine": settings.csb_refine if csb_kwargs.get("refine") is None else csb_kwargs["refine"],
            "tol": csb_kwargs.get("tol") or settings.csb_tolerance,
            "seed": settings.seed if csb_kwargs.get("seed") is None else csb_kwargs["seed"],
        },
        nu_bracket=nu_bracket,
        mu_bracket=mu_bracket,
        evaluations=len(tested),
        space_id=space.label,
        rho_valid=sorted(rho for rho, ok in tested.items() if ok),
    )
    log.info(f"Upsilon of {space.label}: ({nu:.6g}, {mu:.6g})")
    return result


def hexagon_mu_bound(r: float) -> float | None:
    """Upper bound `-log(r**2 - 1) / log(r**2 + 1)` of `mu` for the hexagon weight, from the pair `(1, r)`, `(-1, r)`"""
    if r <= 1:
        return None
    return -math.log(r * r - 1) / math.log(r * r + 1)
