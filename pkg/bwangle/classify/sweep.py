import logging
import math
from functools import partial

import numpy as np
import pandas as pd

from .._constants import SweepColumns
from .._settings import settings
from ..csb import has_angle
from ..space import SpaceDescriptor, format_extended, hexagon, hoelder, line, product_space
from .upsilon import upsilon

log = logging.getLogger(__name__)

Member = tuple[str, SpaceDescriptor]


def _param(value: float) -> str:
    return str(format_extended(value)) if math.isinf(value) else f"{value:g}"


def hoelder_family(ps) -> list[Member]:
    return [(f"p={_param(float(p))}", hoelder(p)) for p in ps]


def hexagon_family(rs) -> list[Member]:
    return [(f"r={_param(float(r))}", hexagon(r)) for r in rs]


def product_family(
    ps, left: SpaceDescriptor | None = None, right: SpaceDescriptor | None = None
) -> list[Member]:
    """Products `left x right` with the weights `||(a, b)||_p` (two real lines by default)"""
    left = line() if left is None else left
    right = line() if right is None else right
    return [(f"p={_param(float(p))}", product_space(left, right, p)) for p in ps]


def _sweep_row(label: str, space: SpaceDescriptor, rho_grid: list[float], upsilon_kwargs: dict, csb_kwargs: dict):
    result = upsilon(space, **upsilon_kwargs, **csb_kwargs)
    row = {
        SweepColumns.FAMILY_PARAM: label,
        SweepColumns.NU: result.nu,
        SweepColumns.MU: result.mu,
        SweepColumns.NU_ATTAINED: result.nu_attained,
        SweepColumns.MU_ATTAINED: result.mu_attained,
    }
    for rho in rho_grid:
        row[SweepColumns.rho(rho)] = int(has_angle(space, rho, **csb_kwargs))
    return row


def conjecture_sweep(
    members: list[Member],
    rho_grid,
    bracket_tol: float | None = None,
    rho_cap: float | None = None,
    **csb_kwargs,
) -> pd.DataFrame:
    """Upsilon and the `has_angle` indicator over `rho_grid`, for every member of a family

    Rows are independent and run through the parallelization backend of `bwangle.settings`;
    they are returned in the order of `members`.

    Args:
        members: Pairs `(label, space)`, e.g. from [`hoelder_family`][bwangle.classify.hoelder_family]
        rho_grid: Exponents of the indicator columns
        bracket_tol: Forwarded to [`upsilon`][bwangle.classify.upsilon]
        rho_cap: Forwarded to [`upsilon`][bwangle.classify.upsilon]
        csb_kwargs: Forwarded to the CSB search

    Returns:
        A dataframe with the columns `family_param, nu, mu, nu_attained, mu_attained` and one `0/1` column per exponent
    """
    assert len(members) > 0, "The family to sweep is empty"
    rho_grid = [float(rho) for rho in rho_grid]
    upsilon_kwargs = {"bracket_tol": bracket_tol, "rho_cap": rho_cap}

    functions = [partial(_sweep_row, label, space, rho_grid, upsilon_kwargs, csb_kwargs) for label, space in members]
    rows = settings._run_with_backend(functions, desc="Sweep")
    return pd.DataFrame(rows)


def properness_table(sweep: pd.DataFrame) -> pd.DataFrame:
    """For each exponent column, the members having and lacking the angle

    An exponent with members on both sides witnesses that the corresponding class is a proper
    subclass of pdBW (evidence only).
    """
    columns = [column for column in sweep.columns if column.startswith("rho=")]
    records = []
    for column in columns:
        valid = sweep.loc[sweep[column] == 1, SweepColumns.FAMILY_PARAM].tolist()
        invalid = sweep.loc[sweep[column] == 0, SweepColumns.FAMILY_PARAM].tolist()
        records.append(
            {
                "rho": float(column.removeprefix("rho=")),
                "valid_members": " ".join(valid),
                "invalid_members": " ".join(invalid),
                "witnesses_properness": bool(valid and invalid),
            }
        )
    return pd.DataFrame(records)


def product_conjecture(
    factor_pairs: list[tuple[str, SpaceDescriptor, SpaceDescriptor]], p: float, **kwargs
) -> pd.DataFrame:
    """Upsilon of the factors and of the product `A x B` with weight `||(a, b)||_p`, side by side

    Gathers evidence on whether the Upsilon of a product only depends on the Upsilon of its factors.
    """
    records = []
    for label, left, right in factor_pairs:
        factors = [upsilon(left, **kwargs), upsilon(right, **kwargs)]
        product = upsilon(product_space(left, right, p), **kwargs)
        records.append(
            {
                "pair": label,
                "nu_left": factors[0].nu,
                "mu_left": factors[0].mu,
                "nu_right": factors[1].nu,
                "mu_right": factors[1].mu,
                "nu_product": product.nu,
                "mu_product": product.mu,
            }
        )
    return pd.DataFrame(records)


def rho_grid_from_spec(spec: str) -> np.ndarray:
    """Parse `"start:stop:count"` or a comma-separated list of exponents"""
    if ":" in spec:
        start, stop, count = spec.split(":")
        return np.linspace(float(start), float(stop), int(count))
    return np.array([float(value) for value in spec.split(",") if value.strip()])
