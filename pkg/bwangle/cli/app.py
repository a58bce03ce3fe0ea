import logging

import typer

try:  # typer >= 0.22 vendors click as typer._click
    from typer._click import exceptions as click
except ImportError:
    import click

from .._constants import ExitCodes
from .._errors import BwangleError, NumericalFailure
from .utils import (
    FORMAT_HELPER,
    OUTPUT_HELPER,
    REFINE_HELPER,
    RESOLUTION_HELPER,
    SEED_HELPER,
    SPACE_HELPER,
    TOL_HELPER,
    parse_exponents,
    parse_vector,
)

log = logging.getLogger(__name__)

app = typer.Typer(add_completion=False, pretty_exceptions_enable=False)


@app.callback()
def callback(
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Only log warnings and errors"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Also log debug messages"),
):
    """Generalized rho-angles of balanced-weighted spaces: CSB search, classification, corners and axioms"""
    from .._logging import set_verbosity

    set_verbosity(quiet=quiet, verbose=verbose)


def _emit(command: str, space, options: dict, result, fmt: str, output: str | None, seed: int):
    from bwangle.io import RunConfig, write_output

    config = RunConfig(
        command=command,
        space=None if space is None else space.to_dict(),
        options=options,
        seed=seed,
        format=fmt,
        output=output,
    )
    write_output(config, result)


def _csb_options(resolution: int | None, refine: int | None, tol: float | None, dimension: int) -> dict:
    from bwangle import settings

    if resolution is None:
        resolution = settings.csb_resolution if dimension == 2 else settings.csb_random_pairs
    return {
        "resolution": resolution,
        "refine": settings.csb_refine if refine is None else refine,
        "tol": settings.csb_tolerance if tol is None else tol,
    }


def _seeded(seed: int | None) -> int:
    """Seed of the current command, set for its duration by `run`"""
    from bwangle import settings

    if seed is not None:
        settings.seed = seed
    return settings.seed


@app.command()
def angle(
    space: str = typer.Option(help=SPACE_HELPER),
    x: str = typer.Option(help="First vector, e.g. `1,0`"),
    y: str = typer.Option(help="Second vector, e.g. `1,1`"),
    rho: float = typer.Option(help="The exponent"),
    degrees: bool = typer.Option(False, help="Print the angle in degrees instead of radians"),
    format: str = typer.Option("table", help=FORMAT_HELPER),
    output: str = typer.Option(None, help=OUTPUT_HELPER),
    seed: int = typer.Option(None, help=SEED_HELPER),
):
    """Compute the rho-angle between two vectors. Exits with code 2 if the angle is undefined."""
    from bwangle.geometry import rho_angle
    from bwangle.space import parse_space

    descriptor = parse_space(space)
    outcome = rho_angle(descriptor, parse_vector(x), parse_vector(y), rho)

    options = {"x": parse_vector(x), "y": parse_vector(y), "rho": rho, "degrees": degrees}
    _emit("angle", descriptor, options, outcome.to_dict(degrees), format, output, _seeded(seed))

    if not outcome.defined:
        log.error(f"The {rho}-angle is undefined: the normalized product is {outcome.cosine:.12g}")
        raise typer.Exit(code=ExitCodes.ANGLE_UNDEFINED)


@app.command()
def product(
    space: str = typer.Option(help=SPACE_HELPER),
    x: str = typer.Option(help="First vector, e.g. `1,0`"),
    y: str = typer.Option(help="Second vector, e.g. `1,1`"),
    rho: float = typer.Option(help="The exponent"),
    format: str = typer.Option("table", help=FORMAT_HELPER),
    output: str = typer.Option(None, help=OUTPUT_HELPER),
    seed: int = typer.Option(None, help=SEED_HELPER),
):
    """Compute the rho-product of two vectors, with the weights of the sum and difference of their normalizations"""
    from bwangle.geometry import pair_geometry, rho_product
    from bwangle.space import parse_space

    descriptor = parse_space(space)
    vx, vy = parse_vector(x), parse_vector(y)
    result = {"product": rho_product(descriptor, vx, vy, rho)} | pair_geometry(descriptor, vx, vy).to_dict()

    _emit("product", descriptor, {"x": vx, "y": vy, "rho": rho}, result, format, output, _seeded(seed))


@app.command()
def csb(
    space: str = typer.Option(help=SPACE_HELPER),
    rho: float = typer.Option(help="The exponent"),
    resolution: int = typer.Option(None, help=RESOLUTION_HELPER),
    refine: int = typer.Option(None, help=REFINE_HELPER),
    tol: float = typer.Option(None, help=TOL_HELPER),
    format: str = typer.Option("table", help=FORMAT_HELPER),
    output: str = typer.Option(None, help=OUTPUT_HELPER),
    seed: int = typer.Option(None, help=SEED_HELPER),
):
    """Search for violations of the Cauchy-Schwarz-Bunjakowsky inequality of the rho-product"""
    from bwangle.csb import csb_sup
    from bwangle.space import parse_space

    descriptor = parse_space(space)
    seed = _seeded(seed)
    options = _csb_options(resolution, refine, tol, descriptor.dimension)
    report = csb_sup(descriptor, rho, seed=seed, **options)

    _emit("csb", descriptor, {"rho": rho} | options, report.to_dict(), format, output, seed)


@app.command()
def upsilon(
    space: str = typer.Option(help=SPACE_HELPER),
    bracket_tol: float = typer.Option(None, help="Width of the final bracket around each endpoint"),
    rho_cap: float = typer.Option(None, help="Exponent magnitude beyond which validity is extrapolated to infinity"),
    resolution: int = typer.Option(None, help=RESOLUTION_HELPER),
    refine: int = typer.Option(None, help=REFINE_HELPER),
    tol: float = typer.Option(None, help=TOL_HELPER),
    format: str = typer.Option("table", help=FORMAT_HELPER),
    output: str = typer.Option(None, help=OUTPUT_HELPER),
    seed: int = typer.Option(None, help=SEED_HELPER),
):
    """Compute `(nu, mu)`, the infimum and supremum of the exponents whose angle the space has"""
    from bwangle import settings
    from bwangle.classify import upsilon as compute_upsilon
    from bwangle.space import parse_space

    descriptor = parse_space(space)
    seed = _seeded(seed)
    options = {
        "bracket_tol": settings.bracket_tol if bracket_tol is None else bracket_tol,
        "rho_cap": settings.rho_cap if rho_cap is None else rho_cap,
    }
    csb_options = _csb_options(resolution, refine, tol, descriptor.dimension)
    result = compute_upsilon(descriptor, **options, seed=seed, **csb_options)

    _emit("upsilon", descriptor, options | csb_options, result.to_dict(), format, output, seed)


@app.command()
def classify(
    space: str = typer.Option(help=SPACE_HELPER),
    rho: str = typer.Option("-1,0,1", help="Comma-separated exponents of the classes `pdBW_rho` and `NORM_rho`"),
    samples: int = typer.Option(None, help="Number of random pairs of the structure checks"),
    resolution: int = typer.Option(None, help=RESOLUTION_HELPER),
    refine: int = typer.Option(None, help=REFINE_HELPER),
    tol: float = typer.Option(None, help=TOL_HELPER),
    format: str = typer.Option("table", help=FORMAT_HELPER),
    output: str = typer.Option(None, help=OUTPUT_HELPER),
    seed: int = typer.Option(None, help=SEED_HELPER),
):
    """Decide (by sampling and search) the memberships of a space in pdBW, NORM, IPspace, pdBW_rho and NORM_rho"""
    from bwangle import settings
    from bwangle.classify import class_report
    from bwangle.space import parse_space

    descriptor = parse_space(space)
    seed = _seeded(seed)
    exponents = parse_exponents(rho)
    samples = settings.structure_samples if samples is None else samples
    csb_options = _csb_options(resolution, refine, tol, descriptor.dimension)
    report = class_report(descriptor, exponents, samples=samples, seed=seed, **csb_options)

    options = {"rho": exponents, "samples": samples} | csb_options
    _emit("classify", descriptor, options, report.to_frame(), format, output, seed)


@app.command()
def corners(
    space: str = typer.Option(help=SPACE_HELPER),
    resolution: int = typer.Option(None, help="Number of sampled directions for non-polygonal spheres"),
    rho: float = typer.Option(None, help="If provided, also report the largest corner-pair value at this exponent"),
    format: str = typer.Option("table", help=FORMAT_HELPER),
    output: str = typer.Option(None, help=OUTPUT_HELPER),
    seed: int = typer.Option(None, help=SEED_HELPER),
):
    """Detect the convex and concave corners of the unit sphere of a 2-D space"""
    import pandas as pd

    from bwangle import settings
    from bwangle.corners import corner_violation, find_corners
    from bwangle.space import parse_space

    descriptor = parse_space(space)
    resolution = settings.sphere_resolution if resolution is None else resolution
    witnesses = find_corners(descriptor, resolution)

    rows = []
    for witness in witnesses:
        row = witness.to_dict()
        if rho is not None:
            violation = corner_violation(descriptor, witness, rho)
            row |= {f"violation_{key}": value for key, value in violation.to_dict().items()}
        rows.append(row)

    columns = ["y_hat", "x_bar", "m_minus", "m_plus", "kind", "delta_max"]
    table = pd.DataFrame(rows) if rows else pd.DataFrame(columns=columns)
    options = {"resolution": resolution, "rho": rho}
    _emit("corners", descriptor, options, table, format, output, _seeded(seed))


@app.command()
def curvature(
    space: str = typer.Option(help=SPACE_HELPER),
    resolution: int = typer.Option(None, help="Number of sampled directions for non-polygonal spheres"),
    format: str = typer.Option("table", help=FORMAT_HELPER),
    output: str = typer.Option(None, help=OUTPUT_HELPER),
    seed: int = typer.Option(None, help=SEED_HELPER),
):
    """Decide whether the unit sphere of a 2-D space is strictly curved and strictly convex"""
    from bwangle import settings
    from bwangle.corners import curvature_report
    from bwangle.space import parse_space

    descriptor = parse_space(space)
    seed = _seeded(seed)
    resolution = settings.sphere_resolution if resolution is None else resolution
    report = curvature_report(descriptor, resolution)

    _emit("curvature", descriptor, {"resolution": resolution}, report.to_dict(), format, output, seed)


@app.command()
def axioms(
    space: str = typer.Option(help=SPACE_HELPER),
    rho: float = typer.Option(help="The exponent"),
    samples: int = typer.Option(None, help="Number of random pairs"),
    format: str = typer.Option("table", help=FORMAT_HELPER),
    output: str = typer.Option(None, help=OUTPUT_HELPER),
    seed: int = typer.Option(None, help=SEED_HELPER),
):
    """Check the angle-space properties An1 to An11 of the rho-angle on seeded samples"""
    from bwangle import settings
    from bwangle.axioms import check_axioms
    from bwangle.space import parse_space

    descriptor = parse_space(space)
    seed = _seeded(seed)
    samples = settings.axiom_samples if samples is None else samples
    report = check_axioms(descriptor, rho, samples=samples, seed=seed)

    result = report.to_dict() if format == "json" else report.to_frame().reset_index()
    _emit("axioms", descriptor, {"rho": rho, "samples": samples}, result, format, output, seed)


@app.command()
def sweep(
    family: str = typer.Option(help="Family to sweep: `hoelder`, `hexagon` or `product` (two real lines)"),
    params: str = typer.Option(help="Comma-separated family parameters, e.g. `0.5,1,2,inf`"),
    rho_grid: str = typer.Option("-3:3:41", help="Exponents of the indicator columns, as `start:stop:count` or a list"),
    bracket_tol: float = typer.Option(None, help="Width of the final bracket around each endpoint"),
    rho_cap: float = typer.Option(None, help="Exponent magnitude beyond which validity is extrapolated to infinity"),
    resolution: int = typer.Option(None, help=RESOLUTION_HELPER),
    refine: int = typer.Option(None, help=REFINE_HELPER),
    tol: float = typer.Option(None, help=TOL_HELPER),
    format: str = typer.Option("table", help=FORMAT_HELPER),
    output: str = typer.Option(None, help=OUTPUT_HELPER),
    seed: int = typer.Option(None, help=SEED_HELPER),
):
    """Compute `(nu, mu)` and the angle indicator over a grid of exponents, for every member of a family"""
    from bwangle import settings
    from bwangle.classify import conjecture_sweep, hexagon_family, hoelder_family, product_family, rho_grid_from_spec
    from bwangle.space import parse_extended

    families = {"hoelder": hoelder_family, "hexagon": hexagon_family, "product": product_family}
    assert family in families, f"Invalid family {family}. Valid families are {list(families)}"

    seed = _seeded(seed)
    members = families[family]([parse_extended(value) for value in params.split(",")])
    grid = rho_grid_from_spec(rho_grid)
    options = {
        "family": family,
        "params": params,
        "rho_grid": grid.tolist(),
        "bracket_tol": settings.bracket_tol if bracket_tol is None else bracket_tol,
        "rho_cap": settings.rho_cap if rho_cap is None else rho_cap,
    }
    csb_options = _csb_options(resolution, refine, tol, 2)
    table = conjecture_sweep(
        members, grid, bracket_tol=options["bracket_tol"], rho_cap=options["rho_cap"], seed=seed, **csb_options
    )

    _emit("sweep", None, options | csb_options, table, format, output, seed)


@app.command("sphere-export")
def sphere_export(
    space: str = typer.Option(help=SPACE_HELPER),
    resolution: int = typer.Option(None, help="Number of sampled directions"),
    format: str = typer.Option("csv", help=FORMAT_HELPER),
    output: str = typer.Option(None, help=OUTPUT_HELPER),
    seed: int = typer.Option(None, help=SEED_HELPER),
):
    """Export the `(theta, x, y)` points of the unit sphere of a 2-D space, e.g. for plotting"""
    from bwangle import settings
    from bwangle.space import parse_space, sphere_polyline

    descriptor = parse_space(space)
    resolution = settings.sphere_resolution if resolution is None else resolution
    table = sphere_polyline(descriptor, resolution)

    _emit("sphere-export", descriptor, {"resolution": resolution}, table, format, output, _seeded(seed))


@app.command()
def repro(
    fast: bool = typer.Option(False, help="Skip the `(nu, mu)` computations, which run many CSB searches"),
    format: str = typer.Option("table", help=FORMAT_HELPER),
    output: str = typer.Option(None, help=OUTPUT_HELPER),
    seed: int = typer.Option(None, help=SEED_HELPER),
):
    """Recompute every published value and closed form. Exits with code 4 if a check fails."""
    from bwangle.repro import reproduction_suite

    seed = _seeded(seed)
    table = reproduction_suite(include_slow=not fast)
    _emit("repro", None, {"fast": fast}, table, format, output, seed)

    if not table["passed"].all():
        log.error(f"{(~table['passed']).sum()} reproduction checks failed")
        raise typer.Exit(code=ExitCodes.NUMERICAL_FAILURE)


def run(argv: list[str] | None = None) -> int:
    """Run the command line on `argv` and return its exit code

    Invalid spaces and arguments exit with code 3, numerical failures with code 4, and an undefined
    angle (command `angle`) with code 2. A `--seed` option only applies to this run.
    """
    from bwangle import settings

    try:
        with settings.override(seed=settings.seed):
            result = app(args=argv, standalone_mode=False, prog_name="bwangle")
    except click.ClickException as e:
        e.show()
        return ExitCodes.INVALID_INPUT
    except click.Abort:
        log.error("Aborted")
        return ExitCodes.INVALID_INPUT
    except (NumericalFailure, FloatingPointError) as e:
        log.error(f"Numerical failure: {e}")
        return ExitCodes.NUMERICAL_FAILURE
    except (AssertionError, BwangleError, ValueError) as e:
        log.error(f"Invalid input: {e}")
        return ExitCodes.INVALID_INPUT

    return result if isinstance(result, int) else ExitCodes.OK
