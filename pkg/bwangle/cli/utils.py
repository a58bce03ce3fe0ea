import typer


def parse_vector(text: str) -> list[float]:
    """Parse a comma-separated vector, e.g. `"1,0"` or `"-1,3"`"""
    try:
        return [float(value) for value in text.split(",")]
    except ValueError:
        raise typer.BadParameter(f"Invalid vector {text!r}, expected comma-separated numbers such as '1,0'")


def parse_exponents(text: str) -> list[float]:
    """Parse a comma-separated list of exponents"""
    try:
        return [float(value) for value in text.split(",") if value.strip()]
    except ValueError:
        raise typer.BadParameter(f"Invalid exponents {text!r}, expected comma-separated numbers such as '-1,0,1'")


SPACE_HELPER = (
    "Space descriptor, as inline JSON (e.g. `'{\"family\":\"hoelder\",\"p\":1}'`) or as a path to a JSON file"
)
FORMAT_HELPER = "Output format: `table`, `json` or `csv`"
OUTPUT_HELPER = "Optional path of the output file. If not provided, the result is written to the standard output"
SEED_HELPER = "Seed of every randomized step"
RESOLUTION_HELPER = "Number of grid directions (2-D spaces) or of random pairs (other dimensions) of the CSB search"
REFINE_HELPER = "Number of refinement steps of the CSB search"
TOL_HELPER = "Tolerance of the CSB predicate `sup <= 1 + tol`"
