import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
import typer

log = logging.getLogger(__name__)

FORMATS = ["table", "json", "csv"]
SIGNIFICANT_DIGITS = 12


@dataclass
class RunConfig:
    """Full effective configuration of a command-line run, echoed in the output header

    Attributes:
        command: Name of the subcommand
        space: Descriptor of the space (as a dictionary), if the command uses one
        options: Effective numerical options, defaults included
        seed: Seed of every randomized step
        format: Output format, one of `"table"`, `"json"` or `"csv"`
        output: Output path, or `None` for the standard output
    """

    command: str
    space: dict | None = None
    options: dict = field(default_factory=dict)
    seed: int = 0
    format: str = "table"
    output: str | None = None

    def __post_init__(self):
        assert self.format in FORMATS, f"Invalid output format {self.format}. Valid formats are {FORMATS}"

    def to_dict(self) -> dict:
        config = {"command": self.command}
        if self.space is not None:
            config["space"] = self.space
        return config | self.options | {"seed": self.seed, "format": self.format, "output": self.output}


def format_number(value) -> str:
    """Text of a scalar, floats with 12 significant digits"""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (list, tuple, dict, np.ndarray)):
        return json.dumps(jsonable(value), separators=(",", ":"))
    return str(value)


def jsonable(value):
    """Convert numpy scalars and arrays, tuples and non-finite floats to plain JSON values"""
    if isinstance(value, dict):
        return {str(key): jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [jsonable(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return float(value)
    return value


def _flatten(data: dict, prefix: str = "") -> dict:
    flat = {}
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict) and value:
            flat |= _flatten(value, f"{name}.")
        else:
            flat[name] = value
    return flat


def _as_frame(payload: dict | pd.DataFrame) -> pd.DataFrame:
    if isinstance(payload, pd.DataFrame):
        return payload
    flat = _flatten(payload)
    return pd.DataFrame({"key": list(flat.keys()), "value": list(flat.values())})


def _header_lines(config: RunConfig) -> list[str]:
    return [f"# {key}: {format_number(value)}" for key, value in config.to_dict().items()]


def render(config: RunConfig, payload: dict | pd.DataFrame) -> str:
    """Render a result, preceded by the run configuration, in the format of the configuration"""
    if config.format == "json":
        result = payload.to_dict(orient="records") if isinstance(payload, pd.DataFrame) else payload
        return json.dumps({"config": jsonable(config.to_dict()), "result": jsonable(result)}, indent=2) + "\n"

    frame = _as_frame(payload).copy()
    for column in frame.columns:
        frame[column] = frame[column].map(format_number)
    header = "\n".join(_header_lines(config)) + "\n"

    if config.format == "csv":
        return header + frame.to_csv(index=False, lineterminator="\n")
    return header + frame.to_string(index=False) + "\n"


def write_output(config: RunConfig, payload: dict | pd.DataFrame) -> str:
    """Render a result and write it to `config.output`, or to the standard output

    Args:
        config: The run configuration (its `format` and `output` are used)
        payload: A dictionary (nested keys are flattened for table and CSV) or a dataframe

    Returns:
        The rendered text
    """
    text = render(config, payload)
    if config.output is None:
        typer.echo(text, nl=False)
    else:
        path = Path(config.output)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n") as f:
            f.write(text)
        log.info(f"Output written to {path}")
    return text
