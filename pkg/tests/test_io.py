import json

import numpy as np
import pandas as pd
import pytest

from bwangle.io import RunConfig, format_number, jsonable, render, write_output


@pytest.fixture
def config():
    return RunConfig(
        command="product", space={"family": "hexagon", "r": 2.0}, options={"rho": 0.0}, seed=0, format="json"
    )


def test_format_number():
    assert format_number(0.1 + 0.2) == "0.3"
    assert format_number(1 / 3) == "0.333333333333"
    assert format_number(np.float64(np.inf)) == "inf"
    assert format_number(np.float64(np.nan)) == "nan"
    assert format_number(np.bool_(True)) == "true"
    assert format_number(np.int64(3)) == "3"
    assert format_number(None) == ""
    assert format_number((1.0, 2)) == "[1.0,2]"


def test_jsonable():
    value = {"a": np.float64("nan"), "b": -np.inf, "c": (1, np.int64(2)), "d": np.array([0.5]), 1: np.bool_(False)}
    assert jsonable(value) == {"a": None, "b": "-inf", "c": [1, 2], "d": [0.5], "1": False}


def test_config_echo(config):
    assert config.to_dict() == {
        "command": "product",
        "space": {"family": "hexagon", "r": 2.0},
        "rho": 0.0,
        "seed": 0,
        "format": "json",
        "output": None,
    }

    with pytest.raises(AssertionError):
        RunConfig(command="product", format="xml")


def test_render_json(config):
    data = json.loads(render(config, {"product": 3.0, "Sigma": np.float64(20.0), "witness": None}))
    assert data["config"]["command"] == "product"
    assert data["config"]["space"] == {"family": "hexagon", "r": 2.0}
    assert data["result"] == {"product": 3.0, "Sigma": 20.0, "witness": None}


def test_render_table_flattens(config):
    config.format = "table"
    text = render(config, {"nu": -1.0, "csb_config": {"resolution": 256, "tol": 1e-7}})
    lines = text.splitlines()

    assert lines[0] == "# command: product"
    assert '# space: {"family":"hexagon","r":2.0}' in lines
    assert "# seed: 0" in lines
    assert any("csb_config.resolution" in line and "256" in line for line in lines)
    assert any("csb_config.tol" in line and "1e-07" in line for line in lines)


def test_render_csv_dataframe(config):
    config.format = "csv"
    frame = pd.DataFrame({"theta": [0.0, np.pi], "member": [True, False]})
    lines = render(config, frame).splitlines()

    header = [line for line in lines if line.startswith("#")]
    body = [line for line in lines if not line.startswith("#")]
    assert len(header) == 6
    assert body == ["theta,member", "0,true", "3.14159265359,false"]


def test_write_output(config, tmp_path, capsys):
    config.output = str(tmp_path / "results" / "product.json")
    text = write_output(config, {"product": 3.0})

    assert (tmp_path / "results" / "product.json").read_text() == text
    assert capsys.readouterr().out == ""

    config.output = None
    write_output(config, {"product": 3.0})
    assert json.loads(capsys.readouterr().out)["result"]["product"] == 3.0
