import json
import logging
import math

import pytest

from bwangle._logging import set_verbosity
from bwangle.cli.app import run

L1 = '{"family": "hoelder", "p": 1}'
HEXAGON_2 = '{"family": "hexagon", "r": 2}'
HEXAGON_3 = '{"family": "hexagon", "r": 3}'


def _json(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


def test_angle(capsys):
    code = run(["angle", "--space", L1, "--x", "1,0", "--y", "1,1", "--rho", "0", "--format", "json"])
    assert code == 0

    data = _json(capsys)
    assert data["config"]["command"] == "angle"
    assert data["config"]["space"]["family"] == "hoelder"
    assert data["config"]["seed"] == 0
    assert data["result"]["angle_rad"] == pytest.approx(math.acos(0.75), abs=1e-12)


def test_angle_degrees(capsys):
    assert run(["angle", "--space", L1, "--x", "1,0", "--y", "0,1", "--rho", "0", "--degrees", "--format", "json"]) == 0
    assert _json(capsys)["result"]["angle_deg"] == pytest.approx(90.0)


def test_undefined_angle_exit_code(capsys):
    code = run(["angle", "--space", HEXAGON_3, "--x", "1,3", "--y", "-1,3", "--rho=-0.5", "--format", "json"])
    assert code == 2

    result = _json(capsys)["result"]
    assert not result["defined"]
    assert result["cosine"] == pytest.approx(2.5298221281347035, abs=1e-12)


def test_product(capsys):
    code = run(["product", "--space", HEXAGON_2, "--x", "1,2", "--y=-1,2", "--rho", "0", "--format", "json"])
    assert code == 0

    result = _json(capsys)["result"]
    assert result["product"] == pytest.approx(3.0, abs=1e-12)
    assert result["Sigma"] == pytest.approx(20.0)


@pytest.mark.parametrize(
    "argv",
    [
        ["angle", "--space", '{"family": "nope"}', "--x", "1,0", "--y", "0,1", "--rho", "0"],
        ["angle", "--space", "missing.json", "--x", "1,0", "--y", "0,1", "--rho", "0"],
        ["angle", "--space", L1, "--x", "1,a", "--y", "0,1", "--rho", "0"],
        ["angle", "--space", L1, "--x", "1,0,0", "--y", "0,1", "--rho", "0"],
        ["angle", "--space", L1, "--x", "0,0", "--y", "0,1", "--rho", "0"],
        ["angle", "--space", L1, "--x", "1,0", "--y", "0,1"],
        ["angle", "--space", L1, "--x", "1,0", "--y", "0,1", "--rho", "0", "--format", "xml"],
        ["corners", "--space", '{"family": "hoelder", "p": 2, "dimension": 3}'],
        ["sweep", "--family", "circle", "--params", "1"],
    ],
)
def test_invalid_input_exit_code(argv):
    assert run(argv) == 3


def test_output_file(tmp_path, capsys):
    path = tmp_path / "product.csv"
    argv = ["product", "--space", L1, "--x", "1,0", "--y", "1,1", "--rho", "1", "--format", "csv"]
    code = run(argv + ["--output", str(path)])
    assert code == 0
    assert capsys.readouterr().out == ""

    lines = path.read_text().splitlines()
    assert lines[0] == "# command: product"
    assert "# rho: 1" in lines
    assert "key,value" in lines
    assert "product,1.875" in lines


def test_csb(capsys):
    code = run(["csb", "--space", HEXAGON_2, "--rho", "0", "--resolution", "128", "--refine", "10", "--format", "json"])
    assert code == 0

    data = _json(capsys)
    assert data["config"]["resolution"] == 128
    assert data["config"]["refine"] == 10
    assert data["result"]["sup_estimate"] > 1
    assert not data["result"]["holds"]


def test_upsilon(capsys):
    code = run(["upsilon", "--space", L1, "--resolution", "256", "--refine", "20", "--format", "json"])
    assert code == 0

    result = _json(capsys)["result"]
    assert result["nu"] == pytest.approx(-1.0, abs=1e-3)
    assert result["mu"] == pytest.approx(1.0, abs=1e-3)


def test_classify(capsys):
    code = run(["classify", "--space", L1, "--rho", "0,2", "--resolution", "128", "--refine", "5", "--format", "json"])
    assert code == 0

    rows = {(row["class"], row["rho"]): row["member"] for row in _json(capsys)["result"]}
    assert rows[("NORM", None)]
    assert not rows[("IPspace", None)]
    assert rows[("pdBW_rho", 0.0)]
    assert not rows[("pdBW_rho", 2.0)]


def test_corners(capsys):
    assert run(["corners", "--space", HEXAGON_2, "--rho", "0", "--format", "json"]) == 0

    corners = _json(capsys)["result"]
    assert len(corners) == 6
    top = [corner for corner in corners if corner["y_hat"] == pytest.approx([0.0, 1.0], abs=1e-9)]
    assert top[0]["kind"] == "concave"
    assert top[0]["violation_value"] == pytest.approx(3.0, abs=1e-9)


def test_curvature(capsys):
    assert run(["curvature", "--space", L1, "--format", "json"]) == 0

    result = _json(capsys)["result"]
    assert not result["strictly_curved"]
    assert len(result["flat_segments"]) == 4


def test_axioms(capsys):
    assert run(["axioms", "--space", L1, "--rho", "0", "--samples", "500", "--format", "json"]) == 0

    result = _json(capsys)["result"]
    assert result["is_angle_space"]
    assert result["results"]["An8"]["status"] == "fail"


def test_axioms_table(capsys):
    assert run(["axioms", "--space", L1, "--rho", "0", "--samples", "500"]) == 0
    out = capsys.readouterr().out
    assert "An11" in out
    assert "# samples: 500" in out


def test_sweep(capsys):
    argv = ["sweep", "--family", "hoelder", "--params", "1,2", "--rho-grid=-1,2", "--resolution", "128"]
    argv += ["--refine", "5"]
    assert run(argv + ["--format", "json"]) == 0

    rows = _json(capsys)["result"]
    assert [row["family_param"] for row in rows] == ["p=1", "p=2"]
    assert [row["rho=2"] for row in rows] == [0, 1]
    assert rows[1]["mu"] == "inf"


def test_sphere_export(capsys):
    assert run(["sphere-export", "--space", L1, "--resolution", "8"]) == 0

    lines = [line for line in capsys.readouterr().out.splitlines() if not line.startswith("#")]
    assert lines[0] == "theta,x,y"
    assert len(lines) == 9
    assert lines[1] == "0,1,0"


def test_quiet_flag(capsys):
    assert run(["--quiet", "product", "--space", L1, "--x", "1,0", "--y", "0,1", "--rho", "0"]) == 0
    assert logging.getLogger("bwangle").level == logging.WARNING
    set_verbosity()
    assert logging.getLogger("bwangle").level == logging.INFO


def test_seed_option_is_scoped_to_the_run(capsys):
    from bwangle import settings

    before = settings.seed
    args = ["angle", "--space", L1, "--x", "1,0", "--y", "0,1", "--rho", "0", "--format", "json"]
    assert run([*args, "--seed", "5"]) == 0
    assert _json(capsys)["config"]["seed"] == 5
    assert settings.seed == before

    assert run(args) == 0
    assert _json(capsys)["config"]["seed"] == before
