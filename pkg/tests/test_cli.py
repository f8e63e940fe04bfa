import json

import pytest
from click.testing import CliRunner

from src.main import cli


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(cli, ["--log-level", "ERROR", *args])
    return invoke


def payload(result):
    return json.loads(result.stdout)


def test_tower_build(run):
    result = run("tower", "build", "--basis", "1,1;1,-1", "--level", "3")
    assert result.exit_code == 0
    description = payload(result)
    assert description["modulus"] == 6
    assert description["shape_size"] == [9, 9]


def test_tower_build_rejects_bad_basis(run):
    assert run("tower", "build", "--basis", "1,x", "--level", "3").exit_code == 2


@pytest.mark.parametrize("delta, code", [("1/2", 0), ("1/4", 1)])
def test_tower_verify(run, delta, code):
    result = run("tower", "verify", "--basis", "1", "--level", "4", "--generators", "1", "--delta", delta)
    assert result.exit_code == code
    assert payload(result)["passed"] is (code == 0)


def test_cycle_torus(run):
    result = run("cycle", "torus", "--dim", "2")
    assert result.exit_code == 0
    assert payload(result)["arity"] == 2
    assert len(payload(result)["terms"]) == 2


def test_cycle_torus_check(run):
    result = run("cycle", "torus", "--dim", "3", "--check")
    assert result.exit_code == 0
    assert payload(result)["passed"] is True


def test_cycle_torus_unsupported_dimension(run):
    assert run("cycle", "torus", "--dim", "4").exit_code == 1


def test_phi_apply(run, tmp_path):
    chain = tmp_path / "circle.json"
    chain.write_text(json.dumps({"arity": 1, "terms": [{"tuple": [[0, 0], [1, 0]], "coeff": 1}]}), encoding="utf-8")

    image = run("phi", "apply", "--chain", str(chain), "--level", "4")
    assert image.exit_code == 0
    assert payload(image)["essential_norm"] == "1/4"

    estimate = run("phi", "apply", "--chain", str(chain), "--level", "4", "--estimate")
    assert estimate.exit_code == 0
    assert payload(estimate)["essn"] == "1/4"
    assert payload(estimate)["bound"] == "1/2"


def test_phi_apply_missing_chain(run, tmp_path):
    assert run("phi", "apply", "--chain", str(tmp_path / "nope.json"), "--level", "4").exit_code == 1


def test_pipeline_run(run, tmp_path):
    config = tmp_path / "run.toml"
    config.write_text('levels = [4, 8]\n[cycle]\nsource = "torus"\ndim = 1\n', encoding="utf-8")
    csv_path, json_path = tmp_path / "levels.csv", tmp_path / "summary.json"
    result = run("pipeline", "run", "--config", str(config), "--csv", str(csv_path), "--json", str(json_path))
    assert result.exit_code == 0
    assert payload(result)["halving"] is True
    assert csv_path.read_text(encoding="utf-8").startswith("level,delta,l1_z,essn,bound\n")
    assert json.loads(json_path.read_text(encoding="utf-8")) == payload(result)


def test_pipeline_run_without_levels(run, tmp_path):
    config = tmp_path / "run.toml"
    config.write_text('levels = []\n[cycle]\nsource = "torus"\ndim = 1\n', encoding="utf-8")
    assert run("pipeline", "run", "--config", str(config)).exit_code == 1


def test_selftest(run):
    assert run("selftest", "--seed", "3").exit_code == 0
    faulty = run("selftest", "--seed", "3", "--inject-fault")
    assert faulty.exit_code == 1
    assert payload(faulty)["passed"] is False
