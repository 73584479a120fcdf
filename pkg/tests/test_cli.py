import json
import subprocess
import sys

import pytest

from epsverify.cli import main
from epsverify.config import load_config
from epsverify.suite import PREREQUISITES, emit_report, run_suite, to_json
from epsverify.zsymmetry import CONDITIONS


def run_json(capsys, *argv):
    code = main(["check", *argv, "--report", "json"])
    return code, json.loads(capsys.readouterr().out)


def test_warped_passes(capsys):
    code, rep = run_json(capsys, "--model", "warped", "--points", "10")
    assert code == 0
    assert set(rep["aggregate"]) == set(PREREQUISITES) | {"signature"} | set(CONDITIONS)
    assert all(v == "pass" for v in rep["aggregate"].values())
    assert all(v == "pass" for v in rep["theorems"].values())
    assert set(rep) >= {"config", "points", "aggregate", "theorems", "version"}
    assert len(rep["points"]) == 10 and set(rep["points"][0]) >= {"coords", "residuals", "verdicts"}


@pytest.mark.parametrize("model", ["flat-control", "perturbed-control"])
def test_controls_fail_with_predicates_na(capsys, model):
    code, rep = run_json(capsys, "--model", model, "--points", "5", "--epsilon", "-1")
    assert code == 1
    assert rep["aggregate"]["para-sasakian"] == "fail"
    assert all(rep["aggregate"][c] == "na" for c in CONDITIONS)


def test_checks_filter(capsys):
    code, rep = run_json(capsys, "--model", "warped", "--points", "3", "--checks", "einstein")
    assert code == 0
    assert set(rep["aggregate"]) == set(PREREQUISITES) | {"signature", "einstein"}
    assert rep["theorems"] == {}
    assert "z-semisymmetric" not in rep["points"][0]["verdicts"]


def test_config_file_and_overrides(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"model": "warped", "epsilon": 1, "psi": "z", "sampling": {"count": 4}}))
    code, rep = run_json(capsys, str(cfg), "--epsilon", "-1", "--seed", "5")
    assert rep["config"]["epsilon"] == -1 and rep["config"]["sampling"]["seed"] == 5
    assert rep["aggregate"]["z-symmetric"] == "fail" and code == 1


@pytest.mark.parametrize("argv", [
    ["check"],
    ["check", "--model", "sphere"],
    ["check", "--model", "warped", "--epsilon", "3"],
    ["check", "--model", "warped", "--checks", "einstein,bogus"],
    ["check", "--model", "warped", "--tol-predicate", "-1"],
    ["check", "/nonexistent/config.json"],
    ["check", "--model", "warped", "--points", "1", "--out", "/nonexistent/dir/report.json"],
    ["frobnicate"],
])
def test_configuration_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err


def test_text_report_and_out_file(tmp_path, capsys):
    out = tmp_path / "r.txt"
    assert main(["check", "--model", "warped", "--points", "2", "--out", str(out)]) == 0
    text = out.read_text()
    assert "einstein" in text and "thm_3_1" in text


def test_json_determinism_and_parallel():
    cfg = load_config({"model": "warped-curved", "epsilon": -1, "sampling": {"count": 12, "seed": 3}})
    a = to_json(run_suite(cfg), include_wall_time=False)
    b = to_json(run_suite(cfg), include_wall_time=False)
    c = to_json(run_suite(cfg, workers=4), include_wall_time=False)
    assert a == b == c
    assert "wall_time" in to_json(run_suite(cfg))


def test_evaluation_error_is_recorded():
    doc = {"model": {
        "coordinates": ["x", "y", "z"],
        "metric": [["log(x)", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
        "phi": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "0"]],
        "xi": ["0", "0", "1"], "eta": ["0", "0", "1"], "epsilon": 1},
        "sampling": {"count": 4, "box": [[-1, -0.5], [0, 1], [0, 1]]}}
    rep = run_suite(load_config(doc))
    assert rep.aggregate["evaluation"] == "fail" and rep.exit_code == 1
    assert all("log" in p.error for p in rep.points)


def test_emit_report_rejects_unknown_format():
    from epsverify.errors import ConfigError

    rep = run_suite(load_config({"model": "warped", "sampling": {"count": 1}}))
    with pytest.raises(ConfigError):
        emit_report(rep, "yaml")


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "epsverify.cli", "check", "--model", "warped",
                           "--points", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "equivalence" in proc.stdout
