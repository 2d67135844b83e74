import json
import subprocess
import sys

import pytest

from atom_mirror.cli import main
from atom_mirror.params import DEFAULT_CONFIG, parse_config


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_steady_json(capsys):
    code, out, _ = run(capsys, "steady", "--format", "json", "--r", "1.25")
    assert code == 0
    doc = json.loads(out)
    assert doc["P3"] == pytest.approx(doc["P3_liouvillian"], abs=1e-8)
    assert doc["k31r"] == pytest.approx(2 * 3.141592653589793 * 1.25)


def test_steady_text(capsys):
    code, out, _ = run(capsys, "steady")
    assert code == 0
    assert out.splitlines()[0].startswith("r,5.0")
    assert "np." not in out
    for line in out.splitlines():
        [float(x) for x in line.split(",")[1:]]


def test_dump_config(capsys):
    code, out, _ = run(capsys, "steady", "--dump-config", "--omega1", "3")
    assert code == 0
    assert parse_config(out) == {**DEFAULT_CONFIG, "omega1": 3.0}


def test_config_file_then_flags(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("omega1 = 4\ndelta1 = 1.5\n")
    code, out, _ = run(capsys, "sweep", "--dump-config", "--config", str(cfg), "--delta1", "0.5")
    assert code == 0
    parsed = parse_config(out)
    assert parsed["omega1"] == 4.0 and parsed["delta1"] == 0.5


def test_sweep_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--grid", "1:2:5", "--outputs", "P3,I1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "r [lambda31],k31r [rad],I1 [1e-2 MHz/sr],P3 [1]"
    assert len(lines) == 6


def test_sweep_to_file_deterministic(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert run(capsys, "sweep", "--var", "omega1", "--grid", "0.5:20:40", "--format", "json",
                   "--out", str(p))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


@pytest.mark.parametrize("argv", [
    ["steady", "--gamma1", "0"],
    ["steady", "--r", "-1"],
    ["sweep", "--grid", "3:1:10"],
    ["sweep", "--outputs", "P9"],
    ["steady", "--omega1", "nan"],
])
def test_invalid_input_exit_code(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_missing_config_file(capsys, tmp_path):
    code, _, _ = run(capsys, "steady", "--config", str(tmp_path / "nope.cfg"))
    assert code == 2


def test_preset_summary(capsys):
    code, out, _ = run(capsys, "preset", "fig4", "--summary")
    assert code == 0
    assert json.loads(out)["I1_visibility"] == pytest.approx(1.0)


def test_verify_pass_and_mutation(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] and all("max_residual" in c for c in doc["checks"])
    code, out, _ = run(capsys, "verify", "--mutate", "gamma-sign")
    assert code == 1
    failed = [c["name"] for c in json.loads(out)["checks"] if not c["passed"]]
    assert failed == ["closed_form_vs_liouvillian"]


def test_saturation_command(capsys):
    code, out, _ = run(capsys, "saturation")
    assert code == 0
    assert json.loads(out)["omega_sat"] > 0


def test_module_entry_point_bytes_stable():
    cmd = [sys.executable, "-m", "atom_mirror", "preset", "fig4", "--format", "csv"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.count(b"\n") == 1201
