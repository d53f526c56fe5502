import csv
import io
import json
import re
import subprocess
import sys

import pytest

from odlro_lab import cli
from odlro_lab.bose_gas import critical_temperature

NUMBER = re.compile(r"^-?\d\.\d{16}e[+-]\d{2,3}$")


def run(argv, tmp_path, name="out.csv"):
    path = tmp_path / name
    code = cli.main(list(argv) + ["--out", str(path)])
    return code, path.read_text()


def parse_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("# ")
    header = json.loads(lines[0][2:])
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    return header, rows


def test_extract_default(tmp_path):
    code, text = run(["extract"], tmp_path)
    assert code == 0
    header, rows = parse_csv(text)
    assert header["subcommand"] == "extract" and len(rows) == 64
    half = [r for r in rows if abs(float(r["g"]) - 1.5707963267948966) < 1e-15]
    assert len(half) == 1 and float(half[0]["negativity_analytic"]) == pytest.approx(0.5, abs=1e-12)
    assert max(float(r["abs_diff"]) for r in rows) <= 1e-12


def test_extract_single_point(tmp_path):
    _, rows = parse_csv(run(["extract", "--g-points", "1"], tmp_path)[1])
    assert len(rows) == 1 and float(rows[0]["negativity_analytic"]) == 0.0


def test_number_format(tmp_path):
    _, rows = parse_csv(run(["sweep", "--dimension", "1", "--mode-cutoff", "4", "--t-min", "1",
                             "--t-max", "50", "--steps", "3", "--oracle"], tmp_path)[1])
    for row in rows:
        for key, value in row.items():
            if value and key != "error":
                assert NUMBER.match(value), (key, value)


def test_sweep_low_temperature_near_half(tmp_path):
    code, text = run(["sweep", "--steps", "3", "--oracle"], tmp_path)
    assert code == 0
    _, rows = parse_csv(text)
    first = rows[0]
    assert float(first["T_over_Tc"]) == pytest.approx(0.1)
    assert abs(float(first["negativity_analytic"]) - 0.5) <= 0.05
    assert abs(float(first["negativity_analytic"]) - float(first["negativity_oracle"])) <= 1e-9
    assert first["negative_eigenvalue_count"] == f"{1.0:.16e}"


def test_sweep_ratio_across_transition(tmp_path):
    _, rows = parse_csv(run(["sweep", "--t-min", "0.25", "--t-max", "2", "--steps", "2"], tmp_path)[1])
    lo, hi = (float(r["negativity_analytic"]) for r in rows)
    assert lo / hi >= 5


def test_sweep_deep_condensate_chi_norm(tmp_path):
    _, rows = parse_csv(run(["sweep", "--t-min", "0.01", "--steps", "1"], tmp_path)[1])
    assert abs(float(rows[0]["chi_norm_sq"]) - 1) <= 0.05
    assert float(rows[0]["T"]) == pytest.approx(0.01 * critical_temperature(1e4))


def test_sweep_conditioning_failure_sets_error_and_exit_code(tmp_path):
    code, text = run(["sweep", "--dimension", "1", "--partition-a", "0.05", "--partition-b", "0.95",
                      "--steps", "1", "--t-min", "1", "--oracle"], tmp_path)
    assert code == 1
    _, rows = parse_csv(text)
    assert rows[0]["error"].startswith("ConditioningError")
    assert rows[0]["negativity_analytic"]  # the closed form still reports


def test_scan_1d_deep_condensate(tmp_path):
    code, text = run(["scan", "--dimension", "1", "--t-min", "0.01", "--steps", "1", "--separations", "0.5"],
                     tmp_path)
    assert code == 0
    _, rows = parse_csv(text)
    assert len(rows) == 1
    assert float(rows[0]["rho1_offdiag"]) == pytest.approx(1.0, abs=1e-6)
    assert rows[0]["odlro_flag"] == "true"


def test_scan_3d_condensed_flag(tmp_path):
    _, rows = parse_csv(run(["scan", "--t-min", "0.5", "--steps", "1"], tmp_path)[1])
    assert len(rows) == 10
    assert all(r["odlro_flag"] == "true" for r in rows)
    assert float(rows[0]["separation"]) == 0.0


def test_scan_hot_gas_not_flagged(tmp_path):
    _, rows = parse_csv(run(["scan", "--t-min", "3", "--steps", "1", "--separations", "0.5"], tmp_path)[1])
    assert rows[0]["odlro_flag"] == "false"


def test_json_output(tmp_path):
    code, text = run(["extract", "--g-points", "2", "--format", "json"], tmp_path, "out.json")
    assert code == 0
    data = json.loads(text)
    assert [set(r) for r in data] == [{"g", "negativity_analytic", "negativity_oracle", "abs_diff"}] * 2
    assert data[1]["negativity_analytic"] == pytest.approx(0.5, abs=1e-12)


def test_determinism(tmp_path):
    argv = ["sweep", "--dimension", "3", "--mode-cutoff", "4", "--steps", "4", "--oracle"]
    a = run(argv, tmp_path)[1]
    b = run(argv, tmp_path)[1]
    assert a == b


@pytest.mark.parametrize("argv", [
    ["sweep", "--mode-cutoff", "0"],
    ["sweep", "--partition-a", "0.6", "--partition-b", "0.4"],
    ["sweep", "--t-min", "-1"],
    ["sweep", "--particle-number", "0"],
    ["scan", "--separations", "1.5"],
])
def test_invalid_config_exit_2(argv, capsys):
    assert cli.main(argv) == 2
    assert "invalid configuration" in capsys.readouterr().err


def test_unwritable_path_exit_3(tmp_path, capsys):
    assert cli.main(["extract", "--out", str(tmp_path / "missing" / "x.csv")]) == 3
    assert "I/O error" in capsys.readouterr().err


def test_config_precedence(tmp_path, monkeypatch):
    env_cfg = tmp_path / "env.json"
    env_cfg.write_text(json.dumps({"g_points": 3, "steps": 7}))
    file_cfg = tmp_path / "file.json"
    file_cfg.write_text(json.dumps({"g_points": 5}))
    monkeypatch.setenv(cli.CONFIG_ENV, str(env_cfg))

    header, rows = parse_csv(run(["extract"], tmp_path)[1])
    assert len(rows) == 3 and header["steps"] == 7

    header, rows = parse_csv(run(["extract", "--config", str(file_cfg)], tmp_path)[1])
    assert len(rows) == 5 and header["steps"] == 50  # --config replaces the env file

    header, rows = parse_csv(run(["extract", "--config", str(file_cfg), "--g-points", "2"], tmp_path)[1])
    assert len(rows) == 2 and header["g_points"] == 2


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"temperature": 3}))
    assert cli.main(["extract", "--config", str(cfg)]) == 2


def test_header_echoes_resolved_config(tmp_path):
    header, _ = parse_csv(run(["extract", "--g-points", "2", "--seed", "9"], tmp_path)[1])
    assert header["seed"] == 9 and header["dimension"] == 3 and header["mode_cutoff"] == 8


def test_progress_on_stderr(tmp_path, capsys):
    run(["sweep", "--dimension", "1", "--steps", "2", "--t-min", "1"], tmp_path)
    err = capsys.readouterr().err
    assert "[1/2]" in err and "[2/2]" in err


def test_validate_passes(capsys):
    assert cli.main(["validate"]) == 0
    out = capsys.readouterr().out
    assert re.search(r"^(\d+)/\1 properties hold$", out, re.M)
    assert "FAIL" not in out


def test_validate_injected_fault(capsys):
    assert cli.main(["validate", "--inject-fault", "gram"]) != 0
    out = capsys.readouterr().out
    assert "FAIL" in out
    assert "ConditioningError" in out or "singular" in out


def test_console_script_stdout():
    proc = subprocess.run([sys.executable, "-m", "odlro_lab.cli", "extract", "--g-points", "2"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.startswith("# {")
    assert proc.stdout.splitlines()[1] == "g,negativity_analytic,negativity_oracle,abs_diff"
