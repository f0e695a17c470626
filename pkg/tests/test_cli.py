import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

CONFIGS = Path(__file__).parent / "configs"
GOLDEN = Path(__file__).parent / "golden"

COMMANDS = ("frame", "congruence", "maxwell", "energy")


def run_cli(args, cwd):
    return subprocess.run([sys.executable, "-m", "frameforge.cli", *args],
                          cwd=cwd, capture_output=True, text=True)


def strip_timestamp(text):
    return "\n".join(line for line in text.splitlines()
                     if '"timestamp"' not in line)


@pytest.mark.parametrize("name", ["const", "rotate"])
def test_golden_reports(name, tmp_path):
    cfg = tmp_path / "config.toml"
    shutil.copy(CONFIGS / f"{name}.toml", cfg)
    proc = run_cli(["all", "--config", str(cfg)], cwd=tmp_path)
    assert proc.returncode == 0, proc.stderr
    for cmd in COMMANDS:
        produced = (tmp_path / "out" / f"{cmd}.json").read_text()
        golden = (GOLDEN / name / f"{cmd}.json").read_text()
        assert strip_timestamp(produced) == strip_timestamp(golden), \
            f"{name}/{cmd}.json deviates from the golden report"


def test_determinism_repeated_runs(tmp_path):
    cfg = CONFIGS / "const.toml"
    texts = []
    for run in ("a", "b"):
        cwd = tmp_path / run
        cwd.mkdir()
        proc = run_cli(["maxwell", "--config", str(cfg)], cwd=cwd)
        assert proc.returncode == 0, proc.stderr
        texts.append(strip_timestamp((cwd / "out" / "maxwell.json").read_text()))
    assert texts[0] == texts[1]


def test_frame_trace_written(tmp_path):
    proc = run_cli(["frame", "--config", str(CONFIGS / "const.toml")],
                   cwd=tmp_path)
    assert proc.returncode == 0
    trace = (tmp_path / "out" / "frame_trace.csv").read_text().splitlines()
    assert trace[0] == "s,kappa,tau,eps1,eps2,eps3"
    assert len(trace) == 502
    report = json.loads((tmp_path / "out" / "frame.json").read_text())
    assert report["schema_version"] == 1
    assert report["summaries"]["kappa"]["max"] < 1e-8  # geodesic


def test_exit_code_validation_errors(tmp_path):
    bad_csv = tmp_path / "bad.csv"
    bad_csv.write_text("s,x0,x1,x2\n0,1,0,0\n")
    proc = run_cli(["frame", "--input", str(bad_csv)], cwd=tmp_path)
    assert proc.returncode == 2
    assert "curve CSV" in proc.stderr

    bad_cfg = tmp_path / "bad.toml"
    bad_cfg.write_text("[frame]\nbogus = 1\n")
    proc = run_cli(["frame", "--config", str(bad_cfg)], cwd=tmp_path)
    assert proc.returncode == 2
    assert "bogus" in proc.stderr

    small = tmp_path / "small.toml"
    small.write_text("[congruence]\nkind = 'const'\nn = [5, 5, 5]\n")
    proc = run_cli(["congruence", "--config", str(small)], cwd=tmp_path)
    assert proc.returncode == 2


def test_exit_code_degenerate(tmp_path):
    cfg = tmp_path / "zerok.toml"
    cfg.write_text(
        "[congruence]\nkind = 'const'\nbase_family = 'great-circle'\n"
        "n = [17, 9, 9]\n")
    proc = run_cli(["maxwell", "--config", str(cfg), "--synthesize"],
                   cwd=tmp_path)
    assert proc.returncode == 3
    assert "degenerate" in proc.stderr


def test_exit_code_residual_failure(tmp_path):
    # an unreachable tolerance turns the honest FD residuals into a FAIL
    proc = run_cli(["congruence", "--config",
                    str(CONFIGS / "rotate.toml"), "--tol", "1e-12"],
                   cwd=tmp_path)
    assert proc.returncode == 4


def test_strict_paper_flag_raises_discrepancy(tmp_path):
    proc = run_cli(["maxwell", "--config", str(CONFIGS / "rotate.toml"),
                    "--strict-paper"], cwd=tmp_path)
    assert proc.returncode == 0, proc.stderr
    report = json.loads((tmp_path / "out" / "maxwell.json").read_text())
    assert any("variant" in f for f in report["flags"])


def test_energy_doubled_panels_stable(tmp_path):
    values = {}
    for panels in (500, 1000):
        cwd = tmp_path / str(panels)
        cwd.mkdir()
        proc = run_cli(["energy", "--config", str(CONFIGS / "const.toml"),
                        "--panels", str(panels)], cwd=cwd)
        assert proc.returncode == 0, proc.stderr
        report = json.loads((cwd / "out" / "energy.json").read_text())
        values[panels] = report["summaries"]["energies"]["energy_T_s"]
    assert abs(values[500] - values[1000]) < 1e-8
