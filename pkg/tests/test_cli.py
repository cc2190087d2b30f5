"""Command-line interface: JSON outputs, files, exit codes."""

import csv
import json

import numpy as np
import pytest

from defectlab.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.strip()
    return code, json.loads(out.splitlines()[-1]) if out else None


def test_gap_scan_json(capsys):
    code, data = run_cli(capsys, "gap-scan", "--mass", "4.0", "--grid-n", "12")
    assert code == 0
    assert set(data) == {"M", "grid_n", "gap"}
    assert data["M"] == 4.0 and data["grid_n"] == 12
    assert data["gap"] > 0.1


def test_gap_scan_critical(capsys):
    code, data = run_cli(capsys, "gap-scan", "--mass", "3.0", "--grid-n", "12")
    assert code == 0
    assert data["gap"] < 1e-12


def test_winding_json(capsys):
    code, data = run_cli(capsys, "winding", "--mass", "2.0", "--grid-n", "12")
    assert code == 0
    assert set(data) == {"M", "raw", "winding"}
    assert data["winding"] == 1


def test_winding_at_criticality_fails(capsys):
    code, data = run_cli(capsys, "winding", "--mass", "3.0", "--grid-n", "12")
    assert code == 1
    assert "error" in data


def test_pattern_command(tmp_path, capsys):
    code, data = run_cli(capsys, "pattern", "--alpha", "0.75",
                         "--r-max", "6", "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "pattern.csv").exists()
    assert (tmp_path / "adjacency.csv").exists()
    with (tmp_path / "pattern.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == data["n_sites"]


def test_assemble_command(tmp_path, capsys):
    code, data = run_cli(capsys, "assemble", "--alpha", "0.75", "--r-max", "5",
                         "--mass", "2.0", "--dump-operator",
                         "--out", str(tmp_path))
    assert code == 0
    with (tmp_path / "assemble.meta.json").open() as fh:
        meta = json.load(fh)
    assert meta["dim"] == data["dim"]
    with (tmp_path / "operator.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == ["row", "col", "re", "im"]
    # triplet dump is Hermitian: (row, col, v) appears with (col, row, v*)
    entries = {(int(r["row"]), int(r["col"])): complex(float(r["re"]),
                                                       float(r["im"]))
               for r in rows}
    for (r, c), v in list(entries.items())[:200]:
        assert abs(entries[(c, r)].conjugate() - v) < 1e-14


def test_ldos_command(tmp_path, capsys):
    code, data = run_cli(capsys, "ldos", "--alpha", "0.75", "--r-max", "5",
                         "--mass", "2.0", "--energy", "0.0", "--radial",
                         "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "ldos.csv").exists()
    assert (tmp_path / "ldos_radial.csv").exists()
    with (tmp_path / "ldos.meta.json").open() as fh:
        meta = json.load(fh)
    assert meta["epsilon"] == 0.06
    assert meta["energies"] == [0.0]


def test_campaign_command_with_config(tmp_path, capsys):
    cfg = {"campaign": "phase_diagram", "M": [4.0, 2.0],
           "gap_grid_n": 12, "winding_grid_n": 12,
           "output_dir": str(tmp_path / "ignored")}
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(cfg))
    out_dir = tmp_path / "out"
    code, data = run_cli(capsys, "campaign", "phase_diagram",
                         "--config", str(cfg_path), "--out", str(out_dir))
    assert code == 0
    assert data["ok"] is True and data["failed"] == []
    assert (out_dir / "phase_diagram.json").exists()
    assert (out_dir / "manifest.json").exists()


def test_campaign_command_failure_exit_code(tmp_path, capsys):
    cfg = {"campaign": "core_removal", "r_max": [6.0, 0.5], "core_cut": 2.5,
           "ldos": {"energies": [0.0], "method": "shifted-solve"},
           "output_dir": str(tmp_path)}
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(cfg))
    code, data = run_cli(capsys, "campaign", "core_removal",
                         "--config", str(cfg_path))
    assert code == 1
    assert data["failed"] == [0.5]


def test_campaign_name_mismatch(tmp_path, capsys):
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps({"campaign": "m_sweep"}))
    with pytest.raises(SystemExit):
        main(["campaign", "phase_diagram", "--config", str(cfg_path)])
