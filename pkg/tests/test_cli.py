import csv
import io
import json
import math

import pytest

from amplink.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_se_subcommand(capsys):
    code, out, _ = run_cli(
        capsys, "se", "--alpha", "0.05", "--length", "225", "--segments", "2",
        "--photons", "1e7",
    )
    assert code == 0
    record = json.loads(out)
    assert record["unamplified"]["shannon"] == pytest.approx(7.03, abs=0.01)
    assert record["unamplified"]["holevo"] == pytest.approx(8.47, abs=0.01)
    assert record["fully_amplified"]["shannon"] == pytest.approx(14.14, abs=0.01)
    assert record["AE"] == pytest.approx(2.0, abs=0.02)


def test_optimize_egs(capsys):
    code, out, _ = run_cli(
        capsys, "optimize", "--problem", "egs", "--alpha", "0.05", "--length", "225",
        "--segments", "2", "--photons", "1e7",
    )
    assert code == 0
    record = json.loads(out)
    assert record["problem"] == "egs"
    assert record["savings_pct"] == pytest.approx(55.0, abs=1.0)
    assert record["converged"] is True
    assert record["gains"][-1] == 1.0


def test_optimize_segs(capsys):
    code, out, _ = run_cli(
        capsys, "optimize", "--problem", "segs", "--alpha", "0.05", "--length", "150",
        "--segments", "3", "--photons", "1e7",
    )
    assert code == 0
    record = json.loads(out)
    assert record["se_achieved"] >= record["se_shannon_op"] - 1e-9


def test_optimize_with_explicit_target(capsys):
    code, out, _ = run_cli(
        capsys, "optimize", "--problem", "egs", "--alpha", "0.05", "--length", "225",
        "--segments", "2", "--photons", "1e7", "--target-se", "0",
    )
    assert code == 0
    record = json.loads(out)
    assert record["energy"] == 0.0
    assert record["savings_fraction"] == 1.0


def test_sweep_from_spec_file(tmp_path, capsys):
    spec = {
        "alpha": 0.05,
        "L_values": [225.0],
        "K_values": [2],
        "n_values": [1e7],
        "problems": ["egs"],
        "format": "csv",
    }
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(spec))
    out_path = tmp_path / "grid.csv"
    code, _, _ = run_cli(capsys, "sweep", "--spec", str(spec_path),
                         "--output", str(out_path))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out_path.read_text())))
    assert len(rows) == 1
    assert float(rows[0]["savings_egs_pct"]) == pytest.approx(55.0, abs=1.0)
    assert rows[0]["E_regs"] == ""  # not requested


def test_sweep_flag_overrides(tmp_path, capsys):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps({
        "alpha": 0.05, "L_values": [225.0], "K_values": [2], "n_values": [1e7],
        "problems": ["egs"],
    }))
    code, out, _ = run_cli(capsys, "sweep", "--spec", str(spec_path),
                           "--lengths", "150", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data) == 1
    assert data[0]["L_km"] == 150.0


def test_sweep_byte_identical_runs(tmp_path, capsys):
    args = ["sweep", "--alpha", "0.05", "--lengths", "150,225", "--segments", "2",
            "--photons", "1e7", "--problems", "egs,regs"]
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2


def test_sweep_missing_axes_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "sweep", "--alpha", "0.05")
    assert code == 1
    assert "L_values" in err or "non-empty" in err


def test_continuous_solve(capsys):
    code, out, _ = run_cli(
        capsys, "continuous", "--alpha", "0.05", "--lengths", "184",
        "--photon-cap", "1e7", "--format", "json",
    )
    assert code == 0
    data = json.loads(out)
    assert len(data) == 1
    assert 0.0 < data[0]["gamma_opt"] < 1.0
    assert data[0]["energy"] < data[0]["baseline_energy"]


def test_continuous_curve_mode(capsys):
    code, out, _ = run_cli(
        capsys, "continuous", "--alpha", "0.05", "--lengths", "184",
        "--photon-cap", "1e7", "--curve-points", "5",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 5
    assert float(rows[0]["gamma"]) == 0.0
    assert float(rows[-1]["gamma"]) == 1.0
    ses = [float(r["se_ojdr"]) for r in rows]
    assert ses[-1] > ses[0]


def test_baudscan_csv_and_crossover(capsys):
    code, out, err = run_cli(
        capsys, "baudscan", "--power-w", "1e-3", "--alpha", "0.05", "--length", "185",
        "--baud-min", "1e10", "--baud-max", "1e14", "--points", "9",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 9
    assert "crossover_baud=" in err
    crossover = float(err.split("crossover_baud=")[1].strip())
    assert crossover == pytest.approx(0.44e12, rel=0.10)
    for row in rows:
        assert float(row["rate_ojdr_bps"]) >= float(row["rate_ossr_bps"]) - 1e-6


def test_baudscan_json(capsys):
    code, out, _ = run_cli(
        capsys, "baudscan", "--photon-flux", "7.8e15", "--tau",
        str(math.exp(-0.05 * 185.0)), "--baud-min", "1e10", "--baud-max", "1e14",
        "--points", "5", "--format", "json",
    )
    assert code == 0
    record = json.loads(out)
    assert record["crossover_baud"] is not None
    assert len(record["points"]) == 5


def test_hadamard_subcommand(capsys):
    code, out, _ = run_cli(
        capsys, "hadamard", "--power-w", "1e-3", "--alpha", "0.05", "--length", "185",
        "--baud", "1.8e13", "--orders", "4,8,16,32",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    rates = {int(r["order"]): float(r["rate_bps"]) for r in rows}
    assert rates[4] == pytest.approx(1.3799e12, rel=0.01)
    assert rates[16] == pytest.approx(2.18987e12, rel=0.01)


def test_hadamard_rejects_bad_order(capsys):
    code, _, err = run_cli(
        capsys, "hadamard", "--photon-flux", "1e15", "--tau", "0.5",
        "--baud", "1e12", "--orders", "3",
    )
    assert code == 1
    assert "power of two" in err


def test_missing_flux_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "baudscan", "--tau", "0.5")
    assert code == 1
    assert "photon-flux" in err or "power-w" in err


def test_unwritable_output_is_io_error(tmp_path, capsys):
    code, _, err = run_cli(
        capsys, "se", "--alpha", "0.05", "--length", "100", "--segments", "2",
        "--photons", "1e6", "--output", str(tmp_path / "nope" / "out.json"),
    )
    assert code == 2
    assert "nope" in err


def test_unknown_subcommand_is_usage_error(capsys):
    code, _, _ = run_cli(capsys, "frobnicate")
    assert code == 1
