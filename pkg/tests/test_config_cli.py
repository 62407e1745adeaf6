import json
import math
from pathlib import Path

import numpy as np
import pytest

import dotgate.engine as engine_mod
from dotgate import cli
from dotgate.bath import GAAS
from dotgate.config import (gate_spec_dict, parse_config, parse_config_dict,
                            sweep_spec_dict)
from dotgate.errors import ConfigError
from dotgate.pulses import GateSpec, PulseSchedule
from dotgate.runner import (SweepSpec, run_gate, spectral_report, sweep,
                            TRAJECTORY_COLUMNS)

FAST_SOLVER = {"tol_rel": 1e-7, "samples": 300}


def write_config(tmp_path: Path, data: dict, name="config.json") -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def read_table(path: Path):
    lines = Path(path).read_text().splitlines()
    comments = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    return comments, body[0].split(","), [ln.split(",") for ln in body[1:]]


def echoed_config(path: Path) -> dict:
    comments, _, _ = read_table(path)
    for ln in comments:
        if ln.startswith("# config: "):
            return json.loads(ln[len("# config: "):])
    raise AssertionError("no config echo in header")


# ---------------------------------------------------------------- parsing


def test_empty_config_fully_defaulted(tmp_path):
    spec = parse_config(write_config(tmp_path, {}))
    assert isinstance(spec, GateSpec)
    assert spec.mode == "adiabatic"
    assert spec.pulse.omega0 == 1.0
    assert spec.pulse.delta == 20.0
    assert spec.pulse.tau is None
    assert spec.gamma0 == 0.01
    assert spec.temperature == 0.0
    assert spec.target_phase == math.pi
    assert spec.channels == frozenset({"radiative", "phonon"})
    assert spec.solver.tol_rel == 1e-9
    assert spec.solver.samples == 2000
    assert spec.spectral_scale == 1.0
    assert spec.material == GAAS


def test_unknown_key_rejected(tmp_path):
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config(write_config(tmp_path, {"omega_mev": 1.0}))
    with pytest.raises(ConfigError, match="material.sound_speed_cms"):
        parse_config(write_config(tmp_path, {"material": {"sound_speed_cms": 1.0}}))


def test_negative_temperature_rejected_with_units(tmp_path):
    with pytest.raises(ConfigError, match=r"temperature_k.*kelvin.*-1"):
        parse_config(write_config(tmp_path, {"temperature_k": -1}))


def test_dynamic_mode_constraints(tmp_path):
    with pytest.raises(ConfigError, match="delta = 0"):
        parse_config(write_config(tmp_path, {"mode": "dynamic", "delta_mev": 2.0}))
    spec = parse_config(write_config(tmp_path, {"mode": "dynamic", "omega0_mev": 0.1}))
    assert spec.pulse.kind == "square" and spec.pulse.delta == 0.0


def test_missing_file_and_bad_json(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        parse_config(tmp_path / "nope.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError, match="invalid JSON"):
        parse_config(bad)


def test_round_trip_gate_spec(tmp_path):
    data = {"mode": "adiabatic", "omega0_mev": 1.5, "delta_mev": 12.0,
            "tau_ps": 33.0, "temperature_k": 7.5, "channels": ["phonon"],
            "spectral_scale": 0.7, "material": {"sound_speed_cm_s": 5.0e5}}
    spec = parse_config(write_config(tmp_path, data))
    again = parse_config_dict(gate_spec_dict(spec))
    assert again == spec


def test_sweep_config_and_round_trip(tmp_path):
    data = {"mode": "adiabatic", "omega0_mev": 1.0, "delta_mev": 5.0,
            "sweep": {"variable": "delta",
                      "grid": {"min": 2.0, "max": 10.0, "count": 5,
                               "scale": "linear"},
                      "outputs": ["xi_numeric", "xi_analytic", "tau"]}}
    s = parse_config(write_config(tmp_path, data))
    assert isinstance(s, SweepSpec)
    assert s.grid == tuple(np.linspace(2.0, 10.0, 5))
    again = parse_config_dict(sweep_spec_dict(s))
    assert again == s


def test_sweep_grid_validation(tmp_path):
    with pytest.raises(ConfigError, match="strictly increasing"):
        parse_config(write_config(
            tmp_path, {"sweep": {"variable": "delta", "grid": [3.0, 2.0]}}))
    with pytest.raises(ConfigError, match="log grid"):
        parse_config(write_config(
            tmp_path, {"sweep": {"variable": "omega",
                                 "grid": {"min": 0.0, "max": 1.0, "count": 3,
                                          "scale": "log"}}}))
    with pytest.raises(ConfigError, match="unknown output"):
        parse_config(write_config(
            tmp_path, {"sweep": {"variable": "delta", "grid": [1.0],
                                 "outputs": ["speed"]}}))


# ---------------------------------------------------------------- runner


def fast_unitary_config():
    return {"mode": "adiabatic", "omega0_mev": 1.0, "delta_mev": 20.0,
            "channels": [], **FAST_SOLVER}


def test_run_gate_metrics_complete(tmp_path):
    spec = parse_config_dict(fast_unitary_config())
    record = run_gate(spec)
    for name in ("fidelity", "purity_final", "xi_numeric", "xi_analytic",
                 "tau_ps", "adiabaticity_max", "trace_drift"):
        assert name in record.metrics
    assert record.metrics["fidelity"] >= 1.0 - 1e-6
    assert record.spec.pulse.tau is not None
    assert record.timing_ms > 0.0


def test_single_point_sweep_matches_run_gate(tmp_path):
    template = parse_config_dict(fast_unitary_config())
    s = SweepSpec(variable="delta", grid=(20.0,), template=template,
                  outputs=("fidelity", "xi_numeric", "tau"))
    records = sweep(s)
    direct = run_gate(template)
    assert records[0].metrics["fidelity"] == direct.metrics["fidelity"]
    assert records[0].metrics["xi_numeric"] == direct.metrics["xi_numeric"]


def test_sweep_records_point_failures(tmp_path):
    # temperature sweep crossing a negative value fails only at that point
    template = parse_config_dict(fast_unitary_config())
    s = SweepSpec(variable="temperature", grid=(-2.0, 0.0), template=template,
                  outputs=("fidelity",))
    out = tmp_path / "sweep.csv"
    records = sweep(s, out_path=out)
    assert records[0].error is not None and "temperature" in records[0].error
    assert records[1].error is None
    _, cols, rows = read_table(out)
    assert cols == ["temperature", "fidelity", "status"]
    assert rows[0][-1] == "ValueError"
    assert rows[1][-1] == "ok"
    assert math.isnan(float(rows[0][1]))


def test_sweep_parallel_identical_output(tmp_path):
    template = parse_config_dict({**fast_unitary_config(), "delta_mev": 5.0})
    s = SweepSpec(variable="delta", grid=(4.0, 6.0, 8.0, 10.0),
                  template=template, outputs=("fidelity", "tau"))
    a, b = tmp_path / "serial.csv", tmp_path / "parallel.csv"
    sweep(s, threads=1, out_path=a)
    sweep(s, threads=3, out_path=b)
    assert a.read_bytes() == b.read_bytes()


def test_sweep_csv_deterministic(tmp_path):
    template = parse_config_dict(fast_unitary_config())
    s = SweepSpec(variable="delta", grid=(10.0, 20.0), template=template,
                  outputs=("fidelity",))
    a, b = tmp_path / "one.csv", tmp_path / "two.csv"
    sweep(s, out_path=a)
    sweep(s, out_path=b)
    assert a.read_bytes() == b.read_bytes()


def test_trajectory_csv_format(tmp_path):
    spec = parse_config_dict(fast_unitary_config())
    out = tmp_path / "traj.csv"
    run_gate(spec, trajectory_path=out)
    comments, cols, rows = read_table(out)
    assert tuple(cols) == TRAJECTORY_COLUMNS
    assert len(rows) == FAST_SOLVER["samples"]
    scaled = np.array([float(r[1]) for r in rows])
    assert scaled[0] == pytest.approx(0.0, abs=1e-12)
    assert scaled[-1] == pytest.approx(1.0, abs=1e-12)
    purity_col = np.array([float(r[7]) for r in rows])
    assert np.max(np.abs(purity_col - 1.0)) < 1e-6   # unitary run stays pure
    echo = echoed_config(out)
    assert parse_config_dict(echo) == run_gate(spec).spec


def test_dynamic_scaled_time_in_pulse_units(tmp_path):
    spec = parse_config_dict({"mode": "dynamic", "omega0_mev": 0.5,
                              "channels": [], **FAST_SOLVER})
    out = tmp_path / "dyn.csv"
    run_gate(spec, trajectory_path=out)
    _, _, rows = read_table(out)
    assert float(rows[-1][1]) == pytest.approx(1.0, abs=1e-12)


def test_spectral_report_contents(tmp_path):
    out = tmp_path / "spectral.csv"
    spectral_report(GAAS, np.linspace(0.0, 15.0, 151), temperature=5.0,
                    out_path=out)
    comments, cols, rows = read_table(out)
    assert cols == ["omega_mev", "j_per_ps", "bose_occupation"]
    assert float(rows[0][1]) == 0.0                       # J(0) = 0
    header_text = "\n".join(comments)
    assert "w_e_mev" in header_text and "2.064" in header_text
    assert "2.429" in header_text and "3.098" in header_text
    j = np.array([float(r[1]) for r in rows])
    ipeak = int(np.argmax(j))
    assert np.min(j[ipeak:]) < 0.05 * j[ipeak]            # inter-lobe dip


# ---------------------------------------------------------------- CLI


def test_cli_gate_and_json(tmp_path, capsys):
    cfg = write_config(tmp_path, fast_unitary_config())
    json_out = tmp_path / "metrics.json"
    code = cli.main(["gate", str(cfg), "--json", str(json_out)])
    assert code == 0
    printed = capsys.readouterr().out
    assert "fidelity = " in printed
    payload = json.loads(json_out.read_text())
    assert payload["metrics"]["fidelity"] >= 1.0 - 1e-6
    assert payload["config"]["tau_ps"] is not None


def test_cli_config_error_exit_code(tmp_path, capsys):
    cfg = write_config(tmp_path, {"temperature_k": -3})
    assert cli.main(["gate", str(cfg)]) == 1
    assert "config error" in capsys.readouterr().err


def test_cli_solver_failure_exit_code(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr(engine_mod, "MAX_STEPS", 5)
    cfg = write_config(tmp_path, fast_unitary_config())
    assert cli.main(["gate", str(cfg)]) == 2
    assert "solver failure" in capsys.readouterr().err


def test_cli_sweep_and_repeat_identical(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        **fast_unitary_config(),
        "sweep": {"variable": "delta", "grid": [10.0, 20.0],
                  "outputs": ["fidelity", "tau"]}})
    out1, out2 = tmp_path / "s1.csv", tmp_path / "s2.csv"
    assert cli.main(["sweep", str(cfg), "--out", str(out1)]) == 0
    assert cli.main(["sweep", str(cfg), "--out", str(out2), "--threads", "2"]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_cli_purity_command(tmp_path):
    cfg = write_config(tmp_path, fast_unitary_config())
    out = tmp_path / "purity.csv"
    assert cli.main(["purity", str(cfg), "--out", str(out)]) == 0
    _, cols, rows = read_table(out)
    assert tuple(cols) == TRAJECTORY_COLUMNS


def test_cli_spectral_command(tmp_path):
    cfg = write_config(tmp_path, {"spectral_grid_mev":
                                  {"min": 0.0, "max": 10.0, "count": 21}})
    out = tmp_path / "spec.csv"
    assert cli.main(["spectral", str(cfg), "--out", str(out)]) == 0
    _, cols, rows = read_table(out)
    assert len(rows) == 21
    assert float(rows[0][0]) == 0.0


def test_cli_gate_rejects_sweep_config(tmp_path, capsys):
    cfg = write_config(tmp_path, {"sweep": {"variable": "delta", "grid": [5.0]}})
    assert cli.main(["gate", str(cfg)]) == 1


def test_run_gate_radiative_error_budget():
    # an emission collapses the superposition onto |1>, which overlaps the
    # target state at 1/2, so the infidelity is half the run's decay count;
    # the run itself gates only the |1> half of the input population
    from dotgate.model import expected_decays_adiabatic
    for delta in (10.0, 20.0, 30.0):
        spec = parse_config_dict({"delta_mev": delta, "channels": ["radiative"],
                                  "tol_rel": 1e-9, "samples": 500})
        record = run_gate(spec)
        xi_run = record.metrics["xi_numeric"]
        infidelity = 1.0 - record.metrics["fidelity"]
        assert abs(infidelity - 0.5 * xi_run) / (0.5 * xi_run) < 0.05
        full_budget = expected_decays_adiabatic(delta, spec.gamma0)
        assert xi_run == pytest.approx(0.5 * full_budget, rel=0.05)


def test_purity_trace_dip_is_mid_pulse(tmp_path):
    # phonon coupling erodes purity only while the drive is on: the loss is
    # concentrated in the central half of the window
    spec = parse_config_dict({"delta_mev": 5.0, "temperature_k": 5.0,
                              "channels": ["phonon"], **FAST_SOLVER})
    from dotgate.runner import purity_trace as run_trace
    traj = run_trace(spec, tmp_path / "trace.csv")
    p = traj.purity
    n = len(p)
    assert p[0] == pytest.approx(1.0, abs=1e-9)
    total_drop = p[0] - np.min(p)
    assert total_drop > 1e-6
    central_drop = p[n // 4] - p[3 * n // 4]
    assert central_drop > 0.8 * total_drop
    assert np.min(p) <= p[-1] + 1e-12


def test_sweep_xi_analytic_is_formula(tmp_path):
    from dotgate.model import expected_decays_adiabatic
    template = parse_config_dict(fast_unitary_config())
    grid = (5.0, 10.0, 20.0)
    s = SweepSpec(variable="delta", grid=grid, template=template,
                  outputs=("xi_analytic",))
    out = tmp_path / "xi.csv"
    sweep(s, out_path=out)
    _, _, rows = read_table(out)
    for (value, row) in zip(grid, rows):
        assert float(row[1]) == expected_decays_adiabatic(value, template.gamma0)


def test_preset_fig5_writes_tables(tmp_path):
    from dotgate.presets import run_preset, PRESET_NAMES
    assert set(PRESET_NAMES) == {"fig4", "fig5", "fig6-left", "fig6-right"}
    with pytest.raises(ValueError, match="unknown preset"):
        run_preset("fig9", tmp_path)
    written = run_preset("fig5", tmp_path / "fig5")
    names = sorted(p.name for p in written)
    assert "fig5_dynamic.csv" in names
    assert "fig5_spectral.csv" in names
    assert sum(n.startswith("fig5_adiabatic_delta_") for n in names) == 4
    for path in written:
        assert path.exists()
    _, cols, rows = read_table(written[0])
    assert tuple(cols) == TRAJECTORY_COLUMNS
