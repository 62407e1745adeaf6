"""Gate runs, metric extraction, parameter sweeps and CSV emission.

A run always starts from the gate input state (|0> + |1>)/sqrt(2) unless the
spec asks for the bare |1> start used by decay-budget comparisons.  Sweep
points are independent; a bounded thread pool may evaluate them in parallel
(the compiled stepper releases the GIL) and the collector preserves grid
order, so serial and parallel output are identical.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .bath import (MaterialParams, bose_occupation, build_spectral_model,
                   spectral_density)
from .engine import GeneratorContext, Trajectory, integrate
from .engine import expected_decays_numeric, fidelity_to
from .errors import DotgateError
from .model import expected_decays_adiabatic, expected_decays_dynamic
from .operators import KET_1, PSI_MINUS, PSI_PLUS, projector
from .pulses import GateSpec, resolve_pulse

SWEEP_VARIABLES = ("delta", "omega", "temperature")
METRIC_NAMES = ("fidelity", "purity_final", "xi_numeric", "xi_analytic",
                "tau_ps", "adiabaticity_max", "trace_drift")
# accepted output selectors; "tau" is shorthand, "purity_trace" requests
# per-point trajectory files
OUTPUT_SELECTORS = ("fidelity", "purity_final", "xi_numeric", "xi_analytic",
                    "tau", "tau_ps", "adiabaticity_max", "purity_trace")

TRAJECTORY_COLUMNS = ("t_ps", "t_scaled", "pop0", "pop1", "popX", "re_coh01",
                      "im_coh01", "purity", "theta_rad", "lambda_mev",
                      "adiabaticity_param", "decay_integral")


@dataclass(frozen=True)
class RunRecord:
    """One resolved gate execution: spec, metrics and bookkeeping."""

    spec: GateSpec
    metrics: dict
    trajectory_path: str | None = None
    timing_ms: float = 0.0
    error: str | None = None


@dataclass(frozen=True)
class SweepSpec:
    """One-variable scan around a fixed gate template."""

    variable: str
    grid: tuple
    template: GateSpec
    outputs: tuple = ("fidelity",)

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(f"unknown sweep variable {self.variable!r}")
        g = tuple(float(v) for v in self.grid)
        if len(g) == 0:
            raise ValueError("sweep grid is empty")
        if len(g) > 1 and not all(b > a for a, b in zip(g, g[1:])):
            raise ValueError("sweep grid must be strictly increasing")
        object.__setattr__(self, "grid", g)
        outs = tuple(self.outputs)
        for o in outs:
            if o not in OUTPUT_SELECTORS:
                raise ValueError(f"unknown output {o!r} (choose from {OUTPUT_SELECTORS})")
        object.__setattr__(self, "outputs", outs)


def build_context(spec: GateSpec) -> GeneratorContext:
    return GeneratorContext(
        pulse=spec.pulse, gamma0=spec.gamma0,
        spectral=build_spectral_model(spec.material),
        temperature=spec.temperature, channels=spec.channels,
        scale_multiplier=spec.spectral_scale, piezo_const=spec.piezo_const)


def initial_density_matrix(spec: GateSpec) -> np.ndarray:
    return projector(KET_1 if spec.initial_state == "one" else PSI_PLUS)


def xi_analytic(spec: GateSpec) -> float:
    if spec.mode == "dynamic":
        return expected_decays_dynamic(spec.pulse.omega0, spec.gamma0)
    return expected_decays_adiabatic(spec.pulse.delta, spec.gamma0)


def scaled_times(spec: GateSpec, times: np.ndarray) -> np.ndarray:
    """Map raw times to the conventional unit interval of each protocol:
    (t/(6 tau) + 1/2) for the Gaussian window, t in pulse durations for the
    square pulse."""
    tau = spec.pulse.tau
    if spec.mode == "adiabatic":
        return times / (6.0 * tau) + 0.5
    return times / tau


def _execute(spec: GateSpec) -> tuple[GateSpec, Trajectory, dict]:
    resolved = replace(spec, pulse=resolve_pulse(spec))
    ctx = build_context(resolved)
    traj = integrate(ctx, initial_density_matrix(resolved),
                     tol=resolved.solver.tol_rel,
                     samples=resolved.solver.samples)
    metrics = {
        "fidelity": fidelity_to(traj.final_state(), PSI_MINUS),
        "purity_final": float(traj.purity[-1]),
        "xi_numeric": expected_decays_numeric(traj),
        "xi_analytic": xi_analytic(resolved),
        "tau_ps": float(resolved.pulse.tau),
        "adiabaticity_max": float(np.max(np.abs(traj.adiabaticity))),
        "trace_drift": traj.max_trace_drift,
    }
    return resolved, traj, metrics


def run_gate(spec: GateSpec, trajectory_path=None) -> RunRecord:
    """Integrate one gate and report its metrics.

    Adiabatic specs without an explicit width are calibrated first; the
    returned record carries the fully resolved spec.
    """
    start = time.perf_counter()
    resolved, traj, metrics = _execute(spec)
    path_str = None
    if trajectory_path is not None:
        write_trajectory_csv(trajectory_path, resolved, traj)
        path_str = str(trajectory_path)
    return RunRecord(spec=resolved, metrics=metrics, trajectory_path=path_str,
                     timing_ms=(time.perf_counter() - start) * 1e3)


def point_spec(s: SweepSpec, value: float) -> GateSpec:
    """Template with the swept variable substituted; widths recalibrate."""
    t = s.template
    if s.variable == "delta":
        return replace(t, pulse=replace(t.pulse, delta=float(value), tau=None, window=None))
    if s.variable == "omega":
        return replace(t, pulse=replace(t.pulse, omega0=float(value), tau=None, window=None))
    return replace(t, temperature=float(value))


def sweep(s: SweepSpec, threads: int = 1, out_path=None,
          trajectory_dir=None) -> list[RunRecord]:
    """Evaluate every grid point independently, in grid order.

    Point failures are recorded (NaN metrics plus the error class) without
    aborting the rest of the scan.
    """
    want_traj = "purity_trace" in s.outputs

    def one(idx_value):
        idx, value = idx_value
        tpath = None
        if want_traj and trajectory_dir is not None:
            tpath = f"{trajectory_dir}/point{idx:03d}.csv"
        try:
            return run_gate(point_spec(s, value), trajectory_path=tpath)
        except (DotgateError, ValueError) as exc:
            nan_metrics = {k: math.nan for k in METRIC_NAMES}
            return RunRecord(spec=s.template, metrics=nan_metrics,
                             error=f"{type(exc).__name__}: {exc}")

    jobs = list(enumerate(s.grid))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(one, jobs))
    else:
        records = [one(j) for j in jobs]
    if out_path is not None:
        write_sweep_csv(out_path, s, records)
    return records


def purity_trace(spec: GateSpec, out_path) -> Trajectory:
    """Run the gate and emit the per-sample trajectory table."""
    resolved, traj, _ = _execute(spec)
    write_trajectory_csv(out_path, resolved, traj)
    return traj


def spectral_report(material: MaterialParams, grid, temperature: float,
                    out_path) -> None:
    """Tabulate J(omega) and the thermal occupation over a frequency grid."""
    model = build_spectral_model(material)
    grid = np.asarray(grid, dtype=float)
    j = np.asarray(spectral_density(model, grid), dtype=float)
    occ = np.array([bose_occupation(w, temperature) if w > 0 else math.nan
                    for w in grid])
    from .config import material_dict
    import json
    header = [
        "dotgate spectral report",
        f"temperature_k: {temperature!r}",
        f"d_e_nm: {model.d_e!r}  d_h_nm: {model.d_h!r}",
        f"w_e_mev: {model.w_e!r}  w_eh_mev: {model.w_eh!r}  w_h_mev: {model.w_h!r}",
        f"prefactor_per_ps_mev3: {model.prefactor!r}",
        "material: " + json.dumps(material_dict(material), sort_keys=True),
    ]
    rows = [(_fmt(w), _fmt(jj), _fmt(nn)) for w, jj, nn in zip(grid, j, occ)]
    _write_csv(out_path, header, ("omega_mev", "j_per_ps", "bose_occupation"), rows)


# ---------------------------------------------------------------------------
# CSV emission: '#'-prefixed provenance block, then an RFC-4180 table


def _fmt(value) -> str:
    return repr(float(value))


def _write_csv(path, header_lines, columns, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _spec_header(spec: GateSpec) -> list[str]:
    from .config import gate_spec_dict
    import json
    return ["config: " + json.dumps(gate_spec_dict(spec), sort_keys=True)]


def write_trajectory_csv(path, spec: GateSpec, traj: Trajectory) -> None:
    tsc = scaled_times(spec, traj.times)
    header = ["dotgate trajectory"] + _spec_header(spec) + [
        f"trace_drift_max: {traj.max_trace_drift!r}",
        f"steps_accepted: {traj.n_accepted}  steps_rejected: {traj.n_rejected}",
    ]
    cols = zip(traj.times, tsc, traj.pop0, traj.pop1, traj.popX,
               traj.coherence01.real, traj.coherence01.imag, traj.purity,
               traj.theta, traj.lambda_mev, traj.adiabaticity,
               traj.decay_integral)
    rows = [tuple(_fmt(v) for v in row) for row in cols]
    _write_csv(path, header, TRAJECTORY_COLUMNS, rows)


def write_sweep_csv(path, s: SweepSpec, records: list[RunRecord]) -> None:
    from .config import sweep_spec_dict
    import json
    sel = ["tau_ps" if o == "tau" else o for o in s.outputs if o != "purity_trace"]
    columns = [s.variable] + sel + ["status"]
    if "purity_trace" in s.outputs:
        columns.append("trajectory_path")
    header = ["dotgate sweep",
              "config: " + json.dumps(sweep_spec_dict(s), sort_keys=True)]
    rows = []
    for value, rec in zip(s.grid, records):
        row = [_fmt(value)]
        row += [_fmt(rec.metrics[name]) for name in sel]
        row.append("ok" if rec.error is None else rec.error.split(":")[0])
        if "purity_trace" in s.outputs:
            row.append(rec.trajectory_path or "")
        rows.append(tuple(row))
    _write_csv(path, header, columns, rows)
