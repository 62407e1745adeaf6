"""Strict JSON configuration parsing with full defaulting and echo.

Unknown keys are errors, every key carries its unit in the name, and the
fully resolved spec is serializable back to an identical config (the echo
embedded in every output file re-parses to the same spec).
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .bath import MaterialParams
from .errors import ConfigError
from .pulses import GateSpec, PulseSchedule, SolverOptions
from .runner import OUTPUT_SELECTORS, SWEEP_VARIABLES, SweepSpec

_MATERIAL_KEYS = {
    "d_e_coupling_ev": ("d_e_coupling", "eV"),
    "d_h_coupling_ev": ("d_h_coupling", "eV"),
    "mass_density_g_cm3": ("mass_density", "g/cm^3"),
    "sound_speed_cm_s": ("sound_speed", "cm/s"),
    "m_e_eff_m0": ("m_e_eff", "electron masses"),
    "m_h_eff_m0": ("m_h_eff", "electron masses"),
    "confinement_j_m2": ("confinement", "J/m^2"),
}

_TOP_KEYS = ("mode", "omega0_mev", "delta_mev", "tau_ps", "gamma0_per_ps",
             "temperature_k", "target_phase_rad", "channels", "tol_rel",
             "samples", "spectral_scale", "initial_state",
             "piezo_const_ev_s_m", "material", "sweep", "spectral_grid_mev")

_SWEEP_KEYS = ("variable", "grid", "outputs")
_GRID_KEYS = ("min", "max", "count", "scale")


def _fail(path: str, message: str):
    raise ConfigError(f"{path}: {message}")


def _number(d: dict, key: str, default, path: str, unit: str,
            minimum=None, strict_min=False, nullable=False):
    if key not in d:
        return default
    v = d[key]
    if v is None and nullable:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(f"{path}{key}", f"expected a number in {unit}, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        _fail(f"{path}{key}", f"expected a finite number in {unit}, got {v!r}")
    if minimum is not None:
        if strict_min and not v > minimum:
            _fail(f"{path}{key}", f"must be > {minimum} ({unit}), got {v}")
        if not strict_min and not v >= minimum:
            _fail(f"{path}{key}", f"must be >= {minimum} ({unit}), got {v}")
    return v


def _check_keys(d: dict, allowed, path: str):
    for k in d:
        if k not in allowed:
            _fail(f"{path}{k}", f"unknown key (allowed: {', '.join(sorted(allowed))})")


def _material_from(d: dict, path: str) -> MaterialParams:
    _check_keys(d, _MATERIAL_KEYS, path)
    kwargs = {}
    defaults = MaterialParams()
    for key, (attr, unit) in _MATERIAL_KEYS.items():
        kwargs[attr] = _number(d, key, getattr(defaults, attr), path, unit,
                               minimum=0.0, strict_min=True)
    return MaterialParams(**kwargs)


def _grid_from(g, path: str) -> tuple:
    if isinstance(g, list):
        if not g:
            _fail(path, "grid list is empty")
        vals = []
        for i, v in enumerate(g):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                _fail(f"{path}[{i}]", f"expected a number, got {v!r}")
            vals.append(float(v))
        return tuple(vals)
    if isinstance(g, dict):
        _check_keys(g, _GRID_KEYS, path + ".")
        lo = _number(g, "min", None, path + ".", "grid units")
        hi = _number(g, "max", None, path + ".", "grid units")
        count = g.get("count")
        scale = g.get("scale", "linear")
        if lo is None or hi is None or count is None:
            _fail(path, "grid dict needs min, max and count")
        if not isinstance(count, int) or count < 1:
            _fail(f"{path}.count", f"expected a positive integer, got {count!r}")
        if scale not in ("linear", "log"):
            _fail(f"{path}.scale", f"expected 'linear' or 'log', got {scale!r}")
        if not hi > lo:
            _fail(path, f"grid needs max > min, got [{lo}, {hi}]")
        if scale == "log":
            if lo <= 0:
                _fail(path, "log grid needs min > 0")
            return tuple(np.geomspace(lo, hi, count).tolist())
        return tuple(np.linspace(lo, hi, count).tolist())
    _fail(path, f"expected a list or a min/max/count dict, got {type(g).__name__}")


def gate_spec_from_dict(d: dict, path: str = "") -> GateSpec:
    if not isinstance(d, dict):
        _fail(path or "config", "expected a JSON object")
    _check_keys(d, _TOP_KEYS, path)
    mode = d.get("mode", "adiabatic")
    if mode not in ("adiabatic", "dynamic"):
        _fail(f"{path}mode", f"expected 'adiabatic' or 'dynamic', got {mode!r}")
    omega0 = _number(d, "omega0_mev", 1.0, path, "meV", minimum=0.0, strict_min=True)
    default_delta = 0.0 if mode == "dynamic" else 20.0
    delta = _number(d, "delta_mev", default_delta, path, "meV")
    if mode == "dynamic" and delta != 0.0:
        _fail(f"{path}delta_mev", f"dynamic mode requires delta = 0 meV, got {delta}")
    if mode == "adiabatic" and delta <= 0.0:
        _fail(f"{path}delta_mev", f"adiabatic mode requires delta > 0 meV, got {delta}")
    tau = _number(d, "tau_ps", None, path, "ps", minimum=0.0, strict_min=True,
                  nullable=True)
    gamma0 = _number(d, "gamma0_per_ps", 0.01, path, "ps^-1", minimum=0.0)
    temperature = _number(d, "temperature_k", 0.0, path, "kelvin", minimum=0.0)
    target = _number(d, "target_phase_rad", math.pi, path, "rad", minimum=0.0,
                     strict_min=True)
    channels = d.get("channels", ["phonon", "radiative"])
    if not isinstance(channels, list) or not all(isinstance(c, str) for c in channels):
        _fail(f"{path}channels", f"expected a list of channel names, got {channels!r}")
    tol = _number(d, "tol_rel", 1e-9, path, "relative tolerance",
                  minimum=0.0, strict_min=True)
    samples = d.get("samples", 2000)
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < 2:
        _fail(f"{path}samples", f"expected an integer >= 2, got {samples!r}")
    scale = _number(d, "spectral_scale", 1.0, path, "dimensionless", minimum=0.0)
    initial = d.get("initial_state", "psi_plus")
    piezo = _number(d, "piezo_const_ev_s_m", None, path, "eV s/m",
                    minimum=0.0, strict_min=True, nullable=True)
    material = _material_from(d.get("material", {}), path + "material.")
    kind = "square" if mode == "dynamic" else "gaussian"
    try:
        pulse = PulseSchedule(kind=kind, omega0=omega0, delta=delta, tau=tau)
        return GateSpec(mode=mode, pulse=pulse, gamma0=gamma0,
                        temperature=temperature, target_phase=target,
                        channels=frozenset(channels),
                        solver=SolverOptions(tol_rel=tol, samples=samples),
                        material=material, spectral_scale=scale,
                        piezo_const=piezo, initial_state=initial)
    except ValueError as exc:
        raise ConfigError(f"{path or 'config'}: {exc}") from exc


def sweep_spec_from_dict(d: dict) -> SweepSpec:
    block = d["sweep"]
    if not isinstance(block, dict):
        _fail("sweep", "expected a JSON object")
    _check_keys(block, _SWEEP_KEYS, "sweep.")
    variable = block.get("variable")
    if variable not in SWEEP_VARIABLES:
        _fail("sweep.variable", f"expected one of {SWEEP_VARIABLES}, got {variable!r}")
    if "grid" not in block:
        _fail("sweep.grid", "missing grid")
    grid = _grid_from(block["grid"], "sweep.grid")
    outputs = block.get("outputs", ["fidelity"])
    if not isinstance(outputs, list) or not outputs:
        _fail("sweep.outputs", f"expected a non-empty list, got {outputs!r}")
    for o in outputs:
        if o not in OUTPUT_SELECTORS:
            _fail("sweep.outputs", f"unknown output {o!r} (allowed: {OUTPUT_SELECTORS})")
    template = gate_spec_from_dict({k: v for k, v in d.items() if k != "sweep"})
    try:
        return SweepSpec(variable=variable, grid=grid, template=template,
                         outputs=tuple(outputs))
    except ValueError as exc:
        raise ConfigError(f"sweep: {exc}") from exc


def parse_config(path) -> GateSpec | SweepSpec:
    """Load a JSON config file into a fully defaulted gate or sweep spec."""
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON ({exc})") from exc
    return parse_config_dict(data)


def parse_config_dict(data: dict) -> GateSpec | SweepSpec:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    if "sweep" in data:
        return sweep_spec_from_dict(data)
    return gate_spec_from_dict(data)


def spectral_grid_from_config(path) -> np.ndarray:
    """Frequency grid for the spectral report; defaults to 0..15 meV."""
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    data = json.loads(p.read_text(encoding="utf-8"))
    if "spectral_grid_mev" not in data:
        return np.linspace(0.0, 15.0, 301)
    grid = _grid_from(data["spectral_grid_mev"], "spectral_grid_mev")
    arr = np.asarray(grid, dtype=float)
    if np.any(arr < 0):
        raise ConfigError("spectral_grid_mev: frequencies must be >= 0 meV")
    return arr


# ---------------------------------------------------------------------------
# serialization (the echo embedded in output headers)


def material_dict(m: MaterialParams) -> dict:
    return {key: getattr(m, attr) for key, (attr, _) in _MATERIAL_KEYS.items()}


def gate_spec_dict(spec: GateSpec) -> dict:
    return {
        "mode": spec.mode,
        "omega0_mev": spec.pulse.omega0,
        "delta_mev": spec.pulse.delta,
        "tau_ps": spec.pulse.tau,
        "gamma0_per_ps": spec.gamma0,
        "temperature_k": spec.temperature,
        "target_phase_rad": spec.target_phase,
        "channels": sorted(spec.channels),
        "tol_rel": spec.solver.tol_rel,
        "samples": spec.solver.samples,
        "spectral_scale": spec.spectral_scale,
        "initial_state": spec.initial_state,
        "piezo_const_ev_s_m": spec.piezo_const,
        "material": material_dict(spec.material),
    }


def sweep_spec_dict(s: SweepSpec) -> dict:
    d = gate_spec_dict(s.template)
    d["sweep"] = {"variable": s.variable, "grid": list(s.grid),
                  "outputs": list(s.outputs)}
    return d
