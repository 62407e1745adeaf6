"""Built-in study presets.

Each preset writes one or more CSV files into an output directory:

* ``fig4``    — radiative decay budget of the adiabatic gate versus detuning
  for three pulse amplitudes, with the analytic overlay and the calibrated
  widths (runs start from |1> so the budget covers the full gated
  population).
* ``fig5``    — purity traces during the gate under phonon coupling at 5 K:
  one dynamic trace, adiabatic traces at several detunings, plus the
  spectral-density table.
* ``fig6-left``  — dynamic-gate fidelity versus drive amplitude at several
  temperatures, both channels.
* ``fig6-right`` — adiabatic-gate fidelity versus detuning at fixed drive
  amplitude, both channels.

Amplitude choices (0.5/1/2 meV for fig4, 0.01-1 meV for the fig6-left scan)
are representative values, not mandated ones.
"""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

import numpy as np

from .pulses import GateSpec, PulseSchedule
from .runner import SweepSpec, purity_trace, spectral_report, sweep

PRESET_NAMES = ("fig4", "fig5", "fig6-left", "fig6-right")

FIG4_OMEGA0_MEV = (0.5, 1.0, 2.0)
FIG5_DELTAS_MEV = (2.0, 5.0, 10.0, 20.0)
FIG6_TEMPERATURES_K = (0.0, 5.0, 10.0)


def _adiabatic_template(omega0: float, delta: float = 20.0, **kw) -> GateSpec:
    return GateSpec(mode="adiabatic",
                    pulse=PulseSchedule("gaussian", omega0=omega0, delta=delta),
                    **kw)


def fig4_sweep(omega0: float) -> SweepSpec:
    template = _adiabatic_template(omega0, channels=frozenset({"radiative"}),
                                   initial_state="one")
    return SweepSpec(variable="delta", grid=tuple(np.linspace(1.0, 10.0, 19)),
                     template=template,
                     outputs=("xi_numeric", "xi_analytic", "tau"))


def fig5_specs() -> tuple[GateSpec, list[GateSpec]]:
    dynamic = GateSpec(mode="dynamic",
                       pulse=PulseSchedule("square", omega0=0.1, delta=0.0),
                       temperature=5.0, channels=frozenset({"phonon"}))
    adiabatic = [replace(_adiabatic_template(1.0, delta=d), temperature=5.0,
                         channels=frozenset({"phonon"}))
                 for d in FIG5_DELTAS_MEV]
    return dynamic, adiabatic


def fig6_left_sweep(temperature: float) -> SweepSpec:
    template = GateSpec(mode="dynamic",
                        pulse=PulseSchedule("square", omega0=1.0, delta=0.0),
                        temperature=temperature,
                        channels=frozenset({"radiative", "phonon"}))
    return SweepSpec(variable="omega",
                     grid=tuple(np.geomspace(0.01, 1.0, 15)),
                     template=template, outputs=("fidelity",))


def fig6_right_sweep(temperature: float) -> SweepSpec:
    template = replace(_adiabatic_template(1.0), temperature=temperature)
    return SweepSpec(variable="delta", grid=tuple(np.linspace(1.0, 40.0, 27)),
                     template=template, outputs=("fidelity",))


def run_preset(name: str, out_dir, threads: int = 1) -> list[Path]:
    """Execute one preset; returns the list of files written."""
    if name not in PRESET_NAMES:
        raise ValueError(f"unknown preset {name!r} (choose from {PRESET_NAMES})")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    if name == "fig4":
        for om0 in FIG4_OMEGA0_MEV:
            path = out / f"fig4_omega0_{om0:g}mev.csv"
            sweep(fig4_sweep(om0), threads=threads, out_path=path)
            written.append(path)

    elif name == "fig5":
        dynamic, adiabatic = fig5_specs()
        path = out / "fig5_dynamic.csv"
        purity_trace(dynamic, path)
        written.append(path)
        for spec in adiabatic:
            path = out / f"fig5_adiabatic_delta_{spec.pulse.delta:g}mev.csv"
            purity_trace(spec, path)
            written.append(path)
        path = out / "fig5_spectral.csv"
        spectral_report(adiabatic[0].material, np.linspace(0.0, 15.0, 301),
                        temperature=5.0, out_path=path)
        written.append(path)

    elif name == "fig6-left":
        for t in FIG6_TEMPERATURES_K:
            path = out / f"fig6_left_T{t:g}K.csv"
            sweep(fig6_left_sweep(t), threads=threads, out_path=path)
            written.append(path)

    else:  # fig6-right
        for t in FIG6_TEMPERATURES_K:
            path = out / f"fig6_right_T{t:g}K.csv"
            sweep(fig6_right_sweep(t), threads=threads, out_path=path)
            written.append(path)

    return written
