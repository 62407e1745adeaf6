"""Drive envelopes, adiabaticity diagnostics and pulse-width calibration.

Two pulse shapes cover both gate protocols: a Gaussian envelope
``Omega(t) = Omega_0 exp[-(t/tau)^2]`` at constant detuning for the adiabatic
gate (integrated over [-3 tau, 3 tau]), and a resonant square pulse of
duration ``2 pi / Omega`` for the dynamic gate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import quad

from .bath import GAAS, MaterialParams
from .constants import HBAR_MEV_PS
from .errors import CalibrationError
from .model import DriveParams, dressed_frame

GAUSSIAN_WINDOW_SIGMAS = 3.0

CHANNELS = frozenset({"radiative", "phonon", "piezo"})
INITIAL_STATES = ("psi_plus", "one")


@dataclass(frozen=True)
class PulseSchedule:
    """Time-dependent drive description.

    ``tau`` is the Gaussian width or the square duration in ps; it may be left
    ``None`` on an adiabatic gate spec to request calibration.  ``window`` is
    the integration interval, defaulting to [-3 tau, 3 tau] for Gaussian
    pulses and [0, tau] for square ones.
    """

    kind: str
    omega0: float
    delta: float
    tau: float | None = None
    window: tuple[float, float] | None = None

    def __post_init__(self):
        if self.kind not in ("gaussian", "square"):
            raise ValueError(f"unknown pulse kind {self.kind!r}")
        if not self.omega0 > 0:
            raise ValueError(f"omega0 must be > 0 meV, got {self.omega0}")
        if self.tau is not None:
            if not self.tau > 0:
                raise ValueError(f"tau must be > 0 ps, got {self.tau}")
            if self.window is None:
                if self.kind == "gaussian":
                    w = GAUSSIAN_WINDOW_SIGMAS * self.tau
                    object.__setattr__(self, "window", (-w, w))
                else:
                    object.__setattr__(self, "window", (0.0, self.tau))
        if self.window is not None and not self.window[0] < self.window[1]:
            raise ValueError(f"empty integration window {self.window}")

    def with_tau(self, tau: float) -> "PulseSchedule":
        return replace(self, tau=tau, window=None)


@dataclass(frozen=True)
class SolverOptions:
    """Integrator tolerance bundle: relative tolerance and sample count."""

    tol_rel: float = 1e-9
    samples: int = 2000

    def __post_init__(self):
        if not 0 < self.tol_rel < 1e-2:
            raise ValueError(f"tol_rel out of range: {self.tol_rel}")
        if self.samples < 2:
            raise ValueError("samples must be >= 2")

    @property
    def tol_abs(self) -> float:
        # component scale is O(1) for density matrices
        return 1e-3 * self.tol_rel


@dataclass(frozen=True)
class GateSpec:
    """Full experiment description for one phase-gate run."""

    mode: str
    pulse: PulseSchedule
    gamma0: float = 0.01
    temperature: float = 0.0
    target_phase: float = math.pi
    channels: frozenset = frozenset({"radiative", "phonon"})
    solver: SolverOptions = field(default_factory=SolverOptions)
    material: MaterialParams = GAAS
    spectral_scale: float = 1.0
    piezo_const: float | None = None
    initial_state: str = "psi_plus"

    def __post_init__(self):
        if self.mode not in ("adiabatic", "dynamic"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "dynamic":
            if self.pulse.delta != 0.0:
                raise ValueError("dynamic mode requires delta = 0")
            if self.pulse.kind != "square":
                raise ValueError("dynamic mode requires a square pulse")
        else:
            if self.pulse.kind != "gaussian":
                raise ValueError("adiabatic mode requires a gaussian pulse")
        if self.gamma0 < 0:
            raise ValueError(f"gamma0 must be >= 0 ps^-1, got {self.gamma0}")
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0 K, got {self.temperature}")
        object.__setattr__(self, "channels", frozenset(self.channels))
        unknown = self.channels - CHANNELS
        if unknown:
            raise ValueError(f"unknown channels {sorted(unknown)}")
        if "piezo" in self.channels and self.piezo_const is None:
            raise ValueError("piezo channel enabled but piezo_const is not set")
        if self.spectral_scale < 0:
            raise ValueError("spectral_scale must be >= 0")
        if self.initial_state not in INITIAL_STATES:
            raise ValueError(f"unknown initial_state {self.initial_state!r}")


def omega_at(p: PulseSchedule, t):
    """Drive amplitude Omega(t) in meV; accepts scalars or arrays."""
    if p.tau is None:
        raise ValueError("pulse width is not set")
    if p.kind == "gaussian":
        x = np.asarray(t, dtype=float) / p.tau
        out = p.omega0 * np.exp(-x * x)
    else:
        t_arr = np.asarray(t, dtype=float)
        lo, hi = p.window
        out = np.where((t_arr >= lo) & (t_arr <= hi), p.omega0, 0.0)
    return out if np.ndim(t) else float(out)


def omega_dot_at(p: PulseSchedule, t):
    """d Omega/dt in meV/ps; zero in the square-pulse interior."""
    if p.kind == "square":
        return np.zeros_like(np.asarray(t, dtype=float)) if np.ndim(t) else 0.0
    om = omega_at(p, t)
    return -2.0 * np.asarray(t, dtype=float) / p.tau**2 * om if np.ndim(t) \
        else -2.0 * t / p.tau**2 * om


def adiabaticity_parameter(p: PulseSchedule, t, delta_dot: float = 0.0):
    """Dimensionless sweep-rate measure (Omega'Delta - Omega Delta')/(2 Lambda^3).

    Energies are converted to angular frequencies so the ratio is a pure
    number; values much below 1 mean the dressed states are followed
    faithfully.  ``delta_dot`` is kept for completeness but is zero for the
    constant-detuning protocol.
    """
    om = np.asarray(omega_at(p, t), dtype=float) / HBAR_MEV_PS
    om_dot = np.asarray(omega_dot_at(p, t), dtype=float) / HBAR_MEV_PS
    dlt = p.delta / HBAR_MEV_PS
    dlt_dot = delta_dot / HBAR_MEV_PS
    lam2 = dlt * dlt + om * om
    num = om_dot * dlt - om * dlt_dot
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(lam2 > 0.0, num / (2.0 * lam2 ** 1.5), 0.0)
    return out if np.ndim(t) else float(out)


def accumulated_phase(p: PulseSchedule, rel_tol: float = 1e-10) -> float:
    """Phase picked up by |1> relative to |0> over the pulse window, radians.

    Integrates the instantaneous dressed-level shift (negative for positive
    detuning) with adaptive quadrature, so the result is positive for
    Delta > 0 and exact for the truncated Gaussian actually simulated.
    """
    if p.kind != "gaussian":
        raise ValueError("accumulated_phase is defined for gaussian pulses")
    if p.tau is None:
        raise ValueError("pulse width is not set")

    def shift(t: float) -> float:
        om = p.omega0 * math.exp(-((t / p.tau) ** 2))
        if om == 0.0 and p.delta == 0.0:
            return 0.0
        return -dressed_frame(DriveParams(om, p.delta)).e_minus / HBAR_MEV_PS

    lo, hi = p.window
    val, _ = quad(shift, lo, hi, epsrel=rel_tol, epsabs=0.0, limit=200)
    return val


def calibrate_tau(omega0: float, delta: float, target_phase: float,
                  tol: float = 1e-9, max_iter: int = 60) -> PulseSchedule:
    """Find the Gaussian width that accumulates ``target_phase`` exactly.

    Starts from the small-Omega analytic seed
    ``tau_0 = 4 target Delta hbar / (Omega_0^2 sqrt(pi/2))`` and refines with
    a secant iteration on the quadrature phase (the phase is nearly linear in
    tau because the window scales with it, so this converges immediately).
    """
    if omega0 <= 0 or delta <= 0 or target_phase <= 0:
        raise ValueError("calibration requires omega0 > 0, delta > 0, target_phase > 0")

    def phase_of(tau: float) -> float:
        return accumulated_phase(PulseSchedule("gaussian", omega0, delta, tau))

    tau0 = target_phase * 4.0 * delta * HBAR_MEV_PS / (omega0**2 * math.sqrt(math.pi / 2.0))
    a, fa = tau0, phase_of(tau0) - target_phase
    b = tau0 * (1.0 - fa / target_phase * 0.5) if fa != 0.0 else tau0
    if b <= 0 or b == a:
        b = 0.9 * tau0
    fb = phase_of(b) - target_phase
    for _ in range(max_iter):
        if abs(fb) < tol:
            return PulseSchedule("gaussian", omega0, delta, b)
        if fb == fa:
            break
        a, b, fa = b, b - fb * (b - a) / (fb - fa), fb
        if b <= 0:
            b = 0.5 * a
        fb = phase_of(b) - target_phase
    raise CalibrationError(
        f"tau calibration did not converge for omega0={omega0} meV, "
        f"delta={delta} meV, target={target_phase} rad (residual {fb:.2e})")


def dynamic_duration(omega: float) -> float:
    """Duration of a resonant square 2*pi pulse, 2*pi/Omega in ps."""
    if omega <= 0:
        raise ValueError("omega must be > 0 meV")
    return 2.0 * math.pi * HBAR_MEV_PS / omega


def resolve_pulse(spec: GateSpec) -> PulseSchedule:
    """Return the concrete pulse for a spec, calibrating the width if needed."""
    if spec.mode == "dynamic":
        if spec.pulse.tau is not None:
            return spec.pulse
        return spec.pulse.with_tau(dynamic_duration(spec.pulse.omega0))
    if spec.pulse.tau is not None:
        return spec.pulse
    return calibrate_tau(spec.pulse.omega0, spec.pulse.delta, spec.target_phase)
