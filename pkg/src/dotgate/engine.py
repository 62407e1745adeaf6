"""Time-dependent Lindblad generator assembly and trajectory integration.

The generator combines, in the bare rotating frame:

* the coherent commutator with the drive Hamiltonian,
* the radiative dissipator ``Gamma_0 D[|1><X|]``,
* phonon-assisted transitions between the instantaneous dressed states,
  ``J(Lambda) {(N+1) D[P] + N D[P^dag]}`` with ``P = -sin cos |-><+|``
  rotated into the bare basis at every generator evaluation (no piecewise
  freezing of the frame),
* optionally the piezoelectric channel with the same operator structure.

Integration uses the compiled adaptive 5(4) pair from :mod:`._kernel`; the
trace is never renormalized, so trace drift is a reported health metric, and
a configurable grid of samples is produced from the dense-output
interpolant.  Square-pulse edges inside the window split the integration so
the stepper never sees the discontinuity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernel
from .bath import SpectralModel, piezo_prefactor
from .constants import HBAR_MEV_PS, KB_MEV_PER_K
from .errors import HealthViolationError, IntegrationError
from .operators import as_operator, assert_density_matrix, hermiticity_defect
from .pulses import PulseSchedule, adiabaticity_parameter, omega_at

HEALTH_HARD_LIMIT = 1e-6
MAX_STEPS = 5_000_000


@dataclass(frozen=True)
class GeneratorContext:
    """Everything the generator needs: drive, rates, bath and channel set."""

    pulse: PulseSchedule
    gamma0: float
    spectral: SpectralModel
    temperature: float = 0.0
    channels: frozenset = frozenset({"radiative", "phonon"})
    scale_multiplier: float = 1.0
    piezo_const: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "channels", frozenset(self.channels))
        unknown = self.channels - {"radiative", "phonon", "piezo"}
        if unknown:
            raise ValueError(f"unknown channels {sorted(unknown)}")
        if "piezo" in self.channels and self.piezo_const is None:
            raise ValueError("piezo channel enabled but piezo_const is not set")
        if self.pulse.tau is None:
            raise ValueError("generator context needs a concrete pulse width")


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of one integration window.

    All arrays share the sample axis; states are bare-basis density matrices
    and pass the health checks enforced at construction time.  Solver
    counters and the measured health extremes ride along for reporting.
    """

    times: np.ndarray
    states: np.ndarray
    pop0: np.ndarray
    pop1: np.ndarray
    popX: np.ndarray
    coherence01: np.ndarray
    purity: np.ndarray
    theta: np.ndarray
    lambda_mev: np.ndarray
    adiabaticity: np.ndarray
    decay_integral: np.ndarray
    n_accepted: int
    n_rejected: int
    max_trace_drift: float
    max_hermiticity_defect: float
    min_eigenvalue: float

    def final_state(self) -> np.ndarray:
        return self.states[-1]


def _kernel_params(ctx: GeneratorContext):
    """Pack the context into the flat angular-unit arrays the kernel takes."""
    p = ctx.pulse
    kind = 0 if p.kind == "square" else 1
    t_on, t_off = p.window if p.kind == "square" else (0.0, 0.0)
    sp = ctx.spectral
    jpref = sp.prefactor * HBAR_MEV_PS**3 * ctx.scale_multiplier
    ppref = 0.0
    if "piezo" in ctx.channels:
        ppref = piezo_prefactor(sp, ctx.piezo_const) * HBAR_MEV_PS**3 * ctx.scale_multiplier
    kt = KB_MEV_PER_K * ctx.temperature / HBAR_MEV_PS
    p_f = np.array([
        p.omega0 / HBAR_MEV_PS,
        p.delta / HBAR_MEV_PS,
        p.tau,
        t_on, t_off,
        ctx.gamma0,
        jpref,
        (sp.w_e / HBAR_MEV_PS) ** 2,
        (sp.w_eh / HBAR_MEV_PS) ** 2,
        (sp.w_h / HBAR_MEV_PS) ** 2,
        sp.params.d_h_coupling / sp.params.d_e_coupling,
        ppref,
        kt,
    ], dtype=np.float64)
    p_i = np.array([
        kind,
        1 if "radiative" in ctx.channels else 0,
        1 if "phonon" in ctx.channels else 0,
        1 if "piezo" in ctx.channels else 0,
    ], dtype=np.int64)
    return p_f, p_i


def liouvillian_apply(ctx: GeneratorContext, t: float, rho) -> np.ndarray:
    """Evaluate d(rho)/dt at time t; traceless, Hermiticity-preserving."""
    m = as_operator(rho)
    if hermiticity_defect(m) > 1e-9:
        raise ValueError("liouvillian_apply expects a Hermitian matrix")
    y = np.empty(_kernel.NSTATE, dtype=np.complex128)
    y[:9] = m.reshape(9)
    y[9] = 0.0
    dy = np.empty_like(y)
    p_f, p_i = _kernel_params(ctx)
    _kernel._rhs(float(t), y, dy, p_f, p_i)
    return dy[:9].reshape(3, 3)


def _segment_breakpoints(ctx: GeneratorContext, t0: float, t1: float) -> list[float]:
    pts = [t0, t1]
    if ctx.pulse.kind == "square":
        for edge in ctx.pulse.window:
            if t0 < edge < t1:
                pts.append(edge)
    return sorted(set(pts))


def integrate(ctx: GeneratorContext, rho0, window: tuple[float, float] | None = None,
              tol: float = 1e-9, atol: float | None = None,
              samples: int = 2000) -> Trajectory:
    """Integrate the master equation over the window and sample the solution.

    ``tol`` is the relative tolerance of the embedded pair; ``atol`` defaults
    to ``tol * 1e-3``.  Raises :class:`IntegrationError` on step-size
    underflow or step-budget exhaustion and :class:`HealthViolationError`
    when any sampled state leaves the density-matrix manifold by more than
    1e-6 in trace, Hermiticity or positivity.
    """
    rho0 = assert_density_matrix(rho0, trace_tol=1e-8, herm_tol=1e-8, eig_tol=1e-8)
    if window is None:
        window = ctx.pulse.window
    t0, t1 = float(window[0]), float(window[1])
    if not t0 < t1:
        raise ValueError(f"empty integration window ({t0}, {t1})")
    if atol is None:
        atol = tol * 1e-3

    ts = np.linspace(t0, t1, samples)
    out = np.empty((samples, _kernel.NSTATE), dtype=np.complex128)
    y = np.empty(_kernel.NSTATE, dtype=np.complex128)
    y[:9] = rho0.reshape(9)
    y[9] = 0.0

    p_f, p_i = _kernel_params(ctx)
    n_acc = n_rej = 0
    bounds = _segment_breakpoints(ctx, t0, t1)
    lo_idx = 0
    for a, b in zip(bounds[:-1], bounds[1:]):
        # samples belonging to (a, b]; the very first also takes ts == t0
        hi_idx = int(np.searchsorted(ts, b, side="right"))
        seg_ts = ts[lo_idx:hi_idx]
        seg_out = out[lo_idx:hi_idx]
        status, t_reach, acc, rej = _kernel.integrate_window(
            y, a, b, tol, atol, seg_ts, seg_out, p_f, p_i, MAX_STEPS)
        n_acc += acc
        n_rej += rej
        if status == _kernel.STATUS_UNDERFLOW:
            raise IntegrationError(f"step size underflow at t = {t_reach:.6g} ps", t=t_reach)
        if status == _kernel.STATUS_MAX_STEPS:
            raise IntegrationError(f"step budget exhausted at t = {t_reach:.6g} ps", t=t_reach)
        lo_idx = hi_idx

    states = np.ascontiguousarray(out[:, :9].reshape(samples, 3, 3))
    decay = out[:, 9].real.copy()

    # health audit of every sample; hard failure beyond 1e-6
    traces = np.einsum("tii->t", states)
    trace_err = np.abs(traces - 1.0)
    herm_err = np.max(np.abs(states - states.conj().transpose(0, 2, 1)), axis=(1, 2))
    eigs = np.linalg.eigvalsh(0.5 * (states + states.conj().transpose(0, 2, 1)))
    min_eig = eigs[:, 0]
    bad = (trace_err > HEALTH_HARD_LIMIT) | (herm_err > HEALTH_HARD_LIMIT) \
        | (min_eig < -HEALTH_HARD_LIMIT)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise HealthViolationError(
            f"density-matrix health violated at t = {ts[i]:.6g} ps "
            f"(trace err {trace_err[i]:.2e}, herm err {herm_err[i]:.2e}, "
            f"min eig {min_eig[i]:.2e})", t=float(ts[i]))

    om = np.asarray(omega_at(ctx.pulse, ts), dtype=float)
    theta = 0.5 * np.arctan2(om, ctx.pulse.delta)
    lam = np.hypot(om, ctx.pulse.delta)
    adiab = np.asarray(adiabaticity_parameter(ctx.pulse, ts), dtype=float)

    arrays = dict(
        times=ts, states=states,
        pop0=states[:, 0, 0].real.copy(), pop1=states[:, 1, 1].real.copy(),
        popX=states[:, 2, 2].real.copy(), coherence01=states[:, 0, 1].copy(),
        purity=np.einsum("tij,tji->t", states, states).real,
        theta=theta, lambda_mev=lam, adiabaticity=adiab, decay_integral=decay,
    )
    for arr in arrays.values():
        arr.setflags(write=False)
    return Trajectory(**arrays, n_accepted=n_acc, n_rejected=n_rej,
                      max_trace_drift=float(np.max(trace_err)),
                      max_hermiticity_defect=float(np.max(herm_err)),
                      min_eigenvalue=float(np.min(min_eig)))


def expected_decays_numeric(traj: Trajectory) -> float:
    """Accumulated Gamma_0 * integral of the trion population."""
    return float(traj.decay_integral[-1])


def fidelity_to(rho, target) -> float:
    """Overlap <target|rho|target> for a normalized pure target state."""
    m = assert_density_matrix(rho, trace_tol=1e-6, herm_tol=1e-6, eig_tol=1e-6)
    ket = np.asarray(target, dtype=complex)
    norm = np.linalg.norm(ket)
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"target state is not normalized (|psi| = {norm})")
    val = complex(ket.conj() @ m @ ket)
    if abs(val.imag) > 1e-10:
        raise ValueError(f"fidelity has a non-negligible imaginary part {val.imag:.2e}")
    return float(min(max(val.real, 0.0), 1.0))
