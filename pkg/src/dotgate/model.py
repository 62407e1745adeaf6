"""Physics of the driven three-level dot.

Rotating-frame Hamiltonian, dressed-state geometry and the closed-form
analytics used both by the gate protocols and as oracles for the numerical
engine:

* ``H = Delta |X><X| + (Omega/2)(|1><X| + |X><1|)`` with |0> fully decoupled,
* dressed mixing angle ``theta = arctan2(Omega, Delta) / 2`` and splitting
  ``Lambda = sqrt(Delta^2 + Omega^2)``,
* light-induced shift of the lower dressed state
  ``E_m = (Delta - Lambda) / 2 <= 0``,
* dressed radiative rate ``Gamma_m = Gamma_0 sin^2(theta)`` and its small
  Omega/Delta expansion,
* expected-decay budgets of the two gate protocols.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import HBAR_MEV_PS
from .errors import UndefinedFrameError


@dataclass(frozen=True)
class DriveParams:
    """Instantaneous drive: Rabi coupling and detuning, both in meV."""

    omega: float
    delta: float

    def __post_init__(self):
        if not (math.isfinite(self.omega) and math.isfinite(self.delta)):
            raise ValueError("drive parameters must be finite")
        if self.omega < 0:
            raise ValueError(f"omega must be >= 0 meV, got {self.omega}")


@dataclass(frozen=True)
class DressedFrame:
    """Instantaneous dressed-state geometry of the {|1>, |X>} block.

    ``theta`` in radians, ``lam`` (the dressed splitting), ``e_minus`` and the
    eigenenergies ``lam_minus <= 0 <= lam_plus`` in meV.  ``e_minus`` equals
    ``lam_minus``: the lower dressed level measured from the |0> reference.
    """

    theta: float
    lam: float
    e_minus: float
    lam_plus: float
    lam_minus: float


def build_hamiltonian(p: DriveParams) -> np.ndarray:
    """Rotating-frame Hamiltonian in meV; row and column of |0> are zero."""
    h = np.zeros((3, 3), dtype=complex)
    h[2, 2] = p.delta
    h[1, 2] = h[2, 1] = 0.5 * p.omega
    return h


def dressed_frame(p: DriveParams) -> DressedFrame:
    """Dressed angle, splitting and eigenenergies for the given drive.

    The two-argument arctangent keeps ``theta`` continuous through resonance:
    theta -> 0 for Omega << Delta, theta = pi/4 at Delta = 0.  Undefined when
    both inputs vanish.
    """
    if p.omega == 0.0 and p.delta == 0.0:
        raise UndefinedFrameError("dressed frame undefined at omega = delta = 0")
    theta = 0.5 * math.atan2(p.omega, p.delta)
    lam = math.hypot(p.omega, p.delta)
    lam_minus = 0.5 * (p.delta - lam)
    lam_plus = 0.5 * (p.delta + lam)
    return DressedFrame(theta=theta, lam=lam, e_minus=lam_minus,
                        lam_plus=lam_plus, lam_minus=lam_minus)


def dressed_transform(theta: float) -> np.ndarray:
    """Unitary whose columns are the bare-basis dressed states.

    Acts as identity on |0>; on the {|1>, |X>} block the columns are
    |-> = cos(theta)|1> - sin(theta)|X> and |+> = sin(theta)|1> + cos(theta)|X>,
    so that U^dag H U = diag(0, lam_minus, lam_plus).
    """
    c, s = math.cos(theta), math.sin(theta)
    u = np.eye(3, dtype=complex)
    u[1, 1] = c
    u[2, 1] = -s
    u[1, 2] = s
    u[2, 2] = c
    return u


def gamma_minus(theta: float, gamma0: float) -> float:
    """Total radiative rate out of the lower dressed state, Gamma_0 sin^2."""
    if gamma0 < 0:
        raise ValueError("gamma0 must be >= 0")
    return gamma0 * math.sin(theta) ** 2


def gamma_minus_expansion(p: DriveParams, gamma0: float) -> float:
    """Leading term (Gamma_0/4)(Omega/Delta)^2 of the dressed decay rate."""
    if p.delta <= 0:
        raise ValueError("expansion requires delta > 0")
    return 0.25 * gamma0 * (p.omega / p.delta) ** 2


def e_minus_expansion(p: DriveParams) -> float:
    """Leading term of the dressed energy shift, -(Omega/4)(Omega/Delta).

    Sign follows the exact E_m <= 0; only the magnitude enters gate-time
    estimates.
    """
    if p.delta <= 0:
        raise ValueError("expansion requires delta > 0")
    return -0.25 * p.omega * (p.omega / p.delta)


def expected_decays_dynamic(omega: float, gamma0: float) -> float:
    """Decay budget of a resonant square 2*pi pulse: pi*Gamma_0/Omega.

    ``omega`` in meV is converted to an angular rate internally, so the result
    is dimensionless.
    """
    if omega <= 0:
        raise ValueError("omega must be > 0 meV")
    return math.pi * gamma0 / (omega / HBAR_MEV_PS)


def expected_decays_adiabatic(delta: float, gamma0: float) -> float:
    """Decay budget of the detuned adiabatic gate: pi*Gamma_0/Delta.

    Independent of the pulse amplitude; dimensionless after unit conversion.
    """
    if delta <= 0:
        raise ValueError("delta must be > 0 meV")
    return math.pi * gamma0 / (delta / HBAR_MEV_PS)
