"""Material parameters, phonon spectral density and thermal occupation.

All SI inputs are reduced once, at model build time, to the internal meV/ps
system.  The reduction chain (the only place SI constants are used):

* carrier widths ``d = sqrt(hbar / sqrt(m c))`` from the harmonic confinement,
* cutoffs ``w_{e,h} = sqrt(2) c_s / d_{e,h}`` and
  ``w_eh = 2 c_s / sqrt(d_e^2 + d_h^2)`` converted from rad/s to meV,
* prefactor ``D_e^2 / (2 hbar mu c_s^5)`` (an inverse-time per cubed angular
  frequency) converted to ps^-1 per meV^3, so that

      J(w) = prefactor * w^3 * (e^{-w^2/w_e^2}
                                - 2 (D_h/D_e) e^{-w^2/w_eh^2}
                                + (D_h/D_e)^2 e^{-w^2/w_h^2})

  returns a rate in ps^-1 directly usable as a Lindblad coefficient when
  ``w`` is given in meV.

Note the magnitude convention: the cubic-in-frequency form above is
implemented exactly as stated, with no additional continuum-limit factors of
pi; a dimensionless ``scale`` multiplier on the generator (default 1.0, see
:mod:`dotgate.engine`) lets the overall magnitude be swept without touching
this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import (ELECTRON_MASS_SI, EV_SI, HBAR_SI, KB_MEV_PER_K,
                        MEV_TO_RAD_PER_S)


@dataclass(frozen=True)
class MaterialParams:
    """GaAs-like material constants in conventional (SI-adjacent) units.

    ``d_e_coupling``/``d_h_coupling`` in eV, ``mass_density`` in g/cm^3,
    ``sound_speed`` in cm/s, effective masses in units of the electron mass,
    ``confinement`` in J/m^2.
    """

    d_e_coupling: float = 14.6
    d_h_coupling: float = 4.8
    mass_density: float = 5.3
    sound_speed: float = 4.8e5
    m_e_eff: float = 0.067
    m_h_eff: float = 0.34
    confinement: float = 8.3e-3

    def __post_init__(self):
        for name in ("d_e_coupling", "d_h_coupling", "mass_density",
                     "sound_speed", "m_e_eff", "m_h_eff", "confinement"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")


GAAS = MaterialParams()


@dataclass(frozen=True)
class SpectralModel:
    """Reduced phonon-coupling model: widths in nm, cutoffs in meV,
    prefactor in ps^-1 meV^-3."""

    params: MaterialParams
    d_e: float
    d_h: float
    w_e: float
    w_h: float
    w_eh: float
    prefactor: float


def build_spectral_model(p: MaterialParams) -> SpectralModel:
    """Reduce material constants to carrier widths, cutoffs and prefactor."""
    c_s = p.sound_speed * 1e-2                      # m/s
    mu = p.mass_density * 1e3                       # kg/m^3
    m_e = p.m_e_eff * ELECTRON_MASS_SI
    m_h = p.m_h_eff * ELECTRON_MASS_SI
    d_e = math.sqrt(HBAR_SI / math.sqrt(m_e * p.confinement))   # m
    d_h = math.sqrt(HBAR_SI / math.sqrt(m_h * p.confinement))
    w_e = math.sqrt(2.0) * c_s / d_e / MEV_TO_RAD_PER_S         # meV
    w_h = math.sqrt(2.0) * c_s / d_h / MEV_TO_RAD_PER_S
    w_eh = 2.0 * c_s / math.hypot(d_e, d_h) / MEV_TO_RAD_PER_S
    d_e_j = p.d_e_coupling * EV_SI
    pref_si = d_e_j**2 / (2.0 * HBAR_SI * mu * c_s**5)          # s^2
    prefactor = pref_si * MEV_TO_RAD_PER_S**3 * 1e-12           # ps^-1 meV^-3
    return SpectralModel(params=p, d_e=d_e * 1e9, d_h=d_h * 1e9,
                         w_e=w_e, w_h=w_h, w_eh=w_eh, prefactor=prefactor)


def spectral_density(m: SpectralModel, omega):
    """Deformation-potential coupling weight J(omega) in ps^-1, omega in meV.

    Super-Ohmic (cubic) at small frequency, Gaussian-suppressed beyond the
    dot-size cutoffs; vanishes at omega = 0.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise ValueError("omega must be >= 0 meV")
    r = m.params.d_h_coupling / m.params.d_e_coupling
    bracket = (np.exp(-(w / m.w_e) ** 2)
               - 2.0 * r * np.exp(-(w / m.w_eh) ** 2)
               + r * r * np.exp(-(w / m.w_h) ** 2))
    out = m.prefactor * w**3 * bracket
    return out if np.ndim(omega) else float(out)


def piezo_prefactor(m: SpectralModel, piezo_const: float) -> float:
    """Reduced prefactor P^2/(2 hbar mu c_s^3) for the piezoelectric channel,
    in ps^-1 meV^-3; ``piezo_const`` in eV s/m."""
    c_s = m.params.sound_speed * 1e-2
    mu = m.params.mass_density * 1e3
    p_j = piezo_const * EV_SI
    pref_si = p_j**2 / (2.0 * HBAR_SI * mu * c_s**3)
    return pref_si * MEV_TO_RAD_PER_S**3 * 1e-12


def spectral_density_piezo(m: SpectralModel, omega, piezo_const: float):
    """Optional piezoelectric channel with unit-weight bracket, in ps^-1.

    Implemented with the stated cubic frequency dependence and the same three
    cutoffs as the deformation channel; disabled unless explicitly configured.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0):
        raise ValueError("omega must be >= 0 meV")
    bracket = (np.exp(-(w / m.w_e) ** 2)
               - 2.0 * np.exp(-(w / m.w_eh) ** 2)
               + np.exp(-(w / m.w_h) ** 2))
    out = piezo_prefactor(m, piezo_const) * w**3 * bracket
    return out if np.ndim(omega) else float(out)


def bose_occupation(omega: float, temperature: float) -> float:
    """Thermal phonon occupation (exp(omega/kT) - 1)^-1; exactly 0 at T = 0.

    ``omega`` in meV (> 0), ``temperature`` in K.  Underflows to 0 for
    omega/kT > 700 instead of overflowing the exponential.
    """
    if omega <= 0:
        raise ValueError(f"omega must be > 0 meV, got {omega}")
    if temperature < 0:
        raise ValueError(f"temperature must be >= 0 K, got {temperature}")
    if temperature == 0.0:
        return 0.0
    x = omega / (KB_MEV_PER_K * temperature)
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)
