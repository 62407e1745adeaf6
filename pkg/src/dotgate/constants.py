"""Unit system and physical constants.

Internal unit system: energies in meV, times in ps, rates in ps^-1,
temperatures in K.  Angular frequencies (rad/ps) relate to energies through
``HBAR_MEV_PS``; every conversion in the package goes through the constants
defined here and nowhere else.

SI constants (CODATA 2018) appear only in the one-time reduction of material
parameters to the internal system (see :mod:`dotgate.bath`).
"""

# hbar in meV*ps: 6.582119569e-16 eV*s
HBAR_MEV_PS = 0.6582119569

# Boltzmann constant in meV/K: 8.617333262e-5 eV/K
KB_MEV_PER_K = 0.08617333262

# SI values for the material-parameter reduction
HBAR_SI = 1.054571817e-34       # J s
EV_SI = 1.602176634e-19         # J
ELECTRON_MASS_SI = 9.1093837015e-31  # kg

# rad/s per meV
MEV_TO_RAD_PER_S = EV_SI * 1e-3 / HBAR_SI


def to_angular(energy_mev: float) -> float:
    """Convert an energy in meV to an angular frequency in rad/ps."""
    return energy_mev / HBAR_MEV_PS


def to_mev(omega_rad_ps: float) -> float:
    """Convert an angular frequency in rad/ps to an energy in meV."""
    return omega_rad_ps * HBAR_MEV_PS
