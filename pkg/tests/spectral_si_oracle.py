#!/usr/bin/env python3
"""Independent SI evaluation of the phonon-coupling model quantities.

Deliberately self-contained: no package imports, its own copies of the CODATA
constants, plain SI arithmetic throughout, meV conversion at the very end.
Prints a JSON object with the carrier widths (nm), cutoff frequencies (meV)
and the reduced spectral prefactor (ps^-1 meV^-3) for a given parameter set
(GaAs defaults).  Run it standalone or let the test suite call it; the
package's reduction must agree with this script to better than 0.1%.
"""

import argparse
import json
import math

HBAR = 1.054571817e-34          # J s
EV = 1.602176634e-19            # J
M0 = 9.1093837015e-31           # kg


def evaluate(d_e_ev=14.6, d_h_ev=4.8, mass_density_g_cm3=5.3,
             sound_speed_cm_s=4.8e5, m_e_eff=0.067, m_h_eff=0.34,
             confinement_j_m2=8.3e-3):
    c_s = sound_speed_cm_s * 1e-2                   # m/s
    mu = mass_density_g_cm3 * 1e3                   # kg/m^3
    d_e = math.sqrt(HBAR / math.sqrt(m_e_eff * M0 * confinement_j_m2))  # m
    d_h = math.sqrt(HBAR / math.sqrt(m_h_eff * M0 * confinement_j_m2))  # m

    rad_s_per_mev = EV * 1e-3 / HBAR
    w_e = math.sqrt(2.0) * c_s / d_e / rad_s_per_mev        # meV
    w_h = math.sqrt(2.0) * c_s / d_h / rad_s_per_mev        # meV
    w_eh = 2.0 * c_s / math.sqrt(d_e**2 + d_h**2) / rad_s_per_mev

    # rate-per-cubed-angular-frequency prefactor, then meV/ps form
    pref_s2 = (d_e_ev * EV) ** 2 / (2.0 * HBAR * mu * c_s**5)
    pref = pref_s2 * rad_s_per_mev**3 * 1e-12               # ps^-1 meV^-3

    return {
        "d_e_nm": d_e * 1e9,
        "d_h_nm": d_h * 1e9,
        "w_e_mev": w_e,
        "w_eh_mev": w_eh,
        "w_h_mev": w_h,
        "prefactor_per_ps_mev3": pref,
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--d-e-ev", type=float, default=14.6)
    parser.add_argument("--d-h-ev", type=float, default=4.8)
    parser.add_argument("--mass-density-g-cm3", type=float, default=5.3)
    parser.add_argument("--sound-speed-cm-s", type=float, default=4.8e5)
    parser.add_argument("--m-e-eff", type=float, default=0.067)
    parser.add_argument("--m-h-eff", type=float, default=0.34)
    parser.add_argument("--confinement-j-m2", type=float, default=8.3e-3)
    args = parser.parse_args()
    out = evaluate(args.d_e_ev, args.d_h_ev, args.mass_density_g_cm3,
                   args.sound_speed_cm_s, args.m_e_eff, args.m_h_eff,
                   args.confinement_j_m2)
    print(json.dumps(out, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
