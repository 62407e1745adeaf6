"""All-optical phase gates on quantum-dot electron spins.

Library layers, bottom up: :mod:`.operators` (3x3 algebra and density-matrix
health), :mod:`.model` (dressed-state physics and closed-form analytics),
:mod:`.pulses` (envelopes, adiabaticity, width calibration), :mod:`.bath`
(material constants and phonon spectral density), :mod:`.engine` (combined
master-equation generator and adaptive integration), :mod:`.runner` /
:mod:`.presets` / :mod:`.cli` (experiments, sweeps, CSV output).
"""

from .bath import (GAAS, MaterialParams, SpectralModel, bose_occupation,
                   build_spectral_model, spectral_density,
                   spectral_density_piezo)
from .constants import HBAR_MEV_PS, KB_MEV_PER_K
from .engine import (GeneratorContext, Trajectory, expected_decays_numeric,
                     fidelity_to, integrate, liouvillian_apply)
from .errors import (CalibrationError, ConfigError, DotgateError,
                     HealthViolationError, IntegrationError,
                     UndefinedFrameError)
from .model import (DressedFrame, DriveParams, build_hamiltonian,
                    dressed_frame, dressed_transform, e_minus_expansion,
                    expected_decays_adiabatic, expected_decays_dynamic,
                    gamma_minus, gamma_minus_expansion)
from .operators import (KET_0, KET_1, KET_X, PSI_MINUS, PSI_PLUS, SIGMA_MINUS,
                        assert_density_matrix, dagger, eigvals_hermitian,
                        hermiticity_defect, identity, matmul, outer,
                        projector, purity, trace)
from .pulses import (GateSpec, PulseSchedule, SolverOptions,
                     accumulated_phase, adiabaticity_parameter, calibrate_tau,
                     dynamic_duration, omega_at, resolve_pulse)
from .runner import (RunRecord, SweepSpec, purity_trace, run_gate,
                     spectral_report, sweep)
from .config import parse_config

__all__ = [name for name in dir() if not name.startswith("_")]
