"""Dense 3x3 operator algebra and density-matrix health checks.

Basis order everywhere in the package: index 0 is the decoupled qubit state
|0>, index 1 the driven qubit state |1>, index 2 the optically excited
(trion) state |X>.  Operators are plain ``numpy`` arrays of shape (3, 3) and
dtype complex128; density matrices and projectors are dimensionless,
Hamiltonians carry meV.
"""

from __future__ import annotations

import numpy as np

DIM = 3

# basis kets
KET_0 = np.array([1.0, 0.0, 0.0], dtype=complex)
KET_1 = np.array([0.0, 1.0, 0.0], dtype=complex)
KET_X = np.array([0.0, 0.0, 1.0], dtype=complex)

# gate input/output states (|0> +/- |1>)/sqrt(2)
PSI_PLUS = (KET_0 + KET_1) / np.sqrt(2.0)
PSI_MINUS = (KET_0 - KET_1) / np.sqrt(2.0)

# lowering operator of the optical transition, |1><X|
SIGMA_MINUS = np.outer(KET_1, KET_X.conj())


def identity() -> np.ndarray:
    return np.eye(DIM, dtype=complex)


def outer(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """|a><b| for two kets."""
    return np.outer(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex).conj())


def projector(ket: np.ndarray) -> np.ndarray:
    return outer(ket, ket)


def as_operator(a) -> np.ndarray:
    """Coerce to a finite complex 3x3 array."""
    m = np.asarray(a, dtype=complex)
    if m.shape != (DIM, DIM):
        raise ValueError(f"expected a {DIM}x{DIM} operator, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("operator contains non-finite entries")
    return m


def matmul(a, b) -> np.ndarray:
    return as_operator(a) @ as_operator(b)


def dagger(a) -> np.ndarray:
    return as_operator(a).conj().T


def trace(a) -> complex:
    return complex(np.trace(as_operator(a)))


def hermiticity_defect(a) -> float:
    """Largest entrywise deviation from a = a^dagger."""
    m = as_operator(a)
    return float(np.max(np.abs(m - m.conj().T)))


def eigvals_hermitian(a, tol: float = 1e-9) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending.

    Raises ValueError when the input is not Hermitian within ``tol``.
    """
    m = as_operator(a)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e} > {tol:.1e})")
    return np.linalg.eigvalsh(m)


def assert_density_matrix(rho, trace_tol: float = 1e-10, herm_tol: float = 1e-12,
                          eig_tol: float = 1e-10) -> np.ndarray:
    """Validate trace, Hermiticity and positivity of a density matrix.

    Returns the validated array; raises ValueError on the first violated
    bound.  Default tolerances are the ones for freshly constructed states;
    trajectory checkpoints use looser bounds (see :mod:`dotgate.engine`).
    """
    m = as_operator(rho)
    tr_err = abs(np.trace(m).real - 1.0) + abs(np.trace(m).imag)
    if tr_err > trace_tol:
        raise ValueError(f"trace deviates from 1 by {tr_err:.3e} (tol {trace_tol:.1e})")
    defect = hermiticity_defect(m)
    if defect > herm_tol:
        raise ValueError(f"not Hermitian: defect {defect:.3e} (tol {herm_tol:.1e})")
    lo = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])
    if lo < -eig_tol:
        raise ValueError(f"negative eigenvalue {lo:.3e} (tol {eig_tol:.1e})")
    return m


def purity(rho, trace_tol: float = 1e-8, herm_tol: float = 1e-8) -> float:
    """tr(rho^2); lies in [1/3, 1] for any valid 3-level density matrix."""
    m = as_operator(rho)
    defect = hermiticity_defect(m)
    if defect > herm_tol:
        raise ValueError(f"purity of a non-Hermitian matrix (defect {defect:.3e})")
    tr_err = abs(np.trace(m) - 1.0)
    if tr_err > trace_tol:
        raise ValueError(f"purity of a non-normalized matrix (trace error {tr_err:.3e})")
    return float(np.einsum("ij,ji->", m, m).real)
