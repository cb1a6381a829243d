"""Dense complex linear algebra: Hermitian eigenproblems, spectral matrix
functions, and the trace inner product.

All matrices are square numpy arrays of complex128. Dimensions of interest
are small (2 to a few dozen), so everything routes through LAPACK's dense
Hermitian solvers.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimMismatch, NonConvergence, NotHermitian, NotPositive

# Validation tolerances, shared across the package.
HERMITIAN_TOL = 1e-12
PSD_CLAMP = 1e-10  # eigenvalues in [-PSD_CLAMP, 0) are round-off, below is an error
TRACE_TOL = 1e-10
UNITARY_TOL = 1e-10


class EigenDecomposition(NamedTuple):
    """Spectral decomposition m = V diag(w) V† with w real ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_complex_matrix(m) -> np.ndarray:
    """Coerce to a square complex128 array with finite entries."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def check_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate Hermitian symmetry (max entrywise deviation from m†)."""
    a = as_complex_matrix(m)
    dev = np.max(np.abs(a - a.conj().T))
    if dev > tol:
        raise NotHermitian(f"deviation from conjugate transpose is {dev:.3e} > {tol:.0e}")
    return a


def eigh(m) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Returns real eigenvalues in ascending order and the matching orthonormal
    eigenvector columns, so that V diag(w) V† reconstructs the input.
    """
    a = check_hermitian(m)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(str(exc)) from exc
    return EigenDecomposition(w, v)


def clamped_spectrum(w: np.ndarray, clamp: float = PSD_CLAMP) -> np.ndarray:
    """Clamp eigenvalues in [-clamp, 0) to 0; below -clamp raise NotPositive."""
    lo = float(np.min(w))
    if lo < -clamp:
        raise NotPositive(f"eigenvalue {lo:.3e} below -{clamp:.0e}")
    return np.maximum(w, 0.0)


def matrix_sqrt(m) -> np.ndarray:
    """Principal square root of a PSD Hermitian matrix via spectral calculus."""
    w, v = eigh(m)
    s = np.sqrt(clamped_spectrum(w))
    return (v * s) @ v.conj().T


def hs_inner(a, b) -> complex:
    """Trace inner product Tr(a† b) between two equal-dim matrices."""
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape != b.shape:
        raise DimMismatch(f"shapes {a.shape} and {b.shape} differ")
    return complex(np.vdot(a, b))  # vdot conjugates its first argument
