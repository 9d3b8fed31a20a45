"""Dense complex operator core: truncated Fock-space builders, matrix
exponential, Hermitian eigendecomposition, and (pseudo-)inversion.

All operators live in an explicitly truncated number basis |0>..|cutoff-1>.
Truncation is the single systematic error source: Fock-space unitaries are
accurate only on a leading block, and validation conventionally compares
the leading floor(cutoff/2) block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "FockSpace",
    "Spectrum",
    "annihilation",
    "creation",
    "number_operator",
    "coherent_vector",
    "displacement",
    "squeeze",
    "matrix_exponential",
    "hermitian_eigen",
    "invert",
    "pseudo_invert",
    "leading_block",
]

# Relative tolerance below which a singular value counts as zero for invert().
_SINGULAR_RTOL = 1e-12


@dataclass(frozen=True)
class FockSpace:
    """Truncated single-mode Fock space with basis |0>, ..., |cutoff-1>."""

    cutoff: int

    def __post_init__(self):
        if self.cutoff < 2:
            raise ValueError(f"Fock cutoff must be >= 2, got {self.cutoff}")


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition result: real eigenvalues sorted descending,
    eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def leading_block(matrix, block=None):
    """Return the leading block of a square matrix (default: half size).

    Fock-space results are trusted only away from the truncation edge, so
    checks against exact identities are made on this sub-matrix.
    """
    matrix = np.asarray(matrix)
    if block is None:
        block = max(1, matrix.shape[0] // 2)
    return matrix[:block, :block]


def annihilation(space: FockSpace) -> np.ndarray:
    """Annihilation operator: entry (n-1, n) equals sqrt(n)."""
    a = np.zeros((space.cutoff, space.cutoff), dtype=complex)
    for n in range(1, space.cutoff):
        a[n - 1, n] = np.sqrt(n)
    return a


def creation(space: FockSpace) -> np.ndarray:
    """Creation operator, the conjugate transpose of annihilation."""
    return annihilation(space).conj().T


def number_operator(space: FockSpace) -> np.ndarray:
    return np.diag(np.arange(space.cutoff).astype(complex))


def coherent_vector(alpha: complex, space: FockSpace) -> np.ndarray:
    """Coherent-state amplitudes exp(-|alpha|^2/2) alpha^n / sqrt(n!).

    Accurate when |alpha|^2 is well below the cutoff; the norm then differs
    from 1 only by the truncation tail.
    """
    v = np.zeros(space.cutoff, dtype=complex)
    v[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, space.cutoff):
        v[n] = v[n - 1] * alpha / np.sqrt(n)
    return v


def matrix_exponential(matrix) -> np.ndarray:
    """exp(M) by scaling-and-squaring on a Taylor series.

    The series is summed until the next term falls below 1e-16 of the
    running result, so the truncated tail is below 1e-14 relative.  For
    strictly triangular (nilpotent) input no scaling is triggered by small
    norms and the series terminates exactly when the powers vanish.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix exponential needs a square matrix, got shape {m.shape}")
    dim = m.shape[0]

    norm = np.abs(m).sum(axis=0).max()  # 1-norm
    squarings = 0
    if norm > 1.0:
        squarings = int(np.ceil(np.log2(norm)))
        m = m / (2.0**squarings)

    result = np.eye(dim, dtype=complex)
    term = np.eye(dim, dtype=complex)
    for k in range(1, 80):
        term = term @ m / k
        tmax = np.abs(term).max()
        if tmax == 0.0:
            break
        result = result + term
        if tmax <= 1e-16 * np.abs(result).max():
            break
    for _ in range(squarings):
        result = result @ result
    return result


def displacement(alpha: complex, space: FockSpace) -> np.ndarray:
    """Displacement unitary exp(alpha a^dag - conj(alpha) a).

    Unitary up to truncation; callers should keep |alpha|^2 well below the
    cutoff and trust only the leading block.
    """
    a = annihilation(space)
    return matrix_exponential(alpha * a.conj().T - np.conj(alpha) * a)


def squeeze(zeta: complex, space: FockSpace) -> np.ndarray:
    """Squeezing unitary exp((conj(zeta) a^2 - zeta a^dag^2) / 2).

    The exponent is anti-Hermitian, so the result is unitary up to
    truncation.
    """
    a = annihilation(space)
    ad = a.conj().T
    return matrix_exponential(0.5 * (np.conj(zeta) * (a @ a) - zeta * (ad @ ad)))


def hermitian_eigen(matrix, tol: float = 1e-10) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Raises ValueError if the input deviates from Hermiticity by more than
    `tol` in max norm.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    dev = np.abs(m - m.conj().T).max()
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian: max deviation {dev:.3e} exceeds {tol:.1e}")
    # Symmetrize to shed the (sub-tolerance) asymmetry before LAPACK.
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    order = np.argsort(w)[::-1]
    return Spectrum(eigenvalues=w[order], eigenvectors=v[:, order])


def invert(matrix) -> np.ndarray:
    """Exact inverse of a square matrix.

    Raises numpy.linalg.LinAlgError when the smallest singular value is
    below 1e-12 of the largest (numerically singular input).
    """
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"cannot invert a non-square matrix of shape {m.shape}")
    svals = np.linalg.svd(m, compute_uv=False)
    if svals[-1] < _SINGULAR_RTOL * svals[0]:
        raise np.linalg.LinAlgError(
            f"matrix is numerically singular (sigma_min/sigma_max = {svals[-1] / svals[0]:.3e})"
        )
    return np.linalg.inv(m)


def pseudo_invert(matrix, rel_tol: float = 1e-12) -> np.ndarray:
    """Moore-Penrose pseudo-inverse; singular values below rel_tol * sigma_max
    are treated as zero."""
    return np.linalg.pinv(np.asarray(matrix, dtype=complex), rcond=rel_tol)
