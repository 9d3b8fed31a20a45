"""Entanglement quasiprobabilities for a three-parameter two-qubit family,
the uniform attenuation kernel, and the dual decomposition that trades
distribution negativity for quasistate negativity.

The family of states is (1/4)(1 x 1 + sum_j c_j sigma_j x sigma_j) with
real coefficients (c_x, c_y, c_z); it is physical exactly when all four
Bell-basis eigenvalues are nonnegative.  The optimal separable
decomposition over Pauli eigenstate products has a known closed form, and
its minimum entry q/12 is negative exactly for entangled members.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operator_algebra import hermitian_eigen

__all__ = [
    "UnphysicalStateError",
    "TwoQubitState",
    "JointDistribution",
    "AttenuationKernel",
    "PAULI_LABELS",
    "pauli_matrices",
    "pauli_frame_states",
    "bell_eigenvalues",
    "entanglement_quasiprobability",
    "separability_verdict",
    "convolved_distribution",
    "positivity_threshold",
    "local_quasistate",
    "reconstruct_two_qubit",
    "uniform_kernel_matrix",
    "attenuate_distribution",
]

_PHYSICAL_TOL = 1e-10
_NEGATIVITY_TOL = 1e-12

# Basis convention: sigma_z = |1><1| - |0><0|, sigma_x = |0><1| + |1><0|,
# sigma_y = i|0><1| - i|1><0|.  Fixed frame ordering (x+, x-, y+, y-, z+, z-).
_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
_SIGMA_Y = np.array([[0, 1j], [-1j, 0]], dtype=complex)
_SIGMA_Z = np.array([[-1, 0], [0, 1]], dtype=complex)

PAULI_LABELS = ("x+", "x-", "y+", "y-", "z+", "z-")

_SQRT2 = np.sqrt(2.0)
_PAULI_STATES = (
    np.array([1, 1], dtype=complex) / _SQRT2,
    np.array([1, -1], dtype=complex) / _SQRT2,
    np.array([1, -1j], dtype=complex) / _SQRT2,
    np.array([1, 1j], dtype=complex) / _SQRT2,
    np.array([0, 1], dtype=complex),
    np.array([1, 0], dtype=complex),
)


class UnphysicalStateError(ValueError):
    """Coefficients outside the physical region of the two-qubit family."""


def pauli_matrices():
    """The three Pauli operators in this module's basis convention."""
    return _SIGMA_X.copy(), _SIGMA_Y.copy(), _SIGMA_Z.copy()


def pauli_frame_states():
    """Six Pauli eigenstates in the fixed (x+, x-, y+, y-, z+, z-) order."""
    return [s.copy() for s in _PAULI_STATES]


@dataclass(frozen=True)
class TwoQubitState:
    """Coefficients of the sigma_j x sigma_j expansion."""

    rho_x: float
    rho_y: float
    rho_z: float

    def coefficients(self):
        return (self.rho_x, self.rho_y, self.rho_z)

    def matrix(self) -> np.ndarray:
        out = np.eye(4, dtype=complex)
        for c, sigma in zip(self.coefficients(), (_SIGMA_X, _SIGMA_Y, _SIGMA_Z)):
            out += c * np.kron(sigma, sigma)
        return out / 4.0


def bell_eigenvalues(state: TwoQubitState) -> np.ndarray:
    """Eigenvalues of the 4x4 family matrix, sorted descending.

    All four are nonnegative exactly for physical coefficient triples; the
    extremal (pure) members have a single eigenvalue 1.
    """
    return hermitian_eigen(state.matrix()).eigenvalues


def _require_physical(state: TwoQubitState):
    smallest = bell_eigenvalues(state)[-1]
    if smallest < -_PHYSICAL_TOL:
        raise UnphysicalStateError(
            f"coefficients {state.coefficients()} give Bell-basis eigenvalue {smallest:.6g} < 0"
        )


@dataclass
class JointDistribution:
    """Real 6x6 distribution over ordered Pauli-eigenstate pairs.

    kind is "quasiprobability" for the optimal separable decomposition and
    "convolved" after the uniform product kernel; entries sum to 1 either
    way.
    """

    values: np.ndarray
    kind: str

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (6, 6):
            raise ValueError(f"joint distribution must be 6x6, got {self.values.shape}")


def _negativity_parameter(state: TwoQubitState) -> float:
    return 1.0 - sum(abs(c) for c in state.coefficients())


def entanglement_quasiprobability(state: TwoQubitState) -> JointDistribution:
    """Optimal separable-decomposition weights of a physical family member.

    Only same-axis blocks are populated:
    P(a_s, b_t) = delta(a, b) [q/12 + (|c_a| + s t c_a)/4] with
    q = 1 - |c_x| - |c_y| - |c_z|; the off-diagonal blocks are zero by the
    convention that unused pairs carry weight 0.  The minimum entry equals
    q/12, so negativity occurs exactly for entangled states.
    """
    _require_physical(state)
    q = _negativity_parameter(state)
    values = np.zeros((6, 6))
    for axis, coeff in enumerate(state.coefficients()):
        for i, sign_a in enumerate((1.0, -1.0)):
            for j, sign_b in enumerate((1.0, -1.0)):
                row = 2 * axis + i
                col = 2 * axis + j
                values[row, col] = q / 12.0 + (abs(coeff) + sign_a * sign_b * coeff) / 4.0
    return JointDistribution(values=values, kind="quasiprobability")


def separability_verdict(state: TwoQubitState):
    """Classify the state: ("separable" | "entangled", q).

    The family member is separable iff q = 1 - sum |c_j| is nonnegative.
    """
    _require_physical(state)
    q = _negativity_parameter(state)
    verdict = "separable" if q >= -_NEGATIVITY_TOL else "entangled"
    return verdict, q


def convolved_distribution(state: TwoQubitState, r: float) -> JointDistribution:
    """Apply the uniform product kernel with mix parameter r to the
    entanglement quasiprobability.

    P_KK(a, b) = r^2 P(a, b) + (1-r)^2/36 + r(1-r)/6 [P(a) + P(b)] with the
    marginals P(a) = sum_b P(a, b).  Nonnegative for every physical state
    once r <= 1/sqrt(7).
    """
    if not 0.0 < r <= 1.0:
        raise ValueError(f"mix parameter must lie in (0, 1], got {r}")
    base = entanglement_quasiprobability(state).values
    marg_a = base.sum(axis=1)
    marg_b = base.sum(axis=0)
    values = (
        r**2 * base
        + (1.0 - r) ** 2 / 36.0
        + (r * (1.0 - r) / 6.0) * (marg_a[:, None] + marg_b[None, :])
    )
    return JointDistribution(values=values, kind="convolved")


def positivity_threshold(state: TwoQubitState) -> float:
    """Largest mix parameter r in (0, 1] at which the convolved
    distribution stays entrywise nonnegative, bisected to 1e-10.

    Separable states return 1.0 (no negativity at any r); the worst case
    over physical states is 1/sqrt(7), attained at the extremal points.
    """

    def nonnegative(r):
        return convolved_distribution(state, r).values.min() >= -_NEGATIVITY_TOL

    if nonnegative(1.0):
        return 1.0
    lo, hi = 1e-9, 1.0
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if nonnegative(mid):
            lo = mid
        else:
            hi = mid
    return lo


def local_quasistate(index: int, r: float) -> np.ndarray:
    """Single-qubit quasistate (1/r)|j><j| - ((1-r)/(2r)) 1 for frame
    element j.

    Hermitian with unit trace; eigenvalues (1+r)/(2r) and -(1-r)/(2r), so
    it is an unphysical operator for every r < 1.
    """
    if not 0.0 < r <= 1.0:
        raise ValueError(f"mix parameter must lie in (0, 1], got {r}")
    psi = _PAULI_STATES[index]
    return np.outer(psi, psi.conj()) / r - ((1.0 - r) / (2.0 * r)) * np.eye(2, dtype=complex)


def reconstruct_two_qubit(dist: JointDistribution, r: float | None = None) -> np.ndarray:
    """Rebuild the 4x4 matrix from a joint distribution.

    Quasiprobability distributions expand over projector products; convolved
    distributions need the same mix parameter r they were built with and
    expand over quasistate products.  Both paths reproduce the source
    family matrix.
    """
    if dist.kind == "quasiprobability":
        elements = [np.outer(s, s.conj()) for s in _PAULI_STATES]
    elif dist.kind == "convolved":
        if r is None:
            raise ValueError("convolved distributions need the mix parameter r used to build them")
        elements = [local_quasistate(j, r) for j in range(6)]
    else:
        raise ValueError(f"unknown distribution kind {dist.kind!r}")
    out = np.zeros((4, 4), dtype=complex)
    for i in range(6):
        for j in range(6):
            w = dist.values[i, j]
            if w != 0.0:
                out += w * np.kron(elements[i], elements[j])
    return out


@dataclass(frozen=True)
class AttenuationKernel:
    """Uniform-noise convolution over a set of given cardinality.

    mix is the surviving fraction of the original distribution; the
    remainder is spread evenly over the set.
    """

    mix: float
    set_size: int

    def __post_init__(self):
        if not 0.0 < self.mix <= 1.0:
            raise ValueError(f"mix must lie in (0, 1], got {self.mix}")
        if self.set_size < 1:
            raise ValueError("set_size must be positive")


def uniform_kernel_matrix(kernel: AttenuationKernel):
    """Kernel matrix a id + b nn^T with b = (1-a)/|S| and its closed-form
    inverse (1/a) id - (b/a)/(a + b|S|) nn^T."""
    a = kernel.mix
    size = kernel.set_size
    b = (1.0 - a) / size
    ones = np.ones((size, size))
    k = a * np.eye(size) + b * ones
    k_inv = np.eye(size) / a - (b / a) / (a + b * size) * ones
    return k, k_inv


def attenuate_distribution(values, kernel: AttenuationKernel) -> np.ndarray:
    """Apply the uniform kernel: a P + (1-a)/|S| for normalized P."""
    values = np.asarray(values, dtype=float)
    if values.shape != (kernel.set_size,):
        raise ValueError(
            f"distribution length {values.shape} does not match set size {kernel.set_size}"
        )
    return kernel.mix * values + (1.0 - kernel.mix) / kernel.set_size * values.sum()
