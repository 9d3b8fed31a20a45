"""Finite-dimensional state decomposition through Gram-kernel duality.

A frame is an ordered set of pure states.  Its Gram kernel of squared
overlaps generates a dual operator set whose elements are generally not
positive semidefinite; expanding a density operator in those dual
operators turns directly measured projection probabilities into the state
itself, while the dual expansion in the bare projectors carries
possibly-negative weights.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .operator_algebra import invert, pseudo_invert

__all__ = [
    "Frame",
    "GramKernel",
    "Covm",
    "WeightVector",
    "gram_kernel",
    "covm",
    "born_probabilities",
    "quasiprobabilities",
    "reconstruct",
    "completeness_rank",
    "tetrahedron_frame",
    "frame_from_dict",
    "frame_to_dict",
    "load_frame",
]

_UNIT_NORM_TOL = 1e-12
# Smallest-singular-value ratio above which the kernel counts as invertible.
_KERNEL_COND_RTOL = 1e-10
_RANK_RTOL = 1e-10


@dataclass
class Frame:
    """Ordered set of unit vectors in C^dim with unique labels."""

    dim: int
    states: list
    labels: list

    def __post_init__(self):
        if not self.states:
            raise ValueError("frame needs at least one state")
        if len(self.labels) != len(self.states):
            raise ValueError("labels and states must have equal length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("frame labels must be unique")
        self.states = [np.asarray(s, dtype=complex).reshape(-1) for s in self.states]
        for lbl, s in zip(self.labels, self.states):
            if s.shape != (self.dim,):
                raise ValueError(f"state {lbl!r} has length {s.size}, expected {self.dim}")
            if abs(np.linalg.norm(s) - 1.0) > _UNIT_NORM_TOL:
                raise ValueError(f"state {lbl!r} is not unit-norm (|norm - 1| > {_UNIT_NORM_TOL})")

    def __len__(self):
        return len(self.states)

    def projectors(self):
        return [np.outer(s, s.conj()) for s in self.states]


@dataclass
class GramKernel:
    """Squared-overlap kernel of a frame together with its (pseudo-)inverse.

    mode is "exact" when the frame has dim^2 states and the kernel is
    numerically nonsingular, "pseudo" otherwise.
    """

    matrix: np.ndarray
    inverse: np.ndarray
    mode: str


@dataclass
class Covm:
    """Dual operator set of a frame: Gamma(j) = sum_l Kinv(j, l) |psi_l><psi_l|.

    In exact mode the duality tr[Gamma(i) Pi(j)] = delta(i, j) holds; rank
    records the dimension of the operator subspace the frame spans.
    """

    operators: list
    mode: str
    rank: int


@dataclass
class WeightVector:
    """Real expansion weights aligned with the frame order.

    kind is "born" for measured projection probabilities and "quasi" for
    the (possibly negative) dual weights.
    """

    values: np.ndarray
    kind: str

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)

    def __len__(self):
        return len(self.values)


def gram_kernel(frame: Frame) -> GramKernel:
    """Kernel K(i, j) = |<psi_i|psi_j>|^2 with exact or pseudo inverse.

    The exact inverse is used only for frames of dim^2 states whose kernel
    has smallest singular value above 1e-10 of the largest; anything else
    falls back to the Moore-Penrose pseudo-inverse and flags mode="pseudo".
    """
    vectors = np.array(frame.states)
    overlaps = vectors.conj() @ vectors.T
    k = np.abs(overlaps) ** 2
    svals = np.linalg.svd(k, compute_uv=False)
    nonsingular = svals[-1] > _KERNEL_COND_RTOL * svals[0]
    if len(frame) == frame.dim**2 and nonsingular:
        return GramKernel(matrix=k, inverse=invert(k).real, mode="exact")
    return GramKernel(matrix=k, inverse=pseudo_invert(k).real, mode="pseudo")


def completeness_rank(frame: Frame) -> int:
    """Rank of the |frame| x dim^2 matrix of vectorized projectors.

    The frame is informationally complete iff this equals dim^2.
    """
    stacked = np.array([p.reshape(-1) for p in frame.projectors()])
    svals = np.linalg.svd(stacked, compute_uv=False)
    return int(np.sum(svals > _RANK_RTOL * svals[0]))


def covm(frame: Frame) -> Covm:
    """Dual operators of the frame via the inverted Gram kernel."""
    kernel = gram_kernel(frame)
    projectors = frame.projectors()
    operators = []
    for row in kernel.inverse:
        gamma = np.zeros((frame.dim, frame.dim), dtype=complex)
        for coeff, proj in zip(row, projectors):
            gamma += coeff * proj
        operators.append(gamma)
    return Covm(operators=operators, mode=kernel.mode, rank=completeness_rank(frame))


def _validate_density(rho, dim: int, tol: float = 1e-9) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dim, dim):
        raise ValueError(f"density matrix shape {rho.shape} does not match frame dimension {dim}")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise ValueError("density matrix is not Hermitian within tolerance")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError("density matrix does not have unit trace within tolerance")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() < -tol:
        raise ValueError("density matrix is not positive semidefinite within tolerance")
    return rho


def born_probabilities(rho, frame: Frame) -> WeightVector:
    """Projection probabilities <psi_j|rho|psi_j> of a density matrix.

    The frame projectors are kept un-normalized, so the entries sum to
    tr[rho * sum_j Pi(j)], not necessarily 1 (the tetrahedron frame sums
    to 2, for instance).
    """
    rho = _validate_density(rho, frame.dim)
    values = np.array([np.real(s.conj() @ rho @ s) for s in frame.states])
    return WeightVector(values=values, kind="born")


def quasiprobabilities(rho, frame: Frame) -> WeightVector:
    """Dual weights tr[rho Gamma(j)]; may be negative, sum to tr(rho) for
    frames whose dual set resolves the identity."""
    rho = _validate_density(rho, frame.dim)
    dual = covm(frame)
    values = np.array([np.real(np.trace(rho @ g)) for g in dual.operators])
    return WeightVector(values=values, kind="quasi")


def reconstruct(weights, dual: Covm) -> np.ndarray:
    """Expand sum_j w_j Gamma(j) from Born weights and the dual set.

    For exact-mode informationally complete frames this reproduces the
    measured density matrix; in pseudo mode it is the minimum-norm
    consistent operator inside the spanned subspace (dual.rank reports its
    dimension).
    """
    values = np.asarray(getattr(weights, "values", weights), dtype=float)
    if len(values) != len(dual.operators):
        raise ValueError(
            f"weight vector length {len(values)} does not match frame size {len(dual.operators)}"
        )
    out = np.zeros_like(dual.operators[0])
    for w, gamma in zip(values, dual.operators):
        out = out + w * gamma
    return out


def tetrahedron_frame() -> Frame:
    """Four qubit states in tetrahedral configuration on the Bloch sphere.

    The squared overlap between any two distinct states is 1/3, which
    makes the four projectors an informationally complete qubit frame.
    """
    w = np.exp(2j * np.pi / 3)
    states = [np.array([0.0, 1.0], dtype=complex)]
    for m in range(3):
        states.append(np.array([np.sqrt(2.0) * w**m, 1.0], dtype=complex) / np.sqrt(3.0))
    return Frame(dim=2, states=states, labels=["psi1", "psi2", "psi3", "psi4"])


def frame_from_dict(data: dict) -> Frame:
    """Build a Frame from the JSON wire format.

    Expected shape: {"dim": d, "states": [[[re, im], ...], ...],
    "labels": [...]}; labels default to "state0", "state1", ... when absent.
    """
    try:
        dim = int(data["dim"])
        raw_states = data["states"]
    except (KeyError, TypeError) as exc:
        raise ValueError("frame JSON needs 'dim' and 'states' fields") from exc
    states = []
    for entry in raw_states:
        states.append(np.array([complex(re, im) for re, im in entry]))
    labels = list(data.get("labels") or (f"state{i}" for i in range(len(states))))
    return Frame(dim=dim, states=states, labels=labels)


def frame_to_dict(frame: Frame) -> dict:
    return {
        "dim": frame.dim,
        "states": [[[float(z.real), float(z.imag)] for z in s] for s in frame.states],
        "labels": list(frame.labels),
    }


def load_frame(path) -> Frame:
    with open(path, "r", encoding="utf-8") as fh:
        return frame_from_dict(json.load(fh))
