"""Bosonic quasistates in a truncated Fock space.

Three families are covered: Fourier-kernel quasistates (rescaled
displacement operators) together with the quadrature-sampling estimator
they induce, Gaussian-filter quasistates parametrized by a triple
(s, p, q) with their squeezed-thermal spectral structure, and the Q
(Husimi-Kano) function used as the independent cross-check for every
constructed operator.

Conventions fixed here once:

* quadrature operator x[phi] = e^{i phi} a + e^{-i phi} a^dag, which gives
  the vacuum distribution mean 0 and variance 1;
* phases phi live in [-pi/2, pi/2);
* complex square roots take the principal branch (nonnegative real part,
  ties resolved to nonnegative imaginary part), which is what numpy does.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .operator_algebra import (
    FockSpace,
    annihilation,
    coherent_vector,
    displacement,
    matrix_exponential,
)

__all__ = [
    "SingularFilterError",
    "GaussianFilterParams",
    "SqueezedThermalParams",
    "QuasiStateOperator",
    "QuadratureRecord",
    "HomodyneResult",
    "TABLE_PRESETS",
    "table_preset",
    "filter_value",
    "fourier_quasistate",
    "gaussian_quasistate",
    "displaced_quasistate",
    "spq_to_squeezed_thermal",
    "squeezed_thermal_to_spq",
    "s_param_eigenvalues",
    "analytic_q",
    "numeric_q",
    "sample_quadratures",
    "homodyne_reconstruct",
    "write_quadrature_csv",
    "read_quadrature_csv",
]

_SINGULAR_TOL = 1e-10
_HERMITIAN_FLAG_TOL = 1e-8


class SingularFilterError(ValueError):
    """Filter parameters at which the quasistate construction is singular."""


@dataclass(frozen=True)
class GaussianFilterParams:
    """Gaussian filter triple (s, p, q), constrained to |p| = |q|.

    The filter value at a phase-space point beta is
    exp(-(1-s)/2 |beta|^2 - p/4 beta^2 - q/4 conj(beta)^2).
    """

    s: complex
    p: complex
    q: complex

    def __post_init__(self):
        if abs(abs(self.p) - abs(self.q)) > 1e-12:
            raise ValueError(f"|p| and |q| must agree: |p|={abs(self.p)}, |q|={abs(self.q)}")

    @property
    def normalization(self) -> complex:
        """(1+s)^2 - p q; the quasistate construction fails when this vanishes."""
        return (1 + self.s) ** 2 - self.p * self.q

    @property
    def construction_valid(self) -> bool:
        return abs(self.normalization) > _SINGULAR_TOL


@dataclass(frozen=True)
class SqueezedThermalParams:
    """Squeezed-thermal parametrization of a Gaussian quasistate.

    omega is the geometric ratio of the thermal-like factor, tau and
    tau_conj its two (independently complex) squeeze amplitudes, r_aux the
    square root of s^2 - p q on the principal branch.  zeta is the ordinary
    squeezing parameter when it is well defined (tau_conj = conj(tau) and
    |tau| < 1) and None otherwise; n_bar = omega / (1 - omega) generalizes
    the mean thermal occupation and may be complex.
    """

    omega: complex
    tau: complex
    tau_conj: complex
    r_aux: complex
    zeta: complex | None
    n_bar: complex


@dataclass
class QuasiStateOperator:
    """Operator matrix tagged with how it was built.

    hermitian_flag is measured on the leading half-block, never assumed:
    several constructions here are genuinely non-Hermitian.
    """

    matrix: np.ndarray
    provenance: str
    hermitian_flag: bool


def _measured_hermitian(matrix) -> bool:
    block = max(1, matrix.shape[0] // 2)
    sub = matrix[:block, :block]
    return bool(np.abs(sub - sub.conj().T).max() < _HERMITIAN_FLAG_TOL)


TABLE_PRESETS = {
    "glauber-sudarshan": (1.0, 0.0, 0.0),
    "wigner-weyl": (0.0, 0.0, 0.0),
    "husimi-kano": (-1.0, 0.0, 0.0),
    "agarwal-wolf-plus": (0.0, 1.0, -1.0),
    "agarwal-wolf-minus": (0.0, -1.0, 1.0),
}


def table_preset(name: str) -> GaussianFilterParams:
    """Filter parameters of the named standard distribution.

    The husimi-kano preset is construction-invalid (its quasistate is a
    singular distribution) but still usable with filter_value.
    """
    try:
        s, p, q = TABLE_PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(TABLE_PRESETS)}") from None
    return GaussianFilterParams(s=s, p=p, q=q)


def filter_value(params: GaussianFilterParams, beta: complex) -> complex:
    """Evaluate the Gaussian filter at beta."""
    return complex(
        np.exp(
            -0.5 * (1 - params.s) * abs(beta) ** 2
            - 0.25 * params.p * beta**2
            - 0.25 * params.q * np.conj(beta) ** 2
        )
    )


def fourier_quasistate(beta: complex, space: FockSpace) -> QuasiStateOperator:
    """Fourier-kernel quasistate (exp(-|beta|^2)/pi) exp(-beta a^dag) exp(conj(beta) a).

    Equals (exp(-|beta|^2 / 2) / pi) times the displacement unitary of
    -beta up to truncation, so it is a rescaled unitary; its adjoint is the
    quasistate of -beta.
    """
    a = annihilation(space)
    ad = a.conj().T
    m = (np.exp(-(abs(beta) ** 2)) / np.pi) * (
        matrix_exponential(-beta * ad) @ matrix_exponential(np.conj(beta) * a)
    )
    return QuasiStateOperator(
        matrix=m,
        provenance=f"fourier(beta={beta})",
        hermitian_flag=_measured_hermitian(m),
    )


def gaussian_quasistate(params: GaussianFilterParams, space: FockSpace) -> QuasiStateOperator:
    """Quasistate of a Gaussian filter, built in factored exponential form.

    With N = (1+s)^2 - pq the operator is

        (2 / sqrt(N)) exp((q/N) a^dag^2) ratio^n exp((p/N) a^2),

    where ratio = (s^2 - pq - 1) / N weights the number-diagonal factor.
    These coefficients are the branch-free closed forms of the
    squeezed-thermal factorization; their equivalence to the normally
    ordered Gaussian follows from :exp(c n):  = (1 + c)^n.  Raises
    SingularFilterError when N vanishes (the s -> -1, p = q = 0 limit is a
    singular distribution, not an operator).
    """
    norm = params.normalization
    if abs(norm) < _SINGULAR_TOL:
        detail = ""
        if abs(params.s + 1) < 1e-6 and abs(params.p) < 1e-6 and abs(params.q) < 1e-6:
            detail = " (s = -1 with p = q = 0 has a singular-distribution quasistate)"
        raise SingularFilterError(f"(1+s)^2 - pq vanishes for {params}{detail}")
    prefactor = 2.0 / np.sqrt(complex(norm))
    ratio = (params.s**2 - params.p * params.q - 1.0) / norm
    a = annihilation(space)
    ad = a.conj().T
    diag = np.power(complex(ratio), np.arange(space.cutoff))
    m = prefactor * (
        matrix_exponential((params.q / norm) * (ad @ ad))
        @ (diag[:, None] * matrix_exponential((params.p / norm) * (a @ a)))
    )
    return QuasiStateOperator(
        matrix=m,
        provenance=f"gaussian(s={params.s}, p={params.p}, q={params.q})",
        hermitian_flag=_measured_hermitian(m),
    )


def displaced_quasistate(op: QuasiStateOperator, alpha: complex) -> QuasiStateOperator:
    """Conjugate a quasistate with the displacement unitary of alpha."""
    space = FockSpace(op.matrix.shape[0])
    d = displacement(alpha, space)
    m = d @ op.matrix @ d.conj().T
    return QuasiStateOperator(
        matrix=m,
        provenance=f"displaced({op.provenance}, alpha={alpha})",
        hermitian_flag=_measured_hermitian(m),
    )


def spq_to_squeezed_thermal(params: GaussianFilterParams) -> SqueezedThermalParams:
    """Map (s, p, q) to the squeezed-thermal parameters (omega, tau, tau_conj).

    Uses r = sqrt(s^2 - pq) on the principal branch, omega = (r-1)/(r+1),
    tau = -q/(s+r) and tau_conj = -p/(s+r); tau tau_conj then equals
    (s-r)/(s+r) and tau/tau_conj = q/p whenever p, q are nonzero.  For
    p = q = 0 both squeeze amplitudes vanish identically.
    """
    s, p, q = params.s, params.p, params.q
    if (p == 0) != (q == 0):
        raise ValueError("tau/tau_conj is undefined when exactly one of p, q vanishes")
    r = np.sqrt(complex(s * s - p * q))
    omega = (r - 1.0) / (r + 1.0)
    if p == 0 and q == 0:
        tau = 0j
        tau_conj = 0j
    else:
        tau = -q / (s + r)
        tau_conj = -p / (s + r)
    zeta = None
    if abs(tau_conj - np.conj(tau)) <= 1e-12 * max(1.0, abs(tau)) and abs(tau) < 1.0:
        zeta = 0j if tau == 0 else np.exp(1j * np.angle(tau)) * np.arctanh(abs(tau))
    return SqueezedThermalParams(
        omega=complex(omega),
        tau=complex(tau),
        tau_conj=complex(tau_conj),
        r_aux=complex(r),
        zeta=None if zeta is None else complex(zeta),
        n_bar=complex(omega / (1.0 - omega)),
    )


def squeezed_thermal_to_spq(st: SqueezedThermalParams) -> GaussianFilterParams:
    """Inverse parameter map, closed forms in (omega, tau, tau_conj).

    Round-trips with spq_to_squeezed_thermal whenever p, q are nonzero.
    """
    omega, tau, tau_conj = st.omega, st.tau, st.tau_conj
    ttc = tau * tau_conj
    if abs(1.0 - omega) < _SINGULAR_TOL or abs(1.0 - ttc) < _SINGULAR_TOL:
        raise SingularFilterError(
            f"parameter map is singular at omega={omega}, tau*tau_conj={ttc}"
        )
    denom = (1.0 - omega) * (1.0 - ttc)
    p = -2.0 * (1.0 + omega) * tau_conj / denom
    q = -2.0 * (1.0 + omega) * tau / denom
    s = 2.0 * (1.0 + omega * ttc) / denom - 1.0
    return GaussianFilterParams(s=complex(s), p=complex(p), q=complex(q))


def s_param_eigenvalues(s: complex, n_max: int) -> np.ndarray:
    """Eigenvalues (2/(1+s)) (-(1-s)/(1+s))^n of the p = q = 0 quasistate,
    n = 0 .. n_max - 1."""
    if abs(1 + s) < 1e-12:
        raise SingularFilterError("eigenvalue law is undefined at s = -1")
    base = -(1.0 - s) / (1.0 + s)
    return (2.0 / (1.0 + s)) * np.power(complex(base), np.arange(n_max))


def analytic_q(params: GaussianFilterParams, alpha: complex) -> complex:
    """Closed-form Q function of the Gaussian quasistate at alpha.

    Follows from the coherent-state substitution rule for normally ordered
    expressions: with N = (1+s)^2 - pq,

        Q(alpha) = 2 exp((-2(1+s)|alpha|^2 + q conj(alpha)^2 + p alpha^2)/N)
                   / (pi sqrt(N)).

    This is the module's independent oracle for the matrix constructions.
    """
    norm = params.normalization
    if abs(norm) < _SINGULAR_TOL:
        raise SingularFilterError(f"(1+s)^2 - pq vanishes for {params}")
    expo = (
        -2.0 * (1.0 + params.s) * abs(alpha) ** 2
        + params.q * np.conj(alpha) ** 2
        + params.p * alpha**2
    ) / norm
    return complex(2.0 * np.exp(expo) / (np.pi * np.sqrt(complex(norm))))


def numeric_q(op: QuasiStateOperator, alpha: complex) -> complex:
    """Q function <alpha| Delta |alpha> / pi from the operator matrix."""
    space = FockSpace(op.matrix.shape[0])
    v = coherent_vector(alpha, space)
    return complex(v.conj() @ op.matrix @ v) / np.pi


@dataclass(frozen=True)
class QuadratureRecord:
    """One homodyne sample: quadrature value x at local-oscillator phase phi."""

    x: float
    phi: float

    def __post_init__(self):
        if not (-np.pi / 2 <= self.phi < np.pi / 2):
            raise ValueError(f"phi must lie in [-pi/2, pi/2), got {self.phi}")


def sample_quadratures(alpha: complex, n: int, seed: int) -> list:
    """Simulate homodyne data for a coherent state with amplitude alpha.

    Phases are uniform on [-pi/2, pi/2); for each phase the quadrature is
    Gaussian with mean 2 Re(alpha e^{i phi}) and variance 1 (the vacuum
    variance of x[phi] under this module's convention).  Deterministic for
    a fixed seed.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    phi = rng.uniform(-np.pi / 2, np.pi / 2, size=n)
    mean = 2.0 * np.real(alpha * np.exp(1j * phi))
    x = rng.normal(loc=mean, scale=1.0)
    return [QuadratureRecord(x=float(xv), phi=float(pv)) for xv, pv in zip(x, phi)]


@dataclass
class HomodyneResult:
    """Reconstructed matrix with basic diagnostics."""

    matrix: np.ndarray
    trace: float
    min_eigenvalue: float


def homodyne_reconstruct(samples, space: FockSpace, r_max: float = 6.0, r_step: float = 0.05) -> HomodyneResult:
    """Estimate a density matrix from quadrature samples.

    Discretizes

        rho ~ sum_r dr |r| e^{r^2/2} (pi/N) sum_j e^{i r x_j} Delta_F(i r e^{-i phi_j})

    on a midpoint grid over r in (0, r_max]; the negative-r half of the
    radial integral is the Hermitian conjugate of the positive half and is
    folded in as such, so the estimate is Hermitian by construction.  The
    |r| weight is the area element of the substitution beta = i r e^{-i phi}
    covering the complex plane once.  The integrand carries net damping
    e^{-r^2/2}, so the default grid tail beyond r = 6 is negligible.

    Returns the estimate with its trace and smallest eigenvalue; statistical
    noise scales as 1/sqrt(len(samples)).
    """
    if len(samples) == 0:
        raise ValueError("homodyne reconstruction needs at least one sample")
    if r_max <= 0 or r_step <= 0:
        raise ValueError("r_max and r_step must be positive")
    x = np.fromiter((rec.x for rec in samples), dtype=float, count=len(samples))
    phi = np.fromiter((rec.phi for rec in samples), dtype=float, count=len(samples))

    cutoff = space.cutoff
    a = annihilation(space)
    ad = a.conj().T
    r_grid = np.arange(0.5 * r_step, r_max, r_step)

    # Phase factorization: Delta_F(i r e^{-i phi}) has elements
    # (e^{-r^2}/pi) e^{i (n-m) phi} G_mn(r) with G(r) the phi = 0 product,
    # so the sample sum reduces to phase sums over (r, n - m).
    kernels = np.stack(
        [matrix_exponential(-1j * r * ad) @ matrix_exponential(-1j * r * a) for r in r_grid]
    )
    offsets = np.arange(-(cutoff - 1), cutoff)
    phase_sums = np.zeros((len(r_grid), len(offsets)), dtype=complex)
    chunk = 20000
    for start in range(0, len(x), chunk):
        xs = x[start : start + chunk]
        ps = phi[start : start + chunk]
        radial = np.exp(1j * np.outer(r_grid, xs))
        angular = np.exp(1j * np.outer(ps, offsets))
        phase_sums += radial @ angular

    idx = np.arange(cutoff)
    offset_index = idx[None, :] - idx[:, None] + (cutoff - 1)
    weights = r_step * r_grid * np.exp(-0.5 * r_grid**2) / len(x)
    half = np.zeros((cutoff, cutoff), dtype=complex)
    for k in range(len(r_grid)):
        half += weights[k] * (kernels[k] * phase_sums[k][offset_index])
    estimate = half + half.conj().T

    eigenvalues = np.linalg.eigvalsh(estimate)
    return HomodyneResult(
        matrix=estimate,
        trace=float(np.trace(estimate).real),
        min_eigenvalue=float(eigenvalues.min()),
    )


def write_quadrature_csv(path, samples, metadata: dict | None = None):
    """Write samples as CSV with header x,phi; metadata goes into leading
    '#' comment lines."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if metadata:
            for key, value in metadata.items():
                fh.write(f"# {key}={value}\n")
        writer = csv.writer(fh)
        writer.writerow(["x", "phi"])
        for rec in samples:
            writer.writerow([repr(float(rec.x)), repr(float(rec.phi))])


def read_quadrature_csv(path) -> list:
    """Read a quadrature CSV (header x,phi), skipping '#' comment lines."""
    samples = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = (line for line in fh if not line.startswith("#"))
        reader = csv.reader(rows)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["x", "phi"]:
            raise ValueError(f"expected quadrature CSV header 'x,phi', got {header}")
        for row in reader:
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"malformed quadrature row: {row}")
            samples.append(QuadratureRecord(x=float(row[0]), phi=float(row[1])))
    return samples
