import numpy as np
import pytest

from qsk import (
    FockSpace,
    GaussianFilterParams,
    SingularFilterError,
    analytic_q,
    annihilation,
    creation,
    displaced_quasistate,
    filter_value,
    fourier_quasistate,
    gaussian_quasistate,
    homodyne_reconstruct,
    leading_block,
    matrix_exponential,
    numeric_q,
    read_quadrature_csv,
    s_param_eigenvalues,
    sample_quadratures,
    spq_to_squeezed_thermal,
    squeeze,
    squeezed_thermal_to_spq,
    table_preset,
    write_quadrature_csv,
)
from qsk.phase_space import QuadratureRecord


def q_grid(extent=1.5, n=5):
    axis = np.linspace(-extent, extent, n)
    return [complex(re, im) for re in axis for im in axis]


def pure_squeezed_params(zeta):
    """Filter parameters whose quasistate is a pure squeezed state."""
    t = np.tanh(abs(zeta))
    phase = np.exp(1j * np.angle(zeta)) if zeta != 0 else 1.0
    s = (1 + t**2) / (1 - t**2)
    q = -2 * phase * t / (1 - t**2)
    return GaussianFilterParams(s=s, p=np.conj(q), q=q)


# --- filter parameters and presets ---------------------------------------


def test_table_presets():
    assert table_preset("glauber-sudarshan") == GaussianFilterParams(1.0, 0.0, 0.0)
    assert table_preset("wigner-weyl") == GaussianFilterParams(0.0, 0.0, 0.0)
    assert table_preset("agarwal-wolf-plus") == GaussianFilterParams(0.0, 1.0, -1.0)
    assert table_preset("agarwal-wolf-minus") == GaussianFilterParams(0.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        table_preset("wigner")


def test_husimi_preset_invalid_for_construction_but_filterable():
    params = table_preset("husimi-kano")
    assert not params.construction_valid
    assert abs(filter_value(params, 1.0) - np.exp(-1.0)) < 1e-15
    with pytest.raises(SingularFilterError):
        gaussian_quasistate(params, FockSpace(10))


def test_params_require_matching_magnitudes():
    with pytest.raises(ValueError):
        GaussianFilterParams(s=0.0, p=1.0, q=0.5)


def test_filter_value_basics():
    params = GaussianFilterParams(s=0.3, p=0.2j, q=0.2)
    assert filter_value(params, 0.0) == 1.0
    glauber = table_preset("glauber-sudarshan")
    for beta in (0.5, 1.0 + 0.7j, -2.0j):
        assert abs(filter_value(glauber, beta) - 1.0) < 1e-15


# --- the normal-ordering identity behind the factored construction -------


def test_normally_ordered_exponential_identity():
    # sum_j lam^j ad^j a^j / j! == (1 + lam)^n, checked by brute force
    sp = FockSpace(8)
    a = annihilation(sp)
    ad = creation(sp)
    for lam in (-0.5, 0.3, 1 + 1j):
        total = np.zeros((8, 8), dtype=complex)
        a_pow = np.eye(8, dtype=complex)
        ad_pow = np.eye(8, dtype=complex)
        factorial = 1.0
        for j in range(9):
            if j > 0:
                a_pow = a_pow @ a
                ad_pow = ad_pow @ ad
                factorial *= j
            total += lam**j * (ad_pow @ a_pow) / factorial
        expected = np.diag((1 + lam) ** np.arange(8).astype(complex))
        assert np.abs(total - expected).max() < 1e-12


# --- Fourier quasistates --------------------------------------------------


def test_fourier_zero_is_scaled_identity():
    op = fourier_quasistate(0.0, FockSpace(12))
    assert np.abs(op.matrix - np.eye(12) / np.pi).max() < 1e-15
    assert op.hermitian_flag


def test_fourier_is_rescaled_unitary():
    beta = 0.4 + 0.2j
    sp = FockSpace(30)
    op = fourier_quasistate(beta, sp)
    u = np.pi * np.exp(abs(beta) ** 2 / 2) * op.matrix
    prod = leading_block(u.conj().T @ u)
    assert np.abs(prod - np.eye(prod.shape[0])).max() < 1e-8


def test_fourier_adjoint_symmetry(rng):
    sp = FockSpace(20)
    for _ in range(20):
        beta = complex(*rng.uniform(-1, 1, 2))
        left = fourier_quasistate(beta, sp).matrix.conj().T
        right = fourier_quasistate(-beta, sp).matrix
        assert np.abs(left - right).max() < 1e-10


# --- Gaussian quasistates -------------------------------------------------


def test_gaussian_vacuum_limit():
    op = gaussian_quasistate(table_preset("glauber-sudarshan"), FockSpace(25))
    expected = np.zeros((25, 25), dtype=complex)
    expected[0, 0] = 1.0
    assert np.abs(op.matrix - expected).max() < 1e-10
    assert op.hermitian_flag


def test_gaussian_wigner_diagonal():
    op = gaussian_quasistate(table_preset("wigner-weyl"), FockSpace(15))
    expected = np.diag(2.0 * (-1.0) ** np.arange(15))
    assert np.abs(op.matrix - expected).max() < 1e-12


def test_gaussian_agarwal_wolf_matches_oracle():
    params = table_preset("agarwal-wolf-plus")
    op = gaussian_quasistate(params, FockSpace(40))
    assert not op.hermitian_flag
    phases = []
    for alpha in q_grid():
        numeric = numeric_q(op, alpha)
        assert abs(numeric - analytic_q(params, alpha)) < 1e-6
        phases.append(abs(np.angle(numeric)))
    assert max(phases) > 0.5  # genuinely complex Q, not a radial phase pattern


def test_gaussian_hermitian_for_real_s_conjugate_pq():
    # real s with p = conj(q) gives a Hermitian operator; the flag is measured
    op = gaussian_quasistate(GaussianFilterParams(1.3, 0.3 - 0.2j, 0.3 + 0.2j), FockSpace(30))
    assert op.hermitian_flag
    block = op.matrix[:15, :15]
    assert np.abs(block - block.conj().T).max() < 1e-8


def test_spectral_law_matches_construction(rng):
    # p = q = 0 quasistates are diagonal; levels follow the closed-form law
    sp = FockSpace(40)
    for s in (-0.6, -0.2, 0.0, 0.35, 0.8, 1.0):
        op = gaussian_quasistate(GaussianFilterParams(s, 0.0, 0.0), sp)
        levels = np.diag(op.matrix)[:10]
        expected = s_param_eigenvalues(s, 10)
        assert np.abs(levels - expected).max() < 1e-6


def test_unitary_similarity_for_real_squeezed_thermal():
    # construction equals S W S^dag with W = (1-omega) omega^n
    sp = FockSpace(40)
    for omega, tau in ((-0.4, 0.3), (0.2, -0.25), (0.5, 0.15)):
        from qsk import SqueezedThermalParams

        st = SqueezedThermalParams(
            omega=omega, tau=tau, tau_conj=tau, r_aux=0j, zeta=None, n_bar=omega / (1 - omega)
        )
        params = squeezed_thermal_to_spq(st)
        op = gaussian_quasistate(params, sp)
        zeta = np.arctanh(tau)
        s_mat = squeeze(zeta, sp)
        w_mat = np.diag((1 - omega) * omega ** np.arange(40)).astype(complex)
        target = s_mat @ w_mat @ s_mat.conj().T
        dev = np.abs(leading_block(op.matrix) - leading_block(target)).max()
        assert dev < 1e-6


# --- parameter maps -------------------------------------------------------


def test_spq_to_squeezed_thermal_known_points():
    st = spq_to_squeezed_thermal(GaussianFilterParams(0.0, 0.0, 0.0))
    assert abs(st.r_aux) < 1e-12 and abs(st.omega + 1) < 1e-12 and st.tau == 0
    st = spq_to_squeezed_thermal(GaussianFilterParams(1.0, 0.0, 0.0))
    assert abs(st.r_aux - 1) < 1e-12 and abs(st.omega) < 1e-12 and abs(st.n_bar) < 1e-12
    assert st.zeta == 0


def test_squeezed_family_has_zero_occupation():
    for zeta in (0.3, 0.5j, -0.2 + 0.4j):
        st = spq_to_squeezed_thermal(pure_squeezed_params(zeta))
        assert abs(st.n_bar) < 1e-10
        assert st.zeta is not None and abs(st.zeta - zeta) < 1e-10


def test_squeezed_thermal_to_spq_known_points():
    from qsk import SqueezedThermalParams

    vac = squeezed_thermal_to_spq(
        SqueezedThermalParams(omega=0j, tau=0j, tau_conj=0j, r_aux=1j * 0, zeta=0j, n_bar=0j)
    )
    assert abs(vac.s - 1) < 1e-12 and vac.p == 0 and vac.q == 0
    wigner = squeezed_thermal_to_spq(
        SqueezedThermalParams(omega=-1.0, tau=0j, tau_conj=0j, r_aux=0j, zeta=0j, n_bar=-0.5)
    )
    assert abs(wigner.s) < 1e-12 and wigner.p == 0 and wigner.q == 0


def test_parameter_round_trip(rng):
    count = 0
    while count < 50:
        s = complex(*rng.uniform(-0.85, 0.85, 2))
        mag = rng.uniform(0.05, 1.0)
        p = mag * np.exp(1j * rng.uniform(0, 2 * np.pi))
        q = mag * np.exp(1j * rng.uniform(0, 2 * np.pi))
        params = GaussianFilterParams(s, p, q)
        if abs(params.normalization) < 0.05:
            continue
        st = spq_to_squeezed_thermal(params)
        if abs(1 - st.tau * st.tau_conj) < 1e-3:
            continue
        back = squeezed_thermal_to_spq(st)
        assert abs(back.s - s) < 1e-9
        assert abs(back.p - p) < 1e-9
        assert abs(back.q - q) < 1e-9
        count += 1


def test_parameter_consistency_relations(rng):
    # tau tau_conj = (s-r)/(s+r) and tau/tau_conj = q/p for nonzero p, q
    count = 0
    while count < 20:
        s = complex(*rng.uniform(-1, 1, 2))
        mag = rng.uniform(0.1, 1.0)
        p = mag * np.exp(1j * rng.uniform(0, 2 * np.pi))
        q = mag * np.exp(1j * rng.uniform(0, 2 * np.pi))
        st = spq_to_squeezed_thermal(GaussianFilterParams(s, p, q))
        r = st.r_aux
        if abs(s + r) < 0.05:
            continue
        assert abs(st.tau * st.tau_conj - (s - r) / (s + r)) < 1e-9
        assert abs(st.tau / st.tau_conj - q / p) < 1e-9
        assert abs(st.omega - (r - 1) / (r + 1)) < 1e-12
        count += 1


def test_s_param_eigenvalues():
    assert np.abs(s_param_eigenvalues(0.0, 6) - [2, -2, 2, -2, 2, -2]).max() < 1e-14
    vals = s_param_eigenvalues(1.0, 5)
    assert np.abs(vals - [1, 0, 0, 0, 0]).max() < 1e-14
    with pytest.raises(SingularFilterError):
        s_param_eigenvalues(-1.0, 4)


def test_s_param_eigenvalues_complex_consistency():
    # |lambda_n| agrees with |(1-omega) omega^n| using omega from the r map
    s = 1j
    st = spq_to_squeezed_thermal(GaussianFilterParams(s, 0.0, 0.0))
    vals = s_param_eigenvalues(s, 8)
    alt = (1 - st.omega) * st.omega ** np.arange(8)
    assert np.abs(np.abs(vals) - np.abs(alt)).max() < 1e-12


# --- Q functions ----------------------------------------------------------


def test_analytic_q_known_values():
    glauber = table_preset("glauber-sudarshan")
    for alpha in (0.0, 0.5, 1.0 + 0.5j):
        assert abs(analytic_q(glauber, alpha) - np.exp(-abs(alpha) ** 2) / np.pi) < 1e-14
    wigner = table_preset("wigner-weyl")
    assert abs(analytic_q(wigner, 0.0) - 2 / np.pi) < 1e-14


def test_analytic_q_imaginary_s():
    # substitution at s = i: Q(alpha) = ((1-i)/pi) e^{(-1+i)|alpha|^2}, so the
    # amplitude keeps the vacuum's Gaussian profile (scaled by sqrt(2)) while
    # the phase winds radially
    params = GaussianFilterParams(1j, 0.0, 0.0)
    assert abs(analytic_q(params, 0.0) - (1 - 1j) / np.pi) < 1e-14
    for alpha in (0.5, 1.0j, 0.7 + 0.7j):
        value = analytic_q(params, alpha)
        assert abs(abs(value) - np.sqrt(2) * np.exp(-abs(alpha) ** 2) / np.pi) < 1e-12
        assert abs(np.angle(value) - (-np.pi / 4 + abs(alpha) ** 2)) < 1e-12


def test_numeric_q_identity_and_scaled_identity():
    from qsk import QuasiStateOperator

    identity = QuasiStateOperator(
        matrix=np.eye(30, dtype=complex), provenance="identity", hermitian_flag=True
    )
    scaled = fourier_quasistate(0.0, FockSpace(30))  # identity / pi
    for alpha in (0.0, 1.0, 1.5j):
        assert abs(numeric_q(identity, alpha) - 1 / np.pi) < 1e-10
        assert abs(numeric_q(scaled, alpha) - 1 / np.pi**2) < 1e-10


def test_numeric_q_vacuum_projector():
    from qsk import QuasiStateOperator

    matrix = np.zeros((30, 30), dtype=complex)
    matrix[0, 0] = 1.0
    op = QuasiStateOperator(matrix=matrix, provenance="test", hermitian_flag=True)
    for alpha in (0.3, 1.0, 2.0, 1.0 + 1.0j):
        assert abs(numeric_q(op, alpha) - np.exp(-abs(alpha) ** 2) / np.pi) < 1e-10


def test_numeric_q_matches_analytic_oracle():
    params = GaussianFilterParams(0.5, 0.0, 0.0)
    op = gaussian_quasistate(params, FockSpace(40))
    for alpha in q_grid():
        assert abs(numeric_q(op, alpha) - analytic_q(params, alpha)) < 1e-6


def test_displaced_quasistate():
    params = pure_squeezed_params(0.2)
    op = gaussian_quasistate(params, FockSpace(40))
    same = displaced_quasistate(op, 0.0)
    assert np.abs(same.matrix - op.matrix).max() < 1e-14

    shifted = displaced_quasistate(op, 0.5)
    assert abs(np.trace(shifted.matrix) - np.trace(op.matrix)) < 1e-6
    for alpha in (0.0, 0.3 + 0.2j, -0.4j):
        covariant = numeric_q(op, alpha - 0.5)
        assert abs(numeric_q(shifted, alpha) - covariant) < 1e-6


# --- quadrature sampling and homodyne reconstruction ----------------------


def test_sampler_is_deterministic():
    a = sample_quadratures(0.3 + 0.1j, 100, seed=9)
    b = sample_quadratures(0.3 + 0.1j, 100, seed=9)
    assert a == b
    c = sample_quadratures(0.3 + 0.1j, 100, seed=10)
    assert a != c


def test_sampler_statistics():
    n = 100000
    samples = sample_quadratures(0.0, n, seed=2)
    x = np.array([rec.x for rec in samples])
    phi = np.array([rec.phi for rec in samples])
    assert abs(x.mean()) < 4 / np.sqrt(n)
    assert phi.min() >= -np.pi / 2 and phi.max() < np.pi / 2

    samples = sample_quadratures(1.0, n, seed=3)
    near_zero = [rec.x for rec in samples if abs(rec.phi) < 0.1]
    # <x[0]> = alpha + conj(alpha) = 2 for alpha = 1
    assert abs(np.mean(near_zero) - 2.0) < 4 / np.sqrt(len(near_zero)) + 0.01


def test_sampler_rejects_empty():
    with pytest.raises(ValueError):
        sample_quadratures(0.0, 0, seed=1)


def test_quadrature_record_phase_window():
    with pytest.raises(ValueError):
        QuadratureRecord(x=0.0, phi=np.pi / 2)


def _homodyne_reference(samples, space, r_max, r_step):
    """Direct transcription of the discretized estimator over the full
    (positive and negative) radial grid, Hermitian part taken at the end."""
    half_grid = np.arange(0.5 * r_step, r_max, r_step)
    grid = np.concatenate([-half_grid[::-1], half_grid])
    total = np.zeros((space.cutoff, space.cutoff), dtype=complex)
    for r in grid:
        inner = np.zeros_like(total)
        for rec in samples:
            delta = fourier_quasistate(1j * r * np.exp(-1j * rec.phi), space)
            inner += np.exp(1j * r * rec.x) * delta.matrix
        total += r_step * abs(r) * np.exp(r * r / 2) * (np.pi / len(samples)) * inner
    return 0.5 * (total + total.conj().T)


def test_homodyne_matches_reference_implementation():
    samples = sample_quadratures(0.4, 40, seed=5)
    space = FockSpace(6)
    fast = homodyne_reconstruct(samples, space, r_max=4.0, r_step=0.2)
    slow = _homodyne_reference(samples, space, r_max=4.0, r_step=0.2)
    assert np.abs(fast.matrix - slow).max() < 1e-10
    assert abs(fast.trace - np.trace(slow).real) < 1e-12


def test_homodyne_rejects_bad_input():
    with pytest.raises(ValueError):
        homodyne_reconstruct([], FockSpace(6))
    with pytest.raises(ValueError):
        homodyne_reconstruct(sample_quadratures(0, 5, seed=1), FockSpace(6), r_max=-1.0)


def test_quadrature_csv_round_trip(tmp_path):
    samples = sample_quadratures(0.2 + 0.1j, 50, seed=4)
    path = tmp_path / "samples.csv"
    write_quadrature_csv(path, samples, metadata={"alpha": "0.2+0.1j"})
    back = read_quadrature_csv(path)
    assert back == samples
    text = path.read_text().splitlines()
    assert text[0].startswith("#")
    assert "x,phi" in text[1]


def test_quadrature_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_quadrature_csv(path)
