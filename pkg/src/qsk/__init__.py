"""qsk: quasistate and quasiprobability numerics.

Decomposes density operators two dual ways: nonclassical weights over
physical states, or classical weights over unphysical "quasistate"
operators.  Provides the finite-frame reconstruction machinery, bosonic
phase-space quasistates with homodyne sampling, and two-qubit entanglement
certification built on the same duality.
"""

from . import _threads  # noqa: F401  (must run before numpy loads BLAS)

from .operator_algebra import (
    FockSpace,
    Spectrum,
    annihilation,
    coherent_vector,
    creation,
    displacement,
    hermitian_eigen,
    invert,
    leading_block,
    matrix_exponential,
    number_operator,
    pseudo_invert,
    squeeze,
)
from .frames import (
    Covm,
    Frame,
    GramKernel,
    WeightVector,
    born_probabilities,
    completeness_rank,
    covm,
    frame_from_dict,
    frame_to_dict,
    gram_kernel,
    load_frame,
    quasiprobabilities,
    reconstruct,
    tetrahedron_frame,
)
from .phase_space import (
    GaussianFilterParams,
    HomodyneResult,
    QuadratureRecord,
    QuasiStateOperator,
    SingularFilterError,
    SqueezedThermalParams,
    TABLE_PRESETS,
    analytic_q,
    displaced_quasistate,
    filter_value,
    fourier_quasistate,
    gaussian_quasistate,
    homodyne_reconstruct,
    numeric_q,
    read_quadrature_csv,
    s_param_eigenvalues,
    sample_quadratures,
    spq_to_squeezed_thermal,
    squeezed_thermal_to_spq,
    table_preset,
    write_quadrature_csv,
)
from .entanglement import (
    AttenuationKernel,
    JointDistribution,
    PAULI_LABELS,
    TwoQubitState,
    UnphysicalStateError,
    attenuate_distribution,
    bell_eigenvalues,
    convolved_distribution,
    entanglement_quasiprobability,
    local_quasistate,
    pauli_frame_states,
    pauli_matrices,
    positivity_threshold,
    reconstruct_two_qubit,
    separability_verdict,
    uniform_kernel_matrix,
)

__version__ = "0.1.0"
