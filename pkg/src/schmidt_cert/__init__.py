"""Schmidt-number certification of bipartite pure states by random Pauli sampling.

The rank of a pure state's Pauli correlation matrix equals the square of its
Schmidt number, and a randomly projected principal submatrix preserves that
rank with far fewer entries once the Schmidt bases are anticoncentrated --
which local random unitaries enforce.  This package implements the sampling
protocol end to end together with the theory-side diagnostics (frame
vectors, anticoncentration statistics, sector rank oracle) used to validate
it.
"""

from .certify import (
    CertificationReport,
    certified_bound,
    certify,
    default_threshold,
    isotropic_rank_experiment,
    noise_threshold,
    numerical_rank,
    sector_rank_oracle,
    singular_spectrum,
)
from .cm import (
    FrameVector,
    NoiseModel,
    PauliSet,
    ProjectedCM,
    build_full_cm,
    build_projected_cm,
    build_UL,
    frame_matrix,
    frame_vectors,
    load_projected_cm,
    mu0,
    mu0_exact,
    mu0_sampled_bound,
    pauli_sandwich,
    projected_cm_spectrum,
    sample_pauli_set,
    save_projected_cm,
)
from .errors import ConfigError, ResourceError, UnsupportedConfigurationError
from .pauli import (
    PauliOp,
    apply_to_basis,
    enumerate_all,
    multiply_up_to_phase,
    sample_uniform_nonidentity,
    symplectic_product,
    to_dense,
)
from .random_unitary import (
    LocalUnitary,
    apply_gates_to_vector,
    brickwork_circuit,
    brickwork_gates,
    haar_unitary,
    load_unitary,
    save_unitary,
)
from .seeding import derive_rng
from .state import (
    SchmidtData,
    StateVector,
    apply_local_unitary,
    fermion_chain_ground_state,
    free_fermion_ground_energy,
    load_state,
    maximally_entangled,
    pauli_pair_expectation,
    random_schmidt_state,
    save_state,
    schmidt_decompose,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
