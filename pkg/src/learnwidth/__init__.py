"""Zero-error classification of pure quantum states and factor width /
k-incoherence of positive semidefinite matrices, decided by semidefinite
programming with an exact enumeration oracle, a constant-rank fast path,
succinct certificates and the clique threshold rule."""

from .clique import (
    GapParameters,
    Graph,
    GraphParseError,
    brute_force_clique,
    decide_clique,
    gap_parameters,
    load_graph,
    normalized_mu,
)
from .conic import ConicProgram, ConicSolution, PrecisionLimitError, Status, solve, solve_feasibility
from .incoherence import (
    DEFAULT_CAP,
    Certificate,
    CertificateCheck,
    DecompositionTerm,
    EnumerationCapExceeded,
    IncoherentDecomposition,
    MembershipVerdict,
    MuResult,
    Verdict,
    caratheodory_reduce,
    distance_to_Ik,
    factor_width,
    interior_point_instance,
    low_rank_membership,
    low_rank_subspaces,
    mu_oracle,
    mu_sdp,
    rank_one_vectors,
    spectral_2_incoherent,
    subset_decomposition,
    verify_certificate,
    wmem,
)
from .learnability import (
    LearnReport,
    LearnVerdict,
    Povm,
    PovmCheck,
    default_delta,
    extract_povm,
    fixture_states,
    is_k_learnable,
    learning_width,
    min_error_value,
    normalize_ensemble,
    states_to_gram,
    verify_povm,
)
from .matrices import (
    HermitianMatrix,
    LinAlgFailure,
    NotPositiveSemidefinite,
    StateList,
    Subspace,
    as_hermitian,
    eig_hermitian,
    gram_factorize,
    is_psd,
    min_eigenvalue,
    pseudo_inverse_diag,
)

__version__ = "0.1.0"
