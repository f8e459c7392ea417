"""Relative-entropy upper bound on distillable entanglement over the PPT cone.

The package computes min over PPT sigma of S(rho || sigma) by projected
gradient descent, certifies candidate optimizers through first-order
conditions, and cross-checks everything against the families whose bound
is known in closed form.
"""

from .entropy import fidelity, relative_entropy, shannon_entropy, von_neumann_entropy
from .formulas import (
    ClosedFormResult,
    NonadditivityReport,
    bell_z2_bound,
    isotropic_bound,
    maxcorr_bound,
    nonadditivity_experiment,
    pure_state_bound,
)
from .linalg import (
    BipartiteDims,
    EigenDecomposition,
    HermiticityError,
    PositivityError,
    SupportError,
    dd_gradient,
    eig_hermitian,
    kron,
    matrix_log,
    partial_trace,
    partial_transpose,
)
from .pptopt import (
    AdditivityReport,
    KktReport,
    OptimizerConfig,
    OptimizerResult,
    PptCheck,
    ProjectedState,
    additivity_check,
    is_ppt,
    kkt_check,
    kkt_check_maxcorr,
    minimize_rel_entropy,
    project_ppt,
)
from .statespec import StateSpecError, load_state, save_state, spec_to_state, state_to_spec
from .states import (
    AbelianGroup,
    BellLabel,
    DensityMatrix,
    Z2,
    bell_diagonal,
    bell_labels,
    bell_twirl,
    counterexample_pair,
    density_matrix,
    generalized_bell_basis,
    isotropic,
    isotropic_twirl,
    max_correlated,
    pure_state,
    tensor,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup",
    "AdditivityReport",
    "BellLabel",
    "BipartiteDims",
    "ClosedFormResult",
    "DensityMatrix",
    "EigenDecomposition",
    "HermiticityError",
    "KktReport",
    "NonadditivityReport",
    "OptimizerConfig",
    "OptimizerResult",
    "PositivityError",
    "PptCheck",
    "ProjectedState",
    "StateSpecError",
    "SupportError",
    "Z2",
    "additivity_check",
    "bell_diagonal",
    "bell_labels",
    "bell_twirl",
    "bell_z2_bound",
    "counterexample_pair",
    "dd_gradient",
    "density_matrix",
    "eig_hermitian",
    "fidelity",
    "generalized_bell_basis",
    "is_ppt",
    "isotropic",
    "isotropic_bound",
    "isotropic_twirl",
    "kkt_check",
    "kkt_check_maxcorr",
    "kron",
    "load_state",
    "matrix_log",
    "max_correlated",
    "maxcorr_bound",
    "minimize_rel_entropy",
    "nonadditivity_experiment",
    "partial_trace",
    "partial_transpose",
    "project_ppt",
    "pure_state",
    "pure_state_bound",
    "relative_entropy",
    "save_state",
    "shannon_entropy",
    "spec_to_state",
    "state_to_spec",
    "tensor",
    "von_neumann_entropy",
]
