"""Mean king retrodiction through error-detecting codes."""

from .construct import (
    LatinSquare,
    anticyclic_square,
    cyclic_square,
    error_basis_from_onb,
    index_family_from_squares,
    latin_validate,
    measurements_from_family,
)
from .fixtures import builtin_example
from .isomap import (
    SchmidtState,
    completeness_defect,
    iso_forward,
    iso_inverse,
    maximal_entangled,
    sc_inner,
    schmidt_state,
)
from .linalg import Tolerance, ValidationError
from .qecc import CodeSubspace, c3_check, code_subspace, kl_check, pvm_validate, syndrome_pvm
from .simulator import GameConfig, exact_joint, conditional_entropy, play_round, run_experiment
from .solutions import Setup, certify, derive_from_pvm, make_setup, model_validate

__version__ = "0.1.0"
