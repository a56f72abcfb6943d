"""Exact multipoint Krichever-Novikov algebras on the Riemann sphere.

Bases of tensor fields attached to marked points, their duality
pairing, structure constants, local two-cocycles, centrally extended
current algebras, semi-infinite wedge representations, quadratic
current (Sugawara-type) operators, and casimir-style commuting
elements, all in exact rational arithmetic.
"""

from .affine import (
    GL,
    GL1,
    SL,
    AffineElement,
    CurrentElement,
    DgElement,
    MatrixElement,
    affine_bracket,
    current_bracket,
    dg_bracket,
    dual_basis_pair,
    identity_matrix,
    matrix_basis,
)
from .basis import (
    Geometry,
    KNExpansion,
    expand_in_basis,
    form_from_rational,
    kn_pairing,
    make_basis,
)
from .casimir import (
    CasimirCandidate,
    DeltaOperator,
    casimir_solve,
    check_delta_commutation,
    check_pairwise_scalar,
    gamma_extend,
    mixing_gamma_geometric,
    wedge_mixing_gamma,
)
from .cocycles import (
    AffineConnection,
    ProjectiveConnection,
    check_cocycle_identity,
    check_locality,
    cocycle_A,
    cocycle_L,
    cocycle_mix,
    find_coboundary,
    gamma_A_basis,
    gamma_L_basis,
    gamma_mix_basis,
)
from .expr import parse_rational, rational_string
from .scalars import Q, parse_q, qstr
from .structure import (
    bracket_basis,
    lie_basis,
    measure_bounds,
    multiply_basis,
)
from .sugawara import (
    apply_sugawara,
    apply_T_of_field,
    check_fundamental,
    sugawara_coeff,
    sugawara_context,
)
from .verify import CheckRecord, JobConfig, run_suite
from .wedge import (
    RepresentationData,
    WedgeMonomial,
    WedgeVector,
    enumerate_monomials,
    extract_cocycle,
    wedge_apply,
)

__version__ = "0.1.0"

__all__ = [
    "AffineConnection",
    "AffineElement",
    "CasimirCandidate",
    "CheckRecord",
    "CurrentElement",
    "DeltaOperator",
    "DgElement",
    "GL",
    "GL1",
    "Geometry",
    "JobConfig",
    "KNExpansion",
    "MatrixElement",
    "ProjectiveConnection",
    "Q",
    "RepresentationData",
    "SL",
    "WedgeMonomial",
    "WedgeVector",
    "affine_bracket",
    "apply_T_of_field",
    "apply_sugawara",
    "bracket_basis",
    "casimir_solve",
    "check_cocycle_identity",
    "check_delta_commutation",
    "check_fundamental",
    "check_locality",
    "check_pairwise_scalar",
    "cocycle_A",
    "cocycle_L",
    "cocycle_mix",
    "current_bracket",
    "dg_bracket",
    "dual_basis_pair",
    "enumerate_monomials",
    "expand_in_basis",
    "extract_cocycle",
    "find_coboundary",
    "form_from_rational",
    "gamma_A_basis",
    "gamma_L_basis",
    "gamma_extend",
    "gamma_mix_basis",
    "identity_matrix",
    "kn_pairing",
    "lie_basis",
    "make_basis",
    "matrix_basis",
    "measure_bounds",
    "mixing_gamma_geometric",
    "multiply_basis",
    "parse_q",
    "parse_rational",
    "qstr",
    "rational_string",
    "run_suite",
    "sugawara_coeff",
    "sugawara_context",
    "wedge_apply",
    "wedge_mixing_gamma",
]
