"""Exact arithmetic for forms of higher degree: composition witnesses,
Krull-Schmidt decomposition, and the catalog of multiplicative constructions.

Everything is computed over explicit characteristic-zero coefficient rings
(the rationals and their etale extensions); no floating point anywhere.
"""

from .coeffield import (
    EtaleAlgebra,
    FieldElement,
    NotSquarefree,
    QQ,
    RationalField,
    ZeroDivisor,
    etale_norm,
    etale_trace,
    field_extend,
    regular_representation,
)
from .poly import (
    IdentityReport,
    NotDivisible,
    Polynomial,
    RationalFunction,
    TermBudgetExceeded,
    is_dth_power,
    substitute_linear,
    verify_identity,
)
from .forms import (
    DegreeMismatch,
    DimensionMismatch,
    HomogeneousForm,
    LinearMap,
    Singular,
    SymmetricTensor,
    ZeroFunctional,
    apply_change_of_basis,
    depolarize,
    is_nondegenerate,
    orthogonal_sum,
    polarize,
    polarize_inclusion_exclusion,
    radical,
    tensor_product,
    transfer,
    transfer_form,
)
from .decompose import (
    CenterAlgebra,
    CenterNotClosed,
    Component,
    Decomposition,
    DegenerateInput,
    DegreeTooSmall,
    center_algebra,
    is_absolutely_indecomposable,
    krull_schmidt_decompose,
    primitive_idempotents,
)
from .witness import (
    DiagonalDecision,
    ObstructionReport,
    ScaledWitness,
    SingularWitness,
    UnitMismatch,
    VerificationReport,
    WitnessInvalid,
    absorb_twist,
    brute_force_exponent_closure,
    diagonal_jordan_cubic_decision,
    diagonal_strong_mult_decision,
    exponent_chain,
    exponent_implies_strong,
    krull_schmidt_obstruction,
    odd_degree_strengthen,
    reduce_exponent,
    root_of_unity_ratio,
    twist_witness,
    verify_composition,
    verify_exponent,
    verify_jordan_composition,
    verify_mu_twist,
    verify_scaled_witness,
    verify_similarity,
    verify_strong_jordan_multiplicativity,
    verify_strong_multiplicativity,
)
from .constructions import (
    AdjointIdentityFailure,
    AdmissibleTriple,
    AlgebraPresentation,
    ConstructedForm,
    DegeneratePairing,
    MissingWitness,
    albert_sharp,
    catalog,
    cayley_dickson_quartic,
    composition_algebra_norm,
    det_norm,
    diagonal_form,
    hyperbolic_plane,
    jordan_triple_from_degree3,
    matrix_algebra,
    monomial_form,
    norm_compose,
    power_form,
    product_form,
    scaled_block_sum,
    split_albert_norm,
    split_etale_presentation,
    split_jordan_q4,
    split_octonion_algebra,
    structurable_quartic,
    structurable_quartic_via_skew,
    tits_cubic,
)

__version__ = "0.1.0"
