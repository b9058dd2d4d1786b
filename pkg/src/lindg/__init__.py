"""Exact DG-categories, group actions, linearisations and twisted complexes."""

from .field import CyclotomicField, FieldElement, FieldMismatchError, ScalarSyntaxError
from .linalg import Matrix, kernel_basis, quotient_data, solve_linear
from .complexes import CochainComplex, cohomology, shift_complex, validate_complex
from .dg import (
    DGCategory,
    DGFunctor,
    DGMorphism,
    check_exceptional,
    check_spherical,
    graded_end_ring,
    h0_is_isomorphism,
    validate_dg_category,
)
from .group import (
    FiniteGroup,
    Linearisation,
    StrictAction,
    check_star_condition,
    enumerate_linearisations_cyclic,
    inflate,
    invariant_hom_complex,
    validate_linearisation,
    validate_strict_action,
)
from .linearised import (
    build_linearised_category,
    conjugated_action,
    conjugation_equivalence,
    induced_functor,
    iso_classify,
    quasi_fully_faithful_check,
)
from .pretr import (
    TwistedComplex,
    cone,
    cone_linearisation,
    embed,
    extend_action_to_hull,
    make_twisted_complex,
    pretr_category,
    shift_twisted,
)
from .spherical import (
    B,
    FreeModule,
    SphericalAlgebra,
    build_perf_gen,
    build_root_action,
    reproduce_section5,
)

__version__ = "0.1.0"
