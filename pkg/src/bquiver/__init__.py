"""Exact invariants of basic algebras presented by acyclic bound quivers.

The package computes, over the rationals or a prime field:

* fundamental groups of presentations (spanning-tree group presentations,
  abelian invariants, additive character spaces),
* the first Hochschild cohomology as a Lie algebra of unitary derivations
  modulo inner ones, with canonical coset representatives,
* the embedding of character spaces into the cohomology, diagonalizability
  of classes and commuting families, adapted presentations, and maximality
  of character images among diagonalizable subalgebras,
* the succession graph of homotopy relations under transvections, with
  certified arrows, source detection, and factorization witnesses.

Everything is exact (rational or mod-p arithmetic) and deterministic.
"""

__version__ = "0.1.0"

from .fields import GF, QQ, Field, FieldMismatchError, PrimeField, RationalField
from .linalg import (
    Matrix,
    Subspace,
    minimal_polynomial,
    nullspace,
    roots_over_field,
    rref,
    smith_normal_form,
)
from .quiver import (
    Bypass,
    Path,
    Quiver,
    QuiverError,
    SpanningTree,
    Walk,
    enumerate_bypasses,
    has_double_bypass,
    reduce_walk,
)
from .pathalg import (
    AlgebraElement,
    Automorphism,
    IdealData,
    apply_to_ideal,
    dilatation,
    groebner_basis,
    ideal_closure,
    identity_automorphism,
    is_admissible,
    is_monomial,
    multiply,
    normal_form,
    transvection,
    transvection_of,
    zero_ideal,
)
from .budgets import DEFAULT_BUDGETS, Budgets
from .homotopy import (
    AbelianInvariants,
    Decision,
    GroupPresentation,
    HomSpace,
    HomotopyOracle,
    NO,
    UNKNOWN,
    YES,
    abelian_invariants,
    decide_homotopic,
    hom_space,
    homotopy_pairs,
    pi1_presentation,
    relations_equal,
)
from .hochschild import (
    ClassSpan,
    CohomologyClass,
    CohomologySpace,
    Derivation,
    FDAlgebra,
    build_algebra,
    cohomology_space,
    conjugate_class,
    induced_algebra_automorphism,
    inner_derivation,
    inner_derivation_space,
    derivation_space,
)
from .presentations import (
    NotDiagonalizableError,
    Presentation,
    SpecialBasis,
    adapted_presentation,
    centralizer,
    common_eigenbasis,
    diagonalizability_witness,
    is_diagonalizable_class,
    is_diagonalizable_set,
    is_maximal_diagonalizable,
    realize_in_image,
)
from .relquiver import (
    FactorizationWitness,
    RelationQuiver,
    build_relation_quiver,
    classify_transvection,
    critical_taus,
    factor_to_source,
    match_dilatation,
    presentation_for_vertex,
    sources_report,
    verify_main_theorem,
)
from .dsl import InputDocument, InputError, parse_input, render_document
