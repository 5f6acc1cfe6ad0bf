"""Exact computations with twistings over finite graded groupoids.

Layers: finite graded groupoids and bridges between them (`groupoids`),
exact twisted cohomology over Z/m (`cohomology`), twistings as parity/phase
cocycle pairs with classification and transgression (`twistings`), twisted
possibly-antiunitary representations (`reps`), versioned JSON formats
(`fileio`), and a batch CLI (`cli`).
"""

from .groupoids import (
    CapExceeded,
    FiniteGroupoid,
    GradedGroupoid,
    GroupoidError,
    GroupoidFunctor,
    GroupTable,
    Morphism,
    NatTransformation,
    RealStructure,
    UnsupportedInput,
    WeakEquivalenceReport,
    action_groupoid,
    as_graded,
    common_refinement,
    compose_functors,
    conjugation_action,
    conjugation_groupoid,
    covering_groupoid,
    default_modulus,
    delooping,
    discrete_groupoid,
    enumeration_cap,
    even_part,
    fibre_product,
    functor_is_even,
    groupoids_isomorphic,
    identity_functor,
    is_weak_equivalence,
    pair_groupoid,
    phi_double_cover,
    point_groupoid,
    nat_is_even,
    semidirect_with_involution,
    validate_functor,
    validate_group_table,
    validate_groupoid,
    validate_nat,
    validate_real_structure,
    validate_sign_character,
)
from .cohomology import (
    Cochain,
    CoefficientModule,
    CohomologyGroup,
    NotACocycle,
    cohomology_group,
    differential_matrix,
    graded_differential,
    nerve,
    pullback_cochain,
    smith_normal_form,
)
from .twistings import (
    DFMTwisting,
    EquivalenceWitness,
    ExtensionClass,
    MultiplicativeTwisting,
    RealCentralExtension,
    TwistedExtension,
    TwistingError,
    TwoLineDescriptor,
    dfm_to_descriptor,
    extension_class,
    find_equivalence,
    find_refinement,
    is_refinement,
    pentagon_defect,
    pullback_extension,
    real_to_graded,
    tensor_extensions,
    transgress,
    transgression_phase,
    trivial_extension,
    validate_descriptor,
    validate_dfm,
    validate_extension,
    validate_multiplicative,
    validate_real_extension,
)
from .reps import (
    IntertwinerSpace,
    KramersReport,
    MorphismOp,
    RepError,
    RepReport,
    SimpleCountReport,
    TwistedMorphismData,
    compose_morphisms,
    count_simples,
    direct_sum,
    endo_type,
    intertwiner_space,
    is_irreducible,
    kramers_check,
    simple_count_report,
    validate_rep,
)
from .fileio import (
    FileFormatError,
    canonical_json,
    cochain_to_doc,
    detect_kind,
    extension_to_doc,
    groupoid_to_doc,
    load_document,
    load_path,
    save_doc,
)

__version__ = "0.1.0"
