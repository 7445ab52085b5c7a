"""Pre-uniformities on finite carriers."""
from prelab.preunif.core import (
    AXIOMS, AxiomReport, EntouragePrebases, LabelledSearch, NotAPreUniformity,
    PreUniformity, PreUniformityPair, check_axioms, compare, contains, entourage_prebases,
    induced_pretopology, is_neighborhood_prebase, labelled_preuniformities, member,
    neighborhood_prebase, sup, t0_criterion, weight,
)
from prelab.preunif.covers import (
    CoverAxiomError, Generated, NotACover, UCReport, cover_of, generate_from_covers,
    is_cover, is_star_refinement, refines, square_union, star, uc_check,
)
from prelab.preunif.constructions import (
    Boundedness, NotT0, PreBaseError, ProductResult, SeparationError, UniversalResult,
    box_product, continuity_forms, coreflection, cylinder_product, dyadic_balls,
    equivalence_closure, generate_from_prebase, generate_from_pseudometrics,
    is_preuniformly_continuous, lift, map_relation, min_dense_set, product,
    pull_relation, square_cover, totally_bounded, universal_preuniformity,
)
