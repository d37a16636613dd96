"""Weighted relational algebra, dependency checkers and Z-EMVD implication."""

from .dependency import (
    DependencyStatement,
    Kind,
    check_ci,
    check_emvd,
    check_gemvd,
    check_gmvd,
    check_mvd,
    holds,
    statement,
    value_set,
)
from .errors import (
    DomainError,
    InputError,
    MvdLabError,
    ResourceError,
    SchemaError,
    ValidationError,
)
from .implication import (
    CoverQuery,
    Derivation,
    SigmaN,
    ZEMVDSet,
    apply_augmentation,
    apply_projection,
    apply_symmetry,
    axiom_closure,
    build_sigma_n,
    cover_contains,
    derive,
    lemma3_implies,
    nonaxiomatizability_report,
)
from .relation import (
    ClassicRelation,
    WeightedRelation,
    attrset,
    inverse,
    marginalize,
    monotone_join,
    natural_join,
    product_join,
    project,
)
from .witness import SearchBounds, WitnessReport, enumerate_relations, find_witness, random_distribution

__version__ = "0.1.0"
