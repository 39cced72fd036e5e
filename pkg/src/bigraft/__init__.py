"""Canonical decompositions of bipartite grafts.

The package computes minimum joins and the distances they induce, splits a
graft into factor components, refines those into the tight-cut partition,
certifies critical quasicombs via graft ear decompositions, enumerates
critical vertex sets, and orders the factor components of a comb by the
containment those sets witness.
"""

from .cathedral import (
    CathedralPoset,
    CriticalSetCertificate,
    UpperBoundEntry,
    UpperBoundReport,
    cathedral_poset,
    enumerate_critical_sets,
    is_critical_set,
    precedes,
    round_ear_bond_check,
    union_criticality_check,
    upper_bound_check,
)
from .cli import cli_main
from .combs import (
    CombClassification,
    CriticalityReport,
    EarStep,
    GraftEarDecomposition,
    StepCheck,
    StepViolation,
    VerificationReport,
    build_graft_ear_decomposition,
    classify_comb,
    is_critical_quasicomb,
    is_f_balanced,
    midvertex,
    validate_ear_step,
    verify_graft_ear_decomposition,
)
from .core import (
    BigraftError,
    CapacityError,
    Edge,
    Graft,
    GraftInputError,
    GraftValidationError,
    InternalConsistencyError,
    Multigraph,
    OrderedBipartiteGraft,
    PreconditionError,
    VertexSetRole,
    Walk,
    build_bipartite_graft,
    contract_graft,
    graft_sum,
    induced_subgraft,
    is_join,
    validate_graft,
)
from .decomposition import (
    FactorComponent,
    FactorComponentSet,
    KLPartition,
    allowed_edge_set,
    factor_components,
    is_separating,
    kl_classes_of_component,
    kl_partition,
)
from .formats import (
    REPORT_SCHEMA,
    decomposition_document,
    export_dot,
    graft_document,
    graft_from_document,
    parse_graft_json,
    poset_document,
    serialize_decomposition,
    serialize_graft,
    upper_report_document,
)
from .generators import (
    GenConfig,
    gen_random_comb,
    gen_random_critical_quasicomb,
    gen_random_graft,
    generate,
    random_ear_step,
)
from .joins import (
    DistanceValue,
    JoinSet,
    WeightedWalkReport,
    all_min_joins,
    extract_shortest_path,
    f_distance,
    f_distance_int,
    f_weight,
    flipped_distance_sign,
    is_allowed_edge,
    is_minimum_join,
    min_join,
    min_join_bruteforce,
    negative_circuit_witness,
    nu,
    walk_report,
)
from .properties import (
    PROPERTIES,
    Certificate,
    PropertyCheck,
    SuiteReport,
    property_names,
    run_property_suite,
    suite_report_document,
)

__all__ = [
    "BigraftError",
    "CapacityError",
    "CathedralPoset",
    "Certificate",
    "CombClassification",
    "CriticalSetCertificate",
    "CriticalityReport",
    "DistanceValue",
    "EarStep",
    "Edge",
    "FactorComponent",
    "FactorComponentSet",
    "GenConfig",
    "Graft",
    "GraftEarDecomposition",
    "GraftInputError",
    "GraftValidationError",
    "InternalConsistencyError",
    "JoinSet",
    "KLPartition",
    "Multigraph",
    "OrderedBipartiteGraft",
    "PROPERTIES",
    "PreconditionError",
    "PropertyCheck",
    "REPORT_SCHEMA",
    "StepCheck",
    "StepViolation",
    "SuiteReport",
    "UpperBoundEntry",
    "UpperBoundReport",
    "VerificationReport",
    "VertexSetRole",
    "Walk",
    "WeightedWalkReport",
    "all_min_joins",
    "allowed_edge_set",
    "build_bipartite_graft",
    "build_graft_ear_decomposition",
    "cathedral_poset",
    "classify_comb",
    "cli_main",
    "contract_graft",
    "decomposition_document",
    "enumerate_critical_sets",
    "export_dot",
    "extract_shortest_path",
    "f_distance",
    "f_distance_int",
    "f_weight",
    "factor_components",
    "flipped_distance_sign",
    "gen_random_comb",
    "gen_random_critical_quasicomb",
    "gen_random_graft",
    "generate",
    "graft_document",
    "graft_from_document",
    "graft_sum",
    "induced_subgraft",
    "is_allowed_edge",
    "is_critical_quasicomb",
    "is_critical_set",
    "is_f_balanced",
    "is_join",
    "is_minimum_join",
    "is_separating",
    "kl_classes_of_component",
    "kl_partition",
    "midvertex",
    "min_join",
    "min_join_bruteforce",
    "negative_circuit_witness",
    "nu",
    "parse_graft_json",
    "poset_document",
    "precedes",
    "property_names",
    "random_ear_step",
    "round_ear_bond_check",
    "run_property_suite",
    "serialize_decomposition",
    "serialize_graft",
    "suite_report_document",
    "union_criticality_check",
    "upper_bound_check",
    "upper_report_document",
    "validate_ear_step",
    "validate_graft",
    "verify_graft_ear_decomposition",
    "walk_report",
]
