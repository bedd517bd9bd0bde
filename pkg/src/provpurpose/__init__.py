"""Purpose-based access decisions over provenance graphs.

The package splits into layers that mirror how a decision is made: a typed
provenance graph model, a ranked purpose hierarchy, four-valued condition
matching, per-policy evaluation, purpose-set merge algebras with a small
expression language, cross-party merging, and the end-to-end pipeline plus a
CLI and benchmark harness.
"""

from .errors import (
    ConfigurationError,
    EmptyPurposeSetError,
    FidaSyntaxError,
    InputFormatError,
    MissingHierarchyLineError,
    PatternSyntaxError,
    ProvPurposeError,
    StageError,
    TypeMismatchError,
    UnboundNameError,
    UnknownPurposeError,
    UnknownVertexError,
)
from .provenance import (
    ALLOWED_EDGES,
    EdgeLabel,
    ProvEdge,
    ProvVertex,
    ProvenanceGraph,
    ValidityReport,
    VertexType,
    dump_graph,
    graph_from_dict,
    graph_to_dict,
    load_graph,
    topological_order_of,
)
from .purposes import (
    PurposeGraph,
    PurposeSet,
    load_purpose_graph,
    purpose_graph_from_dict,
    purpose_graph_to_dict,
)
from .matching import (
    AttrCondition,
    AttrConstraint,
    MatchValue,
    NullCondition,
    PathPattern,
    PathStep,
    PatternEdge,
    PatternVertex,
    Predicate,
    ProvenancePartition,
    QueryCondition,
    TargetCondition,
    VertexCondition,
    WILDCARD_TOKEN,
    eval_atomic,
    eval_predicate,
    match_and,
    match_or,
    match_partition,
    match_path,
    parse_path_pattern,
    parse_target,
)
from .policy import (
    AccessTree,
    Policy,
    PolicyDecision,
    Request,
    TreeBranch,
    TreeLeaf,
    TreeOp,
    category_covered,
    condition_from_dict,
    eval_access_tree,
    evaluate_policy,
    guards_pass,
    load_policy,
    load_request,
    load_role_order,
    policy_from_dict,
    request_from_dict,
    role_leq,
    role_order_from_dict,
)
from .algebra import (
    BasicOp,
    BinaryOp,
    FidaExpr,
    FunctionCall,
    HierarchicalPurposeSet,
    InternalFunction,
    PrecedenceKind,
    SetRef,
    apply_internal,
    apply_nary,
    eval_fida,
    eval_fida_plain,
    expression_functions,
    expression_names,
    op_difference,
    op_intersection,
    op_precedence,
    op_subtraction,
    op_union,
    parse_fida,
    precedence_total,
    print_fida,
    split_result,
)
from .external import (
    ExternalFunction,
    PartyResult,
    apply_external,
    merge_parties,
    party_result_from_dict,
    party_result_to_dict,
)
from .engine import (
    DataRecord,
    DecisionOutcome,
    PartyConfig,
    PartyTrace,
    decide,
    default_internal_expr,
    outcome_to_dict,
)
from .synth import (
    BenchConfig,
    NUMERIC_COLUMNS,
    STRING_COLUMNS,
    STRING_LENGTH,
    SyntheticDataset,
    gen_synthetic,
    generate_policy,
    partition_by_mix,
    random_purpose_graph,
)
from .bench import BenchReport, bench_algebras, bench_policy_generation, run_bench

__version__ = "0.1.0"

__all__ = [
    "ALLOWED_EDGES",
    "AccessTree",
    "AttrCondition",
    "AttrConstraint",
    "BasicOp",
    "BenchConfig",
    "BenchReport",
    "BinaryOp",
    "ConfigurationError",
    "DataRecord",
    "DecisionOutcome",
    "EdgeLabel",
    "EmptyPurposeSetError",
    "ExternalFunction",
    "FidaExpr",
    "FidaSyntaxError",
    "FunctionCall",
    "HierarchicalPurposeSet",
    "InputFormatError",
    "InternalFunction",
    "MatchValue",
    "MissingHierarchyLineError",
    "NUMERIC_COLUMNS",
    "NullCondition",
    "PartyConfig",
    "PartyResult",
    "PartyTrace",
    "PathPattern",
    "PathStep",
    "PatternEdge",
    "PatternSyntaxError",
    "PatternVertex",
    "Policy",
    "PolicyDecision",
    "PrecedenceKind",
    "Predicate",
    "ProvEdge",
    "ProvPurposeError",
    "ProvVertex",
    "ProvenanceGraph",
    "ProvenancePartition",
    "PurposeGraph",
    "PurposeSet",
    "QueryCondition",
    "Request",
    "STRING_COLUMNS",
    "STRING_LENGTH",
    "SetRef",
    "StageError",
    "SyntheticDataset",
    "TargetCondition",
    "TreeBranch",
    "TreeLeaf",
    "TreeOp",
    "TypeMismatchError",
    "UnboundNameError",
    "UnknownPurposeError",
    "UnknownVertexError",
    "ValidityReport",
    "VertexCondition",
    "VertexType",
    "WILDCARD_TOKEN",
    "apply_external",
    "apply_internal",
    "apply_nary",
    "bench_algebras",
    "bench_policy_generation",
    "category_covered",
    "condition_from_dict",
    "decide",
    "default_internal_expr",
    "dump_graph",
    "eval_access_tree",
    "eval_atomic",
    "eval_fida",
    "eval_fida_plain",
    "eval_predicate",
    "evaluate_policy",
    "expression_functions",
    "expression_names",
    "gen_synthetic",
    "generate_policy",
    "graph_from_dict",
    "graph_to_dict",
    "guards_pass",
    "load_graph",
    "load_policy",
    "load_purpose_graph",
    "load_request",
    "load_role_order",
    "match_and",
    "match_or",
    "match_partition",
    "match_path",
    "merge_parties",
    "op_difference",
    "op_intersection",
    "op_precedence",
    "op_subtraction",
    "op_union",
    "outcome_to_dict",
    "parse_fida",
    "parse_path_pattern",
    "parse_target",
    "partition_by_mix",
    "party_result_from_dict",
    "party_result_to_dict",
    "policy_from_dict",
    "precedence_total",
    "print_fida",
    "purpose_graph_from_dict",
    "purpose_graph_to_dict",
    "random_purpose_graph",
    "request_from_dict",
    "role_leq",
    "role_order_from_dict",
    "run_bench",
    "split_result",
    "topological_order_of",
]
