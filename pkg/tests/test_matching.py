"""Four-valued matching: predicates, partitions, paths, targets."""

import random
from datetime import datetime

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from provpurpose import (
    AttrCondition,
    AttrConstraint,
    EdgeLabel,
    MatchValue,
    NullCondition,
    PathPattern,
    PathStep,
    PatternEdge,
    PatternSyntaxError,
    PatternVertex,
    Predicate,
    ProvenanceGraph,
    ProvenancePartition,
    QueryCondition,
    TargetCondition,
    TypeMismatchError,
    VertexCondition,
    VertexType,
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
from oracles import oracle_match_partition, oracle_match_path
from randcases import random_partition, random_provenance_graph


# -- value chain ----------------------------------------------------------------

def test_value_chain_order():
    assert MatchValue.FULL > MatchValue.NAMES > MatchValue.TYPES > MatchValue.NONE
    assert match_and(MatchValue.FULL, MatchValue.TYPES) is MatchValue.TYPES
    assert match_or(MatchValue.NONE, MatchValue.NAMES) is MatchValue.NAMES


def test_labels_round_trip():
    for v in MatchValue:
        assert MatchValue.from_label(v.label) is v
    with pytest.raises(ValueError):
        MatchValue.from_label("partial")


# -- predicates -------------------------------------------------------------------

def test_predicates_on_ints_and_strings():
    assert eval_predicate(Predicate.LEQ, 3, 5)
    assert not eval_predicate(Predicate.GT, 3, 5)
    assert eval_predicate(Predicate.NEQ, "a", "b")
    assert eval_predicate(Predicate.CONTAINS, "assignments", "assignment")
    assert not eval_predicate(Predicate.CONTAINS, "assignment", "assignments")


def test_predicates_on_timestamps():
    early = datetime(2009, 1, 1)
    late = datetime(2009, 6, 1)
    assert eval_predicate(Predicate.LT, early, late)
    assert eval_predicate(Predicate.GEQ, late, early)


def test_predicate_kind_mismatch_raises():
    with pytest.raises(TypeMismatchError):
        eval_predicate(Predicate.EQ, 3, "3")
    with pytest.raises(TypeMismatchError):
        eval_predicate(Predicate.CONTAINS, 3, 3)
    with pytest.raises(TypeMismatchError):
        eval_predicate(Predicate.EQ, True, 1)


# -- partitions -------------------------------------------------------------------

def test_partition_shape_errors():
    v0 = PatternVertex("x", VertexType.AGENT)
    with pytest.raises(PatternSyntaxError):
        ProvenancePartition(())
    with pytest.raises(PatternSyntaxError):
        ProvenancePartition((v0, PatternVertex("x", VertexType.PROCESS)))
    with pytest.raises(PatternSyntaxError):
        ProvenancePartition((v0,), (PatternEdge("x", "ghost"),))
    with pytest.raises(PatternSyntaxError):
        ProvenancePartition((v0, PatternVertex("y", VertexType.PROCESS)))  # disconnected


def test_partition_strata(tiny_graph):
    full = ProvenancePartition(
        (
            PatternVertex("p", VertexType.ARTIFACT, "report", (AttrConstraint("size", Predicate.LEQ, 10),)),
            PatternVertex("q", VertexType.PROCESS, "ingest"),
        ),
        (PatternEdge("p", "q", EdgeLabel.WAS_GENERATED_BY),),
    )
    assert match_partition(full, tiny_graph) is MatchValue.FULL

    bad_attr = ProvenancePartition(
        (PatternVertex("p", VertexType.ARTIFACT, "report", (AttrConstraint("size", Predicate.GT, 10),)),),
    )
    assert match_partition(bad_attr, tiny_graph) is MatchValue.NAMES

    bad_name = ProvenancePartition((PatternVertex("p", VertexType.ARTIFACT, "ledger"),))
    assert match_partition(bad_name, tiny_graph) is MatchValue.TYPES

    g = ProvenanceGraph()
    g.add_vertex(VertexType.AGENT, "solo")
    absent_type = ProvenancePartition((PatternVertex("p", VertexType.ARTIFACT, "x"),))
    assert match_partition(absent_type, g) is MatchValue.NONE


def test_partition_missing_attr_is_not_full(tiny_graph):
    p = ProvenancePartition(
        (PatternVertex("p", VertexType.ARTIFACT, "report", (AttrConstraint("missing", Predicate.EQ, 1),)),),
    )
    assert match_partition(p, tiny_graph) is MatchValue.NAMES


def test_partition_type_mismatch_counts_as_unsatisfied(tiny_graph):
    # comparing the string attribute with an int cannot hold at the full stratum
    p = ProvenancePartition(
        (PatternVertex("p", VertexType.ARTIFACT, "report", (AttrConstraint("fmt", Predicate.LT, 5),)),),
    )
    assert match_partition(p, tiny_graph) is MatchValue.NAMES


def test_embedding_is_injective():
    g = ProvenanceGraph()
    a = g.add_vertex(VertexType.ARTIFACT, "x")
    p = g.add_vertex(VertexType.PROCESS, "gen")
    g.add_edge(a, p, EdgeLabel.WAS_GENERATED_BY)
    two_artifacts = ProvenancePartition(
        (
            PatternVertex("u", VertexType.ARTIFACT),
            PatternVertex("v", VertexType.ARTIFACT),
            PatternVertex("w", VertexType.PROCESS),
        ),
        (
            PatternEdge("u", "w", EdgeLabel.WAS_GENERATED_BY),
            PatternEdge("v", "w", EdgeLabel.WAS_GENERATED_BY),
        ),
    )
    # only one artifact exists, so the two pattern artifacts cannot both embed
    assert match_partition(two_artifacts, g) is MatchValue.NONE


def test_match_agrees_with_exhaustive_oracle_sample():
    rng = random.Random(7)
    for _ in range(120):
        g = random_provenance_graph(rng)
        pattern = random_partition(rng, g)
        assert int(match_partition(pattern, g)) == oracle_match_partition(pattern, g)


def test_match_invariant_under_id_renaming():
    rng = random.Random(11)
    for _ in range(40):
        g = random_provenance_graph(rng)
        pattern = random_partition(rng, g)
        renamed = ProvenanceGraph()
        mapping = {vid: f"renamed:{vid}" for vid in g.vertices}
        for vid, v in g.vertices.items():
            renamed.add_vertex(v.vtype, v.name, dict(v.attrs) or None, vid=mapping[vid])
        for e in g.edges:
            renamed.add_edge(mapping[e.src], mapping[e.dst], e.label, e.refined)
        assert match_partition(pattern, g) is match_partition(pattern, renamed)


def test_match_monotone_under_graph_growth():
    rng = random.Random(13)
    for _ in range(40):
        g = random_provenance_graph(rng)
        pattern = random_partition(rng, g)
        before = match_partition(pattern, g)
        # adding fresh structure can only help
        extra_a = g.add_vertex(VertexType.ARTIFACT, "extra")
        extra_p = g.add_vertex(VertexType.PROCESS, "extra")
        g.add_edge(extra_a, extra_p, EdgeLabel.WAS_GENERATED_BY)
        assert match_partition(pattern, g) >= before


# -- path patterns ----------------------------------------------------------------

def test_parse_path_pattern_round_trip():
    text = f"wasSubmittedBy|Submit, {WILDCARD_TOKEN}, wasGradedby|Grade"
    pattern = parse_path_pattern(text)
    assert pattern.steps[1] is None
    assert pattern.text() == text
    assert parse_path_pattern(pattern.text()) == pattern


def test_path_pattern_rejects_bad_shapes():
    with pytest.raises(PatternSyntaxError):
        parse_path_pattern("")
    with pytest.raises(PatternSyntaxError):
        parse_path_pattern("noseparator")
    with pytest.raises(PatternSyntaxError):
        parse_path_pattern(f"{WILDCARD_TOKEN}, used|x")
    with pytest.raises(PatternSyntaxError):
        parse_path_pattern(f"used|x, {WILDCARD_TOKEN}")
    with pytest.raises(PatternSyntaxError):
        PathPattern((None,))


def test_path_match_on_submission_graph(submission_graph):
    g = submission_graph
    full = parse_path_pattern(f"wasSubmittedBy|Submit, {WILDCARD_TOKEN}, wasGradedby|Grade")
    assert match_path(full, g) is MatchValue.FULL
    # the refined labels also work without the wildcard in between
    direct = parse_path_pattern("wasSubmittedBy|Submit, used|homework_1, wasGradedby|Grade")
    assert match_path(direct, g) is MatchValue.FULL
    # a step still matches through its entry-edge label when the name is absent
    by_label = parse_path_pattern(f"wasSubmittedBy|Submit, {WILDCARD_TOKEN}, used|Regrade")
    assert match_path(by_label, g) is MatchValue.FULL
    # but a step whose label and name both never occur kills every walk
    missing = parse_path_pattern(
        f"wasSubmittedBy|Submit, {WILDCARD_TOKEN}, wasTriggeredBy|Regrade"
    )
    assert match_path(missing, g) is MatchValue.NONE


def test_path_first_step_may_use_outgoing_edge(tiny_graph):
    # "report" enters no edge; its first step matches through its own out-edge label
    p = parse_path_pattern("wasGeneratedBy|nosuchname")
    assert match_path(p, tiny_graph) is MatchValue.FULL
    # later steps never get that privilege: only "report" has a generated-by
    # out-edge, and the walk it starts has no second generated-by entry beyond
    # ingest, whose own out-edge is control-flavored
    chain = parse_path_pattern("wasGeneratedBy|nosuchname, wasGeneratedBy|whatever")
    assert match_path(chain, tiny_graph) is MatchValue.FULL  # entry edge report->ingest
    absent = parse_path_pattern("used|nosuchname")
    assert match_path(absent, tiny_graph) is MatchValue.NONE


def test_path_wildcard_can_absorb_nothing(submission_graph):
    p = parse_path_pattern(f"used|Submit, {WILDCARD_TOKEN}, used|homework_1")
    assert match_path(p, submission_graph) is MatchValue.FULL


def test_path_match_agrees_with_walk_oracle():
    rng = random.Random(17)
    labels = ["used", "wasGeneratedBy", "wasControlledBy", "wasRefinedBy", "a", "b"]
    checked = 0
    for _ in range(150):
        g = random_provenance_graph(rng)
        k = rng.randint(1, 3)
        steps = []
        for i in range(k):
            if 0 < i < k - 1 and rng.random() < 0.4:
                steps.append(None)
            else:
                steps.append(PathStep(rng.choice(labels), rng.choice(["a", "b", "c", "nope"])))
        pattern = PathPattern(tuple(steps))
        got = match_path(pattern, g)
        want = MatchValue.FULL if oracle_match_path(pattern, g) else MatchValue.NONE
        assert got is want
        checked += 1
    assert checked == 150


# -- targets ----------------------------------------------------------------------

def test_parse_target_desugars_to_wildcard_path():
    part = parse_target('/process[name="Submit"]/artifact[size<=4]')
    assert [v.vtype for v in part.vertices] == [VertexType.PROCESS, VertexType.ARTIFACT]
    assert part.vertices[0].name == "Submit"
    assert part.vertices[1].name is None
    assert part.vertices[1].constraints == (AttrConstraint("size", Predicate.LEQ, 4),)
    assert part.edges == (PatternEdge("t0", "t1", None),)


def test_parse_target_value_kinds():
    part = parse_target('/agent[tag="x"][n=3][when>=2009-03-01]')
    values = [c.operand for c in part.vertices[0].constraints]
    assert values == ["x", 3, datetime(2009, 3, 1)]


def test_parse_target_errors():
    for bad in ("", "agent", "/robot", '/agent[name="x"', "/agent[~~]"):
        with pytest.raises(PatternSyntaxError):
            parse_target(bad)


def test_target_matches_graph(tiny_graph):
    cond = TargetCondition('/artifact[name="report"]/process[name="ingest"]')
    assert eval_atomic(cond, tiny_graph) is MatchValue.FULL


# -- atomic conditions --------------------------------------------------------------

def test_atomic_conditions(tiny_graph):
    assert eval_atomic(NullCondition(), tiny_graph) is MatchValue.FULL
    assert eval_atomic(VertexCondition(VertexType.AGENT, "alice"), tiny_graph) is MatchValue.FULL
    assert eval_atomic(VertexCondition(VertexType.AGENT, "bob"), tiny_graph) is MatchValue.TYPES
    assert (
        eval_atomic(AttrCondition(VertexType.ARTIFACT, "report", "size", Predicate.EQ, 4), tiny_graph)
        is MatchValue.FULL
    )


def test_query_condition_uses_request_attrs(tiny_graph):
    cond = QueryCondition(VertexType.ARTIFACT, "report", "size", Predicate.LEQ)
    assert eval_atomic(cond, tiny_graph, {"size": 10}) is MatchValue.FULL
    assert eval_atomic(cond, tiny_graph, {"size": 1}) is MatchValue.NAMES
    assert eval_atomic(cond, tiny_graph, {}) is MatchValue.NONE
    assert eval_atomic(cond, tiny_graph, None) is MatchValue.NONE


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.sampled_from(list(MatchValue)), min_size=1, max_size=5),
    st.lists(st.sampled_from(list(MatchValue)), min_size=1, max_size=5),
)
def test_and_or_bounds(xs, ys):
    assert match_and(*xs, *ys) is match_and(match_and(*xs), match_and(*ys))
    assert match_or(*xs, *ys) is match_or(match_or(*xs), match_or(*ys))
    assert match_and(*xs) <= match_or(*xs)
