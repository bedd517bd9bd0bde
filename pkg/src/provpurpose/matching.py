"""Four-valued condition matching against provenance graphs.

Match results form a chain, best to worst:

* ``FULL``: the graph embeds the whole pattern: vertex types, vertex names,
  every attribute constraint, and every edge with its label.
* ``NAMES``: an embedding satisfies types and names (and edges), but no
  embedding also satisfies all attribute constraints.
* ``TYPES``: an embedding satisfies vertex types (and edges) only.
* ``NONE``: not even the typed shape is present.

Conjunction is ``min`` and disjunction is ``max`` on that chain; only ``FULL``
ever grants purposes downstream.

An embedding here is an injective mapping of pattern vertices to graph
vertices that preserves every pattern edge, matching edge labels exactly
(wildcard pattern edges only require some edge in the right direction).

Path patterns are a linear sublanguage: a comma-separated list of steps where
``\\v*`` is a wildcard absorbing any run of intermediate vertices and every
other step is ``LABEL|NAME``. A step matches a position on a directed walk
when the vertex name equals NAME, or the edge traversed into the position
carries LABEL as its label or refined label (the walk's first vertex may use
any of its outgoing edges instead). Path matching is two-valued: FULL or NONE.

Targets are an XPath-like spelling of a chain of vertex constraints:
``/(agent|artifact|process)[name="N"]?([ITEM op VALUE])*`` repeated. A target
desugars to a path-shaped partition whose edges are wildcards.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum, IntEnum
from typing import Mapping, Union

from .errors import PatternSyntaxError, TypeMismatchError
from .provenance import AttrValue, EdgeLabel, ProvEdge, ProvenanceGraph, VertexType


class MatchValue(IntEnum):
    """Totally ordered match quality; FULL > NAMES > TYPES > NONE."""

    NONE = 0
    TYPES = 1
    NAMES = 2
    FULL = 3

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def from_label(cls, label: str) -> "MatchValue":
        for value, text in _LABELS.items():
            if text == label:
                return value
        raise ValueError(f"unknown match label {label!r}")


_LABELS = {
    MatchValue.FULL: "full",
    MatchValue.NAMES: "names-only",
    MatchValue.TYPES: "types-only",
    MatchValue.NONE: "none",
}


def match_and(*values: MatchValue) -> MatchValue:
    """Conjunction: the worst value wins."""
    return min(values)


def match_or(*values: MatchValue) -> MatchValue:
    """Disjunction: the best value wins."""
    return max(values)


class Predicate(str, Enum):
    EQ = "="
    NEQ = "!="
    LT = "<"
    LEQ = "<="
    GT = ">"
    GEQ = ">="
    CONTAINS = "~"


def _kind(value: AttrValue) -> type | None:
    if isinstance(value, bool):
        return None
    if isinstance(value, int):
        return int
    if isinstance(value, str):
        return str
    if isinstance(value, datetime):
        return datetime
    return None


def eval_predicate(pred: Predicate, left: AttrValue, right: AttrValue) -> bool:
    """Apply a binary predicate to two attribute values.

    Values must be of the same kind (int, str, or timestamp); strings order
    lexicographically and timestamps chronologically. Mixed kinds raise
    :class:`TypeMismatchError`.
    """
    lk, rk = _kind(left), _kind(right)
    if lk is None or rk is None or lk is not rk:
        raise TypeMismatchError(
            f"cannot apply {pred.value!r} to {type(left).__name__} and {type(right).__name__}"
        )
    if pred is Predicate.EQ:
        return left == right
    if pred is Predicate.NEQ:
        return left != right
    if pred is Predicate.CONTAINS:
        if lk is not str:
            raise TypeMismatchError(f"cannot apply {pred.value!r} to {lk.__name__} values")
        return str(right) in str(left)
    if pred is Predicate.LT:
        return left < right  # type: ignore[operator]
    if pred is Predicate.LEQ:
        return left <= right  # type: ignore[operator]
    if pred is Predicate.GT:
        return left > right  # type: ignore[operator]
    if pred is Predicate.GEQ:
        return left >= right  # type: ignore[operator]
    raise TypeMismatchError(f"unknown predicate {pred!r}")


# -- partitions ---------------------------------------------------------------

@dataclass(frozen=True)
class AttrConstraint:
    item: str
    pred: Predicate
    operand: AttrValue


@dataclass(frozen=True)
class PatternVertex:
    """A vertex constraint: type always, name and attributes optionally."""

    ref: str
    vtype: VertexType
    name: str | None = None
    constraints: tuple[AttrConstraint, ...] = ()


@dataclass(frozen=True)
class PatternEdge:
    """An edge constraint between pattern refs; label None means wildcard."""

    src: str
    dst: str
    label: EdgeLabel | None = None


@dataclass(frozen=True)
class ProvenancePartition:
    """A connected pattern over vertices and labeled edges."""

    vertices: tuple[PatternVertex, ...]
    edges: tuple[PatternEdge, ...] = ()

    def __post_init__(self) -> None:
        if not self.vertices:
            raise PatternSyntaxError("partition needs at least one vertex")
        refs = [v.ref for v in self.vertices]
        if len(set(refs)) != len(refs):
            raise PatternSyntaxError("partition vertex refs must be unique")
        known = set(refs)
        for e in self.edges:
            if e.src not in known or e.dst not in known:
                raise PatternSyntaxError(f"edge {e.src!r} -> {e.dst!r} references unknown refs")
        # connectivity, ignoring edge direction
        adjacency: dict[str, set[str]] = {r: set() for r in refs}
        for e in self.edges:
            adjacency[e.src].add(e.dst)
            adjacency[e.dst].add(e.src)
        seen = {refs[0]}
        stack = [refs[0]]
        while stack:
            for nxt in adjacency[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if seen != known:
            raise PatternSyntaxError("partition must be connected")


def _vertex_admissible(
    pv: PatternVertex,
    vid: str,
    graph: ProvenanceGraph,
    check_names: bool,
    check_attrs: bool,
) -> bool:
    gv = graph.vertex(vid)
    if gv.vtype is not pv.vtype:
        return False
    if check_names and pv.name is not None and gv.name != pv.name:
        return False
    if check_attrs and pv.constraints:
        attrs = graph.attributes_of(vid)
        for c in pv.constraints:
            if c.item not in attrs:
                return False
            try:
                if not eval_predicate(c.pred, attrs[c.item], c.operand):
                    return False
            except TypeMismatchError:
                # a constraint that cannot even be compared is unsatisfied
                return False
    return True


def _has_edge(graph: ProvenanceGraph, src: str, dst: str, label: EdgeLabel | None) -> bool:
    for e in graph.out_edges(src):
        if e.dst == dst and (label is None or e.label is label):
            return True
    return False


def _find_embedding(
    partition: ProvenancePartition,
    graph: ProvenanceGraph,
    check_names: bool,
    check_attrs: bool,
) -> bool:
    order = partition.vertices
    placed: dict[str, str] = {}
    used: set[str] = set()
    vids = list(graph.vertices)

    def backtrack(i: int) -> bool:
        if i == len(order):
            return True
        pv = order[i]
        for vid in vids:
            if vid in used:
                continue
            if not _vertex_admissible(pv, vid, graph, check_names, check_attrs):
                continue
            ok = True
            for pe in partition.edges:
                if pe.src == pv.ref and pe.dst in placed:
                    if not _has_edge(graph, vid, placed[pe.dst], pe.label):
                        ok = False
                        break
                elif pe.dst == pv.ref and pe.src in placed:
                    if not _has_edge(graph, placed[pe.src], vid, pe.label):
                        ok = False
                        break
            if not ok:
                continue
            placed[pv.ref] = vid
            used.add(vid)
            if backtrack(i + 1):
                return True
            del placed[pv.ref]
            used.remove(vid)
        return False

    return backtrack(0)


def match_partition(partition: ProvenancePartition, graph: ProvenanceGraph) -> MatchValue:
    """Best stratum at which the partition embeds into the graph."""
    if _find_embedding(partition, graph, check_names=True, check_attrs=True):
        return MatchValue.FULL
    if _find_embedding(partition, graph, check_names=True, check_attrs=False):
        return MatchValue.NAMES
    if _find_embedding(partition, graph, check_names=False, check_attrs=False):
        return MatchValue.TYPES
    return MatchValue.NONE


# -- path patterns ------------------------------------------------------------

WILDCARD_TOKEN = "\\v*"


@dataclass(frozen=True)
class PathStep:
    """One concrete step: LABEL|NAME."""

    edge_or_process: str
    vertex_name: str


@dataclass(frozen=True)
class PathPattern:
    """A step sequence; None entries are wildcards. Ends must be concrete."""

    steps: tuple[PathStep | None, ...]

    def __post_init__(self) -> None:
        if not self.steps:
            raise PatternSyntaxError("path pattern needs at least one step")
        if self.steps[0] is None or self.steps[-1] is None:
            raise PatternSyntaxError("path pattern must not start or end with a wildcard")

    def text(self) -> str:
        parts = [
            WILDCARD_TOKEN if s is None else f"{s.edge_or_process}|{s.vertex_name}"
            for s in self.steps
        ]
        return ", ".join(parts)


def parse_path_pattern(text: str) -> PathPattern:
    """Parse ``LABEL|NAME`` steps separated by commas; ``\\v*`` is a wildcard."""
    if not text.strip():
        raise PatternSyntaxError("empty path pattern")
    steps: list[PathStep | None] = []
    pos = 0
    for chunk in text.split(","):
        token = chunk.strip()
        if not token:
            raise PatternSyntaxError("empty path step", pos)
        if token == WILDCARD_TOKEN:
            steps.append(None)
        else:
            if "|" not in token:
                raise PatternSyntaxError(f"step {token!r} is not LABEL|NAME", pos)
            label, _, name = token.partition("|")
            label, name = label.strip(), name.strip()
            if not label or not name or "|" in name:
                raise PatternSyntaxError(f"step {token!r} is not LABEL|NAME", pos)
            steps.append(PathStep(label, name))
        pos += len(chunk) + 1
    return PathPattern(tuple(steps))


def _edge_labelish(edge: ProvEdge, token: str) -> bool:
    return edge.label.value == token or edge.refined == token


def _step_at(
    step: PathStep,
    vid: str,
    entry: ProvEdge | None,
    graph: ProvenanceGraph,
    first: bool,
) -> bool:
    if graph.vertex(vid).name == step.vertex_name:
        return True
    if entry is not None and _edge_labelish(entry, step.edge_or_process):
        return True
    if first and entry is None:
        return any(_edge_labelish(e, step.edge_or_process) for e in graph.out_edges(vid))
    return False


def match_path(pattern: PathPattern, graph: ProvenanceGraph) -> MatchValue:
    """FULL when some directed walk realizes every step in order, else NONE."""
    steps = pattern.steps
    failed: set[tuple[str, int, ProvEdge | None]] = set()
    visiting: set[tuple[str, int, ProvEdge | None]] = set()

    def search(vid: str, entry: ProvEdge | None, i: int) -> bool:
        key = (vid, i, entry)
        if key in failed or key in visiting:
            return False
        visiting.add(key)
        try:
            step = steps[i]
            if step is None:
                if search(vid, entry, i + 1):
                    return True
                for e in graph.out_edges(vid):
                    if search(e.dst, e, i):
                        return True
                failed.add(key)
                return False
            if not _step_at(step, vid, entry, graph, first=(i == 0)):
                failed.add(key)
                return False
            if i == len(steps) - 1:
                return True
            for e in graph.out_edges(vid):
                if search(e.dst, e, i + 1):
                    return True
            failed.add(key)
            return False
        finally:
            visiting.discard(key)

    for vid in graph.vertices:
        if search(vid, None, 0):
            return MatchValue.FULL
    return MatchValue.NONE


# -- targets ------------------------------------------------------------------

_TARGET_TYPES = {
    "agent": VertexType.AGENT,
    "artifact": VertexType.ARTIFACT,
    "process": VertexType.PROCESS,
}
_SEGMENT_TYPE_RE = re.compile(r"(agent|artifact|process)")
_NAME_RE = re.compile(r'name\s*=\s*"([^"]*)"\Z')
_CONSTRAINT_RE = re.compile(r"(\w+)\s*(!=|<=|>=|=|<|>|~)\s*(.+)\Z")
_DATE_RE = re.compile(r"\d{4}-\d{2}-\d{2}([T ].+)?\Z")


def _parse_target_value(raw: str, pos: int) -> AttrValue:
    raw = raw.strip()
    if len(raw) >= 2 and raw[0] == '"' and raw[-1] == '"':
        return raw[1:-1]
    if re.fullmatch(r"-?\d+", raw):
        return int(raw)
    if _DATE_RE.match(raw):
        try:
            return datetime.fromisoformat(raw)
        except ValueError:
            raise PatternSyntaxError(f"bad timestamp {raw!r}", pos) from None
    raise PatternSyntaxError(f"bad value {raw!r}", pos)


def parse_target(text: str) -> ProvenancePartition:
    """Desugar a target string into a path-shaped partition.

    Consecutive segments are linked by wildcard edges, so ``/a/b`` requires
    some edge from the ``a`` vertex to the ``b`` vertex, whatever its label.
    """
    s = text.strip()
    if not s:
        raise PatternSyntaxError("empty target")
    if not s.startswith("/"):
        raise PatternSyntaxError("target must start with '/'", 0)
    vertices: list[PatternVertex] = []
    edges: list[PatternEdge] = []
    pos = 0
    while pos < len(s):
        if s[pos] != "/":
            raise PatternSyntaxError(f"expected '/' before {s[pos:]!r}", pos)
        pos += 1
        m = _SEGMENT_TYPE_RE.match(s, pos)
        if not m:
            raise PatternSyntaxError("expected agent, artifact, or process", pos)
        vtype = _TARGET_TYPES[m.group(1)]
        pos = m.end()
        name: str | None = None
        constraints: list[AttrConstraint] = []
        while pos < len(s) and s[pos] == "[":
            end = s.find("]", pos)
            if end < 0:
                raise PatternSyntaxError("unclosed '['", pos)
            inner = s[pos + 1 : end].strip()
            nm = _NAME_RE.match(inner)
            if nm:
                name = nm.group(1)
            else:
                cm = _CONSTRAINT_RE.match(inner)
                if not cm:
                    raise PatternSyntaxError(f"bad constraint {inner!r}", pos)
                item, op, raw = cm.groups()
                constraints.append(
                    AttrConstraint(item, Predicate(op), _parse_target_value(raw, pos))
                )
            pos = end + 1
        ref = f"t{len(vertices)}"
        vertices.append(PatternVertex(ref, vtype, name, tuple(constraints)))
        if len(vertices) > 1:
            edges.append(PatternEdge(vertices[-2].ref, ref, None))
    return ProvenancePartition(tuple(vertices), tuple(edges))


# -- atomic conditions --------------------------------------------------------

@dataclass(frozen=True)
class NullCondition:
    """The empty condition; always a full match."""


@dataclass(frozen=True)
class VertexCondition:
    """Requires a vertex of the given type and name to exist."""

    vtype: VertexType
    name: str


@dataclass(frozen=True)
class AttrCondition:
    """Requires a (type, name) vertex whose attribute satisfies a predicate."""

    vtype: VertexType
    name: str
    item: str
    pred: Predicate
    operand: AttrValue


@dataclass(frozen=True)
class QueryCondition:
    """Compares a vertex attribute against the same-named request attribute."""

    vtype: VertexType
    name: str
    query_attr: str
    pred: Predicate


@dataclass(frozen=True)
class TargetCondition:
    """A target string, parsed once at construction."""

    text: str
    partition: ProvenancePartition = field(init=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "partition", parse_target(self.text))


AtomicCondition = Union[NullCondition, VertexCondition, AttrCondition, QueryCondition, TargetCondition]


def _single(vtype: VertexType, name: str, constraints: tuple[AttrConstraint, ...] = ()) -> ProvenancePartition:
    return ProvenancePartition((PatternVertex("c0", vtype, name, constraints),))


def eval_atomic(
    cond: AtomicCondition,
    graph: ProvenanceGraph,
    query_attrs: Mapping[str, AttrValue] | None = None,
) -> MatchValue:
    """Evaluate one atomic condition against a graph (and request attributes).

    A query condition whose named attribute is absent from the request
    evaluates to NONE rather than raising.
    """
    if isinstance(cond, NullCondition):
        return MatchValue.FULL
    if isinstance(cond, VertexCondition):
        return match_partition(_single(cond.vtype, cond.name), graph)
    if isinstance(cond, AttrCondition):
        constraint = AttrConstraint(cond.item, cond.pred, cond.operand)
        return match_partition(_single(cond.vtype, cond.name, (constraint,)), graph)
    if isinstance(cond, QueryCondition):
        if not query_attrs or cond.query_attr not in query_attrs:
            return MatchValue.NONE
        constraint = AttrConstraint(cond.query_attr, cond.pred, query_attrs[cond.query_attr])
        return match_partition(_single(cond.vtype, cond.name, (constraint,)), graph)
    if isinstance(cond, TargetCondition):
        return match_partition(cond.partition, graph)
    raise TypeError(f"not an atomic condition: {cond!r}")
