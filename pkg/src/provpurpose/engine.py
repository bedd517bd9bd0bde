"""End-to-end decision pipeline.

A decision runs in four stages:

1. policy-evaluation: every policy of every party is checked against the
   record's provenance graph and the request; applicable policies contribute
   their allowed/prohibited purposes, the rest contribute empty sets.
2. internal-merge: each party's per-policy sets are split at the purpose
   graph's hierarchy line and merged with the party's expression. Without an
   explicit expression a single policy stands as is and several policies are
   folded left to right with f_dotplus.
3. external-merge: the per-party results are combined by the cross-party
   expression into one decision set.
4. attached-purpose-intersection: when the record carries attached purposes,
   the decision is narrowed to them.

Any domain error is re-raised as a :class:`StageError` naming the stage that
failed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .algebra import (
    FidaExpr,
    FunctionCall,
    SetRef,
    eval_fida,
    parse_fida,
    print_fida,
    split_result,
)
from .errors import ConfigurationError, ProvPurposeError, StageError
from .external import PartyResult, merge_parties
from .policy import Policy, PolicyDecision, Request, RoleOrder, evaluate_policy
from .provenance import ProvenanceGraph
from .purposes import PurposeGraph, PurposeSet


@dataclass(frozen=True)
class DataRecord:
    """A stored record: its provenance graph plus decision-relevant metadata."""

    provenance: ProvenanceGraph
    category: str | None = None
    content: Any = None
    attached_purposes: PurposeSet | None = None


@dataclass(frozen=True)
class PartyConfig:
    """One party's policies and optional merge expression over policy ids."""

    party: str
    policies: tuple[Policy, ...]
    internal_expr: str | None = None


@dataclass(frozen=True)
class PartyTrace:
    party: str
    internal_expr: str
    decisions: tuple[tuple[str, PolicyDecision], ...]
    result: PartyResult


@dataclass(frozen=True)
class DecisionOutcome:
    decided: PurposeSet
    parties: tuple[PartyTrace, ...]
    external_expr: str
    attached_purposes: PurposeSet | None


def default_internal_expr(policy_ids: Sequence[str]) -> FidaExpr:
    """Identity for one policy, left f_dotplus fold for several."""
    if not policy_ids:
        raise ConfigurationError("a party needs at least one policy")
    expr: FidaExpr = SetRef(policy_ids[0])
    for pid in policy_ids[1:]:
        expr = FunctionCall("f_dotplus", (expr, SetRef(pid)))
    return expr


def decide(
    record: DataRecord,
    request: Request,
    parties: Sequence[PartyConfig],
    external_expr: str,
    pg: PurposeGraph,
    role_order: RoleOrder | None = None,
) -> DecisionOutcome:
    """Run the full pipeline and return the decision with per-party traces."""
    if not parties:
        raise ConfigurationError("at least one party is required")
    traces: list[PartyTrace] = []
    results: list[PartyResult] = []
    for cfg in parties:
        try:
            if not cfg.policies:
                raise ConfigurationError(f"party {cfg.party!r} has no policies")
            ids = [p.id for p in cfg.policies]
            if len(set(ids)) != len(ids):
                raise ConfigurationError(f"party {cfg.party!r} has duplicate policy ids")
            pairs = [
                (
                    pol.id,
                    evaluate_policy(
                        pol,
                        record.provenance,
                        request,
                        data_category=record.category,
                        role_order=role_order,
                        purpose_graph=pg,
                    ),
                )
                for pol in cfg.policies
            ]
        except ProvPurposeError as exc:
            raise StageError("policy-evaluation", exc) from exc
        try:
            env = {pid: split_result(pg, d.ap, d.pp) for pid, d in pairs}
            expr = parse_fida(cfg.internal_expr) if cfg.internal_expr else default_internal_expr(ids)
            merged = eval_fida(expr, env, pg)
            result = PartyResult(cfg.party, merged.allowed(), merged.prohibited())
        except ProvPurposeError as exc:
            raise StageError("internal-merge", exc) from exc
        traces.append(PartyTrace(cfg.party, print_fida(expr), tuple(pairs), result))
        results.append(result)
    try:
        decided = merge_parties(results, external_expr, pg)
    except ProvPurposeError as exc:
        raise StageError("external-merge", exc) from exc
    if record.attached_purposes is not None:
        try:
            pg.check_members(record.attached_purposes)
            decided = decided & record.attached_purposes
        except ProvPurposeError as exc:
            raise StageError("attached-purpose-intersection", exc) from exc
    return DecisionOutcome(
        decided=frozenset(decided),
        parties=tuple(traces),
        external_expr=external_expr.strip(),
        attached_purposes=record.attached_purposes,
    )


def outcome_to_dict(outcome: DecisionOutcome) -> dict[str, Any]:
    """JSON-friendly rendering with sorted purpose lists."""
    return {
        "decided": sorted(outcome.decided),
        "external": outcome.external_expr,
        "attached_purposes": (
            sorted(outcome.attached_purposes)
            if outcome.attached_purposes is not None
            else None
        ),
        "parties": [
            {
                "party": trace.party,
                "internal": trace.internal_expr,
                "ap": sorted(trace.result.ap),
                "pp": sorted(trace.result.pp),
                "policies": [
                    {
                        "id": pid,
                        "applicable": d.applicable,
                        "guards_ok": d.guards_ok,
                        "tree_value": d.tree_value.label,
                        "ap": sorted(d.ap),
                        "pp": sorted(d.pp),
                    }
                    for pid, d in trace.decisions
                ],
            }
            for trace in outcome.parties
        ],
    }
