"""Cross-party merging of per-party evaluation results.

Each party's policy evaluation ends in a :class:`PartyResult`: the purposes
it would allow (`ap`) and the purposes it prohibits (`pp`), as plain sets.
Eight named functions combine two parties into one decision set, always with
the same shape: combine the allowed sides, combine the prohibited sides,
subtract the second from the first.

========  ==============  ==============
function  allowed parts   prohibited parts
========  ==============  ==============
F1        ``+``           ``&``
F2        ``+``           ``-``
F3        ``&``           ``&``
F4        ``&``           ``-``
F5        ``^-``          ``downmin``
F6        ``^-``          ``upmax``
F7        ``upmax``       ``^-``
F8        ``downmin``     ``&``
========  ==============  ==============

F5 through F8 rank whole operands against each other and therefore need a
purpose graph. Inside these merges an empty operand simply loses the
comparison, so parties that prohibit nothing never block a decision.

`merge_parties` accepts either a bare function name, which folds all parties
left to right in their listed order, or a full expression naming parties::

    F4(hospital, registry) + F3(hospital, lab)

A function application yields a decision set, which participates in any
surrounding expression as a synthetic party that prohibits nothing. A party
name appearing under an infix operator contributes its intended view,
allowed minus prohibited.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Mapping, Sequence

from .algebra import (
    BinaryOp,
    FidaExpr,
    FunctionCall,
    PrecedenceKind,
    SetRef,
    _PRECEDENCE_OF_OP,
    _SET_OPS,
    op_subtraction,
    parse_fida,
    precedence_total,
)
from .errors import (
    ConfigurationError,
    EmptyPurposeSetError,
    FidaSyntaxError,
    InputFormatError,
    UnboundNameError,
)
from .purposes import PurposeGraph, PurposeSet


@dataclass(frozen=True)
class PartyResult:
    """One party's allowed and prohibited purposes after policy evaluation."""

    party: str
    ap: PurposeSet = frozenset()
    pp: PurposeSet = frozenset()

    def intended(self) -> PurposeSet:
        """The view a party contributes on its own: allowed minus prohibited."""
        return op_subtraction(self.ap, self.pp)


class ExternalFunction(Enum):
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    F4 = "F4"
    F5 = "F5"
    F6 = "F6"
    F7 = "F7"
    F8 = "F8"


# (allowed-side op, prohibited-side op); see the module table.
_PARTY_RULES: dict[ExternalFunction, tuple[str, str]] = {
    ExternalFunction.F1: ("+", "&"),
    ExternalFunction.F2: ("+", "-"),
    ExternalFunction.F3: ("&", "&"),
    ExternalFunction.F4: ("&", "-"),
    ExternalFunction.F5: ("^-", "downmin"),
    ExternalFunction.F6: ("^-", "upmax"),
    ExternalFunction.F7: ("upmax", "^-"),
    ExternalFunction.F8: ("downmin", "&"),
}

_EXTERNAL_BY_TOKEN = {fn.value: fn for fn in ExternalFunction}


def _combine(op: str, a: PurposeSet, b: PurposeSet, pg: PurposeGraph | None) -> PurposeSet:
    if op in ("+", "&", "^-", "-"):
        return _SET_OPS[op](a, b)
    if pg is None:
        raise ConfigurationError("F5 through F8 need a purpose graph to rank operands")
    return precedence_total(PrecedenceKind(op), a, b, pg)


def apply_external(
    fn: ExternalFunction,
    sm: PartyResult,
    sn: PartyResult,
    pg: PurposeGraph | None = None,
) -> PurposeSet:
    """Combine two party results into one decision set."""
    ap_op, pp_op = _PARTY_RULES[fn]
    allowed = _combine(ap_op, sm.ap, sn.ap, pg)
    prohibited = _combine(pp_op, sm.pp, sn.pp, pg)
    return op_subtraction(allowed, prohibited)


def _eval_party_expr(
    expr: FidaExpr,
    env: Mapping[str, PartyResult],
    pg: PurposeGraph | None,
) -> PartyResult:
    if isinstance(expr, SetRef):
        try:
            return env[expr.name]
        except KeyError:
            raise UnboundNameError(f"no party named {expr.name!r}") from None
    if isinstance(expr, FunctionCall):
        fn = _EXTERNAL_BY_TOKEN.get(expr.name)
        if fn is None:
            raise UnboundNameError(f"unknown cross-party function {expr.name!r}")
        if len(expr.args) != 2:
            raise FidaSyntaxError(f"{expr.name} takes exactly two operands")
        sm = _eval_party_expr(expr.args[0], env, pg)
        sn = _eval_party_expr(expr.args[1], env, pg)
        return PartyResult("", apply_external(fn, sm, sn, pg), frozenset())
    l = _eval_party_expr(expr.left, env, pg).intended()
    r = _eval_party_expr(expr.right, env, pg).intended()
    if expr.op in _PRECEDENCE_OF_OP:
        if pg is None:
            raise ConfigurationError("precedence operators need a purpose graph")
        out = precedence_total(_PRECEDENCE_OF_OP[expr.op], l, r, pg)
    else:
        out = _SET_OPS[expr.op.value](l, r)
    return PartyResult("", out, frozenset())


def merge_parties(
    results: Sequence[PartyResult],
    expr_text: str,
    pg: PurposeGraph | None = None,
) -> PurposeSet:
    """Merge party results into the final decision set.

    A bare function name ("F3") folds all parties left to right. Anything
    else is parsed as an expression whose set names refer to parties.
    """
    if not results:
        raise EmptyPurposeSetError("no party results to merge")
    text = expr_text.strip()
    fn = _EXTERNAL_BY_TOKEN.get(text)
    if fn is not None:
        acc = results[0]
        if len(results) == 1:
            return acc.intended()
        for nxt in results[1:]:
            acc = PartyResult("", apply_external(fn, acc, nxt, pg), frozenset())
        return acc.ap
    env = {r.party: r for r in results}
    if len(env) != len(results):
        raise ConfigurationError("party names must be distinct to merge by expression")
    return _eval_party_expr(parse_fida(text), env, pg).intended()


def party_result_from_dict(doc: Mapping[str, Any], default_party: str = "party") -> PartyResult:
    if not isinstance(doc, Mapping):
        raise InputFormatError("party result must be a JSON object")
    party = doc.get("party", default_party)
    if not isinstance(party, str) or not party:
        raise InputFormatError("party name must be a non-empty string")
    def _purpose_list(key: str) -> PurposeSet:
        raw = doc.get(key, [])
        if not isinstance(raw, list) or not all(isinstance(p, str) for p in raw):
            raise InputFormatError(f"{key!r} must be a list of purpose names")
        return frozenset(raw)
    return PartyResult(party, _purpose_list("ap"), _purpose_list("pp"))


def party_result_to_dict(result: PartyResult) -> dict[str, Any]:
    return {
        "party": result.party,
        "ap": sorted(result.ap),
        "pp": sorted(result.pp),
    }
