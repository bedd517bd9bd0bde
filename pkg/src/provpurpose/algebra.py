"""Purpose-set algebra: basic operators, hierarchical merges, expressions.

Basic operators over plain purpose sets
---------------------------------------

``+`` union, ``&`` intersection, ``^-`` symmetric difference, ``-``
subtraction (the only asymmetric one: ``s1 - s2`` keeps what is in ``s1`` and
not in both), and four whole-set precedence selections that need purpose
ranks:

* ``upmax``: the operand whose best member sits higher (smaller min rank)
* ``downmax``: the operand whose best member sits lower
* ``upmin``: the operand whose worst member sits higher (smaller max rank)
* ``downmin``: the operand whose worst member sits lower

Precedence selections return one operand whole. When the comparison ties the
union of both operands is returned, which keeps every selection commutative
and still gives ``s op s == s``. The public operator insists on non-empty
operands; inside expression evaluation and the cross-party merge functions a
totalized variant is used instead where an empty operand simply loses.

Hierarchical merges
-------------------

A :class:`HierarchicalPurposeSet` carries allowed and prohibited purposes
split into high/low hierarchy parts (HA, HP, LA, LP). Thirteen named binary
merge functions combine two of them; each follows the same shape on both
levels: combine the allowed parts, combine the prohibited parts, and remove
the latter from the former. The function table below (combine op, prohibit
op, per level) is exhaustive:

============  =============  ==============  =============  ==============
function      high combine   high prohibit   low combine    low prohibit
============  =============  ==============  =============  ==============
f_oplus       ``&``          ``-``           ``+``          ``-``
f_ominus      ``&``          ``&``           ``+``          ``&``
f_otimes      ``&``          ``-``           ``+``          ``&``
f_oslash      ``&``          ``&``           ``+``          ``-``
f_odot        ``+``          ``-``           ``+``          ``&``
f_uplus       ``+``          ``-``           ``+``          ``&``
f_dotplus     ``+``          ``&``           ``+``          ``&``
f_dcap        ``+``          ``&``           ``&``          ``&``
f_dcup        ``+``          ``&``           ``&``          ``-``
f_boxtimes    ``^-``         ``-``           ``^-``         ``&``
f_boxdot      ``^-``         ``-`` (self)    ``+``          ``&``
f_boxplus     ``+``          ``-``           ``^-``         ``&``
f_divtimes    ``^-``         ``-``           ``&``          ``&``
============  =============  ==============  =============  ==============

Two quirks are deliberate and kept as designed: ``f_uplus`` duplicates
``f_odot`` exactly, and ``f_boxdot``'s high-side prohibit combines the left
prohibited set with itself (so it is always empty). The merged prohibited
parts propagate into the result so later merges keep honoring them.

``apply_nary`` merges any number of operands in one step: high side = union
of allowed minus union of prohibited; low side = symmetric-difference fold of
allowed minus intersection fold of prohibited.

Expressions
-----------

Merge expressions combine named sets with infix operators and function calls::

    (S1 & S2) + f_dotplus(S3, S4)

``&`` and the precedence selections bind tighter than ``+``, ``-``, ``^-``;
equal-precedence operators associate left. Unicode spellings of the operators
(⊟ − ↑△ ↓△ ↑▽ ↓▽ ▷ △ ◁ ▽) are accepted and normalized: the triangle forms
bind to upmax (▷, △) and downmin (◁, ▽). Infix operators between
hierarchical operands act componentwise on (HA, HP, LA, LP); precedence
selections compare operands by their combined allowed parts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from typing import Callable, Iterable, Mapping, Sequence, Union

from .errors import (
    ConfigurationError,
    EmptyPurposeSetError,
    FidaSyntaxError,
    InputFormatError,
    UnboundNameError,
)
from .purposes import PurposeGraph, PurposeSet

# -- basic operators ----------------------------------------------------------

def op_union(s1: Iterable[str], s2: Iterable[str]) -> PurposeSet:
    return frozenset(s1) | frozenset(s2)


def op_intersection(s1: Iterable[str], s2: Iterable[str]) -> PurposeSet:
    return frozenset(s1) & frozenset(s2)


def op_difference(s1: Iterable[str], s2: Iterable[str]) -> PurposeSet:
    """Symmetric difference: everything in exactly one operand."""
    return frozenset(s1) ^ frozenset(s2)


def op_subtraction(s1: Iterable[str], s2: Iterable[str]) -> PurposeSet:
    """Remove from s1 whatever both operands share. Asymmetric."""
    a = frozenset(s1)
    return a - (a & frozenset(s2))


class PrecedenceKind(str, Enum):
    HIGH_MAX = "upmax"
    LOW_MAX = "downmax"
    HIGH_MIN = "upmin"
    LOW_MIN = "downmin"


def _precedence_winner(
    kind: PrecedenceKind, s1: PurposeSet, s2: PurposeSet, pg: PurposeGraph
) -> int:
    """-1 when s1 wins, 1 when s2 wins, 0 on a tie. Operands non-empty."""
    if kind in (PrecedenceKind.HIGH_MAX, PrecedenceKind.LOW_MAX):
        k1 = min(pg.rank_of(p) for p in s1)
        k2 = min(pg.rank_of(p) for p in s2)
    else:
        k1 = max(pg.rank_of(p) for p in s1)
        k2 = max(pg.rank_of(p) for p in s2)
    if k1 == k2:
        return 0
    higher_wins = kind in (PrecedenceKind.HIGH_MAX, PrecedenceKind.HIGH_MIN)
    if (k1 < k2) == higher_wins:
        return -1
    return 1


def op_precedence(
    kind: PrecedenceKind, s1: Iterable[str], s2: Iterable[str], pg: PurposeGraph
) -> PurposeSet:
    """Select one whole operand by rank comparison; ties return the union."""
    a, b = frozenset(s1), frozenset(s2)
    if not a or not b:
        raise EmptyPurposeSetError("precedence operators need non-empty operands")
    winner = _precedence_winner(kind, a, b, pg)
    if winner < 0:
        return a
    if winner > 0:
        return b
    return a | b


def precedence_total(
    kind: PrecedenceKind, s1: Iterable[str], s2: Iterable[str], pg: PurposeGraph
) -> PurposeSet:
    """Totalized selection used inside evaluators: an empty operand loses."""
    a, b = frozenset(s1), frozenset(s2)
    if not a:
        return b
    if not b:
        return a
    return op_precedence(kind, a, b, pg)


# -- hierarchical purpose sets --------------------------------------------------

@dataclass(frozen=True)
class HierarchicalPurposeSet:
    """Allowed/prohibited purposes split into high/low hierarchy parts.

    `graph` remembers which purpose graph the split used; it never takes part
    in equality and exists so merges can reject operands split under
    different graphs.
    """

    ha: PurposeSet = frozenset()
    hp: PurposeSet = frozenset()
    la: PurposeSet = frozenset()
    lp: PurposeSet = frozenset()
    graph: PurposeGraph | None = field(default=None, compare=False, repr=False)

    def allowed(self) -> PurposeSet:
        return self.ha | self.la

    def prohibited(self) -> PurposeSet:
        return self.hp | self.lp

    @classmethod
    def empty(cls) -> "HierarchicalPurposeSet":
        return cls()


def split_result(pg: PurposeGraph, ap: Iterable[str], pp: Iterable[str]) -> HierarchicalPurposeSet:
    """Split allowed and prohibited sets at the graph's hierarchy line."""
    ha, la = pg.split_static(ap)
    hp, lp = pg.split_static(pp)
    return HierarchicalPurposeSet(ha, hp, la, lp, graph=pg)


class InternalFunction(Enum):
    """The thirteen named hierarchical merge functions."""

    OPLUS = "f_oplus"
    OMINUS = "f_ominus"
    OTIMES = "f_otimes"
    OSLASH = "f_oslash"
    ODOT = "f_odot"
    UPLUS = "f_uplus"
    DOTPLUS = "f_dotplus"
    DCAP = "f_dcap"
    DCUP = "f_dcup"
    BOXTIMES = "f_boxtimes"
    BOXDOT = "f_boxdot"
    BOXPLUS = "f_boxplus"
    DIVTIMES = "f_divtimes"


_SET_OPS: dict[str, Callable[[PurposeSet, PurposeSet], PurposeSet]] = {
    "+": op_union,
    "&": op_intersection,
    "^-": op_difference,
    "-": op_subtraction,
}

# (high combine, high prohibit, low combine, low prohibit); see the module table.
_MERGE_RULES: dict[InternalFunction, tuple[str, str, str, str]] = {
    InternalFunction.OPLUS: ("&", "-", "+", "-"),
    InternalFunction.OMINUS: ("&", "&", "+", "&"),
    InternalFunction.OTIMES: ("&", "-", "+", "&"),
    InternalFunction.OSLASH: ("&", "&", "+", "-"),
    InternalFunction.ODOT: ("+", "-", "+", "&"),
    InternalFunction.UPLUS: ("+", "-", "+", "&"),
    InternalFunction.DOTPLUS: ("+", "&", "+", "&"),
    InternalFunction.DCAP: ("+", "&", "&", "&"),
    InternalFunction.DCUP: ("+", "&", "&", "-"),
    InternalFunction.BOXTIMES: ("^-", "-", "^-", "&"),
    InternalFunction.BOXDOT: ("^-", "-", "+", "&"),
    InternalFunction.BOXPLUS: ("+", "-", "^-", "&"),
    InternalFunction.DIVTIMES: ("^-", "-", "&", "&"),
}

_FUNCTION_BY_TOKEN = {fn.value: fn for fn in InternalFunction}


def _check_same_graph(si: HierarchicalPurposeSet, sj: HierarchicalPurposeSet) -> PurposeGraph | None:
    if si.graph is not None and sj.graph is not None and si.graph is not sj.graph:
        raise ConfigurationError("operands were split under different purpose graphs")
    return si.graph or sj.graph


def apply_internal(
    fn: InternalFunction, si: HierarchicalPurposeSet, sj: HierarchicalPurposeSet
) -> HierarchicalPurposeSet:
    """Merge two hierarchical sets with one of the thirteen functions."""
    graph = _check_same_graph(si, sj)
    high_combine, high_prohibit, low_combine, low_prohibit = _MERGE_RULES[fn]
    # f_boxdot's high prohibit combines the left prohibited part with itself.
    hp_right = si.hp if fn is InternalFunction.BOXDOT else sj.hp
    hp = _SET_OPS[high_prohibit](si.hp, hp_right)
    lp = _SET_OPS[low_prohibit](si.lp, sj.lp)
    ha = op_subtraction(_SET_OPS[high_combine](si.ha, sj.ha), hp)
    la = op_subtraction(_SET_OPS[low_combine](si.la, sj.la), lp)
    return HierarchicalPurposeSet(ha, hp, la, lp, graph=graph)


def apply_nary(sets: Sequence[HierarchicalPurposeSet]) -> HierarchicalPurposeSet:
    """Merge any number of operands at once.

    High side: union of allowed minus union of prohibited. Low side:
    symmetric-difference fold of allowed minus intersection fold of
    prohibited.
    """
    if len(sets) < 2:
        raise InputFormatError("n-ary merge needs at least two operands")
    graph = None
    for s in sets:
        if s.graph is not None:
            if graph is not None and s.graph is not graph:
                raise ConfigurationError("operands were split under different purpose graphs")
            graph = s.graph
    hp = reduce(op_union, (s.hp for s in sets))
    lp = reduce(op_intersection, (s.lp for s in sets))
    ha = op_subtraction(reduce(op_union, (s.ha for s in sets)), hp)
    la = op_subtraction(reduce(op_difference, (s.la for s in sets)), lp)
    return HierarchicalPurposeSet(ha, hp, la, lp, graph=graph)


# -- expression syntax ----------------------------------------------------------

class BasicOp(str, Enum):
    UNION = "+"
    SUBTRACT = "-"
    SYM_DIFF = "^-"
    INTERSECT = "&"
    HIGH_MAX = "upmax"
    LOW_MAX = "downmax"
    HIGH_MIN = "upmin"
    LOW_MIN = "downmin"


_TIGHT_OPS = {BasicOp.INTERSECT, BasicOp.HIGH_MAX, BasicOp.LOW_MAX, BasicOp.HIGH_MIN, BasicOp.LOW_MIN}
_LOOSE_OPS = {BasicOp.UNION, BasicOp.SUBTRACT, BasicOp.SYM_DIFF}

_PRECEDENCE_OF_OP = {
    BasicOp.HIGH_MAX: PrecedenceKind.HIGH_MAX,
    BasicOp.LOW_MAX: PrecedenceKind.LOW_MAX,
    BasicOp.HIGH_MIN: PrecedenceKind.HIGH_MIN,
    BasicOp.LOW_MIN: PrecedenceKind.LOW_MIN,
}

_WORD_OPS = {
    "upmax": BasicOp.HIGH_MAX,
    "downmax": BasicOp.LOW_MAX,
    "upmin": BasicOp.HIGH_MIN,
    "downmin": BasicOp.LOW_MIN,
}

# Unicode spellings, normalized during scanning. The triangle/harpoon forms
# used between prohibited sets bind here, in one place: right/plain triangles
# to upmax, left/down triangles to downmin.
_UNICODE_ALIASES: list[tuple[str, str]] = [
    ("↑△", "upmax"),   # up arrow + triangle
    ("↓△", "downmax"),
    ("↑▽", "upmin"),
    ("↓▽", "downmin"),
    ("▷", "upmax"),         # right-pointing triangle
    ("△", "upmax"),
    ("◁", "downmin"),       # left-pointing triangle
    ("▽", "downmin"),
    ("⊟", "^-"),            # squared minus
    ("−", "-"),             # minus sign
]


@dataclass(frozen=True)
class SetRef:
    name: str


@dataclass(frozen=True)
class FunctionCall:
    name: str
    args: tuple["FidaExpr", ...]


@dataclass(frozen=True)
class BinaryOp:
    op: BasicOp
    left: "FidaExpr"
    right: "FidaExpr"


FidaExpr = Union[SetRef, FunctionCall, BinaryOp]


@dataclass(frozen=True)
class _Token:
    kind: str  # "name" | "op" | "(" | ")" | ","
    value: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        alias = next((a for a in _UNICODE_ALIASES if text.startswith(a[0], i)), None)
        if alias is not None:
            seq, replacement = alias
            kind = "op"
            tokens.append(_Token(kind, replacement, i))
            i += len(seq)
            continue
        if text.startswith("^-", i):
            tokens.append(_Token("op", "^-", i))
            i += 2
            continue
        if ch in "+-&":
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        if ch in "(),":
            tokens.append(_Token(ch, ch, i))
            i += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word in _WORD_OPS:
                tokens.append(_Token("op", word, i))
            else:
                tokens.append(_Token("name", word, i))
            i = j
            continue
        raise FidaSyntaxError(f"unexpected character {ch!r}", i)
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], text: str) -> None:
        self.tokens = tokens
        self.text = text
        self.i = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise FidaSyntaxError("unexpected end of expression", len(self.text))
        self.i += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.take()
        if tok.kind != kind:
            raise FidaSyntaxError(f"expected {kind!r}, found {tok.value!r}", tok.pos)
        return tok

    def parse(self) -> FidaExpr:
        expr = self.expr()
        tok = self.peek()
        if tok is not None:
            raise FidaSyntaxError(f"unexpected {tok.value!r}", tok.pos)
        return expr

    def expr(self) -> FidaExpr:
        node = self.term()
        while True:
            tok = self.peek()
            if tok is None or tok.kind != "op":
                return node
            op = BasicOp(tok.value)
            if op not in _LOOSE_OPS:
                return node
            self.take()
            node = BinaryOp(op, node, self.term())

    def term(self) -> FidaExpr:
        node = self.factor()
        while True:
            tok = self.peek()
            if tok is None or tok.kind != "op":
                return node
            op = BasicOp(tok.value)
            if op not in _TIGHT_OPS:
                return node
            self.take()
            node = BinaryOp(op, node, self.factor())

    def factor(self) -> FidaExpr:
        tok = self.take()
        if tok.kind == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if tok.kind == "name":
            nxt = self.peek()
            if nxt is not None and nxt.kind == "(":
                self.take()
                args = [self.expr()]
                while True:
                    sep = self.take()
                    if sep.kind == ")":
                        break
                    if sep.kind != ",":
                        raise FidaSyntaxError(f"expected ',' or ')', found {sep.value!r}", sep.pos)
                    args.append(self.expr())
                return FunctionCall(tok.value, tuple(args))
            return SetRef(tok.value)
        raise FidaSyntaxError(f"unexpected {tok.value!r}", tok.pos)


def parse_fida(text: str) -> FidaExpr:
    """Parse a merge expression; raises :class:`FidaSyntaxError` with position."""
    tokens = _tokenize(text)
    if not tokens:
        raise FidaSyntaxError("empty expression", 0)
    return _Parser(tokens, text).parse()


def print_fida(expr: FidaExpr) -> str:
    """Canonical ASCII rendering; reparsing it yields an equal tree."""

    def fmt(node: FidaExpr, top: bool) -> str:
        if isinstance(node, SetRef):
            return node.name
        if isinstance(node, FunctionCall):
            return f"{node.name}({', '.join(fmt(a, True) for a in node.args)})"
        body = f"{fmt(node.left, False)} {node.op.value} {fmt(node.right, False)}"
        return body if top else f"({body})"

    return fmt(expr, True)


def expression_names(expr: FidaExpr) -> frozenset[str]:
    """All set names an expression references."""
    if isinstance(expr, SetRef):
        return frozenset({expr.name})
    if isinstance(expr, FunctionCall):
        out: frozenset[str] = frozenset()
        for a in expr.args:
            out |= expression_names(a)
        return out
    return expression_names(expr.left) | expression_names(expr.right)


def expression_functions(expr: FidaExpr) -> frozenset[str]:
    """All function names an expression applies."""
    if isinstance(expr, SetRef):
        return frozenset()
    if isinstance(expr, FunctionCall):
        out = frozenset({expr.name})
        for a in expr.args:
            out |= expression_functions(a)
        return out
    return expression_functions(expr.left) | expression_functions(expr.right)


# -- evaluation -----------------------------------------------------------------

def _componentwise(
    op: Callable[[PurposeSet, PurposeSet], PurposeSet],
    l: HierarchicalPurposeSet,
    r: HierarchicalPurposeSet,
) -> HierarchicalPurposeSet:
    return HierarchicalPurposeSet(
        op(l.ha, r.ha), op(l.hp, r.hp), op(l.la, r.la), op(l.lp, r.lp),
        graph=_check_same_graph(l, r),
    )


def _pick_hierarchical(
    kind: PrecedenceKind,
    l: HierarchicalPurposeSet,
    r: HierarchicalPurposeSet,
    pg: PurposeGraph | None,
) -> HierarchicalPurposeSet:
    a, b = l.allowed(), r.allowed()
    if not a and not b:
        return _componentwise(op_union, l, r)
    if not a:
        return r
    if not b:
        return l
    if pg is None:
        raise ConfigurationError("precedence operators need a purpose graph")
    winner = _precedence_winner(kind, a, b, pg)
    if winner < 0:
        return l
    if winner > 0:
        return r
    return _componentwise(op_union, l, r)


def eval_fida(
    expr: FidaExpr | str,
    env: Mapping[str, HierarchicalPurposeSet],
    pg: PurposeGraph | None = None,
) -> HierarchicalPurposeSet:
    """Evaluate an expression over hierarchical operands.

    Infix operators act componentwise; precedence selections compare
    operands by their combined allowed parts and need `pg` (or operands that
    carry their split graph). Function calls dispatch to the thirteen binary
    merges (exactly two arguments) or to ``f_nary``.
    """
    if isinstance(expr, str):
        expr = parse_fida(expr)
    if isinstance(expr, SetRef):
        try:
            return env[expr.name]
        except KeyError:
            raise UnboundNameError(f"no set bound to {expr.name!r}") from None
    if isinstance(expr, FunctionCall):
        args = [eval_fida(a, env, pg) for a in expr.args]
        if expr.name == "f_nary":
            return apply_nary(args)
        fn = _FUNCTION_BY_TOKEN.get(expr.name)
        if fn is None:
            raise UnboundNameError(f"unknown merge function {expr.name!r}")
        if len(args) != 2:
            raise FidaSyntaxError(f"{expr.name} takes exactly two operands")
        return apply_internal(fn, args[0], args[1])
    l = eval_fida(expr.left, env, pg)
    r = eval_fida(expr.right, env, pg)
    if expr.op in _PRECEDENCE_OF_OP:
        graph = pg or l.graph or r.graph
        return _pick_hierarchical(_PRECEDENCE_OF_OP[expr.op], l, r, graph)
    return _componentwise(_SET_OPS[expr.op.value], l, r)


def eval_fida_plain(
    expr: FidaExpr | str,
    env: Mapping[str, PurposeSet],
    pg: PurposeGraph | None = None,
) -> PurposeSet:
    """Evaluate an expression of basic operators over plain purpose sets."""
    if isinstance(expr, str):
        expr = parse_fida(expr)
    if isinstance(expr, SetRef):
        try:
            return env[expr.name]
        except KeyError:
            raise UnboundNameError(f"no set bound to {expr.name!r}") from None
    if isinstance(expr, FunctionCall):
        raise ConfigurationError(
            f"{expr.name} needs hierarchical or party operands, not plain sets"
        )
    l = eval_fida_plain(expr.left, env, pg)
    r = eval_fida_plain(expr.right, env, pg)
    if expr.op in _PRECEDENCE_OF_OP:
        if pg is None:
            raise ConfigurationError("precedence operators need a purpose graph")
        return precedence_total(_PRECEDENCE_OF_OP[expr.op], l, r, pg)
    return _SET_OPS[expr.op.value](l, r)
