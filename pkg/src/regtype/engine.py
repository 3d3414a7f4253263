"""Tabulated emptiness test for type expressions, plus inclusion,
equivalence and witness extraction built on top of it.

The search alternates between type expressions and sequence expressions:

* ``etype`` splits an expression into conjuncts (its DNF);
* ``etype_conj`` looks a conjunct up in the table of conjuncts already
  assumed empty along the current path, and otherwise unfolds it over every
  function symbol it can start with, one sequence expression per symbol;
* ``eseq`` splits a sequence expression into conjunctive sequences;
* ``eseq_conj`` decides a conjunctive sequence: a 0-dimensional one is empty
  iff it mentions ``Lambda``, otherwise it is empty iff one of its
  projections is.

A table hit only ever answers "empty", so every "nonempty" answer is backed
by a concrete term, which ``witness`` reads back off the trace.
"""
from __future__ import annotations

import sys
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .model import (
    LAMBDA, And, Bot, ConjSeq, Not, RegTypeError, SAnd, Sequence,
    SequenceExpr, SOr, Term, Top, TypeAtom, TypeDefs, TypeExpr, conj,
)
from .normalize import (
    DEFAULT_DNF_LIMIT, ConjunctiveTypeExpr, LimitError, all_top, dnf_seq,
    dnf_type, instantiate, push_neg, simplify, sort_key,
)
from .syntax import format_expr


class RecursionLimitError(LimitError):
    pass


class InternalInconsistencyError(RegTypeError):
    """The engine produced a witness that is not a member.  Always a bug."""


@dataclass(frozen=True)
class EngineConfig:
    dnf_limit: int = DEFAULT_DNF_LIMIT
    trace: bool = False
    recursion_limit: int = 2000

    def __post_init__(self):
        if self.dnf_limit <= 0 or self.recursion_limit <= 0:
            raise ValueError("limits must be positive")


@dataclass
class TraceNode:
    kind: str  # etype | etype_conj | eseq | eseq_conj
    arg: str
    eq: str = ""
    table_size: int = 0
    verdict: Optional[bool] = None
    pruned: bool = False
    children: list[TraceNode] = field(default_factory=list)
    symbol: Optional[str] = None  # function symbol an eseq node unfolds

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "arg": self.arg,
            "eq": self.eq,
            "table_size": self.table_size,
            "verdict": self.verdict,
            "pruned": self.pruned,
            "children": [c.to_dict() for c in self.children],
        }

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


TRACE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$ref": "#/$defs/node",
    "$defs": {
        "node": {
            "type": "object",
            "required": ["kind", "arg", "eq", "table_size", "verdict", "pruned", "children"],
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["etype", "etype_conj", "eseq", "eseq_conj"]},
                "arg": {"type": "string"},
                "eq": {"type": "string"},
                "table_size": {"type": "integer", "minimum": 0},
                "verdict": {"type": ["boolean", "null"]},
                "pruned": {"type": "boolean"},
                "children": {"type": "array", "items": {"$ref": "#/$defs/node"}},
            },
        }
    },
}


@dataclass
class Stats:
    max_table: int = 0
    nodes_by_kind: Counter = field(default_factory=Counter)
    dnf_max: int = 0

    def to_dict(self) -> dict:
        kinds = ("etype", "etype_conj", "eseq", "eseq_conj")
        return {"max_table": self.max_table,
                "nodes_by_kind": {k: self.nodes_by_kind.get(k, 0) for k in kinds},
                "dnf_max": self.dnf_max}


@dataclass
class Result:
    empty: bool
    stats: Stats
    trace: Optional[TraceNode] = None
    tables: list = field(default_factory=list)  # every table extension made, when traced


# ---------------------------------------------------------------------------
# F, A and B


class FunctorIndex:
    """Memoised principal functors and argument sequences of atoms."""

    def __init__(self, defs: TypeDefs):
        if not defs.simplified:
            raise ValueError("FunctorIndex needs simplified definitions")
        self.defs = defs
        self.order = {f: i for i, (f, _) in enumerate(defs.signature)}
        self._functors: dict = {}
        self._args: dict = {}

    def functors(self, atom: TypeAtom) -> frozenset:
        hit = self._functors.get(atom)
        if hit is None:
            if isinstance(atom, Top):
                hit = frozenset(self.order)
            elif isinstance(atom, Bot):
                hit = frozenset()
            else:
                hit = frozenset(r.root for r in self.defs.rules_for(atom.name))
            self._functors[atom] = hit
        return hit

    def args(self, atom: TypeAtom, f: str) -> tuple[Sequence, ...]:
        key = (atom, f)
        hit = self._args.get(key)
        if hit is None:
            if isinstance(atom, Top):
                hit = (all_top(self.defs.signature.arity(f)),)
            elif isinstance(atom, Bot):
                hit = ()
            else:
                seqs: dict[Sequence, None] = {}
                for r in self.defs.rules_for(atom.name):
                    if r.root == f:
                        seqs.setdefault(Sequence(instantiate(r, atom.args)))
                hit = tuple(seqs)
            self._args[key] = hit
        return hit

    def common_functors(self, atoms: Iterable[TypeAtom]) -> list[str]:
        fs = None
        for a in atoms:
            fs = self.functors(a) if fs is None else fs & self.functors(a)
        return sorted(fs or (), key=self.order.__getitem__)

    def build_B(self, c: ConjunctiveTypeExpr, f: str) -> SequenceExpr:
        if f not in self.common_functors(c.pos):
            raise ValueError(f"{f} is not a principal functor of every positive literal")
        k = self.defs.signature.arity(f)
        parts: list[SequenceExpr] = []
        for w in sorted(c.pos, key=sort_key):
            alts = self.args(w, f)
            parts.append(alts[0] if len(alts) == 1 else SOr(alts))
        for t in sorted(c.neg, key=sort_key):
            alts = self.args(t, f)
            if alts:  # an empty A leaves the formula unchanged
                parts.append(push_neg(alts, k))
        return parts[0] if len(parts) == 1 else SAnd(tuple(parts))


def _prepare(defs: TypeDefs) -> TypeDefs:
    return defs if defs.simplified else simplify(defs)


def principal_functors(atom: TypeAtom, defs: TypeDefs) -> list[str]:
    """Function symbols that terms in ``atom`` can start with, in signature order."""
    return FunctorIndex(_prepare(defs)).common_functors([atom])


def arg_sequences(atom: TypeAtom, f: str, defs: TypeDefs) -> tuple[Sequence, ...]:
    return FunctorIndex(_prepare(defs)).args(atom, f)


def build_B(c: ConjunctiveTypeExpr, f: str, defs: TypeDefs) -> SequenceExpr:
    """The sequence expression whose emptiness says no ``f``-rooted term is in ``c``."""
    return FunctorIndex(_prepare(defs)).build_B(c, f)


def project(cseq: ConjSeq, j: int) -> TypeExpr:
    """Conjunction of the ``j``-th (1-based) components of ``cseq``."""
    if not 1 <= j <= cseq.dimension:
        raise IndexError(f"projection {j} out of range 1..{cseq.dimension}")
    return conj(s.items[j - 1] for s in cseq.conjuncts)


# ---------------------------------------------------------------------------
# rendering


def format_seq(s: SequenceExpr) -> str:
    if isinstance(s, Sequence):
        if s.is_lambda:
            return "Lambda"
        if not s.items:
            return "eps"
        return "<" + ", ".join(format_expr(e) for e in s.items) + ">"
    if isinstance(s, SAnd):
        return " & ".join(f"({format_seq(p)})" if isinstance(p, SOr) else format_seq(p)
                          for p in s.parts)
    return " | ".join(f"({format_seq(p)})" if isinstance(p, SAnd) else format_seq(p)
                      for p in s.parts)


def format_conjseq(g: ConjSeq) -> str:
    return " & ".join(format_seq(s) for s in g.conjuncts)


# ---------------------------------------------------------------------------
# the search


class _Search:
    def __init__(self, defs: TypeDefs, config: EngineConfig):
        self.index = FunctorIndex(defs)
        self.config = config
        self.stats = Stats()
        self.depth = 0
        self.tables: list = []

    def _enter(self, kind, table, parent, arg, eq="") -> Optional[TraceNode]:
        self.depth += 1
        if self.depth > self.config.recursion_limit:
            raise RecursionLimitError(f"recursion deeper than {self.config.recursion_limit}")
        self.stats.nodes_by_kind[kind] += 1
        self.stats.max_table = max(self.stats.max_table, len(table))
        if parent is None and not self.config.trace:
            return None
        node = TraceNode(kind, arg() if callable(arg) else arg, eq, len(table))
        if parent is not None:
            parent.children.append(node)
        return node

    def _leave(self, node, verdict: bool) -> bool:
        self.depth -= 1
        if node is not None:
            node.verdict = verdict
        return verdict

    def _pruned(self, parent, kind, args):
        if parent is None:
            return
        for a in args:
            parent.children.append(TraceNode(kind, a, table_size=parent.table_size, pruned=True))

    def etype(self, e: TypeExpr, table: tuple, parent=None) -> bool:
        node = self._enter("etype", table, parent, lambda: format_expr(e), "dnf")
        conjuncts = dnf_type(e, self.config.dnf_limit)
        self.stats.dnf_max = max(self.stats.dnf_max, len(conjuncts))
        for i, c in enumerate(conjuncts):
            if not self.etype_conj(c, table, node):
                self._pruned(node, "etype_conj", [str(x) for x in conjuncts[i + 1:]])
                return self._leave(node, False)
        return self._leave(node, True)

    def etype_conj(self, c: ConjunctiveTypeExpr, table: tuple, parent=None) -> bool:
        node = self._enter("etype_conj", table, parent, lambda: str(c))
        if c.pos & c.neg:
            return self._tag(node, "clash", True)
        lits = c.lits()
        if any(lits >= entry for entry in table):
            return self._tag(node, "table-hit", True)
        functors = self.index.common_functors(c.pos)
        if not functors:
            return self._tag(node, "no-functor", True)
        if node is not None:
            node.eq = "unfold"
        extended = table + (lits,)
        if self.config.trace:
            self.tables.append(extended)
        for i, f in enumerate(functors):
            sexpr = self.index.build_B(c, f)
            if not self.eseq(sexpr, extended, f, node):
                if node is not None:
                    for g in functors[i + 1:]:
                        node.children.append(TraceNode(
                            "eseq", format_seq(self.index.build_B(c, g)), f"unfold:{g}",
                            len(extended), pruned=True, symbol=g))
                return self._leave(node, False)
        return self._leave(node, True)

    def _tag(self, node, eq, verdict):
        if node is not None:
            node.eq = eq
        return self._leave(node, verdict)

    def eseq(self, sexpr: SequenceExpr, table: tuple, f: str, parent=None) -> bool:
        node = self._enter("eseq", table, parent, lambda: format_seq(sexpr), f"unfold:{f}")
        if node is not None:
            node.symbol = f
        cseqs = dnf_seq(sexpr, self.config.dnf_limit)
        self.stats.dnf_max = max(self.stats.dnf_max, len(cseqs))
        for i, g in enumerate(cseqs):
            if not self.eseq_conj(g, table, node):
                self._pruned(node, "eseq_conj", [format_conjseq(x) for x in cseqs[i + 1:]])
                return self._leave(node, False)
        return self._leave(node, True)

    def eseq_conj(self, cseq: ConjSeq, table: tuple, parent=None) -> bool:
        node = self._enter("eseq_conj", table, parent, lambda: format_conjseq(cseq))
        k = cseq.dimension
        if k == 0:
            if LAMBDA in cseq.conjuncts:
                return self._tag(node, "lambda", True)
            return self._tag(node, "epsilon", False)
        if node is not None:
            node.eq = "project"
        for j in range(1, k + 1):
            if self.etype(project(cseq, j), table, node):
                self._pruned(node, "etype", [format_expr(project(cseq, i))
                                             for i in range(j + 1, k + 1)])
                return self._leave(node, True)
        return self._leave(node, False)


class _RecursionHeadroom:
    def __init__(self, frames: int):
        self.frames = frames

    def __enter__(self):
        self.old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(self.old, self.frames))

    def __exit__(self, *exc):
        sys.setrecursionlimit(self.old)


def _run(defs: TypeDefs, config: EngineConfig, fn):
    search = _Search(_prepare(defs), config)
    with _RecursionHeadroom(config.recursion_limit * 2 + 1000):
        verdict = fn(search)
    return search, verdict


def _as_table(entries: Iterable[ConjunctiveTypeExpr]) -> tuple:
    return tuple(c.lits() for c in entries)


# ---------------------------------------------------------------------------
# public entry points


def etype(e: TypeExpr, defs: TypeDefs, config: Optional[EngineConfig] = None) -> Result:
    """Decide whether ``e`` denotes the empty set, starting from an empty table."""
    config = config or EngineConfig()
    defs.check_query(e)
    root = TraceNode("etype", format_expr(e), "dnf") if config.trace else None
    search, verdict = _run(defs, config, lambda s: s.etype(e, (), root))
    trace = root.children[0] if root is not None else None
    return Result(verdict, search.stats, trace, search.tables)


def is_empty(e: TypeExpr, defs: TypeDefs) -> bool:
    return etype(e, defs).empty


def etype_with(e: TypeExpr, table: Iterable[ConjunctiveTypeExpr], defs: TypeDefs,
               config: Optional[EngineConfig] = None) -> bool:
    """``etype`` with the given conjuncts already assumed empty."""
    defs.check_query(e)
    t = _as_table(table)
    return _run(defs, config or EngineConfig(), lambda s: s.etype(e, t))[1]


def etype_conj(c: ConjunctiveTypeExpr, table: Iterable[ConjunctiveTypeExpr], defs: TypeDefs,
               config: Optional[EngineConfig] = None) -> bool:
    t = _as_table(table)
    return _run(defs, config or EngineConfig(), lambda s: s.etype_conj(c, t))[1]


def eseq(sexpr: SequenceExpr, table: Iterable[ConjunctiveTypeExpr], defs: TypeDefs,
         config: Optional[EngineConfig] = None) -> bool:
    t = _as_table(table)
    return _run(defs, config or EngineConfig(), lambda s: s.eseq(sexpr, t, "?"))[1]


def eseq_conj(cseq: ConjSeq, table: Iterable[ConjunctiveTypeExpr], defs: TypeDefs,
              config: Optional[EngineConfig] = None) -> bool:
    t = _as_table(table)
    return _run(defs, config or EngineConfig(), lambda s: s.eseq_conj(cseq, t))[1]


def witness(e: TypeExpr, defs: TypeDefs, config: Optional[EngineConfig] = None) -> Optional[Term]:
    """A ground term in ``e``, or None when ``e`` is empty."""
    from .oracle import member

    base = config or EngineConfig()
    res = etype(e, defs, EngineConfig(base.dnf_limit, True, base.recursion_limit))
    if res.empty:
        return None
    t = _term_from_etype(res.trace)
    if not member(t, e, defs):
        raise InternalInconsistencyError(f"witness {t} is not a member of {format_expr(e)}")
    return t


def _failed_child(node: TraceNode, kind: str) -> TraceNode:
    for c in node.children:
        if c.kind == kind and not c.pruned and c.verdict is False:
            return c
    raise InternalInconsistencyError(f"no failing {kind} under {node.kind} {node.arg}")


def _term_from_etype(node: TraceNode) -> Term:
    conj_node = _failed_child(node, "etype_conj")
    eseq_node = _failed_child(conj_node, "eseq")
    gamma_node = _failed_child(eseq_node, "eseq_conj")
    f = eseq_node.symbol
    if gamma_node.eq == "epsilon":
        return Term(f)
    return Term(f, tuple(_term_from_etype(c) for c in gamma_node.children))


def subtype(e1: TypeExpr, e2: TypeExpr, defs: TypeDefs,
            config: Optional[EngineConfig] = None) -> bool:
    """Whether every term in ``e1`` is also in ``e2``."""
    return etype(And(e1, Not(e2)), defs, config).empty


def equiv(e1: TypeExpr, e2: TypeExpr, defs: TypeDefs,
          config: Optional[EngineConfig] = None) -> bool:
    return subtype(e1, e2, defs, config) and subtype(e2, e1, defs, config)
