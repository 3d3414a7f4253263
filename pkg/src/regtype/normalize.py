"""Rewriting: simplified definitions, normal forms, push, tlta and rta."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .model import (
    AUX_PREFIX, BOT, EPS, LAMBDA, TOP, And, Atom, Bot, ConjSeq, ConstructorSet,
    DefinitionError, Fn, Not, Or, Param, RegTypeError, SAnd, Sequence,
    SequenceExpr, SOr, Top, TypeAtom, TypeDefs, TypeExpr, TypeRule, conj,
    expr_height, params_of, seq_dimension, substitute,
)
from .syntax import format_expr

DEFAULT_DNF_LIMIT = 10**6


class LimitError(RegTypeError):
    """A configured resource limit was exceeded; no verdict was reached."""


class DNFLimitError(LimitError):
    pass


def sort_key(e: TypeExpr) -> str:
    return format_expr(e)


def seq_key(s: Sequence) -> tuple:
    return (s.is_lambda, tuple(sort_key(e) for e in s.items))


# ---------------------------------------------------------------------------
# canonical atoms


def canonical(e: TypeExpr) -> TypeExpr:
    """Canonical form: no double negation, ``&``/``|`` flattened, deduplicated
    and sorted.  Denotation is unchanged."""
    if isinstance(e, Atom):
        return Atom(e.name, tuple(canonical(a) for a in e.args))
    if isinstance(e, Not):
        inner = canonical(e.inner)  # may itself collapse to a negation
        return inner.inner if isinstance(inner, Not) else Not(inner)
    if isinstance(e, (And, Or)):
        kind = type(e)
        operands: dict[str, TypeExpr] = {}
        for op in _flatten(e, kind):
            c = canonical(op)
            for piece in (_flatten(c, kind) if isinstance(c, kind) else (c,)):
                operands.setdefault(sort_key(piece), piece)
        ordered = [operands[k] for k in sorted(operands)]
        result = ordered[0]
        for x in ordered[1:]:
            result = kind(result, x)
        return result
    return e


def _flatten(e: TypeExpr, kind) -> list[TypeExpr]:
    out, stack = [], [e]
    while stack:
        x = stack.pop()
        if isinstance(x, kind):
            stack.append(x.right)
            stack.append(x.left)
        else:
            out.append(x)
    return out


# ---------------------------------------------------------------------------
# conjunctive type expressions


@dataclass(frozen=True)
class ConjunctiveTypeExpr:
    """``pos[0] & ... & !neg[0] & ...`` with literal sets.

    ``pos`` is never empty; top is only kept in ``pos`` when it is the sole
    positive literal.
    """

    pos: frozenset
    neg: frozenset

    def __post_init__(self):
        if not self.pos:
            raise ValueError("pos must be nonempty")

    @classmethod
    def of(cls, pos, neg=()) -> ConjunctiveTypeExpr:
        pos = frozenset(pos) - {TOP}
        return cls(pos or frozenset({TOP}), frozenset(neg))

    def lits(self) -> frozenset:
        """The literal set used for subsumption.  Top is dropped since
        ``top & C`` and ``C`` denote the same set."""
        return frozenset(("+", a) for a in self.pos if a != TOP) | \
            frozenset(("-", a) for a in self.neg)

    def atoms(self) -> frozenset:
        return self.pos | self.neg

    def literals(self) -> list[TypeExpr]:
        return sorted(self.pos, key=sort_key) + [Not(a) for a in sorted(self.neg, key=sort_key)]

    def to_expr(self) -> TypeExpr:
        return conj(self.literals())

    def key(self) -> tuple:
        return (tuple(sorted(sort_key(a) for a in self.pos)),
                tuple(sorted(sort_key(a) for a in self.neg)))

    def __str__(self) -> str:
        return " & ".join(format_expr(l) for l in self.literals())


def dnf_type(e: TypeExpr, limit: int = DEFAULT_DNF_LIMIT) -> list[ConjunctiveTypeExpr]:
    """Disjunctive normal form of a parameter-free expression, as a sorted,
    duplicate-free list of conjuncts.

    Atoms are canonicalised.  ``!top`` becomes ``bot`` and ``!bot`` becomes
    ``top``.  Conjuncts containing bot or a clashing pair are kept.
    """
    memo: dict = {}
    raw = _dnf(e, False, memo, limit)
    result = {ConjunctiveTypeExpr.of(p, n) for p, n in raw}
    return sorted(result, key=ConjunctiveTypeExpr.key)


def _dnf(e, negated, memo, limit):
    key = (e, negated)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(e, Top):
        res = {(frozenset({BOT}), frozenset())} if negated else {(frozenset(), frozenset())}
    elif isinstance(e, Bot):
        res = {(frozenset(), frozenset())} if negated else {(frozenset({BOT}), frozenset())}
    elif isinstance(e, Atom):
        a = canonical(e)
        res = {(frozenset(), frozenset({a}))} if negated else {(frozenset({a}), frozenset())}
    elif isinstance(e, Not):
        res = _dnf(e.inner, not negated, memo, limit)
    elif isinstance(e, (And, Or)):
        left = _dnf(e.left, negated, memo, limit)
        right = _dnf(e.right, negated, memo, limit)
        if isinstance(e, And) != negated:
            res = {(p1 | p2, n1 | n2) for (p1, n1), (p2, n2) in product(left, right)}
        else:
            res = left | right
        size = sum(len(p) + len(n) + 1 for p, n in res)
        if size > limit:
            raise DNFLimitError(f"normal form exceeds {limit} literals")
    else:
        raise TypeError(f"not a query expression: {e!r}")
    res = frozenset(res)
    memo[key] = res
    return res


# ---------------------------------------------------------------------------
# sequences


def all_top(k: int) -> Sequence:
    return Sequence((TOP,) * k) if k else EPS


def push_neg(seqs, k: int) -> SequenceExpr:
    """A negation-free sequence expression for the complement of the union
    of ``seqs`` (all of dimension ``k``)."""
    seqs = list(seqs)
    if any(s.dimension != k for s in seqs):
        raise ValueError(f"dimension mismatch: expected {k}")
    if not seqs:
        return all_top(k)
    parts = [_push_one(s) for s in seqs]
    return parts[0] if len(parts) == 1 else SAnd(tuple(parts))


def _push_one(s: Sequence) -> SequenceExpr:
    if s.dimension == 0:
        return EPS if s.is_lambda else LAMBDA
    k = s.dimension
    alts = tuple(
        Sequence(tuple(Not(e) if i == l else TOP for i in range(k)))
        for l, e in enumerate(s.items))
    return alts[0] if k == 1 else SOr(alts)


def dnf_seq(sexpr: SequenceExpr, limit: int = DEFAULT_DNF_LIMIT) -> list[ConjSeq]:
    """Distribute a negation-free sequence expression into a sorted list of
    conjunctive sequence expressions."""
    seq_dimension(sexpr)
    raw = _dnf_seq(sexpr, limit)
    out = {tuple(sorted(c, key=seq_key)) for c in raw}
    return [ConjSeq(c) for c in sorted(out, key=lambda c: [seq_key(s) for s in c])]


def _dnf_seq(sexpr, limit) -> set[frozenset]:
    if isinstance(sexpr, Sequence):
        return {frozenset({sexpr})}
    subs = [_dnf_seq(p, limit) for p in sexpr.parts]
    if isinstance(sexpr, SOr):
        return set().union(*subs)
    acc = {frozenset()}
    for sub in subs:
        acc = {a | b for a in acc for b in sub}
        if sum(len(c) for c in acc) > limit:
            raise DNFLimitError(f"sequence normal form exceeds {limit} sequences")
    return acc


# ---------------------------------------------------------------------------
# relevant atoms


def tlta(e) -> set:
    """Atoms of ``e`` not nested inside another atom (top and bot left out).
    Accepts a type expression or a ``Sequence``."""
    if isinstance(e, Sequence):
        out = set()
        for item in e.items:
            out |= tlta(item)
        return out
    out, stack = set(), [e]
    while stack:
        x = stack.pop()
        if isinstance(x, Atom):
            out.add(x)
        elif isinstance(x, (And, Or)):
            stack += [x.left, x.right]
        elif isinstance(x, Not):
            stack.append(x.inner)
    return out


def instantiate(rule: TypeRule, args) -> tuple[TypeExpr, ...]:
    """Argument expressions of ``rule``'s body after binding its parameters."""
    env = dict(zip(rule.params, args))
    return tuple(substitute(a, env) for a in rule.body.args)


def rta(e: TypeExpr, defs: TypeDefs) -> set:
    """Relevant type atoms of ``e``: the least set containing the canonical
    top-level atoms of ``e`` and closed under unfolding rules."""
    if not defs.simplified:
        raise ValueError("rta needs simplified definitions")
    seen = set(tlta(canonical(e)))
    work = list(seen)
    while work:
        atom = work.pop()
        for rule in defs.rules_for(atom.name):
            for arg in instantiate(rule, atom.args):
                for a in tlta(arg):
                    if a not in seen:
                        seen.add(a)
                        work.append(a)
    return seen


def atom_height(a: TypeAtom) -> int:
    return expr_height(a)


# ---------------------------------------------------------------------------
# simplification

MAX_AUX = 10_000
# slack over the largest input body argument before hoisted patterns count as runaway
PATTERN_SLACK = 16


def _size(e: TypeExpr) -> int:
    if isinstance(e, (Atom, Fn)):
        return 1 + sum(_size(a) for a in e.args)
    if isinstance(e, (And, Or)):
        return 1 + _size(e.left) + _size(e.right)
    if isinstance(e, Not):
        return 1 + _size(e.inner)
    return 1


def is_simple_arg(a: TypeExpr) -> bool:
    return isinstance(a, Param) or (
        isinstance(a, Atom) and all(isinstance(x, Param) for x in a.args))


def simplify(defs: TypeDefs) -> TypeDefs:
    """Equivalent definitions in simplified form.

    Alias rules are unfolded and nested arguments are moved into fresh
    constructors ``_aux0``, ``_aux1``, ... (numbered in traversal order).
    """
    if defs.simplified:
        return defs
    return _Simplifier(defs).run()


class _Simplifier:
    def __init__(self, defs: TypeDefs):
        self.defs = defs
        self.unfolded: dict[str, list[tuple[str, tuple]]] = {}
        self.aux_by_pattern: dict[TypeExpr, str] = {}
        self.aux: list[tuple[str, tuple[str, ...], list]] = []
        args = [a for r in defs.rules for a in r.body.args]
        self.max_height = 2 * max(map(expr_height, args), default=0) + PATTERN_SLACK
        self.max_size = 4 * max(map(_size, args), default=0) + 4 * PATTERN_SLACK

    def run(self) -> TypeDefs:
        new_rules: list[TypeRule] = []
        for name, _ in self.defs.constructors:
            params = self._params(name)
            head = Atom(name, tuple(Param(p) for p in params))
            for f, args in self._unfold(head):
                new_rules.append(TypeRule(name, params, Fn(f, tuple(self._hoist(a) for a in args))))
        # aux constructors are discovered while hoisting; process them in order
        i = 0
        aux_rules: list[TypeRule] = []
        while i < len(self.aux):
            name, params, bodies = self.aux[i]
            for f, args in bodies:
                aux_rules.append(TypeRule(name, params, Fn(f, tuple(self._hoist(a) for a in args))))
            i += 1
        ctors = list(self.defs.constructors) + [(n, len(p)) for n, p, _ in self.aux]
        return TypeDefs(self.defs.signature, ConstructorSet(tuple(ctors)),
                        tuple(_dedupe(new_rules + aux_rules)), simplified=True)

    def _params(self, name: str) -> tuple[str, ...]:
        rules = self.defs.rules_for(name)
        if rules:
            return rules[0].params
        return tuple(f"p{i}" for i in range(self.defs.constructors.arity(name)))

    def _unfold(self, atom: Atom, chain=frozenset()) -> list[tuple[str, tuple]]:
        """Function-rooted bodies of ``atom``, following alias rules."""
        out = []
        for rule in self.defs.rules_for(atom.name):
            env = dict(zip(rule.params, atom.args))
            body = substitute(rule.body, env)
            if isinstance(body, Fn):
                out.append((body.symbol, body.args))
            elif body not in chain:
                out.extend(self._unfold(body, chain | {atom}))
        return out

    def _hoist(self, a: TypeExpr) -> TypeExpr:
        if is_simple_arg(a):
            return a
        if expr_height(a) > self.max_height or _size(a) > self.max_size:
            raise DefinitionError(
                "definitions cannot be simplified: nested constructor arguments keep growing")
        names = params_of(a)
        renamed = substitute(a, {n: Param(f"#{i}") for i, n in enumerate(names)})
        name = self.aux_by_pattern.get(renamed)
        if name is None:
            if len(self.aux) >= MAX_AUX:
                raise DefinitionError(
                    "definitions cannot be simplified: nested constructor arguments keep growing")
            name = f"{AUX_PREFIX}{len(self.aux)}"
            self.aux_by_pattern[renamed] = name
            params = tuple(f"x{i}" for i in range(len(names)))
            pattern = substitute(renamed, {f"#{i}": Param(p) for i, p in enumerate(params)})
            if isinstance(pattern, Fn):
                bodies = [(pattern.symbol, pattern.args)]
            else:
                bodies = self._unfold(pattern)
            self.aux.append((name, params, bodies))
        return Atom(name, tuple(Param(n) for n in names))


def _dedupe(rules: list[TypeRule]) -> list[TypeRule]:
    seen, out = set(), []
    for r in rules:
        if r not in seen:
            seen.add(r)
            out.append(r)
    return out
