"""Seeded random definitions, expressions, conjuncts and conjunctive sequences.

Signatures are drawn from a few small templates so that exhaustive term
enumeration stays cheap; ``max_terms`` caps the number of terms (or term
tuples) a caller will have to enumerate.
"""
from __future__ import annotations

import random
from typing import Optional

from .model import (
    BOT, EPS, LAMBDA, TOP, And, Atom, ConjSeq, ConstructorSet, DefinitionError,
    Fn, Not, Or, Param, Sequence, Signature, TypeDefs, TypeExpr, TypeRule,
)
from .normalize import ConjunctiveTypeExpr, simplify

SIGNATURES = (
    (("a", 0), ("b", 0), ("f", 1)),
    (("a", 0), ("b", 0), ("f", 1), ("k", 1)),
    (("a", 0), ("g", 2)),
    (("a", 0), ("f", 1), ("g", 2)),
)


def _count(sig, depth: int) -> int:
    n = 0
    for _ in range(depth + 1):
        n = sum(n ** a for _, a in sig)
    return n


def random_signature(rng: random.Random, depth: int = 4, max_terms: int = 40_000,
                     power: int = 1) -> Signature:
    """A template signature whose term count at ``depth``, raised to ``power``,
    stays within ``max_terms``."""
    fitting = [s for s in SIGNATURES if _count(s, depth) ** power <= max_terms]
    return Signature(rng.choice(fitting))


def random_defs(rng: random.Random, *, simplified: bool = True,
                signature: Optional[Signature] = None, max_ctors: int = 4,
                max_params: int = 2, max_rules: int = 3, depth: int = 4,
                max_terms: int = 40_000) -> TypeDefs:
    """Random valid definitions (retrying until validation passes)."""
    while True:
        sig = signature or random_signature(rng, depth, max_terms)
        n = rng.randint(1, max_ctors)
        ctors = [(f"C{i}", rng.randint(0, max_params)) for i in range(n)]
        if not any(a == 0 for _, a in ctors):
            ctors[0] = (ctors[0][0], 0)
        rules = []
        for name, arity in ctors:
            params = ("x", "y")[:arity]
            count = rng.choice([0] + [1, 2, 3][:max_rules] * 3)
            for _ in range(count):
                rules.append(TypeRule(name, params, _random_body(rng, sig, ctors, params,
                                                                 simplified)))
        try:
            defs = TypeDefs(sig, ConstructorSet(tuple(ctors)), tuple(rules),
                            simplified=simplified)
            simplify(defs)  # nested recursion can make simplification diverge
            return defs
        except DefinitionError:
            continue


def _random_body(rng, sig, ctors, params, simplified):
    if not simplified and rng.random() < 0.15:
        name, arity = rng.choice(ctors)
        return Atom(name, tuple(_pattern_arg(rng, ctors, params, 1) for _ in range(arity)))
    f, k = rng.choice(list(sig))
    if simplified:
        return Fn(f, tuple(_simple_arg(rng, ctors, params) for _ in range(k)))
    return Fn(f, tuple(_body_arg(rng, sig, ctors, params, 2) for _ in range(k)))


def _simple_arg(rng, ctors, params):
    usable = [(c, a) for c, a in ctors if a == 0 or params]
    if params and rng.random() < 0.3:
        return Param(rng.choice(params))
    name, arity = rng.choice(usable)
    return Atom(name, tuple(Param(rng.choice(params)) for _ in range(arity)))


def _pattern_arg(rng, ctors, params, depth):
    """A constructor argument inside a rule body: parameters and atoms only."""
    if params and (depth <= 0 or rng.random() < 0.4):
        return Param(rng.choice(params))
    choices = [(c, a) for c, a in ctors if depth > 0 or a == 0]
    name, arity = rng.choice(choices)
    return Atom(name, tuple(_pattern_arg(rng, ctors, params, depth - 1) for _ in range(arity)))


def _body_arg(rng, sig, ctors, params, depth):
    r = rng.random()
    if depth > 0 and r < 0.3:
        f, k = rng.choice(list(sig))
        return Fn(f, tuple(_body_arg(rng, sig, ctors, params, depth - 1) for _ in range(k)))
    return _pattern_arg(rng, ctors, params, 1)


def random_expr(rng: random.Random, defs: TypeDefs, depth: int = 4) -> TypeExpr:
    """A random parameter-free query expression of nesting depth at most ``depth``."""
    ctors = [(c, a) for c, a in defs.constructors if not c.startswith("_")]
    r = rng.random()
    if depth <= 0 or r < 0.25:
        choices = [(c, a) for c, a in ctors if a == 0] or ctors
        pick = rng.random()
        if pick < 0.08:
            return TOP
        if pick < 0.14:
            return BOT
        name, arity = rng.choice(choices if depth <= 0 else ctors)
        return Atom(name, tuple(random_expr(rng, defs, depth - 1) for _ in range(arity)))
    if r < 0.5:
        name, arity = rng.choice(ctors)
        return Atom(name, tuple(random_expr(rng, defs, depth - 1) for _ in range(arity)))
    if r < 0.65:
        return Not(random_expr(rng, defs, depth - 1))
    op = And if r < 0.85 else Or
    return op(random_expr(rng, defs, depth - 1), random_expr(rng, defs, depth - 1))


def random_atom(rng: random.Random, defs: TypeDefs, depth: int = 2):
    ctors = [(c, a) for c, a in defs.constructors if not c.startswith("_")]
    name, arity = rng.choice(ctors)
    return Atom(name, tuple(random_expr(rng, defs, depth - 1) for _ in range(arity)))


def random_conjunct(rng: random.Random, defs: TypeDefs, depth: int = 2) -> ConjunctiveTypeExpr:
    pos = [random_atom(rng, defs, depth) for _ in range(rng.randint(1, 2))]
    if rng.random() < 0.2:
        pos = [TOP]
    neg = [random_atom(rng, defs, depth) for _ in range(rng.randint(0, 2))]
    return ConjunctiveTypeExpr.of(pos, neg)


def random_conjseq(rng: random.Random, defs: TypeDefs, max_dim: int = 3,
                   depth: int = 2) -> ConjSeq:
    k = rng.randint(0, max_dim)
    seqs = []
    for _ in range(rng.randint(1, 3)):
        if k == 0:
            seqs.append(rng.choice([EPS, EPS, LAMBDA]))
        else:
            seqs.append(Sequence(tuple(random_expr(rng, defs, depth) for _ in range(k))))
    return ConjSeq(tuple(seqs))


def random_sequences(rng: random.Random, defs: TypeDefs, k: int, depth: int = 2) -> list[Sequence]:
    """Up to three sequences of dimension ``k``; includes Lambda for k = 0."""
    out = []
    for _ in range(rng.randint(0, 3)):
        if k == 0:
            out.append(rng.choice([EPS, LAMBDA]))
        else:
            out.append(Sequence(tuple(random_expr(rng, defs, depth) for _ in range(k))))
    return out
