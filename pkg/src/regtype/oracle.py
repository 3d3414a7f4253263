"""Brute-force semantics: membership of ground terms, bounded enumeration,
and a cross-check of the engine against both.

Nothing here uses the normaliser or the engine (except ``cross_check``,
which exists to compare against them).  Membership works directly on
unsimplified definitions.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import product
from typing import Iterator, Optional, Sequence as Seq

from .model import (
    And, Atom, Bot, Fn, Not, Or, Param, SAnd, Sequence, SequenceExpr, SOr,
    Term, Top, TypeDefs, TypeExpr, substitute,
)


def member(t: Term, e: TypeExpr, defs: TypeDefs, cache: Optional[dict] = None) -> bool:
    """Whether ``t`` belongs to the set denoted by ``e``."""
    defs.check_term(t)
    return _member(t, e, defs, {} if cache is None else cache)


def _member(t: Term, e: TypeExpr, defs: TypeDefs, cache: dict) -> bool:
    if isinstance(e, Top):
        return True
    if isinstance(e, Bot):
        return False
    if isinstance(e, And):
        return _member(t, e.left, defs, cache) and _member(t, e.right, defs, cache)
    if isinstance(e, Or):
        return _member(t, e.left, defs, cache) or _member(t, e.right, defs, cache)
    if isinstance(e, Not):
        return not _member(t, e.inner, defs, cache)
    if isinstance(e, Atom):
        key = (t, e)
        hit = cache.get(key)
        if hit is None:
            hit = cache[key] = _member_atom(t, e, defs, cache, frozenset())
        return hit
    raise TypeError(f"not a ground type expression: {e!r}")


def _member_atom(t, atom, defs, cache, chain) -> bool:
    for rule in defs.rules_for(atom.name):
        body = substitute(rule.body, dict(zip(rule.params, atom.args)))
        if isinstance(body, Fn):
            if _match(t, body, defs, cache):
                return True
        elif body not in chain and body != atom:
            # alias rule: same term, another atom
            if _member_atom(t, body, defs, cache, chain | {atom}):
                return True
    return False


def _match(t: Term, pattern: TypeExpr, defs, cache) -> bool:
    if isinstance(pattern, Fn):
        return (t.root == pattern.symbol and len(t.args) == len(pattern.args)
                and all(_match(a, p, defs, cache) for a, p in zip(t.args, pattern.args)))
    if isinstance(pattern, Param):
        raise TypeError(f"unbound parameter {pattern.name}")
    return _member(t, pattern, defs, cache)


def tuple_member(ts: Seq[Term], s: SequenceExpr, defs: TypeDefs,
                 cache: Optional[dict] = None) -> bool:
    """Componentwise membership of a tuple of terms in a sequence expression."""
    cache = {} if cache is None else cache
    if isinstance(s, Sequence):
        if s.is_lambda:
            return False
        if len(ts) != len(s.items):
            raise ValueError("tuple and sequence differ in length")
        return all(_member(t, e, defs, cache) for t, e in zip(ts, s.items))
    if isinstance(s, SAnd):
        return all(tuple_member(ts, p, defs, cache) for p in s.parts)
    if isinstance(s, SOr):
        return any(tuple_member(ts, p, defs, cache) for p in s.parts)
    raise TypeError(f"not a sequence expression: {s!r}")


# ---------------------------------------------------------------------------
# enumeration


def iter_terms(defs: TypeDefs, depth: int) -> Iterator[Term]:
    """All ground terms of height at most ``depth``, lowest layers first.

    Within a layer, symbols come in signature order and argument tuples in
    the order of the earlier layers.
    """
    symbols = list(defs.signature)
    upto: list[Term] = []
    for h in range(depth + 1):
        layer = []
        if h == 0:
            layer = [Term(f) for f, n in symbols if n == 0]
        else:
            previous_max = h - 1
            for f, n in symbols:
                if n == 0:
                    continue
                for args in product(upto, repeat=n):
                    if max(a.height for a in args) == previous_max:
                        layer.append(Term(f, args))
        yield from layer
        upto = upto + layer


def enumerate_terms(defs: TypeDefs, depth: int) -> list[Term]:
    return list(iter_terms(defs, depth))


def count_terms(defs: TypeDefs, depth: int) -> int:
    """Number of terms of height at most ``depth``:  N(d) = sum_f N(d-1)^arity(f)."""
    n = 0
    for _ in range(depth + 1):
        n = sum(n ** a for _, a in defs.signature)
    return n


def empty_upto(e: TypeExpr, defs: TypeDefs, depth: int) -> Optional[Term]:
    """First member of ``e`` of height at most ``depth``, or None if there is none.
    None does not prove emptiness."""
    cache: dict = {}
    for t in iter_terms(defs, depth):
        if _member(t, e, defs, cache):
            return t
    return None


def tuples_upto(defs: TypeDefs, k: int, depth: int) -> Iterator[tuple[Term, ...]]:
    return product(enumerate_terms(defs, depth), repeat=k)


# ---------------------------------------------------------------------------
# cross check


@dataclass
class CrossCheckReport:
    verdict_engine: str  # "empty", "nonempty" or "error: ..."
    verdict_oracle: str  # "nonempty" or "no-member-found"
    witness: Optional[str]
    oracle_witness: Optional[str]
    depth: int
    contradiction: bool
    seed: Optional[int] = None
    note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def cross_check(defs: TypeDefs, e: TypeExpr, depth: int = 4,
                seed: Optional[int] = None) -> CrossCheckReport:
    """Compare the engine's verdict and witness with bounded enumeration."""
    from .engine import InternalInconsistencyError, witness
    from .normalize import LimitError

    found = empty_upto(e, defs, depth)
    oracle_verdict = "nonempty" if found is not None else "no-member-found"
    oracle_w = str(found) if found is not None else None
    try:
        w = witness(e, defs)
    except InternalInconsistencyError as exc:
        return CrossCheckReport("nonempty", oracle_verdict, None, oracle_w, depth, True, seed,
                                f"engine witness failed membership: {exc}")
    except LimitError as exc:
        return CrossCheckReport(f"error: {exc}", oracle_verdict, None, oracle_w, depth, False,
                                seed, "engine limit reached; no comparison")
    if w is None:
        if found is not None:
            return CrossCheckReport("empty", oracle_verdict, None, oracle_w, depth, True, seed,
                                    f"oracle found member {found}")
        return CrossCheckReport("empty", oracle_verdict, None, None, depth, False, seed,
                                f"no member up to height {depth}")
    if found is None and w.height <= depth:
        return CrossCheckReport("nonempty", oracle_verdict, str(w), None, depth, True, seed,
                                "engine witness within depth but enumeration found nothing")
    note = "witness validated" + ("" if found is not None else "; taller than search depth")
    return CrossCheckReport("nonempty", oracle_verdict, str(w), oracle_w, depth, False, seed, note)
