import json
import random

import jsonschema
import pytest

from regtype import (
    BOT, EPS, LAMBDA, TOP, And, Atom, ConjSeq, ConjunctiveTypeExpr, DNFLimitError,
    EngineConfig, FunctorIndex, Not, Or, RecursionLimitError, Sequence, arg_sequences,
    build_B, canonical, empty_upto, enumerate_terms, equiv, eseq, eseq_conj, etype,
    etype_conj, etype_with, member, parse_definitions,
    principal_functors, project, rta, simplify, subtype, witness,
)
from regtype.engine import TRACE_SCHEMA, format_seq
from regtype.generators import random_conjunct, random_defs, random_expr

C = ConjunctiveTypeExpr.of
Nat, Even, Odd = Atom("Nat"), Atom("Even"), Atom("Odd")
alpha, beta, theta, sigma, omega, zeta, eta = (
    Atom(n) for n in ("alpha", "beta", "theta", "sigma", "omega", "zeta", "eta"))
PARITY_GAP = And(And(Nat, Not(Even)), Not(Odd))


# F, A, B

def test_principal_functors(ex1):
    assert principal_functors(Nat, ex1) == ["0", "s"]
    assert principal_functors(BOT, ex1) == []
    assert principal_functors(TOP, ex1) == ["0", "s", "nil", "cons"]
    assert principal_functors(Atom("List", (Nat,)), ex1) == ["nil", "cons"]


def test_arg_sequences(ex1):
    assert arg_sequences(Nat, "s", ex1) == (Sequence((Nat,)),)
    assert arg_sequences(Nat, "0", ex1) == (EPS,)
    assert arg_sequences(Nat, "cons", ex1) == ()
    elem = And(Even, Not(Nat))
    lst = Atom("List", (elem,))
    assert arg_sequences(lst, "cons", ex1) == (Sequence((elem, lst)),)
    assert arg_sequences(TOP, "cons", ex1) == (Sequence((TOP, TOP)),)
    assert arg_sequences(BOT, "cons", ex1) == ()


def test_build_B_naturals(ex1):
    c = C([Nat], [Even, Odd])
    assert build_B(c, "0", ex1) == LAMBDA or set(build_B(c, "0", ex1).parts) == {EPS, LAMBDA}
    b = build_B(c, "s", ex1)
    assert set(b.parts) == {Sequence((Nat,)), Sequence((Not(Odd),)), Sequence((Not(Even),))}
    with pytest.raises(ValueError):
        build_B(c, "nil", ex1)


def test_build_B_trees(ex3):
    b = build_B(C([omega], [theta, sigma]), "h", ex3)
    # negative atoms come in canonical order, so sigma precedes theta
    assert format_seq(b) == ("(<omega, zeta> | <omega, eta>) & (<!sigma, top> | <top, !eta>)"
                             " & (<!theta, top> | <top, !zeta>)")


def test_functor_index_memo_matches_recomputation():
    rng = random.Random(3)
    for _ in range(40):
        d = random_defs(rng)
        idx = FunctorIndex(d)
        for _ in range(5):
            a = canonical(random_expr(rng, d, 2))
            if not isinstance(a, Atom):
                continue
            first = (idx.functors(a), {f: idx.args(a, f) for f, _ in d.signature})
            again = (idx.functors(a), {f: idx.args(a, f) for f, _ in d.signature})
            fresh = FunctorIndex(d)
            assert first == again == (fresh.functors(a),
                                      {f: fresh.args(a, f) for f, _ in d.signature})


# etype and friends

def test_etype_examples(ex1, null_defs):
    assert etype(PARITY_GAP, ex1).empty
    assert not etype(Atom("List", (And(Even, Not(Nat)),)), ex1).empty
    assert etype(Atom("Null"), null_defs).empty
    assert etype(BOT, ex1).empty
    assert not etype(Atom("List", (BOT,)), ex1).empty


def test_etype_with_examples(ex1):
    assert etype_with(BOT, [], ex1)
    reordered = And(And(Nat, Not(Odd)), Not(Even))
    assert etype_with(reordered, [C([Nat], [Even, Odd])], ex1)
    assert not etype_with(TOP, [], ex1)


def test_etype_conj_examples(ex1, ex3):
    assert etype_conj(C([Nat], [Nat]), [], ex1)
    assert etype_conj(C([BOT]), [], ex1)
    table1 = [C([alpha], [beta])]
    res = etype(And(omega, And(Not(theta), Not(sigma))), ex3, EngineConfig(trace=True))
    conj = res.trace.children[0]
    assert conj.kind == "etype_conj" and conj.eq == "unfold"
    assert [c.arg for c in conj.children if c.kind == "eseq"][0] == "eps & Lambda"
    assert not etype_conj(C([omega], [theta, sigma]), table1, ex3)


def test_unfold_order_trees(ex3):
    res = etype(And(omega, And(Not(theta), Not(sigma))), ex3, EngineConfig(trace=True))
    conj = res.trace.children[0]
    symbols = [c.eq for c in conj.children]
    assert symbols[0] == "unfold:a"
    assert set(symbols) <= {"unfold:a", "unfold:b", "unfold:h"}


def test_eseq_examples(ex1, ex3):
    from regtype.model import SAnd
    assert eseq(SAnd((EPS, LAMBDA)), [C([Nat], [Even, Odd])], ex1)
    assert not eseq(EPS, [C([Nat], [Even, Odd])], ex1)
    big = build_B(C([omega], [theta, sigma]), "h", ex3)
    table2 = [C([alpha], [beta]), C([omega], [theta, sigma])]
    assert not eseq(big, table2, ex3)


MIXED = ConjSeq((Sequence((omega, zeta)), Sequence((Not(theta), TOP)), Sequence((TOP, Not(eta)))))


def test_eseq_conj_examples(ex1, ex3):
    assert eseq_conj(ConjSeq((EPS, LAMBDA)), [], ex1)
    assert not eseq_conj(ConjSeq((EPS, EPS)), [], ex1)
    table2 = [C([alpha], [beta]), C([omega], [theta, sigma])]
    assert not eseq_conj(MIXED, table2, ex3)


def test_project_examples():
    ordered = [s.items[0] for s in MIXED.conjuncts]
    assert project(MIXED, 1) == And(And(ordered[0], ordered[1]), ordered[2])
    parts = {s.items[1] for s in MIXED.conjuncts}
    assert parts == {zeta, TOP, Not(eta)}
    from regtype import dnf_type
    assert dnf_type(project(MIXED, 1)) == [C([omega], [theta])]
    assert dnf_type(project(MIXED, 2)) == [C([zeta], [eta])]
    assert project(ConjSeq((Sequence((Nat,)),)), 1) == Nat
    with pytest.raises(IndexError):
        project(MIXED, 3)
    with pytest.raises(IndexError):
        project(MIXED, 0)


def test_subtype_and_equiv(ex1, ex3, nat_only):
    assert not subtype(alpha, beta, ex3)
    assert subtype(Even, Nat, ex1)
    assert empty_upto(And(Even, Not(Nat)), nat_only, 6) is None
    assert equiv(Nat, Or(Even, Odd), ex1)
    sym = Or(And(Nat, Not(Or(Even, Odd))), And(Or(Even, Odd), Not(Nat)))
    assert empty_upto(sym, nat_only, 6) is None
    assert not equiv(Even, Nat, ex1)
    assert str(empty_upto(And(Nat, Not(Even)), nat_only, 3)) == "s(0)"
    rng = random.Random(9)
    for _ in range(30):
        d = random_defs(rng)
        e = random_expr(rng, d, 3)
        assert subtype(e, e, d) and equiv(e, e, d)


def test_witness_examples(ex1, ex3):
    assert str(witness(Atom("List", (And(Even, Not(Nat)),)), ex1)) == "nil"
    assert witness(PARITY_GAP, ex1) is None
    t = witness(And(alpha, Not(beta)), ex3)
    assert member(t, alpha, ex3) and not member(t, beta, ex3)


def test_witness_contract_random():
    rng = random.Random(21)
    for _ in range(60):
        d = random_defs(rng)
        e = random_expr(rng, d, 3)
        w = witness(e, d)
        assert (w is None) == etype(e, d).empty
        if w is not None:
            assert member(w, e, d)


# trace

def test_parity_trace_has_table_hit(ex1):
    res = etype(PARITY_GAP, ex1, EngineConfig(trace=True))
    hits = [n for n in res.trace.walk() if n.kind == "etype_conj" and n.eq == "table-hit"]
    assert hits and all(n.verdict is True for n in hits)
    jsonschema.validate(res.trace.to_dict(), TRACE_SCHEMA)


def test_trace_marks_pruned_siblings(ex3):
    res = etype(And(alpha, Not(beta)), ex3, EngineConfig(trace=True))
    pruned = [n for n in res.trace.walk() if n.pruned]
    assert pruned and all(n.verdict is None and not n.children for n in pruned)
    jsonschema.validate(json.loads(json.dumps(res.trace.to_dict())), TRACE_SCHEMA)


def test_determinism(ex3):
    cfg = EngineConfig(trace=True)
    a = etype(And(alpha, Not(beta)), ex3, cfg)
    b = etype(And(alpha, Not(beta)), ex3, cfg)
    assert a.empty == b.empty
    assert a.trace.to_dict() == b.trace.to_dict()
    assert a.stats.to_dict() == b.stats.to_dict()


def test_trace_does_not_change_verdict_or_stats():
    rng = random.Random(17)
    for _ in range(40):
        d = random_defs(rng)
        e = random_expr(rng, d, 3)
        plain = etype(e, d)
        traced = etype(e, d, EngineConfig(trace=True))
        assert plain.empty == traced.empty
        assert plain.stats.to_dict() == traced.stats.to_dict()


# table discipline and subsumption

def test_table_discipline_random():
    rng = random.Random(23)
    for _ in range(80):
        d = simplify(random_defs(rng))
        e = random_expr(rng, d, 3)
        res = etype(e, d, EngineConfig(trace=True))
        relevant = rta(e, d)
        for table in res.tables:
            for prev, nxt in zip(table, table[1:]):
                assert not nxt >= prev  # a subsumed entry would have been a hit
            for entry in table:
                atoms = {a for _, a in entry}
                assert atoms <= relevant
                assert not ({a for s, a in entry if s == "+"} & {a for s, a in entry if s == "-"})
        for n in res.trace.walk():
            if n.children and not n.pruned:
                assert all(c.table_size >= n.table_size for c in n.children)
        assert res.stats.max_table <= 2 ** len(relevant)


def test_subsumption_soundness_random():
    rng = random.Random(29)
    checked = 0
    while checked < 60:
        d = random_defs(rng, max_terms=3000)
        c1 = random_conjunct(rng, d)
        lits = sorted(c1.literals(), key=str)
        keep = [l for l in lits if rng.random() < 0.6]
        pos = [l for l in keep if not isinstance(l, Not)]
        neg = [l.inner for l in keep if isinstance(l, Not)]
        c2 = C(pos, neg)
        if not c1.lits() >= c2.lits():
            continue
        checked += 1
        for t in enumerate_terms(d, 3):
            if member(t, c1.to_expr(), d):
                assert member(t, c2.to_expr(), d)


# limits

def test_limits(ex1):
    with pytest.raises(RecursionLimitError):
        etype(PARITY_GAP, ex1, EngineConfig(recursion_limit=3))
    with pytest.raises(DNFLimitError):
        etype(Or(Nat, Even), ex1, EngineConfig(dnf_limit=3))
    with pytest.raises(ValueError):
        EngineConfig(dnf_limit=0)


def test_deep_recursion_does_not_crash():
    # a chain of 300 constructors each one step below the next
    lines = ["type T0 = a;"] + [f"type T{i} = f(T{i - 1});" for i in range(1, 300)]
    d = parse_definitions("\n".join(lines))
    assert not etype(Atom("T299"), d).empty
    assert str(witness(Atom("T3"), d)) == "f(f(f(a)))"
    with pytest.raises(RecursionLimitError):
        etype(Atom("T299"), d, EngineConfig(recursion_limit=100))


def test_zero_rule_constructor_is_empty():
    d = parse_definitions("type E; type A = a | f(E);")
    assert etype(Atom("E"), d).empty
    assert str(witness(Atom("A"), d)) == "a"
    assert subtype(Atom("A"), Atom("A"), d)
