import pytest

from regtype import (
    EPS, LAMBDA, TOP, Atom, ConjSeq, ConstructorSet, DefinitionError, ExprError,
    Fn, Param, Sequence, Signature, Term, TypeDefs, TypeRule,
)
from regtype.model import conj, disj, seq_dimension, SAnd, SOr, substitute, And, Or, BOT


def test_signature_needs_constant():
    with pytest.raises(DefinitionError):
        Signature((("f", 1),))
    with pytest.raises(DefinitionError):
        Signature((("a", 0), ("a", 1)))
    sig = Signature((("a", 0), ("f", 1)))
    assert sig.arity("f") == 1 and "a" in sig and len(sig) == 2


def test_constructor_names():
    with pytest.raises(DefinitionError):
        ConstructorSet((("top", 0),))
    with pytest.raises(DefinitionError):
        ConstructorSet((("A", 0), ("A", 1)))


def _defs(rules, ctors=(("A", 0),), simplified=False):
    return TypeDefs(Signature((("a", 0), ("f", 1))), ConstructorSet(ctors), tuple(rules),
                    simplified)


def test_names_disjoint():
    with pytest.raises(DefinitionError, match="both"):
        TypeDefs(Signature((("a", 0),)), ConstructorSet((("a", 0),)), ())


def test_type_preserving():
    with pytest.raises(DefinitionError, match="head"):
        _defs([TypeRule("L", ("x",), Fn("f", (Param("y"),)))], (("L", 1),))


def test_arity_checked():
    with pytest.raises(DefinitionError, match="arity"):
        _defs([TypeRule("A", (), Fn("f", ()))])
    with pytest.raises(DefinitionError):
        _defs([TypeRule("A", (), Fn("f", (Atom("A", (TOP,)),)))])


def test_set_operators_rejected_in_bodies():
    with pytest.raises(DefinitionError, match="not allowed"):
        _defs([TypeRule("A", (), Fn("f", (And(Atom("A"), Atom("A")),)))])


def test_simplified_flag_enforced():
    with pytest.raises(DefinitionError, match="simplified"):
        _defs([TypeRule("A", (), Fn("f", (Fn("f", (Atom("A"),)),)))], simplified=True)
    ok = _defs([TypeRule("A", (), Fn("f", (Atom("A"),)))], simplified=True)
    assert ok.simplified


def test_check_query_and_term():
    d = _defs([TypeRule("A", (), Fn("f", (Atom("A"),)))])
    d.check_query(Atom("A"))
    with pytest.raises(ExprError):
        d.check_query(Atom("B"))
    with pytest.raises(ExprError):
        d.check_query(Param("x"))
    with pytest.raises(ExprError):
        d.check_term(Term("f"))
    with pytest.raises(ExprError):
        d.check_term(Term("g"))
    d.check_term(Term("f", (Term("a"),)))


def test_sequences():
    assert EPS.dimension == 0 and LAMBDA.dimension == 0 and EPS != LAMBDA
    with pytest.raises(ValueError):
        Sequence((TOP,), True)
    with pytest.raises(ValueError):
        ConjSeq(())
    with pytest.raises(ValueError):
        ConjSeq((EPS, Sequence((TOP,))))
    assert seq_dimension(SAnd((Sequence((TOP, TOP)), SOr((Sequence((BOT, TOP)),))))) == 2
    with pytest.raises(ValueError):
        seq_dimension(SAnd((EPS, Sequence((TOP,)))))


def test_conj_disj_helpers():
    assert conj([]) == TOP and disj([]) == BOT
    assert conj([Atom("A"), Atom("B"), Atom("C")]) == And(And(Atom("A"), Atom("B")), Atom("C"))
    assert disj([Atom("A"), Atom("B")]) == Or(Atom("A"), Atom("B"))


def test_substitute():
    body = Fn("cons", (Param("a"), Atom("List", (Param("a"),))))
    assert substitute(body, {"a": Atom("Nat")}) == Fn("cons", (Atom("Nat"), Atom("List", (Atom("Nat"),))))


def test_term_height():
    assert Term("a").height == 0
    assert Term("g", (Term("h", (Term("a"), Term("b"))),)).height == 2
