"""Emptiness, inclusion and equivalence of regular types with set operators."""
from .engine import (
    EngineConfig, FunctorIndex, InternalInconsistencyError, RecursionLimitError,
    Result, Stats, TraceNode, arg_sequences, build_B, equiv, eseq, eseq_conj,
    etype, etype_conj, etype_with, is_empty, principal_functors, project, subtype,
    witness,
)
from .model import (
    BOT, EPS, LAMBDA, TOP, And, Atom, Bot, ConjSeq, ConstructorSet, DefinitionError,
    ExprError, Fn, Not, Or, Param, RegTypeError, SAnd, Sequence, Signature, SOr,
    Term, Top, TypeDefs, TypeRule,
)
from .normalize import (
    ConjunctiveTypeExpr, DNFLimitError, LimitError, canonical, dnf_seq, dnf_type,
    push_neg, rta, simplify, tlta,
)
from .oracle import (
    CrossCheckReport, count_terms, cross_check, empty_upto, enumerate_terms, member,
    tuple_member,
)
from .syntax import (
    ParseError, format_defs, format_expr, format_term, parse_definitions,
    parse_term, parse_type_expr,
)

__version__ = "0.1.0"
