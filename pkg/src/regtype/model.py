"""Terms, type expressions, sequences and type definitions.

Every value here is immutable.  Validation happens at construction time so a
``TypeDefs`` that exists is well formed: arities agree, rules are type
preserving, and the signature has a constant.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union


class RegTypeError(Exception):
    """Base class for every error raised by this package."""


class DefinitionError(RegTypeError):
    """A set of type definitions is malformed."""


class ExprError(RegTypeError):
    """A type expression or term does not fit the definitions it is used with."""


RESERVED_WORDS = frozenset({"type", "top", "bot", "signature"})
AUX_PREFIX = "_aux"


# ---------------------------------------------------------------------------
# ground terms


@dataclass(frozen=True)
class Term:
    root: str
    args: tuple[Term, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.root
        return f"{self.root}({','.join(str(a) for a in self.args)})"

    @property
    def height(self) -> int:
        if not self.args:
            return 0
        return 1 + max(a.height for a in self.args)


# ---------------------------------------------------------------------------
# type expressions
#
# Top, Bot, Atom, And, Or and Not make up query expressions.  Param and Fn
# only ever occur in rule bodies: Param is a type parameter and Fn a function
# symbol applied to body patterns (as in ``Even = s(s(Even))``).


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


TOP = Top()
BOT = Bot()


@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple[TypeExpr, ...] = ()


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Fn:
    symbol: str
    args: tuple[TypeExpr, ...] = ()


@dataclass(frozen=True)
class And:
    left: TypeExpr
    right: TypeExpr


@dataclass(frozen=True)
class Or:
    left: TypeExpr
    right: TypeExpr


@dataclass(frozen=True)
class Not:
    inner: TypeExpr


TypeExpr = Union[Top, Bot, Atom, Param, Fn, And, Or, Not]
TypeAtom = Union[Top, Bot, Atom]


def is_atom(e: TypeExpr) -> bool:
    return isinstance(e, (Top, Bot, Atom))


def conj(parts: Iterable[TypeExpr]) -> TypeExpr:
    """Left-nested conjunction of ``parts``; the empty conjunction is top."""
    result = None
    for p in parts:
        result = p if result is None else And(result, p)
    return TOP if result is None else result


def disj(parts: Iterable[TypeExpr]) -> TypeExpr:
    """Left-nested disjunction of ``parts``; the empty disjunction is bot."""
    result = None
    for p in parts:
        result = p if result is None else Or(result, p)
    return BOT if result is None else result


def subexprs(e: TypeExpr) -> Iterator[TypeExpr]:
    yield e
    if isinstance(e, (Atom, Fn)):
        for a in e.args:
            yield from subexprs(a)
    elif isinstance(e, (And, Or)):
        yield from subexprs(e.left)
        yield from subexprs(e.right)
    elif isinstance(e, Not):
        yield from subexprs(e.inner)


def params_of(e: TypeExpr) -> list[str]:
    """Parameter names in ``e`` in order of first occurrence."""
    seen: dict[str, None] = {}
    for s in subexprs(e):
        if isinstance(s, Param):
            seen.setdefault(s.name)
    return list(seen)


def substitute(e: TypeExpr, env: Mapping[str, TypeExpr]) -> TypeExpr:
    """Replace every ``Param`` named in ``env``."""
    if isinstance(e, Param):
        return env.get(e.name, e)
    if isinstance(e, Atom):
        return Atom(e.name, tuple(substitute(a, env) for a in e.args))
    if isinstance(e, Fn):
        return Fn(e.symbol, tuple(substitute(a, env) for a in e.args))
    if isinstance(e, And):
        return And(substitute(e.left, env), substitute(e.right, env))
    if isinstance(e, Or):
        return Or(substitute(e.left, env), substitute(e.right, env))
    if isinstance(e, Not):
        return Not(substitute(e.inner, env))
    return e


def expr_height(e: TypeExpr) -> int:
    """Nesting depth of atoms (and Fn patterns); set operators do not count."""
    if isinstance(e, (Atom, Fn)):
        return 1 + max((expr_height(a) for a in e.args), default=0)
    if isinstance(e, (And, Or)):
        return max(expr_height(e.left), expr_height(e.right))
    if isinstance(e, Not):
        return expr_height(e.inner)
    return 0


# ---------------------------------------------------------------------------
# sequences


@dataclass(frozen=True)
class Sequence:
    """A tuple of type expressions.

    The empty tuple comes in two flavours: ``EPS`` denotes the set holding
    only the empty tuple, ``LAMBDA`` denotes nothing.
    """

    items: tuple[TypeExpr, ...] = ()
    is_lambda: bool = False

    def __post_init__(self):
        if self.is_lambda and self.items:
            raise ValueError("Lambda carries no items")

    @property
    def dimension(self) -> int:
        return len(self.items)


EPS = Sequence()
LAMBDA = Sequence((), True)


@dataclass(frozen=True)
class SAnd:
    parts: tuple[SequenceExpr, ...]


@dataclass(frozen=True)
class SOr:
    parts: tuple[SequenceExpr, ...]


SequenceExpr = Union[Sequence, SAnd, SOr]


def seq_dimension(s: SequenceExpr) -> int:
    """Dimension of a sequence expression; raises if it is not uniform."""
    if isinstance(s, Sequence):
        return s.dimension
    dims = {seq_dimension(p) for p in s.parts}
    if len(dims) != 1:
        raise ValueError(f"mixed sequence dimensions {sorted(dims)}")
    return dims.pop()


@dataclass(frozen=True)
class ConjSeq:
    """A conjunction of sequences of one common dimension."""

    conjuncts: tuple[Sequence, ...]

    def __post_init__(self):
        if not self.conjuncts:
            raise ValueError("a conjunctive sequence needs at least one sequence")
        if len({s.dimension for s in self.conjuncts}) != 1:
            raise ValueError("mixed sequence dimensions in conjunction")

    @property
    def dimension(self) -> int:
        return self.conjuncts[0].dimension


# ---------------------------------------------------------------------------
# definitions


@dataclass(frozen=True)
class Signature:
    """Function symbols with arities, kept in declaration order."""

    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [n for n, _ in self.symbols]
        if len(set(names)) != len(names):
            raise DefinitionError("duplicate function symbol in signature")
        if any(a < 0 for _, a in self.symbols):
            raise DefinitionError("negative arity")
        if not any(a == 0 for _, a in self.symbols):
            raise DefinitionError("the signature has no constant")

    def __contains__(self, name: str) -> bool:
        return name in self.arities

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def arities(self) -> dict[str, int]:
        return dict(self.symbols)

    def arity(self, name: str) -> int:
        return self.arities[name]


@dataclass(frozen=True)
class ConstructorSet:
    constructors: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [n for n, _ in self.constructors]
        if len(set(names)) != len(names):
            raise DefinitionError("duplicate type constructor")
        for n in names:
            if n in RESERVED_WORDS:
                raise DefinitionError(f"{n!r} is reserved")

    def __contains__(self, name: str) -> bool:
        return name in self.arities

    def __iter__(self):
        return iter(self.constructors)

    def __len__(self) -> int:
        return len(self.constructors)

    @property
    def arities(self) -> dict[str, int]:
        return dict(self.constructors)

    def arity(self, name: str) -> int:
        return self.arities[name]


@dataclass(frozen=True)
class TypeRule:
    """``name(params) -> body``.

    In a validated rule the body is either an ``Fn`` (the usual case) or an
    ``Atom`` (an alias rule, only legal before simplification).
    """

    name: str
    params: tuple[str, ...]
    body: Union[Fn, Atom]

    @property
    def root(self) -> str:
        return self.body.symbol if isinstance(self.body, Fn) else self.body.name

    @property
    def is_alias(self) -> bool:
        return isinstance(self.body, Atom)


@dataclass(frozen=True)
class TypeDefs:
    signature: Signature
    constructors: ConstructorSet
    rules: tuple[TypeRule, ...]
    simplified: bool = False
    _by_name: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        by_name: dict[str, list[TypeRule]] = {c: [] for c, _ in self.constructors}
        for r in self.rules:
            if r.name not in by_name:
                raise DefinitionError(f"rule for undeclared constructor {r.name!r}")
            by_name[r.name].append(r)
        object.__setattr__(self, "_by_name", {k: tuple(v) for k, v in by_name.items()})
        _validate(self)

    def rules_for(self, name: str) -> tuple[TypeRule, ...]:
        try:
            return self._by_name[name]
        except KeyError:
            raise ExprError(f"unknown type constructor {name!r}") from None

    def check_query(self, e: TypeExpr) -> None:
        """Raise ``ExprError`` unless ``e`` is a parameter-free expression over
        the declared constructors."""
        for s in subexprs(e):
            if isinstance(s, Param):
                raise ExprError(f"parameter {s.name!r} in a query expression")
            if isinstance(s, Fn):
                raise ExprError(f"function symbol {s.symbol!r} in a type expression")
            if isinstance(s, Atom):
                if s.name not in self.constructors:
                    raise ExprError(f"unknown type constructor {s.name!r}")
                if len(s.args) != self.constructors.arity(s.name):
                    raise ExprError(
                        f"{s.name} expects {self.constructors.arity(s.name)} "
                        f"argument(s), got {len(s.args)}")

    def check_term(self, t: Term) -> None:
        arities = self.signature.arities
        stack = [t]
        while stack:
            s = stack.pop()
            if s.root not in arities:
                raise ExprError(f"unknown function symbol {s.root!r}")
            if len(s.args) != arities[s.root]:
                raise ExprError(f"{s.root} expects {arities[s.root]} argument(s)")
            stack.extend(s.args)


def _validate(defs: TypeDefs) -> None:
    sig = defs.signature.arities
    ctors = defs.constructors.arities
    clash = sorted(set(sig) & set(ctors))
    if clash:
        raise DefinitionError(f"names used as both function symbol and constructor: {clash}")
    for name in sig:
        if name in RESERVED_WORDS:
            raise DefinitionError(f"{name!r} is reserved")

    for r in defs.rules:
        if len(set(r.params)) != len(r.params):
            raise DefinitionError(f"repeated parameter in head of {r.name}")
        if len(r.params) != ctors[r.name]:
            raise DefinitionError(f"{r.name} declared with {ctors[r.name]} parameter(s)")
        if not isinstance(r.body, (Fn, Atom)):
            raise DefinitionError(f"body of {r.name} must be rooted at a symbol")
        _check_body(defs, r, r.body, top=True, under_atom=False)
        if defs.simplified:
            if not isinstance(r.body, Fn):
                raise DefinitionError(f"alias rule for {r.name} in simplified definitions")
            for a in r.body.args:
                ok = isinstance(a, Param) or (
                    isinstance(a, Atom) and all(isinstance(x, Param) for x in a.args))
                if not ok:
                    raise DefinitionError(f"rule for {r.name} is not in simplified form")
    _check_alias_recursion(defs)


def _check_body(defs, rule, e, top, under_atom):
    sig = defs.signature.arities
    ctors = defs.constructors.arities
    if isinstance(e, Param):
        if e.name not in rule.params:
            raise DefinitionError(
                f"parameter {e.name!r} does not occur in the head of {rule.name}")
        return
    if isinstance(e, Fn):
        if under_atom:
            raise DefinitionError(
                f"function symbol {e.symbol!r} inside a constructor argument in {rule.name}")
        if e.symbol not in sig:
            raise DefinitionError(f"unknown function symbol {e.symbol!r}")
        if len(e.args) != sig[e.symbol]:
            raise DefinitionError(f"arity mismatch for {e.symbol!r} in {rule.name}")
        for a in e.args:
            _check_body(defs, rule, a, False, False)
        return
    if isinstance(e, Atom):
        if e.name not in ctors:
            raise DefinitionError(f"unknown type constructor {e.name!r}")
        if len(e.args) != ctors[e.name]:
            raise DefinitionError(f"arity mismatch for {e.name!r} in {rule.name}")
        for a in e.args:
            _check_body(defs, rule, a, False, True)
        return
    raise DefinitionError(f"set operators, top and bot are not allowed in rule bodies ({rule.name})")


def _check_alias_recursion(defs: TypeDefs) -> None:
    # An alias chain that comes back to a constructor with different arguments
    # would make unfolding diverge.
    for c, arity in defs.constructors:
        start = Atom(c, tuple(Param(f"#{i}") for i in range(arity)))
        stack = [(start, {c: start})]
        while stack:
            atom, seen = stack.pop()
            for r in defs.rules_for(atom.name):
                if not r.is_alias:
                    continue
                nxt = substitute(r.body, dict(zip(r.params, atom.args)))
                prev = seen.get(nxt.name)
                if prev is not None:
                    if prev != nxt:
                        raise DefinitionError(
                            f"alias recursion through {nxt.name} changes its arguments")
                    continue
                stack.append((nxt, {**seen, nxt.name: nxt}))
