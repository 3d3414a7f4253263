"""Concrete syntax: definitions files, type expressions and ground terms.

Definitions look like::

    # naturals and lists
    type Nat = 0 | s(Nat);
    type List(a) = nil | cons(a, List(a));
    signature a, f/1;

Identifiers declared with ``type`` are constructors; every other identifier
in a rule body is a type parameter (if the rule binds it) or a function
symbol.  In a rule that has parameters, a bare unknown identifier in argument
position is taken as a misspelt parameter unless the same name is used as a
function symbol elsewhere or listed in a ``signature`` statement.

Query expressions use ``top``, ``bot``, ``!``, ``&`` and ``|`` with the usual
precedence (``!`` binds tightest, then ``&``, then ``|``).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .model import (
    AUX_PREFIX, BOT, RESERVED_WORDS, TOP, And, Atom, Bot, ConstructorSet,
    DefinitionError, Fn, Not, Or, Param, RegTypeError, Signature, Term, Top,
    TypeDefs, TypeExpr, TypeRule, substitute,
)


class ParseError(RegTypeError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col

    def __str__(self) -> str:
        return f"line {self.line}, column {self.col}: {self.message}"


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<ident>[A-Za-z0-9_]+)
  | (?P<punct>[()&|!=;,/])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'ident', a punctuation character, or 'eof'
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind == "ident":
            toks.append(_Tok("ident", m.group(), line, pos - line_start + 1))
        elif kind == "punct":
            toks.append(_Tok(m.group(), m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


# Raw syntax trees, before identifiers are resolved.

@dataclass
class _RName:
    name: str
    args: Optional[list]  # None when written without parentheses
    tok: _Tok


@dataclass
class _ROp:
    op: str  # '&', '|', '!', 'top', 'bot'
    operands: list
    tok: _Tok


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[_Tok] = None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[_Tok]:
        t = self.tok
        if t.kind == kind and (text is None or t.text == text):
            return self.advance()
        return None

    def expect(self, kind: str, what: str) -> _Tok:
        t = self.accept(kind)
        if t is None:
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            raise self.error(f"expected {what}, found {found}")
        return t

    def name(self, what: str) -> _Tok:
        t = self.expect("ident", what)
        if t.text in RESERVED_WORDS:
            raise self.error(f"{t.text!r} is a reserved word", t)
        return t

    # texpr ::= and ('|' and)* ; and ::= unary ('&' unary)* ; unary ::= '!' unary | primary
    def texpr(self):
        left = self.conj()
        while (t := self.accept("|")) is not None:
            left = _ROp("|", [left, self.conj()], t)
        return left

    def conj(self):
        left = self.unary()
        while (t := self.accept("&")) is not None:
            left = _ROp("&", [left, self.unary()], t)
        return left

    def unary(self):
        if (t := self.accept("!")) is not None:
            return _ROp("!", [self.unary()], t)
        return self.primary()

    def primary(self):
        if self.accept("(") is not None:
            e = self.texpr()
            self.expect(")", "')'")
            return e
        t = self.tok
        if t.kind == "ident" and t.text in ("top", "bot"):
            self.advance()
            return _ROp(t.text, [], t)
        t = self.name("a type expression")
        return _RName(t.text, self.arglist(), t)

    def arglist(self) -> Optional[list]:
        if self.accept("(") is None:
            return None
        args = [self.texpr()]
        while self.accept(",") is not None:
            args.append(self.texpr())
        self.expect(")", "',' or ')'")
        return args


def _check_ident(tok: _Tok, allow_aux: bool) -> None:
    if not allow_aux and tok.text.startswith(AUX_PREFIX):
        raise ParseError(f"identifiers starting with {AUX_PREFIX!r} are reserved",
                         tok.line, tok.col)


# ---------------------------------------------------------------------------
# definitions


def parse_definitions(text: str, *, allow_aux: bool = False) -> TypeDefs:
    """Parse a definitions document into validated (unsimplified) ``TypeDefs``."""
    p = _Parser(text)
    heads: list[tuple[_Tok, list[_Tok], list]] = []
    sig_decls: list[tuple[_Tok, int]] = []
    while p.tok.kind != "eof":
        kw = p.tok
        if p.accept("ident", "type"):
            name = p.name("a constructor name")
            params = []
            if p.accept("(") is not None:
                params.append(p.name("a parameter name"))
                while p.accept(",") is not None:
                    params.append(p.name("a parameter name"))
                p.expect(")", "',' or ')'")
            alts = []
            if p.accept("=") is not None:
                alts.append(_alt(p))
                while p.accept("|") is not None:
                    alts.append(_alt(p))
            p.accept(";")
            heads.append((name, params, alts))
        elif p.accept("ident", "signature"):
            while True:
                sym = p.name("a function symbol")
                arity = 0
                if p.accept("/") is not None:
                    num = p.expect("ident", "an arity")
                    if not num.text.isdigit():
                        raise p.error("arity must be a non-negative integer", num)
                    arity = int(num.text)
                sig_decls.append((sym, arity))
                if p.accept(",") is None:
                    break
            p.accept(";")
        else:
            raise p.error(f"expected 'type' or 'signature', found {kw.text!r}" if kw.text
                          else "expected a definition")
    return _build_defs(heads, sig_decls, allow_aux)


def _alt(p: _Parser) -> _RName:
    t = p.name("a function symbol or constructor")
    return _RName(t.text, p.arglist(), t)


def _build_defs(heads, sig_decls, allow_aux) -> TypeDefs:
    ctor_arity: dict[str, int] = {}
    for name, params, _ in heads:
        _check_ident(name, allow_aux)
        prev = ctor_arity.setdefault(name.text, len(params))
        if prev != len(params):
            raise ParseError(f"{name.text} declared with {prev} and {len(params)} parameters",
                             name.line, name.col)

    fsym_arity: dict[str, int] = {}
    fsym_tok: dict[str, _Tok] = {}

    def note_fsym(tok: _Tok, arity: int):
        _check_ident(tok, allow_aux)
        if tok.text in ctor_arity:
            raise ParseError(f"{tok.text!r} is used both as a function symbol and a constructor",
                             tok.line, tok.col)
        prev = fsym_arity.setdefault(tok.text, arity)
        fsym_tok.setdefault(tok.text, tok)
        if prev != arity:
            raise ParseError(f"function symbol {tok.text!r} used with arities {prev} and {arity}",
                             tok.line, tok.col)

    # names that are function symbols no matter where they appear
    known: set[str] = {t.text for t, _ in sig_decls}
    for _, _, alts in heads:
        for alt in alts:
            _collect_fsyms(alt, ctor_arity, known, top=True)

    # first appearance order decides signature order
    for sym, arity in sig_decls:
        note_fsym(sym, arity)

    rules = []
    for name, params, alts in heads:
        pnames = [t.text for t in params]
        for t in params:
            _check_ident(t, allow_aux)
            if t.text in ctor_arity:
                raise ParseError(f"parameter {t.text!r} clashes with a constructor", t.line, t.col)
        if len(set(pnames)) != len(pnames):
            raise ParseError(f"repeated parameter in {name.text}", name.line, name.col)
        for alt in alts:
            body = _resolve_body(alt, pnames, ctor_arity, known, note_fsym, top=True,
                                 under_atom=False)
            rules.append(TypeRule(name.text, tuple(pnames), body))

    try:
        return TypeDefs(Signature(tuple(fsym_arity.items())),
                        ConstructorSet(tuple(ctor_arity.items())),
                        tuple(rules))
    except DefinitionError as exc:
        first = heads[0][0] if heads else None
        raise ParseError(str(exc), first.line if first else 1, first.col if first else 1) from None


def _collect_fsyms(node, ctor_arity, known, top):
    if isinstance(node, _RName):
        if node.name not in ctor_arity and (top or node.args is not None):
            known.add(node.name)
        for a in node.args or ():
            _collect_fsyms(a, ctor_arity, known, top=False)
    else:
        for a in node.operands:
            _collect_fsyms(a, ctor_arity, known, top=False)


def _resolve_body(node, params, ctor_arity, known, note_fsym, top, under_atom) -> TypeExpr:
    if isinstance(node, _ROp):
        raise ParseError(f"{node.op!r} is not allowed in a rule body", node.tok.line, node.tok.col)
    tok = node.tok
    args = node.args or []
    if node.name in params and not top:
        if node.args is not None:
            raise ParseError(f"parameter {node.name!r} cannot take arguments", tok.line, tok.col)
        return Param(node.name)
    if node.name in ctor_arity:
        if len(args) != ctor_arity[node.name]:
            raise ParseError(f"{node.name} expects {ctor_arity[node.name]} argument(s), "
                             f"got {len(args)}", tok.line, tok.col)
        return Atom(node.name, tuple(
            _resolve_body(a, params, ctor_arity, known, note_fsym, False, True) for a in args))
    if top and node.name in params:
        raise ParseError(f"rule body cannot be the bare parameter {node.name!r}", tok.line, tok.col)
    if node.args is None and params and node.name not in known:
        raise ParseError(
            f"{node.name!r} is not a parameter of this rule (rules must be type preserving); "
            "list it in a signature statement if it is a constant", tok.line, tok.col)
    if under_atom:
        raise ParseError(f"function symbol {node.name!r} inside a constructor argument",
                         tok.line, tok.col)
    note_fsym(tok, len(args))
    return Fn(node.name, tuple(
        _resolve_body(a, params, ctor_arity, known, note_fsym, False, False) for a in args))


# ---------------------------------------------------------------------------
# queries and terms


def parse_type_expr(text: str, defs: TypeDefs) -> TypeExpr:
    """Parse a parameter-free type expression over the constructors of ``defs``."""
    p = _Parser(text)
    raw = p.texpr()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    param_names = {q for r in defs.rules for q in r.params}
    return _resolve_query(raw, defs, param_names)


def _resolve_query(node, defs: TypeDefs, param_names) -> TypeExpr:
    if isinstance(node, _ROp):
        ops = [_resolve_query(a, defs, param_names) for a in node.operands]
        if node.op == "top":
            return TOP
        if node.op == "bot":
            return BOT
        if node.op == "!":
            return Not(ops[0])
        return And(*ops) if node.op == "&" else Or(*ops)
    tok = node.tok
    args = node.args or []
    if node.name in defs.constructors:
        arity = defs.constructors.arity(node.name)
        if len(args) != arity:
            raise ParseError(f"{node.name} expects {arity} argument(s), got {len(args)}",
                             tok.line, tok.col)
        return Atom(node.name, tuple(_resolve_query(a, defs, param_names) for a in args))
    if node.name in defs.signature:
        raise ParseError(f"{node.name!r} is a function symbol, not a type", tok.line, tok.col)
    if node.name in param_names:
        raise ParseError(f"type parameter {node.name!r} cannot appear in a query",
                         tok.line, tok.col)
    raise ParseError(f"unknown type constructor {node.name!r}", tok.line, tok.col)


def parse_term(text: str, defs: Optional[TypeDefs] = None) -> Term:
    """Parse a ground term such as ``g(h(h(a,b),a))``."""
    p = _Parser(text)

    def term() -> Term:
        t = p.expect("ident", "a function symbol")
        args = []
        if p.accept("(") is not None:
            args.append(term())
            while p.accept(",") is not None:
                args.append(term())
            p.expect(")", "',' or ')'")
        return Term(t.text, tuple(args))

    result = term()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    if defs is not None:
        defs.check_term(result)
    return result


# ---------------------------------------------------------------------------
# printing

_PREC = {Or: 1, And: 2, Not: 3}


def format_expr(e: TypeExpr) -> str:
    """Render ``e`` so that ``parse_type_expr`` gives back the same tree."""
    return _fmt(e, 0)


def _fmt(e: TypeExpr, ctx: int) -> str:
    if isinstance(e, Top):
        return "top"
    if isinstance(e, Bot):
        return "bot"
    if isinstance(e, Param):
        return e.name
    if isinstance(e, (Atom, Fn)):
        name = e.name if isinstance(e, Atom) else e.symbol
        if not e.args:
            return name
        return f"{name}({','.join(_fmt(a, 0) for a in e.args)})"
    prec = _PREC[type(e)]
    if isinstance(e, Not):
        s = "!" + _fmt(e.inner, 3)
    elif isinstance(e, And):
        s = f"{_fmt(e.left, 2)} & {_fmt(e.right, 3)}"
    else:
        s = f"{_fmt(e.left, 1)} | {_fmt(e.right, 2)}"
    return f"({s})" if prec < ctx else s


def format_term(t: Term) -> str:
    return str(t)


def format_defs(defs: TypeDefs) -> str:
    """Render definitions in the definitions-file syntax."""
    syms = ", ".join(n if a == 0 else f"{n}/{a}" for n, a in defs.signature)
    lines = [f"signature {syms};"]
    for name, _ in defs.constructors:
        rules = defs.rules_for(name)
        params = rules[0].params if rules else _default_params(defs, name)
        head = name + (f"({','.join(params)})" if params else "")
        if rules:
            bodies = [substitute(r.body, {q: Param(n) for q, n in zip(r.params, params)})
                      for r in rules]
            lines.append(f"type {head} = " + " | ".join(format_expr(b) for b in bodies) + ";")
        else:
            lines.append(f"type {head};")
    return "\n".join(lines) + "\n"


def _default_params(defs: TypeDefs, name: str) -> tuple[str, ...]:
    return tuple(f"p{i}" for i in range(defs.constructors.arity(name)))
