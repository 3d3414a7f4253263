"""
A non-inclusion between tree types
==================================

alpha and beta look alike; a left-skewed tree with mixed leaves tells them apart.
"""
from pathlib import Path

from regtype import format_defs, member, parse_definitions, parse_term, parse_type_expr
from regtype import simplify, subtype, witness

defs = parse_definitions((Path(__file__).parent.parent / "data" / "ex3.rt").read_text())
print(format_defs(simplify(defs)))

alpha, beta = parse_type_expr("alpha", defs), parse_type_expr("beta", defs)
print("alpha <= beta:", subtype(alpha, beta, defs))

t = witness(parse_type_expr("alpha & !beta", defs), defs)
print("engine witness:", t, member(t, alpha, defs), member(t, beta, defs))

# a hand-picked term with the same property
u = parse_term("g(h(h(a,b),a))")
print("by hand:", u, member(u, alpha, defs), member(u, beta, defs))
