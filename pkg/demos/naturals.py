"""
Naturals, evens and odds
========================

Emptiness and inclusion checks over Peano numerals and lists.
"""
from pathlib import Path

from regtype import (EngineConfig, etype, equiv, parse_definitions, parse_type_expr,
                     subtype, witness)

defs = parse_definitions((Path(__file__).parent.parent / "data" / "ex1.rt").read_text())
q = lambda text: parse_type_expr(text, defs)

# every natural is even or odd, so this is empty
res = etype(q("Nat & !Even & !Odd"), defs, EngineConfig(trace=True))
print("Nat & !Even & !Odd empty:", res.empty, res.stats.to_dict())

# the loop s -> s -> ... is cut by a table hit
for node in res.trace.walk():
    if node.eq == "table-hit":
        print("  table hit on", node.arg, "with", node.table_size, "entries")

# a list of even non-naturals: only the empty list
print("witness of List(Even & !Nat):", witness(q("List(Even & !Nat)"), defs))
print("witness of List(bot):", witness(q("List(bot)"), defs))

print("Even <= Nat:", subtype(q("Even"), q("Nat"), defs))
print("Nat == Even | Odd:", equiv(q("Nat"), q("Even | Odd"), defs))
print("a term in Nat but not Even:", witness(q("Nat & !Even"), defs))
