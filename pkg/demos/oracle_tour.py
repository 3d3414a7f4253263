"""
Engine against brute force
==========================

Random definitions and queries, checked against exhaustive enumeration.
"""
import random
from collections import Counter

from regtype import cross_check, format_defs, format_expr
from regtype.generators import random_defs, random_expr

rng = random.Random(7)
tally = Counter()
for i in range(40):
    defs = random_defs(rng, simplified=i % 2 == 0)
    e = random_expr(rng, defs, 3)
    report = cross_check(defs, e, depth=3, seed=i)
    tally[report.verdict_engine] += 1
    if report.contradiction:
        print(format_defs(defs), format_expr(e), report)

print(dict(tally))

# one instance in full
defs = random_defs(rng)
e = random_expr(rng, defs, 3)
print(format_defs(defs))
print(format_expr(e), "->", cross_check(defs, e, 3).to_dict())
