"""
Blocking clauses
================

After each model the enumerator adds clauses that forbid finding the same
itemset again, and optionally everything it implies: its subsets when it is
frequent, its supersets when it is infrequent.
"""

from satfim import enumeration as en

labels = ("A", "B", "C", "D")
found = {0, 2}  # {A, C}

for kind in en.KINDS:
    clauses = en.blocking(kind, found, range(4))
    print(f"{kind:20s}", " ∧ ".join(en.format_clause(c, labels) for c in clauses))

# %%
# Explicit forms grow exponentially. Past the limit the compact clause is
# used instead and a warning is logged.
import logging
logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
big = en.blocking(en.SUBSETS_EXPLICIT, range(14), range(16))
print(len(big), "clause(s) after fallback")
