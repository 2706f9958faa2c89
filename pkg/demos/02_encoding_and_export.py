"""
From a database to a pseudo-Boolean formula
===========================================

Each item gets a variable I_i, each transaction a variable T_t. Clauses tie
T_t to "no selected item is missing from row t"; one linear constraint per
item asks that a selected item sit in at least theta selected rows.
"""

from satfim.dataset import toy_database
from satfim.encoder import EncodeOptions, decode, encode, export, ExportError

db = toy_database()

baseline = encode(db, 3)
print("baseline", baseline.counts())
print("frequency constraint for A:", baseline.linear[0])

reduced = encode(db, 3, EncodeOptions(reduced=True))
print("reduced ", reduced.counts())

# The positive-only form rewrites every negated literal as 1 - x, which is
# what tools reading OPB without negation support expect.
pos = encode(db, 3, EncodeOptions(positive_only=True))
print("positive-only", pos.counts())

# %%
# Exports. OPB keeps the linear constraints; DIMACS CNF refuses them.
text = export(encode(db, 3, EncodeOptions(removal_mode="incremental")), "opb")
print("\n".join(text.splitlines()[:3]))
try:
    export(baseline, "cnf")
except ExportError as err:
    print("cnf:", str(err)[:70], "...")

# %%
# Solving and decoding: pin D, H and J and read back the covered rows.
solver = baseline.to_solver()
vm = baseline.varmap
res = solver.solve([vm.items[db.index(c)] for c in "DHJ"])
items, rows = decode(res.model, vm)
print(db.format_itemset(items), "covers rows", sorted(rows))
