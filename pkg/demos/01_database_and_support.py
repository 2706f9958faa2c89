"""
Databases, coverage and support
===============================

An itemset database is a 0/1 matrix: rows are transactions, columns are
items. This script builds the six-row running example, asks which rows
cover a few itemsets, and mines it by brute force for reference.
"""

from satfim import dataset as ds
from satfim.oracle import apriori, maximal

db = ds.toy_database()
print(db, "density", round(ds.density(db), 3))

# Coverage of {J, N}: transactions 4 and 5 (0-based 3 and 4).
print("coverage {J,N}:", sorted(ds.coverage(db, {"J", "N"})))
print("support {D,H,J}:", ds.support(db, {"D", "H", "J"}))
print("freq {J,N}:", round(ds.freq(db, {"J", "N"}), 4))

# Thresholds may be absolute or relative; 0.5 of six rows is three.
theta = ds.resolve_theta(0.5, db.m)

coll = apriori(db, theta)
print(f"{len(coll)} frequent itemsets at theta={theta}")
for s in maximal(coll):
    print("  maximal", db.format_itemset(s), "support", coll[s])

# %%
# A synthetic database with planted patterns. The realized density is exact
# up to rounding because the background fill places a fixed number of ones.
gen = ds.generate(ds.GeneratorParams(n=15, m=30, density=0.4, gamma=0.5, planted=3, seed=7))
print(gen, "realized density", round(ds.density(gen), 3))
print(ds.dumps_transactions(gen).splitlines()[0])
