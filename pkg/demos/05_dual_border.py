"""
Mining the infrequent side
==========================

The dual encoding asks for itemsets whose support is below theta. Blocking
each one's supersets leaves the minimal infrequent itemsets, the negative
border, and the frequent collection is everything that avoids it.
"""

from satfim.dataset import toy_database
from satfim.oracle import minimal_infrequent, verify
from satfim.search import mine_dual

db = toy_database()
out = mine_dual(db, 3)
print(len(out.found), "infrequent itemsets visited,", len(out.border), "on the border")
print("border:", " ".join(db.format_itemset(b) for b in out.border[:8]), "...")
print("matches brute force:", set(out.border) == set(minimal_infrequent(db, 3)))
print("recovered frequent collection:", verify(out, db, 3))
