"""
Four ways to enumerate
======================

``simple`` lists every frequent itemset. ``lsm`` repeatedly maximizes the
itemset size. ``cmg`` grows a seed until it cannot grow. ``ld`` walks the
lengths from n down to 1. The last three report maximal itemsets only, and
each finds every maximal itemset exactly once.
"""

from satfim import enumeration as en
from satfim.dataset import from_transactions, toy_database
from satfim.oracle import verify
from satfim.search import mine, mine_cmg

db = toy_database()
theta = 3
for strategy in ("simple", "lsm", "cmg", "ld"):
    out = mine(db, theta, strategy)
    st = out.stats
    print(f"{strategy:6s} found={len(out.found):2d} alpha={st.alpha} beta={st.beta} "
          f"sat={st.sat} unsat={st.unsat} verify={verify(out, db, theta)}")

# %%
# A CMG trace on five items. With negative item polarity the first
# alpha-search returns a small seed and the beta-searches grow it.
small = from_transactions([r.split() for r in ("A B E", "A B E", "C E", "C E", "D")])
out = mine_cmg(small, 2, "incremental", trace=True, item_polarity=False)
for event in out.trace:
    kind, *rest = event
    if kind == "alpha":
        print("alpha ->", small.format_itemset(rest[0]) if rest[0] is not None else "unsat")
    elif kind == "temporary":
        print("  temporary", en.format_clause(rest[0], small.items))
    elif kind == "beta":
        grown = small.format_itemset(rest[1]) if rest[1] is not None else "unsat"
        print("  beta", small.format_itemset(rest[0]), "->", grown)
    else:
        print("  learn", [en.format_clause(c, small.items) for c in rest[0]])
