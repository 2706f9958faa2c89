"""
Search effort across thresholds
===============================

Sweeping theta on a generated database shows the usual shape: the number of
maximal itemsets (hence of lsm, cmg and ld iterations) rises and then falls,
while the simple enumerator's search count drops steadily as theta grows.
The CSV is the same one ``satfim bench`` writes.
"""

from satfim.bench import sweep, to_csv
from satfim.dataset import GeneratorParams, generate

db = generate(GeneratorParams(n=12, m=40, density=0.4, gamma=0.2, planted=3, seed=0))
records = sweep([("gen", db)], [0.025, 0.05, 0.1, 0.2, 0.3, 0.4], ["simple", "lsm", "cmg", "ld"],
                timeout=30)
print(to_csv(records))

for theta in sorted({r.theta for r in records}):
    row = {r.strategy: r for r in records if r.theta == theta}
    print(f"theta={theta:2d} simple searches={row['simple'].sat + row['simple'].unsat:4d} "
          f"maximal={row['lsm'].maximal:3d}")
