"""Brute-force ground truth: levelwise Apriori and a full-lattice scan.

Supports here are counted by scanning matrix rows directly, independently of
the bitmask route used by :mod:`satfim.dataset`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .dataset import ItemsetDatabase


@dataclass
class FrequentCollection:
    entries: dict  # frozenset -> support
    theta: int

    def __len__(self):
        return len(self.entries)

    def __contains__(self, itemset):
        return frozenset(itemset) in self.entries

    def __getitem__(self, itemset):
        return self.entries[frozenset(itemset)]


def _check_theta(db, theta):
    if not 1 <= theta <= db.m:
        raise ValueError(f"theta={theta} outside 1..{db.m}")


def _row_count(matrix: np.ndarray, items) -> int:
    return int(matrix[:, list(items)].all(axis=1).sum())


def apriori(db: ItemsetDatabase, theta: int) -> FrequentCollection:
    """All non-empty itemsets with support >= theta.

    Candidates of size k+1 come from joining frequent k-itemsets that share
    their first k-1 items (sorted order), then pruning any candidate with an
    infrequent k-subset.
    """
    _check_theta(db, theta)
    matrix = db.matrix
    entries = {}
    level = []
    for i in range(db.n):
        s = _row_count(matrix, (i,))
        if s >= theta:
            level.append((i,))
            entries[frozenset((i,))] = s
    while level:
        prev = set(level)
        nxt = []
        for a in range(len(level)):
            for b in range(a + 1, len(level)):
                x, y = level[a], level[b]
                if x[:-1] != y[:-1]:
                    break
                cand = x + (y[-1],)
                if any(sub not in prev for sub in combinations(cand, len(cand) - 1)):
                    continue
                s = _row_count(matrix, cand)
                if s >= theta:
                    nxt.append(cand)
                    entries[frozenset(cand)] = s
        level = nxt
    return FrequentCollection(entries, theta)


def lattice_scan(db: ItemsetDatabase, theta: int) -> FrequentCollection:
    """Second oracle: test every non-empty subset of the alphabet (n <= 20)."""
    _check_theta(db, theta)
    if db.n > 20:
        raise ValueError("full-lattice scan is limited to n <= 20")
    rows = [sum(1 << i for i in range(db.n) if r[i]) for r in db.matrix.tolist()]
    entries = {}
    for mask in range(1, 1 << db.n):
        s = sum(1 for r in rows if r & mask == mask)
        if s >= theta:
            entries[frozenset(i for i in range(db.n) if mask >> i & 1)] = s
    return FrequentCollection(entries, theta)


def maximal(collection) -> list:
    """Entries without a strict superset in the collection, largest first."""
    sets = collection.entries if isinstance(collection, FrequentCollection) else collection
    sets = sorted(sets, key=lambda s: (-len(s), sorted(s)))
    out = []
    for s in sets:
        if not any(s < t for t in out):
            out.append(s)
    return out


def minimal_infrequent(db: ItemsetDatabase, theta: int) -> list:
    """Infrequent itemsets all of whose strict subsets are frequent."""
    freq = apriori(db, theta).entries
    out = []
    candidates = {frozenset((i,)) for i in range(db.n)}
    candidates |= {a | b for a in freq for b in freq if len(a | b) == len(a) + 1 == len(b) + 1}
    for c in candidates:
        if c in freq:
            continue
        if all(c - {i} in freq or len(c) == 1 for i in c):
            out.append(c)
    return sorted(out, key=lambda s: (len(s), sorted(s)))


@dataclass
class VerifyReport:
    missing: list = field(default_factory=list)      # in the reference, not mined
    extra: list = field(default_factory=list)        # mined, not in the reference
    mismatched: list = field(default_factory=list)   # (itemset, expected, got)

    @property
    def equal(self) -> bool:
        return not (self.missing or self.extra or self.mismatched)

    def format(self, labels=None) -> str:
        def name(s):
            keys = sorted(s)
            return "{" + ",".join(labels[i] if labels else str(i) for i in keys) + "}"
        if self.equal:
            return "equal"
        lines = [f"diff: {len(self.missing)} missing, {len(self.extra)} extra, "
                 f"{len(self.mismatched)} support mismatches"]
        lines += [f"missing {name(s)}" for s in self.missing]
        lines += [f"extra {name(s)}" for s in self.extra]
        lines += [f"support {name(s)}: expected {e}, got {g}" for s, e, g in self.mismatched]
        return "\n".join(lines)

    def __str__(self):
        return self.format()


def compare(mined: dict, reference: dict) -> VerifyReport:
    key = lambda s: (len(s), sorted(s))
    report = VerifyReport()
    report.missing = sorted((s for s in reference if s not in mined), key=key)
    report.extra = sorted((s for s in mined if s not in reference), key=key)
    report.mismatched = [(s, reference[s], mined[s]) for s in sorted(mined, key=key)
                         if s in reference and reference[s] != mined[s]]
    return report


def verify(outcome, db: ItemsetDatabase, theta: int) -> VerifyReport:
    """Compare a mining outcome (or an itemset -> support dict) with Apriori."""
    mined = outcome if isinstance(outcome, dict) else outcome.collection(db)
    return compare(mined, apriori(db, theta).entries)
