"""Blocking clauses added after each model.

A blocking clause is a tuple of ``(item, positive)`` pairs over item indices;
transaction literals never appear in it, since several transaction
assignments cannot exist for one itemset under the coverage clauses and
blocking them only multiplies searches.
"""

from __future__ import annotations

import logging
from itertools import combinations
from typing import Iterable, Optional

log = logging.getLogger(__name__)

SIMPLE = "simple"
SUBSETS_EXPLICIT = "subsets_explicit"
SUBSETS_COMPACT = "subsets_compact"
SUPERSETS_EXPLICIT = "supersets_explicit"
SUPERSETS_COMPACT = "supersets_compact"

PRIMAL_KINDS = (SIMPLE, SUBSETS_EXPLICIT, SUBSETS_COMPACT)
DUAL_KINDS = (SUPERSETS_EXPLICIT, SUPERSETS_COMPACT)
KINDS = PRIMAL_KINDS + DUAL_KINDS

DEFAULT_EXPLICIT_LIMIT = 4096


class EnumerationExhausted(Exception):
    """The compact blocking clause would be empty: nothing is left to find."""


def negation(itemset: frozenset, alphabet: Iterable[int]) -> tuple:
    """Clause excluding exactly ``itemset`` (over item literals)."""
    return tuple((i, i not in itemset) for i in alphabet)


def blocking(kind: str, found: Iterable[int], alphabet: Iterable[int],
             blocked: Optional[set] = None, limit: int = DEFAULT_EXPLICIT_LIMIT) -> list:
    """Blocking clauses for itemset ``found``.

    ``blocked`` is the run's record of itemsets already excluded by explicit
    clauses; explicit kinds skip those and add the new ones. When an explicit
    expansion would exceed ``limit`` clauses the compact clause is returned
    instead.
    """
    found = frozenset(found)
    alphabet = sorted(alphabet)
    if not found <= set(alphabet):
        raise ValueError("found itemset is not over the alphabet")
    rest = [i for i in alphabet if i not in found]

    if kind == SIMPLE:
        return [negation(found, alphabet)]

    if kind == SUBSETS_COMPACT:
        if not rest:
            raise EnumerationExhausted("found itemset is the whole alphabet")
        return [tuple((i, True) for i in rest)]

    if kind == SUPERSETS_COMPACT:
        if not found:
            raise EnumerationExhausted("found itemset is empty")
        return [tuple((i, False) for i in sorted(found))]

    if kind == SUBSETS_EXPLICIT:
        if 2 ** len(found) - 1 > limit:
            log.warning("%d subsets exceed the explicit limit %d; using compact clause",
                        2 ** len(found) - 1, limit)
            return blocking(SUBSETS_COMPACT, found, alphabet)
        members = sorted(found)
        group = (frozenset(c) for k in range(len(members), 0, -1)
                 for c in combinations(members, k))
    elif kind == SUPERSETS_EXPLICIT:
        if 2 ** len(rest) > limit:
            log.warning("%d supersets exceed the explicit limit %d; using compact clause",
                        2 ** len(rest), limit)
            return blocking(SUPERSETS_COMPACT, found, alphabet)
        group = (found | frozenset(c) for k in range(len(rest) + 1)
                 for c in combinations(rest, k))
    else:
        raise ValueError(f"unknown blocking kind {kind!r}")

    out = []
    for itemset in group:
        if blocked is not None:
            if itemset in blocked:
                continue
            blocked.add(itemset)
        out.append(negation(itemset, alphabet))
    return out


def excludes(clause: tuple, itemset: frozenset) -> bool:
    """True when ``clause`` is falsified by the assignment selecting ``itemset``."""
    return not any((i in itemset) == positive for i, positive in clause)


def format_clause(clause: tuple, labels) -> str:
    return "(" + " ∨ ".join(("" if pos else "¬") + labels[i] for i, pos in clause) + ")"
