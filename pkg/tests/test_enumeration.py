import logging
from itertools import combinations

import pytest

from satfim import enumeration as en

LABELS = ("A", "B", "C", "D")
AC = frozenset({0, 2})


def fmt(clauses):
    return [en.format_clause(c, LABELS) for c in clauses]


def all_subsets(n):
    return [frozenset(c) for k in range(n + 1) for c in combinations(range(n), k)]


def test_simple_example():
    assert fmt(en.blocking(en.SIMPLE, AC, range(4))) == ["(¬A ∨ B ∨ ¬C ∨ D)"]


def test_subsets_explicit_example():
    assert fmt(en.blocking(en.SUBSETS_EXPLICIT, AC, range(4))) == [
        "(¬A ∨ B ∨ ¬C ∨ D)", "(¬A ∨ B ∨ C ∨ D)", "(A ∨ B ∨ ¬C ∨ D)"]


def test_subsets_compact_example():
    assert fmt(en.blocking(en.SUBSETS_COMPACT, AC, range(4))) == ["(B ∨ D)"]


def test_supersets_explicit_example():
    assert fmt(en.blocking(en.SUPERSETS_EXPLICIT, AC, range(4))) == [
        "(¬A ∨ B ∨ ¬C ∨ D)", "(¬A ∨ ¬B ∨ ¬C ∨ D)", "(¬A ∨ B ∨ ¬C ∨ ¬D)", "(¬A ∨ ¬B ∨ ¬C ∨ ¬D)"]


def test_supersets_compact_follows_rule():
    assert fmt(en.blocking(en.SUPERSETS_COMPACT, AC, range(4))) == ["(¬A ∨ ¬C)"]


def test_exhausted_signals():
    with pytest.raises(en.EnumerationExhausted):
        en.blocking(en.SUBSETS_COMPACT, range(4), range(4))
    with pytest.raises(en.EnumerationExhausted):
        en.blocking(en.SUPERSETS_COMPACT, (), range(4))


def test_unknown_kind_and_foreign_item():
    with pytest.raises(ValueError):
        en.blocking("cubes", AC, range(4))
    with pytest.raises(ValueError):
        en.blocking(en.SIMPLE, {7}, range(4))


def _survivors(clauses, n):
    return {s for s in all_subsets(n) if not any(en.excludes(c, s) for c in clauses)}


@pytest.mark.parametrize("n", range(1, 7))
def test_exactness_all_kinds(n):
    universe = set(all_subsets(n))
    for found in all_subsets(n):
        assert _survivors(en.blocking(en.SIMPLE, found, range(n)), n) == universe - {found}
        subs = {s for s in universe if s <= found}
        sups = {s for s in universe if s >= found}
        if found != frozenset(range(n)):
            assert _survivors(en.blocking(en.SUBSETS_COMPACT, found, range(n)), n) == universe - subs
        if found:
            assert _survivors(en.blocking(en.SUPERSETS_COMPACT, found, range(n)), n) == universe - sups
        explicit_subs = _survivors(en.blocking(en.SUBSETS_EXPLICIT, found, range(n)), n)
        assert explicit_subs == universe - (subs - {frozenset()})
        assert _survivors(en.blocking(en.SUPERSETS_EXPLICIT, found, range(n)), n) == universe - sups


def test_explicit_skips_already_blocked():
    blocked = set()
    first = en.blocking(en.SUBSETS_EXPLICIT, {0, 1}, range(4), blocked)
    second = en.blocking(en.SUBSETS_EXPLICIT, {0, 2}, range(4), blocked)
    assert len(first) == 3
    assert len(second) == 2  # {0} was already blocked


def test_explicit_limit_falls_back_with_warning(caplog):
    with caplog.at_level(logging.WARNING):
        clauses = en.blocking(en.SUBSETS_EXPLICIT, range(5), range(8), limit=16)
    assert clauses == en.blocking(en.SUBSETS_COMPACT, range(5), range(8))
    assert "explicit limit" in caplog.text
    with caplog.at_level(logging.WARNING):
        clauses = en.blocking(en.SUPERSETS_EXPLICIT, {0}, range(8), limit=16)
    assert clauses == [((0, False),)]


def test_blocking_clauses_mention_items_only():
    for kind in en.KINDS:
        for clause in en.blocking(kind, {1}, range(3)):
            assert all(0 <= i < 3 for i, _ in clause)
