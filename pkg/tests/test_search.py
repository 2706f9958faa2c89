from dataclasses import replace

import numpy as np
import pytest

from satfim import enumeration as en
from satfim.dataset import ItemsetDatabase, from_transactions, support, toy_database
from satfim.encoder import EncodeOptions
from satfim.oracle import apriori, maximal, minimal_infrequent, verify
from satfim.search import (SearchTimeout, expand_maximal, frequent_from_border, mine,
                           mine_cmg, mine_dual, mine_ld, mine_lsm, mine_simple)

from _support import random_database


@pytest.fixture
def toy():
    return toy_database()


def oracle_maximal(db, theta):
    return set(maximal(apriori(db, theta)))


def test_simple_finds_each_frequent_itemset_once(toy):
    out = mine_simple(toy, 3)
    assert len(out.found) == len(apriori(toy, 3)) == 13
    assert len(set(out.itemsets)) == len(out.itemsets)
    assert all(sup == support(toy, s) >= 3 for s, sup in out.found)
    assert verify(out, toy, 3).equal


def test_theta_equal_to_m_gives_empty_result(toy):
    out = mine_simple(toy, 6)
    assert out.found == [] and out.stats.sat == 0 and out.stats.unsat == 1


def test_simple_with_subset_blocking_recovers_collection(toy):
    for kind in (en.SUBSETS_EXPLICIT, en.SUBSETS_COMPACT):
        assert verify(mine_simple(toy, 2, kind), toy, 2).equal


def test_lsm_iterations_and_order(toy):
    out = mine_lsm(toy, 3)
    assert out.iterations == len(oracle_maximal(toy, 3))
    sizes = [len(s) for s in out.itemsets]
    assert sizes == sorted(sizes, reverse=True)
    assert set(out.itemsets) == oracle_maximal(toy, 3)


def test_lsm_single_maximal_itemset():
    db = from_transactions([list("ABCD")] * 3 + [list("AB")])
    out = mine_lsm(db, 3)
    assert out.iterations == 1 and out.itemsets == [frozenset(range(4))]


def test_lsm_nothing_frequent():
    db = from_transactions([["a"], ["b"], ["c"]])
    out = mine_lsm(db, 2)
    assert out.iterations == 0


@pytest.mark.parametrize("mode", ["incremental", "fixed"])
def test_cmg_alpha_count(toy, mode):
    out = mine_cmg(toy, 3, mode)
    assert out.stats.alpha == out.iterations == len(oracle_maximal(toy, 3))
    assert set(out.itemsets) == oracle_maximal(toy, 3)


def test_cmg_nothing_frequent():
    db = from_transactions([["a"], ["b"], ["c"]])
    out = mine_cmg(db, 2, trace=True)
    assert out.trace == [("alpha", None)] and out.stats.alpha == 0


def test_cmg_rejects_superset_blocking(toy):
    with pytest.raises(ValueError):
        mine_cmg(toy, 3, blocking=en.SUPERSETS_COMPACT)


def test_cmg_trace_structure():
    db = from_transactions([l.split() for l in ("A B E", "A B E", "C E", "C E", "D")])
    out = mine_cmg(db, 2, "incremental", trace=True, item_polarity=False)
    abe, ce = db.itemset("ABE"), db.itemset("CE")
    learned = [(ev[1][0], out.trace[k - 1][1]) for k, ev in enumerate(out.trace) if ev[0] == "learn"]
    names = {en.format_clause(c, db.items): s for c, s in learned}
    assert names["(C ∨ D)"] == abe
    assert names["(A ∨ B ∨ D)"] == ce
    # every committed itemset was proven maximal by an unsatisfiable beta-search
    for k, ev in enumerate(out.trace):
        if ev[0] == "learn":
            assert out.trace[k - 1][0] == "beta" and out.trace[k - 1][2] is None


def test_ld_counts(toy):
    out = mine_ld(toy, 3)
    assert out.stats.unsat == toy.n
    assert out.stats.sat == len(oracle_maximal(toy, 3))
    assert set(out.itemsets) == oracle_maximal(toy, 3)


def test_ld_three_item_trace():
    db = from_transactions([["a", "b"], ["a", "b"], ["c"]])
    out = mine_ld(db, 2)
    assert (out.stats.unsat, out.stats.sat) == (3, 1)
    assert out.itemsets == [frozenset({0, 1})]


def test_ld_first_length_is_unsat_on_toy(toy):
    out = mine_ld(toy, 3)
    assert all(len(s) < toy.n for s in out.itemsets)


def test_ld_requires_removal_mode(toy):
    with pytest.raises(ValueError):
        mine_ld(toy, 3, options=EncodeOptions())


def test_expand_maximal_examples(toy):
    db = from_transactions([["A", "B"], ["A", "B"]])
    assert set(expand_maximal([frozenset({0, 1})], db)) == {
        frozenset({0}), frozenset({1}), frozenset({0, 1})}
    assert expand_maximal([], toy) == {}
    assert expand_maximal(maximal(apriori(toy, 3)), toy) == apriori(toy, 3).entries


def test_dual_border_on_toy(toy):
    out = mine_dual(toy, 3)
    assert frozenset({toy.index("F")}) in out.border
    assert set(out.border) == set(minimal_infrequent(toy, 3))
    assert verify(out, toy, 3).equal


def test_dual_all_ones_immediate_unsat():
    db = ItemsetDatabase(("a", "b", "c"), np.ones((3, 3), dtype=bool))
    out = mine_dual(db, 1)
    assert out.found == [] and out.stats.unsat == 1 and out.stats.sat == 0


@pytest.mark.parametrize("seed", range(10))
def test_dual_complement_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    db = random_database(rng, int(rng.integers(2, 7)), int(rng.integers(2, 9)), 0.5)
    theta = int(rng.integers(1, db.m + 1))
    for kind in en.DUAL_KINDS:
        out = mine_dual(db, theta, kind)
        assert frequent_from_border(out.border, db) == apriori(db, theta).entries


@pytest.mark.parametrize("seed", range(6))
def test_all_strategies_agree_with_oracle(seed):
    rng = np.random.default_rng(100 + seed)
    db = random_database(rng, int(rng.integers(3, 9)), int(rng.integers(5, 15)), 0.45)
    theta = int(rng.integers(2, db.m // 2 + 2))
    tops = oracle_maximal(db, theta)
    for strategy in ("simple", "lsm", "cmg", "ld", "dual"):
        out = mine(db, theta, strategy)
        assert verify(out, db, theta).equal, strategy
        assert len(set(out.itemsets)) == len(out.itemsets)
        if strategy in ("lsm", "cmg", "ld"):
            assert set(out.itemsets) == tops
            assert out.iterations == len(tops)


def test_reduced_and_positive_options_change_nothing(toy):
    ref = apriori(toy, 2).entries
    for opts in (EncodeOptions(reduced=True), EncodeOptions(positive_only=True),
                 EncodeOptions(reduced=True, positive_only=True, removal_mode="fixed")):
        for strategy in ("simple", "cmg", "ld"):
            o = opts
            if strategy == "ld" and o.removal_mode == "none":
                o = replace(o, removal_mode="incremental")
            assert mine(toy, 2, strategy, options=o).collection(toy) == ref


def test_relative_theta(toy):
    assert mine(toy, 0.5, "cmg").theta == 3


def test_timeout_marks_partial_result(toy):
    out = mine_simple(toy, 2, deadline=0.0)
    assert out.status == "timeout" and out.found == []


def test_unknown_strategy(toy):
    with pytest.raises(ValueError):
        mine(toy, 3, "eclat")
    with pytest.raises(ValueError):
        mine(toy, 3, "dual", options=EncodeOptions(removal_mode="fixed"))
    with pytest.raises(ValueError):
        mine_simple(toy, 3, en.SUPERSETS_COMPACT)


def test_search_timeout_is_an_exception():
    assert issubclass(SearchTimeout, Exception)
