"""Iterated solving: all frequent itemsets (simple), all maximal frequent
itemsets (lsm, cmg, ld), or the minimal infrequent border (dual).

Every run owns one incremental solver. The empty itemset is always frequent
and never reported; primal runs add the clause ``(I_1 ∨ ... ∨ I_n)`` up front.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Optional

from . import enumeration as en
from .dataset import ItemsetDatabase, resolve_theta, support
from .encoder import EncodeOptions, decode, encode
from .pbsat import SolverConfig

STRATEGIES = ("simple", "lsm", "cmg", "ld", "dual")
MAXIMAL_BLOCKINGS = (en.SUBSETS_EXPLICIT, en.SUBSETS_COMPACT)


class SearchTimeout(Exception):
    pass


@dataclass
class SearchStats:
    alpha: int = 0
    beta: int = 0
    sat: int = 0
    unsat: int = 0
    seconds: float = 0.0
    clauses_added: int = 0

    @property
    def searches(self) -> int:
        return self.sat + self.unsat


@dataclass
class MiningOutcome:
    """What a run found.

    ``found`` lists ``(itemset, support)`` in discovery order; supports are
    read off the model's transaction variables. For dual runs ``found``
    holds infrequent itemsets and ``border`` their minimal elements.
    """

    found: list
    theta: int
    strategy: str
    blocking: str
    maximal_only: bool
    stats: SearchStats = field(default_factory=SearchStats)
    border: list = field(default_factory=list)
    status: str = "ok"
    trace: list = field(default_factory=list)

    @property
    def dual(self) -> bool:
        return self.strategy == "dual"

    @property
    def iterations(self) -> int:
        """Searches that produced an itemset (alpha-searches for cmg)."""
        return self.stats.alpha if self.strategy == "cmg" else self.stats.sat

    @property
    def itemsets(self) -> list:
        return [s for s, _ in self.found]

    def collection(self, db: ItemsetDatabase) -> dict:
        """Full frequent collection (itemset -> support) implied by the run."""
        if self.dual:
            return frequent_from_border(self.border, db)
        return expand_maximal(self.found, db)

    def maximal(self, db: ItemsetDatabase) -> list:
        from .oracle import maximal
        return maximal(self.collection(db))


def expand_maximal(maximals, db: ItemsetDatabase) -> dict:
    """Every non-empty subset of the given itemsets, with supports.

    Accepts bare itemsets or ``(itemset, support)`` pairs; supplied supports
    are kept for those itemsets so a wrong one is still visible downstream.
    """
    out = {}
    given = {}
    for entry in maximals:
        if isinstance(entry, tuple) and len(entry) == 2 and isinstance(entry[0], frozenset):
            given[entry[0]] = entry[1]
            entry = entry[0]
        members = sorted(entry)
        for k in range(1, len(members) + 1):
            for c in combinations(members, k):
                s = frozenset(c)
                if s not in out:
                    out[s] = support(db, s)
    out.update(given)
    return out


def frequent_from_border(border, db: ItemsetDatabase) -> dict:
    """Itemsets containing no border element, levelwise, with supports."""
    border = [frozenset(b) for b in border]
    blocked = lambda s: any(b <= s for b in border)
    level = [(i,) for i in range(db.n) if not blocked(frozenset((i,)))]
    out = {}
    while level:
        for s in level:
            out[frozenset(s)] = support(db, s)
        prev = set(level)
        nxt = []
        for a in range(len(level)):
            for b in range(a + 1, len(level)):
                x, y = level[a], level[b]
                if x[:-1] != y[:-1]:
                    break
                cand = x + (y[-1],)
                if all(sub in prev for sub in combinations(cand, len(cand) - 1)) \
                        and not blocked(frozenset(cand)):
                    nxt.append(cand)
        level = nxt
    return out


class _Run:
    """Solver plus bookkeeping shared by all strategies."""

    def __init__(self, db, theta, options, config, item_polarity, trans_polarity, deadline):
        self.db = db
        self.instance = encode(db, theta, options)
        self.theta = self.instance.theta
        self.vm = self.instance.varmap
        self.solver = self.instance.to_solver(config or SolverConfig())
        for v in self.vm.items:
            self.solver.set_polarity(v, item_polarity)
        for v in self.vm.trans:
            self.solver.set_polarity(v, trans_polarity)
        if not options.dual:
            self.solver.add_clause(self.vm.items)
        self.alpha_assumptions = list(self.vm.aux_n)
        if self.vm.control_y is not None:
            self.alpha_assumptions.append(self.vm.control_y)
        self.stats = SearchStats()
        self.blocked = set()
        self.deadline = deadline
        self.alphabet = range(db.n)
        self.t0 = time.perf_counter()

    def _tick(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SearchTimeout()

    def _count(self, res):
        if res.sat:
            self.stats.sat += 1
        else:
            self.stats.unsat += 1
        return res

    def solve(self, assumptions=None):
        self._tick()
        base = self.alpha_assumptions if assumptions is None else assumptions
        return self._count(self.solver.solve(base))

    def maximize(self):
        self._tick()
        return self._count(self.solver.maximize(self.vm.items, self.alpha_assumptions))

    def decode(self, res):
        items, trans = decode(res.model, self.vm)
        return items, len(trans)

    def lits(self, clause):
        items = self.vm.items
        return [items[i] if pos else -items[i] for i, pos in clause]

    def block(self, kind, itemset):
        try:
            clauses = en.blocking(kind, itemset, self.alphabet, self.blocked)
        except en.EnumerationExhausted:
            clauses = [()]
        for clause in clauses:
            self.solver.add_clause(self.lits(clause))
        self.stats.clauses_added += len(clauses)
        return clauses

    def finish(self, outcome):
        self.stats.seconds = time.perf_counter() - self.t0
        outcome.stats = self.stats
        return outcome


def _prepare(db, theta, options, **changes):
    theta = resolve_theta(theta, db.m)
    options = replace(options or EncodeOptions(), **changes)
    return theta, options


def mine_simple(db: ItemsetDatabase, theta, blocking: str = en.SIMPLE,
                options: Optional[EncodeOptions] = None, config: Optional[SolverConfig] = None,
                item_polarity=True, trans_polarity=False, deadline=None) -> MiningOutcome:
    """Solve, record, block, repeat until unsatisfiable.

    With ``simple`` blocking every frequent itemset is found exactly once;
    with subset blocking the found itemsets generate the collection by
    taking subsets.
    """
    if blocking not in en.PRIMAL_KINDS:
        raise ValueError(f"simple search needs one of {en.PRIMAL_KINDS}, got {blocking!r}")
    theta, options = _prepare(db, theta, options, dual=False)
    run = _Run(db, theta, options, config, item_polarity, trans_polarity, deadline)
    out = MiningOutcome([], run.theta, "simple", blocking, maximal_only=False)
    try:
        while True:
            res = run.solve()
            if not res.sat:
                break
            itemset, sup = run.decode(res)
            out.found.append((itemset, sup))
            run.block(blocking, itemset)
    except SearchTimeout:
        out.status = "timeout"
    return run.finish(out)


def mine_lsm(db: ItemsetDatabase, theta, blocking: str = en.SUBSETS_COMPACT,
             options: Optional[EncodeOptions] = None, config: Optional[SolverConfig] = None,
             item_polarity=True, trans_polarity=False, deadline=None) -> MiningOutcome:
    """Largest-to-shortest: maximize the number of selected items, block
    the optimum's subsets, repeat. One iteration per maximal itemset."""
    if blocking not in MAXIMAL_BLOCKINGS:
        raise ValueError(f"lsm needs subset blocking, got {blocking!r}")
    theta, options = _prepare(db, theta, options, dual=False)
    run = _Run(db, theta, options, config, item_polarity, trans_polarity, deadline)
    out = MiningOutcome([], run.theta, "lsm", blocking, maximal_only=True)
    try:
        while True:
            res = run.maximize()
            if not res.sat:
                break
            itemset, sup = run.decode(res)
            out.found.append((itemset, sup))
            run.block(blocking, itemset)
    except SearchTimeout:
        out.status = "timeout"
    return run.finish(out)


def mine_cmg(db: ItemsetDatabase, theta, removal_mode: Optional[str] = None,
             blocking: str = en.SUBSETS_COMPACT, options: Optional[EncodeOptions] = None,
             config: Optional[SolverConfig] = None, item_polarity=True, trans_polarity=False,
             deadline=None, trace=False) -> MiningOutcome:
    """Constrained monotonic growing.

    An alpha-search finds any unblocked frequent itemset. Beta-searches then
    pin its items (``N_i`` assumed false forces ``I_i``) and demand one more
    item, either through a temporary clause over the remaining items guarded
    by an activation literal (``incremental``) or by assuming ``¬y`` in
    ``y + sum(I) + sum(N) >= n + 1`` (``fixed``). An unsatisfiable
    beta-search proves the current itemset maximal; its subsets are blocked
    and the next alpha-search starts.

    With ``trace=True`` the outcome records events ``("alpha", itemset or
    None)``, ``("temporary", clause)`` (incremental mode only),
    ``("beta", current, grown or None)`` and ``("learn", clauses)``.
    """
    if blocking not in MAXIMAL_BLOCKINGS:
        raise ValueError(f"cmg needs subset blocking, got {blocking!r}")
    opts = options or EncodeOptions()
    mode = removal_mode or (opts.removal_mode if opts.removal_mode != "none" else "incremental")
    if mode not in ("incremental", "fixed"):
        raise ValueError("cmg needs removal_mode 'incremental' or 'fixed'")
    theta, options = _prepare(db, theta, opts, dual=False, removal_mode=mode)
    run = _Run(db, theta, options, config, item_polarity, trans_polarity, deadline)
    vm, solver = run.vm, run.solver
    out = MiningOutcome([], run.theta, "cmg", blocking, maximal_only=True)
    log = out.trace if trace else None
    try:
        while True:
            res = run.solve()
            if not res.sat:
                if log is not None:
                    log.append(("alpha", None))
                break
            run.stats.alpha += 1
            current, sup = run.decode(res)
            if log is not None:
                log.append(("alpha", current))
            while True:
                rest = [i for i in range(db.n) if i not in current]
                temp = tuple((i, True) for i in rest)
                pinned = [-vm.aux_n[i] if i in current else vm.aux_n[i] for i in range(db.n)]
                if mode == "incremental":
                    act = solver.new_activation()
                    solver.add_clause([-act] + run.lits(temp))
                    if log is not None:
                        log.append(("temporary", temp))
                    assumptions = pinned + [act]
                else:
                    assumptions = pinned + [-vm.control_y]
                    act = None
                run.stats.beta += 1
                try:
                    res = run.solve(assumptions)
                finally:
                    if act is not None:
                        solver.release(act)
                if not res.sat:
                    if log is not None:
                        log.append(("beta", current, None))
                    break
                grown, sup = run.decode(res)
                if log is not None:
                    log.append(("beta", current, grown))
                current = grown
            out.found.append((current, sup))
            learned = run.block(blocking, current)
            if log is not None:
                log.append(("learn", tuple(learned)))
    except SearchTimeout:
        out.status = "timeout"
    return run.finish(out)


def mine_ld(db: ItemsetDatabase, theta, blocking: str = en.SUBSETS_COMPACT,
            options: Optional[EncodeOptions] = None, config: Optional[SolverConfig] = None,
            item_polarity=True, trans_polarity=False, deadline=None) -> MiningOutcome:
    """Length decreasing: fix ``|I| = k`` through the ``A_i`` assumptions for
    k = n..1, collecting every unblocked frequent k-itemset at each length.

    Exactly n searches are unsatisfiable (one closing each length); every
    satisfiable one yields a distinct maximal itemset.
    """
    if blocking not in MAXIMAL_BLOCKINGS:
        raise ValueError(f"ld needs subset blocking, got {blocking!r}")
    opts = options or EncodeOptions(removal_mode="incremental")
    if opts.removal_mode == "none":
        raise ValueError("ld relies on the A_i assumption scheme; "
                         "choose removal_mode 'incremental' or 'fixed'")
    theta, options = _prepare(db, theta, opts, dual=False, length_aux=True)
    run = _Run(db, theta, options, config, item_polarity, trans_polarity, deadline)
    vm = run.vm
    out = MiningOutcome([], run.theta, "ld", blocking, maximal_only=True)
    n = db.n
    try:
        for k in range(n, 0, -1):
            fixed = [a if j < n - k else -a for j, a in enumerate(vm.aux_a)]
            while True:
                res = run.solve(run.alpha_assumptions + fixed)
                if not res.sat:
                    break
                itemset, sup = run.decode(res)
                out.found.append((itemset, sup))
                run.block(blocking, itemset)
    except SearchTimeout:
        out.status = "timeout"
    return run.finish(out)


def mine_dual(db: ItemsetDatabase, theta, blocking: str = en.SUPERSETS_COMPACT,
              options: Optional[EncodeOptions] = None, config: Optional[SolverConfig] = None,
              item_polarity=False, trans_polarity=None, deadline=None) -> MiningOutcome:
    """Enumerate infrequent itemsets, blocking each one's supersets.

    Every minimal infrequent itemset is found (no smaller infrequent set can
    block it); ``border`` keeps the minimal elements of what was found.
    Items default to negative polarity so small sets tend to come first.
    """
    if blocking not in en.DUAL_KINDS:
        raise ValueError(f"dual search needs superset blocking, got {blocking!r}")
    opts = options or EncodeOptions()
    theta, options = _prepare(db, theta, opts, dual=True, length_aux=False)
    run = _Run(db, theta, options, config, item_polarity, trans_polarity, deadline)
    out = MiningOutcome([], run.theta, "dual", blocking, maximal_only=False)
    try:
        while True:
            res = run.solve()
            if not res.sat:
                break
            itemset, sup = run.decode(res)
            out.found.append((itemset, sup))
            run.block(blocking, itemset)
    except SearchTimeout:
        out.status = "timeout"
    found = sorted({s for s, _ in out.found}, key=lambda s: (len(s), sorted(s)))
    border = []
    for s in found:
        if not any(b <= s for b in border):
            border.append(s)
    out.border = border
    return run.finish(out)


def mine(db: ItemsetDatabase, theta, strategy: str = "cmg", blocking: Optional[str] = None,
         options: Optional[EncodeOptions] = None, config: Optional[SolverConfig] = None,
         **kwargs) -> MiningOutcome:
    """Dispatch on ``strategy`` with sensible default blockings."""
    if strategy == "simple":
        return mine_simple(db, theta, blocking or en.SIMPLE, options, config, **kwargs)
    if strategy == "lsm":
        return mine_lsm(db, theta, blocking or en.SUBSETS_COMPACT, options, config, **kwargs)
    if strategy == "cmg":
        return mine_cmg(db, theta, None, blocking or en.SUBSETS_COMPACT, options, config, **kwargs)
    if strategy == "ld":
        if options is None:
            options = EncodeOptions(removal_mode="incremental")
        return mine_ld(db, theta, blocking or en.SUBSETS_COMPACT, options, config, **kwargs)
    if strategy == "dual":
        return mine_dual(db, theta, blocking or en.SUPERSETS_COMPACT, options, config, **kwargs)
    raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
