"""Incremental CDCL solver over clauses and linear pseudo-Boolean constraints.

Literals are non-zero ints in the DIMACS convention (``v`` / ``-v``).
Internally a literal is coded as ``2*v`` (positive) or ``2*v + 1``
(negative), so negation is ``code ^ 1`` and per-literal tables are flat lists.

Linear constraints are kept natively with a counter (slack) propagator:
``slack = sum of weights of non-false literals - bound``. A negative slack is
a conflict; an unassigned literal whose weight exceeds the slack is implied.
Reasons handed to conflict analysis are always clauses, so learning is plain
first-UIP clause learning.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

SAT = "SAT"
UNSAT = "UNSAT"


@dataclass(frozen=True)
class LinearConstraint:
    """``sum(coef * lit) <relation> bound`` with integer coefficients.

    ``terms`` holds ``(coef, literal)`` pairs. Coefficients may be negative in
    the user-facing form; :meth:`normalize` produces the canonical
    ``>=`` form with positive weights, one literal per variable.
    """

    terms: tuple
    relation: str
    bound: int

    def __post_init__(self):
        if self.relation not in (">=", "<=", "="):
            raise ValueError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "terms", tuple((int(c), int(l)) for c, l in self.terms))
        for _, lit in self.terms:
            if lit == 0:
                raise ValueError("literal 0 is not a literal")

    @property
    def variables(self) -> set:
        return {abs(l) for _, l in self.terms}

    def evaluate(self, value) -> bool:
        """``value`` maps a literal to bool."""
        lhs = sum(c for c, l in self.terms if value(l))
        if self.relation == ">=":
            return lhs >= self.bound
        if self.relation == "<=":
            return lhs <= self.bound
        return lhs == self.bound

    def normalize(self) -> list:
        """Equivalent list of ``(weights_by_literal, bound)`` in ``>=`` form.

        Weights are positive; each variable appears once. ``=`` yields two
        constraints.
        """
        if self.relation == ">=":
            return [_normalize_geq(self.terms, self.bound)]
        flipped = tuple((-c, l) for c, l in self.terms)
        if self.relation == "<=":
            return [_normalize_geq(flipped, -self.bound)]
        return [_normalize_geq(self.terms, self.bound), _normalize_geq(flipped, -self.bound)]

    def __str__(self):
        rel = {">=": "≥", "<=": "≤", "=": "="}[self.relation]
        parts = []
        for c, l in self.terms:
            name = f"x{l}" if l > 0 else f"¬x{-l}"
            parts.append(f"{c:+d}·{name}")
        return " ".join(parts) + f" {rel} {self.bound}"


def _normalize_geq(terms, bound):
    # coef per variable on its positive literal, then flip negatives:
    # c*¬x = c - c*x, and -c*x = -c + c*¬x
    coef = {}
    for c, lit in terms:
        v = abs(lit)
        if lit > 0:
            coef[v] = coef.get(v, 0) + c
        else:
            coef[v] = coef.get(v, 0) - c
            bound -= c
    weights = {}
    for v, c in coef.items():
        if c > 0:
            weights[v] = c
        elif c < 0:
            weights[-v] = -c
            bound -= c
    return weights, bound


@dataclass
class SolverConfig:
    """Search parameters.

    ``default_polarity`` is the initial phase of every variable (``False``
    mirrors MiniSat). Per-variable hints set with :meth:`Solver.set_polarity`
    take precedence over both this default and saved phases.
    """

    default_polarity: bool = False
    var_decay: float = 0.95
    clause_decay: float = 0.999
    restart_base: int = 100
    random_freq: float = 0.0
    phase_saving: bool = True
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.var_decay <= 1.0 or not 0.0 < self.clause_decay <= 1.0:
            raise ValueError("decay factors must lie in (0, 1]")
        if self.restart_base < 1:
            raise ValueError("restart_base must be positive")
        if not 0.0 <= self.random_freq <= 1.0:
            raise ValueError("random_freq must lie in [0, 1]")


@dataclass
class SolveResult:
    status: str
    model: dict = field(default_factory=dict)
    objective: Optional[int] = None

    @property
    def sat(self) -> bool:
        return self.status == SAT

    def value(self, lit: int) -> bool:
        v = self.model[abs(lit)]
        return v if lit > 0 else not v


@dataclass
class SolverStats:
    solves: int = 0
    conflicts: int = 0
    decisions: int = 0
    propagations: int = 0
    restarts: int = 0
    learnt: int = 0


class _Clause:
    __slots__ = ("lits", "learnt", "activity", "deleted")

    def __init__(self, lits, learnt=False):
        self.lits = lits
        self.learnt = learnt
        self.activity = 0.0
        self.deleted = False


class _PB:
    __slots__ = ("lits", "weights", "bound", "slack", "maxw", "deleted")

    def __init__(self, lits, weights, bound):
        self.lits = lits
        self.weights = weights
        self.bound = bound
        self.slack = sum(weights) - bound
        self.maxw = max(weights)
        self.deleted = False


def _luby(i: int) -> int:
    # i-th element (0-based) of 1,1,2,1,1,2,4,...
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i %= size
    return 1 << seq


class Solver:
    """CDCL with assumptions, incremental additions and polarity hints."""

    def __init__(self, config: Optional[SolverConfig] = None):
        self.config = config or SolverConfig()
        self.stats = SolverStats()
        self._rng = random.Random(self.config.seed)
        self.nvars = 0
        self.ok = True
        # per literal code (index 0, 1 unused)
        self._val = [0, 0]
        self._watches = [[], []]
        self._pb_occ = [[], []]
        # per variable (index 0 unused)
        self._level = [0]
        self._reason = [None]
        self._tpos = [0]
        self._activity = [0.0]
        self._phase = [False]
        self._user_pol = [None]
        self._seen = [False]
        self._trail = []
        self._trail_lim = []
        self._qhead = 0
        self._heap = []
        self._var_inc = 1.0
        self._cla_inc = 1.0
        self._clauses = []
        self._learnts = []
        self._pbs = []
        self._max_learnts = 2000.0
        self._activations = set()
        self._guarded = {}
        self.constraints = []  # as given, for independent model checking

    # -- variables -------------------------------------------------------

    def new_var(self) -> int:
        self.nvars += 1
        v = self.nvars
        self._val += [0, 0]
        self._watches += [[], []]
        self._pb_occ += [[], []]
        self._level.append(0)
        self._reason.append(None)
        self._tpos.append(0)
        self._activity.append(0.0)
        self._phase.append(self.config.default_polarity)
        self._user_pol.append(None)
        self._seen.append(False)
        heapq.heappush(self._heap, (0.0, v))
        return v

    def new_vars(self, count: int) -> list:
        return [self.new_var() for _ in range(count)]

    def new_activation(self) -> int:
        """Fresh variable meant to guard temporary constraints (see :meth:`release`)."""
        v = self.new_var()
        self._activations.add(v)
        return v

    def set_polarity(self, var: int, polarity: Optional[bool]) -> None:
        self._check_var(var)
        self._user_pol[var] = polarity

    def _check_var(self, var):
        if not 1 <= var <= self.nvars:
            raise ValueError(f"unknown variable {var} (solver has {self.nvars})")

    def _code(self, lit: int) -> int:
        v = abs(lit)
        if lit == 0 or v > self.nvars:
            raise ValueError(f"literal {lit} references an unknown variable")
        return 2 * v + (lit < 0)

    # -- adding constraints ----------------------------------------------

    def add_clause(self, lits: Iterable[int]) -> None:
        lits = list(lits)
        codes = [self._code(l) for l in lits]
        self.constraints.append(("clause", tuple(lits)))
        self._add_clause_codes(codes, lits)

    def _guard_of(self, lits):
        for l in lits:
            if l < 0 and -l in self._activations:
                return -l
        return None

    def _add_clause_codes(self, codes, lits):
        if not self.ok:
            return
        val = self._val
        out = []
        seen = set()
        for c in codes:
            if c in seen:
                continue
            if c ^ 1 in seen or val[c] == 1:
                return  # tautology or satisfied at level 0
            seen.add(c)
            if val[c] == 0:
                out.append(c)
        if not out:
            self.ok = False
            return
        if len(out) == 1:
            self._enqueue(out[0], None)
            if self._propagate() is not None:
                self.ok = False
            return
        clause = _Clause(out)
        self._clauses.append(clause)
        self._watches[out[0]].append(clause)
        self._watches[out[1]].append(clause)
        guard = self._guard_of(lits)
        if guard is not None:
            self._guarded.setdefault(guard, []).append(clause)

    def add_linear(self, constraint: LinearConstraint) -> None:
        for lit in (l for _, l in constraint.terms):
            self._code(lit)
        self.constraints.append(("linear", constraint))
        for weights, bound in constraint.normalize():
            self._add_pb(weights, bound)

    def _add_pb(self, weights: dict, bound: int):
        if not self.ok:
            return
        val = self._val
        lits, ws = [], []
        for lit, w in weights.items():
            c = 2 * abs(lit) + (lit < 0)
            if val[c] == 1:
                bound -= w
            elif val[c] == 0:
                lits.append(c)
                ws.append(w)
        if bound <= 0:
            return
        ws = [min(w, bound) for w in ws]
        total = sum(ws)
        if total < bound:
            self.ok = False
            return
        if all(w >= bound for w in ws):
            self._add_clause_codes(lits, [(c >> 1) * (-1 if c & 1 else 1) for c in lits])
            return
        order = sorted(range(len(lits)), key=lambda k: -ws[k])
        pb = _PB([lits[k] for k in order], [ws[k] for k in order], bound)
        self._pbs.append(pb)
        for c, w in zip(lits, ws):
            self._pb_occ[c].append((pb, w))
        guard = self._guard_of([(c >> 1) * (-1 if c & 1 else 1) for c in lits])
        if guard is not None:
            self._guarded.setdefault(guard, []).append(pb)
        if pb.slack < pb.maxw:
            for c, w in zip(lits, ws):
                if w > pb.slack and val[c] == 0:
                    self._enqueue(c, pb)
            if self._propagate() is not None:
                self.ok = False

    def release(self, act: int) -> None:
        """Permanently disable constraints guarded by activation ``act``."""
        self.add_clause([-act])
        for con in self._guarded.pop(act, ()):
            con.deleted = True
            if isinstance(con, _PB):
                for c in con.lits:
                    self._pb_occ[c] = [(p, w) for p, w in self._pb_occ[c] if p is not con]

    # -- core ------------------------------------------------------------

    def _enqueue(self, code, reason):
        v = code >> 1
        self._val[code] = 1
        self._val[code ^ 1] = -1
        self._level[v] = len(self._trail_lim)
        self._reason[v] = reason
        self._tpos[v] = len(self._trail)
        self._trail.append(code)

    def _propagate(self):
        """Unit propagation. Returns a conflicting constraint or None."""
        val = self._val
        trail = self._trail
        watches = self._watches
        pb_occ = self._pb_occ
        enqueue = self._enqueue
        confl = None
        props = 0
        while self._qhead < len(trail):
            p = trail[self._qhead]
            self._qhead += 1
            props += 1
            false_lit = p ^ 1

            occ = pb_occ[false_lit]
            if occ:
                for pb, w in occ:
                    pb.slack -= w
                for pb, w in occ:
                    slack = pb.slack
                    if slack >= pb.maxw:
                        continue
                    if slack < 0:
                        confl = pb
                        break
                    # weights are sorted, so stop at the first one that fits
                    for c, cw in zip(pb.lits, pb.weights):
                        if cw <= slack:
                            break
                        if val[c] == 0:
                            enqueue(c, pb)
                if confl is not None:
                    break

            ws = watches[false_lit]
            if not ws:
                continue
            kept = []
            i = 0
            nws = len(ws)
            while i < nws:
                clause = ws[i]
                i += 1
                if clause.deleted:
                    continue
                lits = clause.lits
                if lits[0] == false_lit:
                    lits[0] = lits[1]
                    lits[1] = false_lit
                first = lits[0]
                if val[first] == 1:
                    kept.append(clause)
                    continue
                for k in range(2, len(lits)):
                    c = lits[k]
                    if val[c] != -1:
                        lits[1] = c
                        lits[k] = false_lit
                        watches[c].append(clause)
                        break
                else:
                    kept.append(clause)
                    if val[first] == -1:
                        confl = clause
                        kept.extend(ws[i:])
                        break
                    enqueue(first, clause)
            watches[false_lit] = kept
            if confl is not None:
                break
        self.stats.propagations += props
        return confl

    def _reason_codes(self, reason, implied=None):
        """Clause (as codes) explaining ``implied`` (or a conflict if None)."""
        if isinstance(reason, _Clause):
            return reason.lits
        val = self._val
        if implied is None:
            return [c for c in reason.lits if val[c] == -1]
        limit = self._tpos[implied >> 1]
        tpos = self._tpos
        out = [implied]
        for c in reason.lits:
            if val[c] == -1 and tpos[c >> 1] < limit:
                out.append(c)
        return out

    def _analyze(self, confl):
        seen = self._seen
        level = self._level
        trail = self._trail
        current = len(self._trail_lim)
        learnt = [0]
        counter = 0
        p = None
        idx = len(trail) - 1
        lits = self._reason_codes(confl)
        touched = []
        while True:
            if isinstance(confl, _Clause) and confl.learnt:
                self._bump_clause(confl)
            for q in lits:
                if q == p:
                    continue
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    touched.append(v)
                    self._bump_var(v)
                    if level[v] >= current:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            counter -= 1
            if counter == 0:
                break
            confl = self._reason[p >> 1]
            lits = self._reason_codes(confl, p)
        learnt[0] = p ^ 1
        for v in touched:
            seen[v] = False
        if len(learnt) == 1:
            return learnt, 0
        best = 1
        for k in range(2, len(learnt)):
            if level[learnt[k] >> 1] > level[learnt[best] >> 1]:
                best = k
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, level[learnt[1] >> 1]

    def _bump_var(self, v):
        act = self._activity
        act[v] += self._var_inc
        if act[v] > 1e100:
            for k in range(1, self.nvars + 1):
                act[k] *= 1e-100
            self._var_inc *= 1e-100
            self._heap = [(-act[k], k) for k in range(1, self.nvars + 1) if self._val[2 * k] == 0]
            heapq.heapify(self._heap)
        elif self._val[2 * v] == 0:
            heapq.heappush(self._heap, (-act[v], v))

    def _bump_clause(self, clause):
        clause.activity += self._cla_inc
        if clause.activity > 1e20:
            for c in self._learnts:
                c.activity *= 1e-20
            self._cla_inc *= 1e-20

    def _backtrack(self, lvl):
        if len(self._trail_lim) <= lvl:
            return
        stop = self._trail_lim[lvl]
        trail = self._trail
        val = self._val
        pb_occ = self._pb_occ
        phase = self._phase
        act = self._activity
        heap = self._heap
        save = self.config.phase_saving
        qhead = self._qhead
        for i in range(len(trail) - 1, stop - 1, -1):
            c = trail[i]
            v = c >> 1
            if i < qhead:
                for pb, w in pb_occ[c ^ 1]:
                    pb.slack += w
            val[c] = 0
            val[c ^ 1] = 0
            self._reason[v] = None
            if save:
                phase[v] = not (c & 1)
            heapq.heappush(heap, (-act[v], v))
        del trail[stop:]
        del self._trail_lim[lvl:]
        self._qhead = min(qhead, stop)

    def _pick_branch(self):
        val = self._val
        if self.config.random_freq and self._rng.random() < self.config.random_freq:
            free = [v for v in range(1, self.nvars + 1) if val[2 * v] == 0]
            if free:
                v = self._rng.choice(free)
                return self._decision_code(v)
        heap = self._heap
        act = self._activity
        while heap:
            neg, v = heapq.heappop(heap)
            if val[2 * v] == 0 and -neg == act[v]:
                return self._decision_code(v)
        # heap may miss variables only through stale keys; rescan
        for v in range(1, self.nvars + 1):
            if val[2 * v] == 0:
                return self._decision_code(v)
        return None

    def _decision_code(self, v):
        pol = self._user_pol[v]
        if pol is None:
            pol = self._phase[v]
        return 2 * v + (not pol)

    def _reduce_db(self):
        locked = set()
        for c in self._trail:
            r = self._reason[c >> 1]
            if isinstance(r, _Clause):
                locked.add(id(r))
        learnts = sorted(self._learnts, key=lambda c: c.activity)
        half = len(learnts) // 2
        keep = []
        for k, c in enumerate(learnts):
            if k < half and len(c.lits) > 2 and id(c) not in locked:
                c.deleted = True
            else:
                keep.append(c)
        self._learnts = keep

    def solve(self, assumptions: Sequence[int] = ()) -> SolveResult:
        """Search for a model extending ``assumptions``.

        Learned clauses are implied by the stored constraints alone, so they
        persist across calls.
        """
        assumed = [self._code(l) for l in assumptions]
        self.stats.solves += 1
        if not self.ok:
            return SolveResult(UNSAT)
        self._backtrack(0)
        if self._propagate() is not None:
            self.ok = False
            return SolveResult(UNSAT)
        act = self._activity
        val = self._val
        self._heap = [(-act[v], v) for v in range(1, self.nvars + 1) if val[2 * v] == 0]
        heapq.heapify(self._heap)
        cfg = self.config
        restarts = 0
        budget = cfg.restart_base * _luby(restarts)
        conflicts_here = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.stats.conflicts += 1
                conflicts_here += 1
                if not self._trail_lim:
                    self.ok = False
                    return SolveResult(UNSAT)
                learnt, bt = self._analyze(confl)
                self._backtrack(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    clause = _Clause(learnt, learnt=True)
                    self._learnts.append(clause)
                    self.stats.learnt += 1
                    self._watches[learnt[0]].append(clause)
                    self._watches[learnt[1]].append(clause)
                    self._bump_clause(clause)
                    self._enqueue(learnt[0], clause)
                self._var_inc /= cfg.var_decay
                self._cla_inc /= cfg.clause_decay
                continue

            if conflicts_here >= budget:
                restarts += 1
                self.stats.restarts += 1
                conflicts_here = 0
                budget = cfg.restart_base * _luby(restarts)
                self._backtrack(0)
                continue
            if len(self._learnts) - len(self._trail) >= self._max_learnts:
                self._reduce_db()
                self._max_learnts *= 1.1

            nxt = None
            while len(self._trail_lim) < len(assumed):
                a = assumed[len(self._trail_lim)]
                if self._val[a] == 1:
                    self._trail_lim.append(len(self._trail))
                elif self._val[a] == -1:
                    self._backtrack(0)
                    return SolveResult(UNSAT)
                else:
                    nxt = a
                    break
            if nxt is None:
                nxt = self._pick_branch()
                if nxt is None:
                    val = self._val
                    model = {v: val[2 * v] == 1 for v in range(1, self.nvars + 1)}
                    self._backtrack(0)
                    return SolveResult(SAT, model)
                self.stats.decisions += 1
            self._trail_lim.append(len(self._trail))
            self._enqueue(nxt, None)

    def maximize(self, objective: Sequence[int], assumptions: Sequence[int] = ()) -> SolveResult:
        """Model maximizing the number of true ``objective`` literals.

        Linear search from below: each improvement adds
        ``sum(objective) >= best + 1`` under a fresh activation literal, until
        the strengthened problem is unsatisfiable.
        """
        for lit in objective:
            self._code(lit)
        best = self.solve(assumptions)
        if not best.sat:
            return best
        best.objective = sum(best.value(l) for l in objective)
        while best.objective < len(objective):
            target = best.objective + 1
            act = self.new_activation()
            terms = [(1, l) for l in objective] + [(target, -act)]
            self.add_linear(LinearConstraint(tuple(terms), ">=", target))
            res = self.solve(list(assumptions) + [act])
            self.release(act)
            if not res.sat:
                break
            res.objective = sum(res.value(l) for l in objective)
            best = res
        return best

    # -- checking --------------------------------------------------------

    def check(self, model: dict) -> bool:
        """Evaluate every constraint ever added against ``model`` directly."""
        def value(lit):
            v = model[abs(lit)]
            return v if lit > 0 else not v
        for kind, con in self.constraints:
            if kind == "clause":
                if not any(value(l) for l in con):
                    return False
            elif not con.evaluate(value):
                return False
        return True
