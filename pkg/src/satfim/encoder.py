"""Translate (database, threshold, options) into clauses and linear
constraints, export them as DIMACS CNF / OPB, and decode models.

Variable layout: item variables ``I_i`` come first (1..n), then transaction
variables ``T_t`` (n+1..n+m), then the optional auxiliary classes in the
order ``N_i``, ``A_i``, ``y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .dataset import ItemsetDatabase, resolve_theta
from .pbsat import LinearConstraint, Solver, SolverConfig

REMOVAL_MODES = ("none", "incremental", "fixed")


class ExportError(ValueError):
    pass


@dataclass(frozen=True)
class VarMap:
    items: tuple = ()
    trans: tuple = ()
    aux_n: tuple = ()
    aux_a: tuple = ()
    control_y: Optional[int] = None

    @property
    def nvars(self) -> int:
        extra = 1 if self.control_y is not None else 0
        return len(self.items) + len(self.trans) + len(self.aux_n) + len(self.aux_a) + extra

    @classmethod
    def build(cls, n: int, m: int, aux_n=False, aux_a=False, control_y=False) -> "VarMap":
        nxt = 1
        items = tuple(range(nxt, nxt + n))
        nxt += n
        trans = tuple(range(nxt, nxt + m))
        nxt += m
        ns = tuple(range(nxt, nxt + n)) if aux_n else ()
        nxt += len(ns)
        As = tuple(range(nxt, nxt + n)) if aux_a else ()
        nxt += len(As)
        y = nxt if control_y else None
        return cls(items, trans, ns, As, y)


@dataclass(frozen=True)
class EncodeOptions:
    """``reduced``: one linear constraint per transaction in place of its
    binary coverage clauses. ``positive_only``: rewrite every negated literal
    as ``1 - x``. ``removal_mode``: auxiliary structure for emulating clause
    removal (``incremental`` adds ``N_i``; ``fixed`` adds ``N_i`` and ``y``).
    ``length_aux`` adds ``A_i`` with ``sum(I) + sum(A) = n``. ``dual``
    encodes infrequent itemsets instead of frequent ones.
    """

    reduced: bool = False
    positive_only: bool = False
    removal_mode: str = "none"
    dual: bool = False
    length_aux: bool = False

    def __post_init__(self):
        if self.removal_mode not in REMOVAL_MODES:
            raise ValueError(f"removal_mode must be one of {REMOVAL_MODES}")
        if self.dual and self.removal_mode == "fixed":
            raise ValueError("dual encoding cannot be combined with fixed removal mode")
        if self.dual and self.length_aux:
            raise ValueError("dual encoding has no length-decreasing search")


@dataclass(frozen=True)
class EncodedInstance:
    varmap: VarMap
    clauses: tuple = ()
    linear: tuple = ()
    theta: int = 0
    options: EncodeOptions = field(default_factory=EncodeOptions)

    @property
    def nvars(self) -> int:
        return self.varmap.nvars

    def counts(self) -> dict:
        return {
            "variables": self.nvars,
            "primary_variables": len(self.varmap.items) + len(self.varmap.trans),
            "clauses": len(self.clauses),
            "binary_clauses": sum(1 for c in self.clauses if len(c) == 2),
            "linear": len(self.linear),
        }

    def to_solver(self, config: Optional[SolverConfig] = None) -> Solver:
        solver = Solver(config)
        solver.new_vars(self.nvars)
        for clause in self.clauses:
            solver.add_clause(clause)
        for con in self.linear:
            solver.add_linear(con)
        return solver


def _zeros(db: ItemsetDatabase):
    return [[i for i in range(db.n) if not row[i]] for row in db.matrix]


def encode_coverage(db: ItemsetDatabase, varmap: Optional[VarMap] = None) -> list:
    """Clauses tying each ``T_t`` to "no absent item of row t is selected".

    Per transaction: ``(¬T_t ∨ ¬I_i)`` for every item i absent from t, then
    ``(T_t ∨ I_i ∨ ...)`` over the same absent items (the unit ``(T_t)`` when
    the transaction holds every item).
    """
    vm = varmap or VarMap.build(db.n, db.m)
    out = []
    for t, zeros in enumerate(_zeros(db)):
        T = vm.trans[t]
        out.extend((-T, -vm.items[i]) for i in zeros)
        out.append((T,) + tuple(vm.items[i] for i in zeros))
    return out


def encode_frequency(db: ItemsetDatabase, theta: int, varmap: Optional[VarMap] = None) -> list:
    """Per item: ``theta·¬I_i + sum(T_t : t contains i) >= theta``."""
    if not 1 <= theta <= db.m:
        raise ValueError(f"theta={theta} outside 1..{db.m}")
    vm = varmap or VarMap.build(db.n, db.m)
    out = []
    for i in range(db.n):
        terms = [(theta, -vm.items[i])]
        terms += [(1, vm.trans[t]) for t in range(db.m) if db.matrix[t, i]]
        out.append(LinearConstraint(tuple(terms), ">=", theta))
    return out


def _reduced_coverage(db, vm):
    out = []
    for t, zeros in enumerate(_zeros(db)):
        if not zeros:
            continue
        # z·¬T_t - sum(I_i) >= 0, kept in this signed form
        terms = [(len(zeros), -vm.trans[t])] + [(-1, vm.items[i]) for i in zeros]
        out.append(LinearConstraint(tuple(terms), ">=", 0))
    return out


def clause_to_linear(clause) -> LinearConstraint:
    return LinearConstraint(tuple((1, l) for l in clause), ">=", 1)


def positive_form(con: LinearConstraint) -> LinearConstraint:
    """Same constraint over positive literals only (``c·¬x = c - c·x``)."""
    bound = con.bound
    terms = []
    for c, lit in con.terms:
        if lit > 0:
            terms.append((c, lit))
        else:
            terms.append((-c, -lit))
            bound -= c
    return LinearConstraint(tuple(terms), con.relation, bound)


def encode(db: ItemsetDatabase, theta, options: Optional[EncodeOptions] = None) -> EncodedInstance:
    opts = options or EncodeOptions()
    theta = resolve_theta(theta, db.m)
    vm = VarMap.build(
        db.n, db.m,
        aux_n=opts.removal_mode != "none",
        aux_a=opts.length_aux,
        control_y=opts.removal_mode == "fixed",
    )
    cover = encode_coverage(db, vm)
    clauses = []
    linear = []
    if opts.reduced:
        clauses += [c for c in cover if not (len(c) == 2 and c[0] < 0 and c[1] < 0)]
        linear += _reduced_coverage(db, vm)
    else:
        clauses += cover

    if opts.dual:
        # sum(T) <= theta - 1, in >= form over negated transaction literals
        terms = tuple((1, -T) for T in vm.trans)
        linear.append(LinearConstraint(terms, ">=", db.m - theta + 1))
    else:
        linear += encode_frequency(db, theta, vm)

    if vm.aux_n:
        clauses += [(I, N) for I, N in zip(vm.items, vm.aux_n)]
    if vm.control_y is not None:
        terms = [(1, vm.control_y)] + [(1, I) for I in vm.items] + [(1, N) for N in vm.aux_n]
        linear.append(LinearConstraint(tuple(terms), ">=", db.n + 1))
    if vm.aux_a:
        terms = [(1, I) for I in vm.items] + [(1, A) for A in vm.aux_a]
        linear.append(LinearConstraint(tuple(terms), "=", db.n))

    if opts.positive_only:
        linear = [positive_form(clause_to_linear(c)) for c in clauses] + [positive_form(c) for c in linear]
        clauses = []
    return EncodedInstance(vm, tuple(clauses), tuple(linear), theta, opts)


def decode(model, varmap: VarMap):
    """(itemset, transaction set) from a model mapping variable -> bool."""
    items = frozenset(i for i, v in enumerate(varmap.items) if model[v])
    trans = frozenset(t for t, v in enumerate(varmap.trans) if model[v])
    return items, trans


# -- export -----------------------------------------------------------------

def _as_clause(con: LinearConstraint):
    """Clauses equivalent to ``con``, or None if it is not clausal.

    Recognizes constraints whose every weight reaches the bound (one clause)
    and ``b·a + l_1 + ... + l_b >= b`` (the binary clauses ``a ∨ l_j``).
    """
    out = []
    for weights, bound in con.normalize():
        if bound <= 0:
            continue
        ws = {l: min(w, bound) for l, w in weights.items()}
        if sum(ws.values()) < bound:
            out.append(())
            continue
        if all(w >= bound for w in ws.values()):
            out.append(tuple(ws))
            continue
        heavy = [l for l, w in ws.items() if w >= bound]
        light = {l: w for l, w in ws.items() if w < bound}
        if len(heavy) == 1 and sum(light.values()) == bound:
            out.extend((heavy[0], l) for l in light)
            continue
        return None
    return out


def _cnf_clauses(instance: EncodedInstance):
    clauses = list(instance.clauses)
    for con in instance.linear:
        extra = _as_clause(con)
        if extra is None:
            raise ExportError(f"constraint is not clausal and cannot be written as CNF: {con}")
        clauses.extend(extra)
    return clauses


def export(instance: EncodedInstance, format: str) -> str:
    """DIMACS CNF or OPB text for ``instance``.

    CNF accepts linear constraints only when they are clause-equivalent.
    OPB writes negated literals through ``¬x = 1 - x``, so every line uses
    plain variables ``x_k``.
    """
    if format == "cnf":
        clauses = _cnf_clauses(instance)
        lines = [f"p cnf {instance.nvars} {len(clauses)}"]
        lines += [" ".join(str(l) for l in c) + " 0" for c in clauses]
        return "\n".join(lines) + "\n"
    if format == "opb":
        rows = [clause_to_linear(c) for c in instance.clauses] + list(instance.linear)
        lines = [f"* #variable= {instance.nvars} #constraint= {len(rows)}"]
        for con in rows:
            con = positive_form(con)
            rel = con.relation
            bound = con.bound
            terms = list(con.terms)
            if rel == "<=":
                terms = [(-c, l) for c, l in terms]
                bound = -bound
                rel = ">="
            body = " ".join(f"{c:+d} x{l}" for c, l in terms if c)
            lines.append(f"{body} {rel} {bound} ;")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown export format {format!r}")
