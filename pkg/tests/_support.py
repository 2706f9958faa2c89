"""Shared brute-force helpers for the test modules."""

from itertools import product

import numpy as np

from satfim.dataset import GeneratorParams, ItemsetDatabase, generate
from satfim.pbsat import LinearConstraint, Solver, SolverConfig

RELATIONS = (">=", "<=", "=")


def random_instance(rng, nvars, nclauses, nlinear):
    """Random clauses and linear constraints over variables 1..nvars."""
    clauses = []
    for _ in range(nclauses):
        k = int(rng.integers(1, min(4, nvars) + 1))
        vs = rng.choice(np.arange(1, nvars + 1), size=k, replace=False)
        clauses.append([int(v) if rng.random() < 0.5 else -int(v) for v in vs])
    linear = []
    for _ in range(nlinear):
        k = int(rng.integers(1, min(6, nvars) + 1))
        vs = rng.choice(np.arange(1, nvars + 1), size=k, replace=False)
        terms = []
        for v in vs:
            w = int(rng.integers(1, 5))
            if rng.random() < 0.2:
                w = -w
            terms.append((w, int(v) if rng.random() < 0.5 else -int(v)))
        total = sum(abs(w) for w, _ in terms)
        bound = int(rng.integers(-2, total + 2))
        linear.append(LinearConstraint(tuple(terms), RELATIONS[int(rng.integers(3))], bound))
    return clauses, linear


def assignments(nvars):
    for bits in product((False, True), repeat=nvars):
        yield {v + 1: b for v, b in enumerate(bits)}


def satisfies(model, clauses, linear, assumptions=()):
    value = lambda lit: model[abs(lit)] == (lit > 0)
    return (all(value(a) for a in assumptions)
            and all(any(value(l) for l in c) for c in clauses)
            and all(con.evaluate(value) for con in linear))


def brute_force(nvars, clauses, linear, assumptions=(), objective=None):
    """(satisfiable, best objective or None) by enumerating every assignment."""
    best = None
    for model in assignments(nvars):
        if satisfies(model, clauses, linear, assumptions):
            if objective is None:
                return True, None
            score = sum(model[abs(l)] == (l > 0) for l in objective)
            best = score if best is None else max(best, score)
    return best is not None, best


def build_solver(nvars, clauses, linear, config=None):
    s = Solver(config or SolverConfig())
    s.new_vars(nvars)
    for c in clauses:
        s.add_clause(c)
    for con in linear:
        s.add_linear(con)
    return s


def random_database(rng, n, m, density):
    matrix = rng.random((m, n)) < density
    return ItemsetDatabase(tuple(f"x{i}" for i in range(n)), matrix)


def sweep_databases(count=100, seed=2024):
    """Generated databases for the oracle sweep: n <= 12, m <= 30, three densities."""
    rng = np.random.default_rng(seed)
    out = []
    densities = (0.2, 0.35, 0.5)
    for k in range(count):
        d = densities[k % 3]
        n = int(rng.integers(5, 13))
        m = int(rng.integers(10, 31))
        planted = int(rng.integers(0, 3))
        gamma = 0.15 if planted else 0.0
        params = GeneratorParams(n=n, m=m, density=d, gamma=gamma, planted=planted,
                                 seed=int(rng.integers(1 << 30)))
        try:
            db = generate(params)
        except ValueError:
            db = generate(GeneratorParams(n=n, m=m, density=d, seed=params.seed))
        out.append((f"g{k:03d}", db))
    return out


def sweep_theta(db, rng):
    """A threshold in the interesting range: at least 2, at most m."""
    lo = max(2, round(0.15 * db.m))
    hi = max(lo, round(0.4 * db.m))
    return int(rng.integers(lo, hi + 1))


def all_assignments(nvars):
    """Every assignment over ``nvars`` variables as a (2**nvars, nvars) bool array."""
    codes = np.arange(1 << nvars, dtype=np.int64)
    return ((codes[:, None] >> np.arange(nvars)) & 1).astype(bool)


def _literal_columns(X, lits):
    lits = np.asarray(lits, dtype=np.int64)
    cols = X[:, np.abs(lits) - 1]
    return np.where(lits > 0, cols, ~cols)


def satisfied_rows(X, clauses=(), linear=()):
    """Vectorized check of clauses and linear constraints over assignment rows."""
    ok = np.ones(X.shape[0], dtype=bool)
    for c in clauses:
        ok &= _literal_columns(X, c).any(axis=1) if len(c) else False
    for con in linear:
        if con.terms:
            coefs = np.array([c for c, _ in con.terms], dtype=np.int64)
            lhs = _literal_columns(X, [l for _, l in con.terms]).astype(np.int64) @ coefs
        else:
            lhs = np.zeros(X.shape[0], dtype=np.int64)
        if con.relation == ">=":
            ok &= lhs >= con.bound
        elif con.relation == "<=":
            ok &= lhs <= con.bound
        else:
            ok &= lhs == con.bound
    return ok


def brute_force_fast(nvars, clauses, linear, assumptions=(), objective=None):
    """Same answer as :func:`brute_force`, vectorized for up to ~20 variables."""
    X = all_assignments(nvars)
    ok = satisfied_rows(X, [[a] for a in assumptions] + list(clauses), linear)
    if not ok.any():
        return False, None
    if objective is None:
        return True, None
    scores = _literal_columns(X[ok], objective).sum(axis=1)
    return True, int(scores.max())
