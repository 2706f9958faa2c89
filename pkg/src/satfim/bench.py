"""Grid sweeps over (dataset, threshold, strategy) cells, written as CSV.

Each cell runs one miner with its own solver. A per-cell wall-clock budget
is enforced cooperatively: the miner checks the deadline before every solver
call and returns its partial result marked ``timeout``.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import asdict, dataclass
from typing import Iterable, Optional, Sequence

from .dataset import ItemsetDatabase, density, resolve_theta
from .encoder import EncodeOptions
from .search import mine

COLUMNS = ("dataset", "m", "n", "density", "theta", "strategy", "blocking", "encoding",
           "frequent", "maximal", "alpha", "beta", "sat", "unsat", "millis", "status")


@dataclass
class RunRecord:
    dataset: str
    m: int
    n: int
    density: float
    theta: int
    strategy: str
    blocking: str
    encoding: str
    frequent: int
    maximal: int
    alpha: int
    beta: int
    sat: int
    unsat: int
    millis: int
    status: str

    def row(self) -> dict:
        out = asdict(self)
        out["density"] = f"{self.density:.4f}"
        return out


def encoding_name(options: EncodeOptions) -> str:
    """Short tag such as ``reduced+pos+incremental``."""
    parts = ["reduced" if options.reduced else "baseline"]
    if options.positive_only:
        parts.append("pos")
    if options.removal_mode != "none":
        parts.append(options.removal_mode)
    return "+".join(parts)


def run_cell(db: ItemsetDatabase, name: str, theta, strategy: str, blocking: Optional[str] = None,
             options: Optional[EncodeOptions] = None, timeout: Optional[float] = None,
             **kwargs) -> RunRecord:
    theta = resolve_theta(theta, db.m)
    if options is None:
        options = EncodeOptions(removal_mode="incremental") if strategy == "ld" else EncodeOptions()
    deadline = time.monotonic() + timeout if timeout else None
    t0 = time.perf_counter()
    try:
        outcome = mine(db, theta, strategy, blocking, options, deadline=deadline, **kwargs)
    except Exception as exc:  # a failed cell is recorded, the sweep goes on
        return RunRecord(name, db.m, db.n, density(db), theta, strategy, blocking or "",
                         encoding_name(options), 0, 0, 0, 0, 0, 0,
                         round(1000 * (time.perf_counter() - t0)), f"error: {exc}")
    millis = round(1000 * (time.perf_counter() - t0))
    if outcome.status == "ok":
        coll = outcome.collection(db)
        frequent = len(coll)
        n_max = len(outcome.maximal(db))
    else:
        frequent = len(outcome.found)
        n_max = 0
    st = outcome.stats
    return RunRecord(name, db.m, db.n, density(db), theta, strategy, outcome.blocking,
                     encoding_name(options), frequent, n_max, st.alpha, st.beta, st.sat,
                     st.unsat, millis, outcome.status)


def sweep(datasets: Sequence[tuple], thetas: Iterable, strategies: Iterable[str],
          blocking: Optional[str] = None, options: Optional[EncodeOptions] = None,
          timeout: Optional[float] = None) -> list:
    """One record per (dataset, theta, strategy); ``datasets`` holds
    ``(name, db)`` pairs. Thresholds may be absolute or relative."""
    thetas = list(thetas)
    strategies = list(strategies)
    records = []
    for name, db in datasets:
        for theta in thetas:
            for strategy in strategies:
                records.append(run_cell(db, name, theta, strategy, blocking, options, timeout))
    return records


def to_csv(records: Iterable[RunRecord]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow(rec.row())
    return buf.getvalue()
