"""Itemset databases: the binary transaction/item matrix, file I/O, and a
seeded generator for synthetic datasets with planted patterns.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

Itemset = frozenset  # frozenset[int] of item indices
TransactionSet = frozenset  # frozenset[int] of transaction indices

ItemRef = Union[int, str]


class ParseError(ValueError):
    """Malformed dataset file. Carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _label_key(label: str):
    # numeric labels sort numerically, everything else lexically after them
    return (0, int(label), "") if label.isdigit() else (1, 0, label)


@dataclass(frozen=True, eq=False)
class ItemsetDatabase:
    """An m x n Boolean matrix with item labels and transaction ids.

    Rows are transactions, columns are items. Duplicate rows are kept, the
    database is a multi-set. The matrix is made read-only on construction.
    """

    items: tuple
    matrix: np.ndarray
    ids: tuple = field(default=())

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=bool, copy=True)
        if matrix.ndim != 2:
            raise ValueError("matrix must be two-dimensional")
        m, n = matrix.shape
        if m < 1 or n < 1:
            raise ValueError(f"database needs m >= 1 and n >= 1, got {m}x{n}")
        items = tuple(str(i) for i in self.items)
        if len(items) != n:
            raise ValueError(f"{len(items)} labels for {n} columns")
        if len(set(items)) != n:
            raise ValueError("item labels must be unique")
        ids = tuple(str(t) for t in self.ids) or tuple(f"t{k + 1}" for k in range(m))
        if len(ids) != m:
            raise ValueError(f"{len(ids)} transaction ids for {m} rows")
        if len(set(ids)) != m:
            raise ValueError("transaction ids must be unique")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "ids", ids)

    @property
    def m(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    def __eq__(self, other):
        if not isinstance(other, ItemsetDatabase):
            return NotImplemented
        return (self.items == other.items and self.ids == other.ids
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.items, self.ids, self.matrix.tobytes()))

    def __repr__(self):
        return f"ItemsetDatabase(m={self.m}, n={self.n}, density={density(self):.3f})"

    @cached_property
    def _label_index(self) -> dict:
        return {label: i for i, label in enumerate(self.items)}

    @cached_property
    def tidsets(self) -> tuple:
        """Per-item transaction bitmasks (bit t set iff row t contains the item)."""
        masks = []
        for col in self.matrix.T:
            mask = 0
            for t in np.flatnonzero(col):
                mask |= 1 << int(t)
            masks.append(mask)
        return tuple(masks)

    @cached_property
    def rows(self) -> tuple:
        """Each transaction as a frozenset of item indices."""
        return tuple(frozenset(int(i) for i in np.flatnonzero(r)) for r in self.matrix)

    def index(self, item: ItemRef) -> int:
        if isinstance(item, (int, np.integer)) and not isinstance(item, bool):
            if not 0 <= item < self.n:
                raise KeyError(f"item index {item} out of range 0..{self.n - 1}")
            return int(item)
        try:
            return self._label_index[item]
        except KeyError:
            raise KeyError(f"unknown item label {item!r}") from None

    def itemset(self, items: Iterable[ItemRef]) -> Itemset:
        """Map labels (or indices) to an itemset of indices."""
        return frozenset(self.index(i) for i in items)

    def labels(self, itemset: Iterable[int]) -> list:
        return [self.items[i] for i in sorted(itemset)]

    def format_itemset(self, itemset: Iterable[int]) -> str:
        return "{" + ",".join(self.labels(itemset)) + "}"

    def restrict(self, items: Sequence[ItemRef]) -> "ItemsetDatabase":
        cols = [self.index(i) for i in items]
        return ItemsetDatabase(tuple(self.items[c] for c in cols), self.matrix[:, cols], self.ids)


def coverage(db: ItemsetDatabase, itemset: Iterable[ItemRef]) -> TransactionSet:
    """Transactions containing every item of ``itemset``."""
    mask = (1 << db.m) - 1
    tidsets = db.tidsets
    for i in db.itemset(itemset):
        mask &= tidsets[i]
    return frozenset(t for t in range(db.m) if mask >> t & 1)


def support(db: ItemsetDatabase, itemset: Iterable[ItemRef]) -> int:
    mask = (1 << db.m) - 1
    tidsets = db.tidsets
    for i in db.itemset(itemset):
        mask &= tidsets[i]
    return bin(mask).count("1")


def freq(db: ItemsetDatabase, itemset: Iterable[ItemRef]) -> float:
    return support(db, itemset) / db.m


def density(db: ItemsetDatabase) -> float:
    """Average transaction length over alphabet size."""
    return float(db.matrix.sum()) / (db.m * db.n)


def resolve_theta(theta, m: int) -> int:
    """Absolute support threshold from a count (int) or a frequency in (0, 1].

    >>> resolve_theta(0.5, 6)
    3
    >>> resolve_theta(3, 6)
    3
    """
    if isinstance(theta, bool):
        raise TypeError("theta must be a number")
    if isinstance(theta, (int, np.integer)):
        value = int(theta)
    else:
        f = float(theta)
        if not 0.0 < f <= 1.0:
            raise ValueError(f"frequency threshold must lie in (0, 1], got {theta}")
        # round first so 0.1 * 30 gives 3, not 4
        value = math.ceil(round(f * m, 9))
    if not 1 <= value <= m:
        raise ValueError(f"theta={value} outside 1..{m}")
    return value


# -- file formats ----------------------------------------------------------

def from_transactions(transactions: Sequence[Iterable[str]], ids=None) -> ItemsetDatabase:
    rows = [list(t) for t in transactions]
    alphabet = sorted({i for r in rows for i in r}, key=_label_key)
    if not rows:
        raise ValueError("no transactions")
    if not alphabet:
        raise ValueError("no items in any transaction")
    index = {label: k for k, label in enumerate(alphabet)}
    matrix = np.zeros((len(rows), len(alphabet)), dtype=bool)
    for t, r in enumerate(rows):
        matrix[t, [index[i] for i in r]] = True
    return ItemsetDatabase(tuple(alphabet), matrix, tuple(ids or ()))


def parse_transactions(text: str) -> ItemsetDatabase:
    lines = text.splitlines()
    if not any(line.strip() for line in lines):
        raise ParseError("empty file")
    rows = []
    for k, line in enumerate(lines, start=1):
        tokens = line.split()
        if len(set(tokens)) != len(tokens):
            dup = next(t for t in tokens if tokens.count(t) > 1)
            raise ParseError(f"item {dup!r} repeated in one transaction", k)
        rows.append(tokens)
    return from_transactions(rows)


def parse_matrix(text: str) -> ItemsetDatabase:
    reader = csv.reader(io.StringIO(text))
    records = [(k, r) for k, r in enumerate(reader, start=1) if r and any(c.strip() for c in r)]
    if not records:
        raise ParseError("empty file")
    _, header = records[0]
    header = [h.strip() for h in header]
    if any(not h for h in header):
        raise ParseError("blank item label in header", records[0][0])
    if len(set(header)) != len(header):
        raise ParseError("duplicate item label in header", records[0][0])
    if len(records) < 2:
        raise ParseError("no transaction rows")
    matrix = np.zeros((len(records) - 1, len(header)), dtype=bool)
    for t, (k, row) in enumerate(records[1:]):
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} cells, found {len(row)}", k)
        for i, cell in enumerate(row):
            cell = cell.strip()
            if cell not in ("0", "1"):
                raise ParseError(f"cell {i + 1} is {cell!r}, expected 0 or 1", k)
            matrix[t, i] = cell == "1"
    return ItemsetDatabase(tuple(header), matrix)


def load(path, format: str = "transactions") -> ItemsetDatabase:
    """Read a database file.

    ``transactions``: one transaction per line, items separated by
    whitespace; the alphabet is the set of observed labels.
    ``matrix``: CSV with a header row of item labels and 0/1 rows.
    """
    text = Path(path).read_text(encoding="utf-8")
    if format == "transactions":
        return parse_transactions(text)
    if format == "matrix":
        return parse_matrix(text)
    raise ValueError(f"unknown format {format!r}")


def dumps_transactions(db: ItemsetDatabase) -> str:
    return "".join(" ".join(db.labels(r)) + "\n" for r in db.rows)


def dumps_matrix(db: ItemsetDatabase) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(db.items)
    writer.writerows(db.matrix.astype(int).tolist())
    return out.getvalue()


def save(db: ItemsetDatabase, path, format: str = "transactions") -> None:
    if format == "transactions":
        text = dumps_transactions(db)
    elif format == "matrix":
        text = dumps_matrix(db)
    else:
        raise ValueError(f"unknown format {format!r}")
    Path(path).write_text(text, encoding="utf-8")


# -- generator -------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorParams:
    n: int
    m: int
    density: float
    gamma: float = 0.0
    planted: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("need n >= 1 and m >= 1")
        if not 0.0 < self.density < 1.0:
            raise ValueError(f"density must lie in (0, 1), got {self.density}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        if self.planted < 0:
            raise ValueError("planted must be >= 0")
        if self.planted and self.n < 2:
            raise ValueError("planted patterns need at least two items")


def generate(params: GeneratorParams) -> ItemsetDatabase:
    """Synthetic database with ``planted`` patterns and a target density.

    Each planted itemset (size uniform in [2, max(3, n // 4)], capped at n)
    is written into ceil(gamma * m) random rows. The remaining cells then
    receive exactly the number of ones needed to reach round(density * m * n)
    overall, placed uniformly at random.
    """
    p = params
    rng = np.random.default_rng(p.seed)
    matrix = np.zeros((p.m, p.n), dtype=bool)
    hi = min(p.n, max(3, p.n // 4))
    rows_per_pattern = math.ceil(round(p.gamma * p.m, 9))
    for _ in range(p.planted):
        size = int(rng.integers(2, hi + 1))
        items = rng.choice(p.n, size=size, replace=False)
        rows = rng.choice(p.m, size=rows_per_pattern, replace=False)
        matrix[np.ix_(rows, items)] = True

    target = round(p.density * p.m * p.n)
    placed = int(matrix.sum())
    if placed > target:
        raise ValueError(
            f"planted patterns already fill {placed / matrix.size:.3f} of the matrix, "
            f"above the target density {p.density}")
    free = np.flatnonzero(~matrix.ravel())
    fill = rng.choice(free, size=target - placed, replace=False)
    matrix.ravel()[fill] = True

    width = len(str(p.n))
    labels = tuple(f"i{k + 1:0{width}d}" for k in range(p.n))
    return ItemsetDatabase(labels, matrix)


TOY_ROWS = (
    "A E G K N",
    "C E H L N",
    "A D H J O",
    "B D H J N",
    "A D H J N P",
    "A E G K N P",
)


def toy_database() -> ItemsetDatabase:
    """The six-transaction, sixteen-item (A..P) running example.

    Items F, I and M never occur; the matrix view keeps them as empty columns.
    """
    alphabet = tuple("ABCDEFGHIJKLMNOP")
    matrix = np.zeros((6, 16), dtype=bool)
    for t, row in enumerate(TOY_ROWS):
        for label in row.split():
            matrix[t, alphabet.index(label)] = True
    return ItemsetDatabase(alphabet, matrix)

