"""Smith normal form of sparse integer matrices.

Matrices are reduced in place as dict-of-dict rows with Python integers, so
there is no overflow.  The elimination picks unit pivots whenever one exists
(boundary matrices of cube complexes are almost entirely units), falling back
to smallest-magnitude pivots with Euclidean steps otherwise.  The resulting
diagonal is normalised into a divisibility chain at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Mapping, Sequence


@dataclass(frozen=True)
class SNF:
    factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.factors if d > 1)


class SparseMatrix:
    """Integer matrix stored as ``{row: {col: value}}`` with a column index."""

    def __init__(self, nrows: int, ncols: int,
                 entries: Iterable[tuple[int, int, int]] = ()) -> None:
        self.nrows = nrows
        self.ncols = ncols
        self.rows: dict[int, dict[int, int]] = {}
        self.cols: dict[int, set[int]] = {}
        for i, j, v in entries:
            self.add(i, j, v)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> SparseMatrix:
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        return cls(nrows, ncols, ((i, j, int(v)) for i, r in enumerate(rows)
                                  for j, v in enumerate(r) if v))

    def add(self, i: int, j: int, v: int) -> None:
        if not v:
            return
        row = self.rows.setdefault(i, {})
        new = row.get(j, 0) + v
        if new:
            row[j] = new
            self.cols.setdefault(j, set()).add(i)
        else:
            del row[j]
            if not row:
                del self.rows[i]
            col = self.cols[j]
            col.discard(i)
            if not col:
                del self.cols[j]

    def get(self, i: int, j: int) -> int:
        return self.rows.get(i, {}).get(j, 0)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, row in self.rows.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def copy(self) -> SparseMatrix:
        m = SparseMatrix(self.nrows, self.ncols)
        m.rows = {i: dict(r) for i, r in self.rows.items()}
        m.cols = {j: set(c) for j, c in self.cols.items()}
        return m

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def matmul(self, other: SparseMatrix) -> SparseMatrix:
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = SparseMatrix(self.nrows, other.ncols)
        for i, row in self.rows.items():
            for k, a in row.items():
                for j, b in other.rows.get(k, {}).items():
                    out.add(i, j, a * b)
        return out

    # elementary operations -------------------------------------------------

    def _row_axpy(self, target: int, q: int, source: int) -> None:
        """row[target] -= q * row[source]"""
        for j, v in list(self.rows[source].items()):
            self.add(target, j, -q * v)

    def _drop(self, i: int, j: int) -> None:
        """Remove row ``i`` and column ``j`` (both must be pivot-only)."""
        for jj in self.rows.pop(i, {}):
            col = self.cols[jj]
            col.discard(i)
            if not col:
                del self.cols[jj]
        self.cols.pop(j, None)


def _find_pivot(m: SparseMatrix) -> tuple[int, int, int]:
    best = None
    for i in sorted(m.rows):
        for j, v in m.rows[i].items():
            if v in (1, -1):
                return i, j, v
            if best is None or abs(v) < abs(best[2]):
                best = (i, j, v)
    assert best is not None
    return best


def _chain(diag: list[int]) -> tuple[int, ...]:
    """Turn a diagonal into invariant factors d1 | d2 | ... ."""
    ones = [d for d in diag if d == 1]
    rest = sorted(d for d in diag if d != 1)
    for i in range(len(rest)):
        for j in range(i + 1, len(rest)):
            a, b = rest[i], rest[j]
            g = gcd(a, b)
            rest[i], rest[j] = g, a // g * b
    return tuple(ones + sorted(rest))


def smith_normal_form(matrix: SparseMatrix | Sequence[Sequence[int]]) -> SNF:
    """Invariant factors (all positive) of an integer matrix."""
    if isinstance(matrix, SparseMatrix):
        m = matrix.copy()
    else:
        m = SparseMatrix.from_dense(matrix)
    diag: list[int] = []
    while m.rows:
        i, j, p = _find_pivot(m)
        if p not in (1, -1):
            # Euclidean pass; any nonzero remainder yields a smaller pivot
            done = True
            for r in list(m.cols[j]):
                if r != i:
                    q = m.rows[r][j] // p
                    m._row_axpy(r, q, i)
                    if m.get(r, j):
                        done = False
            if not done:
                continue
            for c in list(m.rows[i]):
                if c != j:
                    q = m.rows[i][c] // p
                    # column op c -= q * col j touches only row i
                    m.add(i, c, -q * p)
                    if m.get(i, c):
                        done = False
            if not done:
                continue
            diag.append(abs(p))
            m._drop(i, j)
            continue
        for r in list(m.cols[j]):
            if r != i:
                m._row_axpy(r, m.rows[r][j] * p, i)
        diag.append(1)
        m._drop(i, j)
    return SNF(_chain(diag))


def rank(matrix: SparseMatrix | Sequence[Sequence[int]]) -> int:
    return smith_normal_form(matrix).rank


def from_mapping(nrows: int, ncols: int, entries: Mapping[tuple[int, int], int]) -> SparseMatrix:
    return SparseMatrix(nrows, ncols, ((i, j, v) for (i, j), v in entries.items()))
