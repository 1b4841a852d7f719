"""Sparse exact rational matrices.

Entries are stored as ``Fraction`` values keyed by ``(row, col)``. All chain
matrices in this package use the (target, source) orientation, so a
stationary vector is a right kernel vector of the generator.
"""

from __future__ import annotations

import json
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


def fstr(x) -> str:
    """Canonical ``p/q`` string of a rational (``p`` when integral)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def parse_rational(s) -> Fraction:
    return Fraction(str(s).strip())


class SparseRationalMatrix:
    """Exact rational matrix with no explicit zeros."""

    __slots__ = ("nrows", "ncols", "_entries", "_cols")

    def __init__(self, nrows: int, ncols: int, entries: Mapping | None = None):
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        data = {}
        if entries:
            for (r, c), v in entries.items():
                if not (0 <= r < self.nrows and 0 <= c < self.ncols):
                    raise IndexError("entry (%d, %d) outside %dx%d" % (r, c, nrows, ncols))
                v = Fraction(v)
                if v:
                    data[r, c] = v
        self._entries = data
        self._cols = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_triples(cls, nrows, ncols, triples: Iterable) -> "SparseRationalMatrix":
        """Sum duplicate ``(row, col, value)`` triples."""
        acc = defaultdict(Fraction)
        for r, c, v in triples:
            acc[r, c] += Fraction(v)
        return cls(nrows, ncols, acc)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseRationalMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        entries = {}
        for r, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged dense matrix")
            for c, v in enumerate(row):
                if v:
                    entries[r, c] = v
        return cls(nrows, ncols, entries)

    @classmethod
    def identity(cls, n: int) -> "SparseRationalMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    # -- access -----------------------------------------------------------

    @property
    def shape(self):
        return self.nrows, self.ncols

    @property
    def entries(self) -> dict:
        return dict(self._entries)

    def items(self):
        return self._entries.items()

    def nnz(self) -> int:
        return len(self._entries)

    def __getitem__(self, key) -> Fraction:
        return self._entries.get(key, Fraction(0))

    def column(self, c: int) -> dict:
        return dict(self._columns().get(c, {}))

    def _columns(self):
        if self._cols is None:
            cols = defaultdict(dict)
            for (r, c), v in self._entries.items():
                cols[c][r] = v
            self._cols = cols
        return self._cols

    def _rows(self):
        rows = defaultdict(dict)
        for (r, c), v in self._entries.items():
            rows[r][c] = v
        return rows

    def column_sums(self) -> list:
        sums = [Fraction(0)] * self.ncols
        for (_, c), v in self._entries.items():
            sums[c] += v
        return sums

    def row_sums(self) -> list:
        sums = [Fraction(0)] * self.nrows
        for (r, _), v in self._entries.items():
            sums[r] += v
        return sums

    def to_dense(self) -> list:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self._entries.items():
            out[r][c] = v
        return out

    # -- algebra ----------------------------------------------------------

    def transpose(self) -> "SparseRationalMatrix":
        return SparseRationalMatrix(self.ncols, self.nrows,
                                    {(c, r): v for (r, c), v in self._entries.items()})

    T = property(transpose)

    def __matmul__(self, other):
        if isinstance(other, SparseRationalMatrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
            acc = defaultdict(Fraction)
            left_cols = self._columns()
            for (k, c), v in other._entries.items():
                for r, u in left_cols.get(k, {}).items():
                    acc[r, c] += u * v
            return SparseRationalMatrix(self.nrows, other.ncols, acc)
        return self.matvec(other)

    def matvec(self, vec: Sequence) -> list:
        if len(vec) != self.ncols:
            raise ValueError("vector length %d != %d columns" % (len(vec), self.ncols))
        out = [Fraction(0)] * self.nrows
        for (r, c), v in self._entries.items():
            x = vec[c]
            if x:
                out[r] += v * x
        return out

    def __add__(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        acc = defaultdict(Fraction, self._entries)
        for k, v in other._entries.items():
            acc[k] += v
        return SparseRationalMatrix(self.nrows, self.ncols, acc)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "SparseRationalMatrix":
        s = Fraction(s)
        return SparseRationalMatrix(self.nrows, self.ncols,
                                    {k: v * s for k, v in self._entries.items()})

    def __eq__(self, other):
        if not isinstance(other, SparseRationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self):
        return hash((self.shape, frozenset(self._entries.items())))

    def __repr__(self):
        return "SparseRationalMatrix(%d, %d, nnz=%d)" % (self.nrows, self.ncols, self.nnz())

    def first_difference(self, other: "SparseRationalMatrix"):
        """Smallest ``(row, col, lhs, rhs)`` where the matrices differ, or None."""
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s vs %s" % (self.shape, other.shape))
        keys = sorted(set(self._entries) | set(other._entries))
        for k in keys:
            a, b = self[k], other[k]
            if a != b:
                return k[0], k[1], a, b
        return None

    def permute(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "SparseRationalMatrix":
        """Relabel: entry (r, c) moves to (row_perm[r], col_perm[c])."""
        return SparseRationalMatrix(self.nrows, self.ncols,
                                    {(row_perm[r], col_perm[c]): v
                                     for (r, c), v in self._entries.items()})

    # -- exact elimination ------------------------------------------------

    def rref(self):
        """Reduced row echelon form.

        Returns ``(rows, pivots)`` where ``rows[k]`` is a dict col -> value
        with leading 1 in column ``pivots[k]``. Pivot columns are chosen left
        to right; among candidate rows the sparsest one is taken, ties broken
        by row index, so the result is deterministic.
        """
        rows = [dict(r) for _, r in sorted(self._rows().items())]
        rows = [r for r in rows if r]
        return _rref_rows(rows, self.ncols)

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list:
        """Basis of the right kernel as a list of dense Fraction lists."""
        rows, pivots = self.rref()
        return _kernel_from_rref(rows, pivots, self.ncols)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> str:
        ents = [[r, c, fstr(v)] for (r, c), v in sorted(self._entries.items())]
        return json.dumps({"nrows": self.nrows, "ncols": self.ncols, "entries": ents})

    @classmethod
    def from_json(cls, text: str) -> "SparseRationalMatrix":
        obj = json.loads(text)
        return cls.from_triples(obj["nrows"], obj["ncols"],
                                ((r, c, parse_rational(v)) for r, c, v in obj["entries"]))

    def to_text(self) -> str:
        """Dense table, one row per line, space separated ``p/q`` values."""
        return "\n".join(" ".join(fstr(v) for v in row) for row in self.to_dense()) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SparseRationalMatrix":
        rows = [[parse_rational(tok) for tok in line.split()]
                for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
        return cls.from_dense(rows)


def load_matrix(path) -> SparseRationalMatrix:
    """Read a matrix file, JSON or dense text by content sniffing."""
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return SparseRationalMatrix.from_json(text)
    return SparseRationalMatrix.from_text(text)


def save_matrix(m: SparseRationalMatrix, path, fmt: str = "json") -> None:
    with open(path, "w") as fh:
        fh.write(m.to_json() if fmt == "json" else m.to_text())


def _rref_rows(rows: list, ncols: int):
    # column -> set of row ids having a nonzero there
    occ = defaultdict(set)
    for i, r in enumerate(rows):
        for c in r:
            occ[c].add(i)
    used = set()
    pivot_rows = []
    pivots = []
    for col in range(ncols):
        cands = [i for i in occ.get(col, ()) if i not in used]
        if not cands:
            continue
        p = min(cands, key=lambda i: (len(rows[i]), i))
        used.add(p)
        prow = rows[p]
        inv = 1 / prow[col]
        if inv != 1:
            for c in prow:
                prow[c] *= inv
        for i in list(occ[col]):
            if i == p:
                continue
            row = rows[i]
            f = row[col]
            for c, v in prow.items():
                nv = row.get(c, 0) - f * v
                if nv:
                    if c not in row:
                        occ[c].add(i)
                    row[c] = nv
                elif c in row:
                    del row[c]
                    occ[c].discard(i)
        pivot_rows.append(p)
        pivots.append(col)
    return [rows[p] for p in pivot_rows], pivots


def _kernel_from_rref(rows, pivots, ncols):
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            v = row.get(f)
            if v:
                vec[p] = -v
        basis.append(vec)
    return basis
