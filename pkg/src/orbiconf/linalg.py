"""Sparse exact linear algebra over the rationals and the integers.

Matrices are stored column-wise as dictionaries ``row -> value`` with no
stored zeros.  Entries are Python ints or :class:`fractions.Fraction`.

Rank and Smith normal form share one elimination kernel.  Pivots are taken
in the sparsest column first, and inside that column in the sparsest row
(a cheap Markowitz heuristic).  For Smith normal form only unit pivots are
allowed during the sparse phase; whatever is left over goes through a dense
Smith reduction.  Unit-pivot elimination is a unimodular change of basis, so
the invariant factors of the original matrix are ``1`` (once per pivot)
followed by the invariant factors of the leftover block.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


class SparseMatrix:
    """Immutable sparse matrix with exact entries.

    >>> A = SparseMatrix.from_dense([[1, 2], [2, 4]])
    >>> A.shape, A.nnz
    ((2, 2), 4)
    >>> rank_rational(A)
    1
    """

    __slots__ = ("rows", "cols", "_columns")

    def __init__(self, rows: int, cols: int, columns: Sequence[dict] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.rows = rows
        self.cols = cols
        if columns is None:
            columns = [{} for _ in range(cols)]
        if len(columns) != cols:
            raise ValueError(f"expected {cols} columns, got {len(columns)}")
        cleaned = []
        for col in columns:
            c = {}
            for r, v in col.items():
                if not 0 <= r < rows:
                    raise ValueError(f"row index {r} out of range for {rows} rows")
                if v:
                    c[r] = v
            cleaned.append(c)
        self._columns = tuple(cleaned)

    @classmethod
    def from_entries(cls, rows, cols, entries):
        """Build from a mapping or iterable of ``((row, col), value)``."""
        columns = [{} for _ in range(cols)]
        items = entries.items() if isinstance(entries, dict) else entries
        for (r, c), v in items:
            if not 0 <= c < cols:
                raise ValueError(f"column index {c} out of range for {cols} columns")
            columns[c][r] = columns[c].get(r, 0) + v
        return cls(rows, cols, columns)

    @classmethod
    def from_dense(cls, data, cols: int | None = None):
        data = [list(row) for row in data]
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        columns = [{} for _ in range(cols)]
        for r, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged dense matrix")
            for c, v in enumerate(row):
                if v:
                    columns[c][r] = v
        return cls(rows, cols, columns)

    @classmethod
    def identity(cls, size, scale=1):
        return cls(size, size, [{i: scale} for i in range(size)])

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols)

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def nnz(self):
        return sum(len(c) for c in self._columns)

    def column(self, c) -> dict:
        return dict(self._columns[c])

    def columns(self) -> list[dict]:
        """Private copies of the columns."""
        return [dict(c) for c in self._columns]

    def entries(self):
        for c, col in enumerate(self._columns):
            for r in sorted(col):
                yield (r, c), col[r]

    def __getitem__(self, key):
        r, c = key
        return self._columns[c].get(r, 0)

    def transpose(self) -> "SparseMatrix":
        columns = [{} for _ in range(self.rows)]
        for c, col in enumerate(self._columns):
            for r, v in col.items():
                columns[r][c] = v
        return SparseMatrix(self.cols, self.rows, columns)

    def to_dense(self) -> list[list]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for c, col in enumerate(self._columns):
            for r, v in col.items():
                out[r][c] = v
        return out

    def apply(self, vec: dict) -> dict:
        """Multiply by a sparse column vector ``{col: value}``."""
        out: dict = {}
        for c, x in vec.items():
            for r, v in self._columns[c].items():
                s = out.get(r, 0) + x * v
                if s:
                    out[r] = s
                else:
                    out.pop(r, None)
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return SparseMatrix(self.rows, other.cols, [self.apply(col) for col in other._columns])

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        cols = []
        for a, b in zip(self._columns, other._columns):
            c = dict(a)
            for r, v in b.items():
                c[r] = c.get(r, 0) + v
            cols.append(c)
        return SparseMatrix(self.rows, self.cols, cols)

    def __neg__(self):
        return SparseMatrix(self.rows, self.cols, [{r: -v for r, v in c.items()} for c in self._columns])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        return SparseMatrix(self.rows, self.cols, [{r: k * v for r, v in c.items()} for c in self._columns])

    def is_zero(self):
        return all(not c for c in self._columns)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._columns == other._columns

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(sorted(c.items())) for c in self._columns)))

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


# ---------------------------------------------------------------------------
# elimination kernel


def _integer_columns(columns: Iterable[dict]) -> list[dict]:
    """Scale each column to integers; column scaling keeps the rank."""
    out = []
    for col in columns:
        if any(isinstance(v, Fraction) and v.denominator != 1 for v in col.values()):
            den = 1
            for v in col.values():
                d = Fraction(v).denominator
                den = den * d // gcd(den, d)
            out.append({r: int(Fraction(v) * den) for r, v in col.items()})
        else:
            out.append({r: int(v) for r, v in col.items() if v})
    return out


def _eliminate(columns: list[dict], unit_only: bool):
    """Sparse Gaussian elimination on integer columns (consumed in place).

    Returns ``(pivots, residual)``.  ``pivots`` counts eliminated pivots;
    ``residual`` lists the columns that could not be pivoted (only non-empty
    when ``unit_only`` is set).
    """
    cols = {c: col for c, col in enumerate(columns) if col}
    rows: dict[int, set] = {}
    for c, col in cols.items():
        for r in col:
            rows.setdefault(r, set()).add(c)
    heap = [(len(col), c) for c, col in cols.items()]
    heapq.heapify(heap)
    stuck: set = set()
    pivots = 0
    while heap:
        length, c = heapq.heappop(heap)
        col = cols.get(c)
        if col is None or len(col) != length:
            continue
        if c in stuck:
            continue
        best = None
        best_key = None
        for r, v in col.items():
            unit = v == 1 or v == -1
            if unit_only and not unit:
                continue
            key = (not unit, len(rows[r]), abs(v))
            if best_key is None or key < best_key:
                best_key = key
                best = r
        if best is None:
            stuck.add(c)
            continue
        r = best
        p = col[r]
        del cols[c]
        for r2 in col:
            rows[r2].discard(c)
        others = rows.pop(r)
        pivots += 1
        unit = p == 1 or p == -1
        for c2 in others:
            col2 = cols[c2]
            f = col2.pop(r)
            if unit:
                mult = f * p
                for r2, v in col.items():
                    if r2 == r:
                        continue
                    nv = col2.get(r2, 0) - mult * v
                    if nv:
                        if r2 not in col2:
                            rows[r2].add(c2)
                        col2[r2] = nv
                    elif r2 in col2:
                        del col2[r2]
                        rows[r2].discard(c2)
            else:
                # fraction-free update: col2 <- p*col2 - f*col (rank preserving)
                for r2 in list(col2):
                    col2[r2] *= p
                for r2, v in col.items():
                    if r2 == r:
                        continue
                    nv = col2.get(r2, 0) - f * v
                    if nv:
                        if r2 not in col2:
                            rows[r2].add(c2)
                        col2[r2] = nv
                    elif r2 in col2:
                        del col2[r2]
                        rows[r2].discard(c2)
                if col2:
                    g = 0
                    for v in col2.values():
                        g = gcd(g, v)
                        if g == 1:
                            break
                    if g > 1:
                        for r2 in col2:
                            col2[r2] //= g
            if not col2:
                del cols[c2]
                stuck.discard(c2)
            else:
                stuck.discard(c2)
                heapq.heappush(heap, (len(col2), c2))
    residual = [cols[c] for c in sorted(stuck) if c in cols]
    return pivots, residual


def rank_rational(A: SparseMatrix) -> int:
    """Exact rank over the rationals.

    >>> rank_rational(SparseMatrix.identity(5))
    5
    >>> rank_rational(SparseMatrix.zero(3, 4))
    0
    """
    pivots, residual = _eliminate(_integer_columns(A.columns()), unit_only=False)
    assert not residual
    return pivots


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    """Invariant factors ``d_1 | d_2 | ...`` (nonzero ones only).

    ``left`` and ``right`` are dense unimodular matrices with
    ``left * A * right = diag(factors)`` when transforms were requested.
    """

    factors: tuple
    rows: int
    cols: int
    left: tuple | None = field(default=None, compare=False)
    right: tuple | None = field(default=None, compare=False)

    @property
    def rank(self):
        return len(self.factors)

    @property
    def torsion(self):
        """Invariant factors greater than one."""
        return tuple(d for d in self.factors if d > 1)


def _normalize_factors(diag: Iterable[int]) -> tuple:
    """Turn any list of nonzero diagonal entries into a divisibility chain."""
    ds = sorted(abs(d) for d in diag if d)
    n = len(ds)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = ds[i], ds[j]
            g = gcd(a, b)
            if g != a:
                ds[i], ds[j] = g, a // g * b
    return tuple(ds)


def _dense_smith_diagonal(mat: list[list[int]]) -> list[int]:
    """Diagonal of a Smith-equivalent matrix (divisibility fixed afterwards)."""
    a = [row[:] for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        # smallest nonzero entry of the trailing block as pivot
        piv = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (piv is None or abs(v) < piv[0]):
                    piv = (abs(v), i, j)
                    if piv[0] == 1:
                        break
            if piv is not None and piv[0] == 1:
                break
        if piv is None:
            break
        _, i, j = piv
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            changed = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        rt, ri = a[t], a[i]
                        for k in range(t, n):
                            ri[k] -= q * rt[k]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        changed = True
                        break
            if changed:
                continue
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for row in a[t:]:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        changed = True
                        break
            if not changed:
                break
        diag.append(a[t][t])
        t += 1
    return diag


def _dense_smith_with_transforms(mat):
    """Full Smith form with unimodular transforms ``L A R = D``."""
    a = [list(map(int, row)) for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    L = [[int(i == j) for j in range(m)] for i in range(m)]
    R = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        L[i] = [x - q * y for x, y in zip(L[i], L[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for row in a:
            row[i] -= q * row[j]
        for row in R:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        entries = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    row_op(i, t, a[i][t] // a[t][t])
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    col_op(j, t, a[t][j] // a[t][t])
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # enforce divisibility of the trailing block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if a[i][j] % a[t][t]), None)
                if bad is None:
                    break
                row_op(t, bad[0], -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            L[t] = [-x for x in L[t]]
        t += 1
    return a, L, R


def smith_normal_form(A: SparseMatrix, transforms: bool = False) -> SmithForm:
    """Invariant factors of an integer matrix.

    >>> smith_normal_form(SparseMatrix.from_dense([[2, 0], [0, 3]])).factors
    (1, 6)
    >>> smith_normal_form(SparseMatrix.from_dense([[0]])).rank
    0
    """
    for col in A._columns:
        for v in col.values():
            if isinstance(v, Fraction) and v.denominator != 1:
                raise ValueError("smith_normal_form needs integer entries")
    if transforms:
        D, L, R = _dense_smith_with_transforms(A.to_dense())
        diag = [D[i][i] for i in range(min(A.rows, A.cols)) if D[i][i]]
        return SmithForm(tuple(diag), A.rows, A.cols, tuple(map(tuple, L)), tuple(map(tuple, R)))
    cols = [{r: int(v) for r, v in col.items()} for col in A._columns]
    pivots, residual = _eliminate(cols, unit_only=True)
    diag = [1] * pivots
    if residual:
        row_ids = sorted({r for col in residual for r in col})
        index = {r: i for i, r in enumerate(row_ids)}
        dense = [[0] * len(residual) for _ in row_ids]
        for j, col in enumerate(residual):
            for r, v in col.items():
                dense[index[r]][j] = v
        diag.extend(_dense_smith_diagonal(dense))
    return SmithForm(_normalize_factors(diag), A.rows, A.cols)


# ---------------------------------------------------------------------------
# kernels and echelon forms


def kernel_basis(A: SparseMatrix) -> list[dict]:
    """Basis of the right kernel as sparse vectors ``{col: Fraction}``.

    >>> len(kernel_basis(SparseMatrix.from_dense([[1, 1, 0]])))
    2
    """
    # row-reduce A to reduced echelon form with Fraction arithmetic
    rows: list[dict] = [{} for _ in range(A.rows)]
    for c, col in enumerate(A._columns):
        for r, v in col.items():
            rows[r][c] = Fraction(v)
    pivot_rows: dict[int, dict] = {}  # pivot column -> normalized row
    for row in rows:
        row = dict(row)
        while row:
            # eliminate existing pivots from the row
            hit = next((c for c in row if c in pivot_rows), None)
            if hit is None:
                break
            f = row[hit]
            for c, v in pivot_rows[hit].items():
                nv = row.get(c, 0) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
        if not row:
            continue
        p = min(row)
        inv = 1 / row[p]
        row = {c: v * inv for c, v in row.items()}
        for q, prow in pivot_rows.items():
            f = prow.get(p)
            if f:
                for c, v in row.items():
                    nv = prow.get(c, 0) - f * v
                    if nv:
                        prow[c] = nv
                    else:
                        prow.pop(c, None)
        pivot_rows[p] = row
    basis = []
    for free in range(A.cols):
        if free in pivot_rows:
            continue
        vec = {free: Fraction(1)}
        for p, prow in pivot_rows.items():
            v = prow.get(free)
            if v:
                vec[p] = -v
        basis.append(vec)
    return basis


def clear_denominators(vec: dict) -> dict:
    """Scale a rational vector to a primitive integer vector."""
    den = 1
    for v in vec.values():
        d = Fraction(v).denominator
        den = den * d // gcd(den, d)
    out = {k: int(Fraction(v) * den) for k, v in vec.items() if v}
    g = 0
    for v in out.values():
        g = gcd(g, v)
    if g > 1:
        out = {k: v // g for k, v in out.items()}
    return out


def dense_rank(mat: Sequence[Sequence]) -> int:
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    return rank_rational(SparseMatrix.from_dense(mat, cols))
