"""Integer linear algebra on small matrices: primitive parts, Smith and
Hermite normal forms, and saturated integer kernels.

Matrices are :class:`IntegerMatrix` values (immutable, row-major, Python ints),
vectors are plain tuples of ints.
"""

from __future__ import annotations

import json
from math import gcd
from typing import Iterable, NamedTuple, Sequence

__all__ = [
    "IntegerMatrix",
    "SmithDecomposition",
    "primitive_part",
    "smith_normal_form",
    "hermite_normal_form",
    "integer_kernel",
    "random_unimodular",
]

LatticeVector = tuple  # tuple[int, ...]


class IntegerMatrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[int]], cols: int | None = None):
        grid = tuple(tuple(_as_int(x) for x in row) for row in entries)
        if cols is None:
            if not grid:
                raise ValueError("empty matrix needs an explicit column count")
            cols = len(grid[0])
        if any(len(r) != cols for r in grid):
            raise ValueError("ragged matrix rows")
        object.__setattr__(self, "rows", len(grid))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", grid)

    def __setattr__(self, name, value):
        raise AttributeError("IntegerMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntegerMatrix":
        return cls([[c[i] for c in columns] for i in range(rows)], len(columns))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix([self.column(j) for j in range(self.cols)], self.rows)

    def __matmul__(self, other):
        if isinstance(other, IntegerMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = [other.column(j) for j in range(other.cols)]
            return IntegerMatrix(
                [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.entries],
                other.cols)
        v = tuple(other)
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(r) for r in self.entries]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k]), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def diagonal(self) -> tuple:
        return tuple(self.entries[i][i] for i in range(min(self.rows, self.cols)))

    def __eq__(self, other):
        if not isinstance(other, IntegerMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.cols, self.entries))

    def __repr__(self):
        return f"IntegerMatrix({[list(r) for r in self.entries]})"

    def to_json(self) -> list:
        return [[str(x) for x in r] for r in self.entries]

    @classmethod
    def from_json(cls, data, cols: int | None = None) -> "IntegerMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data, cols)


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise TypeError("booleans are not integers here")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        return int(x.strip())
    raise TypeError(f"expected an integer, got {x!r}")


class SmithDecomposition(NamedTuple):
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal."""

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix

    @property
    def invariant_factors(self) -> tuple:
        return tuple(d for d in self.D.diagonal() if d)


def _content(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive_part(v: Sequence[int]) -> tuple[tuple, int]:
    """Split ``v = g * v0`` with ``v0`` primitive and ``g > 0``."""
    v = tuple(_as_int(x) for x in v)
    g = _content(v)
    if g == 0:
        raise ValueError("the zero vector has no primitive part")
    return tuple(x // g for x in v), g


def smith_normal_form(M: IntegerMatrix) -> SmithDecomposition:
    m, n = M.rows, M.cols
    a = [list(r) for r in M.entries]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):  # col_dst += k * col_src
        for r in a:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return SmithDecomposition(IntegerMatrix(u, m), IntegerMatrix(a, n), IntegerMatrix(v, n))


def hermite_normal_form(rows: Sequence[Sequence[int]], ncols: int | None = None) -> list[tuple]:
    """Row-style Hermite normal form; zero rows are dropped.

    Pivots are positive and entries above each pivot are reduced into
    ``[0, pivot)``.
    """
    a = [list(_as_int(x) for x in r) for r in rows]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    r = 0
    pivots = []
    for c in range(ncols):
        if r >= len(a):
            break
        # gcd-combine column c over rows r.. into row r
        for i in range(r + 1, len(a)):
            while a[i][c]:
                if a[r][c] == 0 or abs(a[i][c]) < abs(a[r][c]):
                    a[r], a[i] = a[i], a[r]
                    continue
                k = a[i][c] // a[r][c]
                a[i] = [x - k * y for x, y in zip(a[i], a[r])]
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            k = a[i][c] // a[r][c]
            if k:
                a[i] = [x - k * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in a[:r]]


def integer_kernel(M: IntegerMatrix) -> list[tuple]:
    """Basis of ``{v in Z^cols : M v = 0}`` in Hermite normal form.

    The kernel is saturated, so every basis vector is primitive.  An empty
    list means ``M`` is injective on ``Z^cols``.
    """
    if M.cols == 0:
        return []
    if M.rows == 0:
        return [tuple(int(i == j) for j in range(M.cols)) for i in range(M.cols)]
    snf = smith_normal_form(M)
    rank = len(snf.invariant_factors)
    basis = [snf.V.column(j) for j in range(rank, M.cols)]
    return hermite_normal_form(basis, M.cols)


def random_unimodular(n: int, rng, steps: int = 12, bound: int = 3) -> IntegerMatrix:
    """Random element of GL_n(Z) as a product of elementary matrices."""
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        k = rng.randint(-bound, bound)
        m[i] = [x + k * y for x, y in zip(m[i], m[j])]
        if rng.random() < 0.2:
            m[i] = [-x for x in m[i]]
        if rng.random() < 0.2:
            m[i], m[j] = m[j], m[i]
    return IntegerMatrix(m, n)
