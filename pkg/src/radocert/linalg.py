"""Exact integer linear algebra.

Smith normal form with transforms, affine Diophantine solving, and the
invariant-factor structure of quotients of finitely presented abelian groups.
Everything works on Python ints, so there is no overflow path.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, NamedTuple, Sequence

IntVector = tuple[int, ...]


class IntMatrix:
    """Immutable dense integer matrix. Zero-row and zero-column shapes are allowed."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Iterable[Iterable[int]] = ()):
        data = tuple(tuple(int(x) for x in row) for row in data)
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(data) != rows or any(len(row) != cols for row in data):
            raise ValueError(f"entry count does not match shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self._data = data

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("column count is ambiguous for an empty row list")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, [[0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, rows: int, cols: int, diag: Sequence[int]) -> IntMatrix:
        data = [[0] * cols for _ in range(rows)]
        for i, x in enumerate(diag):
            data[i][i] = x
        return cls(rows, cols, data)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> IntVector:
        return self._data[i]

    def column(self, j: int) -> IntVector:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def __iter__(self):
        return iter(self._data)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, [self.column(j) for j in range(self.cols)])

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = [other.column(j) for j in range(other.cols)]
            return IntMatrix(self.rows, other.cols,
                             [[dot(r, c) for c in ocols] for r in self._data])
        v = tuple(other)
        if len(v) != self.cols:
            raise ValueError(f"shape mismatch {self.shape} @ vector of length {len(v)}")
        return tuple(dot(r, v) for r in self._data)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        return IntMatrix(self.rows, self.cols,
                         [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, [[k * a for a in r] for r in self._data])

    def vstack(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.cols:
            raise ValueError("column counts differ")
        return IntMatrix(self.rows + other.rows, self.cols, self._data + other._data)

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        return IntMatrix(self.rows, self.cols + other.cols,
                         [a + b for a, b in zip(self._data, other._data)])

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, self._data))

    def __repr__(self):
        return f"IntMatrix({self.rows}, {self.cols}, {self.tolist()})"


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form."""

    D: IntMatrix
    U: IntMatrix
    V: IntMatrix

    @property
    def invariants(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for x in self.invariants if x != 0)


def snf(m: IntMatrix) -> SmithDecomposition:
    """Smith normal form with tracked row transform ``U`` and column transform ``V``.

    Pivots are chosen as the entry of least absolute value in the active
    submatrix. Diagonal entries come out nonnegative, each dividing the next,
    with zeros last.
    """
    rows, cols = m.rows, m.cols
    a = m.tolist()
    u = IntMatrix.identity(rows).tolist()
    v = IntMatrix.identity(cols).tolist()

    def row_op(dst, src, k):  # row[dst] += k * row[src]
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def col_op(dst, src, k):  # col[dst] += k * col[src]
        for r in a:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    for t in range(min(rows, cols)):
        while True:
            pivot = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = a[i][j]
                    if x and (pivot is None or abs(x) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    row_op(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    col_op(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, rows)
                        if any(a[i][j] % p for j in range(t + 1, cols))), None)
            if bad is None:
                break
            row_op(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        if a[t][t] == 0:
            break

    return SmithDecomposition(IntMatrix(rows, cols, a), IntMatrix(rows, rows, u),
                              IntMatrix(cols, cols, v))


class AffineSolution(NamedTuple):
    particular: IntVector | None
    kernel: list[IntVector]


def solve_affine(m: IntMatrix, v: Sequence[int]) -> AffineSolution:
    """Integer solutions of ``m @ y == v``.

    ``particular`` is None when no integer solution exists. ``kernel`` is a
    basis of the integer solutions of ``m @ y == 0`` in either case.
    """
    v = tuple(v)
    if len(v) != m.rows:
        raise ValueError(f"right-hand side has length {len(v)}, expected {m.rows}")
    dec = snf(m)
    c = dec.U @ v
    diag = dec.invariants
    r = dec.rank
    kernel = [dec.V.column(j) for j in range(r, m.cols)]
    z = [0] * m.cols
    for i in range(m.rows):
        di = diag[i] if i < r else 0
        if di == 0:
            if c[i] != 0:
                return AffineSolution(None, kernel)
        elif c[i] % di:
            return AffineSolution(None, kernel)
        else:
            z[i] = c[i] // di
    return AffineSolution(dec.V @ z, kernel)


@dataclass(frozen=True)
class FPAbelianGroup:
    """Abelian group on ``generator_count`` generators modulo the rows of ``relations``."""

    generator_count: int
    relations: IntMatrix

    def __post_init__(self):
        if self.relations.cols != self.generator_count:
            raise ValueError("relation width must equal the generator count")

    @classmethod
    def free(cls, k: int) -> FPAbelianGroup:
        return cls(k, IntMatrix.zeros(0, k))

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> FPAbelianGroup:
        """Direct sum of cyclic groups; order 0 stands for an infinite cyclic summand."""
        k = len(orders)
        rows = [[o if j == i else 0 for j in range(k)] for i, o in enumerate(orders) if o]
        return cls(k, IntMatrix(len(rows), k, rows))


@dataclass(frozen=True)
class QuotientStructure:
    """Invariant-factor decomposition of a quotient group.

    ``factors[j]`` is the order of the j-th cyclic factor (0 for an infinite
    one) and row j of ``projection`` is the covector giving the j-th factor
    coordinate of a generator-coordinate vector.
    """

    factors: tuple[int, ...]
    projection: IntMatrix

    def image(self, coords: Sequence[int]) -> IntVector:
        out = self.projection @ coords
        return tuple(x % k if k else x for x, k in zip(out, self.factors))

    @property
    def order(self) -> int | None:
        """Group order, or None when some factor is infinite."""
        if 0 in self.factors:
            return None
        total = 1
        for k in self.factors:
            total *= k
        return total


def quotient(group: FPAbelianGroup, subgroup_gens: IntMatrix) -> QuotientStructure:
    if subgroup_gens.cols != group.generator_count:
        raise ValueError("subgroup generators must have one column per group generator")
    k = group.generator_count
    dec = snf(group.relations.vstack(subgroup_gens))
    diag = dec.invariants
    factors, proj = [], []
    for j in range(k):
        dj = diag[j] if j < len(diag) else 0
        if dj == 1:
            continue
        col = dec.V.column(j)
        factors.append(dj)
        proj.append([x % dj for x in col] if dj else list(col))
    return QuotientStructure(tuple(factors), IntMatrix(len(proj), k, proj))


class NotSeparable(ValueError):
    """The vector maps to zero in every factor, so it lies in the subgroup."""


def separating_functional(q: QuotientStructure, b_coords: Sequence[int]) -> tuple[IntVector, int]:
    """Covector ``u`` and modulus ``d >= 2`` with ``u`` killing the subgroup but not ``b``.

    ``b_coords`` are factor coordinates, as returned by ``q.image``. The first
    factor in which ``b`` is nonzero is used. For an infinite factor with
    coordinate ``c`` the modulus is ``|c| + 1``.
    """
    if len(b_coords) != len(q.factors):
        raise ValueError("b_coords must have one entry per factor")
    for j, (c, k) in enumerate(zip(b_coords, q.factors)):
        if k and c % k:
            d = k
        elif not k and c:
            d = abs(c) + 1
        else:
            continue
        return tuple(x % d for x in q.projection.row(j)), d
    raise NotSeparable("b lies in the subgroup; no functional separates it")


def is_smith_form(d: IntMatrix) -> bool:
    diag = [d[i, i] for i in range(min(d.rows, d.cols))]
    off = any(d[i, j] for i in range(d.rows) for j in range(d.cols) if i != j)
    if off or any(x < 0 for x in diag):
        return False
    return all(b % a == 0 if a else b == 0 for a, b in zip(diag, diag[1:]))


def gcd_all(values: Iterable[int]) -> int:
    g = 0
    for x in values:
        g = gcd(g, x)
    return g
