"""Exact linear algebra: scalar matrices over a field, linear maps, polynomial matrices.

Scalar matrices are plain lists of rows of field elements.  ``LinearMap`` is the
immutable wrapper used for the S and T transformations; ``PolyMatrix`` holds
Jacobians and their powers.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import StructuralError
from .fields import Field
from .polynomial import Polynomial

# -- scalar matrices ---------------------------------------------------------


def identity(n: int, F: Field):
    return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]


def zeros(m: int, n: int, F: Field):
    return [[F.zero] * n for _ in range(m)]


def matmul(A, B, F: Field):
    if A and len(A[0]) != len(B):
        raise StructuralError(f"cannot multiply {len(A)}x{len(A[0])} by {len(B)}x{len(B[0]) if B else 0}")
    cols = len(B[0]) if B else 0
    red = F.reduce
    out = []
    for row in A:
        new = []
        for j in range(cols):
            s = 0
            for k, a in enumerate(row):
                if a != 0:
                    s = s + a * B[k][j]
            new.append(red(F(s)) if isinstance(s, int) else red(s))
        out.append(new)
    return out


def matvec(A, v, F: Field):
    return [row[0] for row in matmul(A, [[x] for x in v], F)]


def rref(A, F: Field):
    """Reduced row echelon form by Gauss-Jordan; returns (R, pivot_columns).

    The pivot in each column is the first nonzero entry at or below the
    current row, so the result is deterministic.
    """
    R = [[F(x) for x in row] for row in A]
    m = len(R)
    n = len(R[0]) if R else 0
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = F.inv(R[r][c])
        R[r] = [F.reduce(x * inv) for x in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [F.reduce(a - f * b) for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A, F: Field) -> int:
    if not A or not A[0]:
        return 0
    return len(rref(A, F)[1])


def nullspace(A, F: Field, ncols: int | None = None):
    """Basis of {v : A v = 0}, one vector per free column of the RREF."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    if not A:
        return [[F.one if i == j else F.zero for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(A, F)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [F.zero] * ncols
        v[f] = F.one
        for row_idx, pc in enumerate(pivots):
            v[pc] = F.reduce(-R[row_idx][f])
        basis.append(v)
    return basis


def inverse(A, F: Field):
    n = len(A)
    if any(len(row) != n for row in A):
        raise StructuralError("only square matrices have inverses")
    aug = [list(row) + e for row, e in zip(A, identity(n, F))]
    R, pivots = rref(aug, F)
    if pivots[:n] != list(range(n)):
        raise StructuralError("matrix is singular")
    return [row[n:] for row in R]


def det(A, F: Field):
    n = len(A)
    M = [[F(x) for x in row] for row in A]
    result = F.one
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return F.zero
        if p != c:
            M[c], M[p] = M[p], M[c]
            result = F.reduce(-result)
        result = F.reduce(result * M[c][c])
        inv = F.inv(M[c][c])
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = F.reduce(M[i][c] * inv)
                M[i] = [F.reduce(a - f * b) for a, b in zip(M[i], M[c])]
    return result


def complete_basis(vectors, n: int, F: Field):
    """Extend independent vectors to a basis of F^n using standard basis vectors in order.

    Returns only the added vectors.
    """
    current = [list(v) for v in vectors]
    added = []
    for j in range(n):
        if len(current) == n:
            break
        e = [F.one if i == j else F.zero for i in range(n)]
        if rank(current + [e], F) > len(current):
            current.append(e)
            added.append(e)
    if len(current) != n:
        raise StructuralError("vectors are not independent")
    return added


def row_reduction_transform(A, F: Field):
    """An invertible S with S A equal to the reduced row echelon form of A."""
    m = len(A)
    aug = [list(row) + e for row, e in zip(A, identity(m, F))]
    R, _ = rref(aug, F)
    ncols = len(A[0]) if A else 0
    return [row[ncols:] for row in R]


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


# -- linear maps ---------------------------------------------------------------


@dataclass(frozen=True)
class LinearMap:
    """An n x n scalar matrix used as a change of coordinates or of components."""

    matrix: tuple
    field: Field
    _cache: dict = dc_field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        rows = tuple(tuple(self.field(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise StructuralError("ragged matrix")

    @classmethod
    def identity(cls, n: int, F: Field) -> "LinearMap":
        return cls(tuple(map(tuple, identity(n, F))), F)

    @classmethod
    def from_columns(cls, columns, F: Field) -> "LinearMap":
        return cls(tuple(map(tuple, transpose(columns))), F)

    @property
    def size(self) -> int:
        return len(self.matrix)

    @property
    def shape(self):
        return (len(self.matrix), len(self.matrix[0]) if self.matrix else 0)

    def rows(self):
        return [list(r) for r in self.matrix]

    def det(self):
        return det(self.rows(), self.field)

    def is_invertible(self) -> bool:
        return self.shape[0] == self.shape[1] and self.det() != 0

    def inverse(self) -> "LinearMap":
        if "inv" not in self._cache:
            inv = LinearMap(tuple(map(tuple, inverse(self.rows(), self.field))), self.field)
            inv._cache["inv"] = self
            self._cache["inv"] = inv
        return self._cache["inv"]

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(tuple(map(tuple, matmul(self.rows(), other.rows(), self.field))), self.field)

    def apply(self, v):
        return matvec(self.rows(), v, self.field)

    def is_identity(self) -> bool:
        return self.matrix == tuple(map(tuple, identity(self.size, self.field)))

    def column(self, j: int):
        return [row[j] for row in self.matrix]

    def block_diag(self, other: "LinearMap") -> "LinearMap":
        a, b = self.size, other.size
        F = self.field
        rows = []
        for r in self.matrix:
            rows.append(tuple(r) + (F.zero,) * b)
        for r in other.matrix:
            rows.append((F.zero,) * a + tuple(r))
        return LinearMap(tuple(rows), F)

    def lift(self, F: Field) -> "LinearMap":
        return LinearMap(tuple(tuple(F(x) for x in r) for r in self.matrix), F)

    def to_json(self):
        return [[self.field.format(x) for x in row] for row in self.matrix]


# -- polynomial matrices -----------------------------------------------------


class PolyMatrix:
    """A rectangular grid of polynomials sharing one variable context."""

    __slots__ = ("rows", "nvars", "field")

    def __init__(self, rows, nvars: int | None = None, field: Field | None = None):
        rows = tuple(tuple(r) for r in rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise StructuralError("ragged polynomial matrix")
        first = next((e for r in rows for e in r), None)
        if first is not None:
            nvars = first.nvars if nvars is None else nvars
            field = first.field if field is None else field
        if nvars is None or field is None:
            raise StructuralError("empty matrix needs explicit nvars and field")
        for r in rows:
            for e in r:
                if e.nvars != nvars or e.field != field:
                    raise StructuralError("inconsistent entries in polynomial matrix")
        self.rows = rows
        self.nvars = nvars
        self.field = field

    @classmethod
    def identity(cls, n: int, nvars: int, F: Field) -> "PolyMatrix":
        one = Polynomial.one(nvars, F)
        zero = Polynomial.zero(nvars, F)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], nvars, F)

    @classmethod
    def from_scalars(cls, A, nvars: int, F: Field) -> "PolyMatrix":
        return cls([[Polynomial.constant(x, nvars, F) for x in row] for row in A], nvars, F)

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def is_square(self) -> bool:
        m, n = self.shape
        return m == n

    def is_zero(self) -> bool:
        return all(not e.terms for r in self.rows for e in r)

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise StructuralError("shape mismatch")
        return PolyMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)], self.nvars, self.field)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        m, k = self.shape
        k2, n = other.shape
        if k != k2:
            raise StructuralError(f"cannot multiply {m}x{k} by {k2}x{n}")
        zero = Polynomial.zero(self.nvars, self.field)
        out = []
        for i in range(m):
            row = []
            for j in range(n):
                s = zero
                for t in range(k):
                    a = self.rows[i][t]
                    b = other.rows[t][j]
                    if a.terms and b.terms:
                        s = s + a * b
                row.append(s)
            out.append(row)
        return PolyMatrix(out, self.nvars, self.field)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(list(zip(*self.rows)), self.nvars, self.field)

    def scalar_left(self, A) -> "PolyMatrix":
        return PolyMatrix.from_scalars(A, self.nvars, self.field) @ self

    def scalar_right(self, A) -> "PolyMatrix":
        return self @ PolyMatrix.from_scalars(A, self.nvars, self.field)

    def evaluate(self, point):
        return [[e.evaluate(point) for e in r] for r in self.rows]

    def substitute(self, assignments: dict, nvars: int | None = None) -> "PolyMatrix":
        rows = [[e.substitute(assignments, nvars) for e in r] for r in self.rows]
        if nvars is None:
            nvars = next(iter(assignments.values())).nvars if assignments else self.nvars
        return PolyMatrix(rows, nvars, self.field)

    def submatrix(self, rows, cols) -> "PolyMatrix":
        return PolyMatrix([[self.rows[i][j] for j in cols] for i in rows], self.nvars, self.field)

    def trace(self) -> Polynomial:
        s = Polynomial.zero(self.nvars, self.field)
        for i in range(min(self.shape)):
            s = s + self.rows[i][i]
        return s

    def det(self) -> Polynomial:
        if not self.is_square():
            raise StructuralError("determinant of a non-square matrix")
        return bareiss_det(self)

    def to_json(self):
        return [[e.to_text() for e in r] for r in self.rows]

    def __repr__(self):
        return f"PolyMatrix({self.to_json()})"


def _pick_pivot(M, k):
    """Nonzero entry with the fewest terms among rows/cols >= k (ties: lowest row, then column)."""
    best = None
    for i in range(k, len(M)):
        for j in range(k, len(M[0])):
            e = M[i][j]
            if e.terms:
                key = (len(e.terms), i, j)
                if best is None or key < best:
                    best = key
    return best


def bareiss_eliminate(pm: PolyMatrix):
    """Fraction-free elimination with full pivoting.

    Returns (rank, row_order, col_order, sign, last_pivot): the first ``rank``
    entries of the orders index the original rows/columns of a nonzero minor.
    """
    M = [list(r) for r in pm.rows]
    m, n = pm.shape
    rows = list(range(m))
    cols = list(range(n))
    prev = Polynomial.one(pm.nvars, pm.field)
    sign = 1
    r = 0
    for k in range(min(m, n)):
        piv = _pick_pivot(M, k)
        if piv is None:
            break
        _, i, j = piv
        if i != k:
            M[k], M[i] = M[i], M[k]
            rows[k], rows[i] = rows[i], rows[k]
            sign = -sign
        if j != k:
            for row in M:
                row[k], row[j] = row[j], row[k]
            cols[k], cols[j] = cols[j], cols[k]
            sign = -sign
        pkk = M[k][k]
        for i2 in range(k + 1, m):
            aik = M[i2][k]
            for j2 in range(k + 1, n):
                num = pkk * M[i2][j2]
                if aik.terms and M[k][j2].terms:
                    num = num - aik * M[k][j2]
                M[i2][j2] = num.exact_div(prev) if num.terms else num
            M[i2][k] = Polynomial.zero(pm.nvars, pm.field)
        prev = pkk
        r += 1
    return r, rows, cols, sign, prev


def bareiss_det(pm: PolyMatrix) -> Polynomial:
    n = pm.shape[0]
    if n == 0:
        return Polynomial.one(pm.nvars, pm.field)
    r, _, _, sign, last = bareiss_eliminate(pm)
    if r < n:
        return Polynomial.zero(pm.nvars, pm.field)
    return last if sign == 1 else -last
