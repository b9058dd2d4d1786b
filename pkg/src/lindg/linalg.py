"""Dense exact linear algebra over a cyclotomic field.

Vectors are tuples of FieldElement. Pivoting is deterministic (first nonzero
entry in column order), so every basis returned here is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .field import FieldElement

Vector = tuple  # tuple[FieldElement, ...]


class Matrix:
    """rows x cols matrix of FieldElement, stored row-major and never mutated."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, rows: Sequence[Sequence], ncols: int | None = None):
        rows = tuple(tuple(field(x) if not isinstance(x, FieldElement) else x for x in r)
                     for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix without rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self.field = field
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def zeros(cls, field, nrows, ncols):
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, field, columns, nrows):
        columns = list(columns)
        return cls(field, [[c[i] for c in columns] for i in range(nrows)], len(columns))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"

    def columns(self):
        return [tuple(r[j] for r in self.rows) for j in range(self.ncols)]

    def transpose(self):
        return Matrix(self.field, self.columns(), self.nrows)

    def is_zero(self):
        return all(x.is_zero() for r in self.rows for x in r)

    def __add__(self, other):
        _same_shape(self, other)
        return Matrix(self.field,
                      [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      self.ncols)

    def __sub__(self, other):
        _same_shape(self, other)
        return Matrix(self.field,
                      [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      self.ncols)

    def __neg__(self):
        return Matrix(self.field, [[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c):
        c = self.field(c)
        return Matrix(self.field, [[c * a for a in r] for r in self.rows], self.ncols)

    def apply(self, v) -> Vector:
        if len(v) != self.ncols:
            raise ValueError(f"vector of length {len(v)} for {self.nrows}x{self.ncols} matrix")
        return tuple(dot(r, v, self.field) for r in self.rows)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.columns()
            return Matrix(self.field,
                          [[dot(r, c, self.field) for c in cols] for r in self.rows],
                          other.ncols)
        return self.apply(other)

    def rank(self) -> int:
        return len(rref(self)[1])


def _same_shape(a, b):
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")


def dot(u, v, field):
    acc = field.zero
    for a, b in zip(u, v):
        if a and b:
            acc = acc + a * b
    return acc


def zero_vector(field, n) -> Vector:
    return (field.zero,) * n


def unit_vector(field, n, i) -> Vector:
    z, o = field.zero, field.one
    return tuple(o if k == i else z for k in range(n))


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * a for a in v)


def is_zero_vector(v):
    return all(x.is_zero() for x in v)


def hstack(field, mats, nrows):
    rows = [[] for _ in range(nrows)]
    for m in mats:
        if m.nrows != nrows:
            raise ValueError("hstack row mismatch")
        for i, r in enumerate(m.rows):
            rows[i].extend(r)
    return Matrix(field, rows, sum(m.ncols for m in mats))


def vstack(field, mats, ncols):
    rows = []
    for m in mats:
        if m.ncols != ncols:
            raise ValueError("vstack column mismatch")
        rows.extend(m.rows)
    return Matrix(field, rows, ncols)


def rref(M: Matrix):
    """Reduced row echelon form. Returns (rows as lists, pivot columns)."""
    rows = [list(r) for r in M.rows]
    pivots = []
    r = 0
    for c in range(M.ncols):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(M: Matrix) -> int:
    return M.rank()


@dataclass(frozen=True)
class Subspace:
    ambient: int
    basis: tuple  # tuple of Vector

    @property
    def dim(self):
        return len(self.basis)


def kernel_basis(M: Matrix) -> Subspace:
    """Basis of {v : M v = 0}; one vector per free column, free entry = 1."""
    F = M.field
    rows, pivots = rref(M)
    pivset = set(pivots)
    basis = []
    for free in range(M.ncols):
        if free in pivset:
            continue
        v = [F.zero] * M.ncols
        v[free] = F.one
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][free]
        basis.append(tuple(v))
    return Subspace(M.ncols, tuple(basis))


def solve_linear(M: Matrix, b) -> Vector | None:
    """A particular solution of M x = b (free variables set to 0), or None."""
    F = M.field
    if len(b) != M.nrows:
        raise ValueError("right-hand side length does not match matrix rows")
    aug = Matrix(F, [list(r) + [x] for r, x in zip(M.rows, b)], M.ncols + 1)
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == M.ncols:
        return None
    x = [F.zero] * M.ncols
    for i, pc in enumerate(pivots):
        x[pc] = rows[i][M.ncols]
    return tuple(x)


class _Echelon:
    """Incrementally grown span; rows are kept reduced against earlier pivots."""

    def __init__(self):
        self.rows = []              # (pivot, row with row[pivot] = 1)

    def residue(self, v):
        v = list(v)
        for p, row in self.rows:
            c = v[p]
            if c:
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def add(self, v) -> bool:
        """Add v to the span; False if it was already there."""
        r = self.residue(v)
        p = next((i for i, x in enumerate(r) if x), None)
        if p is None:
            return False
        inv = r[p].inverse()
        self.rows.append((p, [x * inv for x in r]))
        return True


def quotient_data(sub: Subspace, ambient: int, field):
    """Complement of ``sub`` plus the projection onto complement coordinates.

    Returns (reps, P): ``reps`` completes sub's basis to a basis of K^ambient
    using standard vectors in index order, and ``P`` (len(reps) x ambient)
    sends v = sum a_i sub_i + sum b_j reps_j to (b_j).
    """
    if sub.ambient != ambient:
        raise ValueError("subspace does not fit the ambient dimension")
    span = _Echelon()
    for v in sub.basis:
        if not span.add(v):
            raise ValueError("subspace basis is not linearly independent")
    current = list(sub.basis)
    reps = []
    for i in range(ambient):
        if len(current) == ambient:
            break
        e = unit_vector(field, ambient, i)
        if span.add(e):
            current.append(e)
            reps.append(e)
    if not reps:
        return (), Matrix.zeros(field, 0, ambient)
    # change-of-basis inverse: rows k >= dim(sub) give the rep coordinates
    B = Matrix.from_columns(field, current, ambient)
    Binv = inverse(B)
    k = sub.dim
    P = Matrix(field, Binv.rows[k:], ambient)
    return tuple(reps), P


def inverse(M: Matrix) -> Matrix:
    if M.nrows != M.ncols:
        raise ValueError("inverse of a non-square matrix")
    n = M.nrows
    F = M.field
    I = Matrix.identity(F, n)
    aug = hstack(F, [M, I], n)
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return Matrix(F, [r[n:] for r in rows], n)


def left_inverse(field, columns, ambient) -> Matrix:
    """Matrix L with L @ C = I for the independent ``columns`` C."""
    k = len(columns)
    if k == 0:
        return Matrix.zeros(field, 0, ambient)
    sub = Subspace(ambient, tuple(columns))
    reps, _ = quotient_data(sub, ambient, field)
    B = Matrix.from_columns(field, list(columns) + list(reps), ambient)
    return Matrix(field, inverse(B).rows[:k], ambient)
