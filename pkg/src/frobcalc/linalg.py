"""Dense exact matrices and the Gaussian-elimination kernels.

Everything here is plain exact arithmetic delegated to a :class:`Field`;
pivot choice is always the first nonzero entry in the current column, so
echelon forms (and hence kernel bases, solutions, reports) are
deterministic.  Matrices are immutable by convention: no public method
mutates ``data``.
"""

from __future__ import annotations

from .errors import MalformedInput
from .fields import Field, Scalar


class Matrix:
    """Dense matrix over a single field; ``data`` holds raw field values."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, data, *, _raw=False):
        self.field = field
        if _raw:
            self.data = data
        else:
            coerced = []
            for row in data:
                coerced.append([self._coerce_entry(field, v) for v in row])
            self.data = coerced
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        if any(len(r) != self.cols for r in self.data):
            raise MalformedInput("ragged rows")

    @staticmethod
    def _coerce_entry(field, v):
        if isinstance(v, Scalar) and v.field != field:
            raise MalformedInput("mixed-field entries")
        return field.coerce(v)

    # construction ----------------------------------------------------------
    @staticmethod
    def zero(field, rows, cols):
        z = field.zero()
        return Matrix(field, [[z] * cols for _ in range(rows)], _raw=True)

    @staticmethod
    def identity(field, n):
        z, o = field.zero(), field.one()
        data = [[z] * n for _ in range(n)]
        for i in range(n):
            data[i][i] = o
        return Matrix(field, data, _raw=True)

    @staticmethod
    def from_columns(field, columns):
        rows = len(columns[0]) if columns else 0
        data = [[field.coerce(columns[j][i]) for j in range(len(columns))]
                for i in range(rows)]
        return Matrix(field, data, _raw=True)

    # access ------------------------------------------------------------------
    def entry(self, i, j):
        return Scalar(self.field, self.data[i][j])

    def row(self, i):
        return list(self.data[i])

    def column(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.data == other.data)

    def __hash__(self):
        return hash((self.field, tuple(tuple(r) for r in self.data)))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(v) for v in row)
                         for row in self.data)
        return f"Matrix({self.rows}x{self.cols}: {body})"

    # arithmetic ----------------------------------------------------------------
    def __add__(self, other):
        self._same_shape(other)
        add = self.field.add
        return Matrix(self.field,
                      [[add(a, b) for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.data, other.data)], _raw=True)

    def __sub__(self, other):
        self._same_shape(other)
        sub = self.field.sub
        return Matrix(self.field,
                      [[sub(a, b) for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.data, other.data)], _raw=True)

    def __neg__(self):
        neg = self.field.neg
        return Matrix(self.field, [[neg(a) for a in r] for r in self.data], _raw=True)

    def scale(self, c):
        c = self.field.coerce(c)
        mul = self.field.mul
        return Matrix(self.field, [[mul(c, a) for a in r] for r in self.data], _raw=True)

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field:
            raise MalformedInput("mixed-field product")
        if self.cols != other.rows:
            raise MalformedInput("inner dimensions differ")
        f = self.field
        zero, add, mul, is_zero = f.zero(), f.add, f.mul, f.is_zero
        out = []
        for i in range(self.rows):
            ri = self.data[i]
            orow = [zero] * other.cols
            for k in range(self.cols):
                a = ri[k]
                if is_zero(a):
                    continue
                rk = other.data[k]
                for j in range(other.cols):
                    b = rk[j]
                    if not is_zero(b):
                        orow[j] = add(orow[j], mul(a, b))
            out.append(orow)
        return Matrix(f, out, _raw=True)

    def apply(self, vec):
        """Matrix-vector product on a raw-value vector."""
        if len(vec) != self.cols:
            raise MalformedInput("vector length differs from column count")
        f = self.field
        vec = [f.coerce(v) for v in vec]
        out = []
        for i in range(self.rows):
            acc = f.zero()
            ri = self.data[i]
            for j, v in enumerate(vec):
                if not f.is_zero(v):
                    acc = f.add(acc, f.mul(ri[j], v))
            out.append(acc)
        return out

    def transpose(self):
        return Matrix(self.field,
                      [[self.data[i][j] for i in range(self.rows)]
                       for j in range(self.cols)], _raw=True)

    def trace(self):
        if self.rows != self.cols:
            raise MalformedInput("trace of a non-square matrix")
        acc = self.field.zero()
        for i in range(self.rows):
            acc = self.field.add(acc, self.data[i][i])
        return acc

    def is_identity(self):
        return self == Matrix.identity(self.field, self.rows) if self.rows == self.cols else False

    def _same_shape(self, other):
        if self.field != other.field:
            raise MalformedInput("mixed-field entries")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise MalformedInput("shape mismatch")


def _rref_raw(field, data):
    """In-place RREF on a list-of-lists copy; returns (data, pivots)."""
    rows = len(data)
    cols = len(data[0]) if rows else 0
    is_zero, mul, sub, inv = field.is_zero, field.mul, field.sub, field.inv
    pivots = []
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, rows):
            if not is_zero(data[i][c]):
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            data[r], data[pr] = data[pr], data[r]
        pval = data[r][c]
        if not field.is_one(pval):
            ipv = inv(pval)
            data[r] = [mul(ipv, v) for v in data[r]]
        rr = data[r]
        for i in range(rows):
            if i == r:
                continue
            fac = data[i][c]
            if is_zero(fac):
                continue
            di = data[i]
            data[i] = [sub(a, mul(fac, b)) for a, b in zip(di, rr)]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return data, pivots


def rref(m: Matrix):
    """Reduced row echelon form.

    Returns ``(R, pivot_columns, rank)``; pivot columns are strictly
    increasing and ``rank == len(pivot_columns)``.
    """
    data = [list(row) for row in m.data]
    data, pivots = _rref_raw(m.field, data)
    return Matrix(m.field, data, _raw=True), tuple(pivots), len(pivots)


def kernel_basis(m: Matrix):
    """Basis of the right kernel, as raw-value column vectors.

    The basis is the canonical one read off the RREF: one vector per free
    column, with a 1 in the free coordinate.
    """
    f = m.field
    R, pivots, _ = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    one, zero, neg = f.one(), f.zero(), f.neg
    for fc in free:
        v = [zero] * m.cols
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = neg(R.data[r][fc])
        basis.append(v)
    return basis


def solve_linear(m: Matrix, b):
    """One solution of ``m x = b`` with free variables set to 0, or None."""
    if len(b) != m.rows:
        raise MalformedInput("right-hand side length differs from row count")
    f = m.field
    b = [f.coerce(v) for v in b]
    data = [list(row) + [b[i]] for i, row in enumerate(m.data)]
    data, pivots = _rref_raw(f, data)
    # inconsistent iff some pivot lands in the appended column
    if pivots and pivots[-1] == m.cols:
        return None
    x = [f.zero()] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = data[r][m.cols]
    return x


def invert(m: Matrix):
    """Inverse matrix, or None when the rank is deficient."""
    if m.rows != m.cols:
        raise MalformedInput("inverse of a non-square matrix")
    f = m.field
    n = m.rows
    ident = Matrix.identity(f, n)
    data = [list(row) + list(ident.data[i]) for i, row in enumerate(m.data)]
    data, pivots = _rref_raw(f, data)
    if len(pivots) < n or any(p >= n for p in pivots):
        return None
    return Matrix(f, [row[n:] for row in data], _raw=True)


def column_space_basis(m: Matrix):
    """Columns of ``m`` at the RREF pivot positions (a deterministic basis)."""
    _, pivots, _ = rref(m)
    return [m.column(c) for c in pivots]
