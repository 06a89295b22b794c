"""Bar-complex Hochschild cochains and chains.

Cochains of degree p are n x n^p matrices (column = p-tuple of basis
indices, first index most significant); chains with coefficients in M are
flattened as (m, tuple).  The differentials are assembled column-sparse
and all rank/kernel/solve work happens on dictionaries, so only the
explicitly requested dense matrices are ever materialized.

Coefficients for homology are either the tautological bimodule or its
right-twist by the Nakayama map (left action untouched, right action
through sigma).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product

from .algebra import Algebra, Element, LinearMap, ROLE_ENDOMORPHISM
from .errors import BudgetExceeded, InternalInconsistency, MalformedInput
from .frobenius import FrobeniusStructure
from .linalg import Matrix

DEFAULT_BUDGET = 1 << 20
DENSE_CAP = 1 << 24

UNTWISTED = "A"
TWISTED = "A_sigma"


# ---------------------------------------------------------------------------
# flattening helpers

def _tuple_index(J, n):
    idx = 0
    for j in J:
        idx = idx * n + j
    return idx


def _check_budget(A, p, budget):
    if A.dim ** (p + 2) > budget:
        raise BudgetExceeded(
            f"degree {p} needs {A.dim ** (p + 2)} coordinates, budget {budget}")


class Cochain:
    """A degree-p cochain A^{⊗p} → A as an n x n^p raw-value matrix."""

    __slots__ = ("algebra", "degree", "data")

    def __init__(self, algebra, degree, data, *, _raw=False):
        self.algebra = algebra
        self.degree = degree
        ncols = algebra.dim ** degree
        if _raw:
            self.data = data
        else:
            f = algebra.field
            self.data = [[f.coerce(v) for v in row] for row in data]
        if len(self.data) != algebra.dim or any(len(r) != ncols for r in self.data):
            raise MalformedInput("cochain matrix shape is inconsistent with degree")

    @staticmethod
    def zero(algebra, degree):
        z = algebra.field.zero()
        return Cochain(algebra, degree,
                       [[z] * (algebra.dim ** degree)
                        for _ in range(algebra.dim)], _raw=True)

    @staticmethod
    def from_linear_map(m: LinearMap):
        return Cochain(m.algebra, 1, [list(r) for r in m.matrix.data], _raw=True)

    def as_linear_map(self, role="general") -> LinearMap:
        if self.degree != 1:
            raise MalformedInput("only degree-1 cochains are linear maps")
        return LinearMap(self.algebra, Matrix(self.algebra.field, self.data),
                         role)

    def value(self, J) -> Element:
        """The image of the basis tensor e_{J0} ⊗ ... ⊗ e_{Jp-1}."""
        col = _tuple_index(J, self.algebra.dim)
        return Element(self.algebra, [row[col] for row in self.data], _raw=True)

    def flatten(self):
        """Row-major: coordinate (k, J) at k·n^p + J."""
        out = []
        for row in self.data:
            out.extend(row)
        return out

    @staticmethod
    def from_flat(algebra, degree, vec):
        n = algebra.dim
        ncols = n ** degree
        data = [list(vec[k * ncols:(k + 1) * ncols]) for k in range(n)]
        return Cochain(algebra, degree, data, _raw=True)

    def __sub__(self, other):
        f = self.algebra.field
        return Cochain(self.algebra, self.degree,
                       [[f.sub(a, b) for a, b in zip(ra, rb)]
                        for ra, rb in zip(self.data, other.data)], _raw=True)

    def __eq__(self, other):
        return (isinstance(other, Cochain) and other.algebra == self.algebra
                and other.degree == self.degree and other.data == self.data)

    def is_zero(self):
        f = self.algebra.field
        return all(f.is_zero(v) for row in self.data for v in row)


@dataclass
class HomologyReport:
    degree: int
    dim_cycles: int
    dim_boundaries: int
    dim: int
    representatives: list = dc_field(default_factory=list)


# ---------------------------------------------------------------------------
# sparse columns of the differentials

def _coboundary_columns(A: Algebra, p):
    """Columns of d: C^p → C^{p+1} keyed by flat cochain coordinates (cached)."""
    cached = A._cache.get(("cob", p))
    if cached is not None:
        return cached
    f = A.field
    n = A.dim
    ncols_out = n ** (p + 1)
    nrows = n ** (p + 2)
    sign_last = f.from_int((-1) ** (p + 1))
    cols = []
    for k in range(n):
        for J in product(range(n), repeat=p):
            col = {}

            def put(row, val):
                if row in col:
                    s = f.add(col[row], val)
                    if f.is_zero(s):
                        del col[row]
                    else:
                        col[row] = s
                elif not f.is_zero(val):
                    col[row] = val

            for i1 in range(n):
                pref = _tuple_index((i1,) + J, n)
                for (m, c) in A.mul_basis(i1, k):
                    put(m * ncols_out + pref, c)
            for j in range(1, p + 1):
                sgn = f.from_int((-1) ** j)
                for (u, v, c) in A.pairs_into(J[j - 1]):
                    args = J[:j - 1] + (u, v) + J[j:]
                    put(k * ncols_out + _tuple_index(args, n), f.mul(sgn, c))
            for i in range(n):
                suff = _tuple_index(J + (i,), n)
                for (m, c) in A.mul_basis(k, i):
                    put(m * ncols_out + suff, f.mul(sign_last, c))
            cols.append(col)
    A._cache[("cob", p)] = (nrows, cols)
    return nrows, cols


def _boundary_columns(A: Algebra, p, twist: Matrix | None):
    """Columns of b: M⊗A^{⊗p} → M⊗A^{⊗p-1}; twist is sigma's matrix or None."""
    key = ("bnd", p, twist)
    cached = A._cache.get(key)
    if cached is not None:
        return cached
    f = A.field
    n = A.dim
    ncols_out = n ** (p - 1)
    nrows = n ** p
    sign_last = f.from_int((-1) ** p)
    cols = []
    twist_cols = None
    if twist is not None:
        twist_cols = [twist.column(j) for j in range(n)]
    for m in range(n):
        em = A._basis_vec(m)
        for J in product(range(n), repeat=p):
            col = {}

            def put(row, val):
                if row in col:
                    s = f.add(col[row], val)
                    if f.is_zero(s):
                        del col[row]
                    else:
                        col[row] = s
                elif not f.is_zero(val):
                    col[row] = val

            # face 0: right action of a₁ on m (twisted when requested)
            tail = _tuple_index(J[1:], n)
            if twist_cols is None:
                terms = A.mul_basis(m, J[0])
            else:
                w = A.mul_raw(em, twist_cols[J[0]])
                terms = [(i, c) for i, c in enumerate(w) if not f.is_zero(c)]
            for (mm, c) in terms:
                put(mm * ncols_out + tail, c)
            # middle faces: multiply adjacent tensor slots
            for j in range(1, p):
                sgn = f.from_int((-1) ** j)
                for (t, c) in A.mul_basis(J[j - 1], J[j]):
                    args = J[:j - 1] + (t,) + J[j + 1:]
                    put(m * ncols_out + _tuple_index(args, n), f.mul(sgn, c))
            # last face: left action of a_p on m (never twisted)
            head = _tuple_index(J[:p - 1], n)
            for (mm, c) in A.mul_basis(J[p - 1], m):
                put(mm * ncols_out + head, f.mul(sign_last, c))
            cols.append(col)
    A._cache[key] = (nrows, cols)
    return nrows, cols


# ---------------------------------------------------------------------------
# sparse echelon solver

class SparseEchelon:
    """Column echelon over a field with combination tracking.

    Inserted columns are reduced against existing pivots (pivot = least
    row index, normalized to 1).  Kernel vectors fall out of columns that
    reduce to zero; ``solve`` reduces an arbitrary right-hand side.
    """

    def __init__(self, field):
        self.field = field
        self.pivots = {}  # row -> (column dict, tail dict)

    def _reduce(self, col, tail):
        f = self.field
        while col:
            r = min(col)
            hit = self.pivots.get(r)
            if hit is None:
                return col, tail, r
            pcol, ptail = hit
            fac = col[r]
            for row, val in pcol.items():
                cur = col.get(row, None)
                nv = f.sub(cur, f.mul(fac, val)) if cur is not None \
                    else f.neg(f.mul(fac, val))
                if f.is_zero(nv):
                    col.pop(row, None)
                else:
                    col[row] = nv
            if tail is not None:
                for idx, val in ptail.items():
                    cur = tail.get(idx, None)
                    nv = f.sub(cur, f.mul(fac, val)) if cur is not None \
                        else f.neg(f.mul(fac, val))
                    if f.is_zero(nv):
                        tail.pop(idx, None)
                    else:
                        tail[idx] = nv
        return col, tail, None

    def insert(self, col, tail):
        """Returns None if the column joined the echelon, else its tail
        (a kernel combination when the tail tracked the identity)."""
        f = self.field
        col, tail, r = self._reduce(dict(col), dict(tail) if tail is not None else None)
        if r is None:
            return tail if tail is not None else {}
        piv = col[r]
        if not f.is_one(piv):
            ip = f.inv(piv)
            col = {row: f.mul(ip, v) for row, v in col.items()}
            if tail is not None:
                tail = {idx: f.mul(ip, v) for idx, v in tail.items()}
        self.pivots[r] = (col, tail if tail is not None else {})
        return None

    @property
    def rank(self):
        return len(self.pivots)

    def residual(self, vec_dict):
        """Reduce a vector against the echelon; returns the residual dict."""
        col, _, _ = self._reduce(dict(vec_dict), None)
        return col

    def solve(self, rhs_dict):
        """x with (echelon columns as M) · x = rhs, or None."""
        f = self.field
        col, tail, r = self._reduce(dict(rhs_dict), {})
        if r is not None:
            return None
        return {idx: f.neg(v) for idx, v in tail.items()}


def _echelonize(field, cols, *, want_kernel):
    """Echelonize columns with tails tracking original column indices.

    Tails are always tracked (``solve`` needs them); ``want_kernel`` only
    controls whether columns that reduce to zero are collected.
    """
    ech = SparseEchelon(field)
    kernel = []
    for j, col in enumerate(cols):
        out = ech.insert(col, {j: field.one()})
        if out is not None and want_kernel:
            out[j] = out.get(j, field.one())
            kernel.append(out)
    return ech, kernel


def _dict_from_vec(field, vec):
    return {i: v for i, v in enumerate(vec) if not field.is_zero(v)}


def _vec_from_dict(field, d, length):
    out = [field.zero()] * length
    for i, v in d.items():
        out[i] = v
    return out


def _apply_columns(field, cols, vec_dict):
    out = {}
    for j, c in vec_dict.items():
        for row, val in cols[j].items():
            cur = out.get(row, None)
            nv = field.add(cur, field.mul(c, val)) if cur is not None \
                else field.mul(c, val)
            if field.is_zero(nv):
                out.pop(row, None)
            else:
                out[row] = nv
    return out


# ---------------------------------------------------------------------------
# public operations

def _dense_from_columns(field, nrows, cols):
    if nrows * len(cols) > DENSE_CAP:
        raise BudgetExceeded(
            f"dense matrix of {nrows}x{len(cols)} exceeds the materialization cap")
    z = field.zero()
    data = [[z] * len(cols) for _ in range(nrows)]
    for j, col in enumerate(cols):
        for i, v in col.items():
            data[i][j] = v
    return Matrix(field, data, _raw=True)


def coboundary_matrix(A: Algebra, p, budget=DEFAULT_BUDGET) -> Matrix:
    """Dense matrix of d: C^p → C^{p+1} on flattened cochain coordinates."""
    if p < 0:
        raise MalformedInput("degree must be nonnegative")
    _check_budget(A, p, budget)
    nrows, cols = _coboundary_columns(A, p)
    return _dense_from_columns(A.field, nrows, cols)


def boundary_matrix(A: Algebra, p, coeffs=UNTWISTED, sigma: LinearMap | None = None,
                    budget=DEFAULT_BUDGET) -> Matrix:
    """Dense matrix of b: M⊗A^{⊗p} → M⊗A^{⊗p-1}.

    ``coeffs`` selects the bimodule: the algebra itself, or its right
    sigma-twist (then ``sigma`` must be supplied).
    """
    if p < 1:
        raise MalformedInput("boundary starts at degree 1")
    _check_budget(A, p - 1, budget)
    twist = _resolve_twist(A, coeffs, sigma)
    nrows, cols = _boundary_columns(A, p, twist)
    return _dense_from_columns(A.field, nrows, cols)


def _resolve_twist(A, coeffs, sigma):
    if coeffs == UNTWISTED:
        return None
    if coeffs == TWISTED:
        if sigma is None:
            raise MalformedInput("twisted coefficients need the Nakayama map")
        return sigma.matrix
    raise MalformedInput(f"unknown coefficient choice {coeffs!r}")


def apply_coboundary(A: Algebra, f: Cochain, budget=DEFAULT_BUDGET) -> Cochain:
    _check_budget(A, f.degree, budget)
    _, cols = _coboundary_columns(A, f.degree)
    vec = _dict_from_vec(A.field, f.flatten())
    out = _apply_columns(A.field, cols, vec)
    return Cochain.from_flat(A, f.degree + 1,
                             _vec_from_dict(A.field, out, A.dim ** (f.degree + 2)))


def is_cocycle(A: Algebra, f: Cochain, budget=DEFAULT_BUDGET) -> bool:
    return apply_coboundary(A, f, budget).is_zero()


def cocycle_basis(A: Algebra, p, budget=DEFAULT_BUDGET):
    """Canonical basis of ker(d: C^p → C^{p+1}) as Cochain objects."""
    _check_budget(A, p, budget)
    f = A.field
    _, cols = _coboundary_columns(A, p)
    _, kernel = _echelonize(f, cols, want_kernel=True)
    length = A.dim ** (p + 1)
    return [Cochain.from_flat(A, p, _vec_from_dict(f, k, length)) for k in kernel]


def hh_dimension(A: Algebra, p, budget=DEFAULT_BUDGET) -> HomologyReport:
    """dim HH^p with deterministic cocycle representatives."""
    _check_budget(A, p, budget)
    f = A.field
    _, cols = _coboundary_columns(A, p)
    _, kernel = _echelonize(f, cols, want_kernel=True)
    dim_cycles = len(kernel)
    if p == 0:
        bech = SparseEchelon(f)
        dim_bound = 0
    else:
        _check_budget(A, p - 1, budget)
        _, bcols = _coboundary_columns(A, p - 1)
        bech, _ = _echelonize(f, bcols, want_kernel=False)
        dim_bound = bech.rank
    reps = []
    length = A.dim ** (p + 1)
    tracker = SparseEchelon(f)
    for kv in kernel:
        resid = bech.residual(kv)
        if resid and tracker.insert(resid, None) is None:
            reps.append(Cochain.from_flat(A, p, _vec_from_dict(f, kv, length)))
    dim = dim_cycles - dim_bound
    if len(reps) != dim:
        raise InternalInconsistency("representative count differs from dimension")
    return HomologyReport(p, dim_cycles, dim_bound, dim, reps)


def homology_dimension(A: Algebra, p, coeffs=UNTWISTED,
                       sigma: LinearMap | None = None,
                       budget=DEFAULT_BUDGET) -> HomologyReport:
    """dim H_p(A, M) with chain representatives as flat raw vectors."""
    _check_budget(A, max(p - 1, 0), budget)
    f = A.field
    twist = _resolve_twist(A, coeffs, sigma)
    n = A.dim
    length = n ** (p + 1)
    if p == 0:
        kernel = [{i: f.one()} for i in range(n)]
    else:
        _, cols = _boundary_columns(A, p, twist)
        _, kernel = _echelonize(f, cols, want_kernel=True)
    _, bcols = _boundary_columns(A, p + 1, twist)
    bech, _ = _echelonize(f, bcols, want_kernel=False)
    reps = []
    tracker = SparseEchelon(f)
    for kv in kernel:
        resid = bech.residual(kv)
        if resid and tracker.insert(resid, None) is None:
            reps.append(_vec_from_dict(f, kv, length))
    dim = len(kernel) - bech.rank
    if len(reps) != dim:
        raise InternalInconsistency("representative count differs from dimension")
    return HomologyReport(p, len(kernel), bech.rank, dim, reps)


def cochain_action(u, f: Cochain, budget=DEFAULT_BUDGET) -> Cochain:
    """The twisted cochain a₁⊗...⊗a_p ↦ u(f(u⁻¹a₁ ⊗ ... ⊗ u⁻¹a_p))."""
    if isinstance(u, FrobeniusStructure):
        u = u.sigma
    if u.role != ROLE_ENDOMORPHISM or not u.is_invertible():
        raise MalformedInput("cochain action needs an invertible endomorphism")
    A = f.algebra
    if u.algebra != A:
        raise MalformedInput("map acts on a different algebra")
    fld = A.field
    p = f.degree
    if u.is_identity():
        return Cochain(A, p, [list(r) for r in f.data], _raw=True)
    uinv = u.inverse()
    n = A.dim
    ncols = n ** p
    inv_cols = [_dict_from_vec(fld, uinv.matrix.column(j)) for j in range(n)]
    out = [[fld.zero()] * ncols for _ in range(n)]
    for J in product(range(n), repeat=p):
        # expand ⊗_t uinv(e_{J_t}) sparsely
        terms = {(): fld.one()}
        for t in J:
            nxt = {}
            for key, c in terms.items():
                for i, v in inv_cols[t].items():
                    kk = key + (i,)
                    nxt[kk] = fld.mul(c, v)
            terms = nxt
        acc = [fld.zero()] * n
        for key, c in terms.items():
            col = _tuple_index(key, n)
            for k in range(n):
                val = f.data[k][col]
                if not fld.is_zero(val):
                    acc[k] = fld.add(acc[k], fld.mul(c, val))
        img = u.matrix.apply(acc)
        cidx = _tuple_index(J, n)
        for k in range(n):
            out[k][cidx] = img[k]
    return Cochain(A, p, out, _raw=True)


def triviality_certificate(F: FrobeniusStructure, f: Cochain,
                           budget=DEFAULT_BUDGET):
    """g of degree p−1 with f^σ − f = d(g), or None when no solution exists.

    A None return is a refutation event for the caller to surface; it is
    not an exception.  Requires d(f) = 0.
    """
    A = F.algebra
    p = f.degree
    if p < 1:
        raise MalformedInput("certificates start at degree 1")
    if not is_cocycle(A, f, budget):
        raise MalformedInput("cochain is not a cocycle")
    rhs = cochain_action(F.sigma, f, budget) - f
    rhs_vec = _dict_from_vec(A.field, rhs.flatten())
    if not rhs_vec:
        return Cochain.zero(A, p - 1)
    key = ("certificate-echelon", p - 1)
    ech = F._cache.get(key)
    if ech is None:
        _check_budget(A, p - 1, budget)
        _, cols = _coboundary_columns(A, p - 1)
        ech = _echelonize(A.field, cols, want_kernel=False)[0]
        F._cache[key] = ech
    sol = ech.solve(rhs_vec)
    if sol is None:
        return None
    length = A.dim ** p
    g = Cochain.from_flat(A, p - 1, _vec_from_dict(A.field, sol, length))
    if not (apply_coboundary(A, g, budget) - rhs).is_zero():
        raise InternalInconsistency("certificate failed re-verification")
    return g


def _chain_map_columns(F: FrobeniusStructure, p):
    """Columns of σ_M ⊗ σ^{⊗p} on M⊗A^{⊗p} (both factors use sigma)."""
    A = F.algebra
    fld = A.field
    n = A.dim
    scols = [_dict_from_vec(fld, F.sigma.matrix.column(j)) for j in range(n)]
    cols = []
    for m in range(n):
        for J in product(range(n), repeat=p):
            terms = {(): fld.one()}
            for t in (m,) + J:
                nxt = {}
                for key, c in terms.items():
                    for i, v in scols[t].items():
                        nxt[key + (i,)] = fld.mul(c, v)
                terms = nxt
            col = {}
            for key, c in terms.items():
                col[_tuple_index(key, n)] = c
            cols.append(col)
    return cols


def sigma_action_on_homology(F: FrobeniusStructure, p, coeffs=UNTWISTED,
                             budget=DEFAULT_BUDGET) -> Matrix:
    """Matrix of the induced map on H_p in the deterministic basis."""
    A = F.algebra
    fld = A.field
    report = homology_dimension(A, p, coeffs, F.sigma, budget)
    twist = _resolve_twist(A, coeffs, F.sigma)
    bcols_src = _boundary_columns(A, p + 1, twist)[1]
    tmap = _chain_map_columns(F, p)
    # echelon of [representatives | boundaries], tails tracked on reps only
    ech = SparseEchelon(fld)
    for idx, rep in enumerate(report.representatives):
        out = ech.insert(_dict_from_vec(fld, rep), {idx: fld.one()})
        if out is not None:
            raise InternalInconsistency("homology representatives are dependent")
    for col in bcols_src:
        ech.insert(col, {})
    h = report.dim
    data = [[fld.zero()] * h for _ in range(h)]
    for jdx, rep in enumerate(report.representatives):
        image = _apply_columns(fld, tmap, _dict_from_vec(fld, rep))
        sol = ech.solve(image)
        if sol is None:
            raise InternalInconsistency(
                "chain image failed to re-express in the homology basis")
        for idx, v in sol.items():
            data[idx][jdx] = v
    return Matrix(fld, data, _raw=True)


def duality_dims(F: FrobeniusStructure, pmax, budget=DEFAULT_BUDGET):
    """[(p, dim HH^p, dim H_p(A, twisted)), ...] for p ≤ pmax."""
    out = []
    for p in range(pmax + 1):
        hh = hh_dimension(F.algebra, p, budget)
        hp = homology_dimension(F.algebra, p, TWISTED, F.sigma, budget)
        out.append({"degree": p, "cohomology": hh.dim, "twisted_homology": hp.dim,
                    "match": hh.dim == hp.dim})
    return out


def verify_complex(A: Algebra, pmax, budget=DEFAULT_BUDGET,
                   sigma: LinearMap | None = None) -> bool:
    """d∘d = 0 and b∘b = 0 (both coefficient choices) up to degree pmax."""
    fld = A.field
    for p in range(pmax + 1):
        _check_budget(A, p, budget)
        _, cols_p = _coboundary_columns(A, p)
        _, cols_q = _coboundary_columns(A, p + 1)
        for col in cols_p:
            if _apply_columns(fld, cols_q, col):
                return False
    choices = [(UNTWISTED, None)]
    if sigma is not None:
        choices.append((TWISTED, sigma.matrix))
    for _, twist in choices:
        for p in range(2, pmax + 2):
            _, cols_p = _boundary_columns(A, p, twist)
            _, cols_q = _boundary_columns(A, p - 1, twist)
            for col in cols_p:
                if _apply_columns(fld, cols_q, col):
                    return False
    return True


# ---------------------------------------------------------------------------
# Connes boundary at degree 0 → 1 and the image test on trivial extensions

@dataclass
class ConnesImageResult:
    in_image: bool
    kernel_basis: list            # elements of B spanning ker(HH₀ → HH₁)
    automorphism: object = None   # realizing map on the trivial extension
    jacobian: object = None


def connes_image_test(B: Algebra, tau, t=None, rng=None) -> ConnesImageResult:
    """Decide whether the commutator-vanishing functional tau on B lies in
    the image of the transpose of the degree-0 Connes boundary.

    On success also returns an automorphism of the trivial extension of B
    whose Jacobian is t + tau (t defaults to 1), built from a derivation
    δ: B → DB with δ(x)(1) = tau(x).
    """
    from .algebra import commutator_subspace, left_mult_matrix
    from .calculus import jacobian, sum_product
    from .frobenius import make_frobenius
    from .gallery import trivial_extension
    from .linalg import kernel_basis as dense_kernel, solve_linear

    fld = B.field
    n = B.dim
    tau = [fld.coerce(c) for c in tau]
    if len(tau) != n:
        raise MalformedInput("tau must be a functional on B")
    for c in commutator_subspace(B):
        if not fld.is_zero(sum_product(fld, tau, c.raw)):
            raise MalformedInput("tau does not vanish on commutators")

    # ker(HH₀ → HH₁): z with 1⊗z + z⊗1 a Hochschild boundary
    _, b2cols = _boundary_columns(B, 2, None)
    bech, _ = _echelonize(fld, b2cols, want_kernel=False)
    residual_cols = []
    for i in range(n):
        vec = {}
        for m, um in enumerate(B.unit):
            if fld.is_zero(um):
                continue
            for key in (m * n + i, i * n + m):
                s = fld.add(vec.get(key, fld.zero()), um)
                if fld.is_zero(s):
                    vec.pop(key, None)
                else:
                    vec[key] = s
        residual_cols.append(bech.residual(vec))
    # kernel of the linear map z ↦ residual(1⊗z + z⊗1)
    rows = {}
    for i, col in enumerate(residual_cols):
        for r, v in col.items():
            rows.setdefault(r, [fld.zero()] * n)[i] = v
    if rows:
        kvecs = dense_kernel(Matrix(fld, [rows[r] for r in sorted(rows)],
                                    _raw=True))
    else:
        kvecs = [[fld.one() if i == j else fld.zero() for j in range(n)]
                 for i in range(n)]
    kernel_elements = [Element(B, v, _raw=True) for v in kvecs]
    in_image_kernel = all(
        fld.is_zero(sum_product(fld, tau, v)) for v in kvecs)

    # dual route: solve for a derivation δ: B → DB with δ(x)(1) = tau(x)
    ext = trivial_extension(B)
    der_basis = ext.derivation_space_to_dual()
    rows2, rhs2 = [], []
    for i in range(n):
        row = []
        for mat_b in der_basis:
            acc = fld.zero()
            for k in range(n):
                acc = fld.add(acc, fld.mul(mat_b.data[k][i], B.unit[k]))
            row.append(acc)
        rows2.append(row)
        rhs2.append(tau[i])
    if der_basis:
        sol = solve_linear(Matrix(fld, rows2, _raw=True), rhs2)
    else:
        sol = [] if all(fld.is_zero(v) for v in tau) else None
    if (sol is not None) != in_image_kernel:
        raise InternalInconsistency(
            "kernel-annihilation and derivation-solve disagree")
    if sol is None:
        return ConnesImageResult(False, kernel_elements)

    delta = Matrix.zero(fld, n, n)
    for c, mat_b in zip(sol, der_basis):
        delta = delta + mat_b.scale(c)
    if t is None:
        t = B.unit_element()
    u = ext.from_blocks(Matrix.identity(fld, n), None, delta,
                        left_mult_matrix(t).transpose())
    Fext = make_frobenius(ext.algebra, ext.gram)
    jac = jacobian(Fext, u)
    expected = ext.embed(t) + ext.embed_dual(tau)
    if jac != expected:
        raise InternalInconsistency("realizing automorphism has wrong Jacobian")
    return ConnesImageResult(True, kernel_elements, u, jac)
