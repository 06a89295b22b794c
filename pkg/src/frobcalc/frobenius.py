"""Bilinear-form validation, the automorphism it induces, and innerness tests.

A :class:`FrobeniusStructure` owns a validated non-degenerate associative
Gram matrix together with the induced automorphism ``sigma`` (the unique
map with ⟨a, b⟩ = ⟨b, σ(a)⟩) and the pairing-to-dual isomorphism beta.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (Algebra, Element, LinearMap, ROLE_ENDOMORPHISM,
                      center_basis, endomorphism_witness, inner_automorphism,
                      inverse_of, left_mult_matrix, right_mult_matrix)
from .errors import InternalInconsistency, MalformedInput
from .fields import Scalar
from .linalg import Matrix, invert, kernel_basis, solve_linear
from .rng import SplitMix64


class FrobeniusStructure:
    __slots__ = ("algebra", "gram", "sigma", "_gram_inv", "_cache")

    def __init__(self, algebra, gram, sigma, gram_inv):
        self.algebra = algebra
        self.gram = gram
        self.sigma = sigma
        self._gram_inv = gram_inv
        self._cache = {}

    # pairing and beta ---------------------------------------------------------
    def pair_raw(self, a, b):
        f = self.algebra.field
        acc = f.zero()
        g = self.gram.data
        for i, ai in enumerate(a):
            if f.is_zero(ai):
                continue
            gi = g[i]
            for j, bj in enumerate(b):
                if not f.is_zero(bj):
                    acc = f.add(acc, f.mul(ai, f.mul(gi[j], bj)))
        return acc

    def pairing(self, a: Element, b: Element) -> Scalar:
        return Scalar(self.algebra.field, self.pair_raw(a.raw, b.raw))

    def beta_inverse_functional(self, lam):
        """The element j with ⟨j, e_k⟩ = lam_k for a raw functional vector."""
        sol = solve_linear(self.gram.transpose(), lam)
        if sol is None:
            raise InternalInconsistency("non-degenerate form failed to invert")
        return Element(self.algebra, sol, _raw=True)

    def sigma_inv(self) -> LinearMap:
        if "sigma_inv" not in self._cache:
            self._cache["sigma_inv"] = self.sigma.inverse()
        return self._cache["sigma_inv"]

    def __repr__(self):
        return f"FrobeniusStructure({self.algebra!r})"


def make_frobenius(A: Algebra, gram: Matrix) -> FrobeniusStructure:
    """Validate the form and compute the induced automorphism.

    Raises :class:`MalformedInput` with a witness triple when the form is
    degenerate or fails ⟨ab, c⟩ = ⟨a, bc⟩ on some basis triple.
    """
    if not isinstance(gram, Matrix):
        gram = Matrix(A.field, gram)
    if gram.field != A.field or gram.rows != A.dim or gram.cols != A.dim:
        raise MalformedInput("gram must be dim x dim over the algebra's field")
    f = A.field
    ginv = invert(gram)
    if ginv is None:
        raise MalformedInput("bilinear form is degenerate")

    def pair(a, b):
        acc = f.zero()
        for i, ai in enumerate(a):
            if f.is_zero(ai):
                continue
            for j, bj in enumerate(b):
                if not f.is_zero(bj):
                    acc = f.add(acc, f.mul(ai, f.mul(gram.data[i][j], bj)))
        return acc

    basis = [A._basis_vec(i) for i in range(A.dim)]
    for i in range(A.dim):
        for j in range(A.dim):
            eij = A.mul_raw(basis[i], basis[j])
            for k in range(A.dim):
                left = pair(eij, basis[k])
                right = pair(basis[i], A.mul_raw(basis[j], basis[k]))
                if left != right:
                    raise MalformedInput(
                        f"form is not associative: witness triple ({i},{j},{k})")

    # sigma solves G·S = Gᵀ, i.e. ⟨e_i, e_j⟩ = ⟨e_j, σ(e_i)⟩ column by column
    gt = gram.transpose()
    sigma_mat = ginv * gt
    w = endomorphism_witness(A, sigma_mat)
    if w is not None:
        raise InternalInconsistency(
            f"induced map is not an algebra endomorphism (at {w}); "
            "the form passed associativity, so this indicates a bug")
    if invert(sigma_mat) is None:
        raise InternalInconsistency("induced automorphism is singular")
    sigma = LinearMap(A, sigma_mat, ROLE_ENDOMORPHISM, check=False)
    F = FrobeniusStructure(A, gram, sigma, ginv)
    # defining property and the bimodule law ⟨a, b·σ(c)⟩ = ⟨ca, b⟩
    for i in range(A.dim):
        si = sigma_mat.column(i)
        for j in range(A.dim):
            if gram.data[i][j] != F.pair_raw(basis[j], si):
                raise InternalInconsistency("defining property of sigma failed")
    for i in range(A.dim):
        for j in range(A.dim):
            for k in range(A.dim):
                lhs = F.pair_raw(basis[i], A.mul_raw(basis[j], sigma_mat.column(k)))
                rhs = F.pair_raw(A.mul_raw(basis[k], basis[i]), basis[j])
                if lhs != rhs:
                    raise InternalInconsistency(
                        f"bimodule law failed at ({i},{j},{k})")
    return F


def relate_forms(F: FrobeniusStructure, gram2: Matrix):
    """Unit t with ⟨a,b⟩' = ⟨a,bt⟩, plus the conjugation check on sigma.

    Returns ``(t, ok)`` where ok records σ' == ι_t ∘ σ.  gram2 is validated
    from scratch, so a degenerate or non-associative input raises.
    """
    A = F.algebra
    F2 = make_frobenius(A, gram2)
    f = A.field
    n = A.dim
    # ⟨e_i, e_j·t⟩ = Σ_k t_k ⟨e_i, e_j e_k⟩ must equal gram2[i][j]
    rows, rhs = [], []
    basis = [A._basis_vec(i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            row = [F.pair_raw(basis[i], A.mul_raw(basis[j], basis[k]))
                   for k in range(n)]
            rows.append(row)
            rhs.append(gram2.data[i][j])
    sol = solve_linear(Matrix(f, rows, _raw=True), rhs)
    if sol is None:
        raise InternalInconsistency("no relating element for two valid forms")
    t = Element(A, sol, _raw=True)
    if inverse_of(t) is None:
        raise InternalInconsistency("relating element is not a unit")
    conj = inner_automorphism(t).compose(F.sigma)
    return t, conj.matrix == F2.sigma.matrix


@dataclass
class UnitSearch:
    """Outcome of looking for a unit inside a subspace.

    verdict is "yes" (unit found), "no" (provably none: empty subspace or
    exhaustive search), or "inconclusive" (sampling failed to find one).
    """
    verdict: str
    unit: Element | None = None
    detail: str = ""


EXHAUST_LIMIT = 4096
SAMPLE_LIMIT = 256
RATIONAL_SAMPLES = 64
GRID_LIMIT = 4096


def _grid_decide(A, basis):
    """Exact unit decision over Q via polynomial identity testing.

    det(L_{Σ λ_i b_i}) is a polynomial of degree ≤ dim in each λ_i, so it
    vanishes identically iff it vanishes on the grid {0..dim}^m.  Over an
    infinite field "identically zero" is equivalent to "no unit in the
    subspace".  Returns a UnitSearch, or None when the grid is too large.
    """
    m = len(basis)
    if (A.dim + 1) ** m > GRID_LIMIT:
        return None
    f = A.field
    points = [[]]
    for _ in range(m):
        points = [pt + [v] for pt in points for v in range(A.dim + 1)]
    for pt in points:
        if all(v == 0 for v in pt):
            continue
        cand = A.zero_element()
        for b, c in zip(basis, pt):
            if c:
                cand = cand + b.scale(f.from_int(c))
        if inverse_of(cand) is not None:
            return UnitSearch("yes", cand)
    return UnitSearch("no", detail="unit polynomial vanishes on a deciding grid")


def unit_in_subspace(A: Algebra, basis, rng=None) -> UnitSearch:
    """Search a linear subspace (given by basis Elements) for a unit.

    Returns a definite verdict whenever one is computable (empty space,
    exhaustible finite space, or a rational grid small enough for exact
    polynomial identity testing); otherwise falls back to seeded sampling
    and reports "inconclusive" on failure.
    """
    rng = rng or SplitMix64(42)
    f = A.field
    if not basis:
        return UnitSearch("no", detail="empty subspace")
    if f.order() is None:
        cand = A.zero_element()
        for b in basis:
            cand = cand + b
        if inverse_of(cand) is not None:
            return UnitSearch("yes", cand)
        for _ in range(RATIONAL_SAMPLES):
            cand = A.zero_element()
            for b in basis:
                cand = cand + b.scale(f.random(rng, 3))
            if not cand.is_zero() and inverse_of(cand) is not None:
                return UnitSearch("yes", cand)
        decided = _grid_decide(A, basis)
        if decided is not None:
            return decided
        return UnitSearch("inconclusive",
                          detail="no unit found (inconclusive)")
    size = f.order() ** len(basis)
    if size <= EXHAUST_LIMIT:
        elems = f.elements()
        combos = [[]]
        for _ in basis:
            combos = [c + [e] for c in combos for e in elems]
        for coeffs in combos:
            cand = A.zero_element()
            for b, c in zip(basis, coeffs):
                cand = cand + b.scale(c)
            if not cand.is_zero() and inverse_of(cand) is not None:
                return UnitSearch("yes", cand)
        return UnitSearch("no", detail="subspace exhausted")
    for _ in range(SAMPLE_LIMIT):
        cand = A.zero_element()
        for b in basis:
            cand = cand + b.scale(f.random(rng))
        if not cand.is_zero() and inverse_of(cand) is not None:
            return UnitSearch("yes", cand)
    return UnitSearch("inconclusive", detail="no unit found (inconclusive)")


def is_inner(F: FrobeniusStructure, u: LinearMap, rng=None) -> UnitSearch:
    """Find t with u = ι_t, i.e. u(e_i)·t = t·e_i for all i."""
    A = F.algebra
    if u.role != ROLE_ENDOMORPHISM:
        raise MalformedInput("innerness test expects an endomorphism")
    if not u.is_invertible():
        raise MalformedInput("innerness test expects an invertible endomorphism")
    rows = []
    for i in range(A.dim):
        diff = left_mult_matrix(u(A.basis_element(i))) \
            - right_mult_matrix(A.basis_element(i))
        rows.extend(diff.data)
    ker = kernel_basis(Matrix(A.field, rows, _raw=True))
    basis = [Element(A, v, _raw=True) for v in ker]
    result = unit_in_subspace(A, basis, rng)
    if result.verdict == "yes":
        check = inner_automorphism(result.unit)
        if check.matrix != u.matrix:
            raise InternalInconsistency("found unit does not conjugate to u")
    return result


def is_symmetric_algebra(F: FrobeniusStructure, rng=None) -> UnitSearch:
    """The algebra admits a symmetric form iff sigma is inner."""
    if F.gram == F.gram.transpose():
        return UnitSearch("yes", F.algebra.unit_element(),
                          detail="form already symmetric")
    return is_inner(F, F.sigma, rng)


def sigma_fixes_center(F: FrobeniusStructure) -> bool:
    return all(F.sigma(z) == z for z in center_basis(F.algebra))
