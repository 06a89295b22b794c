"""Builders for the example families, each bundled with its bilinear form.

Every builder returns a carrier object exposing ``algebra`` and ``gram``
plus whatever named constructors the family supports (quantum-plane
automorphisms, skew partials on exterior algebras, block maps on trivial
extensions, ...).  The carriers are what the verification suites and the
CLI gallery registry consume.
"""

from __future__ import annotations

from itertools import combinations

from .algebra import (Algebra, Element, LinearMap, ROLE_DERIVATION,
                      ROLE_ENDOMORPHISM, inner_automorphism, left_mult_matrix)
from .errors import MalformedInput
from .fields import Field
from .groups import GroupData, symmetric_group_3
from .linalg import Matrix, invert

# ---------------------------------------------------------------------------
# generic forms


def trace_form_gram(A: Algebra) -> Matrix:
    """Gram matrix of (a, b) ↦ tr(L_{ab}); degenerate unless strongly separable."""
    f = A.field
    n = A.dim
    # tr L_{e_k} once per k
    traces = []
    for k in range(n):
        acc = f.zero()
        for j in range(n):
            for (m, c) in A.mul_basis(k, j):
                if m == j:
                    acc = f.add(acc, c)
        traces.append(acc)
    data = [[f.zero()] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = f.zero()
            for (k, c) in A.mul_basis(i, j):
                acc = f.add(acc, f.mul(c, traces[k]))
            data[i][j] = acc
    return Matrix(f, data, _raw=True)


# ---------------------------------------------------------------------------
# exterior algebras


class ExteriorGallery:
    """Exterior algebra on n generators, monomial basis in graded-lex order."""

    def __init__(self, n, field):
        if n < 1:
            raise MalformedInput("need at least one generator")
        self.name = f"exterior({n})"
        self.n = n
        self.field = field
        self.subsets = sorted((tuple(s) for r in range(n + 1)
                               for s in combinations(range(n), r)),
                              key=lambda s: (len(s), s))
        self.index = {s: i for i, s in enumerate(self.subsets)}
        names = ["1"] + ["^".join(f"x{i+1}" for i in s) for s in self.subsets[1:]]
        dim = 1 << n
        triples = []
        for si, S in enumerate(self.subsets):
            for ti, T in enumerate(self.subsets):
                if set(S) & set(T):
                    continue
                sign = self._merge_sign(S, T)
                out = self.index[tuple(sorted(S + T))]
                triples.append((si, ti, out, field.from_int(sign)))
        unit = [field.one()] + [field.zero()] * (dim - 1)
        self.algebra = Algebra(field, dim, names, triples, unit)
        top = self.index[tuple(range(n))]
        g = [[field.zero()] * dim for _ in range(dim)]
        for si, S in enumerate(self.subsets):
            for ti, T in enumerate(self.subsets):
                if not (set(S) & set(T)) and len(S) + len(T) == n:
                    g[si][ti] = field.from_int(self._merge_sign(S, T))
        self.gram = Matrix(field, g, _raw=True)
        self._top = top

    @staticmethod
    def _merge_sign(S, T):
        inv = sum(1 for s in S for t in T if s > t)
        return -1 if inv % 2 else 1

    # degree bookkeeping ----------------------------------------------------
    def degree(self, idx):
        return len(self.subsets[idx])

    def odd_indices(self):
        return [i for i in range(len(self.subsets)) if self.degree(i) % 2 == 1]

    def even_indices(self):
        return [i for i in range(len(self.subsets)) if self.degree(i) % 2 == 0]

    def generator(self, i):
        return self.algebra.basis_element(self.index[(i,)])

    def monomial(self, subset):
        return self.algebra.basis_element(self.index[tuple(sorted(subset))])

    def is_odd_element(self, el: Element) -> bool:
        f = self.field
        return all(f.is_zero(c) or self.degree(i) % 2 == 1
                   for i, c in enumerate(el.raw))

    def is_odd_preserving(self, u: LinearMap) -> bool:
        """u(V) contained in the odd part."""
        return all(self.is_odd_element(u(self.generator(i))) for i in range(self.n))

    # skew partials ----------------------------------------------------------
    def partial(self, i) -> LinearMap:
        """Left skew derivation with ∂(x_j) = δ_ij on generators."""
        f = self.field
        cols = []
        for S in self.subsets:
            v = [f.zero()] * self.algebra.dim
            if i in S:
                pos = S.index(i)
                rest = tuple(x for x in S if x != i)
                v[self.index[rest]] = f.from_int(-1 if pos % 2 else 1)
            cols.append(v)
        return LinearMap(self.algebra, Matrix.from_columns(f, cols))

    # automorphism constructors ---------------------------------------------
    def from_generator_images(self, images, role=ROLE_ENDOMORPHISM) -> LinearMap:
        """Multiplicative extension of x_i ↦ images[i]."""
        f = self.field
        cols = []
        for S in self.subsets:
            el = self.algebra.unit_element()
            for i in S:
                el = el * images[i]
            cols.append(el.raw)
        return LinearMap(self.algebra, Matrix.from_columns(f, cols), role)

    def phi(self, fmat) -> LinearMap:
        """Grading-preserving automorphism induced by an invertible map on V."""
        if not isinstance(fmat, Matrix):
            fmat = Matrix(self.field, fmat)
        if fmat.rows != self.n or fmat.cols != self.n:
            raise MalformedInput("phi expects an n x n matrix")
        if invert(fmat) is None:
            raise MalformedInput("phi expects an invertible matrix")
        images = []
        for j in range(self.n):
            el = self.algebra.zero_element()
            for i in range(self.n):
                el = el + self.generator(i).scale(fmat.data[i][j])
            images.append(el)
        return self.from_generator_images(images)

    def gamma(self, i, lam, alpha) -> LinearMap:
        """x_i ↦ x_i + λ·x^α for a 3-subset α; other generators fixed."""
        alpha = tuple(sorted(alpha))
        if len(alpha) != 3 or len(set(alpha)) != 3:
            raise MalformedInput("alpha must be a 3-element subset")
        images = [self.generator(j) for j in range(self.n)]
        images[i] = images[i] + self.monomial(alpha).scale(lam)
        return self.from_generator_images(images)

    def iota(self, a: Element) -> LinearMap:
        """Inner automorphism by 1 + a for odd a."""
        if not self.is_odd_element(a):
            raise MalformedInput("iota expects an odd element")
        return inner_automorphism(self.algebra.unit_element() + a)

    def det_on_generators(self, fmat) -> "Element":
        if not isinstance(fmat, Matrix):
            fmat = Matrix(self.field, fmat)
        from itertools import permutations
        f = self.field
        acc = f.zero()
        for perm in permutations(range(self.n)):
            inv = sum(1 for a in range(self.n) for b in range(a + 1, self.n)
                      if perm[a] > perm[b])
            term = f.from_int(-1 if inv % 2 else 1)
            for r in range(self.n):
                term = f.mul(term, fmat.data[r][perm[r]])
            acc = f.add(acc, term)
        return self.algebra.scalar_element(acc)

    def jac_gamma_expected(self, i, lam, alpha) -> Element:
        """Closed form for the twisted Jacobian of gamma_{i,λ,α}.

        For i in α the value is 1 − (−1)^pos·λ·(wedge of the two remaining
        generators), pos the position of i in α; it inverts the skew-partial
        determinant 1 + λ·∂_i(x^α).
        """
        alpha = tuple(sorted(alpha))
        one = self.algebra.unit_element()
        if i not in alpha:
            return one
        pos = alpha.index(i)
        rest = tuple(x for x in alpha if x != i)
        coeff = self.field.coerce(lam)
        if pos % 2 == 0:
            coeff = self.field.neg(coeff)
        return one + self.monomial(rest).scale(coeff)

    def random_odd_element(self, rng, top=False):
        """Random element of the odd part (small coefficients)."""
        f = self.field
        v = [f.zero()] * self.algebra.dim
        for i in self.odd_indices():
            v[i] = f.random(rng, 2)
        return Element(self.algebra, v, _raw=True)


def exterior(n, field=None, *, require_odd_char=True):
    field = field or Field.rationals()
    if require_odd_char and field.characteristic == 2:
        raise MalformedInput("exterior gallery needs characteristic != 2")
    return ExteriorGallery(n, field)


# ---------------------------------------------------------------------------
# quantum complete intersection of dimension 4


class QciGallery:
    """k<x,y>/(x², y², yx − q·xy) with the top-coefficient form."""

    def __init__(self, q, field):
        f = field
        q = f.coerce(q)
        if f.is_zero(q):
            raise MalformedInput("q must be nonzero")
        self.name = f"qci({f.format(q)})"
        self.field = f
        self.q = q
        names = ["1", "x", "y", "xy"]
        triples = [(0, 0, 0, 1), (0, 1, 1, 1), (0, 2, 2, 1), (0, 3, 3, 1),
                   (1, 0, 1, 1), (2, 0, 2, 1), (3, 0, 3, 1),
                   (1, 2, 3, 1), (2, 1, 3, q)]
        unit = [1, 0, 0, 0]
        self.algebra = Algebra(f, 4, names, triples, unit)
        z = f.zero()
        one = f.one()
        self.gram = Matrix(f, [
            [z, z, z, one],
            [z, z, one, z],
            [z, q, z, z],
            [one, z, z, z],
        ], _raw=True)

    @property
    def x(self):
        return self.algebra.basis_element(1)

    @property
    def y(self):
        return self.algebra.basis_element(2)

    @property
    def xy(self):
        return self.algebra.basis_element(3)

    def alpha(self, a, b, c, d) -> LinearMap:
        """Automorphism x ↦ ax + c·xy, y ↦ by + d·xy (a, b nonzero)."""
        f = self.field
        a, b, c, d = (f.coerce(v) for v in (a, b, c, d))
        if f.is_zero(a) or f.is_zero(b):
            raise MalformedInput("alpha needs a and b nonzero")
        z = f.zero()
        cols = [[f.one(), z, z, z], [z, a, z, c], [z, z, b, d],
                [z, z, z, f.mul(a, b)]]
        return LinearMap(self.algebra, Matrix.from_columns(f, cols),
                         ROLE_ENDOMORPHISM)

    def delta(self, a, b, c, d) -> LinearMap:
        """Derivation x ↦ ax + c·xy, y ↦ by + d·xy."""
        f = self.field
        a, b, c, d = (f.coerce(v) for v in (a, b, c, d))
        z = f.zero()
        cols = [[z] * 4, [z, a, z, c], [z, z, b, d], [z, z, z, f.add(a, b)]]
        return LinearMap(self.algebra, Matrix.from_columns(f, cols),
                         ROLE_DERIVATION)

    def jac_expected(self, a, b, c, d) -> Element:
        """ab + d·x + q⁻¹c·y."""
        f = self.field
        a, b, c, d = (f.coerce(v) for v in (a, b, c, d))
        return Element(self.algebra,
                       [f.mul(a, b), d, f.div(c, self.q), f.zero()], _raw=True)

    def div_expected(self, a, b, c, d) -> Element:
        """(a + b) + q⁻¹d·x + c·y."""
        f = self.field
        a, b, c, d = (f.coerce(v) for v in (a, b, c, d))
        return Element(self.algebra,
                       [f.add(a, b), f.div(d, self.q), c, f.zero()], _raw=True)


def qci(q, field=None):
    field = field or Field.rationals()
    return QciGallery(q, field)


# ---------------------------------------------------------------------------
# trivial extensions B ⊕ DB (optionally twisted by an automorphism of B)


class TrivialExtensionGallery:
    """B ⊕ DB with dual-part square zero; symmetric when untwisted.

    Basis: the basis of B first, then the dual basis in matching index
    order, so block maps on B ⊕ DB are literal 2x2 block matrices.
    """

    def __init__(self, B: Algebra, tau: LinearMap | None = None, label=None):
        self.B = B
        f = B.field
        n = B.dim
        self.field = f
        self.tau = tau
        if tau is not None:
            if tau.algebra != B or tau.role != ROLE_ENDOMORPHISM:
                raise MalformedInput("tau must be an endomorphism of B")
            if not tau.is_invertible():
                raise MalformedInput("tau must be invertible")
        self.name = label or ("trivial-ext" if tau is None else "twisted-trivial-ext")
        names = list(B.basis_names) + [f"{nm}*" for nm in B.basis_names]
        triples = []
        for (i, j), terms in B.structure.items():
            for (k, c) in terms:
                triples.append((i, j, k, c))
        tau_of = [tau(B.basis_element(i)).raw if tau is not None else B._basis_vec(i)
                  for i in range(n)]
        for i in range(n):
            for j in range(n):
                # e_i · e_j* = Σ_m [coeff of e_j in e_m·τ(e_i)] e_m*
                for m in range(n):
                    w = B.mul_raw(B._basis_vec(m), tau_of[i])
                    if not f.is_zero(w[j]):
                        triples.append((i, n + j, n + m, w[j]))
                # e_j* · e_i = Σ_m [coeff of e_j in e_i·e_m] e_m*
                for m in range(n):
                    w = B.mul_raw(B._basis_vec(i), B._basis_vec(m))
                    if not f.is_zero(w[j]):
                        triples.append((n + j, i, n + m, w[j]))
        unit = list(B.unit) + [f.zero()] * n
        self.algebra = Algebra(f, 2 * n, names, triples, unit)
        g = [[f.zero()] * (2 * n) for _ in range(2 * n)]
        for i in range(n):
            for j in range(n):
                g[i][n + j] = tau_of[i][j]
                g[n + i][j] = f.one() if i == j else f.zero()
        self.gram = Matrix(f, g, _raw=True)

    # embeddings ---------------------------------------------------------------
    def embed(self, x: Element) -> Element:
        f = self.field
        return Element(self.algebra, list(x.raw) + [f.zero()] * self.B.dim, _raw=True)

    def embed_dual(self, lam) -> Element:
        """lam: functional on B as a coefficient vector on the dual basis."""
        f = self.field
        lam = [f.coerce(c) for c in lam]
        return Element(self.algebra, [f.zero()] * self.B.dim + lam, _raw=True)

    def split(self, el: Element):
        n = self.B.dim
        return (Element(self.B, el.raw[:n], _raw=True), list(el.raw[n:]))

    def from_blocks(self, a, b, c, d, role=ROLE_ENDOMORPHISM) -> LinearMap:
        """Assemble a block map [[a, b], [c, d]] and validate its role."""
        f = self.field
        n = self.B.dim
        blocks = []
        for blk in (a, b, c, d):
            if blk is None:
                blocks.append(None)
            elif isinstance(blk, Matrix):
                blocks.append(blk)
            else:
                blocks.append(Matrix(f, blk))
        data = [[f.zero()] * (2 * n) for _ in range(2 * n)]
        for (bi, bj), blk in zip(((0, 0), (0, 1), (1, 0), (1, 1)),
                                 blocks):
            if blk is None:
                continue
            for i in range(n):
                for j in range(n):
                    data[bi * n + i][bj * n + j] = blk.data[i][j]
        return LinearMap(self.algebra, Matrix(f, data, _raw=True), role)

    def u_z(self, z: Element) -> LinearMap:
        """diag(id, m_zᵀ) for a central unit z of B."""
        mz = left_mult_matrix(z)
        return self.from_blocks(Matrix.identity(self.field, self.B.dim), None,
                                None, mz.transpose())

    def u_delta(self, delta_mat) -> LinearMap:
        """Unipotent [[id, 0], [δ, id]] for a derivation δ: B → DB."""
        ident = Matrix.identity(self.field, self.B.dim)
        return self.from_blocks(ident, None, delta_mat, ident)

    def lift(self, theta: LinearMap) -> LinearMap:
        """diag(θ, θ^{-T}) for an automorphism θ of B (untwisted case)."""
        inv = invert(theta.matrix)
        if inv is None:
            raise MalformedInput("lift needs an invertible endomorphism")
        return self.from_blocks(theta.matrix, None, None, inv.transpose())

    def t_part(self, u: LinearMap) -> Element:
        """The B-component the Jacobian of u must equal, read off block d."""
        f = self.field
        n = self.B.dim
        coeffs = []
        for i in range(n):
            acc = f.zero()
            for m in range(n):
                acc = f.add(acc, f.mul(u.matrix.data[n + m][n + i], self.B.unit[m]))
            coeffs.append(acc)
        return Element(self.B, coeffs, _raw=True)

    def tau_part(self, u: LinearMap):
        """τ(x) = c(x)(1) as a dual-basis coefficient vector, read off block c."""
        f = self.field
        n = self.B.dim
        out = []
        for j in range(n):
            acc = f.zero()
            for m in range(n):
                acc = f.add(acc, f.mul(u.matrix.data[n + m][j], self.B.unit[m]))
            out.append(acc)
        return out

    def derivation_space_to_dual(self):
        """Basis of Der(B, DB) as n x n matrices (columns δ(e_i) on dual basis).

        Untwisted dual actions: (b·λ)(v) = λ(vb) and (λ·b)(v) = λ(bv), so
        the Leibniz law δ(e_i e_j) = e_i δ(e_j) + δ(e_i) e_j becomes, per
        dual coordinate m,
            Σ_s c^{ij}_s D[m][s]
              = Σ_k coeff_k(e_m e_i) D[k][j] + Σ_k coeff_k(e_j e_m) D[k][i].
        """
        from .linalg import kernel_basis
        f = self.field
        n = self.B.dim
        rows = []
        for i in range(n):
            ei = self.B._basis_vec(i)
            for j in range(n):
                prod = self.B.mul_basis(i, j)
                for m in range(n):
                    row = [f.zero()] * (n * n)
                    for (s, c) in prod:
                        row[m * n + s] = f.add(row[m * n + s], c)
                    w1 = self.B.mul_raw(self.B._basis_vec(m), ei)
                    for k in range(n):
                        if not f.is_zero(w1[k]):
                            row[k * n + j] = f.sub(row[k * n + j], w1[k])
                    w2 = self.B.mul_raw(self.B._basis_vec(j), self.B._basis_vec(m))
                    for k in range(n):
                        if not f.is_zero(w2[k]):
                            row[k * n + i] = f.sub(row[k * n + i], w2[k])
                    if any(not f.is_zero(v) for v in row):
                        rows.append(row)
        if not rows:
            vecs = [[f.one() if t == s else f.zero() for t in range(n * n)]
                    for s in range(n * n)]
        else:
            vecs = kernel_basis(Matrix(f, rows, _raw=True))
        return [Matrix(f, [[v[k * n + i] for i in range(n)] for k in range(n)],
                       _raw=True) for v in vecs]


def trivial_extension(B: Algebra, tau: LinearMap | None = None, label=None):
    return TrivialExtensionGallery(B, tau, label)


# ---------------------------------------------------------------------------
# truncated polynomial algebra k[X]/(X^p) in characteristic p


class CyclicGallery:
    """k[X]/(X^p) over a field of characteristic p, alternating-sign form."""

    def __init__(self, p, field):
        if field.characteristic != p:
            raise MalformedInput("field characteristic must equal p")
        self.name = f"cyclic({p})"
        self.p = p
        self.field = field
        f = field
        names = ["1", "x"] + [f"x{i}" for i in range(2, p)]
        triples = []
        for i in range(p):
            for j in range(p):
                if i + j < p:
                    triples.append((i, j, i + j, 1))
        unit = [1] + [0] * (p - 1)
        self.algebra = Algebra(f, p, names, triples, unit)
        g = [[f.from_int((-1) ** (i + j)) if i + j < p else f.zero()
              for j in range(p)] for i in range(p)]
        self.gram = Matrix(f, g, _raw=True)

    @property
    def x(self):
        return self.algebra.basis_element(1)

    def valid_f(self, coeffs) -> bool:
        f = self.field
        coeffs = [f.coerce(c) for c in coeffs]
        return (len(coeffs) == self.p and f.is_zero(coeffs[0])
                and not f.is_zero(coeffs[1]))

    def all_valid_f(self):
        """Exhaustive list of radical generators f (f0 = 0, f1 ≠ 0)."""
        f = self.field
        elems = f.elements()
        nonzero = [e for e in elems if not f.is_zero(e)]
        out = [[f.zero()]]
        for _ in range(self.p - 2):
            out = [v + [e] for v in out for e in elems]
        return [[f.zero(), lead] + rest[1:] for lead in nonzero for rest in out]

    def u_f(self, coeffs) -> LinearMap:
        """The automorphism x ↦ f for f in rad \\ rad² (f0 = 0, f1 ≠ 0)."""
        if not self.valid_f(coeffs):
            raise MalformedInput("f must have zero constant term and f1 != 0")
        fel = Element(self.algebra, coeffs)
        cols, power = [], self.algebra.unit_element()
        for _ in range(self.p):
            cols.append(power.raw)
            power = power * fel
        return LinearMap(self.algebra, Matrix.from_columns(self.field, cols),
                         ROLE_ENDOMORPHISM)

    def mu(self, el: Element):
        """Σ (−1)^i a_i, i.e. the pairing of el against 1 (raw scalar)."""
        f = self.field
        acc = f.zero()
        for i, c in enumerate(el.raw):
            acc = f.add(acc, f.mul(f.from_int((-1) ** i), c))
        return acc

    def juf_expected(self, coeffs) -> Element:
        """μ(f^{p−1}) + Σ_{i≥1} (μ(f^{p−1−i}) + μ(f^{p−i}))·x^i."""
        f = self.field
        fel = Element(self.algebra, coeffs)
        powers = [self.algebra.unit_element()]
        for _ in range(self.p):
            powers.append(powers[-1] * fel)
        mus = [self.mu(pw) for pw in powers]
        out = [mus[self.p - 1]]
        for i in range(1, self.p):
            out.append(f.add(mus[self.p - 1 - i], mus[self.p - i]))
        return Element(self.algebra, out, _raw=True)


def cyclic(p, field=None):
    field = field or Field.prime(p)
    return CyclicGallery(p, field)


# ---------------------------------------------------------------------------
# matrix algebras and group algebras with the trace form


class SimpleGallery:
    def __init__(self, name, algebra, gram):
        self.name = name
        self.algebra = algebra
        self.gram = gram
        self.field = algebra.field


def matrix_algebra(m, field=None):
    field = field or Field.rationals()
    f = field
    n = m * m
    names = [f"E{i+1}{j+1}" for i in range(m) for j in range(m)]
    triples = []
    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    if j == k:
                        triples.append((i * m + j, k * m + l, i * m + l, 1))
    unit = [0] * n
    for i in range(m):
        unit[i * m + i] = 1
    A = Algebra(f, n, names, triples, unit)
    return SimpleGallery(f"matrix({m})", A, trace_form_gram(A))


def group_algebra(G: GroupData, field=None, names=None):
    field = field or Field.rationals()
    f = field
    m = G.order
    if names is None:
        names = [f"g{i}" if i != G.identity else "e" for i in range(m)]
    triples = [(i, j, G.mul(i, j), 1) for i in range(m) for j in range(m)]
    unit = [0] * m
    unit[G.identity] = 1
    A = Algebra(f, m, names, triples, unit)
    return SimpleGallery(f"group({m})", A, trace_form_gram(A))


def s3_group_algebra(field=None):
    item = group_algebra(symmetric_group_3(), field)
    item.name = "groupS3"
    return item


def build_gallery(name, **params):
    """Family registry: build one example by name.

    Families: exterior(n, field?), qci(q, field?), trivial(base, tau?),
    cyclic(p, field?), matrix(m, field?), group(table, field?, names?),
    group-s3(field?).  Returns the family carrier, which always exposes
    ``algebra`` and ``gram``.
    """
    builders = {
        "exterior": lambda: exterior(params["n"], params.get("field")),
        "qci": lambda: qci(params["q"], params.get("field")),
        "trivial": lambda: trivial_extension(params["base"],
                                             params.get("tau")),
        "cyclic": lambda: cyclic(params["p"], params.get("field")),
        "matrix": lambda: matrix_algebra(params["m"], params.get("field")),
        "group": lambda: group_algebra(params["table"], params.get("field"),
                                       params.get("names")),
        "group-s3": lambda: s3_group_algebra(params.get("field")),
    }
    if name not in builders:
        raise MalformedInput(f"unknown gallery family {name!r}")
    try:
        return builders[name]()
    except KeyError as exc:
        raise MalformedInput(f"family {name!r} is missing parameter {exc}") from exc
