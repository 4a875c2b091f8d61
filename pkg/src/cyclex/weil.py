"""Truncated Weil algebras of small Lie algebras and their basic subcomplexes.

W(g)_q is the exterior algebra on connection generators t{a} (degree 1)
tensored with words in curvature generators w{a} (degree 2), truncated to
curvature length <= q.  The differential sends each connection generator to
its curvature minus half the quadratic structure-constant term; cohomology
is computed slot by slot in exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import comb

from .algebra import Derivation, GradedAlgebra, Vec, _subset_mul_sign
from .linalg import SparseMatrix, cohomology_dim, cohomology_representatives
from .util import ONE, Report, sign_pow, vadd, vaddto, vscale, vsub

HALF = Fraction(1, 2)


# -- Lie algebra data --------------------------------------------------------

@dataclass(frozen=True)
class LieAlgebraData:
    """Basis labels plus sparse structure constants [x_i, x_j] = sum c^k_ij x_k.

    compact lists generators of a compact subalgebra as coefficient vectors;
    components lists finite-order linear maps on the Lie algebra (one per
    generator of the component group).  Both feed basic_subcomplex.
    """
    name: str
    labels: tuple[str, ...]
    brackets: dict[tuple[int, int], Vec]
    compact: tuple[Vec, ...] = ()
    components: tuple[SparseMatrix, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.labels)

    def bracket(self, i: int, j: int) -> Vec:
        if (i, j) in self.brackets:
            return dict(self.brackets[i, j])
        if (j, i) in self.brackets:
            return vscale(-ONE, self.brackets[j, i])
        return {}


def bracket_vec(g: LieAlgebraData, u: Vec, v: Vec) -> Vec:
    out: Vec = {}
    for i, a in u.items():
        for j, b in v.items():
            vaddto(out, a * b, g.bracket(i, j))
    return out


def check_lie_algebra(g: LieAlgebraData) -> Report:
    """Index hygiene, antisymmetry of stored entries, Jacobi identity."""
    rep = Report(f"Lie algebra data: {g.name}")
    n = g.dim
    bad = [(i, j) for (i, j), v in g.brackets.items()
           if not (0 <= i < n and 0 <= j < n)
           or any(not 0 <= k < n for k in v)]
    rep.record("structure constants index the basis", not bad,
               f"entry {bad[0]}" if bad else None)
    if bad:
        return rep
    anti = None
    for (i, j), v in g.brackets.items():
        if i == j and any(v.values()):
            anti = f"[{g.labels[i]},{g.labels[i]}] is nonzero"
            break
        if i < j and (j, i) in g.brackets and vadd(v, g.brackets[j, i]):
            anti = f"[{g.labels[i]},{g.labels[j]}] does not negate the reverse"
            break
    rep.record("bracket is antisymmetric", anti is None, anti)
    jac = None
    for i, j, k in combinations(range(n), 3):
        total = bracket_vec(g, {i: ONE}, g.bracket(j, k))
        vaddto(total, ONE, bracket_vec(g, {j: ONE}, g.bracket(k, i)))
        vaddto(total, ONE, bracket_vec(g, {k: ONE}, g.bracket(i, j)))
        if total:
            jac = f"cyclic sum over ({g.labels[i]},{g.labels[j]},{g.labels[k]})"
            break
    rep.record("Jacobi identity holds", jac is None, jac)
    return rep


def abelian_lie(k: int) -> LieAlgebraData:
    """k commuting generators."""
    return LieAlgebraData(f"abelian:{k}", tuple(f"x{i}" for i in range(k)), {})


def gl_lie(n: int) -> LieAlgebraData:
    """All n x n matrices, basis E_rs; the compact part is so(n)."""
    labels = tuple(f"E{r + 1}{s + 1}" for r in range(n) for s in range(n))
    brackets: dict[tuple[int, int], Vec] = {}
    for a in range(n * n):
        for b in range(a + 1, n * n):
            i, j = divmod(a, n)
            k, l = divmod(b, n)
            out: Vec = {}
            if j == k:
                vaddto(out, ONE, {i * n + l: ONE})
            if l == i:
                vaddto(out, -ONE, {k * n + j: ONE})
            if out:
                brackets[a, b] = out
    compact = tuple({i * n + j: ONE, j * n + i: -ONE}
                    for i in range(n) for j in range(i + 1, n))
    return LieAlgebraData(f"gl{n}", labels, brackets, compact=compact)


def sl2_lie() -> LieAlgebraData:
    """Basis h, e, f with [h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    brackets = {(0, 1): {1: Fraction(2)}, (0, 2): {2: Fraction(-2)},
                (1, 2): {0: ONE}}
    return LieAlgebraData("sl2", ("h", "e", "f"), brackets)


def reflection_conjugation(n: int) -> SparseMatrix:
    """Conjugation by diag(1, .., 1, -1) acting on n x n matrices."""
    G = SparseMatrix(n * n, n * n)
    for r in range(n):
        for s in range(n):
            flip = (r == n - 1) != (s == n - 1)
            G[r * n + s, r * n + s] = -ONE if flip else ONE
    return G


def builtin_lie(name: str) -> LieAlgebraData:
    if name == "sl2":
        return sl2_lie()
    if name.startswith("gl") and name[2:].isdigit():
        return gl_lie(int(name[2:]))
    if name.startswith("abelian:") and name[8:].isdigit():
        return abelian_lie(int(name[8:]))
    raise KeyError(f"no builtin Lie algebra {name!r}")


# -- the truncated Weil algebra ----------------------------------------------

@dataclass
class TruncatedWeil:
    """Monomials are (connection subset, curvature multiset) pairs; t{a} is
    the degree-1 generator dual to basis vector a and w{a} its curvature."""
    lie: LieAlgebraData
    q: int
    algebra: GradedAlgebra
    basis: list[tuple[tuple[int, ...], tuple[int, ...]]]
    index: dict[tuple[tuple[int, ...], tuple[int, ...]], int]

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def top_degree(self) -> int:
        return self.lie.dim + 2 * self.q

    def monomial(self, ext=(), sym=()) -> int:
        key = (tuple(ext), tuple(sym))
        if key not in self.index:
            raise KeyError(f"{self.algebra.name}: no basis monomial {key}")
        return self.index[key]

    def theta(self, a: int) -> Vec:
        return {self.monomial((a,)): ONE}

    def omega(self, a: int) -> Vec:
        return {self.monomial((), (a,)): ONE}

    def degree_indices(self, n: int) -> list[int]:
        return [i for i, d in enumerate(self.algebra.degrees) if d == n]


def build_truncated_weil(lie_data: LieAlgebraData, q: int,
                         limit: int = 1024) -> TruncatedWeil:
    """Enumerate the truncated basis and extend the generator differentials
    by the graded Leibniz rule.  Refuses oversized inputs."""
    rep = check_lie_algebra(lie_data)
    if not rep.ok:
        raise ValueError(rep.summary())
    if q < 0:
        raise ValueError("truncation level must be >= 0")
    n = lie_data.dim
    size = (2 ** n) * comb(n + q, q)
    if size > limit:
        raise ValueError(f"W({lie_data.name})_{q} needs {size} basis "
                         f"monomials (limit {limit})")
    exts = [s for r in range(n + 1) for s in combinations(range(n), r)]
    syms = [m for r in range(q + 1)
            for m in combinations_with_replacement(range(n), r)]
    basis = [(s, m) for s in exts for m in syms]
    basis.sort(key=lambda sm: (len(sm[0]) + 2 * len(sm[1]), sm))
    index = {sm: i for i, sm in enumerate(basis)}
    labels = ["".join([f"t{a}" for a in s] + [f"w{a}" for a in m]) or "1"
              for s, m in basis]
    degrees = [len(s) + 2 * len(m) for s, m in basis]

    products: dict[tuple[int, int], Vec] = {}
    for i, (s1, m1) in enumerate(basis):
        for j, (s2, m2) in enumerate(basis):
            merged, sign = _subset_mul_sign(s1, s2)
            if merged is None:
                continue
            msym = tuple(sorted(m1 + m2))
            if len(msym) > q:
                continue
            products[i, j] = {index[merged, msym]: Fraction(sign)}

    def mul(u: Vec, v: Vec) -> Vec:
        out: Vec = {}
        for a, ca in u.items():
            for b, cb in v.items():
                img = products.get((a, b))
                if img:
                    vaddto(out, ca * cb, img)
        return out

    # dt^a = w^a - 1/2 c^a_bc t^b t^c and dw^a = c^a_bc w^b t^c; curvature
    # terms drop out of the quotient when q == 0
    dtheta: list[Vec] = []
    domega: list[Vec] = []
    for a in range(n):
        dt: Vec = {index[(), (a,)]: ONE} if q >= 1 else {}
        dw: Vec = {}
        for b in range(n):
            for c in range(n):
                coeff = lie_data.bracket(b, c).get(a)
                if not coeff:
                    continue
                tt = products.get((index[(b,), ()], index[(c,), ()]))
                if tt:
                    vaddto(dt, -HALF * coeff, tt)
                if q >= 1:
                    wt = products.get((index[(), (b,)], index[(c,), ()]))
                    if wt:
                        vaddto(dw, coeff, wt)
        dtheta.append(dt)
        domega.append(dw)

    diff: dict[int, Vec] = {}
    for i, (s, m) in enumerate(basis):
        out: Vec = {}
        for pos in range(len(s)):
            pre = {index[s[:pos], ()]: ONE}
            post = {index[s[pos + 1:], m]: ONE}
            vaddto(out, Fraction(sign_pow(pos)),
                   mul(mul(pre, dtheta[s[pos]]), post))
        for j in range(len(m)):
            pre = {index[s, m[:j]]: ONE}
            post = {index[(), m[j + 1:]]: ONE}
            vaddto(out, Fraction(sign_pow(len(s))),
                   mul(mul(pre, domega[m[j]]), post))
        if out:
            diff[i] = out

    algebra = GradedAlgebra(f"W({lie_data.name})_{q}", labels, degrees,
                            products, unit={index[(), ()]: ONE}, diff=diff)
    return TruncatedWeil(lie_data, q, algebra, basis, index)


# -- operators from K-data ---------------------------------------------------

def contraction(W: TruncatedWeil, X: Vec) -> Derivation:
    """Odd derivation pairing connection generators with X; kills curvatures."""
    images: dict[int, Vec] = {}
    for i, (s, m) in enumerate(W.basis):
        out: Vec = {}
        for pos, a in enumerate(s):
            c = X.get(a)
            if c:
                rest = s[:pos] + s[pos + 1:]
                vaddto(out, Fraction(sign_pow(pos)) * c,
                       {W.index[rest, m]: ONE})
        if out:
            images[i] = out
    return Derivation(W.algebra, -1, images)


def lie_action(W: TruncatedWeil, X: Vec) -> Derivation:
    """Infinitesimal action along X, as the contraction homotopy d.i + i.d."""
    iota = contraction(W, X)
    A = W.algebra
    images: dict[int, Vec] = {}
    for i in range(A.dim):
        e = A.basis_vec(i)
        out = vadd(A.d(iota.apply(e)), iota.apply(A.d(e)))
        if out:
            images[i] = out
    return Derivation(W.algebra, 0, images)


def component_action(W: TruncatedWeil, G: SparseMatrix) -> dict[int, Vec]:
    """Algebra map induced on the dual generators by the inverse of G,
    extended multiplicatively to monomials."""
    n = W.lie.dim
    if G.rows != n or G.cols != n:
        raise ValueError(f"component map must be {n}x{n}")
    inv_cols = []
    for j in range(n):
        col = G.solve({j: ONE})
        if col is None:
            raise ValueError("component map is not invertible")
        inv_cols.append(col)
    dual = [{j: inv_cols[j][a] for j in range(n) if inv_cols[j].get(a)}
            for a in range(n)]
    A = W.algebra
    theta_img = [{W.monomial((j,)): c for j, c in dual[a].items()}
                 for a in range(n)]
    omega_img = [{W.monomial((), (j,)): c for j, c in dual[a].items()}
                 for a in range(n)] if W.q >= 1 else []
    images: dict[int, Vec] = {}
    for i, (s, m) in enumerate(W.basis):
        out = dict(A.unit)
        for a in s:
            out = A.mul(out, theta_img[a])
        for v in m:
            out = A.mul(out, omega_img[v])
        images[i] = out
    return images


# -- complexes and cohomology ------------------------------------------------

@dataclass
class WeilComplex:
    """A d-closed graded subspace of a truncated Weil algebra, one list of
    spanning vectors per total degree."""
    weil: TruncatedWeil
    vectors: dict[int, list[Vec]]

    def dims(self) -> list[int]:
        return [len(self.vectors.get(n, []))
                for n in range(self.weil.top_degree + 1)]


def whole_complex(W: TruncatedWeil) -> WeilComplex:
    vectors = {n: [{i: ONE} for i in W.degree_indices(n)]
               for n in range(W.top_degree + 1)}
    return WeilComplex(W, vectors)


def basic_subcomplex(W: TruncatedWeil, compact=None,
                     components=None) -> WeilComplex:
    """Joint kernel of the contractions and infinitesimal actions along the
    compact generators plus invariance under the component maps.

    Raises when the subspace is not closed under d, which signals K-data
    whose component maps are no Lie algebra automorphisms.
    """
    if compact is None:
        compact = W.lie.compact
    if components is None:
        components = W.lie.components
    A = W.algebra
    ops: list[dict[int, Vec]] = []
    for X in compact:
        ops.append(contraction(W, X).images)
        ops.append(lie_action(W, X).images)
    for G in components:
        rho = component_action(W, G)
        delta = {}
        for i in range(A.dim):
            gap = vsub(rho.get(i, {}), {i: ONE})
            if gap:
                delta[i] = gap
        ops.append(delta)
    if not ops:
        return whole_complex(W)

    vectors: dict[int, list[Vec]] = {}
    for n in range(W.top_degree + 1):
        idxs = W.degree_indices(n)
        cols = []
        for i in idxs:
            stacked: Vec = {}
            for t, op in enumerate(ops):
                for k, c in op.get(i, {}).items():
                    stacked[t * A.dim + k] = c
            cols.append(stacked)
        mat = SparseMatrix.from_columns(len(ops) * A.dim, cols)
        vectors[n] = [{idxs[p]: c for p, c in vec.items()}
                      for vec in mat.kernel_basis()]

    for n in range(W.top_degree + 1):
        target = SparseMatrix.from_columns(A.dim, vectors.get(n + 1, []))
        for v in vectors[n]:
            dv = A.d(v)
            if dv and target.solve(dv) is None:
                raise ValueError(
                    f"subspace is not closed under d at degree {n}: "
                    f"d({A.show(v)}) leaves it")
    return WeilComplex(W, vectors)


def _slot_matrix(cx: WeilComplex, n: int) -> SparseMatrix:
    """d out of the degree-n slot, in slot coordinates."""
    A = cx.weil.algebra
    target = cx.vectors.get(n + 1, [])
    basis_mat = SparseMatrix.from_columns(A.dim, target)
    cols = []
    for v in cx.vectors.get(n, []):
        dv = A.d(v)
        x = basis_mat.solve(dv) if dv else {}
        if x is None:
            raise ValueError(f"not closed under d at degree {n}")
        cols.append(x)
    return SparseMatrix.from_columns(len(target), cols)


def _as_complex(complex_or_weil) -> WeilComplex:
    if isinstance(complex_or_weil, TruncatedWeil):
        return whole_complex(complex_or_weil)
    return complex_or_weil


def weil_cohomology(complex_or_weil) -> list[int]:
    """Cohomology dimensions by total degree, exact."""
    cx = _as_complex(complex_or_weil)
    top = cx.weil.top_degree
    mats = [_slot_matrix(cx, n) for n in range(top + 1)]
    dims = []
    for n in range(top + 1):
        d_in = mats[n - 1] if n else SparseMatrix(len(cx.vectors.get(0, [])), 0)
        dims.append(cohomology_dim(d_in, mats[n]))
    return dims


def weil_representatives(complex_or_weil) -> dict[int, list[Vec]]:
    """Cocycle representatives per degree, as ambient algebra elements."""
    cx = _as_complex(complex_or_weil)
    top = cx.weil.top_degree
    mats = [_slot_matrix(cx, n) for n in range(top + 1)]
    out: dict[int, list[Vec]] = {}
    for n in range(top + 1):
        d_in = mats[n - 1] if n else SparseMatrix(len(cx.vectors.get(0, [])), 0)
        slot = cx.vectors.get(n, [])
        ambient = []
        for r in cohomology_representatives(d_in, mats[n]):
            vec: Vec = {}
            for p, c in r.items():
                vaddto(vec, c, slot[p])
            ambient.append(vec)
        if ambient:
            out[n] = ambient
    return out
