"""Hopf actions on graded algebras and the characteristic map they induce.

An action is a table of operators, one per Hopf basis element, checked
against multiplicativity, the coproduct-Leibniz rule, degree additivity and
the differentials.  A closed invariant trace turns tensors of Hopf elements
into cochains on the algebra; the map commutes with every cyclic structure
map, which the tests verify as exact matrix identities.  Convolution-
invertible cocycle pairs twist an action into a conjugate one; the 2x2
amplification embeds both twisted and untwisted maps into matrices over the
algebra, where the insertion operator and linear-algebra certificates show
the two maps agree in cohomology, without the rotation integral that the
algebraic identities replace.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .algebra import (GradedAlgebra, Trace, inner_derivation, matrix2,
                      matrix2_trace)
from .cochains import AlgebraCochains, Cochain, lie_derivative
from .cyclic import ComplexWindow
from .hopf import HopfData, twisted_antipode
from .linalg import SparseMatrix
from .util import ONE, Report, koszul, sign_pow, vaddto

Vec = dict[int, Fraction]


class HopfAction:
    """Action of a Hopf algebra on a graded algebra, one operator per
    Hopf basis element, stored as images of the algebra basis."""

    def __init__(self, hopf: HopfData, omega: GradedAlgebra, table):
        self.hopf = hopf
        self.omega = omega
        self.table: dict[tuple[int, int], Vec] = {}
        for (hi, ai), vec in table.items():
            clean = {k: Fraction(c) for k, c in vec.items() if c}
            if clean:
                self.table[hi, ai] = clean
        self.name = f"{hopf.name} on {omega.name}"

    def apply_basis(self, hi: int, ai: int) -> Vec:
        return self.table.get((hi, ai), {})

    def apply(self, hvec: Vec, avec: Vec) -> Vec:
        out: Vec = {}
        for hi, hc in hvec.items():
            for ai, ac in avec.items():
                c = hc * ac
                if c:
                    vaddto(out, c, self.apply_basis(hi, ai))
        return out

    def __repr__(self):
        return f"<HopfAction {self.name}>"


def trivial_action(hopf: HopfData, omega: GradedAlgebra) -> HopfAction:
    """Every Hopf element acts by its counit value."""
    table = {}
    for hi in range(hopf.algebra.dim):
        e = hopf.counit.get(hi)
        if not e:
            continue
        for ai in range(omega.dim):
            table[hi, ai] = {ai: e}
    return HopfAction(hopf, omega, table)


def check_action(act: HopfAction) -> Report:
    """Unit acts as identity, composition follows the Hopf product, the
    coproduct-Leibniz rule with Koszul sign, degree additivity, and the
    differential exchange rule."""
    H = act.hopf
    A = H.algebra
    W = act.omega
    rep = Report(f"hopf action: {act.name}")

    ok = True
    witness = None
    for ai in range(W.dim):
        img = act.apply(A.unit, {ai: ONE})
        if img != {ai: ONE}:
            ok = False
            witness = f"unit sends {W.labels[ai]} to {W.show(img)}"
            break
    rep.record("hopf unit acts as the identity", ok, witness)

    ok = True
    witness = None
    for hi in range(A.dim):
        for gi in range(A.dim):
            for ai in range(W.dim):
                lhs = act.apply(A.mul_basis(hi, gi), {ai: ONE})
                rhs = act.apply({hi: ONE}, act.apply_basis(gi, ai))
                if lhs != rhs:
                    ok = False
                    witness = (f"pi({A.labels[hi]}*{A.labels[gi]}) vs "
                               f"composition on {W.labels[ai]}")
                    break
            if not ok:
                break
        if not ok:
            break
    rep.record("action composes along the product", ok, witness)

    if W.is_unital:
        ok = True
        witness = None
        for hi in range(A.dim):
            want = {k: H.counit.get(hi, Fraction(0)) * c
                    for k, c in W.unit.items()}
            want = {k: c for k, c in want.items() if c}
            got = act.apply({hi: ONE}, W.unit)
            if got != want:
                ok = False
                witness = f"pi({A.labels[hi]})(1) = {W.show(got)}"
                break
        rep.record("unit of the algebra absorbs to the counit", ok, witness)

    ok = True
    witness = None
    for hi in range(A.dim):
        for ai in range(W.dim):
            for bi in range(W.dim):
                lhs = act.apply({hi: ONE}, W.mul_basis(ai, bi))
                rhs: Vec = {}
                for (h0, h1), c in H.coproduct.get(hi, {}).items():
                    s = c * koszul(W.degrees[ai], A.degrees[h1])
                    vaddto(rhs, s, W.mul(act.apply_basis(h0, ai),
                                         act.apply_basis(h1, bi)))
                rhs = {k: c for k, c in rhs.items() if c}
                if lhs != rhs:
                    ok = False
                    witness = (f"pi({A.labels[hi]})({W.labels[ai]}*"
                               f"{W.labels[bi]}): {W.show(lhs)} vs {W.show(rhs)}")
                    break
            if not ok:
                break
        if not ok:
            break
    rep.record("coproduct-Leibniz rule", ok, witness)

    ok = True
    witness = None
    for (hi, ai), img in act.table.items():
        want = A.degrees[hi] + W.degrees[ai]
        if any(W.degrees[k] != want for k in img):
            ok = False
            witness = (f"pi({A.labels[hi]})({W.labels[ai]}) leaves degree "
                       f"{want}")
            break
    rep.record("degrees add", ok, witness)

    if A.diff or W.diff:
        ok = True
        witness = None
        for hi in range(A.dim):
            for ai in range(W.dim):
                lhs = W.d(act.apply_basis(hi, ai))
                rhs = act.apply(A.d({hi: ONE}), {ai: ONE})
                vaddto(rhs, Fraction(sign_pow(A.degrees[hi])),
                       act.apply({hi: ONE}, W.d({ai: ONE})))
                rhs = {k: c for k, c in rhs.items() if c}
                if lhs != rhs:
                    ok = False
                    witness = (f"d(pi({A.labels[hi]})({W.labels[ai]})): "
                               f"{W.show(lhs)} vs {W.show(rhs)}")
                    break
            if not ok:
                break
        rep.record("differential exchange rule", ok, witness)
    return rep


def check_invariant_trace(act: HopfAction, trace: Trace, delta: Vec,
                          sigma: Vec) -> Report:
    """Closed, supported in its weight, twisted-cyclic under the group-like,
    and invariant under the action up to the twisted antipode."""
    H = act.hopf
    A = H.algebra
    W = act.omega
    rep = Report(f"invariant trace on {W.name}")

    bad = [i for i in trace.values if W.degrees[i] != trace.weight]
    rep.record("supported in its weight", not bad,
               f"nonzero on {W.labels[bad[0]]}" if bad else None)
    if W.diff:
        bad_d = [i for i in range(W.dim) if trace.pair(W.d({i: ONE}))]
        rep.record("closed", not bad_d,
                   f"pairs with d({W.labels[bad_d[0]]})" if bad_d else None)

    ok = True
    witness = None
    for ai in range(W.dim):
        for bi in range(W.dim):
            lhs = trace.pair(W.mul_basis(ai, bi))
            rhs = trace.pair(W.mul({bi: ONE}, act.apply(sigma, {ai: ONE})))
            if lhs != rhs:
                ok = False
                witness = (f"tr({W.labels[ai]}*{W.labels[bi]}) = {lhs}, "
                           f"twisted flip gives {rhs}")
                break
        if not ok:
            break
    rep.record("twisted trace under the group-like", ok, witness)

    twisted = twisted_antipode(H, delta)
    ok = True
    witness = None
    for hi in range(A.dim):
        for ai in range(W.dim):
            for bi in range(W.dim):
                lhs = trace.pair(W.mul(act.apply_basis(hi, ai), {bi: ONE}))
                rhs = trace.pair(W.mul({ai: ONE},
                                       act.apply(twisted.get(hi, {}),
                                                 {bi: ONE})))
                if lhs != rhs:
                    ok = False
                    witness = (f"tr(pi({A.labels[hi]})({W.labels[ai]})*"
                               f"{W.labels[bi]}) = {lhs} vs {rhs}")
                    break
            if not ok:
                break
        if not ok:
            break
    rep.record("invariant up to the twisted antipode", ok, witness)
    return rep


def chi(act: HopfAction, trace: Trace, tens: dict[tuple, Fraction]) -> Cochain:
    """Cochain on the algebra from a tensor of Hopf elements: evaluate the
    trace against a_0 pi(h^1)(a_1)..pi(h^k)(a_k), with the Koszul sign from
    threading each h^j past a_0..a_{j-1}."""
    W = act.omega
    A = act.hopf.algebra
    levels = {len(t) for t in tens}
    if len(levels) > 1:
        raise ValueError("mixed tensor lengths")
    k = levels.pop() if levels else 0
    out: dict[tuple, Fraction] = {}
    for t, c in tens.items():
        hdegs = [A.degrees[x] for x in t]
        for atup in product(range(W.dim), repeat=k + 1):
            m: Vec = {atup[0]: ONE}
            pre = W.degrees[atup[0]]
            sgn = 1
            for j in range(k):
                if hdegs[j] % 2 and pre % 2:
                    sgn = -sgn
                m = W.mul(m, act.apply_basis(t[j], atup[j + 1]))
                if not m:
                    break
                pre += W.degrees[atup[j + 1]]
            else:
                val = c * sgn * trace.pair(m)
                if val:
                    s = out.get(atup, 0) + val
                    if s:
                        out[atup] = s
                    else:
                        del out[atup]
    return Cochain(W, k, out)


def chi_level_matrix(act: HopfAction, trace: Trace, k: int) -> SparseMatrix:
    """Matrix of the characteristic map at level k: columns indexed by Hopf
    tensor tuples, rows by algebra cochain tuples, both mixed-radix."""
    W = act.omega
    hdim = act.hopf.algebra.dim
    cols = hdim ** k
    dual = AlgebraCochains(W)
    m = SparseMatrix(dual.dim(k), cols)
    for col in range(cols):
        t = []
        idx = col
        for _ in range(k):
            t.append(idx % hdim)
            idx //= hdim
        t = tuple(reversed(t))
        c = chi(act, trace, {t: ONE})
        for atup, v in c.coeffs.items():
            m[dual.encode(atup), col] = v
    return m


def chi_window_matrix(act: HopfAction, trace: Trace, hopf_win: ComplexWindow,
                      alg_win: ComplexWindow, m: int) -> SparseMatrix:
    """Matrix of the characteristic map from degree m of a Hopf tensor
    window to degree m minus the trace weight of an algebra cochain window.
    Levels and columns are preserved slotwise."""
    q = trace.weight
    if m < q:
        raise ValueError(f"target degree {m - q} falls below the window")
    dual = AlgebraCochains(act.omega)
    out = SparseMatrix(alg_win.dim(m - q), hopf_win.dim(m))
    index = alg_win._index[m - q]
    for pos, (p, col, i) in enumerate(hopf_win.basis(m)):
        k = p - col
        t = hopf_win.X.decode(k, i)
        c = chi(act, trace, {t: ONE})
        for atup, v in c.coeffs.items():
            tgt = index.get((col + k, col, dual.encode(atup)))
            if tgt is None:
                raise AssertionError(
                    f"image at level {k}, column {col} missing from the "
                    f"algebra window; raise its weight cap")
            out[tgt, pos] = v
    return out


# -- cocycle twisting --------------------------------------------------------


def _rho_of(rho: dict[int, Vec], hvec: Vec) -> Vec:
    out: Vec = {}
    for hi, c in hvec.items():
        img = rho.get(hi)
        if img:
            vaddto(out, c, img)
    return out


def check_twist(act: HopfAction, rho_plus: dict[int, Vec],
                rho_minus: dict[int, Vec], sigma: Vec) -> Report:
    """Convolution inverse (dr1), the two cocycle laws (dr2, dr3), the
    normalizations (dr4), plus degree and differential compatibility."""
    H = act.hopf
    A = H.algebra
    W = act.omega
    rep = Report(f"twist cocycle on {act.name}")

    ok = True
    witness = None
    for hi in range(A.dim):
        conv: Vec = {}
        for (h0, h1), c in H.coproduct.get(hi, {}).items():
            vaddto(conv, c, W.mul(rho_plus.get(h0, {}), rho_minus.get(h1, {})))
        want = {k: H.counit.get(hi, Fraction(0)) * c
                for k, c in W.unit.items()}
        want = {k: c for k, c in want.items() if c}
        conv = {k: c for k, c in conv.items() if c}
        if conv != want:
            ok = False
            witness = f"on {A.labels[hi]}: {W.show(conv)}"
            break
    rep.record("dr1 convolution inverse", ok, witness)

    ok = True
    witness = None
    for hi in range(A.dim):
        for gi in range(A.dim):
            lhs = _rho_of(rho_plus, A.mul_basis(hi, gi))
            rhs: Vec = {}
            for (h0, h1), c in H.coproduct.get(hi, {}).items():
                vaddto(rhs, c, W.mul(rho_plus.get(h0, {}),
                                     act.apply({h1: ONE},
                                               rho_plus.get(gi, {}))))
            rhs = {k: c for k, c in rhs.items() if c}
            if lhs != rhs:
                ok = False
                witness = (f"rho+({A.labels[hi]}*{A.labels[gi]}): "
                           f"{W.show(lhs)} vs {W.show(rhs)}")
                break
        if not ok:
            break
    rep.record("dr2 plus cocycle law", ok, witness)

    ok = True
    witness = None
    for gi in range(A.dim):
        for hi in range(A.dim):
            lhs = _rho_of(rho_minus, A.mul_basis(gi, hi))
            rhs: Vec = {}
            for (h0, h1), c in H.coproduct.get(hi, {}).items():
                vaddto(rhs, c, W.mul(act.apply({h0: ONE},
                                               rho_minus.get(gi, {})),
                                     rho_minus.get(h1, {})))
            rhs = {k: c for k, c in rhs.items() if c}
            if lhs != rhs:
                ok = False
                witness = (f"rho-({A.labels[gi]}*{A.labels[hi]}): "
                           f"{W.show(lhs)} vs {W.show(rhs)}")
                break
        if not ok:
            break
    rep.record("dr3 minus cocycle law", ok, witness)

    unit_w = {k: Fraction(c) for k, c in W.unit.items()}
    norm_ok = (_rho_of(rho_plus, A.unit) == unit_w
               and _rho_of(rho_minus, A.unit) == unit_w
               and _rho_of(rho_plus, sigma) == unit_w
               and _rho_of(rho_minus, sigma) == unit_w)
    rep.record("dr4 normalization", norm_ok,
               None if norm_ok else "rho(1) or rho(sigma) differs from 1")

    ok = True
    witness = None
    for name, rho in (("rho+", rho_plus), ("rho-", rho_minus)):
        for hi, img in rho.items():
            if any(W.degrees[k] != A.degrees[hi] for k in img if img[k]):
                ok = False
                witness = f"{name}({A.labels[hi]}) shifts degree"
                break
        if not ok:
            break
    rep.record("degree preserved", ok, witness)

    if A.diff or W.diff:
        ok = True
        witness = None
        for name, rho in (("rho+", rho_plus), ("rho-", rho_minus)):
            for hi in range(A.dim):
                lhs = _rho_of(rho, A.d({hi: ONE}))
                rhs = W.d(rho.get(hi, {}))
                if lhs != rhs:
                    ok = False
                    witness = f"{name} vs d at {A.labels[hi]}"
                    break
            if not ok:
                break
        rep.record("commutes with differentials", ok, witness)
    return rep


def twist_action(act: HopfAction, rho_plus: dict[int, Vec],
                 rho_minus: dict[int, Vec], sigma: Vec) -> HopfAction:
    """Conjugate action rho+(h_(0)) pi(h_(1))(a) rho-(h_(2)) with the Koszul
    sign for the trailing leg passing the argument; refuses cocycle data
    that fails any dr law."""
    rep = check_twist(act, rho_plus, rho_minus, sigma)
    if not rep.ok:
        raise ValueError(rep.summary())
    H = act.hopf
    A = H.algebra
    W = act.omega
    table: dict[tuple[int, int], Vec] = {}
    for hi in range(A.dim):
        legs = H.legs({hi: ONE}, 3)
        for ai in range(W.dim):
            out: Vec = {}
            for (h0, h1, h2), c in legs.items():
                s = c * koszul(A.degrees[h2], W.degrees[ai])
                mid = W.mul(rho_plus.get(h0, {}), act.apply_basis(h1, ai))
                vaddto(out, s, W.mul(mid, rho_minus.get(h2, {})))
            out = {k: c for k, c in out.items() if c}
            if out:
                table[hi, ai] = out
    return HopfAction(H, W, table)


# -- 2x2 amplification -------------------------------------------------------


def _block(omega: GradedAlgebra, r: int, s: int, i: int) -> int:
    return (r * 2 + s) * omega.dim + i


def amplify_action(act: HopfAction, m2: GradedAlgebra | None = None) -> HopfAction:
    """Entrywise action on 2x2 matrices over the algebra."""
    W = act.omega
    if m2 is None:
        m2 = matrix2(W)
    table: dict[tuple[int, int], Vec] = {}
    for (hi, ai), img in act.table.items():
        for r in range(2):
            for s in range(2):
                table[hi, _block(W, r, s, ai)] = {
                    _block(W, r, s, k): c for k, c in img.items()}
    return HopfAction(act.hopf, m2, table)


def amplify_twist(act: HopfAction, rho_plus: dict[int, Vec],
                  rho_minus: dict[int, Vec]):
    """Block-diagonal amplification: the cocycle in the first corner, the
    counit in the second."""
    H = act.hopf
    W = act.omega
    rp2: dict[int, Vec] = {}
    rm2: dict[int, Vec] = {}
    for hi in range(H.algebra.dim):
        e = H.counit.get(hi, Fraction(0))
        for rho, out in ((rho_plus, rp2), (rho_minus, rm2)):
            vec: Vec = {}
            for k, c in rho.get(hi, {}).items():
                vec[_block(W, 0, 0, k)] = c
            if e:
                for k, c in W.unit.items():
                    vec[_block(W, 1, 1, k)] = e * c
            if vec:
                out[hi] = vec
    return rp2, rm2


def corner_embedding_pullback(phi: Cochain, omega: GradedAlgebra,
                              corner: int) -> Cochain:
    """Restrict a cochain on 2x2 matrices along a corner embedding
    (corner 1 is the lower right, corner 0 the upper left)."""
    out: dict[tuple, Fraction] = {}
    for atup, c in phi.coeffs.items():
        back = []
        good = True
        for x in atup:
            block, i = divmod(x, omega.dim)
            r, s = divmod(block, 2)
            if r != corner or s != corner:
                good = False
                break
            back.append(i)
        if good:
            out[tuple(back)] = c
    return Cochain(omega, phi.level, out)


def interior_insertion(g: Vec, phi: Cochain) -> Cochain:
    """Alternating sum over positions of inserting a fixed element after
    each argument except the last; lowers the level by one.  The j-th
    insertion carries (-1)^j, and odd-degree insertions pick up the Koszul
    sign of the arguments they pass.  The j=0 term has sign +1, so at
    level 1 this is the single evaluation phi(x0, g)."""
    if phi.level < 1:
        raise ValueError("insertion needs level >= 1")
    A = phi.algebra
    gdeg = {A.degrees[k] for k in g if g[k]}
    if len(gdeg) > 1:
        raise ValueError("insertion element must be homogeneous")
    t_g = gdeg.pop() if gdeg else 0
    out: dict[tuple, Fraction] = {}
    k = phi.level
    for atup in product(range(A.dim), repeat=k):
        total = Fraction(0)
        pre = 0
        for j in range(k):
            pre += A.degrees[atup[j]]
            sgn = sign_pow(j + t_g * pre)
            for gi, gc in g.items():
                key = atup[:j + 1] + (gi,) + atup[j + 1:]
                v = phi.coeffs.get(key)
                if v:
                    total += sgn * gc * v
        if total:
            out[atup] = total
    return Cochain(A, k - 1, out)


def insertion_lie(g: Vec, phi: Cochain) -> Cochain:
    """Sum over argument slots of the graded commutator with a fixed
    element, bracketed on the right: each slot x becomes xg - gx up to the
    Koszul sign.  This orientation is the one the insertion anticommutator
    b.insert + insert.b produces exactly."""
    neg = {i: -c for i, c in g.items()}
    return lie_derivative(inner_derivation(phi.algebra, neg), phi)


# -- coboundary certificates -------------------------------------------------


def coboundary_certificate(window: ComplexWindow, n: int, vec: Vec):
    """Primitive whose boundary is the given degree-n window vector, or
    None when the vector's class is nonzero.  Refuses non-cocycles."""
    vec = {k: Fraction(c) for k, c in vec.items() if c}
    if n > window.N - 1:
        raise ValueError("need one degree above the cocycle to check closedness")
    img = window.boundary(n).apply(vec)
    if img:
        raise ValueError("vector is not closed in the window")
    if not vec:
        return {}
    if n == 0:
        return None
    return window.boundary(n - 1).solve(vec)


def verify_certificate(window: ComplexWindow, n: int, vec: Vec,
                       primitive: Vec) -> bool:
    """Exact recomputation that the primitive bounds the vector."""
    vec = {k: Fraction(c) for k, c in vec.items() if c}
    if n == 0:
        return not vec and not primitive
    got = window.boundary(n - 1).apply(
        {k: Fraction(c) for k, c in primitive.items()})
    return got == vec


def window_rank_evidence(window: ComplexWindow, n: int) -> tuple[int, int]:
    """Dimensions of the closed and exact subspaces at degree n.  A strict
    gap is the rank evidence that some closed vector has no primitive."""
    if n > window.N - 1:
        raise ValueError("need one degree above the cocycle to count cocycles")
    closed = window.dim(n) - window.boundary(n).rank()
    exact = window.boundary(n - 1).rank() if n > 0 else 0
    return closed, exact
