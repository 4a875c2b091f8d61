"""Finite-dimensional graded Hopf data over Q and the cyclic object its
tensor powers form.

Coproduct, counit and antipode ride on a GradedAlgebra as structure
constants; every axiom is checked on the basis, never assumed.  A modular
pair is a character together with a degree-zero group-like whose twist of
the antipode squares to the identity.  Given one, level n of the cyclic
object is the n-th tensor power (level 0 the ground field): faces prepend
the unit, split a factor with the coproduct, or append the group-like;
degeneracies hit a factor with the counit; the cyclic operator multiplies
the legs of the twisted antipode of the leading factor into the remaining
factors and the group-like.  Koszul signs appear exactly where a leg slides
past later factors; the axiom checker arbitrates the convention.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .algebra import (GradedAlgebra, check_graded_algebra, exterior,
                      functions, group_algebra)
from .cyclic import CyclicObject, check_cyclic_axioms
from .linalg import SparseMatrix
from .util import ONE, Report, sign_pow, vaddto

Vec = dict[int, Fraction]


def _clean_vec(vec) -> Vec:
    return {k: Fraction(c) for k, c in vec.items() if c}


class HopfData:
    """A graded Hopf algebra presented on the basis of its underlying
    algebra.

    coproduct: index -> {(i, j): coefficient of e_i (x) e_j}
    counit:    index -> value (a linear functional)
    antipode:  index -> image vector
    """

    def __init__(self, algebra: GradedAlgebra, coproduct, counit, antipode):
        if not algebra.is_unital:
            raise ValueError(f"{algebra.name}: Hopf data needs a unit")
        self.algebra = algebra
        self.coproduct: dict[int, dict[tuple[int, int], Fraction]] = {}
        for k, legs in coproduct.items():
            clean = {ij: Fraction(c) for ij, c in legs.items() if c}
            if clean:
                self.coproduct[k] = clean
        self.counit: Vec = _clean_vec(counit)
        self.antipode: dict[int, Vec] = {
            k: _clean_vec(v) for k, v in antipode.items()}

    @property
    def name(self) -> str:
        return self.algebra.name

    @property
    def has_diff(self) -> bool:
        return bool(self.algebra.diff)

    def coproduct_of(self, vec: Vec) -> dict[tuple[int, int], Fraction]:
        out: dict[tuple[int, int], Fraction] = {}
        for k, c in vec.items():
            for ij, cc in self.coproduct.get(k, {}).items():
                s = out.get(ij, 0) + c * cc
                if s:
                    out[ij] = s
                else:
                    out.pop(ij, None)
        return out

    def counit_of(self, vec: Vec) -> Fraction:
        return sum((c * self.counit.get(k, Fraction(0))
                    for k, c in vec.items()), Fraction(0))

    def antipode_of(self, vec: Vec) -> Vec:
        out: Vec = {}
        for k, c in vec.items():
            img = self.antipode.get(k)
            if img:
                vaddto(out, c, img)
        return out

    def legs(self, vec: Vec, n: int) -> dict[tuple, Fraction]:
        """Iterated coproduct of vec into n tensor legs (leftmost splitting)."""
        if n < 1:
            raise ValueError("need at least one leg")
        out = {(k,): c for k, c in vec.items() if c}
        for _ in range(n - 1):
            nxt: dict[tuple, Fraction] = {}
            for t, c in out.items():
                for (x, y), cc in self.coproduct.get(t[0], {}).items():
                    key = (x, y) + t[1:]
                    s = nxt.get(key, 0) + c * cc
                    if s:
                        nxt[key] = s
                    else:
                        nxt.pop(key, None)
            out = nxt
        return out

    def __repr__(self):
        return f"<HopfData {self.name} dim={self.algebra.dim}>"


def _pair_show(A: GradedAlgebra, pairs: dict[tuple[int, int], Fraction]) -> str:
    if not pairs:
        return "0"
    parts = []
    for (i, j) in sorted(pairs):
        c = pairs[i, j]
        term = f"{A.labels[i]}(x){A.labels[j]}"
        parts.append(term if c == 1 else f"{c}*{term}")
    return " + ".join(parts)


def _pair_mul(A: GradedAlgebra, u: dict, v: dict) -> dict:
    """Product on the tensor square, with the sign for y sliding past x'."""
    out: dict[tuple[int, int], Fraction] = {}
    for (x, y), a in u.items():
        for (xp, yp), b in v.items():
            c = a * b
            if A.degrees[y] % 2 and A.degrees[xp] % 2:
                c = -c
            for m, cm in A.mul_basis(x, xp).items():
                for r, cr in A.mul_basis(y, yp).items():
                    s = out.get((m, r), 0) + c * cm * cr
                    if s:
                        out[m, r] = s
                    else:
                        out.pop((m, r), None)
    return out


def check_hopf(H: HopfData) -> Report:
    """Coassociativity, counit and antipode laws, algebra-map conditions,
    and compatibility of any differential with the coalgebra side."""
    A = H.algebra
    rep = Report(f"hopf axioms: {A.name}")
    base = check_graded_algebra(A)
    fails = base.failures()
    rep.record("underlying algebra", base.ok,
               fails[0][0] if fails else None)

    ok = True
    witness = None
    for k, legs in H.coproduct.items():
        for (i, j) in legs:
            if A.degrees[i] + A.degrees[j] != A.degrees[k]:
                ok = False
                witness = (f"coproduct of {A.labels[k]} has leg "
                           f"{A.labels[i]}(x){A.labels[j]}")
                break
    rep.record("coproduct preserves degree", ok, witness)

    for k in range(A.dim):
        left: dict[tuple, Fraction] = {}
        for (i, j), c in H.coproduct.get(k, {}).items():
            for (a, b), cc in H.coproduct.get(i, {}).items():
                s = left.get((a, b, j), 0) + c * cc
                if s:
                    left[a, b, j] = s
                else:
                    left.pop((a, b, j), None)
        right: dict[tuple, Fraction] = {}
        for (i, j), c in H.coproduct.get(k, {}).items():
            for (a, b), cc in H.coproduct.get(j, {}).items():
                s = right.get((i, a, b), 0) + c * cc
                if s:
                    right[i, a, b] = s
                else:
                    right.pop((i, a, b), None)
        diff = {t: c for t, c in left.items() if right.get(t) != c}
        diff.update({t: c for t, c in right.items() if left.get(t) != c})
        rep.record(f"coassociativity on {A.labels[k]}", not diff,
                   None if not diff else f"{len(diff)} mismatching triples")

    for k in range(A.dim):
        lhs: Vec = {}
        rhs: Vec = {}
        for (i, j), c in H.coproduct.get(k, {}).items():
            e = H.counit.get(i)
            if e:
                lhs[j] = lhs.get(j, 0) + c * e
            e = H.counit.get(j)
            if e:
                rhs[i] = rhs.get(i, 0) + c * e
        lhs = {i: c for i, c in lhs.items() if c}
        rhs = {i: c for i, c in rhs.items() if c}
        want = {k: ONE}
        rep.record(f"counit law on {A.labels[k]}",
                   lhs == want and rhs == want,
                   f"(eps(x)id)Delta = {A.show(lhs)}, "
                   f"(id(x)eps)Delta = {A.show(rhs)}")

    unit_pairs = {(i, j): a * b for i, a in A.unit.items()
                  for j, b in A.unit.items()}
    rep.record("coproduct of the unit",
               H.coproduct_of(A.unit) == unit_pairs,
               _pair_show(A, H.coproduct_of(A.unit)))
    rep.record("counit of the unit", H.counit_of(A.unit) == 1,
               str(H.counit_of(A.unit)))
    cop_fail = None
    eps_fail = None
    for i in range(A.dim):
        for j in range(A.dim):
            lhs2 = H.coproduct_of(A.mul_basis(i, j))
            rhs2 = _pair_mul(A, H.coproduct.get(i, {}), H.coproduct.get(j, {}))
            if cop_fail is None and lhs2 != rhs2:
                cop_fail = (f"on {A.labels[i]}*{A.labels[j]}: "
                            f"{_pair_show(A, lhs2)} vs {_pair_show(A, rhs2)}")
            ec = H.counit_of(A.mul_basis(i, j))
            ep = H.counit.get(i, Fraction(0)) * H.counit.get(j, Fraction(0))
            if eps_fail is None and ec != ep:
                eps_fail = f"on {A.labels[i]}*{A.labels[j]}: {ec} vs {ep}"
    rep.record("coproduct is an algebra map", cop_fail is None, cop_fail)
    rep.record("counit is an algebra map", eps_fail is None, eps_fail)

    for k in range(A.dim):
        conv_l: Vec = {}
        conv_r: Vec = {}
        for (i, j), c in H.coproduct.get(k, {}).items():
            vaddto(conv_l, c, A.mul(H.antipode.get(i, {}), {j: ONE}))
            vaddto(conv_r, c, A.mul({i: ONE}, H.antipode.get(j, {})))
        want = {u: H.counit.get(k, Fraction(0)) * c
                for u, c in A.unit.items()}
        want = _clean_vec(want)
        rep.record(f"antipode law on {A.labels[k]}",
                   conv_l == want and conv_r == want,
                   f"S*id = {A.show(conv_l)}, id*S = {A.show(conv_r)}, "
                   f"want {A.show(want)}")

    ok = True
    witness = None
    for k, img in H.antipode.items():
        for m in img:
            if A.degrees[m] != A.degrees[k]:
                ok = False
                witness = f"S({A.labels[k]}) meets degree {A.degrees[m]}"
                break
    rep.record("antipode preserves degree", ok, witness)

    if H.has_diff:
        for k in range(A.dim):
            lhs3 = H.coproduct_of(A.d({k: ONE}))
            rhs3: dict[tuple[int, int], Fraction] = {}
            for (i, j), c in H.coproduct.get(k, {}).items():
                for m, cm in A.diff.get(i, {}).items():
                    s = rhs3.get((m, j), 0) + c * cm
                    if s:
                        rhs3[m, j] = s
                    else:
                        rhs3.pop((m, j), None)
                sgn = sign_pow(A.degrees[i])
                for m, cm in A.diff.get(j, {}).items():
                    s = rhs3.get((i, m), 0) + sgn * c * cm
                    if s:
                        rhs3[i, m] = s
                    else:
                        rhs3.pop((i, m), None)
            rep.record(f"differential is a coderivation on {A.labels[k]}",
                       lhs3 == rhs3,
                       f"{_pair_show(A, lhs3)} vs {_pair_show(A, rhs3)}")
            sd = H.antipode_of(A.d({k: ONE}))
            ds = A.d(H.antipode.get(k, {}))
            rep.record(f"antipode commutes with d on {A.labels[k]}",
                       sd == ds, f"S(dh) = {A.show(sd)}, d(Sh) = {A.show(ds)}")
            rep.record(f"counit kills d on {A.labels[k]}",
                       H.counit_of(A.d({k: ONE})) == 0, None)
    return rep


def twisted_antipode(H: HopfData, delta: Vec) -> dict[int, Vec]:
    """Antipode twisted by a character: h -> sum S(h_(0)) delta(h_(1))."""
    A = H.algebra
    out: dict[int, Vec] = {}
    for k in range(A.dim):
        img: Vec = {}
        for (i, j), c in H.coproduct.get(k, {}).items():
            dv = delta.get(j)
            if dv:
                vaddto(img, c * dv, H.antipode.get(i, {}))
        img = {m: c for m, c in img.items() if c}
        if img:
            out[k] = img
    return out


def _character_value(delta: Vec, vec: Vec) -> Fraction:
    return sum((c * delta.get(k, Fraction(0)) for k, c in vec.items()),
               Fraction(0))


def _invert(A: GradedAlgebra, vec: Vec) -> Vec | None:
    """Two-sided inverse of an algebra element, or None."""
    m = SparseMatrix(A.dim, A.dim)
    for j in range(A.dim):
        for r, c in A.mul(vec, {j: ONE}).items():
            m[r, j] = c
    sol = m.solve(dict(A.unit))
    if sol is None:
        return None
    if A.mul(sol, vec) != _clean_vec(A.unit):
        return None
    return sol


def check_modular_pair(H: HopfData, delta: Vec, sigma: Vec) -> Report:
    """A character and a degree-zero group-like whose twisted antipode,
    corrected by the group-like, is an involution."""
    A = H.algebra
    rep = Report(f"modular pair on {A.name}")

    ok = True
    witness = None
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = _character_value(delta, A.mul_basis(i, j))
            rhs = delta.get(i, Fraction(0)) * delta.get(j, Fraction(0))
            if lhs != rhs:
                ok = False
                witness = f"on {A.labels[i]}*{A.labels[j]}: {lhs} vs {rhs}"
                break
        if not ok:
            break
    rep.record("character is multiplicative", ok, witness)
    rep.record("character is unital", _character_value(delta, A.unit) == 1,
               str(_character_value(delta, A.unit)))

    degs = {A.degrees[k] for k in sigma if sigma[k]}
    rep.record("group-like has degree 0", degs <= {0}, f"degrees {degs}")
    outer = {(i, j): a * b for i, a in sigma.items()
             for j, b in sigma.items() if a * b}
    cop = H.coproduct_of(sigma)
    rep.record("group-like splits as sigma(x)sigma", cop == outer,
               f"coproduct is {_pair_show(A, cop)}")
    rep.record("counit of the group-like is 1", H.counit_of(sigma) == 1,
               str(H.counit_of(sigma)))

    inv = _invert(A, sigma)
    rep.record("group-like is invertible", inv is not None, None)
    if inv is None:
        return rep

    twisted = twisted_antipode(H, delta)
    tmat = SparseMatrix(A.dim, A.dim)
    for k in range(A.dim):
        for r, c in A.mul(inv, twisted.get(k, {})).items():
            tmat[r, k] = c
    sq = tmat @ tmat
    w = (sq - SparseMatrix.identity(A.dim)).nonzero_witness()
    rep.record("corrected twisted antipode squares to the identity",
               w is None,
               None if w is None else
               f"entry {w[1]} at ({A.labels[w[0][0]]} <- {A.labels[w[0][1]]})")
    return rep


def tensor_diff(H: HopfData, tens: dict[tuple, Fraction]) -> dict[tuple, Fraction]:
    """Leibniz differential on a tensor: factor i picks up the parity of
    the factors before it."""
    A = H.algebra
    out: dict[tuple, Fraction] = {}
    for t, c in tens.items():
        pre = 0
        for slot, k in enumerate(t):
            img = A.diff.get(k)
            if img:
                s = c * sign_pow(pre)
                for m, cm in img.items():
                    key = t[:slot] + (m,) + t[slot + 1:]
                    acc = out.get(key, 0) + s * cm
                    if acc:
                        out[key] = acc
                    else:
                        out.pop(key, None)
            pre += A.degrees[k]
    return out


class HopfTensors(CyclicObject):
    """Cyclic object with level n the n-th tensor power of a Hopf algebra.

    Flat indices read the factor tuple most significant first; level 0 is
    the ground field with the empty tuple.  Weight is total degree, so the
    window places a level-n tensor of weight w in total degree n + w + 2q.
    """

    def __init__(self, H: HopfData, delta: Vec, sigma: Vec):
        super().__init__()
        self.H = H
        self.delta = _clean_vec(delta)
        self.sigma = _clean_vec(sigma)
        self.twisted = twisted_antipode(H, delta)
        self.name = f"tensors({H.name})"
        self.has_diff = H.has_diff
        self.needs_weight_cap = False

    def dim(self, n: int) -> int:
        return self.H.algebra.dim ** n

    def decode(self, n: int, idx: int) -> tuple:
        out = []
        for _ in range(n):
            out.append(idx % self.H.algebra.dim)
            idx //= self.H.algebra.dim
        return tuple(reversed(out))

    def encode(self, t: tuple) -> int:
        idx = 0
        for x in t:
            idx = idx * self.H.algebra.dim + x
        return idx

    def label(self, n: int, i: int) -> str:
        t = self.decode(n, i)
        return "[" + ",".join(self.H.algebra.labels[x] for x in t) + "]"

    def weight(self, n: int, i: int) -> int:
        degrees = self.H.algebra.degrees
        return sum(degrees[x] for x in self.decode(n, i))

    def _acc(self, out: dict, t: tuple, c: Fraction) -> None:
        idx = self.encode(t)
        s = out.get(idx, 0) + c
        if s:
            out[idx] = s
        else:
            out.pop(idx, None)

    def apply_face(self, n: int, i: int, vec: dict) -> dict:
        H = self.H
        out: dict = {}
        for idx, c in vec.items():
            t = self.decode(n, idx)
            if i == 0:
                for u, cu in H.algebra.unit.items():
                    self._acc(out, (u,) + t, c * cu)
            elif i <= n:
                for (x, y), cc in H.coproduct.get(t[i - 1], {}).items():
                    self._acc(out, t[:i - 1] + (x, y) + t[i:], c * cc)
            else:
                for s, cs in self.sigma.items():
                    self._acc(out, t + (s,), c * cs)
        return out

    def apply_degen(self, n: int, i: int, vec: dict) -> dict:
        H = self.H
        out: dict = {}
        for idx, c in vec.items():
            t = self.decode(n, idx)
            e = H.counit.get(t[i])
            if e:
                self._acc(out, t[:i] + t[i + 1:], c * e)
        return out

    def apply_tau(self, n: int, vec: dict) -> dict:
        if n == 0:
            return dict(vec)
        H = self.H
        A = H.algebra
        out: dict = {}
        for idx, c in vec.items():
            t = self.decode(n, idx)
            prefix = [0] * n
            for i in range(1, n):
                prefix[i] = prefix[i - 1] + A.degrees[t[i]]
            u = self.twisted.get(t[0], {})
            for lt, cl in H.legs(u, n).items():
                sgn = 1
                for i in range(1, n):
                    if A.degrees[lt[i]] % 2 and prefix[i] % 2:
                        sgn = -sgn
                factors = [A.mul_basis(lt[i], t[i + 1]) for i in range(n - 1)]
                factors.append(A.mul({lt[n - 1]: ONE}, self.sigma))
                if not all(factors):
                    continue
                for combo in product(*(f.items() for f in factors)):
                    coeff = c * cl * sgn
                    for _, cf in combo:
                        coeff *= cf
                    self._acc(out, tuple(k for k, _ in combo), coeff)
        return out

    def apply_diff(self, n: int, vec: dict) -> dict:
        if not self.has_diff:
            return {}
        tens = {self.decode(n, idx): c for idx, c in vec.items()}
        return {self.encode(t): c
                for t, c in tensor_diff(self.H, tens).items()}


def hopf_cyclic_object(H: HopfData, delta: Vec, sigma: Vec,
                       check_levels: int = 2) -> HopfTensors:
    """Cyclic object of tensor powers; refuses anything that is not a
    modular pair and verifies the cyclic axioms up to check_levels."""
    rep = check_modular_pair(H, delta, sigma)
    if not rep.ok:
        raise ValueError(rep.summary())
    X = HopfTensors(H, delta, sigma)
    if check_levels > 0:
        axioms = check_cyclic_axioms(X, check_levels)
        if not axioms.ok:
            raise ValueError(axioms.summary())
    return X


def group_hopf(n: int) -> HopfData:
    """Group algebra of Z/n: group-like basis, antipode inverts."""
    A = group_algebra(n)
    return HopfData(
        A,
        {k: {(k, k): ONE} for k in range(n)},
        {k: ONE for k in range(n)},
        {k: {(-k) % n: ONE} for k in range(n)})


def fun_hopf(n: int) -> HopfData:
    """Functions on Z/n: coproduct dual to addition, counit evaluates at 0."""
    A = functions(range(n))
    return HopfData(
        A,
        {s: {(a, (s - a) % n): ONE for a in range(n)} for s in range(n)},
        {0: ONE},
        {s: {(-s) % n: ONE} for s in range(n)})


def primitive_hopf() -> HopfData:
    """Exterior algebra on one primitive degree-1 generator."""
    A = exterior(["psi"])
    return HopfData(
        A,
        {0: {(0, 0): ONE}, 1: {(1, 0): ONE, (0, 1): ONE}},
        {0: ONE},
        {0: {0: ONE}, 1: {1: -ONE}})


BUILTIN_HOPF = {
    "group-algebra:Z2": lambda: group_hopf(2),
    "group-algebra:Z3": lambda: group_hopf(3),
    "group-algebra:Z4": lambda: group_hopf(4),
    "fun:Z2": lambda: fun_hopf(2),
    "fun:Z3": lambda: fun_hopf(3),
    "fun:Z4": lambda: fun_hopf(4),
    "exterior-primitive:1": primitive_hopf,
}
