"""Finite-dimensional graded algebras over Q, with optional differential.

One description format feeds everything downstream: a basis with integer
degrees, structure constants, an optional unit vector, an optional degree +1
differential.  Elements are sparse dicts index -> Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .util import ONE, Report, format_rational, koszul, sign_pow, vaddto

Vec = dict[int, Fraction]


class GradedAlgebra:
    def __init__(self, name, labels, degrees, products, unit=None, diff=None):
        self.name = name
        self.labels = [str(s) for s in labels]
        self.degrees = [int(d) for d in degrees]
        if len(self.degrees) != len(self.labels):
            raise ValueError("labels and degrees differ in length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate basis labels")
        self.products: dict[tuple[int, int], Vec] = {}
        for (i, j), vec in products.items():
            clean = {k: Fraction(c) for k, c in vec.items() if c}
            if clean:
                self.products[i, j] = clean
        self.unit: Vec | None = None
        if unit is not None:
            self.unit = {k: Fraction(c) for k, c in unit.items() if c}
        self.diff: dict[int, Vec] = {}
        if diff:
            for i, vec in diff.items():
                clean = {k: Fraction(c) for k, c in vec.items() if c}
                if clean:
                    self.diff[i] = clean
        self._unsplit: dict[int, list[tuple[int, int, Fraction]]] | None = None

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def is_unital(self) -> bool:
        return self.unit is not None

    def basis_vec(self, i: int) -> Vec:
        return {i: ONE}

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"{self.name}: no basis vector {label!r}") from None

    def mul_basis(self, i: int, j: int) -> Vec:
        return self.products.get((i, j), {})

    def mul(self, u: Vec, v: Vec) -> Vec:
        out: Vec = {}
        for i, a in u.items():
            for j, b in v.items():
                c = a * b
                if c:
                    vaddto(out, c, self.mul_basis(i, j))
        return out

    def d(self, v: Vec) -> Vec:
        out: Vec = {}
        for i, a in v.items():
            img = self.diff.get(i)
            if img:
                vaddto(out, a, img)
        return out

    def degree_of(self, v: Vec):
        """Degree of a homogeneous element; None for zero; raises if mixed."""
        degs = {self.degrees[i] for i in v}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"{self.name}: element {self.show(v)} is not homogeneous")
        return degs.pop()

    def unsplit(self, k: int) -> list[tuple[int, int, Fraction]]:
        """All (i, j, c) with e_i e_j containing c * e_k, c nonzero."""
        if self._unsplit is None:
            table: dict[int, list[tuple[int, int, Fraction]]] = {m: [] for m in range(self.dim)}
            for (i, j), vec in self.products.items():
                for m, c in vec.items():
                    table[m].append((i, j, c))
            self._unsplit = table
        return self._unsplit[k]

    def show(self, v: Vec) -> str:
        if not v:
            return "0"
        parts = []
        for i in sorted(v):
            c = v[i]
            parts.append(self.labels[i] if c == 1 else f"{format_rational(c)}*{self.labels[i]}")
        return " + ".join(parts)

    def __repr__(self):
        return f"<GradedAlgebra {self.name} dim={self.dim}>"


def check_graded_algebra(algebra: GradedAlgebra) -> Report:
    """Degree additivity, associativity, unit laws, and (if a differential is
    present) degree +1, square zero, graded Leibniz."""
    A = algebra
    rep = Report(f"algebra axioms: {A.name}")
    graded_ok = True
    for (i, j), vec in A.products.items():
        for k in vec:
            if A.degrees[k] != A.degrees[i] + A.degrees[j]:
                graded_ok = rep.record(
                    "product respects degree", False,
                    f"{A.labels[i]}*{A.labels[j]} hits {A.labels[k]} "
                    f"({A.degrees[i]}+{A.degrees[j]} != {A.degrees[k]})")
                break
        if not graded_ok:
            break
    if graded_ok:
        rep.record("product respects degree", True)

    assoc_ok = True
    for i in range(A.dim):
        for j in range(A.dim):
            ij = A.mul_basis(i, j)
            for k in range(A.dim):
                left = A.mul(ij, A.basis_vec(k))
                right = A.mul(A.basis_vec(i), A.mul_basis(j, k))
                if left != right:
                    assoc_ok = rep.record(
                        "associativity", False,
                        f"({A.labels[i]}*{A.labels[j]})*{A.labels[k]} = {A.show(left)} "
                        f"but {A.labels[i]}*({A.labels[j]}*{A.labels[k]}) = {A.show(right)}")
                    break
            if not assoc_ok:
                break
        if not assoc_ok:
            break
    if assoc_ok:
        rep.record("associativity", True)

    if A.is_unital:
        unit_ok = True
        try:
            if A.degree_of(A.unit) != 0:
                unit_ok = rep.record("unit has degree 0", False, A.show(A.unit))
        except ValueError:
            unit_ok = rep.record("unit has degree 0", False, "unit not homogeneous")
        for i in range(A.dim):
            e = A.basis_vec(i)
            if A.mul(A.unit, e) != e or A.mul(e, A.unit) != e:
                unit_ok = rep.record("unit law", False,
                                     f"1*{A.labels[i]} = {A.show(A.mul(A.unit, e))}, "
                                     f"{A.labels[i]}*1 = {A.show(A.mul(e, A.unit))}")
                break
        if unit_ok:
            rep.record("unit laws", True)

    if A.diff:
        deg_ok = True
        for i, img in A.diff.items():
            for k in img:
                if A.degrees[k] != A.degrees[i] + 1:
                    deg_ok = rep.record("differential has degree +1", False,
                                        f"d({A.labels[i]}) hits {A.labels[k]}")
                    break
            if not deg_ok:
                break
        if deg_ok:
            rep.record("differential has degree +1", True)

        sq_ok = True
        for i in range(A.dim):
            dd = A.d(A.d(A.basis_vec(i)))
            if dd:
                sq_ok = rep.record("d squared is zero", False,
                                   f"d(d({A.labels[i]})) = {A.show(dd)}")
                break
        if sq_ok:
            rep.record("d squared is zero", True)

        leib_ok = True
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = A.d(A.mul_basis(i, j))
                rhs: Vec = {}
                vaddto(rhs, ONE, A.mul(A.d(A.basis_vec(i)), A.basis_vec(j)))
                vaddto(rhs, Fraction(sign_pow(A.degrees[i])),
                       A.mul(A.basis_vec(i), A.d(A.basis_vec(j))))
                if lhs != rhs:
                    leib_ok = rep.record(
                        "graded Leibniz", False,
                        f"d({A.labels[i]}*{A.labels[j]}) = {A.show(lhs)} "
                        f"but Leibniz gives {A.show(rhs)}")
                    break
            if not leib_ok:
                break
        if leib_ok:
            rep.record("graded Leibniz", True)

        if A.is_unital:
            rep.record("d kills the unit", not A.d(A.unit), A.show(A.d(A.unit)))
    return rep


# -- traces ------------------------------------------------------------------

@dataclass
class Trace:
    """Linear functional supported in one internal degree (its weight)."""
    weight: int
    values: Vec

    def pair(self, v: Vec) -> Fraction:
        total = Fraction(0)
        for i, c in v.items():
            w = self.values.get(i)
            if w:
                total += w * c
        return total


def check_trace(algebra: GradedAlgebra, trace: Trace) -> Report:
    """Support in the stated weight, closedness, graded cyclic symmetry."""
    A = algebra
    rep = Report(f"trace on {A.name}")
    bad = [i for i in trace.values if A.degrees[i] != trace.weight]
    rep.record("supported in its weight", not bad,
               f"nonzero on {A.labels[bad[0]]}" if bad else None)
    if A.diff:
        bad_d = [i for i in range(A.dim) if trace.pair(A.d(A.basis_vec(i)))]
        rep.record("closed (vanishes on exact elements)", not bad_d,
                   f"pairs with d({A.labels[bad_d[0]]})" if bad_d else None)
    sym_ok = True
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = trace.pair(A.mul_basis(i, j))
            rhs = koszul(A.degrees[i], A.degrees[j]) * trace.pair(A.mul_basis(j, i))
            if lhs != rhs:
                sym_ok = rep.record(
                    "graded cyclic symmetry", False,
                    f"tr({A.labels[i]}*{A.labels[j]}) = {format_rational(lhs)} "
                    f"!= {format_rational(rhs)}")
                break
        if not sym_ok:
            break
    if sym_ok:
        rep.record("graded cyclic symmetry", True)
    return rep


# -- derivations -------------------------------------------------------------

@dataclass
class Derivation:
    algebra: GradedAlgebra
    degree: int
    images: dict[int, Vec]

    def apply(self, v: Vec) -> Vec:
        out: Vec = {}
        for i, c in v.items():
            img = self.images.get(i)
            if img:
                vaddto(out, c, img)
        return out


def check_derivation(D: Derivation) -> Report:
    A = D.algebra
    rep = Report(f"derivation of degree {D.degree} on {A.name}")
    deg_ok = True
    for i, img in D.images.items():
        for k in img:
            if A.degrees[k] != A.degrees[i] + D.degree:
                deg_ok = rep.record("shifts degree by its own degree", False,
                                    f"D({A.labels[i]}) hits {A.labels[k]}")
                break
        if not deg_ok:
            break
    if deg_ok:
        rep.record("shifts degree by its own degree", True)

    leib_ok = True
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = D.apply(A.mul_basis(i, j))
            rhs: Vec = {}
            vaddto(rhs, ONE, A.mul(D.apply(A.basis_vec(i)), A.basis_vec(j)))
            vaddto(rhs, Fraction(sign_pow(D.degree * A.degrees[i])),
                   A.mul(A.basis_vec(i), D.apply(A.basis_vec(j))))
            if lhs != rhs:
                leib_ok = rep.record(
                    "graded Leibniz", False,
                    f"D({A.labels[i]}*{A.labels[j]}) = {A.show(lhs)} "
                    f"but Leibniz gives {A.show(rhs)}")
                break
        if not leib_ok:
            break
    if leib_ok:
        rep.record("graded Leibniz", True)
    return rep


def grading_derivation(algebra: GradedAlgebra) -> Derivation:
    """D(a) = (degree of a) * a."""
    images = {i: {i: Fraction(d)} for i, d in enumerate(algebra.degrees) if d}
    return Derivation(algebra, 0, images)


def inner_derivation(algebra: GradedAlgebra, g: Vec) -> Derivation:
    """Graded commutator with a homogeneous element g."""
    t = algebra.degree_of(g)
    if t is None:
        t = 0
    images: dict[int, Vec] = {}
    for i in range(algebra.dim):
        e = algebra.basis_vec(i)
        out: Vec = {}
        vaddto(out, ONE, algebra.mul(g, e))
        vaddto(out, Fraction(-sign_pow(t * algebra.degrees[i])), algebra.mul(e, g))
        if out:
            images[i] = out
    return Derivation(algebra, t, images)


def differential_derivation(algebra: GradedAlgebra) -> Derivation:
    return Derivation(algebra, 1, {i: dict(v) for i, v in algebra.diff.items()})


# -- multipliers -------------------------------------------------------------

@dataclass
class MultiplierPair:
    """Left/right multiplication operators for an element that need not lie
    in the algebra itself."""
    algebra: GradedAlgebra
    degree: int
    left: dict[int, Vec]
    right: dict[int, Vec]

    def apply_left(self, v: Vec) -> Vec:
        out: Vec = {}
        for i, c in v.items():
            img = self.left.get(i)
            if img:
                vaddto(out, c, img)
        return out

    def apply_right(self, v: Vec) -> Vec:
        out: Vec = {}
        for i, c in v.items():
            img = self.right.get(i)
            if img:
                vaddto(out, c, img)
        return out


def multiplier_from_element(algebra: GradedAlgebra, m: Vec) -> MultiplierPair:
    t = algebra.degree_of(m) or 0
    left = {}
    right = {}
    for i in range(algebra.dim):
        e = algebra.basis_vec(i)
        lm = algebra.mul(m, e)
        rm = algebra.mul(e, m)
        if lm:
            left[i] = lm
        if rm:
            right[i] = rm
    return MultiplierPair(algebra, t, left, right)


def check_multiplier(pair: MultiplierPair) -> Report:
    A = pair.algebra
    rep = Report(f"multiplier pair on {A.name}")
    ok_l = ok_r = ok_c = True
    for i in range(A.dim):
        for j in range(A.dim):
            prod = A.mul_basis(i, j)
            ei, ej = A.basis_vec(i), A.basis_vec(j)
            if pair.apply_left(prod) != A.mul(pair.apply_left(ei), ej):
                ok_l = rep.record("left action is a left module map", False,
                                  f"at {A.labels[i]},{A.labels[j]}")
                break
            if pair.apply_right(prod) != A.mul(ei, pair.apply_right(ej)):
                ok_r = rep.record("right action is a right module map", False,
                                  f"at {A.labels[i]},{A.labels[j]}")
                break
            if A.mul(pair.apply_right(ei), ej) != A.mul(ei, pair.apply_left(ej)):
                ok_c = rep.record("left and right actions are compatible", False,
                                  f"at {A.labels[i]},{A.labels[j]}")
                break
        if not (ok_l and ok_r and ok_c):
            break
    if ok_l and ok_r and ok_c:
        rep.record("bimodule conditions", True)
    return rep


def check_multiplier_trace(trace: Trace, pair: MultiplierPair) -> Report:
    """Graded trace property extended to the multiplier:
    tr(m a) = (-1)^{|m||a|} tr(a m)."""
    A = pair.algebra
    rep = Report(f"trace vs multiplier on {A.name}")
    ok = True
    for i in range(A.dim):
        e = A.basis_vec(i)
        lhs = trace.pair(pair.apply_left(e))
        rhs = koszul(pair.degree, A.degrees[i]) * trace.pair(pair.apply_right(e))
        if lhs != rhs:
            ok = rep.record("graded trace property", False,
                            f"tr(m*{A.labels[i]}) = {format_rational(lhs)}, "
                            f"signed tr({A.labels[i]}*m) = {format_rational(rhs)}")
            break
    if ok:
        rep.record("graded trace property", True)
    return rep


# -- builders ----------------------------------------------------------------

def rationals() -> GradedAlgebra:
    """The ground field as an algebra."""
    return GradedAlgebra("Q", ["1"], [0], {(0, 0): {0: ONE}}, unit={0: ONE})


def functions(points) -> GradedAlgebra:
    """Functions on a finite set: orthogonal idempotents e_p, unit their sum."""
    points = [str(p) for p in points]
    n = len(points)
    products = {(i, i): {i: ONE} for i in range(n)}
    return GradedAlgebra(f"Fun({{{','.join(points)}}})",
                         [f"e_{p}" for p in points], [0] * n, products,
                         unit={i: ONE for i in range(n)})


def _subset_mul_sign(s: tuple, t: tuple):
    """Merge two disjoint sorted generator tuples; None if they overlap."""
    if set(s) & set(t):
        return None, None
    merged = tuple(sorted(s + t))
    inversions = sum(1 for a in s for b in t if a > b)
    return merged, sign_pow(inversions)


def exterior(names, degrees=None) -> GradedAlgebra:
    """Exterior algebra on odd-degree generators (default degree 1)."""
    names = [str(n) for n in names]
    k = len(names)
    if degrees is None:
        degrees = [1] * k
    if any(d % 2 == 0 for d in degrees):
        raise ValueError("exterior generators must have odd degree")
    subsets = []
    for size in range(k + 1):
        subsets.extend(combinations(range(k), size))
    subsets.sort(key=lambda s: (len(s), s))
    idx = {s: i for i, s in enumerate(subsets)}
    labels = ["1" if not s else "".join(names[i] for i in s) for s in subsets]
    degs = [sum(degrees[i] for i in s) for s in subsets]
    products = {}
    for s in subsets:
        for t in subsets:
            merged, sign = _subset_mul_sign(s, t)
            if merged is not None:
                products[idx[s], idx[t]] = {idx[merged]: Fraction(sign)}
    return GradedAlgebra(f"Ext[{','.join(names)}]", labels, degs, products,
                         unit={0: ONE})


def exterior_with_curvature(gen="t", curv="c") -> GradedAlgebra:
    """Odd generator t (degree 1), even c (degree 2) with c*c = 0 and dt = c.

    The smallest model whose differential and grading are both nontrivial.
    """
    labels = ["1", gen, curv, gen + curv]
    degrees = [0, 1, 2, 3]
    # t*t = 0 (odd), c*c = 0 (truncation), everything else from unit and t*c = tc
    products = {
        (0, 0): {0: ONE}, (0, 1): {1: ONE}, (0, 2): {2: ONE}, (0, 3): {3: ONE},
        (1, 0): {1: ONE}, (2, 0): {2: ONE}, (3, 0): {3: ONE},
        (1, 2): {3: ONE}, (2, 1): {3: ONE},
    }
    diff = {1: {2: ONE}}
    return GradedAlgebra(f"Ext[{gen};d{gen}={curv}]", labels, degrees, products,
                         unit={0: ONE}, diff=diff)


def group_algebra(n: int) -> GradedAlgebra:
    """Group algebra of Z/n, basis u^0..u^{n-1} in degree 0."""
    labels = [f"u{k}" for k in range(n)]
    products = {(i, j): {(i + j) % n: ONE} for i in range(n) for j in range(n)}
    return GradedAlgebra(f"Q[Z/{n}]", labels, [0] * n, products, unit={0: ONE})


def tensor(a: GradedAlgebra, b: GradedAlgebra, name=None) -> GradedAlgebra:
    """Graded tensor product with the sign (x|y)(x'|y') = (-1)^{|y||x'|} xx'|yy'."""
    labels = [f"{la}|{lb}" for la in a.labels for lb in b.labels]
    degrees = [da + db for da in a.degrees for db in b.degrees]

    def at(ia, ib):
        return ia * b.dim + ib

    products: dict[tuple[int, int], Vec] = {}
    for (ia, ja), va in a.products.items():
        for (ib, jb), vb in b.products.items():
            sign = koszul(b.degrees[ib], a.degrees[ja])
            out: Vec = {}
            for ka, ca in va.items():
                for kb, cb in vb.items():
                    c = sign * ca * cb
                    if c:
                        out[at(ka, kb)] = out.get(at(ka, kb), Fraction(0)) + c
            out = {k: v for k, v in out.items() if v}
            if out:
                products[at(ia, ib), at(ja, jb)] = out
    unit = None
    if a.is_unital and b.is_unital:
        unit = {}
        for ia, ca in a.unit.items():
            for ib, cb in b.unit.items():
                unit[at(ia, ib)] = ca * cb
    diff: dict[int, Vec] = {}
    for ia in range(a.dim):
        for ib in range(b.dim):
            out = {}
            for ka, c in a.diff.get(ia, {}).items():
                out[at(ka, ib)] = c
            for kb, c in b.diff.get(ib, {}).items():
                key = at(ia, kb)
                out[key] = out.get(key, Fraction(0)) + sign_pow(a.degrees[ia]) * c
            out = {k: v for k, v in out.items() if v}
            if out:
                diff[at(ia, ib)] = out
    return GradedAlgebra(name or f"{a.name}(x){b.name}", labels, degrees,
                         products, unit=unit, diff=diff)


def matrix2(a: GradedAlgebra) -> GradedAlgebra:
    """2x2 matrices over a, basis E_{rs} x basis of a (matrix units even)."""
    labels = []
    degrees = []
    for r in range(2):
        for s in range(2):
            for la, da in zip(a.labels, a.degrees):
                labels.append(f"E{r + 1}{s + 1}.{la}")
                degrees.append(da)

    def at(r, s, i):
        return (r * 2 + s) * a.dim + i

    products: dict[tuple[int, int], Vec] = {}
    for r in range(2):
        for s in range(2):
            for t in range(2):
                for (i, j), v in a.products.items():
                    products[at(r, s, i), at(s, t, j)] = {at(r, t, k): c for k, c in v.items()}
    unit = None
    if a.is_unital:
        unit = {}
        for r in range(2):
            for i, c in a.unit.items():
                unit[at(r, r, i)] = c
    diff: dict[int, Vec] = {}
    for r in range(2):
        for s in range(2):
            for i, v in a.diff.items():
                diff[at(r, s, i)] = {at(r, s, k): c for k, c in v.items()}
    return GradedAlgebra(f"M2({a.name})", labels, degrees, products,
                         unit=unit, diff=diff)


def matrix2_trace(a: GradedAlgebra, trace: Trace) -> Trace:
    """Compose a trace on a with the 2x2 matrix trace."""
    values: Vec = {}
    for r in range(2):
        for i, c in trace.values.items():
            values[(r * 2 + r) * a.dim + i] = c
    return Trace(trace.weight, values)


def adjoin_unit(a: GradedAlgebra) -> GradedAlgebra:
    """Free unitization: new degree-0 unit adjoined in front of the basis."""
    labels = ["1+"] + list(a.labels)
    degrees = [0] + list(a.degrees)
    products: dict[tuple[int, int], Vec] = {(0, 0): {0: ONE}}
    for i in range(a.dim):
        products[0, i + 1] = {i + 1: ONE}
        products[i + 1, 0] = {i + 1: ONE}
    for (i, j), v in a.products.items():
        products[i + 1, j + 1] = {k + 1: c for k, c in v.items()}
    diff = {i + 1: {k + 1: c for k, c in v.items()} for i, v in a.diff.items()}
    return GradedAlgebra(f"{a.name}+", labels, degrees, products,
                         unit={0: ONE}, diff=diff)
