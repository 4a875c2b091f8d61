"""Finite models of partial-bijection actions and their convolution algebras.

A groupoid model is a finite point set with a set of partial bijections
closed under identity, inverse, and composition, carrying two cocycles: a
group-valued one (values in Z/m, checked functorial) and an additive
rational one (checked additive on every composable pair).  The cross
product turns the model and a coefficient algebra of functions times
exterior generators into a convolution DG algebra; pullback along the
group-valued cocycle gives a Hopf action of functions on Z/m, and the
functional that reads coefficients off the partial-identity arrows gives a
closed invariant trace.  The additive cocycle feeds the one-primitive
Hopf algebra acting by exterior multiplication, the discrete stand-in for
a logarithmic derivative.  For models whose arrows are everywhere defined
the module also builds the bicomplex of antisymmetric invariant
current-valued functions on tuples of group elements and its map into
cochains on the cross product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from .algebra import GradedAlgebra, Trace, _subset_mul_sign
from .charmap import HopfAction, chi
from .cochains import (AlgebraCochains, Cochain, DegreeZeroInclusion,
                       PlacedCochain, placed_R, placed_window_vectors)
from .cyclic import assemble_window
from .hopf import HopfData, fun_hopf, primitive_hopf
from .linalg import SparseMatrix
from .util import ONE, ZERO, Report, sign_pow, vaddto

Vec = dict[int, Fraction]


# -- arrows ------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Arrow:
    """Partial bijection of {0..n-1}, identified by its graph."""
    graph: tuple[tuple[int, int], ...]

    @property
    def dom(self) -> tuple[int, ...]:
        return tuple(x for x, _ in self.graph)

    @property
    def ran(self) -> tuple[int, ...]:
        return tuple(sorted(y for _, y in self.graph))

    def apply(self, x: int):
        for a, b in self.graph:
            if a == x:
                return b
        return None

    @property
    def is_partial_identity(self) -> bool:
        return all(x == y for x, y in self.graph)

    def inverse(self) -> "Arrow":
        return Arrow(tuple(sorted((y, x) for x, y in self.graph)))

    def then(self, other: "Arrow"):
        """Composite doing self first, or None when the domains miss."""
        pairs = []
        for x, y in self.graph:
            z = other.apply(y)
            if z is not None:
                pairs.append((x, z))
        if not pairs:
            return None
        return Arrow(tuple(sorted(pairs)))


def arrow(pairs, n_points: int) -> Arrow:
    """Validated arrow from an iterable of (source, target) index pairs."""
    pairs = tuple(sorted((int(x), int(y)) for x, y in pairs))
    if not pairs:
        raise ValueError("empty arrows are not allowed")
    xs = [x for x, _ in pairs]
    ys = [y for _, y in pairs]
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
        raise ValueError(f"graph {pairs} is not a partial bijection")
    for v in xs + ys:
        if not 0 <= v < n_points:
            raise ValueError(f"graph {pairs} leaves the point set")
    return Arrow(pairs)


def identity_arrow(n_points: int) -> Arrow:
    return Arrow(tuple((x, x) for x in range(n_points)))


def arrow_closure(n_points: int, generators) -> list[Arrow]:
    """Smallest arrow set containing the generators and the full identity,
    closed under inverse and nonempty composition."""
    seen = {identity_arrow(n_points)}
    queue = []
    for g in generators:
        a = g if isinstance(g, Arrow) else arrow(g, n_points)
        if a not in seen:
            seen.add(a)
            queue.append(a)
    queue.append(identity_arrow(n_points))
    while queue:
        a = queue.pop()
        new = [a.inverse()]
        for b in list(seen):
            c = a.then(b)
            if c is not None:
                new.append(c)
            c = b.then(a)
            if c is not None:
                new.append(c)
        for c in new:
            if c not in seen:
                seen.add(c)
                queue.append(c)
    return sorted(seen)


def _describe(a: Arrow, labels) -> str:
    if a.is_partial_identity:
        pts = ",".join(labels[x] for x, _ in a.graph)
        return f"id[{pts}]" if len(a.graph) < len(labels) else "id"
    return "(" + ",".join(f"{labels[x]}>{labels[y]}" for x, y in a.graph) + ")"


# -- groupoid models ---------------------------------------------------------

@dataclass
class GroupoidModel:
    name: str
    labels: list[str]
    arrows: list[Arrow]
    h_modulus: int
    h: dict[Arrow, int]
    ell: dict[Arrow, Fraction]
    compose_table: dict[tuple[int, int], int] = field(default_factory=dict)
    inverse_idx: list[int] = field(default_factory=list)
    unit_idx: int = 0

    @property
    def n_points(self) -> int:
        return len(self.labels)

    @property
    def germ_count(self) -> int:
        """Morphism count of the model: one germ per point of each domain."""
        return sum(len(a.graph) for a in self.arrows)

    @property
    def is_group(self) -> bool:
        return all(len(a.graph) == self.n_points for a in self.arrows)

    def arrow_name(self, i: int) -> str:
        return _describe(self.arrows[i], self.labels)

    def h_of(self, i: int) -> int:
        return self.h.get(self.arrows[i], 0) % self.h_modulus

    def ell_of(self, i: int) -> Fraction:
        return self.ell.get(self.arrows[i], ZERO)

    def index(self, a: Arrow) -> int:
        return self.arrows.index(a)


def check_groupoid_data(labels, arrows, h, ell, h_modulus) -> Report:
    """Closure under identity, inverse, and nonempty composition; the two
    cocycle laws on every composable pair."""
    rep = Report("groupoid model")
    n = len(labels)
    labels = [str(p) for p in labels]
    if h_modulus < 1:
        rep.record("cocycle modulus is positive", False, f"modulus {h_modulus}")
        return rep

    ok = len(set(arrows)) == len(arrows)
    rep.record("arrows are pairwise distinct", ok,
               None if ok else "a graph appears twice")
    have = set(arrows)

    ok = identity_arrow(n) in have
    rep.record("identity of the whole point set present", ok,
               None if ok else "no arrow fixing every point")

    witness = None
    for a in arrows:
        if a.inverse() not in have:
            witness = f"{_describe(a, labels)} has no inverse arrow"
            break
    rep.record("closed under inverse", witness is None, witness)

    witness = None
    for a in arrows:
        for b in arrows:
            c = a.then(b)
            if c is not None and c not in have:
                witness = (f"{_describe(a, labels)} then {_describe(b, labels)}"
                           f" = {_describe(c, labels)} missing")
                break
        if witness:
            break
    rep.record("closed under composition", witness is None, witness)
    if not rep.ok:
        return rep

    witness = None
    for a in arrows:
        for b in arrows:
            c = a.then(b)
            if c is None:
                continue
            lhs = (h.get(a, 0) + h.get(b, 0)) % h_modulus
            if h.get(c, 0) % h_modulus != lhs:
                witness = (f"h({_describe(a, labels)} then {_describe(b, labels)})"
                           f" = {h.get(c, 0) % h_modulus}, parts add to {lhs}")
                break
        if witness:
            break
    rep.record(f"group cocycle is functorial mod {h_modulus}",
               witness is None, witness)

    witness = None
    for a in arrows:
        for b in arrows:
            c = a.then(b)
            if c is None:
                continue
            lhs = ell.get(a, ZERO) + ell.get(b, ZERO)
            if ell.get(c, ZERO) != lhs:
                witness = (f"weight({_describe(a, labels)} then "
                           f"{_describe(b, labels)}) = {ell.get(c, ZERO)}, "
                           f"parts add to {lhs}")
                break
        if witness:
            break
    rep.record("additive cocycle respects composition", witness is None, witness)
    return rep


def build_groupoid(labels, arrows, h=None, ell=None, h_modulus=2,
                   name="groupoid") -> GroupoidModel:
    """Validated model; raises with the first witness on bad data.

    Arrows may be Arrow values or iterables of index pairs; the cocycles are
    dicts keyed by Arrow (missing entries read as zero).
    """
    labels = [str(p) for p in labels]
    n = len(labels)
    arrows = [a if isinstance(a, Arrow) else arrow(a, n) for a in arrows]
    h = {k: int(v) for k, v in (h or {}).items()}
    ell = {k: Fraction(v) for k, v in (ell or {}).items()}
    rep = check_groupoid_data(labels, arrows, h, ell, h_modulus)
    if not rep.ok:
        raise ValueError(rep.summary())
    arrows = sorted(arrows, key=lambda a: (0 if a == identity_arrow(n) else 1,
                                           -len(a.graph), a.graph))
    model = GroupoidModel(name, labels, arrows, h_modulus, h, ell)
    pos = {a: i for i, a in enumerate(arrows)}
    model.unit_idx = pos[identity_arrow(n)]
    model.inverse_idx = [pos[a.inverse()] for a in arrows]
    for i, a in enumerate(arrows):
        for j, b in enumerate(arrows):
            c = a.then(b)
            if c is not None:
                model.compose_table[i, j] = pos[c]
    return model


# -- built-in models ---------------------------------------------------------

def one_point_model() -> GroupoidModel:
    return build_groupoid(["*"], [identity_arrow(1)], h_modulus=1,
                          name="one-point")


def shift_group_model(n: int, h_modulus=None, h_trivial=False,
                      name=None) -> GroupoidModel:
    """Cyclic group of full shifts on n points; the group cocycle is the
    shift amount unless asked to be trivial."""
    if h_modulus is None:
        h_modulus = n
    if n % h_modulus:
        raise ValueError("cocycle modulus must divide the number of points")
    arrows = [Arrow(tuple((x, (x + k) % n) for x in range(n)))
              for k in range(n)]
    h = {} if h_trivial else {a: a.apply(0) for a in arrows}
    return build_groupoid(list(range(n)), arrows, h=h, h_modulus=h_modulus,
                          name=name or f"shift:z{n}")


def two_chart_model(potential=None) -> GroupoidModel:
    """Shift on four points cut along the two charts {0,1} and {2,3}.

    The generating arrows are the chart-to-chart restrictions of the shift;
    the closure is every one-point arrow plus the full identity.  The group
    cocycle is the chart parity difference; the additive one is the
    difference of an optional potential."""
    pts = list(range(4))
    chart = [0, 0, 1, 1]
    gens = []
    for x in range(4):
        gens.append(Arrow(((x, (x + 1) % 4),)))
    arrows = arrow_closure(4, gens)
    h = {a: (chart[a.graph[0][1]] - chart[a.graph[0][0]]) % 2
         for a in arrows if len(a.graph) == 1}
    ell = {}
    if potential is not None:
        phi = [Fraction(v) for v in potential]
        ell = {a: phi[a.graph[0][1]] - phi[a.graph[0][0]]
               for a in arrows if len(a.graph) == 1}
    return build_groupoid(pts, arrows, h=h, ell=ell, h_modulus=2,
                          name="two-chart")


def z3_germ_model(potential=(0, 1, 3)) -> GroupoidModel:
    """One-point restrictions of the shift on three points; the additive
    cocycle is the difference of a potential on the points."""
    gens = [Arrow(((x, (x + 1) % 3),)) for x in range(3)]
    arrows = arrow_closure(3, gens)
    phi = [Fraction(v) for v in potential]
    ell = {a: phi[a.graph[0][1]] - phi[a.graph[0][0]]
           for a in arrows if len(a.graph) == 1}
    return build_groupoid(list(range(3)), arrows, ell=ell, h_modulus=2,
                          name="z3-germs")


def wraparound_attempt():
    """Model data with a weight cocycle that cannot be additive: two
    two-point shifts around a four-cycle, each carrying weight one.

    Going all the way around composes to a partial identity whose weight
    both telescopes to four and must be zero, so validation rejects the
    table; see check_groupoid_data.  Returns (labels, arrows, h, ell,
    modulus) ready to feed build_groupoid.
    """
    a = Arrow(((0, 1), (2, 3)))
    b = Arrow(((1, 2), (3, 0)))
    arrows = arrow_closure(4, [a, b])
    ell = {}
    for c in arrows:
        if len(c.graph) == 4:
            ell[c] = ZERO
        else:
            x, y = c.graph[0]
            ell[c] = Fraction((y - x) % 4)
    return list(range(4)), arrows, {}, ell, 2


BUILTIN_MODELS = {
    "one-point": one_point_model,
    "shift:z2": lambda: shift_group_model(2),
    "shift:z3": lambda: shift_group_model(3),
    "shift:z3-plain": lambda: shift_group_model(3, h_modulus=1, h_trivial=True),
    "two-chart": two_chart_model,
    "z3-germs": z3_germ_model,
}


# -- coefficient forms -------------------------------------------------------

def point_forms(labels, nu_names=(), nu_diff=None) -> GradedAlgebra:
    """Functions on the points tensor an exterior algebra on degree-one
    generators, with an optional differential sending a generator to a word
    in the others (extended by the graded Leibniz rule)."""
    labels = [str(p) for p in labels]
    nu_names = [str(s) for s in nu_names]
    k = len(nu_names)
    subsets = []
    for size in range(k + 1):
        subsets.extend(combinations(range(k), size))
    subsets.sort(key=lambda s: (len(s), s))
    sub_idx = {s: i for i, s in enumerate(subsets)}
    n_sub = len(subsets)

    def at(p, s):
        return p * n_sub + sub_idx[s]

    out_labels = []
    degrees = []
    for p in labels:
        for s in subsets:
            word = "".join(nu_names[i] for i in s)
            out_labels.append(f"e{p}" + (f".{word}" if word else ""))
            degrees.append(len(s))
    products = {}
    for p in range(len(labels)):
        for s in subsets:
            for t in subsets:
                merged, sign = _subset_mul_sign(s, t)
                if merged is not None:
                    products[at(p, s), at(p, t)] = {at(p, merged): Fraction(sign)}
    unit = {at(p, ()): ONE for p in range(len(labels))}

    diff = {}
    rules = {}
    for gen, word in (nu_diff or {}).items():
        rules[nu_names.index(str(gen))] = tuple(sorted(nu_names.index(str(w))
                                                       for w in word))
    if rules:
        for p in range(len(labels)):
            for s in subsets:
                img: Vec = {}
                for j, g in enumerate(s):
                    word = rules.get(g)
                    if word is None:
                        continue
                    left, ls = (s[:j], sign_pow(j))
                    m1, s1 = _subset_mul_sign(left, word)
                    if m1 is None:
                        continue
                    m2, s2 = _subset_mul_sign(m1, s[j + 1:])
                    if m2 is None:
                        continue
                    vaddto(img, Fraction(ls * s1 * s2), {at(p, m2): ONE})
                if img:
                    diff[at(p, s)] = img
    name = f"Fun({{{','.join(labels)}}})"
    if nu_names:
        name += f"[{','.join(nu_names)}]"
    return GradedAlgebra(name, out_labels, degrees, products, unit=unit,
                         diff=diff)


# -- cross products ----------------------------------------------------------

class CrossProduct:
    """Convolution DG algebra of a groupoid model.

    Basis vectors are (point, generator subset, arrow) with the point in the
    arrow's domain; the product matches the middle point through the arrow
    action on coefficients and composes the arrow labels.
    """

    def __init__(self, model: GroupoidModel, nu_names=(), nu_diff=None,
                 name=None):
        self.model = model
        self.coeff = point_forms(model.labels, nu_names, nu_diff)
        self.n_sub = self.coeff.dim // model.n_points
        self.basis: list[tuple[int, int, int]] = []
        for ai, a in enumerate(model.arrows):
            for x, _ in a.graph:
                for s in range(self.n_sub):
                    self.basis.append((x, s, ai))
        self.basis.sort()
        self._pos = {b: i for i, b in enumerate(self.basis)}

        labels = [f"{self.coeff.labels[x * self.n_sub + s]}"
                  f"@{model.arrow_name(ai)}" for (x, s, ai) in self.basis]
        degrees = [self.coeff.degrees[x * self.n_sub + s]
                   for (x, s, ai) in self.basis]
        products = {}
        for i1, (x, s, ai) in enumerate(self.basis):
            a = model.arrows[ai]
            y = a.apply(x)
            for aj in range(len(model.arrows)):
                cj = model.compose_table.get((ai, aj))
                if cj is None or model.arrows[aj].apply(y) is None:
                    continue
                for t in range(self.n_sub):
                    i2 = self._pos[y, t, aj]
                    prod = self.coeff.mul_basis(x * self.n_sub + s,
                                                x * self.n_sub + t)
                    out = {self._pos[x, u % self.n_sub, cj]: c
                           for u, c in prod.items()}
                    if out:
                        products[i1, i2] = out
        unit = {self._pos[x, 0, model.unit_idx]: ONE
                for x in range(model.n_points)}
        diff = {}
        for i1, (x, s, ai) in enumerate(self.basis):
            img = self.coeff.diff.get(x * self.n_sub + s)
            if img:
                diff[i1] = {self._pos[u // self.n_sub, u % self.n_sub, ai]: c
                            for u, c in img.items()}
        self.algebra = GradedAlgebra(
            name or f"{self.coeff.name}x{model.name}", labels, degrees,
            products, unit=unit, diff=diff)

    def index(self, x: int, s: int, ai: int) -> int:
        return self._pos[x, s, ai]

    def decode(self, i: int) -> tuple[int, int, int]:
        return self.basis[i]

    def coeff_index(self, x: int, s: int) -> int:
        return x * self.n_sub + s

    def coeff_act(self, vec: Vec, ai: int) -> Vec:
        """Superscript action of an arrow on coefficients: functions move
        along the inverse, generators stay put."""
        inv = self.model.arrows[self.model.inverse_idx[ai]]
        out: Vec = {}
        for u, c in vec.items():
            z = inv.apply(u // self.n_sub)
            if z is not None:
                vaddto(out, c, {self.coeff_index(z, u % self.n_sub): ONE})
        return out

    def degree_zero_indices(self) -> list[int]:
        return [i for i, d in enumerate(self.algebra.degrees) if d == 0]


def crossproduct_dga(model: GroupoidModel, nu_names=(), nu_diff=None,
                     name=None) -> CrossProduct:
    return CrossProduct(model, nu_names, nu_diff, name)


# -- actions and traces ------------------------------------------------------

def pullback_action(cross: CrossProduct, h_override=None) -> HopfAction:
    """Functions on Z/m acting through the group-valued cocycle: the k-th
    delta function keeps exactly the basis vectors whose arrow has cocycle
    value k."""
    m = cross.model.h_modulus
    H = fun_hopf(m)
    table = {}
    for i, (x, s, ai) in enumerate(cross.basis):
        if h_override is None:
            k = cross.model.h_of(ai)
        else:
            k = h_override.get(cross.model.arrows[ai], 0) % m
        table[k, i] = {i: ONE}
    return HopfAction(H, cross.algebra, table)


def counting_base(cross: CrossProduct) -> Trace:
    """Weight-zero functional summing function values over the points."""
    return Trace(0, {cross.coeff_index(x, 0): ONE
                     for x in range(cross.model.n_points)})


def volume_base(cross: CrossProduct) -> Trace:
    """Top-weight functional reading the full generator word at each point."""
    top = cross.n_sub - 1
    weight = cross.coeff.degrees[top]
    return Trace(weight, {cross.coeff_index(x, top): ONE
                          for x in range(cross.model.n_points)})


def unit_trace(cross: CrossProduct, base: Trace | None = None) -> Trace:
    """Trace on the cross product reading the base functional off the
    partial-identity arrows and nothing else."""
    if base is None:
        base = volume_base(cross) if cross.n_sub > 1 else counting_base(cross)
    values: Vec = {}
    for i, (x, s, ai) in enumerate(cross.basis):
        if not cross.model.arrows[ai].is_partial_identity:
            continue
        c = base.values.get(cross.coeff_index(x, s))
        if c:
            values[i] = c
    return Trace(base.weight, values)


# -- the discrete logarithmic-derivative bundle ------------------------------

@dataclass
class GvBundle:
    cross: CrossProduct
    hopf: HopfData
    action: HopfAction
    trace: Trace
    delta: Vec
    sigma: Vec


def discrete_gv(model: GroupoidModel, nu="nu") -> GvBundle:
    """One odd primitive acting by exterior multiplication weighted by the
    additive cocycle of the arrow."""
    cross = CrossProduct(model, (nu,))
    H = primitive_hopf()
    table = {}
    for i, (x, s, ai) in enumerate(cross.basis):
        table[0, i] = {i: ONE}
        if s == 0:
            w = model.ell_of(ai)
            if w:
                table[1, i] = {cross.index(x, 1, ai): w}
    act = HopfAction(H, cross.algebra, table)
    return GvBundle(cross, H, act, unit_trace(cross, volume_base(cross)),
                    delta={0: ONE}, sigma={0: ONE})


# -- weight potentials -------------------------------------------------------

def weight_potential(n_points: int, arrows, ell):
    """Point potential whose germ differences realize the additive weights,
    with the rank evidence deciding existence.

    Returns (phi, (rank, augmented_rank)): phi maps point -> value with
    phi(y) - phi(x) = weight(a) for every germ (x, y) of every arrow, or
    None when the difference system is infeasible, which the ranks witness
    (augmented strictly larger).  Works on raw generator data, so it
    discriminates weight tables that no validated model could carry.
    """
    rows = []
    rhs: Vec = {}
    for a in arrows:
        w = ell.get(a, ZERO)
        for x, y in a.graph:
            r = len(rows)
            row: Vec = {}
            vaddto(row, ONE, {y: ONE})
            vaddto(row, -ONE, {x: ONE})
            rows.append(row)
            if w:
                rhs[r] = Fraction(w)
    mat = SparseMatrix(len(rows), n_points)
    aug = SparseMatrix(len(rows), n_points + 1)
    for r, row in enumerate(rows):
        for c, v in row.items():
            mat[r, c] = v
            aug[r, c] = v
    for r, v in rhs.items():
        aug[r, n_points] = v
    evidence = (mat.rank(), aug.rank())
    phi = mat.solve(rhs)
    if phi is None:
        return None, evidence
    return {x: phi.get(x, ZERO) for x in range(n_points)}, evidence


def character_window(gv: GvBundle, N: int = 3):
    """Window data certifying the character class of the odd primitive.

    Builds the level-1 character, retracts it to weight zero, projects to
    the degree-zero subalgebra, and places it in a cyclic window over that
    subalgebra.  Returns (window, cochain family, degree-1 vector).
    """
    ch = chi(gv.action, gv.trace, {(1,): ONE})
    pc = placed_R(PlacedCochain.single(ch))
    inc = DegreeZeroInclusion(gv.cross.algebra)
    pc0 = inc.project(pc)
    X0 = AlgebraCochains(inc.sub)
    win = assemble_window(X0, N)
    vecs = placed_window_vectors(win, X0, pc0)
    return win, X0, vecs.get(1, {})


# -- unit-space cocycles and trivialization change ---------------------------

def relabeled_cocycle(model: GroupoidModel, U) -> dict[Arrow, int]:
    """Group cocycle after changing the fiber basis by a function of the
    point: source value plus old cocycle minus target value.  Defined only
    when that combination is constant on each arrow."""
    m = model.h_modulus
    out = {}
    for a in model.arrows:
        vals = {(U[x] + model.h.get(a, 0) - U[y]) % m for x, y in a.graph}
        if len(vals) > 1:
            raise ValueError(
                f"basis change is not constant on {_describe(a, model.labels)}")
        out[a] = vals.pop()
    return out


def unit_space_cocycle(cross: CrossProduct, U):
    """Convolution cocycle pair supported on the identity arrow: the plus
    leg reads the basis change, the minus leg its antipode twist."""
    m = cross.model.h_modulus
    rho_plus: dict[int, Vec] = {k: {} for k in range(m)}
    rho_minus: dict[int, Vec] = {k: {} for k in range(m)}
    for x in range(cross.model.n_points):
        i = cross.index(x, 0, cross.model.unit_idx)
        rho_plus[U[x] % m][i] = ONE
        rho_minus[(-U[x]) % m][i] = ONE
    return rho_plus, rho_minus


# -- the equivariant group-cochain bicomplex ---------------------------------

def group_arrow_indices(model: GroupoidModel) -> list[int]:
    """Arrow indices of an everywhere-defined model; rejects proper partial
    arrows, for which tuple bicomplexes are out of scope."""
    bad = [a for a in model.arrows if len(a.graph) != model.n_points]
    if bad:
        raise ValueError(
            f"{_describe(bad[0], model.labels)} is not everywhere defined")
    return list(range(len(model.arrows)))


class GroupCochain:
    """Totally antisymmetric function on (k+1)-tuples of group elements,
    valued in functionals on the degree-l coefficient forms, equivariant
    for left translation against the point action."""

    def __init__(self, cross: CrossProduct, k: int, l: int, values):
        self.cross = cross
        self.k = k
        self.l = l
        self.values: dict[tuple[int, ...], Vec] = {}
        for t, vec in values.items():
            clean = {i: Fraction(c) for i, c in vec.items() if c}
            if clean:
                self.values[tuple(t)] = clean

    def value(self, t) -> Vec:
        return self.values.get(tuple(t), {})

    def is_zero(self) -> bool:
        return not self.values

    def scale(self, c) -> "GroupCochain":
        c = Fraction(c)
        return GroupCochain(self.cross, self.k, self.l,
                            {t: {i: c * v for i, v in vec.items()}
                             for t, vec in self.values.items()})

    def add(self, other: "GroupCochain") -> "GroupCochain":
        out = {t: dict(vec) for t, vec in self.values.items()}
        for t, vec in other.values.items():
            acc = out.setdefault(t, {})
            vaddto(acc, ONE, vec)
        return GroupCochain(self.cross, self.k, self.l, out)


def transport_current(cross: CrossProduct, cur: Vec, ai: int) -> Vec:
    """Transpose action on functionals: the result pairs a form the way the
    original pairs the form moved along the same arrow.  This direction is
    the one under which the tuple differential matches the cyclic face sum
    on the cross product."""
    out: Vec = {}
    for i in range(cross.coeff.dim):
        img = cross.coeff_act({i: ONE}, ai)
        total = ZERO
        for j, c in img.items():
            w = cur.get(j)
            if w:
                total += c * w
        if total:
            out[i] = total
    return out


def check_group_cochain(tau: GroupCochain) -> Report:
    """Support degree, total antisymmetry, and translation equivariance."""
    cross = tau.cross
    model = cross.model
    rep = Report(f"tuple cochain (k={tau.k}, l={tau.l}) on {model.name}")
    idxs = group_arrow_indices(model)

    witness = None
    for t, vec in tau.values.items():
        bad = [i for i in vec if cross.coeff.degrees[i] != tau.l]
        if bad:
            witness = f"value at {t} pairs degree {cross.coeff.degrees[bad[0]]}"
            break
    rep.record("currents pair the stated degree", witness is None, witness)

    witness = None
    for t in product(idxs, repeat=tau.k + 1):
        for j in range(tau.k):
            swapped = list(t)
            swapped[j], swapped[j + 1] = swapped[j + 1], swapped[j]
            lhs = tau.value(swapped)
            rhs = {i: -c for i, c in tau.value(t).items()}
            if lhs != rhs:
                witness = f"swap at {j} on {t}"
                break
        if witness:
            break
    rep.record("totally antisymmetric", witness is None, witness)

    witness = None
    for t in product(idxs, repeat=tau.k + 1):
        for g in idxs:
            shifted = tuple(model.compose_table[g, i] for i in t)
            lhs = tau.value(shifted)
            rhs = transport_current(cross, tau.value(t),
                                    model.inverse_idx[g])
            if lhs != rhs:
                witness = (f"translate {t} by {model.arrow_name(g)}")
                break
        if witness:
            break
    rep.record("equivariant under left translation", witness is None, witness)
    return rep


def bicomplex_basis(cross: CrossProduct, k: int, l: int) -> list[GroupCochain]:
    """Kernel basis of the antisymmetry and equivariance constraints."""
    model = cross.model
    idxs = group_arrow_indices(model)
    tuples = list(product(idxs, repeat=k + 1))
    tpos = {t: i for i, t in enumerate(tuples)}
    cols = [i for i in range(cross.coeff.dim) if cross.coeff.degrees[i] == l]
    cpos = {c: i for i, c in enumerate(cols)}
    nvar = len(tuples) * len(cols)

    def var(t, ci):
        return tpos[t] * len(cols) + cpos[ci]

    rows = []
    for t in tuples:
        for j in range(k):
            swapped = list(t)
            swapped[j], swapped[j + 1] = swapped[j + 1], swapped[j]
            swapped = tuple(swapped)
            for ci in cols:
                row: Vec = {}
                vaddto(row, ONE, {var(swapped, ci): ONE})
                vaddto(row, ONE, {var(t, ci): ONE})
                if row:
                    rows.append(row)
        for g in idxs:
            shifted = tuple(model.compose_table[g, i] for i in t)
            ginv = model.inverse_idx[g]
            for ci in cols:
                row = {var(shifted, ci): ONE}
                img = cross.coeff_act({ci: ONE}, ginv)
                for j, c in img.items():
                    vaddto(row, -c, {var(t, j): ONE})
                if row:
                    rows.append(row)
    mat = SparseMatrix(len(rows), nvar)
    for r, row in enumerate(rows):
        for c, v in row.items():
            mat[r, c] = v
    out = []
    for vec in mat.kernel_basis():
        values: dict[tuple, Vec] = {}
        for pos, c in vec.items():
            t = tuples[pos // len(cols)]
            ci = cols[pos % len(cols)]
            values.setdefault(t, {})[ci] = c
        out.append(GroupCochain(cross, k, l, values))
    return out


def bicomplex_d1(tau: GroupCochain) -> GroupCochain:
    """Tuple differential: signed sum over dropped entries, with the extra
    sign of the current grading.  With the second index counted as the
    paired form degree, the face sum on the cross product fixes the base
    sign to (-1)^(l+1); the matrix identities pin it uniquely."""
    model = tau.cross.model
    idxs = group_arrow_indices(model)
    base = sign_pow(tau.l + 1)
    values: dict[tuple, Vec] = {}
    for t in product(idxs, repeat=tau.k + 2):
        acc: Vec = {}
        for j in range(tau.k + 2):
            vaddto(acc, Fraction(base * sign_pow(j)),
                   tau.value(t[:j] + t[j + 1:]))
        if acc:
            values[t] = acc
    return GroupCochain(tau.cross, tau.k + 1, tau.l, values)


def bicomplex_d2(tau: GroupCochain) -> GroupCochain:
    """Differential on the current side: pair with the differential of the
    argument form, so the paired degree drops by one."""
    coeff = tau.cross.coeff
    values: dict[tuple, Vec] = {}
    for t, cur in tau.values.items():
        out: Vec = {}
        for i in range(coeff.dim):
            img = coeff.diff.get(i)
            if not img:
                continue
            total = ZERO
            for j, c in img.items():
                w = cur.get(j)
                if w:
                    total += c * w
            if total:
                out[i] = total
        if out:
            values[t] = out
    return GroupCochain(tau.cross, tau.k, tau.l - 1, values)


def psi_cochain(tau: GroupCochain) -> Cochain:
    """Cochain on the cross product: on a tuple whose arrows compose to the
    identity, pair the current at the successive prefixes against the
    coefficient product transported step by step; zero elsewhere."""
    rep = check_group_cochain(tau)
    if not rep.ok:
        raise ValueError(rep.summary())
    cross = tau.cross
    model = cross.model
    idxs = group_arrow_indices(model)
    k = tau.k
    unit = model.unit_idx
    coeffs: dict[tuple, Fraction] = {}
    base = sign_pow(k * tau.l)
    for gs in product(idxs, repeat=k):
        prefixes = [unit]
        cur = unit
        for g in gs:
            cur = model.compose_table[cur, g]
            prefixes.append(cur)
        g_last = model.inverse_idx[prefixes[-1]]
        taus = tau.value(tuple(prefixes))
        if not taus:
            continue
        arrows = list(gs) + [g_last]
        for x0 in range(model.n_points):
            points = [x0]
            for pre in prefixes[1:]:
                points.append(model.arrows[pre].apply(x0))
            for subs in product(range(cross.n_sub), repeat=k + 1):
                prod: Vec = {cross.coeff_index(x0, subs[0]): ONE}
                for j in range(1, k + 1):
                    moved = cross.coeff_act(
                        {cross.coeff_index(points[j], subs[j]): ONE},
                        prefixes[j])
                    nxt: Vec = {}
                    for u, cu in prod.items():
                        for v, cv in moved.items():
                            vaddto(nxt, cu * cv, cross.coeff.mul_basis(u, v))
                    prod = nxt
                    if not prod:
                        break
                if not prod:
                    continue
                total = ZERO
                for u, cu in prod.items():
                    w = taus.get(u)
                    if w:
                        total += w * cu
                if not total:
                    continue
                key = tuple(cross.index(points[j], subs[j], arrows[j])
                            for j in range(k + 1))
                c = coeffs.get(key, ZERO) + base * total
                if c:
                    coeffs[key] = c
                else:
                    del coeffs[key]
    return Cochain(cross.algebra, k, coeffs)
