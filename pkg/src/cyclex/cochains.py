"""Multilinear functionals on a graded algebra and the operator calculus on
them.

A level-k cochain eats (k+1)-tuples of algebra elements; it is stored sparsely
by its values on basis tuples.  This module implements the simplicial and
cyclic structure maps dual to merge/insert/rotate, the action of derivations
(Lie derivative and two contraction operators), and a block-placed picture of
the periodic total complex on which the degree-zero comparison operators and
their homotopies act.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Derivation, GradedAlgebra, grading_derivation
from .cyclic import CyclicObject
from .linalg import SparseMatrix
from .util import ONE, ZERO, format_rational, sign_pow

Key = tuple[int, ...]


def tuple_weight(algebra: GradedAlgebra, t: Key) -> int:
    return sum(algebra.degrees[i] for i in t)


@dataclass
class Cochain:
    """Sparse functional on (level+1)-tuples of basis elements."""
    algebra: GradedAlgebra
    level: int
    coeffs: dict[Key, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for t, c in self.coeffs.items():
            if len(t) != self.level + 1:
                raise ValueError(f"tuple {t} has wrong length for level {self.level}")
            c = Fraction(c)
            if c:
                clean[t] = c
        self.coeffs = clean

    @classmethod
    def dual(cls, algebra: GradedAlgebra, t: Key) -> "Cochain":
        return cls(algebra, len(t) - 1, {tuple(t): ONE})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        return (isinstance(other, Cochain) and self.level == other.level
                and self.algebra is other.algebra and self.coeffs == other.coeffs)

    def add(self, other: "Cochain") -> "Cochain":
        if other.level != self.level or other.algebra is not self.algebra:
            raise ValueError("cochain mismatch in add")
        out = dict(self.coeffs)
        for t, c in other.coeffs.items():
            w = out.get(t, ZERO) + c
            if w:
                out[t] = w
            else:
                del out[t]
        return Cochain(self.algebra, self.level, out)

    def scale(self, c) -> "Cochain":
        c = Fraction(c)
        if not c:
            return Cochain(self.algebra, self.level, {})
        return Cochain(self.algebra, self.level,
                       {t: c * v for t, v in self.coeffs.items()})

    def sub(self, other: "Cochain") -> "Cochain":
        return self.add(other.scale(-1))

    def weight_split(self) -> dict[int, "Cochain"]:
        """Split by total degree of the support tuples."""
        out: dict[int, dict] = {}
        for t, c in self.coeffs.items():
            out.setdefault(tuple_weight(self.algebra, t), {})[t] = c
        return {w: Cochain(self.algebra, self.level, d) for w, d in out.items()}

    def evaluate(self, vectors) -> Fraction:
        """Value on a tuple of element vectors."""
        vectors = list(vectors)
        if len(vectors) != self.level + 1:
            raise ValueError("wrong number of arguments")
        total = ZERO
        for t, c in self.coeffs.items():
            prod = c
            for slot, i in enumerate(t):
                x = vectors[slot].get(i)
                if not x:
                    prod = ZERO
                    break
                prod *= x
            total += prod
        return total

    def show(self) -> str:
        if not self.coeffs:
            return "0"
        A = self.algebra
        parts = []
        for t in sorted(self.coeffs):
            c = self.coeffs[t]
            name = "[" + ",".join(A.labels[i] for i in t) + "]"
            parts.append(name if c == 1 else f"{format_rational(c)}*{name}")
        return " + ".join(parts)


def _acc(out: dict, t: Key, c: Fraction) -> None:
    w = out.get(t, ZERO) + c
    if w:
        out[t] = w
    else:
        out.pop(t, None)


# -- simplicial / cyclic structure maps --------------------------------------

def cochain_face(c: Cochain, i: int) -> Cochain:
    """Dual of merging argument slots; level k -> k+1, 0 <= i <= k+1."""
    A = c.algebra
    k = c.level
    if not 0 <= i <= k + 1:
        raise IndexError(f"face {i} out of range at level {k}")
    out: dict[Key, Fraction] = {}
    if i <= k:
        for s, v in c.coeffs.items():
            for (a, b, coef) in A.unsplit(s[i]):
                _acc(out, s[:i] + (a, b) + s[i + 1:], coef * v)
    else:
        for s, v in c.coeffs.items():
            inner = sum(A.degrees[x] for x in s[1:])
            for (a, b, coef) in A.unsplit(s[0]):
                sign = sign_pow(A.degrees[a] * (A.degrees[b] + inner))
                _acc(out, (b,) + s[1:] + (a,), sign * coef * v)
    return Cochain(A, k + 1, out)


def cochain_degen(c: Cochain, i: int) -> Cochain:
    """Dual of inserting the unit after slot i; level k -> k-1, 0 <= i <= k-1."""
    A = c.algebra
    k = c.level
    if not (k >= 1 and 0 <= i <= k - 1):
        raise IndexError(f"degeneracy {i} out of range at level {k}")
    if not A.is_unital:
        raise ValueError(f"{A.name} has no unit; degeneracies undefined")
    out: dict[Key, Fraction] = {}
    for s, v in c.coeffs.items():
        u = A.unit.get(s[i + 1])
        if u:
            _acc(out, s[:i + 1] + s[i + 2:], u * v)
    return Cochain(A, k - 1, out)


def cochain_tau(c: Cochain) -> Cochain:
    """Graded cyclic rotation of the arguments."""
    A = c.algebra
    out: dict[Key, Fraction] = {}
    for s, v in c.coeffs.items():
        d0 = A.degrees[s[0]]
        sign = sign_pow(d0 * (tuple_weight(A, s) - d0))
        _acc(out, s[1:] + (s[0],), sign * v)
    return Cochain(A, c.level, out)


def cochain_b(c: Cochain) -> Cochain:
    out = Cochain(c.algebra, c.level + 1, {})
    for i in range(c.level + 2):
        out = out.add(cochain_face(c, i).scale(sign_pow(i)))
    return out


def cochain_lambda_inv(c: Cochain) -> Cochain:
    w = c
    for _ in range(c.level):
        w = cochain_tau(w)
    return w.scale(sign_pow(c.level))


def cochain_B(c: Cochain) -> Cochain:
    """Signed norm of the extra degeneracy of (1 - inverse signed shift).
    Vanishes identically out of level 0, so this requires level >= 1."""
    k = c.level
    if k == 0:
        raise ValueError("B out of level 0 is zero; no level -1 exists")
    w = c.sub(cochain_lambda_inv(c))
    w = cochain_degen(cochain_tau(w), k - 1)
    out = Cochain(c.algebra, k - 1, {})
    cur = w
    for j in range(k):
        out = out.add(cur.scale(sign_pow((k - 1) * j)))
        if j < k - 1:
            cur = cochain_tau(cur)
    return out


# -- derivation calculus -----------------------------------------------------

def _transpose(images: dict[int, dict]) -> dict[int, list]:
    table: dict[int, list] = {}
    for src, vec in images.items():
        for dst, coef in vec.items():
            table.setdefault(dst, []).append((src, coef))
    return table


def lie_derivative(D: Derivation, c: Cochain) -> Cochain:
    """Sum over argument slots of the action of D, with the Koszul sign of
    moving D past the earlier arguments."""
    A = c.algebra
    if D.algebra is not A:
        raise ValueError("derivation acts on a different algebra")
    table = _transpose(D.images)
    t_deg = D.degree
    out: dict[Key, Fraction] = {}
    for s, v in c.coeffs.items():
        before = 0
        for j in range(c.level + 1):
            hits = table.get(s[j])
            if hits:
                sign = sign_pow(t_deg * before)
                for (y, coef) in hits:
                    _acc(out, s[:j] + (y,) + s[j + 1:], sign * coef * v)
            before += A.degrees[s[j]]
    return Cochain(A, c.level, out)


def cochain_diff(c: Cochain) -> Cochain:
    """Raw internal differential: the Lie derivative along d."""
    from .algebra import differential_derivation
    return lie_derivative(differential_derivation(c.algebra), c)


def interior_e(D: Derivation, c: Cochain) -> Cochain:
    """End contraction, level k -> k+1:
    (e_D f)(a_0..a_k) = (-1)^(k+1) * Koszul(a_k; a_0..a_{k-1})
                        * f(D(a_k) a_0, a_1, .., a_{k-1})."""
    A = c.algebra
    k_out = c.level + 1
    table = _transpose(D.images)
    t_deg = D.degree
    out: dict[Key, Fraction] = {}
    base = sign_pow(k_out + 1)
    for s, v in c.coeffs.items():
        mid = s[1:]
        mid_w = tuple_weight(A, mid)
        for (y, u0, mcoef) in A.unsplit(s[0]):
            for (uk, dcoef) in table.get(y, ()):
                sign = sign_pow((A.degrees[uk] + t_deg) * (A.degrees[u0] + mid_w))
                _acc(out, (u0,) + mid + (uk,), base * sign * mcoef * dcoef * v)
    return Cochain(A, k_out, out)


def interior_E(D: Derivation, c: Cochain) -> Cochain:
    """Spread contraction, level k -> k-1:
    (E_D f)(a_0..a_k) = sum_{1<=i<=j<=k} (-1)^(ik+1)
        * Koszul(a_0..a_{i-1}; a_i..a_k, D)
        * f(1, a_i, .., D(a_j), .., a_k, a_0, .., a_{i-1})."""
    A = c.algebra
    if not A.is_unital:
        raise ValueError(f"{A.name} has no unit; spread contraction undefined")
    k = c.level - 1
    if k < 0:
        raise ValueError("spread contraction needs level >= 1")
    table = _transpose(D.images)
    t_deg = D.degree
    out: dict[Key, Fraction] = {}
    for s, v in c.coeffs.items():
        u0 = A.unit.get(s[0])
        if not u0:
            continue
        rest = s[1:]  # length k+1
        for i in range(1, k + 1):
            # positions 1..k-i+1 hold a_i..a_k, positions k-i+2..k+1 hold a_0..a_{i-1}
            for j in range(i, k + 1):
                m = j - i  # index into rest of the D-slot
                for (y, dcoef) in table.get(rest[m], ()):
                    a = list(rest)
                    a[m] = y
                    tail = tuple(a[k - i + 1:])  # a_0..a_{i-1}
                    head = tuple(a[:k - i + 1])  # a_i..a_k
                    u = tail + head
                    front_w = tuple_weight(A, tail)
                    back_w = tuple_weight(A, head)
                    sign = sign_pow(i * k + 1) * sign_pow(front_w * (back_w + t_deg))
                    _acc(out, u, sign * u0 * dcoef * v)
    return Cochain(A, k, out)


# -- block-placed picture of the periodic total complex ----------------------

@dataclass
class PlacedCochain:
    """Finite family of cochains placed on the (level, column-offset) lattice
    of the periodic total complex.  All operators below commute with the
    diagonal relabeling, so identities checked here hold in every column."""
    algebra: GradedAlgebra
    blocks: dict[tuple[int, int], Cochain] = field(default_factory=dict)

    def __post_init__(self):
        self.blocks = {key: c for key, c in self.blocks.items() if not c.is_zero()}
        for (lvl, _off), c in self.blocks.items():
            if c.level != lvl:
                raise ValueError("block level disagrees with its placement")

    @classmethod
    def single(cls, c: Cochain, offset: int = 0) -> "PlacedCochain":
        return cls(c.algebra, {(c.level, offset): c})

    def is_zero(self) -> bool:
        return not self.blocks

    def __eq__(self, other) -> bool:
        return (isinstance(other, PlacedCochain)
                and self.algebra is other.algebra and self.blocks == other.blocks)

    def add(self, other: "PlacedCochain") -> "PlacedCochain":
        out = dict(self.blocks)
        for key, c in other.blocks.items():
            out[key] = out[key].add(c) if key in out else c
        return PlacedCochain(self.algebra, out)

    def sub(self, other: "PlacedCochain") -> "PlacedCochain":
        return self.add(other.scale(-1))

    def scale(self, c) -> "PlacedCochain":
        return PlacedCochain(self.algebra,
                             {key: blk.scale(c) for key, blk in self.blocks.items()})

    def show(self) -> str:
        if not self.blocks:
            return "0"
        return "; ".join(f"@(lvl {lvl}, col {off}): {c.show()}"
                         for (lvl, off), c in sorted(self.blocks.items()))


def _placed(algebra, pieces) -> PlacedCochain:
    out: dict[tuple[int, int], Cochain] = {}
    for (lvl, off), c in pieces:
        if c.is_zero():
            continue
        key = (lvl, off)
        out[key] = out[key].add(c) if key in out else c
    return PlacedCochain(algebra, out)


def placed_b(pc: PlacedCochain) -> PlacedCochain:
    return _placed(pc.algebra, (((lvl + 1, off), cochain_b(c))
                                for (lvl, off), c in pc.blocks.items()))


def placed_B(pc: PlacedCochain) -> PlacedCochain:
    return _placed(pc.algebra, (((lvl - 1, off + 1), cochain_B(c))
                                for (lvl, off), c in pc.blocks.items() if lvl >= 1))


def placed_diff(pc: PlacedCochain, signed: bool = True) -> PlacedCochain:
    return _placed(pc.algebra,
                   (((lvl, off), cochain_diff(c).scale(sign_pow(lvl) if signed else 1))
                    for (lvl, off), c in pc.blocks.items()))


def placed_boundary(pc: PlacedCochain) -> PlacedCochain:
    """b + B + level-signed internal differential."""
    return placed_b(pc).add(placed_B(pc)).add(placed_diff(pc, signed=True))


def placed_contraction(D: Derivation, pc: PlacedCochain) -> PlacedCochain:
    """End contraction (level +1, column -1) plus spread contraction
    (level -1, same column)."""
    pieces = []
    for (lvl, off), c in pc.blocks.items():
        pieces.append(((lvl + 1, off - 1), interior_e(D, c)))
        if lvl >= 1:
            pieces.append(((lvl - 1, off), interior_E(D, c)))
    return _placed(pc.algebra, pieces)


def placed_lie(D: Derivation, pc: PlacedCochain) -> PlacedCochain:
    return _placed(pc.algebra, (((lvl, off), lie_derivative(D, c))
                                for (lvl, off), c in pc.blocks.items()))


def cartan_defect(D: Derivation, pc: PlacedCochain) -> PlacedCochain:
    """L_D - ((b+B) . contraction + contraction . (b+B)); zero on cochains
    that vanish when any slot past the first holds the unit.  The bracket is
    against b+B only: the internal differential is not part of the identity."""
    lhs = placed_lie(D, pc)

    def cyc(x):
        return placed_b(x).add(placed_B(x))

    rhs = cyc(placed_contraction(D, pc)).add(placed_contraction(D, cyc(pc)))
    return lhs.sub(rhs)


def placed_h(pc: PlacedCochain) -> PlacedCochain:
    """Weight-normalized contraction along the grading derivation: on a piece
    of support weight m >= 1 it is (contraction)/m; it kills weight 0."""
    out = PlacedCochain(pc.algebra, {})
    for (lvl, off), c in pc.blocks.items():
        for m, piece in c.weight_split().items():
            if m == 0:
                continue
            out = out.add(placed_contraction(
                grading_derivation(pc.algebra),
                PlacedCochain.single(piece, off)).scale(Fraction(1, m)))
    return out


def _comparison_sign(k: int, m: int) -> int:
    return sign_pow(k * m + (m * m - m) // 2)


def placed_R(pc: PlacedCochain) -> PlacedCochain:
    """Retraction onto weight zero: on a weight-m block at level k apply
    (raw d . h) m times, scaled by the comparison sign."""
    out = PlacedCochain(pc.algebra, {})
    for (lvl, off), c in pc.blocks.items():
        for m, piece in c.weight_split().items():
            y = PlacedCochain.single(piece, off)
            for _ in range(m):
                y = placed_diff(placed_h(y), signed=False)
            out = out.add(y.scale(_comparison_sign(lvl, m)))
    return out


def placed_H(pc: PlacedCochain) -> PlacedCochain:
    """Homotopy between the identity and the weight-zero retraction:
    sum_{j<m} sign(k,j) * h . (raw d . h)^j on a weight-m block at level k."""
    out = PlacedCochain(pc.algebra, {})
    for (lvl, off), c in pc.blocks.items():
        for m, piece in c.weight_split().items():
            y = PlacedCochain.single(piece, off)
            for j in range(m):
                out = out.add(placed_h(y).scale(_comparison_sign(lvl, j)))
                if j < m - 1:
                    y = placed_diff(placed_h(y), signed=False)
    return out


class AlgebraCochains(CyclicObject):
    """The cyclic object whose level n holds the functionals on (n+1)-tuples.

    Flat indices are the mixed-radix reading of the support tuple, most
    significant slot first.  The internal degree of a dual basis vector is
    minus the total degree of its tuple: the raw differential then raises it
    by one, as the window bookkeeping expects.
    """

    def __init__(self, algebra: GradedAlgebra):
        super().__init__()
        self.algebra = algebra
        self.name = f"cochains({algebra.name})"
        self.has_diff = bool(algebra.diff)
        self.needs_weight_cap = any(d != 0 for d in algebra.degrees)
        self._unit_index = None
        if algebra.is_unital and len(algebra.unit) == 1:
            (u,) = algebra.unit
            if algebra.unit[u] == 1:
                self._unit_index = u

    def dim(self, n: int) -> int:
        return self.algebra.dim ** (n + 1)

    def decode(self, n: int, idx: int) -> Key:
        out = []
        for _ in range(n + 1):
            out.append(idx % self.algebra.dim)
            idx //= self.algebra.dim
        return tuple(reversed(out))

    def encode(self, t: Key) -> int:
        idx = 0
        for x in t:
            idx = idx * self.algebra.dim + x
        return idx

    def label(self, n: int, i: int) -> str:
        t = self.decode(n, i)
        return "[" + ",".join(self.algebra.labels[x] for x in t) + "]"

    def weight(self, n: int, i: int) -> int:
        return -tuple_weight(self.algebra, self.decode(n, i))

    def to_cochain(self, n: int, vec: dict) -> Cochain:
        return Cochain(self.algebra, n,
                       {self.decode(n, i): c for i, c in vec.items()})

    def from_cochain(self, c: Cochain) -> dict:
        return {self.encode(t): v for t, v in c.coeffs.items()}

    def _via(self, n, vec, fn) -> dict:
        return self.from_cochain(fn(self.to_cochain(n, vec)))

    def apply_face(self, n, i, vec):
        return self._via(n, vec, lambda c: cochain_face(c, i))

    def apply_degen(self, n, i, vec):
        return self._via(n, vec, lambda c: cochain_degen(c, i))

    def apply_tau(self, n, vec):
        return self._via(n, vec, cochain_tau)

    def apply_diff(self, n, vec):
        if not self.has_diff:
            return {}
        return self._via(n, vec, cochain_diff)

    def normalized_mask(self, n: int):
        u = self._unit_index
        if u is None:
            return None
        mask = []
        for i in range(self.dim(n)):
            t = self.decode(n, i)
            mask.append(all(x != u for x in t[1:]))
        return mask

    def normalized_basis(self, n: int) -> list[Cochain]:
        """Basis of the joint kernel of the degeneracies at level n; works for
        any unit, unlike the mask."""
        if n == 0:
            return [self.to_cochain(0, {i: ONE}) for i in range(self.dim(0))]
        mask = self.normalized_mask(n)
        if mask is not None:
            return [self.to_cochain(n, {i: ONE})
                    for i, keep in enumerate(mask) if keep]
        low = self.dim(n - 1)
        stacked = SparseMatrix(n * low, self.dim(n))
        for j in range(n):
            for (r, c), v in self.degen_matrix(n, j).entries.items():
                stacked[j * low + r, c] = v
        return [self.to_cochain(n, vec) for vec in stacked.kernel_basis()]


class DegreeZeroInclusion:
    """The degree-zero part of a graded algebra, with extension of cochains
    by zero and weight-zero restriction."""

    def __init__(self, omega: GradedAlgebra):
        self.omega = omega
        self.indices = [i for i, d in enumerate(omega.degrees) if d == 0]
        pos = {i: p for p, i in enumerate(self.indices)}
        products = {}
        for (i, j), vec in omega.products.items():
            if i in pos and j in pos:
                clean = {pos[k]: c for k, c in vec.items()}
                if any(k not in pos for k in vec):
                    raise AssertionError("degree-zero part not closed under product")
                products[pos[i], pos[j]] = clean
        unit = None
        if omega.is_unital:
            unit = {pos[i]: c for i, c in omega.unit.items()}
        self.sub = GradedAlgebra(f"{omega.name}°", [omega.labels[i] for i in self.indices],
                                 [0] * len(self.indices), products, unit=unit)
        self._pos = pos

    def extend(self, pc: PlacedCochain) -> PlacedCochain:
        if pc.algebra is not self.sub:
            raise ValueError("expected a placed cochain over the degree-zero part")
        blocks = {}
        for (lvl, off), c in pc.blocks.items():
            coeffs = {tuple(self.indices[i] for i in t): v for t, v in c.coeffs.items()}
            blocks[lvl, off] = Cochain(self.omega, lvl, coeffs)
        return PlacedCochain(self.omega, blocks)

    def project(self, pc: PlacedCochain) -> PlacedCochain:
        """Keep only values on degree-zero tuples."""
        if pc.algebra is not self.omega:
            raise ValueError("expected a placed cochain over the full algebra")
        blocks = {}
        for (lvl, off), c in pc.blocks.items():
            coeffs = {}
            for t, v in c.coeffs.items():
                if all(i in self._pos for i in t):
                    coeffs[tuple(self._pos[i] for i in t)] = v
            blk = Cochain(self.sub, lvl, coeffs)
            if not blk.is_zero():
                blocks[lvl, off] = blk
        return PlacedCochain(self.sub, blocks)


def placed_window_vectors(window, X: AlgebraCochains, pc: PlacedCochain):
    """Window vectors of a placed cochain, split by total degree.

    A block at (level, offset) lands in bicomplex slot (level+offset, offset);
    each entry's weight shifts its total degree as in the window layout.
    """
    if X.algebra is not pc.algebra:
        raise ValueError("cochain family and placed cochain disagree")
    out: dict[int, Vec] = {}
    for (lvl, off), c in pc.blocks.items():
        p, q = lvl + off, off
        for i, coeff in X.from_cochain(c).items():
            n = p + q + X.weight(lvl, i)
            if not 0 <= n <= window.N:
                raise ValueError(f"degree {n} falls outside the window")
            pos = window.position(n, p, q, i)
            if pos is None:
                raise ValueError(
                    f"entry {X.label(lvl, i)} missing from the window at "
                    f"degree {n}; check masks and caps")
            acc = out.setdefault(n, {})
            acc[pos] = acc.get(pos, ZERO) + coeff
    return {n: {k: v for k, v in vec.items() if v}
            for n, vec in out.items() if any(vec.values())}
