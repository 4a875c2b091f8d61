"""Cyclic objects and finite windows of their mixed total complex.

A cyclic object here is a cosimplicial Q-module with a cyclic symmetry, an
internal degree ("weight") on each level, and optionally an internal
differential commuting with all structure maps.  Faces go up one level,
degeneracies down one, the cyclic operator tau fixes the level and satisfies
tau^(n+1) = id on level n.

From the generators we assemble the Hochschild coboundary b, the degree -1
operator B (signed norm, extra degeneracy, one minus the inverse signed
cyclic shift), and finite windows of the total complex whose slots (p, q)
with p >= q >= 0 hold level p-q in total degree p + q + weight.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import (SparseMatrix, cohomology_dim, cohomology_representatives)
from .util import ONE, Report, sign_pow, vaddto, vscale, vsub


class CyclicObject:
    """Base class: subclasses supply vector-level structure maps; matrices,
    b, B and windows are derived here and cached."""

    name = "?"
    has_diff = False
    needs_weight_cap = False

    def __init__(self):
        self._cache: dict = {}

    # -- subclass interface --------------------------------------------------

    def dim(self, n: int) -> int:
        raise NotImplementedError

    def label(self, n: int, i: int) -> str:
        return f"x{i}@{n}"

    def weight(self, n: int, i: int) -> int:
        return 0

    def apply_face(self, n: int, i: int, vec: dict) -> dict:
        raise NotImplementedError

    def apply_degen(self, n: int, i: int, vec: dict) -> dict:
        raise NotImplementedError

    def apply_tau(self, n: int, vec: dict) -> dict:
        raise NotImplementedError

    def apply_diff(self, n: int, vec: dict) -> dict:
        return {}

    def normalized_mask(self, n: int):
        """Per-basis booleans spanning the normalized part, or None if the
        normalized part is not spanned by basis vectors."""
        return None

    # -- derived vector operations -------------------------------------------

    def apply_b(self, n: int, vec: dict) -> dict:
        """Alternating face sum, level n -> n+1."""
        out: dict = {}
        for j in range(n + 2):
            vaddto(out, Fraction(sign_pow(j)), self.apply_face(n, j, vec))
        return out

    def apply_lambda_inv(self, n: int, vec: dict) -> dict:
        """Inverse of the signed cyclic shift (-1)^n tau_n."""
        w = vec
        for _ in range(n):
            w = self.apply_tau(n, w)
        return vscale(Fraction(sign_pow(n)), w)

    def apply_B(self, n: int, vec: dict) -> dict:
        """Level n -> n-1: signed norm after extra degeneracy after
        (1 - inverse signed shift)."""
        if n == 0:
            return {}
        w = vsub(vec, self.apply_lambda_inv(n, vec))
        w = self.apply_tau(n, w)
        w = self.apply_degen(n, n - 1, w)
        out: dict = {}
        cur = w
        for j in range(n):
            vaddto(out, Fraction(sign_pow((n - 1) * j)), cur)
            if j < n - 1:
                cur = self.apply_tau(n - 1, cur)
        return out

    # -- cached matrices -----------------------------------------------------

    def _op_matrix(self, key, rows: int, src: int, fn) -> SparseMatrix:
        m = self._cache.get(key)
        if m is None:
            cols = (fn({i: ONE}) for i in range(self.dim(src)))
            m = SparseMatrix.from_columns(rows, cols)
            self._cache[key] = m
        return m

    def face_matrix(self, n: int, i: int) -> SparseMatrix:
        if not 0 <= i <= n + 1:
            raise IndexError(f"face {i} out of range at level {n}")
        return self._op_matrix(("face", n, i), self.dim(n + 1), n,
                               lambda v: self.apply_face(n, i, v))

    def degen_matrix(self, n: int, i: int) -> SparseMatrix:
        if not (n >= 1 and 0 <= i <= n - 1):
            raise IndexError(f"degeneracy {i} out of range at level {n}")
        return self._op_matrix(("degen", n, i), self.dim(n - 1), n,
                               lambda v: self.apply_degen(n, i, v))

    def tau_matrix(self, n: int) -> SparseMatrix:
        return self._op_matrix(("tau", n), self.dim(n), n,
                               lambda v: self.apply_tau(n, v))

    def diff_matrix(self, n: int) -> SparseMatrix:
        return self._op_matrix(("diff", n), self.dim(n), n,
                               lambda v: self.apply_diff(n, v))

    def b_matrix(self, n: int) -> SparseMatrix:
        return self._op_matrix(("b", n), self.dim(n + 1), n,
                               lambda v: self.apply_b(n, v))

    def B_matrix(self, n: int) -> SparseMatrix:
        if n < 1:
            raise IndexError("B needs level >= 1")
        return self._op_matrix(("B", n), self.dim(n - 1), n,
                               lambda v: self.apply_B(n, v))


def check_cyclic_axioms(X: CyclicObject, n_max: int, check_diff: bool = True) -> Report:
    """Verify every cosimplicial, cyclic and differential identity whose
    composites stay within levels 0..n_max, plus the derived b/B relations."""
    rep = Report(f"cyclic axioms: {X.name} through level {n_max}")

    def eq(name, lhs, rhs, src, dst):
        w = (lhs - rhs).nonzero_witness()
        if w is None:
            return rep.record(name, True)
        (r, c), val = w
        return rep.record(
            name, False,
            f"mismatch {val} at ({X.label(dst, r)} <- {X.label(src, c)})")

    def zero(name, m, src, dst):
        w = m.nonzero_witness()
        if w is None:
            return rep.record(name, True)
        (r, c), val = w
        return rep.record(
            name, False,
            f"nonzero {val} at ({X.label(dst, r)} <- {X.label(src, c)})")

    # coface exchange: d_j d_i = d_i d_{j-1} for i < j
    for n in range(n_max - 1):
        for i in range(n + 2):
            for j in range(i + 1, n + 3):
                eq(f"coface exchange d{j} d{i} from level {n}",
                   X.face_matrix(n + 1, j) @ X.face_matrix(n, i),
                   X.face_matrix(n + 1, i) @ X.face_matrix(n, j - 1),
                   n, n + 2)

    # codegeneracy exchange: s_j s_i = s_i s_{j+1} for i <= j
    for n in range(n_max - 1):
        for i in range(n + 1):
            for j in range(i, n + 1):
                eq(f"codegeneracy exchange s{j} s{i} from level {n + 2}",
                   X.degen_matrix(n + 1, j) @ X.degen_matrix(n + 2, i),
                   X.degen_matrix(n + 1, i) @ X.degen_matrix(n + 2, j + 1),
                   n + 2, n)

    # mixed: s_j d_i
    for n in range(n_max):
        for i in range(n + 2):
            for j in range(n + 1):
                lhs = X.degen_matrix(n + 1, j) @ X.face_matrix(n, i)
                if i in (j, j + 1):
                    eq(f"s{j} d{i} = id from level {n}",
                       lhs, SparseMatrix.identity(X.dim(n)), n, n)
                elif i < j:
                    eq(f"s{j} d{i} exchange from level {n}",
                       lhs, X.face_matrix(n - 1, i) @ X.degen_matrix(n, j - 1),
                       n, n)
                else:
                    eq(f"s{j} d{i} exchange from level {n}",
                       lhs, X.face_matrix(n - 1, i - 1) @ X.degen_matrix(n, j),
                       n, n)

    # cyclic order: tau^(n+1) = id
    for n in range(n_max + 1):
        power = SparseMatrix.identity(X.dim(n))
        for _ in range(n + 1):
            power = X.tau_matrix(n) @ power
        eq(f"tau order at level {n}", power, SparseMatrix.identity(X.dim(n)), n, n)

    # cyclic vs faces: tau d_i = d_{i-1} tau (i >= 1), tau d_0 = d_last
    for n in range(n_max):
        eq(f"tau d0 from level {n}",
           X.tau_matrix(n + 1) @ X.face_matrix(n, 0), X.face_matrix(n, n + 1),
           n, n + 1)
        for i in range(1, n + 2):
            eq(f"tau d{i} from level {n}",
               X.tau_matrix(n + 1) @ X.face_matrix(n, i),
               X.face_matrix(n, i - 1) @ X.tau_matrix(n), n, n + 1)

    # cyclic vs degeneracies: tau s_i = s_{i-1} tau (i >= 1), tau s_0 = s_last tau^2
    for n in range(n_max):
        eq(f"tau s0 from level {n + 1}",
           X.tau_matrix(n) @ X.degen_matrix(n + 1, 0),
           X.degen_matrix(n + 1, n) @ X.tau_matrix(n + 1) @ X.tau_matrix(n + 1),
           n + 1, n)
        for i in range(1, n + 1):
            eq(f"tau s{i} from level {n + 1}",
               X.tau_matrix(n) @ X.degen_matrix(n + 1, i),
               X.degen_matrix(n + 1, i - 1) @ X.tau_matrix(n + 1), n + 1, n)

    # weights: faces, tau preserve; degeneracies preserve; diff raises by 1
    for n in range(n_max + 1):
        ok = True
        witness = None
        gens = [("tau", 0, X.tau_matrix(n), n)]
        if n <= n_max - 1:
            gens += [(f"d{i}", 0, X.face_matrix(n, i), n + 1) for i in range(n + 2)]
        if n >= 1:
            gens += [(f"s{i}", 0, X.degen_matrix(n, i), n - 1) for i in range(n)]
        if X.has_diff:
            gens.append(("diff", 1, X.diff_matrix(n), n))
        for gname, shift, m, dst in gens:
            for (r, c) in m.entries:
                if X.weight(dst, r) != X.weight(n, c) + shift:
                    ok = False
                    witness = (f"{gname} sends {X.label(n, c)} (weight {X.weight(n, c)}) "
                               f"to {X.label(dst, r)} (weight {X.weight(dst, r)})")
                    break
            if not ok:
                break
        rep.record(f"weights respected at level {n}", ok, witness)

    if X.has_diff and check_diff:
        for n in range(n_max + 1):
            zero(f"diff squared at level {n}",
                 X.diff_matrix(n) @ X.diff_matrix(n), n, n)
            eq(f"diff vs tau at level {n}",
               X.diff_matrix(n) @ X.tau_matrix(n),
               X.tau_matrix(n) @ X.diff_matrix(n), n, n)
        for n in range(n_max):
            for i in range(n + 2):
                eq(f"diff vs d{i} from level {n}",
                   X.diff_matrix(n + 1) @ X.face_matrix(n, i),
                   X.face_matrix(n, i) @ X.diff_matrix(n), n, n + 1)
            for i in range(n + 1):
                eq(f"diff vs s{i} from level {n + 1}",
                   X.diff_matrix(n) @ X.degen_matrix(n + 1, i),
                   X.degen_matrix(n + 1, i) @ X.diff_matrix(n + 1), n + 1, n)

    # derived operators
    for n in range(n_max - 1):
        zero(f"b squared from level {n}",
             X.b_matrix(n + 1) @ X.b_matrix(n), n, n + 2)
    for n in range(2, n_max + 1):
        zero(f"B squared from level {n}",
             X.B_matrix(n - 1) @ X.B_matrix(n), n, n - 2)
    for n in range(n_max):
        anti = X.B_matrix(n + 1) @ X.b_matrix(n)
        if n >= 1:
            anti = anti + X.b_matrix(n - 1) @ X.B_matrix(n)
        zero(f"bB + Bb at level {n}", anti, n, n)
    return rep


class ComplexWindow:
    """Total degrees 0..N of the mixed complex of a cyclic object.

    Slots (p, q) with p >= q >= 0 carry level p-q; a basis vector of weight w
    sits in total degree p + q + w.  The boundary is b (slot (p+1, q)) plus B
    (slot (p, q+1)) plus, when present, the internal differential signed by
    the level parity (same slot).  shape="hochschild" keeps only the q = 0
    column and drops B.
    """

    def __init__(self, X: CyclicObject, N: int, shape: str = "cyclic",
                 normalized: bool = False, weight_cap=None):
        if shape not in ("cyclic", "hochschild"):
            raise ValueError(f"unknown window shape {shape!r}")
        if N < 1:
            raise ValueError("window needs N >= 1")
        if X.needs_weight_cap and weight_cap is None:
            raise ValueError(
                f"{X.name}: positive-degree entries make every total degree "
                "infinite dimensional; pass weight_cap to truncate")
        self.X = X
        self.N = N
        self.shape = shape
        self.normalized = normalized
        self.weight_cap = weight_cap
        self._masks: dict[int, list] = {}
        self._basis: dict[int, list] = {}
        self._index: dict[int, dict] = {}
        self._bnd: dict[int, SparseMatrix] = {}
        k_pad = weight_cap if (weight_cap is not None and X.needs_weight_cap) else 0
        for n in range(N + 1):
            items = []
            for k in range(n + k_pad + 1):
                mask = self._mask(k)
                for i in range(X.dim(k)):
                    if mask is not None and not mask[i]:
                        continue
                    w = X.weight(k, i)
                    if weight_cap is not None and abs(w) > weight_cap:
                        continue
                    rem = n - w - k
                    if rem < 0 or rem % 2:
                        continue
                    q = rem // 2
                    if shape == "hochschild" and q != 0:
                        continue
                    items.append((q + k, q, i))
            items.sort()
            self._basis[n] = items
            self._index[n] = {key: pos for pos, key in enumerate(items)}

    def _mask(self, k: int):
        if not self.normalized:
            return None
        if k not in self._masks:
            mask = self.X.normalized_mask(k)
            if mask is None:
                raise ValueError(
                    f"{self.X.name}: normalized basis not available at level {k}")
            self._masks[k] = mask
        return self._masks[k]

    def basis(self, n: int) -> list:
        self._check_degree(n)
        return self._basis[n]

    def dim(self, n: int) -> int:
        self._check_degree(n)
        return len(self._basis[n])

    def slot_dims(self, n: int) -> dict:
        self._check_degree(n)
        out: dict = {}
        for (p, q, _i) in self._basis[n]:
            out[p, q] = out.get((p, q), 0) + 1
        return out

    def label(self, n: int, pos: int) -> str:
        p, q, i = self._basis[n][pos]
        return f"({p},{q}):{self.X.label(p - q, i)}"

    def position(self, n: int, p: int, q: int, i: int):
        """Position of slot entry (p, q, i) in the degree-n basis, or None."""
        self._check_degree(n)
        return self._index[n].get((p, q, i))

    def _check_degree(self, n: int) -> None:
        if not 0 <= n <= self.N:
            raise ValueError(f"degree {n} outside window 0..{self.N}")

    def _push(self, out_col: dict, n_tgt: int, slot_key, vec: dict, sign=1) -> None:
        idx = self._index[n_tgt]
        p, q = slot_key
        for i, c in vec.items():
            pos = idx.get((p, q, i))
            if pos is None:
                if (self.weight_cap is not None
                        and abs(self.X.weight(p - q, i)) > self.weight_cap):
                    continue  # truncation quotient: high-weight images die
                raise AssertionError(
                    f"operator image left the window at degree {n_tgt}, slot "
                    f"({p},{q}), basis {self.X.label(p - q, i)}")
            w = out_col.get(pos, Fraction(0)) + sign * c
            if w:
                out_col[pos] = w
            else:
                del out_col[pos]

    def boundary(self, n: int) -> SparseMatrix:
        """Total differential T^n -> T^(n+1); needs n <= N-1."""
        self._check_degree(n)
        if n > self.N - 1:
            raise ValueError(f"window too small: no boundary out of degree {self.N}")
        m = self._bnd.get(n)
        if m is not None:
            return m
        X = self.X
        cols = []
        for (p, q, i) in self._basis[n]:
            k = p - q
            v = {i: ONE}
            col: dict = {}
            self._push(col, n + 1, (p + 1, q), X.apply_b(k, v))
            if self.shape == "cyclic" and k >= 1:
                self._push(col, n + 1, (p, q + 1), X.apply_B(k, v))
            if X.has_diff:
                self._push(col, n + 1, (p, q), X.apply_diff(k, v),
                           sign=sign_pow(k))
            cols.append(col)
        m = SparseMatrix.from_columns(len(self._basis[n + 1]), cols)
        self._bnd[n] = m
        return m

    def cohomology_dim(self, n: int) -> int:
        """Needs n <= N-1 so the outgoing boundary exists in the window."""
        d_out = self.boundary(n)
        d_in = (self.boundary(n - 1) if n >= 1
                else SparseMatrix.zeros(self.dim(0), 0))
        return cohomology_dim(d_in, d_out)

    def representatives(self, n: int) -> list:
        d_out = self.boundary(n)
        d_in = (self.boundary(n - 1) if n >= 1
                else SparseMatrix.zeros(self.dim(0), 0))
        return cohomology_representatives(d_in, d_out)

    def shift_matrix(self, n: int) -> SparseMatrix:
        """Periodicity shift T^n -> T^(n+2), slot (p,q) to (p+1,q+1)."""
        self._check_degree(n)
        if n > self.N - 2:
            raise ValueError("window too small for the periodicity shift")
        idx = self._index[n + 2]
        m = SparseMatrix(len(self._basis[n + 2]), len(self._basis[n]))
        for pos, (p, q, i) in enumerate(self._basis[n]):
            tgt = idx.get((p + 1, q + 1, i))
            if tgt is None:
                raise AssertionError("shift image missing from window")
            m[tgt, pos] = ONE
        return m

    def show_vector(self, n: int, vec: dict) -> str:
        from .util import format_rational
        if not vec:
            return "0"
        parts = []
        for pos in sorted(vec):
            c = vec[pos]
            coef = "" if c == 1 else f"{format_rational(c)}*"
            parts.append(f"{coef}{self.label(n, pos)}")
        return " + ".join(parts)


def assemble_window(X: CyclicObject, N: int, shape: str = "cyclic",
                    normalized: bool = False, weight_cap=None) -> ComplexWindow:
    return ComplexWindow(X, N, shape=shape, normalized=normalized,
                         weight_cap=weight_cap)


def truncate_window(window: ComplexWindow, cap: int) -> ComplexWindow:
    """Rebuild a window keeping only |weight| <= cap.

    When the internal differential raises weight this is the quotient by the
    high-weight part; when it lowers weight it is the subcomplex.  Either
    way the images that leave the kept range are dropped, which is exactly
    what _push does.
    """
    if cap < 0:
        raise ValueError("truncation cap must be >= 0")
    if window.weight_cap is not None and cap > window.weight_cap:
        raise ValueError(
            f"window already truncated at {window.weight_cap}; cannot widen to {cap}")
    return ComplexWindow(window.X, window.N, shape=window.shape,
                         normalized=window.normalized, weight_cap=cap)


def hc_dimensions(X: CyclicObject, N: int, normalized: bool = False,
                  weight_cap=None) -> list[int]:
    """Cyclic cohomology dimensions in degrees 0..N-1."""
    win = assemble_window(X, N, normalized=normalized, weight_cap=weight_cap)
    return [win.cohomology_dim(n) for n in range(N)]


def hh_dimensions(X: CyclicObject, N: int, normalized: bool = False,
                  weight_cap=None) -> list[int]:
    """Hochschild cohomology dimensions in degrees 0..N-1 (b column only)."""
    win = assemble_window(X, N, shape="hochschild", normalized=normalized,
                          weight_cap=weight_cap)
    return [win.cohomology_dim(n) for n in range(N)]


def shift_induced_rank(window: ComplexWindow, n: int) -> int:
    """Rank of the map the periodicity shift induces from cohomology in
    degree n to cohomology in degree n+2."""
    reps = window.representatives(n)
    S = window.shift_matrix(n)
    d_in = (window.boundary(n + 1) if n + 1 >= 0 else None)
    base = SparseMatrix.from_columns(window.dim(n + 2), d_in.columns())
    with_shift = SparseMatrix.from_columns(
        window.dim(n + 2), d_in.columns() + [S.apply(v) for v in reps])
    return with_shift.rank() - base.rank()


def hp_dimensions(X: CyclicObject, N: int, normalized: bool = False,
                  weight_cap=None) -> dict:
    """Stabilized periodic dimensions from the top of a window.

    For each parity, reports the top cyclic dimension in the window together
    with a flag: True when the dimension agrees two degrees down and the
    periodicity shift induces an isomorphism between them.
    """
    if N < 5:
        raise ValueError("stabilization check needs N >= 5")
    win = assemble_window(X, N, normalized=normalized, weight_cap=weight_cap)
    out = {}
    for parity in (0, 1):
        n_top = N - 1 if (N - 1) % 2 == parity else N - 2
        d_top = win.cohomology_dim(n_top)
        d_low = win.cohomology_dim(n_top - 2)
        stab = (d_top == d_low and shift_induced_rank(win, n_top - 2) == d_top)
        out["even" if parity == 0 else "odd"] = (d_top, stab)
    return out
