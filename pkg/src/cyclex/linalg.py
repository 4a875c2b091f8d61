"""Sparse exact linear algebra over the rationals.

A SparseMatrix with shape (rows, cols) represents a linear map from Q^cols to
Q^rows.  Vectors are sparse dicts index -> Fraction; zero entries are never
stored.  All arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction

from .util import ONE, vadd, vscale

Vec = dict[int, Fraction]

_STRATEGIES = ("low", "high")


class SparseMatrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimension")
        self.rows = rows
        self.cols = cols
        self.entries: dict[tuple[int, int], Fraction] = {}
        if entries:
            for (r, c), v in entries.items():
                self[r, c] = v

    @classmethod
    def from_rows(cls, data) -> "SparseMatrix":
        data = [list(row) for row in data]
        rows = len(data)
        cols = len(data[0]) if data else 0
        m = cls(rows, cols)
        for r, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for c, v in enumerate(row):
                m[r, c] = Fraction(v)
        return m

    @classmethod
    def from_columns(cls, rows: int, columns) -> "SparseMatrix":
        """Build from an iterable of sparse column vectors."""
        columns = list(columns)
        m = cls(rows, len(columns))
        for c, col in enumerate(columns):
            for r, v in col.items():
                m[r, c] = v
        return m

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        m = cls(n, n)
        for i in range(n):
            m.entries[i, i] = ONE
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols)

    def __getitem__(self, key) -> Fraction:
        return self.entries.get(key, Fraction(0))

    def __setitem__(self, key, value) -> None:
        r, c = key
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(f"entry {key} outside {self.rows}x{self.cols}")
        value = Fraction(value)
        if value:
            self.entries[r, c] = value
        else:
            self.entries.pop((r, c), None)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SparseMatrix)
                and self.rows == other.rows and self.cols == other.cols
                and self.entries == other.entries)

    def __repr__(self):
        return f"<SparseMatrix {self.rows}x{self.cols}, {len(self.entries)} nonzero>"

    def copy(self) -> "SparseMatrix":
        m = SparseMatrix(self.rows, self.cols)
        m.entries = dict(self.entries)
        return m

    def column(self, j: int) -> Vec:
        if not 0 <= j < self.cols:
            raise IndexError(j)
        return {r: v for (r, c), v in self.entries.items() if c == j}

    def columns(self) -> list[Vec]:
        cols: list[Vec] = [{} for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def transpose(self) -> "SparseMatrix":
        m = SparseMatrix(self.cols, self.rows)
        m.entries = {(c, r): v for (r, c), v in self.entries.items()}
        return m

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        self._shape_match(other)
        m = self.copy()
        for key, v in other.entries.items():
            w = m.entries.get(key, Fraction(0)) + v
            if w:
                m.entries[key] = w
            else:
                m.entries.pop(key, None)
        return m

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + other.scale(-1)

    def __neg__(self) -> "SparseMatrix":
        return self.scale(-1)

    def scale(self, c) -> "SparseMatrix":
        c = Fraction(c)
        m = SparseMatrix(self.rows, self.cols)
        if c:
            m.entries = {key: c * v for key, v in self.entries.items()}
        return m

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        return SparseMatrix.from_columns(self.rows, (self.apply(c) for c in other.columns()))

    def apply(self, vec: Vec) -> Vec:
        """Matrix-vector product; vec is indexed by columns."""
        out: Vec = {}
        for (r, c), a in self.entries.items():
            x = vec.get(c)
            if x:
                w = out.get(r, Fraction(0)) + a * x
                if w:
                    out[r] = w
                else:
                    del out[r]
        return out

    def set_block(self, row_off: int, col_off: int, block: "SparseMatrix") -> None:
        for (r, c), v in block.entries.items():
            self[row_off + r, col_off + c] = v

    def is_zero(self) -> bool:
        return not self.entries

    def nonzero_witness(self):
        """((row, col), value) of some nonzero entry, or None."""
        if not self.entries:
            return None
        key = min(self.entries)
        return key, self.entries[key]

    def _shape_match(self, other) -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    # -- elimination ---------------------------------------------------------

    def _reduce_columns(self, strategy: str = "low"):
        """Column-style Gaussian elimination.

        Returns (pivots, kernel) where pivots maps a leading row index to a
        pair (reduced column, combination of original columns producing it)
        and kernel lists combination vectors of columns that reduced to zero.
        The strategy picks which row index of a column leads: its minimum
        ("low") or maximum ("high").
        """
        if strategy not in _STRATEGIES:
            raise ValueError(f"unknown pivot strategy {strategy!r}")
        lead = min if strategy == "low" else max
        pivots: dict[int, tuple[Vec, Vec]] = {}
        kernel: list[Vec] = []
        for j, col in enumerate(self.columns()):
            v = dict(col)
            comb: Vec = {j: ONE}
            while v:
                i = lead(v)
                hit = pivots.get(i)
                if hit is None:
                    inv = ONE / v[i]
                    pivots[i] = (vscale(inv, v), vscale(inv, comb))
                    break
                pv, pc = hit
                c = -v[i]
                v = vadd(v, vscale(c, pv))
                comb = vadd(comb, vscale(c, pc))
            else:
                kernel.append(comb)
        return pivots, kernel

    def rank_nullity(self, strategy: str = "low") -> tuple[int, int]:
        pivots, kernel = self._reduce_columns(strategy)
        return len(pivots), len(kernel)

    def rank(self, strategy: str = "low") -> int:
        return self.rank_nullity(strategy)[0]

    def kernel_basis(self, strategy: str = "low") -> list[Vec]:
        """Sparse vectors spanning the kernel; applying the matrix gives zero."""
        return self._reduce_columns(strategy)[1]

    def solve(self, rhs: Vec, strategy: str = "low"):
        """One solution x of self @ x = rhs, or None if inconsistent."""
        if strategy not in _STRATEGIES:
            raise ValueError(f"unknown pivot strategy {strategy!r}")
        lead = min if strategy == "low" else max
        pivots, _ = self._reduce_columns(strategy)
        v = {k: Fraction(val) for k, val in rhs.items() if val}
        for k in v:
            if not 0 <= k < self.rows:
                raise IndexError(f"rhs index {k} outside 0..{self.rows - 1}")
        x: Vec = {}
        while v:
            i = lead(v)
            hit = pivots.get(i)
            if hit is None:
                return None
            pv, pc = hit
            c = v[i]
            v = vadd(v, vscale(-c, pv))
            x = vadd(x, vscale(c, pc))
        return x


def _require_complex(d_in: SparseMatrix, d_out: SparseMatrix) -> None:
    if d_in.rows != d_out.cols:
        raise ValueError(
            f"middle dimensions differ: d_in lands in Q^{d_in.rows}, d_out eats Q^{d_out.cols}")
    w = (d_out @ d_in).nonzero_witness()
    if w is not None:
        (r, c), val = w
        raise ValueError(f"not a complex: (d_out . d_in)[{r},{c}] = {val}")


def cohomology_dim(d_in: SparseMatrix, d_out: SparseMatrix) -> int:
    """dim ker(d_out) - rank(d_in) after verifying d_out . d_in = 0."""
    _require_complex(d_in, d_out)
    _, null_out = d_out.rank_nullity()
    rank_in, _ = d_in.rank_nullity()
    return null_out - rank_in


def cohomology_representatives(d_in: SparseMatrix, d_out: SparseMatrix) -> list[Vec]:
    """A basis of ker(d_out) modulo im(d_in), as sparse middle-space vectors.

    Each representative lies in ker(d_out) by construction (kernel vectors
    reduced against image columns and earlier representatives, all of which
    are themselves cocycles).
    """
    _require_complex(d_in, d_out)
    pivots: dict[int, Vec] = {}

    def sift(v: Vec):
        v = dict(v)
        while v:
            i = min(v)
            hit = pivots.get(i)
            if hit is None:
                return vscale(ONE / v[i], v), i
            v = vadd(v, vscale(-v[i], hit))
        return v, None

    for col in d_in.columns():
        v, i = sift(col)
        if i is not None:
            pivots[i] = v
    reps: list[Vec] = []
    for k in d_out.kernel_basis():
        v, i = sift(k)
        if i is not None:
            pivots[i] = v
            reps.append(v)
    return reps
