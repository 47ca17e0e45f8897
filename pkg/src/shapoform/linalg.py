"""Exact linear algebra over Q(q, z).

Vectors are plain ``dict[int, ScalarRational]`` (zero entries are never stored).
:class:`SparseMatrix` stores columns as such dicts.  Dense helpers operate on
lists of rows; inversion uses one-step fraction-free (Bareiss) Gauss-Jordan
elimination after clearing row denominators.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .scalars import ONE, ZERO, ScalarRational, _ONE_POLY

Vec = dict


class SingularMatrixError(ArithmeticError):
    pass


# -- vectors -----------------------------------------------------------

def vadd(a: Vec, b: Vec) -> Vec:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k)
        if s is None:
            out[k] = v
        else:
            s = s + v
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def vaxpy(out: Vec, c: ScalarRational, b: Vec) -> None:
    """In place ``out += c * b``."""
    if not c:
        return
    one = c.is_one()
    for k, v in b.items():
        t = v if one else c * v
        s = out.get(k)
        if s is None:
            out[k] = t
        else:
            s = s + t
            if s:
                out[k] = s
            else:
                del out[k]


def vscale(c: ScalarRational, a: Vec) -> Vec:
    if not c:
        return {}
    if c.is_one():
        return dict(a)
    return {k: c * v for k, v in a.items()}


def vsub(a: Vec, b: Vec) -> Vec:
    return vadd(a, {k: -v for k, v in b.items()})


def vsum(vecs: Iterable[Vec]) -> Vec:
    out: Vec = {}
    for v in vecs:
        vaxpy(out, ONE, v)
    return out


# -- sparse matrices ---------------------------------------------------

class SparseMatrix:
    """Column-major sparse matrix over Q(q, z)."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: dict | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = {c: dict(col) for c, col in (cols or {}).items() if col}

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {i: {i: ONE} for i in range(n)})

    @classmethod
    def from_entries(cls, nrows, ncols, entries: dict) -> "SparseMatrix":
        cols: dict = {}
        for (r, c), v in entries.items():
            if v:
                cols.setdefault(c, {})[r] = v
        return cls(nrows, ncols, cols)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[ScalarRational]]) -> "SparseMatrix":
        n = len(rows)
        m = len(rows[0]) if n else 0
        return cls.from_entries(n, m, {(i, j): rows[i][j] for i in range(n) for j in range(m)})

    def entry(self, r: int, c: int) -> ScalarRational:
        return self.cols.get(c, {}).get(r, ZERO)

    def entries(self):
        for c, col in self.cols.items():
            for r, v in col.items():
                yield (r, c), v

    def column(self, c: int) -> Vec:
        return self.cols.get(c, {})

    def apply(self, vec: Vec) -> Vec:
        out: Vec = {}
        for c, x in vec.items():
            col = self.cols.get(c)
            if col:
                vaxpy(out, x, col)
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        return SparseMatrix(self.nrows, other.ncols, {c: self.apply(col) for c, col in other.cols.items()})

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        cols = {c: dict(col) for c, col in self.cols.items()}
        for c, col in other.cols.items():
            cols[c] = vadd(cols.get(c, {}), col)
        return SparseMatrix(self.nrows, self.ncols, cols)

    def __neg__(self):
        return SparseMatrix(self.nrows, self.ncols, {c: {r: -v for r, v in col.items()} for c, col in self.cols.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s: ScalarRational) -> "SparseMatrix":
        return SparseMatrix(self.nrows, self.ncols, {c: vscale(s, col) for c, col in self.cols.items()})

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix.from_entries(self.ncols, self.nrows, {(c, r): v for (r, c), v in self.entries()})

    def is_zero(self) -> bool:
        return not any(self.cols.values())

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and (self - other).is_zero()

    def to_dense(self) -> list[list[ScalarRational]]:
        rows = [[ZERO] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.entries():
            rows[r][c] = v
        return rows

    def nnz(self) -> int:
        return sum(len(col) for col in self.cols.values())

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


# -- dense helpers -----------------------------------------------------

def identity(n: int) -> list[list[ScalarRational]]:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def matmul(a, b):
    n, m = len(a), len(b[0]) if b else 0
    k = len(b)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = ZERO
            for t in range(k):
                if a[i][t] and b[t][j]:
                    s = s + a[i][t] * b[t][j]
            row.append(s)
        out.append(row)
    return out


def is_identity(a) -> bool:
    return all((a[i][j].is_one() if i == j else a[i][j].is_zero()) for i in range(len(a)) for j in range(len(a[i])))


def _row_multiplier(row: Sequence[ScalarRational]) -> ScalarRational:
    """Polynomial multiplier clearing every denominator and negative power in ``row``."""
    lcm = _ONE_POLY
    low = None
    for x in row:
        if not x:
            continue
        if not x.den.is_one():
            g = lcm.gcd(x.den)
            lcm = lcm * (x.den / g)
        low = x.shift if low is None else tuple(min(a, b) for a, b in zip(low, x.shift))
    if low is None:
        return ONE
    shift = tuple(-min(0, e) for e in low)
    return ScalarRational(lcm, _ONE_POLY, shift, _canonical=True) if not lcm.is_zero() else ONE


def bareiss_gauss_jordan(rows: list[list[ScalarRational]], ncols_left: int):
    """One-step fraction-free Gauss-Jordan on the left ``ncols_left`` columns.

    Returns ``(rows, det, sign)`` where on success the left block equals ``det * I``
    (up to the row-swap sign folded into ``det``).
    """
    n = len(rows)
    m = [list(r) for r in rows]
    prev = ONE
    sign = 1
    for k in range(ncols_left):
        p = next((i for i in range(k, n) if m[i][k]), None)
        if p is None:
            raise SingularMatrixError(f"matrix is singular (no pivot in column {k})")
        if p != k:
            m[k], m[p] = m[p], m[k]
            sign = -sign
        pk = m[k][k]
        rowk = m[k]
        for i in range(n):
            if i == k:
                continue
            mi = m[i]
            a = mi[k]
            new = []
            for j in range(len(mi)):
                if j == k:
                    new.append(ZERO)
                    continue
                t = pk * mi[j] if mi[j] else ZERO
                if a and rowk[j]:
                    t = t - a * rowk[j]
                new.append(t / prev if t and not prev.is_one() else t)
            m[i] = new
        prev = pk
    return m, prev, sign


def det(a: Sequence[Sequence[ScalarRational]]) -> ScalarRational:
    n = len(a)
    if n == 0:
        return ONE
    mults = [_row_multiplier(r) for r in a]
    rows = [[mu * x for x in r] for mu, r in zip(mults, a)]
    try:
        _, d, sign = bareiss_gauss_jordan(rows, n)
    except SingularMatrixError:
        return ZERO
    total = ONE
    for mu in mults:
        total = total * mu
    return (d / total) if sign > 0 else -(d / total)


def inverse(a: Sequence[Sequence[ScalarRational]]) -> list[list[ScalarRational]]:
    """Exact inverse via fraction-free Gauss-Jordan on ``[D A | D]``."""
    n = len(a)
    if n == 0:
        return []
    aug = []
    for i, r in enumerate(a):
        mu = _row_multiplier(r)
        aug.append([mu * x for x in r] + [mu if j == i else ZERO for j in range(n)])
    m, d, _ = bareiss_gauss_jordan(aug, n)
    out = []
    for i in range(n):
        piv = m[i][i]
        out.append([x / piv if x else ZERO for x in m[i][n:]])
    return out


def rref(rows: list[list[ScalarRational]], ncols: int | None = None):
    """Reduced row echelon form over the field. Returns ``(rows, pivot_columns)``."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv if x else ZERO for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y if y else x for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def solve(a, b_cols):
    """Solve ``A X = B`` for square nonsingular ``A``; ``b_cols`` is a list of column vectors."""
    inv = inverse(a)
    return [[sum_products(inv[i], col) for i in range(len(inv))] for col in b_cols]


def sum_products(xs, ys) -> ScalarRational:
    s = ZERO
    for x, y in zip(xs, ys):
        if x and y:
            s = s + x * y
    return s


def sparse_rank(vectors: Sequence[Vec]) -> int:
    """Rank of a family of sparse vectors (incremental elimination)."""
    basis: dict = {}  # pivot key -> normalized vector
    r = 0
    for v in vectors:
        w = dict(v)
        for key in sorted(basis):
            if key in w:
                vaxpy(w, -w[key], basis[key])
        if not w:
            continue
        key = min(w)
        inv = w[key].inverse()
        w = {k: x * inv for k, x in w.items()}
        for k2 in list(basis):
            if key in basis[k2]:
                vaxpy(basis[k2], -basis[k2][key], w)
        basis[key] = w
        r += 1
    return r
