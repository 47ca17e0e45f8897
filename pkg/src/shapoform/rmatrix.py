"""Quasi-R-matrix and the tensor F on a pair of modules ``V (x) M_lam``.

The second legs of ``Rhat = q^{-h.h} R`` lie in U_q(n_-), so each entry
``Rhat_ij`` is pinned down by the vector ``Rhat_ij 1_lam`` in the (free) Verma
module.  Those vectors are found degree by degree from the intertwining
identity evaluated on ``v_j (x) 1_lam``; at generic weight the joint kernel of
all ``e_a`` on a lower weight space is zero, so every step has a unique solution.
Full operators on ``M`` are then recovered by left multiplication in U_q(n_-).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .linalg import SparseMatrix, Vec, inverse, rref, vaxpy, vscale
from .scalars import ONE, Q_DIFF, ZERO, ScalarRational, q_factorial, q_int
from .uqmodules import TruncationError, WeightModule


class RecursionError_(ArithmeticError):
    """The degree-by-degree linear system had no unique solution."""


def _diff(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _nonneg(mu) -> bool:
    return all(x >= 0 for x in mu)


class GradedTensorOperator:
    """Weight-graded element of ``End(V) (x) U_q(n_-)`` restricted to ``V (x) M``.

    ``entries[(i, j)]`` is the second-leg element applied to ``1_lam``, a vector of
    ``M`` of weight ``lam - (eps_i - eps_j)``.  Missing entries are zero.
    """

    def __init__(self, V: WeightModule, M: WeightModule, entries: dict, kind: str,
                 max_height: int, diagonal: ScalarRational = ZERO):
        self.V = V
        self.M = M
        self.entries = {k: v for k, v in entries.items() if v}
        self.kind = kind
        self.max_height = max_height
        self.diagonal = diagonal  # coefficient of the identity component

    def weight_drop(self, i: int, j: int) -> tuple[int, ...]:
        return _diff(self.V.gamma[i], self.V.gamma[j])

    def on_highest(self, i: int, j: int) -> Vec:
        return self.entries.get((i, j), {})

    def component(self, mu) -> dict:
        mu = tuple(mu)
        return {ij: v for ij, v in self.entries.items() if self.weight_drop(*ij) == mu}

    def heights(self) -> list[int]:
        return sorted({sum(self.weight_drop(*ij)) for ij in self.entries})

    def left_multiply(self, i: int, j: int, vec: Vec) -> Vec:
        """Apply the second-leg element ``(i, j)`` to an arbitrary vector of ``M``."""
        return left_multiply(self.M, self.on_highest(i, j), vec)

    def operator(self, i: int, j: int) -> SparseMatrix:
        """Second-leg entry as a matrix on the part of ``M`` where it stays in range."""
        M = self.M
        h = sum(self.weight_drop(i, j))
        cols = {}
        sym = self.on_highest(i, j)
        for k in range(M.dim):
            if M.headroom(k) >= h:
                cols[k] = left_multiply(M, sym, {k: ONE})
        return SparseMatrix(M.dim, M.dim, cols)

    def map_entries(self, fn: Callable, kind: str, diagonal=ZERO) -> "GradedTensorOperator":
        out = {}
        for ij, v in self.entries.items():
            w = fn(ij, v)
            if w:
                out[ij] = w
        return GradedTensorOperator(self.V, self.M, out, kind, self.max_height, diagonal)

    def __repr__(self):
        return f"GradedTensorOperator({self.kind}, entries={len(self.entries)}, max_height={self.max_height})"


def left_multiply(M: WeightModule, symbol: Vec, vec: Vec) -> Vec:
    """``y . v`` where ``y 1_lam = symbol`` and ``v`` is a vector of the Verma module ``M``."""
    out: Vec = {}
    for k, c in symbol.items():
        vaxpy(out, c, M.apply_word("f", M.words[k], vec, strict=True))
    return out


@dataclass
class _RaisingSolver:
    """Left inverse of ``x -> (e_1 x, ..., e_r x)`` on one weight space of ``M``."""

    cols: list[int]
    rows: list[tuple[int, int]]  # (simple root, basis index) used in the square subsystem
    inv: list
    all_rows: list[tuple[int, int]] = field(default_factory=list)

    def solve(self, M: WeightModule, targets: list[Vec], check: bool = True) -> Vec:
        b = [targets[a].get(k, ZERO) for a, k in self.rows]
        x: Vec = {}
        for r, c in enumerate(self.cols):
            s = ZERO
            for t, bt in enumerate(b):
                if bt and self.inv[r][t]:
                    s = s + self.inv[r][t] * bt
            if s:
                x[c] = s
        if check:
            for a in range(M.rs.rank):
                if M.e_action[a].apply(x) != targets[a]:
                    raise RecursionError_("raising-operator system is inconsistent")
        return x


def _raising_solver(M: WeightModule, gamma: tuple[int, ...], cache: dict) -> _RaisingSolver:
    s = cache.get(gamma)
    if s is not None:
        return s
    cols = M.weight_spaces().get(gamma)
    if cols is None:
        raise TruncationError(f"weight offset {gamma} is outside the truncated module")
    rows = []
    for a in range(M.rs.rank):
        tgt = tuple(g + (1 if b == a else 0) for b, g in enumerate(gamma))
        for k in M.weight_spaces().get(tgt, []):
            rows.append((a, k))
    mat = [[M.e_action[a].entry(k, c) for c in cols] for a, k in rows]
    _, piv = rref([list(r) for r in zip(*mat)], len(rows)) if rows else ([], [])
    if len(piv) != len(cols):
        raise RecursionError_(f"raising operators are not jointly injective at offset {gamma}")
    sub = [mat[p] for p in piv]
    s = _RaisingSolver(cols, [rows[p] for p in piv], inverse(sub), rows)
    cache[gamma] = s
    return s


def _simple_entries(V: WeightModule):
    """``pi[a][(l, r)] = (e_a)_{lr}`` as nested dicts keyed by column and by row."""
    by_col, by_row = [], []
    for a in range(V.rs.rank):
        bc: dict = {}
        br: dict = {}
        for (l, r), x in V.e_action[a].entries():
            bc.setdefault(r, []).append((l, x))
            br.setdefault(l, []).append((r, x))
        by_col.append(bc)
        by_row.append(br)
    return by_col, by_row


def _pairs_by_height(V: WeightModule, max_height: int):
    out: dict[int, list] = {}
    for i in range(V.dim):
        for j in range(V.dim):
            mu = _diff(V.gamma[i], V.gamma[j])
            h = sum(mu)
            if 0 < h <= max_height and _nonneg(mu):
                out.setdefault(h, []).append((i, j, mu))
    return out


def quasi_r(V: WeightModule, M: WeightModule, max_height: int | None = None,
            check: bool = True) -> GradedTensorOperator:
    """Compute ``Rhat`` on ``V (x) M`` up to weight drops of height ``max_height``.

    Component ``mu`` is obtained from components ``mu - a`` through
    ``e_a Rhat_ij 1 = sum_l (e_a)_{lj} q^{(lam,a)} Rhat_il 1 - sum_r (e_a)_{ir} q^{-(wt, a)} Rhat_rj 1``.
    """
    if M.kind != "verma":
        raise ValueError("second leg must be a Verma module")
    max_height = M.cutoff if max_height is None else max_height
    if max_height > M.cutoff:
        raise TruncationError("Verma truncation is shallower than the requested degree")
    rank = M.rs.rank
    by_col, by_row = _simple_entries(V)
    K_top = [ScalarRational.q_power(M.base[a]) for a in range(rank)]
    rhat: dict = {(i, i): {0: ONE} for i in range(V.dim)}
    solvers: dict = {}
    pairs = _pairs_by_height(V, max_height)
    for h in sorted(pairs):
        for i, j, mu in pairs[h]:
            targets = []
            for a in range(rank):
                b: Vec = {}
                for l, x in by_col[a].get(j, ()):
                    y = rhat.get((i, l))
                    if y:
                        vaxpy(b, x * K_top[a], y)
                for r, x in by_row[a].get(i, ()):
                    y = rhat.get((r, j))
                    if y:
                        wt = M.base[a] - M.rs.form(_diff(V.gamma[r], V.gamma[j]), M.rs.simple_root(a))
                        vaxpy(b, -x * ScalarRational.q_power(-wt), y)
                targets.append(b)
            if not any(targets):
                continue
            solver = _raising_solver(M, tuple(-m for m in mu), solvers)
            x = solver.solve(M, targets, check=check)
            if x:
                rhat[(i, j)] = x
    return GradedTensorOperator(V, M, rhat, "rhat", max_height, diagonal=ONE)


def f_tensor(rhat: GradedTensorOperator) -> GradedTensorOperator:
    """``F = (Rhat - 1 (x) 1) / (q - q^-1)``."""
    inv = Q_DIFF.inverse()

    def fn(ij, v):
        if ij[0] == ij[1]:
            return {}
        return vscale(inv, v)

    return rhat.map_entries(fn, "F")


def f_entries(V: WeightModule, M: WeightModule, max_height: int | None = None) -> GradedTensorOperator:
    return f_tensor(quasi_r(V, M, max_height))


def closed_form_coefficient(k: int) -> ScalarRational:
    """``(q - q^-1)^k q^{k(k-1)/2} / [k]_q!``, the A1 quasi-R-matrix coefficient."""
    return Q_DIFF ** k * ScalarRational.q_power(k * (k - 1) // 2) / q_factorial(k)


def a1_closed_form_defects(rhat: GradedTensorOperator) -> list[tuple]:
    """Entries where the A1 recursion output differs from ``c_k e^k (x) f^k``."""
    V, M = rhat.V, rhat.M
    if V.rs.rank != 1:
        raise ValueError("closed form applies to A1 only")
    bad = []
    powers = {0: SparseMatrix.identity(V.dim)}
    for k in range(1, rhat.max_height + 1):
        powers[k] = V.e_action[0] @ powers[k - 1]
    f_pow = {0: {0: ONE}}
    for k in range(1, rhat.max_height + 1):
        f_pow[k] = M.f_action[0].apply(f_pow[k - 1])
    for i in range(V.dim):
        for j in range(V.dim):
            k = V.gamma[i][0] - V.gamma[j][0]
            if k < 0 or k > rhat.max_height:
                continue
            expected = vscale(closed_form_coefficient(k) * powers[k].entry(i, j), f_pow[k])
            if rhat.on_highest(i, j) != expected:
                bad.append((i, j, k))
    return bad


def intertwining_defects(F: GradedTensorOperator, simple: Iterable[int] | None = None) -> list[tuple]:
    """Check ``[1(x)e_a, F] + (e_a (x) q^{-h_a})F - F(e_a (x) q^{h_a}) = e_a (x) [h_a]_q``.

    Every matrix entry on ``V (x) M`` whose computation stays inside the
    truncation is compared; returns the failing ``(a, i, j, m)`` positions.
    """
    V, M = F.V, F.M
    rank = V.rs.rank
    simple = range(rank) if simple is None else simple
    by_col, by_row = _simple_entries(V)
    bad = []
    for a in simple:
        for j in range(V.dim):
            for i in range(V.dim):
                mu = _diff(V.gamma[i], V.gamma[j])
                # only e_a-shifted weight pairs can be nonzero
                nu = tuple(x - (1 if b == a else 0) for b, x in enumerate(mu))
                if not _nonneg(nu):
                    continue
                h = sum(nu)
                if h + 1 > F.max_height:
                    continue
                for m in range(M.dim):
                    if M.headroom(m) < h + 1:
                        continue
                    v = {m: ONE}
                    lhs: Vec = {}
                    fij = F.left_multiply(i, j, v) if (i, j) in F.entries else {}
                    vaxpy(lhs, ONE, M.apply("e", a, fij))
                    if (i, j) in F.entries:
                        vaxpy(lhs, -ONE, F.left_multiply(i, j, M.apply("e", a, v)))
                    for r, x in by_row[a].get(i, ()):
                        if (r, j) in F.entries:
                            w = F.left_multiply(r, j, v)
                            vaxpy(lhs, x, M.apply_cartan(tuple(-y for y in M.rs.simple_root(a)), w))
                    kv = M.apply_cartan(M.rs.simple_root(a), v)
                    for l, x in by_col[a].get(j, ()):
                        if (i, l) in F.entries:
                            vaxpy(lhs, -x, F.left_multiply(i, l, kv))
                    pij = V.e_action[a].entry(i, j)
                    if pij:
                        vaxpy(lhs, -pij * q_int(M.weight_pairing(m, a)), v)
                    if lhs:
                        bad.append((a, i, j, m))
    return bad
