"""Weight modules over U_q(g) with exact Chevalley actions.

Conventions: ``[e_a, f_b] = delta_ab [h_a]_q`` (negative generators rescaled so no
``q_a`` appears), ``q^{h_mu}`` acts on a vector of weight ``w`` by ``q^{(w, mu)}``,
quantized Serre relations with ``q_a``-binomials.

Verma modules are built as quotients of the free algebra on the lowering
generators by the graded Serre ideal; the basis in every weight component is
a set of normal words picked by row reduction.  Dual (lowest weight) Verma
modules are the mirror construction with raising generators.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Sequence

from .linalg import SparseMatrix, Vec, inverse, rref, vaxpy
from .rootsys import (
    RootSystem,
    fundamental_weight_pairings,
    kostant_partition,
    lattice_points,
    weight_in_root_coordinates,
)
from .scalars import ONE, ZERO, AffineExponent, ScalarRational, q_binomial, q_int

MAX_FINITE_DIM = 64


class TruncationError(RuntimeError):
    """An operation left the computed range of a truncated module."""


@dataclass(eq=False)
class WeightModule:
    """A finite weight-graded piece of a U_q(g)-module.

    ``gamma[k]`` is the root-lattice offset of basis vector ``k`` from the module's
    base weight, whose pairings with the simple roots are ``base``.  For Verma
    modules the offsets are non-positive, for dual Verma modules non-negative.
    """

    rs: RootSystem
    labels: list
    gamma: list[tuple[int, ...]]
    base: tuple[AffineExponent, ...]
    level: list[int]
    e_action: list[SparseMatrix]
    f_action: list[SparseMatrix]
    kind: str
    cutoff: int | None = None
    raising_free: str | None = None  # generator whose action can leave the truncation
    words: list | None = None
    factors: tuple = ()
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        self._index = {lab: k for k, lab in enumerate(self.labels)}
        self._pairing_cache: dict = {}

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: Hashable) -> int:
        return self._index[label]

    def weight_pairing(self, k: int, i: int) -> AffineExponent:
        """``(wt(v_k), a_i)``."""
        key = (k, i)
        out = self._pairing_cache.get(key)
        if out is None:
            out = self.base[i] + self.rs.form(self.gamma[k], self.rs.simple_root(i))
            self._pairing_cache[key] = out
        return out

    def weight_pairing_with(self, k: int, kappa: Sequence[int]) -> AffineExponent:
        """``(wt(v_k), kappa)`` for ``kappa`` in the root lattice."""
        out = AffineExponent(0)
        for i, c in enumerate(kappa):
            if c:
                out = out + self.weight_pairing(k, i) * int(c)
        return out

    def cartan_scalar(self, k: int, kappa: Sequence[int]) -> ScalarRational:
        """Eigenvalue of ``q^{h_kappa}`` on basis vector ``k``."""
        return ScalarRational.q_power(self.weight_pairing_with(k, kappa))

    def headroom(self, k: int) -> float:
        """Number of level-raising steps that stay inside the truncation."""
        if self.factors:
            return min(m.headroom(x) for m, x in zip(self.factors, self.labels[k]))
        if self.cutoff is None:
            return float("inf")
        return self.cutoff - self.level[k]

    def action(self, gen: str, i: int) -> SparseMatrix:
        return self.e_action[i] if gen == "e" else self.f_action[i]

    def apply(self, gen: str, i: int, vec: Vec, strict: bool = False) -> Vec:
        if strict and self._leaves_truncation(gen, vec):
            raise TruncationError(f"{gen}_{i + 1} applied beyond cutoff {self.cutoff}")
        return self.action(gen, i).apply(vec)

    def _leaves_truncation(self, gen: str, vec: Vec) -> bool:
        if self.factors:
            return any(self.headroom(k) < 1 for k in vec)
        if self.cutoff is None or gen != self.raising_free:
            return False
        return any(self.level[k] >= self.cutoff for k in vec)

    def apply_cartan(self, kappa: Sequence[int], vec: Vec) -> Vec:
        return {k: self.cartan_scalar(k, kappa) * v for k, v in vec.items()}

    def apply_word(self, gen: str, word: Sequence[int], vec: Vec, strict: bool = False) -> Vec:
        """Apply ``g_{w1} g_{w2} ... g_{wn}`` (rightmost letter first)."""
        for a in reversed(word):
            vec = self.apply(gen, a, vec, strict)
            if not vec:
                break
        return vec

    def weight_spaces(self) -> dict[tuple[int, ...], list[int]]:
        out: dict = {}
        for k, g in enumerate(self.gamma):
            out.setdefault(g, []).append(k)
        return out

    def basis_vector(self, k: int) -> Vec:
        return {k: ONE}

    def __repr__(self):
        return f"WeightModule({self.kind}, {self.rs.name}, dim={self.dim}, cutoff={self.cutoff})"


# -- words and the Serre ideal ---------------------------------------------

def _words_of_weight(nu: tuple[int, ...]) -> list[tuple[int, ...]]:
    letters = [i for i, n in enumerate(nu) for _ in range(n)]
    return sorted(set(itertools.permutations(letters)))


def serre_elements(rs: RootSystem) -> list[tuple[tuple[int, ...], dict]]:
    """Serre elements as ``(degree, {word: coeff})`` for every ordered pair ``a != b``."""
    out = []
    for a in range(rs.rank):
        for b in range(rs.rank):
            if a == b:
                continue
            n = 1 - int(rs.cartan[a, b])
            d = rs.q_alpha_exponent(a)
            elem = {}
            for k in range(n + 1):
                c = q_binomial(n, k, d)
                if k % 2:
                    c = -c
                word = (a,) * (n - k) + (b,) + (a,) * k
                elem[word] = elem.get(word, ZERO) + c
            deg = tuple(n if i == a else (1 if i == b else 0) for i in range(rs.rank))
            out.append((deg, elem))
    return out


def _sub(u, v):
    return tuple(x - y for x, y in zip(u, v))


class _SerreQuotient:
    """Normal-word basis and word projection for the Serre quotient of a free algebra."""

    def __init__(self, rs: RootSystem, cutoff: int):
        self.rs = rs
        self.cutoff = cutoff
        self.serre = serre_elements(rs)
        self.normal: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
        self._reduction: dict[tuple[int, ...], dict] = {}
        for nu in lattice_points(rs.rank, cutoff):
            self._reduce_weight(nu)

    def _reduce_weight(self, nu):
        words = _words_of_weight(nu)
        if not words:
            words = [()]
        columns = sorted(words, reverse=True)
        col_index = {w: c for c, w in enumerate(columns)}
        rows = []
        for deg, elem in self.serre:
            rest = _sub(nu, deg)
            if min(rest) < 0:
                continue
            for split in lattice_points(self.rs.rank, sum(rest)):
                if any(s > r for s, r in zip(split, rest)):
                    continue
                left = split
                right = _sub(rest, split)
                for u in _words_of_weight(left) or [()]:
                    for v in _words_of_weight(right) or [()]:
                        row = [ZERO] * len(columns)
                        for w, c in elem.items():
                            j = col_index[u + w + v]
                            row[j] = row[j] + c
                        rows.append(row)
        reduced, pivots = rref(rows, len(columns)) if rows else ([], [])
        pivot_set = set(pivots)
        normal = sorted(w for c, w in enumerate(columns) if c not in pivot_set)
        self.normal[nu] = normal
        for r, c in zip(reduced, pivots):
            self._reduction[columns[c]] = {
                columns[j]: -x for j, x in enumerate(r) if j != c and x
            }

    def project(self, word: tuple[int, ...]) -> dict:
        """Express a word as a combination of normal words."""
        red = self._reduction.get(word)
        if red is None:
            return {word: ONE}
        return red


def _word_weight(rank: int, word) -> tuple[int, ...]:
    nu = [0] * rank
    for a in word:
        nu[a] += 1
    return tuple(nu)


@lru_cache(maxsize=None)
def _serre_quotient(rs: RootSystem, cutoff: int) -> _SerreQuotient:
    return _SerreQuotient(rs, cutoff)


def _generic_base(rs: RootSystem, sign: int) -> tuple[AffineExponent, ...]:
    return tuple(AffineExponent(0, tuple(sign if j == i else 0 for j in range(i + 1))) for i in range(rs.rank))


def _numeric_base(pairings: Sequence[int], sign: int) -> tuple[AffineExponent, ...]:
    return tuple(AffineExponent(sign * int(p)) for p in pairings)


def _word_module(rs: RootSystem, cutoff: int, base, kind: str) -> WeightModule:
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    sq = _serre_quotient(rs, cutoff)
    free_gen, other_gen, sgn, gsign = ("f", "e", 1, -1) if kind == "verma" else ("e", "f", -1, 1)
    labels, gamma, level, words = [], [], [], []
    for nu in lattice_points(rs.rank, cutoff):
        for w in sq.normal[nu]:
            labels.append((nu, w))
            gamma.append(tuple(gsign * x for x in nu))
            level.append(sum(nu))
            words.append(w)
    index = {w: k for k, w in enumerate(words)}
    n = len(labels)

    def vec_of(word):
        return {index[w]: c for w, c in sq.project(word).items()}

    free = []
    for a in range(rs.rank):
        cols = {}
        for k, w in enumerate(words):
            if level[k] < cutoff:
                cols[k] = vec_of((a,) + w)
        free.append(SparseMatrix(n, n, cols))

    def pairing_of(word, a):
        nu = _word_weight(rs.rank, word)
        return base[a] + rs.form(tuple(gsign * x for x in nu), rs.simple_root(a))

    other = []
    for a in range(rs.rank):
        memo: dict = {(): {}}

        def act(word, a=a, memo=memo):
            if word in memo:
                return memo[word]
            b, rest = word[0], word[1:]
            out = free[b].apply(act(rest))
            if a == b:
                c = q_int(pairing_of(rest, a))
                vaxpy(out, c if sgn > 0 else -c, vec_of(rest))
            memo[word] = out
            return out

        other.append(SparseMatrix(n, n, {k: act(w) for k, w in enumerate(words)}))

    e_action, f_action = (other, free) if kind == "verma" else (free, other)
    return WeightModule(
        rs, labels, gamma, tuple(base), level, e_action, f_action, kind,
        cutoff=cutoff, raising_free=free_gen, words=words,
    )


def verma_truncated(rs: RootSystem, cutoff: int, highest: Sequence[int] | None = None) -> WeightModule:
    """Verma module ``M_lambda`` truncated at level ``cutoff``.

    ``highest`` gives numeric pairings ``(lambda, a_i)``; by default ``lambda`` is the
    generic symbolic weight with ``q^{(lambda, a_i)} = z_i``.
    """
    base = _generic_base(rs, 1) if highest is None else _numeric_base(highest, 1)
    return _word_module(rs, cutoff, base, "verma")


def dual_verma_truncated(rs: RootSystem, cutoff: int, highest: Sequence[int] | None = None) -> WeightModule:
    """Lowest-weight module ``M*_lambda`` (lowest weight ``-lambda``) truncated at ``cutoff``."""
    base = _generic_base(rs, -1) if highest is None else _numeric_base(highest, -1)
    return _word_module(rs, cutoff, base, "dual_verma")


def finite_dim_module(rs: RootSystem, dynkin_labels: Sequence[int]) -> WeightModule:
    """Irreducible module with the given dominant integral highest weight.

    Built as the quotient of a Verma module at the numeric weight by the radical
    of the invariant pairing, truncated one level below the module's depth.
    """
    from .shapovalov import pairing_block

    labels_in = tuple(int(n) for n in dynkin_labels)
    if len(labels_in) != rs.rank or any(n < 0 for n in labels_in):
        raise ValueError("highest weight must be dominant integral (non-negative Dynkin labels)")
    pairings = fundamental_weight_pairings(rs, labels_in)
    coords = weight_in_root_coordinates(rs, pairings)
    depth2 = 2 * sum(coords)
    if depth2.denominator != 1:
        raise ValueError("highest weight depth is not integral")
    depth = int(depth2)
    cutoff = depth + 1
    M = verma_truncated(rs, cutoff, highest=pairings)
    Ms = dual_verma_truncated(rs, cutoff, highest=pairings)
    spaces = M.weight_spaces()
    keep: list[int] = []
    projections: dict = {}  # gamma -> (kept indices, matrix mapping verma coords -> quotient coords)
    for g, idx in sorted(spaces.items(), key=lambda t: (sum(-x for x in t[0]), t[0])):
        nu = tuple(-x for x in g)
        rows = pairing_block(M, Ms, nu).entries
        # rows of the reduced echelon form vanish exactly on the radical and are
        # the identity on the pivot columns, so they give quotient coordinates
        reduced, piv = rref(rows, len(idx))
        kept = [idx[c] for c in piv]
        projections[g] = (kept, reduced, idx)
        keep.extend(kept)
    if any(M.level[k] == cutoff for k in keep):
        raise ValueError("quotient does not terminate within the expected depth")
    if len(keep) > MAX_FINITE_DIM:
        raise ValueError(f"module dimension {len(keep)} exceeds {MAX_FINITE_DIM}")
    keep.sort()
    new_index = {k: i for i, k in enumerate(keep)}

    def project(vec: Vec) -> Vec:
        out: Vec = {}
        by_space: dict = {}
        for k, v in vec.items():
            by_space.setdefault(M.gamma[k], {})[k] = v
        for g, part in by_space.items():
            entry = projections.get(g)
            if entry is None or not entry[0]:
                continue
            kept, proj, idx = entry
            pos = {k: c for c, k in enumerate(idx)}
            for i, kk in enumerate(kept):
                s = ZERO
                for k, v in part.items():
                    x = proj[i][pos[k]]
                    if x:
                        s = s + x * v
                if s:
                    out[new_index[kk]] = s
        return out

    n = len(keep)
    e_action, f_action = [], []
    for a in range(rs.rank):
        e_action.append(SparseMatrix(n, n, {new_index[k]: project(M.e_action[a].column(k)) for k in keep}))
        f_action.append(SparseMatrix(n, n, {new_index[k]: project(M.f_action[a].column(k)) for k in keep}))
    return WeightModule(
        rs,
        [M.labels[k] for k in keep],
        [M.gamma[k] for k in keep],
        M.base,
        [M.level[k] for k in keep],
        e_action,
        f_action,
        "quotient",
        cutoff=None,
        words=[M.words[k] for k in keep],
        info={
            "dynkin_labels": labels_in,
            "highest_pairings": pairings,
            "depth": depth,
            "cover": M,
            # image in the quotient of every cover basis vector up to the module's depth
            "projection": {k: project({k: ONE}) for k in range(M.dim) if M.level[k] <= depth},
        },
    )


def is_lambda_tagged(V: WeightModule) -> bool:
    """True when the module's weights involve the symbolic highest weight."""
    return any(b.lam for b in V.base)


def tensor_module(V: WeightModule, W: WeightModule) -> WeightModule:
    """``V (x) W`` with ``Delta(e) = e (x) q^h + 1 (x) e`` and ``Delta(f) = f (x) 1 + q^-h (x) f``."""
    if V.rs is not W.rs:
        raise ValueError("modules over different root systems")
    if is_lambda_tagged(V) and is_lambda_tagged(W):
        raise ValueError("at most one tensor factor may carry the symbolic weight")
    rs = V.rs
    nW = W.dim
    labels = [(i, k) for i in range(V.dim) for k in range(nW)]
    gamma = [tuple(x + y for x, y in zip(V.gamma[i], W.gamma[k])) for i, k in labels]
    base = tuple(a + b for a, b in zip(V.base, W.base))
    level = [V.level[i] + W.level[k] for i, k in labels]
    e_action, f_action = [], []
    for a in range(rs.rank):
        e_cols, f_cols = {}, {}
        for i in range(V.dim):
            ecol_v = V.e_action[a].column(i)
            fcol_v = V.f_action[a].column(i)
            kinv = ScalarRational.q_power(-V.weight_pairing(i, a))
            for k in range(nW):
                idx = i * nW + k
                ecol: Vec = {}
                kw = ScalarRational.q_power(W.weight_pairing(k, a))
                for r, x in ecol_v.items():
                    ecol[r * nW + k] = x * kw
                for r, x in W.e_action[a].column(k).items():
                    vaxpy(ecol, ONE, {i * nW + r: x})
                fcol: Vec = {}
                for r, x in fcol_v.items():
                    fcol[r * nW + k] = x
                for r, x in W.f_action[a].column(k).items():
                    vaxpy(fcol, ONE, {i * nW + r: kinv * x})
                if ecol:
                    e_cols[idx] = ecol
                if fcol:
                    f_cols[idx] = fcol
        n = len(labels)
        e_action.append(SparseMatrix(n, n, e_cols))
        f_action.append(SparseMatrix(n, n, f_cols))
    return WeightModule(rs, labels, gamma, base, level, e_action, f_action, "tensor", factors=(V, W))


def change_basis(V: WeightModule, T: dict[int, Vec], kind: str | None = None) -> WeightModule:
    """Module in the basis ``v'_j = sum_i T[j][i] v_i``; ``T`` must preserve weights."""
    n = V.dim
    spaces = V.weight_spaces()
    Tinv_cols: dict[int, Vec] = {}
    for g, idx in spaces.items():
        for j in idx:
            for i in T[j]:
                if V.gamma[i] != g:
                    raise ValueError("basis change does not preserve weights")
        block = [[T[j].get(i, ZERO) for j in idx] for i in idx]
        inv = inverse(block)
        for c, j in enumerate(idx):
            Tinv_cols[j] = {idx[r]: inv[r][c] for r in range(len(idx)) if inv[r][c]}
    Tm = SparseMatrix(n, n, T)
    Tinv = SparseMatrix(n, n, Tinv_cols)
    e_action = [Tinv @ m @ Tm for m in V.e_action]
    f_action = [Tinv @ m @ Tm for m in V.f_action]
    return WeightModule(
        V.rs, list(V.labels), list(V.gamma), V.base, list(V.level), e_action, f_action,
        kind or V.kind, cutoff=V.cutoff, raising_free=V.raising_free, words=None,
        info=dict(V.info, basis_change=True),
    )


def restrict_levels(V: WeightModule, max_level: int) -> WeightModule:
    """Submodule of levels ``<= max_level`` of a Verma-type module (stable under ``e``)."""
    keep = [k for k in range(V.dim) if V.level[k] <= max_level]
    new = {k: i for i, k in enumerate(keep)}
    n = len(keep)

    def sub(m):
        return SparseMatrix(n, n, {new[k]: {new[r]: x for r, x in m.column(k).items() if r in new} for k in keep})

    return WeightModule(
        V.rs, [V.labels[k] for k in keep], [V.gamma[k] for k in keep], V.base, [V.level[k] for k in keep],
        [sub(m) for m in V.e_action], [sub(m) for m in V.f_action], V.kind,
        cutoff=max_level, raising_free=V.raising_free,
        words=[V.words[k] for k in keep] if V.words else None, info=dict(V.info),
    )


# -- verification helpers -----------------------------------------------------

def kostant_defects(M: WeightModule) -> list:
    """Weights whose computed dimension differs from the Kostant partition count."""
    out = []
    for g, idx in M.weight_spaces().items():
        nu = tuple(abs(x) for x in g)
        expected = kostant_partition(M.rs, nu)
        if len(idx) != expected:
            out.append((nu, len(idx), expected))
    return out


def relation_defects(M: WeightModule) -> list[str]:
    """Check ``[e_a, f_b] = delta [h_a]``, Serre relations, and weight grading.

    Only basis vectors with enough headroom below the truncation are tested.
    """
    rs = M.rs
    bad = []
    for a in range(rs.rank):
        for k in range(M.dim):
            for r in M.e_action[a].column(k):
                if tuple(x - y for x, y in zip(M.gamma[r], M.gamma[k])) != rs.simple_root(a):
                    bad.append(f"e_{a + 1} breaks grading at {k}")
            for r in M.f_action[a].column(k):
                if tuple(y - x for x, y in zip(M.gamma[r], M.gamma[k])) != rs.simple_root(a):
                    bad.append(f"f_{a + 1} breaks grading at {k}")
    for k in range(M.dim):
        if M.headroom(k) < 1:
            continue
        v = {k: ONE}
        for a in range(rs.rank):
            for b in range(rs.rank):
                lhs = M.apply("e", a, M.apply("f", b, v))
                vaxpy(lhs, -ONE, M.apply("f", b, M.apply("e", a, v)))
                if a == b:
                    vaxpy(lhs, -q_int(M.weight_pairing(k, a)), v)
                if lhs:
                    bad.append(f"[e_{a + 1}, f_{b + 1}] fails on basis vector {k}")
    for deg, elem in serre_elements(rs):
        n = sum(deg)
        for gen in ("e", "f"):
            for k in range(M.dim):
                if M.headroom(k) < n:
                    continue
                out: Vec = {}
                for word, c in elem.items():
                    vaxpy(out, c, M.apply_word(gen, word, {k: ONE}))
                if out:
                    bad.append(f"Serre relation {gen}{deg} fails on basis vector {k}")
    return bad
