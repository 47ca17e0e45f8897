"""Singular vectors in ``V (x) M_lam``, the inverse-pairing test, and denominator audits."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .abrr import fk_series
from .linalg import Vec, sparse_rank
from .rmatrix import GradedTensorOperator, f_tensor, quasi_r
from .rootsys import RootSystem
from .routesum import FHatMatrix, fhat_matrix, hasse
from .scalars import _CTX, ONE, ZERO, ScalarRational
from .shapovalov import PairingBlock, inverse_blocks
from .uqmodules import WeightModule, dual_verma_truncated, tensor_module, verma_truncated


# -- singular vectors ---------------------------------------------------------

@dataclass
class SingularVectorReport:
    j: int
    vector: Vec  # in the tensor basis, index i * dim(M) + k
    residuals: list[Vec]  # e_a applied to the vector, one per simple root
    weight: tuple  # offset of lam + eps_j from lam, in root coordinates relative to V's base

    @property
    def annihilated(self) -> bool:
        return not any(self.residuals)


def singular_vector(V: WeightModule, fhat: FHatMatrix, j: int,
                    T: WeightModule | None = None) -> SingularVectorReport:
    """``u_j = sum_i v_i (x) fhat_ij 1_lam`` together with ``e_a u_j`` for every simple root."""
    M = fhat.M
    T = T or tensor_module(V, M)
    n = M.dim
    vec: Vec = {}
    for i, w in fhat.column(j).items():
        for k, c in w.items():
            vec[i * n + k] = c
    residuals = [T.apply("e", a, vec) for a in range(V.rs.rank)]
    return SingularVectorReport(j, vec, residuals, V.gamma[j])


def singular_vectors(V: WeightModule, M: WeightModule, method: str = "routes"):
    """All ``u_j`` for a finite-dimensional ``V``; returns ``(reports, rank)``."""
    F = f_tensor(quasi_r(V, M))
    fhat = fhat_matrix(V, F) if method == "routes" else fk_series(V, F).fhat
    T = tensor_module(V, M)
    reports = [singular_vector(V, fhat, j, T) for j in range(V.dim)]
    return reports, sparse_rank([r.vector for r in reports])


# -- inverse of the pairing ---------------------------------------------------

@dataclass
class BlockResult:
    nu: tuple
    size: int
    product_is_identity: bool
    matches: dict  # method -> bool (agreement with the oracle inverse)
    first_mismatch: tuple | None = None


@dataclass
class InverseReport:
    type_name: str
    cutoff: int
    methods: tuple
    blocks: list[BlockResult]
    timings: dict
    series_terms: int | None = None
    longest_path: int | None = None
    data: dict = field(default_factory=dict, repr=False)

    @property
    def ok(self) -> bool:
        return all(b.product_is_identity and all(b.matches.values()) for b in self.blocks)


def _coefficient_matrix(block: PairingBlock, fhat: FHatMatrix) -> list[list[ScalarRational]]:
    """``C[k][i]``: coefficient of Verma basis vector ``k`` in ``fhat_{i0} 1_lam``."""
    return [[fhat.entry(i, 0).get(k, ZERO) for i in block.row_index] for k in block.col_index]


def _product_is_identity(P, C) -> tuple[bool, tuple | None]:
    n = len(P)
    for r in range(n):
        for c in range(n):
            s = ZERO
            for t in range(n):
                if P[r][t] and C[t][c]:
                    s = s + P[r][t] * C[t][c]
            if s != (ONE if r == c else ZERO):
                return False, (r, c)
    return True, None


def verify_inverse(rs: RootSystem, cutoff: int, method: str = "both", workers: int = 1) -> InverseReport:
    """Check that ``fhat(1* (x) 1_lam)`` on the dual Verma module inverts the pairing blockwise."""
    methods = {"routes": ("routes",), "abrr": ("abrr",), "both": ("routes", "abrr"),
               "all": ("routes", "abrr")}[method]
    timings = {}
    t0 = time.perf_counter()
    M = verma_truncated(rs, cutoff)
    Ms = dual_verma_truncated(rs, cutoff)
    timings["modules"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    rhat = quasi_r(Ms, M)
    F = f_tensor(rhat)
    timings["rmatrix"] = time.perf_counter() - t0
    fhats = {}
    series_terms = None
    longest = hasse(Ms, F).longest_path_length()
    if "routes" in methods:
        t0 = time.perf_counter()
        fhats["routes"] = fhat_matrix(Ms, F, columns=[0])
        timings["routes"] = time.perf_counter() - t0
    if "abrr" in methods:
        t0 = time.perf_counter()
        series = fk_series(Ms, F, columns=[0])
        fhats["abrr"] = series.fhat
        series_terms = series.nonzero_terms
        timings["abrr"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    blocks = inverse_blocks(M, Ms, workers=workers)
    timings["oracle"] = time.perf_counter() - t0
    results = []
    for nu, (block, inv) in sorted(blocks.items(), key=lambda t: (sum(t[0]), t[0])):
        matches = {}
        first = None
        ok_product = True
        for name, fh in fhats.items():
            C = _coefficient_matrix(block, fh)
            ok, pos = _product_is_identity(block.entries, C)
            ok_product = ok_product and ok
            same = C == inv
            matches[name] = same
            if first is None and not ok:
                first = (name,) + pos
            if first is None and not same:
                first = (name, "oracle")
        results.append(BlockResult(nu, len(block.row_index), ok_product, matches, first))
    return InverseReport(rs.name, cutoff, methods, results, timings, series_terms, longest,
                         data={"M": M, "Ms": Ms, "rhat": rhat, "F": F, "fhats": fhats, "blocks": blocks})


# -- denominator audit --------------------------------------------------------

def _depends_on_lambda(p) -> bool:
    return any(any(m[1:]) for m in p.monoms())


def genericity_polynomial(rs: RootSystem, alpha: Sequence[int], m: int):
    """``q^{2(lam+rho, alpha) - m ||alpha||^2} - 1`` cleared of negative powers, as a polynomial."""
    e = 2 * rs.rho_pairing(alpha) - m * rs.norm2(alpha)
    zexp = [0] * (len(_CTX.gens()) - 1)
    for i, a in enumerate(alpha):
        zexp[i] = 2 * int(a)
    if e >= 0:
        return _CTX.from_dict({(e, *zexp): 1, (0,) * (1 + len(zexp)): -1})
    return _CTX.from_dict({(0, *zexp): 1, (-e,) + (0,) * len(zexp): -1})


@dataclass
class AuditReport:
    factors: list  # (factor string, [(alpha, m), ...])
    unexplained: list
    q_only: list

    @property
    def ok(self) -> bool:
        return not self.unexplained

    def inventory(self) -> set:
        return {am for _, ams in self.factors for am in ams}


def denominator_audit(values: Iterable[ScalarRational], rs: RootSystem, max_m: int) -> AuditReport:
    """Match every weight-dependent irreducible denominator factor to a genericity condition.

    Factors free of the weight variables are units of the base field Q(q) and are
    listed separately.
    """
    candidates = [(alpha, m, genericity_polynomial(rs, alpha, m))
                  for alpha in rs.positive_roots for m in range(1, max_m + 1)]
    seen = {}
    for v in values:
        if not v or v.den.is_constant():
            continue
        key = str(v.den)
        if key in seen:
            continue
        seen[key] = v.den
    factors, unexplained, q_only = [], [], []
    done = set()
    for den in seen.values():
        _, facs = den.factor()
        for fac, _ in facs:
            s = str(fac)
            if s in done:
                continue
            done.add(s)
            if not _depends_on_lambda(fac):
                q_only.append(s)
                continue
            hits = []
            for alpha, m, cand in candidates:
                g = cand.gcd(fac)
                if g == fac or g == -fac:
                    hits.append((alpha, m))
            if hits:
                factors.append((s, hits))
            else:
                unexplained.append(s)
    return AuditReport(factors, unexplained, q_only)


def inverse_entry_values(report: InverseReport) -> list[ScalarRational]:
    out = []
    for fh in report.data["fhats"].values():
        for vec in fh.entries.values():
            out.extend(vec.values())
    for _, inv in report.data["blocks"].values():
        for row in inv:
            out.extend(x for x in row if x)
    return out


# -- numeric specialization ---------------------------------------------------

def random_points(rs: RootSystem, count: int, seed: int, max_m: int, tries: int = 1000):
    """Seeded rational points ``(q0, z0)`` avoiding every genericity factor with ``m <= max_m``."""
    rng = random.Random(seed)
    pts = []
    polys = [genericity_polynomial(rs, a, m) for a in rs.positive_roots for m in range(1, max_m + 1)]
    for _ in range(tries):
        if len(pts) == count:
            break
        q0 = Fraction(rng.randint(2, 9), rng.randint(1, 7))
        if q0 in (0, 1, -1):
            continue
        z0 = tuple(Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9)) for _ in range(rs.rank))
        if any(abs(x) == 1 for x in z0):
            continue
        point = (q0,) + z0 + (Fraction(1),) * (len(_CTX.gens()) - 1 - rs.rank)
        if any(_eval(p, point) == 0 for p in polys):
            continue
        pts.append((q0, z0))
    return pts


def _eval(p, point) -> Fraction:
    total = Fraction(0)
    for exps, c in zip(p.monoms(), p.coeffs()):
        t = Fraction(int(c))
        for x, e in zip(point, exps):
            if e:
                t *= x ** int(e)
        total += t
    return total


class Specializer:
    """Evaluates scalars, vectors and module actions at one rational point, with caching."""

    def __init__(self, q0, z0):
        self.q0 = Fraction(q0)
        self.z0 = tuple(Fraction(x) for x in z0)
        self._cache: dict = {}
        self._mats: dict = {}

    def s(self, x: ScalarRational) -> Fraction:
        out = self._cache.get(x)
        if out is None:
            out = x.specialize(self.q0, self.z0)
            self._cache[x] = out
        return out

    def vec(self, v: Vec) -> dict:
        out = {}
        for k, x in v.items():
            y = self.s(x)
            if y:
                out[k] = y
        return out

    def matrix(self, m) -> dict:
        key = id(m)
        out = self._mats.get(key)
        if out is None:
            out = ({c: self.vec(col) for c, col in m.cols.items()}, m)
            self._mats[key] = out
        return out[0]

    def apply(self, m, v: dict) -> dict:
        cols = self.matrix(m)
        out: dict = {}
        for c, x in v.items():
            for r, y in cols.get(c, {}).items():
                out[r] = out.get(r, 0) + x * y
        return {k: x for k, x in out.items() if x}

    def left_multiply(self, M: WeightModule, symbol: Vec, v: dict) -> dict:
        out: dict = {}
        for k, c in symbol.items():
            w = v
            for a in reversed(M.words[k]):
                w = self.apply(M.f_action[a], w)
                if not w:
                    break
            cs = self.s(c)
            for r, y in w.items():
                out[r] = out.get(r, 0) + cs * y
        return {k: x for k, x in out.items() if x}


def numeric_inverse_check(report: InverseReport, sp: Specializer) -> bool:
    """Inverse-test data evaluated at a point: ``P(pt) C(pt) = I`` and all methods agree there."""
    for nu, (block, inv) in report.data["blocks"].items():
        n = len(block.row_index)
        P = [[sp.s(x) for x in row] for row in block.entries]
        Cs = [[[sp.s(x) for x in row] for row in _coefficient_matrix(block, fh)]
              for fh in report.data["fhats"].values()]
        oracle = [[sp.s(x) for x in row] for row in inv]
        for C in Cs:
            if C != oracle:
                return False
            for r in range(n):
                for c in range(n):
                    if sum(P[r][t] * C[t][c] for t in range(n)) != (1 if r == c else 0):
                        return False
    return True


def numeric_singular_check(reports: list[SingularVectorReport], T: WeightModule, sp: Specializer) -> bool:
    """Annihilation and linear independence of the ``u_j`` after specialization."""
    vecs = []
    for rep in reports:
        u = sp.vec(rep.vector)
        vecs.append(u)
        for a in range(T.rs.rank):
            if sp.apply(T.e_action[a], u):
                return False
    return _numeric_rank(vecs) == len(vecs)


def _numeric_rank(vecs: list[dict]) -> int:
    basis: dict = {}
    r = 0
    for v in vecs:
        w = dict(v)
        for key in sorted(basis):
            if key in w:
                f = w[key]
                for k, x in basis[key].items():
                    w[k] = w.get(k, 0) - f * x
                w = {k: x for k, x in w.items() if x}
        if not w:
            continue
        key = min(w)
        inv = 1 / w[key]
        w = {k: x * inv for k, x in w.items()}
        for k2 in list(basis):
            if key in basis[k2]:
                f = basis[k2][key]
                for k, x in w.items():
                    basis[k2][k] = basis[k2].get(k, 0) - f * x
                basis[k2] = {k: x for k, x in basis[k2].items() if x}
        basis[key] = w
        r += 1
    return r


def numeric_abrr_check(rhat: GradedTensorOperator, fhat: FHatMatrix, sp: Specializer) -> bool:
    """The ABRR identity with every ingredient evaluated at the point before combining."""
    from .abrr import eta_exponent

    V, M = rhat.V, rhat.M
    cols = fhat.columns or tuple(range(V.dim))
    for j in cols:
        column = {m: sp.vec(v) for m, v in fhat.column(j).items()}
        for i in range(V.dim):
            mu = tuple(x - y for x, y in zip(V.gamma[i], V.gamma[j]))
            if any(x < 0 for x in mu) or sum(mu) > rhat.max_height or (i != j and not any(mu)):
                continue
            lhs: dict = {}
            for m, vec in column.items():
                if m == i:
                    w = vec
                elif (i, m) in rhat.entries:
                    w = sp.left_multiply(M, rhat.on_highest(i, m), vec)
                else:
                    continue
                for k, x in w.items():
                    lhs[k] = lhs.get(k, 0) + x
            factor = sp.s(ScalarRational.q_power(eta_exponent(V, M, i, j) * -2))
            for k, x in column.get(i, {}).items():
                lhs[k] = lhs.get(k, 0) - factor * x
            if any(lhs.values()):
                return False
    return True


def independence_rank(vectors: Sequence[Vec]) -> int:
    return sparse_rank(vectors)
