"""Series solution of the linear ABRR equation on ``V (x) M_lam``.

``F^(0) = 1 (x) 1`` and ``F^(k+1) = phi(D)(F F^(k))``, where ``phi(D)`` multiplies a
graded entry of weight drop ``mu`` on the right by ``phi(-eta_mu)``.  On the
highest vector this right factor is a scalar, so each step is
``F^(k+1)_ij 1 = A^j_i * sum_m f_im F^(k)_mj 1``.  The sum of the series solves
``Rhat Fhat = q^{2(1 (x) d)} Fhat q^{-2(1 (x) d)}``; on entry ``(i, j)`` the conjugation
is multiplication by ``q^{-2 eta_mu(lam)}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .linalg import Vec, vaxpy, vscale
from .rmatrix import GradedTensorOperator, left_multiply
from .rootsys import eta
from .routesum import FHatMatrix, _ACache, _diff
from .scalars import ONE, AffineExponent, ScalarRational
from .uqmodules import WeightModule


class SeriesDidNotTerminate(RuntimeError):
    pass


@dataclass
class SeriesResult:
    fhat: FHatMatrix
    terms: list[dict] = field(default_factory=list)  # F^(k) restricted to the requested columns

    @property
    def nonzero_terms(self) -> int:
        return sum(1 for t in self.terms if t)


def fk_series(V: WeightModule, F: GradedTensorOperator, columns: Iterable[int] | None = None,
              k_max: int | None = None) -> SeriesResult:
    """Iterate ``F^(k)`` until it vanishes and return the accumulated sum."""
    M = F.M
    A = _ACache(V, M)
    cols = tuple(range(V.dim)) if columns is None else tuple(columns)
    k_max = V.dim + 1 if k_max is None else k_max
    rows_of: dict[int, list[int]] = {}
    for (i, m) in F.entries:
        rows_of.setdefault(m, []).append(i)
    current: dict = {(j, j): {0: ONE} for j in cols}
    terms = [dict(current)]
    total: dict = {}
    for _ in range(k_max):
        nxt: dict = {}
        for (m, j), vec in current.items():
            for i in rows_of.get(m, ()):
                if sum(_diff(V.gamma[i], V.gamma[j])) > F.max_height:
                    continue
                w = left_multiply(M, F.on_highest(i, m), vec)
                if w:
                    acc = nxt.setdefault((i, j), {})
                    vaxpy(acc, ONE, w)
        current = {}
        for (i, j), acc in nxt.items():
            if acc:
                current[(i, j)] = vscale(A(i, j), acc)
        if not current:
            return SeriesResult(FHatMatrix(V, M, total, "abrr", cols), terms)
        terms.append(dict(current))
        for ij, v in current.items():
            acc = total.setdefault(ij, {})
            vaxpy(acc, ONE, v)
        total = {k: v for k, v in total.items() if v}
    raise SeriesDidNotTerminate(f"F^(k) still nonzero after {k_max} steps")


def eta_exponent(V: WeightModule, M: WeightModule, i: int, j: int) -> AffineExponent:
    """``eta_mu(lam)`` for ``mu = eps_i - eps_j``."""
    form = eta(V.rs, _diff(V.gamma[i], V.gamma[j]))
    lam_mu = AffineExponent(0)
    for c, p in zip(form.mu, M.base):
        if c:
            lam_mu = lam_mu + p * c
    return form.at(lam_mu)


@dataclass
class IdentityReport:
    residuals: dict  # (i, j) -> nonzero residual vector
    checked: int
    by_height: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.residuals


def abrr_identity_check(rhat: GradedTensorOperator, fhat: FHatMatrix,
                        columns: Iterable[int] | None = None) -> IdentityReport:
    """Residuals of ``sum_m Rhat_im Fhat_mj 1 - q^{-2 eta(lam)} Fhat_ij 1`` for every entry."""
    V, M = rhat.V, rhat.M
    cols = fhat.columns if columns is None else tuple(columns)
    cols = tuple(range(V.dim)) if cols is None else cols
    residuals = {}
    by_height: dict = {}
    checked = 0
    for j in cols:
        column = fhat.column(j)
        for i in range(V.dim):
            mu = _diff(V.gamma[i], V.gamma[j])
            if any(x < 0 for x in mu) or sum(mu) > rhat.max_height:
                continue
            if i != j and not any(mu):
                continue
            checked += 1
            lhs: Vec = {}
            for m, vec in column.items():
                if m == i:
                    vaxpy(lhs, ONE, vec)
                elif (i, m) in rhat.entries:
                    vaxpy(lhs, ONE, left_multiply(M, rhat.on_highest(i, m), vec))
            target = column.get(i, {})
            vaxpy(lhs, -ScalarRational.q_power(eta_exponent(V, M, i, j) * -2), target)
            h = sum(mu)
            by_height[h] = by_height.get(h, 0) + (1 if lhs else 0)
            if lhs:
                residuals[(i, j)] = lhs
    return IdentityReport(residuals, checked, by_height)


def perturbed(fhat: FHatMatrix, i: int, j: int, delta: ScalarRational = ONE) -> FHatMatrix:
    """Copy of ``fhat`` with entry ``(i, j)`` changed by ``delta`` times its first basis vector."""
    entries = {k: dict(v) for k, v in fhat.entries.items()}
    vec = entries.get((i, j))
    if not vec:
        mu = _diff(fhat.V.gamma[i], fhat.V.gamma[j])
        space = fhat.M.weight_spaces().get(tuple(-x for x in mu))
        if not space:
            raise ValueError(f"entry {(i, j)} has no weight space to perturb")
        k = space[0]
        entries[(i, j)] = {k: delta}
    else:
        k = min(vec)
        vec[k] = vec[k] + delta
        if not vec[k]:
            del vec[k]
    return FHatMatrix(fhat.V, fhat.M, entries, fhat.method + "+perturbed", fhat.columns)
