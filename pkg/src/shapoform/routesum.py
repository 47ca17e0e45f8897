"""Hasse diagrams on a weight basis, routes, and the dynamized matrix F-hat.

For a first-leg module ``V`` with basis ``v_i`` of weights ``eps_i``, the entry

    fhat_ij 1_lam = sum over routes i = m_1 > m_2 > ... > m_k = j of
                    A^j_{m_1} ... A^j_{m_{k-1}} f_{m_1 m_2} ... f_{m_{k-1} j} 1_lam

with ``A^j_m = phi(-eta_{eps_m - eps_j})`` evaluated at ``lam`` (the Cartan factors
stand to the right of the f-word, so they meet ``1_lam`` first).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .linalg import Vec, vaxpy, vscale
from .rmatrix import GradedTensorOperator, left_multiply
from .rootsys import RootSystem, eta
from .scalars import ONE, AffineExponent, ScalarRational, phi
from .uqmodules import WeightModule


def _diff(a, b):
    return tuple(x - y for x, y in zip(a, b))


def weight_greater(V: WeightModule, i: int, j: int) -> bool:
    """``eps_i > eps_j``: the difference is a nonzero non-negative root combination."""
    d = _diff(V.gamma[i], V.gamma[j])
    return all(x >= 0 for x in d) and any(d)


@dataclass
class RouteDiagram:
    """Arrows are simple pairs with nonzero ``e_a`` matrix entries; ``succ`` is the refined order."""

    V: WeightModule
    arrows: list[tuple[int, int, int, ScalarRational]]  # (l, r, simple root, (e_a)_{lr})
    direct: dict[int, list[int]]  # l -> nodes r with f_lr != 0
    above: dict[int, frozenset] = field(default_factory=dict)  # j -> nodes i with i succ j

    def succ(self, i: int, j: int) -> bool:
        return i in self.above.get(j, ())

    def related(self, i: int, j: int, order: str = "succ") -> bool:
        if order == "succ":
            return self.succ(i, j)
        if order == "weight":
            return weight_greater(self.V, i, j)
        raise ValueError(f"unknown order {order!r}")

    def routes(self, i: int, j: int, order: str = "succ") -> list[tuple[int, ...]]:
        """All strictly decreasing chains from ``i`` down to ``j``, sorted."""
        if i == j:
            return [(i,)]
        if not self.related(i, j, order):
            return []
        nodes = [m for m in range(self.V.dim) if m == j or self.related(m, j, order)]

        @lru_cache(maxsize=None)
        def down(m):
            if m == j:
                return ((j,),)
            out = []
            for n in nodes:
                if n != m and self.related(m, n, order):
                    out.extend((m,) + s for s in down(n))
            return tuple(out)

        return sorted(down(i))

    def paths(self, i: int, j: int) -> list[tuple[int, ...]]:
        """Maximal routes: every step is a simple pair carrying an arrow."""
        simple = {(l, r) for l, r, _, _ in self.arrows}
        return [r for r in self.routes(i, j) if all((a, b) in simple for a, b in zip(r, r[1:]))]

    def longest_path_length(self) -> int:
        """Largest number of steps in a chain of the refined order."""

        @lru_cache(maxsize=None)
        def depth(m):
            return max((1 + depth(n) for n in self.direct.get(m, ())), default=0)

        return max((depth(m) for m in range(self.V.dim)), default=0)


def hasse(V: WeightModule, F: GradedTensorOperator) -> RouteDiagram:
    arrows = []
    for a in range(V.rs.rank):
        for (l, r), x in sorted(V.e_action[a].entries()):
            arrows.append((l, r, a, x))
    direct: dict[int, list[int]] = {}
    for (l, r) in sorted(F.entries):
        if l != r:
            direct.setdefault(l, []).append(r)
    # transitive closure, processed bottom-up by weight height
    below: dict[int, set] = {}
    order = sorted(range(V.dim), key=lambda k: sum(V.gamma[k]))
    for m in order:
        s = set()
        for n in direct.get(m, ()):
            s.add(n)
            s |= below.get(n, set())
        below[m] = s
    above: dict[int, set] = {}
    for m, s in below.items():
        for n in s:
            above.setdefault(n, set()).add(m)
    return RouteDiagram(V, arrows, direct, {k: frozenset(v) for k, v in above.items()})


def a_coeff(rs: RootSystem, mu, lam_pairings) -> ScalarRational:
    """``A = phi(-eta_mu)`` at the weight with pairings ``(lam, a_i) = lam_pairings[i]``."""
    form = eta(rs, mu)
    lam_mu = AffineExponent(0)
    for c, p in zip(form.mu, lam_pairings):
        if c:
            lam_mu = lam_mu + p * c
    return phi(-form.at(lam_mu))


@dataclass
class FHatMatrix:
    """Entries ``fhat_ij 1_lam`` as Verma vectors; the diagonal is ``1_lam``."""

    V: WeightModule
    M: WeightModule
    entries: dict
    method: str
    columns: tuple | None = None

    def entry(self, i: int, j: int) -> Vec:
        if i == j:
            return {0: ONE}
        return self.entries.get((i, j), {})

    def column(self, j: int) -> dict[int, Vec]:
        out = {j: {0: ONE}}
        for (i, jj), v in self.entries.items():
            if jj == j and v:
                out[i] = v
        return out

    def __eq__(self, other):
        if not isinstance(other, FHatMatrix):
            return NotImplemented
        keys = set(self.entries) | set(other.entries)
        return all(self.entry(*k) == other.entry(*k) for k in keys)


class _ACache:
    def __init__(self, V: WeightModule, M: WeightModule):
        self.rs = V.rs
        self.V = V
        self.lam = M.base
        self._c: dict = {}

    def __call__(self, m: int, j: int) -> ScalarRational:
        mu = _diff(self.V.gamma[m], self.V.gamma[j])
        out = self._c.get(mu)
        if out is None:
            out = a_coeff(self.rs, mu, self.lam)
            self._c[mu] = out
        return out


def fhat_matrix(V: WeightModule, F: GradedTensorOperator, columns: Iterable[int] | None = None,
                diagram: RouteDiagram | None = None) -> FHatMatrix:
    """Route sums for the requested columns, with shared route suffixes summed once per node."""
    d = diagram or hasse(V, F)
    M = F.M
    A = _ACache(V, M)
    cols = tuple(range(V.dim)) if columns is None else tuple(columns)
    entries = {}
    for j in cols:
        nodes = sorted(d.above.get(j, ()), key=lambda k: sum(_diff(V.gamma[k], V.gamma[j])))
        partial: dict[int, Vec] = {j: {0: ONE}}
        for i in nodes:
            if sum(_diff(V.gamma[i], V.gamma[j])) > F.max_height:
                continue
            acc: Vec = {}
            for m in d.direct.get(i, ()):
                g = partial.get(m)
                if g:
                    vaxpy(acc, ONE, left_multiply(M, F.on_highest(i, m), g))
            if acc:
                partial[i] = vscale(A(i, j), acc)
        for i, v in partial.items():
            if i != j and v:
                entries[(i, j)] = v
    return FHatMatrix(V, F.M, entries, "routes", cols)


def fhat_entry_by_enumeration(d: RouteDiagram, F: GradedTensorOperator, i: int, j: int,
                              order: str = "succ") -> Vec:
    """One entry summed route by route (no sharing); used to cross-check the node recursion."""
    if i == j:
        return {0: ONE}
    A = _ACache(d.V, F.M)
    total: Vec = {}
    for route in d.routes(i, j, order):
        vec: Vec = {0: ONE}
        coeff = ONE
        for a, b in reversed(list(zip(route, route[1:]))):
            vec = left_multiply(F.M, F.on_highest(a, b), vec)
            if not vec:
                break
        if not vec:
            continue
        for m in route[:-1]:
            coeff = coeff * A(m, j)
        vaxpy(total, coeff, vec)
    return total


def conjugate_first_leg(fhat: FHatMatrix, T: dict, T_inv: dict, V_new: WeightModule) -> FHatMatrix:
    """``(T^-1 (x) 1) Fhat (T (x) 1)`` for a basis change ``v'_j = sum_i T[j][i] v_i``."""
    n = fhat.V.dim
    entries = {}
    for i in range(n):
        for j in range(n):
            acc: Vec = {}
            for k, a in T_inv[i].items():
                for l, b in T[j].items():
                    vec = fhat.entry(k, l)
                    if vec:
                        vaxpy(acc, a * b, vec)
            if acc and i != j:
                entries[(i, j)] = acc
    return FHatMatrix(V_new, fhat.M, entries, fhat.method + "+conjugated")


def quotient_cover(Vq: WeightModule) -> tuple[WeightModule, dict[int, int]]:
    """Truncated Verma cover of a finite-dimensional quotient in a basis adapted to the quotient map.

    Basis vectors surviving in the quotient keep their words; every other one is
    replaced by the radical element ``w_k - (lift of its image)``.  Returns the
    cover and the map from quotient indices to cover indices.
    """
    from .uqmodules import change_basis, restrict_levels

    cover = Vq.info["cover"]
    depth = Vq.info["depth"]
    proj = Vq.info["projection"]
    C = restrict_levels(cover, depth)
    label_to_cover = {lab: k for k, lab in enumerate(C.labels)}
    kept = {n: label_to_cover[lab] for n, lab in enumerate(Vq.labels)}
    kept_set = set(kept.values())
    T: dict = {}
    for k in range(C.dim):
        if k in kept_set:
            T[k] = {k: ONE}
        else:
            col = {k: ONE}
            for n, c in proj[k].items():
                vaxpy(col, -c, {kept[n]: ONE})
            T[k] = col
    return change_basis(C, T, kind="verma_cover"), kept
