"""The invariant pairing between a Verma module and its lowest-weight dual.

``<1_lam, 1*_lam> = 1`` and ``<x 1_lam, y> = <1_lam, gamma(x) y>``, where ``gamma`` is
the antipode.  Elements of U_q(g) are kept as linear combinations of monomials
``g_1 ... g_n q^{h_kappa}`` with the Cartan part pushed to the right.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .linalg import Vec, det, inverse, matmul, is_identity, vaxpy
from .rootsys import RootSystem
from .scalars import ONE, ZERO, ScalarRational
from .uqmodules import TruncationError, WeightModule

Letter = tuple  # ("e", a) or ("f", a)


class UqElement:
    """Finite combination of monomials ``word * q^{h_kappa}``.

    Keys are ``(word, kappa)`` with ``word`` a tuple of letters and ``kappa`` a
    root-lattice vector; letters act on modules right to left.
    """

    def __init__(self, rs: RootSystem, terms: dict | None = None):
        self.rs = rs
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def letter(cls, rs: RootSystem, gen: str, a: int) -> "UqElement":
        return cls(rs, {(((gen, a),), (0,) * rs.rank): ONE})

    @classmethod
    def cartan(cls, rs: RootSystem, kappa: Sequence[int]) -> "UqElement":
        return cls(rs, {((), tuple(int(x) for x in kappa)): ONE})

    @classmethod
    def one(cls, rs: RootSystem) -> "UqElement":
        return cls.cartan(rs, (0,) * rs.rank)

    def _word_weight(self, word) -> tuple[int, ...]:
        wt = [0] * self.rs.rank
        for gen, a in word:
            wt[a] += 1 if gen == "e" else -1
        return tuple(wt)

    def __mul__(self, other):
        if isinstance(other, ScalarRational):
            return UqElement(self.rs, {k: v * other for k, v in self.terms.items()})
        out: dict = {}
        for (w1, k1), c1 in self.terms.items():
            for (w2, k2), c2 in other.terms.items():
                # q^{h_k1} w2 = q^{(k1, wt w2)} w2 q^{h_k1}
                c = c1 * c2 * ScalarRational.q_power(self.rs.form(k1, self._word_weight(w2)))
                key = (w1 + w2, tuple(x + y for x, y in zip(k1, k2)))
                s = out.get(key)
                out[key] = c if s is None else s + c
        return UqElement(self.rs, out)

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return UqElement(self.rs, out)

    def __neg__(self):
        return UqElement(self.rs, {k: -v for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, UqElement):
            return NotImplemented
        diff = self + (-other)
        return not diff.terms

    def act(self, module: WeightModule, vec: Vec, strict: bool = True) -> Vec:
        """Action on a module vector (Cartan part first, then letters right to left)."""
        out: Vec = {}
        for (word, kappa), c in self.terms.items():
            v = module.apply_cartan(kappa, vec) if any(kappa) else vec
            for gen, a in reversed(word):
                v = module.apply(gen, a, v, strict=strict)
                if not v:
                    break
            vaxpy(out, c, v)
        return out

    def __repr__(self):
        parts = []
        for (word, kappa), c in sorted(self.terms.items(), key=lambda t: (len(t[0][0]), t[0])):
            w = "".join(f"{g}{a + 1}" for g, a in word) or "1"
            k = f" q^h{list(kappa)}" if any(kappa) else ""
            parts.append(f"({c})*{w}{k}")
        return " + ".join(parts) or "0"


def antipode_letter(rs: RootSystem, gen: str, a: int) -> UqElement:
    """``gamma(e_a) = -e_a q^{-h_a}``, ``gamma(f_a) = -q^{h_a} f_a``."""
    alpha = rs.simple_root(a)
    if gen == "e":
        return -(UqElement.letter(rs, "e", a) * UqElement.cartan(rs, tuple(-x for x in alpha)))
    if gen == "f":
        return -(UqElement.cartan(rs, alpha) * UqElement.letter(rs, "f", a))
    raise ValueError(f"unknown generator {gen!r}")


def antipode(x: UqElement) -> UqElement:
    """Antihomomorphic extension of the antipode to a combination of monomials."""
    rs = x.rs
    total = UqElement(rs)
    for (word, kappa), c in x.terms.items():
        img = UqElement.cartan(rs, tuple(-k for k in kappa))
        for gen, a in word:
            img = antipode_letter(rs, gen, a) * img
        total = total + img * c
    return total


def antipode_on_word(rs: RootSystem, word: Sequence[Letter]) -> UqElement:
    """``gamma`` of the monomial given as a sequence of ``(gen, index)`` letters."""
    return antipode(UqElement(rs, {(tuple(tuple(l) for l in word), (0,) * rs.rank): ONE}))


def word_element(rs: RootSystem, gen: str, word: Sequence[int]) -> UqElement:
    return UqElement(rs, {(tuple((gen, a) for a in word), (0,) * rs.rank): ONE})


def _check_pair(M: WeightModule, Ms: WeightModule):
    if M.kind != "verma" or Ms.kind != "dual_verma":
        raise ValueError("pairing needs a Verma module and a dual Verma module")
    if M.rs is not Ms.rs or tuple(-b for b in M.base) != tuple(Ms.base):
        raise ValueError("modules do not share the highest weight")


def pairing(M: WeightModule, Ms: WeightModule, x: Vec, y: Vec) -> ScalarRational:
    """``<x, y>`` for ``x`` in ``M`` and ``y`` in ``Ms``, bilinear in both arguments."""
    _check_pair(M, Ms)
    total = ZERO
    for k, c in x.items():
        g = antipode(word_element(M.rs, "f", M.words[k]))
        val = g.act(Ms, y).get(0)
        if val:
            total = total + c * val
    return total


@dataclass
class PairingBlock:
    nu: tuple[int, ...]
    rows: list  # dual Verma labels at weight -lam + nu
    cols: list  # Verma labels at weight lam - nu
    row_index: list[int]
    col_index: list[int]
    entries: list[list[ScalarRational]]

    def det(self) -> ScalarRational:
        return det(self.entries)


def pairing_block(M: WeightModule, Ms: WeightModule, nu: Sequence[int]) -> PairingBlock:
    """Matrix ``P[i][k] = <w_k 1_lam, e_i 1*_lam>`` over the chosen word bases."""
    _check_pair(M, Ms)
    nu = tuple(int(x) for x in nu)
    if sum(nu) > min(M.cutoff, Ms.cutoff):
        raise TruncationError(f"weight {nu} lies beyond the cutoff")
    cols = M.weight_spaces().get(tuple(-x for x in nu), [])
    rows = Ms.weight_spaces().get(nu, [])
    entries = [[ZERO] * len(cols) for _ in rows]
    for c, k in enumerate(cols):
        g = antipode(word_element(M.rs, "f", M.words[k]))
        for r, i in enumerate(rows):
            entries[r][c] = g.act(Ms, {i: ONE}).get(0, ZERO)
    return PairingBlock(
        nu, [Ms.labels[i] for i in rows], [M.labels[k] for k in cols], list(rows), list(cols), entries
    )


def inverse_blocks(M: WeightModule, Ms: WeightModule, cutoff: int | None = None,
                   workers: int = 1) -> dict[tuple[int, ...], tuple[PairingBlock, list]]:
    """Per weight block, the pairing matrix and its exact inverse ``C_nu``.

    Columns of ``C_nu`` are the Verma vectors dual to the basis ``e_i 1*_lam``.
    """
    cutoff = min(M.cutoff, Ms.cutoff) if cutoff is None else cutoff
    weights = sorted({tuple(-x for x in g) for g in M.weight_spaces() if -sum(g) <= cutoff},
                     key=lambda v: (sum(v), v))

    def one(nu):
        block = pairing_block(M, Ms, nu)
        inv = inverse(block.entries)
        if not is_identity(matmul(block.entries, inv)):
            raise ArithmeticError(f"inverse check failed at weight {nu}")
        return nu, (block, inv)

    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            return dict(ex.map(one, weights))
    return dict(one(nu) for nu in weights)


def invariance_defect(M: WeightModule, Ms: WeightModule, u: UqElement, x: Vec, y: Vec) -> ScalarRational:
    """``<u x, y> - <x, gamma(u) y>``; zero for an invariant pairing."""
    lhs = pairing(M, Ms, u.act(M, x), y)
    rhs = pairing(M, Ms, x, antipode(u).act(Ms, y))
    return lhs - rhs
