"""Finite root systems from Cartan matrices.

Roots and weights of the root lattice are integer vectors in simple-root
coordinates.  The bilinear form is normalized so that short roots have
``(alpha, alpha) = 2``, which keeps every pairing of lattice elements (and
every exponent of ``q``) an integer.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from .scalars import MAX_RANK, AffineExponent


class RootSystemError(ValueError):
    pass


def cartan_matrix(cartan_type: str) -> np.ndarray:
    """Cartan matrix ``A_ij = 2 (a_i, a_j) / (a_i, a_i)`` for a type string like ``"B2"``.

    Bourbaki labelling: for B_n the last simple root is short, for C_n it is long,
    for G2 and F4 the first simple roots are long.
    """
    t = cartan_type.strip().upper()
    if len(t) < 2 or t[0] not in "ABCDEFG" or not t[1:].isdigit():
        raise RootSystemError(f"malformed Cartan type {cartan_type!r}")
    letter, n = t[0], int(t[1:])
    if n < 1 or n > MAX_RANK:
        raise RootSystemError(f"rank {n} outside the supported range 1..{MAX_RANK}")
    a = 2 * np.eye(n, dtype=int)
    if letter in "ABCD":
        for i in range(n - 1):
            a[i, i + 1] = a[i + 1, i] = -1
        if letter == "B" and n >= 2:
            a[n - 1, n - 2] = -2
        elif letter == "C" and n >= 2:
            a[n - 2, n - 1] = -2
        elif letter == "D":
            if n < 4:
                raise RootSystemError("type D requires rank >= 4")
            a[n - 2, n - 1] = a[n - 1, n - 2] = 0
            a[n - 3, n - 1] = a[n - 1, n - 3] = -1
        if letter in "BC" and n < 2:
            raise RootSystemError(f"type {letter} requires rank >= 2")
    elif letter == "G" and n == 2:
        a = np.array([[2, -1], [-3, 2]])
    elif letter == "F" and n == 4:
        a = np.array([[2, -1, 0, 0], [-1, 2, -1, 0], [0, -2, 2, -1], [0, 0, -1, 2]])
    else:
        raise RootSystemError(f"unsupported Cartan type {cartan_type!r}")
    return a


@dataclass(frozen=True, eq=False)
class RootSystem:
    rank: int
    cartan: np.ndarray
    sym: tuple[int, ...]  # d_i with (a_i, a_j) = d_i A_ij
    positive_roots: tuple[tuple[int, ...], ...]
    rho: tuple[Fraction, ...]
    name: str = ""
    gram: np.ndarray = field(repr=False, default=None)

    # -- bilinear form ---------------------------------------------------
    def form(self, a, b) -> int:
        """``(a, b)`` for lattice vectors in simple-root coordinates."""
        return int(np.asarray(a) @ self.gram @ np.asarray(b))

    def norm2(self, a) -> int:
        return self.form(a, a)

    def simple_root(self, i: int) -> tuple[int, ...]:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def rho_pairing(self, mu) -> int:
        """``(mu, rho)``; an integer for ``mu`` in the root lattice."""
        val = sum(Fraction(int(m)) * self.sym[i] for i, m in enumerate(mu))
        assert val.denominator == 1
        return int(val)

    def height(self, mu) -> int:
        return int(sum(mu))

    def coroot_pairing(self, beta, i: int) -> int:
        """``<beta, a_i^vee> = 2 (beta, a_i) / (a_i, a_i)``."""
        return int(sum(int(self.cartan[i, j]) * int(b) for j, b in enumerate(beta)))

    def reflect(self, beta, i: int) -> tuple[int, ...]:
        k = self.coroot_pairing(beta, i)
        return tuple(int(b) - (k if j == i else 0) for j, b in enumerate(beta))

    def simple_pairings(self, mu) -> tuple[int, ...]:
        """``((mu, a_1), ..., (mu, a_r))``."""
        return tuple(int(x) for x in np.asarray(mu) @ self.gram)

    def lambda_pairing(self, mu) -> AffineExponent:
        """``(lambda, mu)`` for the generic weight ``lambda``."""
        return AffineExponent(0, tuple(int(m) for m in mu))

    def q_alpha_exponent(self, i: int) -> int:
        """``(a_i, a_i) / 2``, i.e. ``q_{a_i} = q ** d_i``."""
        return self.sym[i]

    def is_root_lattice_positive(self, mu) -> bool:
        return all(x >= 0 for x in mu) and any(x > 0 for x in mu)

    def __repr__(self):
        return f"RootSystem({self.name or self.cartan.tolist()}, |R+|={len(self.positive_roots)})"


@dataclass(frozen=True)
class EtaForm:
    """``eta_mu = h_mu + (mu, rho) - ||mu||^2 / 2`` as the pair (mu, scalar part)."""

    mu: tuple[int, ...]
    scalar: int

    def at(self, weight_pairing: AffineExponent | int) -> AffineExponent:
        """Evaluate at a weight ``w`` given ``(w, mu)``."""
        if isinstance(weight_pairing, int):
            weight_pairing = AffineExponent(weight_pairing)
        return weight_pairing + self.scalar


def _symmetrizer(a: np.ndarray) -> tuple[int, ...]:
    n = a.shape[0]
    d: list[Fraction | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i == j or a[i, j] == 0:
                    continue
                if a[j, i] == 0:
                    raise RootSystemError("Cartan matrix has asymmetric zero pattern")
                val = d[i] * int(a[i, j]) / int(a[j, i])
                if d[j] is None:
                    d[j] = val
                    stack.append(j)
                elif d[j] != val:
                    raise RootSystemError("Cartan matrix is not symmetrizable")
    den = 1
    for x in d:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in d]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def _positive_definite(g: np.ndarray) -> bool:
    n = g.shape[0]
    for k in range(1, n + 1):
        # exact leading minors via Fraction elimination
        m = [[Fraction(int(g[i, j])) for j in range(k)] for i in range(k)]
        det = Fraction(1)
        for c in range(k):
            if m[c][c] == 0:
                return False
            det *= m[c][c]
            for r in range(c + 1, k):
                f = m[r][c] / m[c][c]
                for t in range(c, k):
                    m[r][t] -= f * m[c][t]
        if det <= 0:
            return False
    return True


@lru_cache(maxsize=None)
def _build_cached(key: tuple, name: str) -> RootSystem:
    n = int(round(len(key) ** 0.5))
    a = np.array(key, dtype=int).reshape(n, n)
    if n < 1 or n > MAX_RANK:
        raise RootSystemError(f"rank {n} outside the supported range 1..{MAX_RANK}")
    if any(a[i, i] != 2 for i in range(n)):
        raise RootSystemError("Cartan matrix must have 2 on the diagonal")
    if any(a[i, j] > 0 for i in range(n) for j in range(n) if i != j):
        raise RootSystemError("off-diagonal Cartan entries must be non-positive")
    d = _symmetrizer(a)
    gram = np.array([[d[i] * int(a[i, j]) for j in range(n)] for i in range(n)], dtype=int)
    if not (gram == gram.T).all():
        raise RootSystemError("Cartan matrix is not symmetrizable")
    if not _positive_definite(gram):
        raise RootSystemError("Cartan matrix is not of finite type")
    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        beta = frontier.pop()
        for i in range(n):
            if beta == simple[i]:
                continue
            k = sum(int(a[i, j]) * beta[j] for j in range(n))
            gamma = tuple(beta[j] - (k if j == i else 0) for j in range(n))
            if gamma not in roots:
                if min(gamma) < 0:
                    raise RootSystemError("reflection closure left the positive cone")
                roots.add(gamma)
                frontier.append(gamma)
                if len(roots) > 200:
                    raise RootSystemError("root system is not finite")
    ordered = tuple(sorted(roots, key=lambda r: (sum(r), tuple(-x for x in r))))
    rho = tuple(sum(Fraction(r[i]) for r in ordered) / 2 for i in range(n))
    rs = RootSystem(n, a, d, ordered, rho, name, gram)
    for i in range(n):
        # (rho, a_i) = (a_i, a_i) / 2
        val = sum(rho[j] * int(gram[j, i]) for j in range(n))
        if val != Fraction(gram[i, i], 2):
            raise RootSystemError("Weyl vector check failed")
    return rs


def build_root_system(cartan) -> RootSystem:
    """Root system from a Cartan matrix or a type string such as ``"A2"``."""
    name = ""
    if isinstance(cartan, str):
        name = cartan.strip().upper()
        cartan = cartan_matrix(cartan)
    a = np.asarray(cartan, dtype=int)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise RootSystemError("Cartan matrix must be square")
    return _build_cached(tuple(int(x) for x in a.flatten()), name)


def pairing(rs: RootSystem, a, b, *, a_lambda: bool = False, b_lambda: bool = False) -> AffineExponent:
    """``(a, b)``; a ``*_lambda`` flag adds the generic weight ``lambda`` to that argument.

    Only a single generic summand is supported since ``(lambda, lambda)`` never enters
    the implemented formulas.
    """
    if a_lambda and b_lambda:
        raise RootSystemError("(lambda, lambda) is not supported")
    out = AffineExponent(rs.form(a, b))
    if a_lambda:
        out = out + rs.lambda_pairing(b)
    if b_lambda:
        out = out + rs.lambda_pairing(a)
    return out


def eta(rs: RootSystem, mu) -> EtaForm:
    mu = tuple(int(x) for x in mu)
    n2 = rs.norm2(mu)
    assert n2 % 2 == 0
    return EtaForm(mu, rs.rho_pairing(mu) - n2 // 2)


def kostant_partition(rs: RootSystem, nu) -> int:
    """Number of ways to write ``nu`` as a non-negative combination of positive roots."""
    roots = rs.positive_roots

    @lru_cache(maxsize=None)
    def count(v, k):
        if not any(v):
            return 1
        if k == len(roots):
            return 0
        total = 0
        r = roots[k]
        w = v
        while all(x >= 0 for x in w):
            total += count(w, k + 1)
            w = tuple(x - y for x, y in zip(w, r))
        return total

    return count(tuple(int(x) for x in nu), 0)


def lattice_points(rank: int, max_height: int):
    """All ``nu`` in the positive cone with ``ht(nu) <= max_height``, ordered by height."""
    out = []

    def rec(prefix, remaining, k):
        if k == rank:
            out.append(tuple(prefix))
            return
        for x in range(remaining + 1):
            rec(prefix + [x], remaining - x, k + 1)

    rec([], max_height, 0)
    return sorted(out, key=lambda v: (sum(v), v))


def fundamental_weight_pairings(rs: RootSystem, labels) -> tuple[int, ...]:
    """``(lambda, a_i) = n_i d_i`` for the weight with Dynkin labels ``n``."""
    return tuple(int(n) * rs.sym[i] for i, n in enumerate(labels))


def weight_in_root_coordinates(rs: RootSystem, pairings) -> tuple[Fraction, ...]:
    """Solve ``(lambda, a_i) = pairings[i]`` for ``lambda`` in simple-root coordinates."""
    n = rs.rank
    m = [[Fraction(int(rs.gram[i, j])) for j in range(n)] + [Fraction(int(pairings[i]))] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[p] = m[p], m[c]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(m[i][n] / m[i][i] for i in range(n))
