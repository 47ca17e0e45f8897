"""Exact arithmetic in the rational function field Q(q)(z_1, ..., z_r).

The indeterminate ``z_i`` stands for ``q**(lambda, alpha_i)`` where ``lambda`` is a
generic (symbolic) highest weight.  Elements are stored as

    q^s * z^t * num / den

with ``num`` and ``den`` integer polynomials (python-flint ``fmpz_mpoly``) that are
coprime, free of monomial factors, and normalized so that ``den`` has a positive
leading coefficient.  Structural equality is therefore mathematical equality.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import flint

MAX_RANK = 4
NVARS = MAX_RANK + 1
VARNAMES = ("q",) + tuple(f"z{i}" for i in range(1, MAX_RANK + 1))

_CTX = flint.fmpz_mpoly_ctx.get(VARNAMES, "degrevlex")
_ZERO_EXP = (0,) * NVARS
_ONE_POLY = _CTX.from_dict({_ZERO_EXP: 1})
_ZERO_POLY = _CTX.from_dict({})


class PoleError(ZeroDivisionError):
    """Raised when a rational function is inverted or evaluated at a pole."""


@dataclass(frozen=True)
class AffineExponent:
    """An exponent ``constant + sum_i lam[i] * (lambda, alpha_i)``.

    ``q ** AffineExponent`` is the monomial ``q**constant * prod z_i**lam[i]``.
    """

    constant: int = 0
    lam: tuple[int, ...] = ()

    def __post_init__(self):
        lam = tuple(int(x) for x in self.lam)
        while lam and lam[-1] == 0:
            lam = lam[:-1]
        if len(lam) > MAX_RANK:
            raise ValueError(f"at most {MAX_RANK} weight parameters are supported")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "constant", int(self.constant))

    def __add__(self, other):
        if isinstance(other, int):
            return AffineExponent(self.constant + other, self.lam)
        n = max(len(self.lam), len(other.lam))
        a = self.lam + (0,) * (n - len(self.lam))
        b = other.lam + (0,) * (n - len(other.lam))
        return AffineExponent(self.constant + other.constant, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return AffineExponent(-self.constant, tuple(-x for x in self.lam))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k: int):
        return AffineExponent(self.constant * k, tuple(x * k for x in self.lam))

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return self.constant == 0 and not self.lam

    def exps(self) -> tuple[int, ...]:
        return (self.constant,) + self.lam + (0,) * (MAX_RANK - len(self.lam))

    def __repr__(self):
        parts = [str(self.constant)] if self.constant or not self.lam else []
        for i, c in enumerate(self.lam):
            if c:
                parts.append(f"{c}*(lam,a{i + 1})")
        return "AffineExponent(" + " + ".join(parts) + ")"


def _as_exponent(x) -> AffineExponent:
    if isinstance(x, AffineExponent):
        return x
    return AffineExponent(int(x))


def _split_monomial(p):
    """Return ``(exps, p / monomial)`` with the largest monomial factor removed."""
    tc = p.term_content()
    exps = tuple(int(e) for e in tc.monoms()[0])
    if any(exps):
        return exps, p / _CTX.from_dict({exps: 1})
    return exps, p


def _add_exps(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub_exps(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _mono(exps):
    return _CTX.from_dict({tuple(exps): 1})


class ScalarRational:
    """Immutable element of Q(q, z_1, ..., z_r) in canonical form."""

    __slots__ = ("num", "den", "shift", "_hash")

    def __init__(self, num=None, den=None, shift=_ZERO_EXP, *, _canonical=False):
        if num is None:
            num = _ZERO_POLY
        if den is None:
            den = _ONE_POLY
        if _canonical:
            self.num, self.den, self.shift = num, den, shift
            self._hash = None
            return
        if den.is_zero():
            raise PoleError("zero denominator")
        if num.is_zero():
            self.num, self.den, self.shift = _ZERO_POLY, _ONE_POLY, _ZERO_EXP
            self._hash = None
            return
        en, num = _split_monomial(num)
        ed, den = _split_monomial(den)
        shift = _sub_exps(_add_exps(shift, en), ed)
        if not den.is_constant():
            g = num.gcd(den)
            if not g.is_one():
                num = num / g
                den = den / g
        else:
            # constant denominator: fold the integer into the content
            g = num.content().gcd(den.leading_coefficient())
            if g != 1:
                num = num / g
                den = den / g
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        self.num, self.den, self.shift = num, den, tuple(shift)
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, c) -> "ScalarRational":
        c = Fraction(c)
        return cls(_CTX.from_dict({_ZERO_EXP: c.numerator}), _CTX.from_dict({_ZERO_EXP: c.denominator}))

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "ScalarRational":
        exps = tuple(exps) + (0,) * (NVARS - len(exps))
        c = Fraction(coeff)
        if c == 0:
            return ZERO
        return cls(_CTX.from_dict({_ZERO_EXP: c.numerator}), _CTX.from_dict({_ZERO_EXP: c.denominator}), exps)

    @classmethod
    def q_power(cls, x) -> "ScalarRational":
        """``q ** x`` for an integer or :class:`AffineExponent`."""
        return cls(_ONE_POLY, _ONE_POLY, _as_exponent(x).exps(), _canonical=True)

    @classmethod
    def from_laurent(cls, terms: dict) -> "ScalarRational":
        """Build from ``{exps: coeff}`` with possibly negative exponents and rational coefficients."""
        return _laurent_from_terms(terms)

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one() and not any(self.shift)

    def is_laurent(self) -> bool:
        """True when the denominator is a (unit) constant."""
        return self.den.is_constant()

    def depends_on_lambda(self) -> bool:
        if any(self.shift[1:]):
            return True
        return any(any(m[1:]) for m in self.num.monoms()) or any(any(m[1:]) for m in self.den.monoms())

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, ScalarRational):
            if isinstance(other, (int, Fraction)):
                other = ScalarRational.const(other)
            else:
                return NotImplemented
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        s = tuple(min(a, b) for a, b in zip(self.shift, other.shift))
        n1 = self.num
        n2 = other.num
        d1 = _sub_exps(self.shift, s)
        d2 = _sub_exps(other.shift, s)
        if any(d1):
            n1 = n1 * _mono(d1)
        if any(d2):
            n2 = n2 * _mono(d2)
        if self.den == other.den:
            return ScalarRational(n1 + n2, self.den, s)
        return ScalarRational(n1 * other.den + n2 * self.den, self.den * other.den, s)

    __radd__ = __add__

    def __neg__(self):
        return ScalarRational(-self.num, self.den, self.shift, _canonical=True)

    def __sub__(self, other):
        if not isinstance(other, ScalarRational):
            if isinstance(other, (int, Fraction)):
                other = ScalarRational.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ScalarRational):
            if isinstance(other, (int, Fraction)):
                other = ScalarRational.const(other)
            else:
                return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        shift = _add_exps(self.shift, other.shift)
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        # cross cancellation keeps both factors reduced, so the product is canonical
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_one():
                n1, d2 = n1 / g, d2 / g
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_one():
                n2, d1 = n2 / g, d1 / g
        num = n1 * n2
        den = d1 * d2
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return ScalarRational(num, den, shift, _canonical=True)

    __rmul__ = __mul__

    def inverse(self) -> "ScalarRational":
        if self.num.is_zero():
            raise PoleError("division by zero in Q(q, z)")
        num, den = self.den, self.num
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return ScalarRational(num, den, tuple(-x for x in self.shift), _canonical=True)

    def __truediv__(self, other):
        if not isinstance(other, ScalarRational):
            if isinstance(other, (int, Fraction)):
                other = ScalarRational.const(other)
            else:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, ScalarRational):
            if isinstance(other, (int, Fraction)):
                other = ScalarRational.const(other)
            else:
                return NotImplemented
        return self.shift == other.shift and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shift, tuple(self.num.terms()), tuple(self.den.terms())))
        return self._hash

    # -- evaluation ---------------------------------------------------
    def specialize(self, q0, z0: Sequence = ()) -> Fraction:
        """Exact value at ``q = q0``, ``z_i = z0[i]``."""
        point = _point(q0, z0)
        d = _eval_poly(self.den, point)
        if d == 0:
            bad = [str(f) for f, _ in self.den.factor()[1] if _eval_poly(f, point) == 0]
            raise PoleError(f"denominator factor(s) {', '.join(bad)} vanish at q={q0}, z={tuple(z0)}")
        val = _eval_poly(self.num, point) / d
        for x, e in zip(point, self.shift):
            if e:
                if x == 0:
                    raise PoleError("monomial factor vanishes at the evaluation point")
                val *= x ** e
        return val

    def substitute_lambda(self, exps: Sequence[AffineExponent]) -> "ScalarRational":
        """Replace ``z_i`` by ``q ** exps[i]`` (used for numeric highest weights)."""
        out = ZERO
        # evaluate numerator and denominator as Laurent polynomials
        def subst(p):
            terms = {}
            for m, c in p.terms():
                e = [m[0]] + [0] * MAX_RANK
                for i, k in enumerate(m[1:]):
                    if k:
                        x = exps[i] if i < len(exps) else AffineExponent(0, tuple(1 if j == i else 0 for j in range(i + 1)))
                        ex = x.exps()
                        for t in range(NVARS):
                            e[t] += k * ex[t]
                e = tuple(e)
                terms[e] = terms.get(e, 0) + int(c)
            return _laurent_from_terms(terms)

        out = subst(self.num) / subst(self.den)
        sh = [self.shift[0]] + [0] * MAX_RANK
        for i, k in enumerate(self.shift[1:]):
            if k:
                x = exps[i] if i < len(exps) else AffineExponent(0, tuple(1 if j == i else 0 for j in range(i + 1)))
                ex = x.exps()
                for t in range(NVARS):
                    sh[t] += k * ex[t]
        return out * ScalarRational.monomial(sh)

    # -- (de)serialization and display ---------------------------------
    def laurent_terms(self, which: str = "num") -> list[tuple[tuple[int, ...], int]]:
        """Terms of the numerator (with the monomial shift folded in) or denominator."""
        if which == "num":
            return sorted(((tuple(int(e) + s for e, s in zip(m, self.shift)), int(c)) for m, c in self.num.terms()), reverse=True)
        return sorted(((tuple(int(e) for e in m), int(c)) for m, c in self.den.terms()), reverse=True)

    def to_json(self, rank: int = MAX_RANK) -> dict:
        def enc(terms):
            out = []
            for m, c in terms:
                if any(m[1 + rank:]):
                    raise ValueError("element involves weight parameters beyond the requested rank")
                out.append([str(Fraction(c))] + list(m[: 1 + rank]))
            return out

        return {"num": enc(self.laurent_terms("num")), "den": enc(self.laurent_terms("den"))}

    @classmethod
    def from_json(cls, obj: dict) -> "ScalarRational":
        def dec(rows):
            terms = {}
            for row in rows:
                e = tuple(int(x) for x in row[1:])
                e = e + (0,) * (NVARS - len(e))
                terms[e] = terms.get(e, 0) + Fraction(row[0])
            return _laurent_from_terms(terms)

        return dec(obj["num"]) / dec(obj["den"])

    def __str__(self):
        num = _laurent_str(self.laurent_terms("num"))
        if self.den.is_one():
            return num
        den = _laurent_str(self.laurent_terms("den"))
        if len(self.num) > 1:
            num = f"({num})"
        return f"{num}/({den})"

    def __repr__(self):
        return f"ScalarRational({self})"


def _laurent_from_terms(terms: dict) -> ScalarRational:
    terms = {tuple(e) + (0,) * (NVARS - len(e)): Fraction(c) for e, c in terms.items() if c != 0}
    if not terms:
        return ZERO
    low = tuple(min(e[i] for e in terms) for i in range(NVARS))
    den = 1
    for c in terms.values():
        den = den * c.denominator // _gcd(den, c.denominator)
    poly = _CTX.from_dict({_sub_exps(e, low): int(c * den) for e, c in terms.items()})
    return ScalarRational(poly, _CTX.from_dict({_ZERO_EXP: den}), low)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _point(q0, z0):
    pt = [Fraction(q0)] + [Fraction(x) for x in z0]
    return pt + [Fraction(1)] * (NVARS - len(pt))


def _eval_poly(p, point) -> Fraction:
    total = Fraction(0)
    for m, c in p.terms():
        t = Fraction(int(c))
        for x, e in zip(point, m):
            if e:
                t *= x ** int(e)
        total += t
    return total


def _laurent_str(terms) -> str:
    if not terms:
        return "0"
    pieces = []
    for m, c in terms:
        factors = []
        for name, e in zip(VARNAMES, m):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}" if e > 0 else f"{name}^({e})")
        mono = "*".join(factors)
        c = int(c)
        if not mono:
            s = str(abs(c))
        elif abs(c) == 1:
            s = mono
        else:
            s = f"{abs(c)}*{mono}"
        pieces.append(("-" if c < 0 else "+", s))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, s in pieces[1:]:
        out += f" {sign} {s}"
    return out


ZERO = ScalarRational()
ONE = ScalarRational.const(1)
Q = ScalarRational.monomial((1,))
Q_DIFF = Q - Q.inverse()


def z(i: int) -> ScalarRational:
    """The generator ``z_i = q**(lambda, alpha_i)`` (1-based index)."""
    exps = [0] * NVARS
    exps[i] = 1
    return ScalarRational.monomial(exps)


def q_int(x) -> ScalarRational:
    """The q-number ``[x]_q = (q^x - q^-x) / (q - q^-1)``."""
    x = _as_exponent(x)
    if x.is_zero:
        return ZERO
    return (ScalarRational.q_power(x) - ScalarRational.q_power(-x)) / Q_DIFF


def q_factorial(n: int, d: int = 1) -> ScalarRational:
    """``[n]_{q^d}!``."""
    out = ONE
    for k in range(1, n + 1):
        out = out * q_int_base(k, d)
    return out


def q_int_base(n: int, d: int = 1) -> ScalarRational:
    """``[n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d})``."""
    if n == 0:
        return ZERO
    return (ScalarRational.q_power(d * n) - ScalarRational.q_power(-d * n)) / (
        ScalarRational.q_power(d) - ScalarRational.q_power(-d)
    )


def q_binomial(n: int, k: int, d: int = 1) -> ScalarRational:
    if k < 0 or k > n:
        return ZERO
    return q_factorial(n, d) / (q_factorial(k, d) * q_factorial(n - k, d))


def phi(x) -> ScalarRational:
    """``phi(x) = q^{-x} / [x]_q``; undefined at ``x = 0``."""
    x = _as_exponent(x)
    if x.is_zero:
        raise PoleError("pole of phi at x = 0")
    return ScalarRational.q_power(-x) / q_int(x)


def specialize(f: ScalarRational, q0, z0: Sequence = ()) -> Fraction:
    return f.specialize(q0, z0)


def scalar_sum(items: Iterable[ScalarRational]) -> ScalarRational:
    out = ZERO
    for x in items:
        out = out + x
    return out
