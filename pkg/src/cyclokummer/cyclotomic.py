"""Arithmetic in the p-th cyclotomic field K = Q(zeta).

Two tiers share one interface:

* :class:`CycNum` -- exact elements of K with rational coefficients.
* :class:`CycMod` -- elements of Z[zeta]/p^N, i.e. O_K modulo pi^(N(p-1)).

Both use the power basis 1, zeta, ..., zeta^(p-2).  Internally a product is
formed on the redundant basis of length p (arithmetic modulo x^p - 1) and then
folded back with zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2)).

The Galois automorphism sigma^j sends zeta to zeta^(v^j) for a primitive root v
supplied by the caller.  lambda = zeta - 1 generates the prime pi above p.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from . import _kronecker

Rational = Union[int, Fraction]


class AtLeast(int):
    """A valuation known only as a lower bound (precision exhausted)."""

    def __repr__(self) -> str:
        return f"AtLeast({int(self)})"


def _fold(raw: Sequence, p: int) -> list:
    acc = [0] * p
    for i, c in enumerate(raw):
        acc[i % p] += c
    top = acc[p - 1]
    return [acc[i] - top for i in range(p - 1)]


class _Cyc:
    """Operations common to both tiers; subclasses provide the coefficient ring."""

    __slots__ = ("p", "coeffs")

    p: int
    coeffs: tuple

    # -- construction helpers implemented by subclasses
    def _new(self, coeffs: Sequence) -> "_Cyc":
        raise NotImplementedError

    def _mul_raw(self, a: Sequence, b: Sequence) -> list:
        raise NotImplementedError

    def _coerce(self, other) -> "_Cyc":
        raise NotImplementedError

    def inverse(self) -> "_Cyc":
        raise NotImplementedError

    # -- ring structure
    def const(self, c: Rational) -> "_Cyc":
        return self._new([c] + [0] * (self.p - 2))

    def zero(self) -> "_Cyc":
        return self._new([0] * (self.p - 1))

    def one(self) -> "_Cyc":
        return self.const(1)

    def zeta(self, k: int = 1) -> "_Cyc":
        raw = [0] * self.p
        raw[k % self.p] = 1
        return self._new(_fold(raw, self.p))

    def __add__(self, other):
        other = self._coerce(other)
        return self._new([a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return self._new([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return self._new([-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._new([a * other for a in self.coeffs])
        if not isinstance(other, _Cyc):
            return NotImplemented
        other = self._coerce(other)
        return self._new(_fold(self._mul_raw(self.coeffs, other.coeffs), self.p))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * self._coerce(other).inverse()
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.const(other)
        if type(other) is not type(self):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _key(self):
        return (self.p, self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    # -- structure-preserving maps
    def galois(self, k: int) -> "_Cyc":
        """The automorphism zeta -> zeta^k (k prime to p)."""
        p = self.p
        k %= p
        if k == 0:
            raise ValueError("zeta -> 1 is not an automorphism")
        raw = [0] * p
        for i, c in enumerate(self.coeffs):
            raw[(i * k) % p] += c
        return self._new(_fold(raw, p))

    def mul_zeta(self, t: int) -> "_Cyc":
        """Multiply by zeta^t (a cyclic shift on the length-p basis)."""
        p = self.p
        raw = [0] * p
        for i, c in enumerate(self.coeffs):
            raw[(i + t) % p] = c
        return self._new(_fold(raw, p))

    def conjugate(self) -> "_Cyc":
        return self.galois(-1)

    def lambda_digits(self) -> list:
        """Coordinates on the basis 1, lambda, ..., lambda^(p-2)."""
        binom = _binomials(self.p)
        c = self.coeffs
        n = self.p - 1
        return self._reduce_list([sum(binom[i][k] * c[i] for i in range(k, n)) for k in range(n)])

    def _reduce_list(self, values: list) -> list:
        return values


@lru_cache(maxsize=None)
def _binomials(p: int) -> tuple:
    return tuple(tuple(math.comb(i, k) for k in range(p - 1)) for i in range(p - 1))


class CycNum(_Cyc):
    """Exact element of Q(zeta_p) on the power basis."""

    __slots__ = ()

    def __init__(self, p: int, coeffs: Sequence[Rational]):
        if len(coeffs) != p - 1:
            raise ValueError(f"expected {p - 1} coefficients, got {len(coeffs)}")
        self.p = p
        self.coeffs = tuple(c if isinstance(c, int) else _normalize_fraction(c) for c in coeffs)

    def _new(self, coeffs):
        return CycNum(self.p, coeffs)

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return self.const(other)
        if not isinstance(other, CycNum) or other.p != self.p:
            raise TypeError(f"cannot combine CycNum(p={self.p}) with {other!r}")
        return other

    def _mul_raw(self, a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return out

    def norm(self) -> Fraction:
        """Product of all p-1 conjugates."""
        prod = self.one()
        for k in range(1, self.p):
            prod = prod * self.galois(k)
        return Fraction(prod.coeffs[0])

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta)")
        cof = self.one()
        for k in range(2, self.p):
            cof = cof * self.galois(k)
        return cof * (1 / Fraction((self * cof).coeffs[0]))

    def to_mod(self, N: int) -> "CycMod":
        """Reduce a p-integral element into Z[zeta]/p^N."""
        modulus = self.p ** N
        out = []
        for c in self.coeffs:
            c = Fraction(c)
            if c.denominator % self.p == 0:
                raise ValueError("element is not p-integral")
            out.append(c.numerator * pow(c.denominator, -1, modulus) % modulus)
        return CycMod(self.p, N, out)

    def __repr__(self):
        return f"CycNum(p={self.p}, {list(map(str, self.coeffs))})"


def _normalize_fraction(c) -> Rational:
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


class CycMod(_Cyc):
    """Element of Z[zeta_p]/p^N; coefficients are reduced into [0, p^N)."""

    __slots__ = ("N", "modulus")

    def __init__(self, p: int, N: int, coeffs: Sequence[int]):
        if N < 1:
            raise ValueError("precision N must be >= 1")
        if len(coeffs) != p - 1:
            raise ValueError(f"expected {p - 1} coefficients, got {len(coeffs)}")
        self.p = p
        self.N = N
        self.modulus = p ** N
        m = self.modulus
        self.coeffs = tuple(int(c) % m for c in coeffs)

    def _new(self, coeffs):
        return CycMod(self.p, self.N, coeffs)

    def _key(self):
        return (self.p, self.N, self.coeffs)

    def _coerce(self, other):
        if isinstance(other, int):
            return self.const(other)
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise ValueError("scalar is not p-integral")
            return self.const(other.numerator * pow(other.denominator, -1, self.modulus))
        if not isinstance(other, CycMod) or other.p != self.p or other.N != self.N:
            raise TypeError(f"cannot combine CycMod(p={self.p}, N={self.N}) with {other!r}")
        return other

    def __mul__(self, other):
        if isinstance(other, Fraction):
            other = self._coerce(other).coeffs[0]
        return super().__mul__(other)

    __rmul__ = __mul__

    def _mul_raw(self, a, b):
        return _kronecker.convolve(a, b, self.modulus - 1)

    def _reduce_list(self, values):
        m = self.modulus
        return [v % m for v in values]

    def inverse(self) -> "CycMod":
        """Inverse of a pi-unit by Newton iteration y <- y(2 - xy)."""
        p = self.p
        b0 = sum(self.coeffs) % p
        if b0 == 0:
            raise ValueError("element is not a unit modulo pi")
        y = self.const(pow(b0, -1, self.modulus))
        # each step doubles the lambda-adic precision of y
        for _ in range((self.N * (p - 1)).bit_length() + 2):
            xy = self * y
            if xy == 1:
                return y
            y = y * (2 - xy)
        raise ArithmeticError("Newton inversion failed to converge")

    def __repr__(self):
        return f"CycMod(p={self.p}, N={self.N}, {list(self.coeffs)})"


Cyc = Union[CycNum, CycMod]


def canonicalize(raw: Sequence[Rational], p: int) -> CycNum:
    """Reduce a coefficient vector of length <= p onto the basis 1..zeta^(p-2)."""
    if len(raw) > p:
        raise ValueError(f"raw vector has length {len(raw)} > p = {p}")
    padded = list(raw) + [0] * (p - len(raw))
    return CycNum(p, _fold(padded, p))


def galois_apply(x: Cyc, j: int, v: int) -> Cyc:
    """sigma^j(x) where sigma: zeta -> zeta^v."""
    return x.galois(pow(v, j % (x.p - 1), x.p))


def _vp_rational(c: Rational, p: int) -> float:
    c = Fraction(c)
    if c == 0:
        return math.inf
    if c.denominator % p == 0:
        raise ValueError("element is not p-integral")
    n, k = abs(c.numerator), 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def lambda_valuation(x: Cyc):
    """pi-adic valuation of x.

    Uses the lambda-adic digits: v(x) = min_k ((p-1) v_p(b_k) + k), the terms
    being pairwise distinct.  For CycMod, the zero element returns
    ``AtLeast(N(p-1))``; any non-zero residue gives an exact value.
    """
    p = x.p
    digits = x.lambda_digits()
    if isinstance(x, CycMod):
        if not any(digits):
            return AtLeast(x.N * (p - 1))
        best = None
        for k, b in enumerate(digits):
            if b:
                n, e = b, 0
                while n % p == 0:
                    n //= p
                    e += 1
                val = (p - 1) * e + k
                best = val if best is None else min(best, val)
        return best
    best = math.inf
    for k, b in enumerate(digits):
        best = min(best, (p - 1) * _vp_rational(b, p) + k)
    return best


class PrimarityClass(enum.Enum):
    NOT_SEMI_PRIMARY = "NotSemiPrimary"
    SEMI_PRIMARY = "SemiPrimary"
    PRIMARY = "Primary"
    HYPER_PRIMARY = "HyperPrimary"


@dataclass(frozen=True)
class Primarity:
    status: PrimarityClass
    valuation: Union[int, float]  # v_pi(x - a^p); AtLeast or inf when unbounded
    a: int

    @property
    def is_primary(self) -> bool:
        return self.status in (PrimarityClass.PRIMARY, PrimarityClass.HYPER_PRIMARY)

    def to_json(self) -> dict:
        val = self.valuation
        return {
            "class": self.status.value,
            "valuation": None if val == math.inf else int(val),
            "valuation_is_lower_bound": isinstance(val, AtLeast) or val == math.inf,
            "a": self.a,
        }

    def __str__(self) -> str:
        if self.status is PrimarityClass.SEMI_PRIMARY:
            return f"SemiPrimary({self.valuation})"
        return self.status.value


def classify_primarity(x: Cyc) -> Primarity:
    """Semi-primary / primary / hyper-primary status of a pi-unit.

    The valuation reported is v_pi(x - a^p) with a in 1..p-1; only the residue
    a = x mod lambda can make it positive, and a mod p fixes a^p mod pi^(p+1).
    """
    p = x.p
    if isinstance(x, CycMod) and x.N * (p - 1) < p + 2:
        raise ValueError(f"precision N={x.N} too small: need N(p-1) >= p+2")
    digits = x.lambda_digits()
    b0 = Fraction(digits[0])
    if b0.denominator % p == 0 or b0.numerator % p == 0:
        raise ValueError("classify_primarity needs v_pi(x) = 0")
    a = b0.numerator * pow(b0.denominator, -1, p) % p
    k = lambda_valuation(x - pow(a, p))
    if k < 2:
        status = PrimarityClass.NOT_SEMI_PRIMARY
    elif k < p:
        status = PrimarityClass.SEMI_PRIMARY
    elif k == p:
        status = PrimarityClass.PRIMARY
    else:
        status = PrimarityClass.HYPER_PRIMARY
    return Primarity(status, k, a)


def groupring_apply(x: Cyc, exponents: Sequence[int], v: int) -> Cyc:
    """prod_j sigma^j(x)^(exponents[j])."""
    result = x.one()
    inv = None
    for j, e in enumerate(exponents):
        if e == 0:
            continue
        if e < 0:
            if inv is None:
                inv = x.inverse()
            base, e = inv, -e
        else:
            base = x
        result = result * galois_apply(base, j, v) ** e
    return result


def norm(x: Cyc):
    """N_{K/Q}(x); a rational for CycNum, a residue mod p^N for CycMod."""
    prod = x.one()
    for k in range(1, x.p):
        prod = prod * x.galois(k)
    if not prod.is_rational():
        raise ArithmeticError("norm is not rational; arithmetic is inconsistent")
    return prod.coeffs[0]


def zeta(p: int, k: int = 1, N: int | None = None) -> Cyc:
    x = CycNum(p, [0] * (p - 1)).zeta(k)
    return x if N is None else x.to_mod(N)


def lam(p: int, N: int | None = None) -> Cyc:
    """lambda = zeta - 1."""
    return zeta(p, 1, N) - 1


def from_ints(p: int, value: Rational, N: int | None = None) -> Cyc:
    x = CycNum(p, [value] + [0] * (p - 2))
    return x if N is None else x.to_mod(N)
