"""Bernoulli numbers modulo p, irregular pairs and primitive roots."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def _check_odd_prime(p: int) -> None:
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")


def multiplicative_order(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ValueError("0 has no multiplicative order")
    k, x = 1, a
    while x != 1:
        x = x * a % p
        k += 1
    return k


def primitive_root(p: int) -> int:
    """Least positive primitive root modulo the odd prime p."""
    _check_odd_prime(p)
    n = p - 1
    factors = [q for q in range(2, n + 1) if n % q == 0 and is_prime(q)]
    for g in range(2, p):
        if all(pow(g, n // q, p) != 1 for q in factors):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


def primitive_roots(p: int) -> list[int]:
    return [g for g in range(1, p) if multiplicative_order(g, p) == p - 1]


def discrete_log(x: int, v: int, p: int) -> int:
    """n in [0, p-2] with v^n = x mod p (v a primitive root)."""
    x %= p
    y = 1
    for n in range(p - 1):
        if y == x:
            return n
        y = y * v % p
    raise ValueError(f"{x} is not a power of {v} mod {p}")


def bernoulli_exact(n: int) -> list[Fraction]:
    """B_0..B_n from the recurrence sum_{j<=k} C(k+1, j) B_j = 0 (B_1 = -1/2)."""
    B = [Fraction(1)]
    for k in range(1, n + 1):
        s = sum(math.comb(k + 1, j) * B[j] for j in range(k))
        B.append(-s / (k + 1))
    return B


def bernoulli_even_mod_p(p: int) -> dict[int, int]:
    """{2k: B_2k mod p} for 2 <= 2k <= p-3.

    Power-sum congruence: for even n <= p-3, sum_{a<p} a^n = p B_n mod p^2.
    """
    _check_odd_prime(p)
    if p < 5:
        return {}
    mod = p * p
    a = np.arange(1, p, dtype=np.int64)
    a2 = a * a % mod
    power = a2.copy()
    out = {}
    for n in range(2, p - 2, 2):
        s = int(power.sum()) % mod
        if s % p:
            raise ArithmeticError(f"power sum for n={n} not divisible by p")
        out[n] = s // p
        power = power * a2 % mod
    return out


def normalize_bernoulli_index(idx: int, p: int) -> tuple[int, bool]:
    """Move an index into [0, p-2]; odd indices are reflected to p - idx.

    Returns (index, reflected).  Reflection pairs the odd index k with the even
    index p - k, as in the identity B_{p-k} = B_k read modulo p.
    """
    k = idx % (p - 1)
    if k % 2 == 0:
        return k, False
    return p - k, True


@dataclass(frozen=True)
class IrregularPair:
    p: int
    two_m: int
    v: int
    mu_plus: int
    mu_minus: int

    @property
    def m(self) -> int:
        return self.two_m // 2

    def check(self) -> bool:
        p, v = self.p, self.v
        return (
            self.two_m % 2 == 0
            and 2 <= self.two_m <= p - 3
            and self.mu_plus == pow(v, self.two_m, p)
            and self.mu_minus == pow(v, p - self.two_m, p)
            and self.mu_plus * self.mu_minus % p == v % p
        )


def irregular_pairs(p: int, v: int | None = None) -> list[IrregularPair]:
    """Irregular pairs (p, 2m) in ascending order; empty if p is regular."""
    _check_odd_prime(p)
    if v is None:
        v = primitive_root(p)
    residues = bernoulli_even_mod_p(p)
    return [
        IrregularPair(p, n, v, pow(v, n, p), pow(v, p - n, p))
        for n, r in sorted(residues.items())
        if r == 0
    ]
