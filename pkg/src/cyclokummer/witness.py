"""Singular units built from cyclotomic units, and relation checks for candidates.

A unit witness for the eigenvalue mu = v^(2m) is

    A = prod_j sigma^j(delta)^(e_j),   e_j = mu^(-j) mod p,

with delta = zeta^((1-v)/2) (1 - zeta^v)/(1 - zeta).  Because
e_(j-1) - mu e_j = p t_j, the cofactor alpha = prod_j sigma^j(delta)^(t_j)
satisfies sigma(A) = A^mu alpha^p identically.

p-th-power questions in K are answered with power-residue characters at split
primes q = 1 mod p: if x is a p-th power then x(r)^((q-1)/p) = 1 for every
primitive p-th root of unity r mod q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .bernoulli import discrete_log, is_prime
from .cyclotomic import (
    AtLeast,
    Cyc,
    CycMod,
    CycNum,
    Primarity,
    canonicalize,
    classify_primarity,
    galois_apply,
    groupring_apply,
    lambda_valuation,
)

KINDS = ("negative", "positive", "unit")
DEFAULT_CHARACTER_PRIMES = 5


# -- p-th power characters ---------------------------------------------------

Evaluator = Callable[[int, int], int]


def split_primes(p: int, count: int, start: int | None = None) -> list[int]:
    """The first `count` primes q = 1 mod p with q > start (default 2p)."""
    start = 2 * p if start is None else start
    q = ((start - 1) // p + 1) * p + 1
    out = []
    while len(out) < count:
        if is_prime(q):
            out.append(q)
        q += p
    return out


def _unity_roots(p: int, q: int) -> tuple[int, dict[int, int]]:
    """A primitive p-th root r0 mod q and the table r0^t -> t."""
    for x in range(2, q):
        r0 = pow(x, (q - 1) // p, q)
        if r0 != 1:
            return r0, {pow(r0, t, q): t for t in range(p)}
    raise AssertionError("q = 1 mod p always has p-th roots of unity")


def eval_cyc(x: CycNum, r: int, q: int) -> int:
    """Image of x under zeta -> r in F_q; 0 when a denominator vanishes mod q."""
    acc = 0
    for c in reversed(x.coeffs):
        if not isinstance(c, int):
            if c.denominator % q == 0:
                return 0
            c = c.numerator * pow(c.denominator, -1, q)
        acc = (acc * r + c) % q
    return acc


def joint_characters(
    evaluators: Sequence[Evaluator], p: int, primes: int = DEFAULT_CHARACTER_PRIMES
) -> list[list[int]]:
    """Power-residue exponents of several elements at the same primes over q.

    `evaluate(r, q)` returns the image of an element under zeta -> r.  Split
    primes q where any of the elements vanishes are skipped for all of them,
    so the returned lists line up entry by entry.
    """
    chars: list[list[int]] = [[] for _ in evaluators]
    found = 0
    q = 2 * p
    while found < primes:
        (q,) = split_primes(p, 1, q)
        r0, table = _unity_roots(p, q)
        roots = [pow(r0, k, q) for k in range(1, p)]
        values = [[ev(r, q) for r in roots] for ev in evaluators]
        if all(all(row) for row in values):
            for out, row in zip(chars, values):
                out.extend(table[pow(val, (q - 1) // p, q)] for val in row)
            found += 1
    return chars


def pth_power_characters(
    evaluate: Evaluator, p: int, primes: int = DEFAULT_CHARACTER_PRIMES
) -> list[int]:
    """Exponents t in Z/p of the p-th power residue symbol at each prime over q."""
    return joint_characters([evaluate], p, primes)[0]


def word_evaluator(base: CycNum, exponents: Sequence[int], v: int) -> Evaluator:
    """Evaluator for prod_j sigma^j(base)^(exponents[j]) without expanding it."""
    p = base.p
    cache: dict[tuple[int, int], int] = {}

    def base_at(x: int, q: int) -> int:
        if (x, q) not in cache:
            cache[x, q] = eval_cyc(base, x, q)
        return cache[x, q]

    def evaluate(r: int, q: int) -> int:
        out = 1
        for j, e in enumerate(exponents):
            if e:
                b = base_at(pow(r, pow(v, j, p), q), q)
                if b == 0:
                    return 0
                out = out * pow(b, e, q) % q
        return out

    return evaluate


def cyc_evaluator(x: CycNum) -> Evaluator:
    return lambda r, q: eval_cyc(x, r, q)


def looks_like_pth_power(evaluate: Evaluator, p: int, primes: int = DEFAULT_CHARACTER_PRIMES) -> bool:
    """Monte-Carlo test; a False answer is a proof, True has error <= p^-primes."""
    return not any(pth_power_characters(evaluate, p, primes))


def kummer_class_exponent(
    x: Evaluator, y: Evaluator, p: int, primes: int = DEFAULT_CHARACTER_PRIMES
) -> Optional[int]:
    """Some n in 1..p-1 with x y^(-n) passing the p-th power test, else None."""
    cx, cy = joint_characters([x, y], p, primes)
    for n in range(1, p):
        if all((a - n * b) % p == 0 for a, b in zip(cx, cy)):
            return n
    return None


# -- unit witnesses -------------------------------------------------------------

def cyclotomic_unit_base(p: int, v: int) -> CycNum:
    """delta = zeta^((1-v)/2) (1 + zeta + ... + zeta^(v-1)), a real unit."""
    h = (1 - v) * pow(2, -1, p) % p
    raw = [0] * p
    for i in range(v):
        raw[(h + i) % p] += 1
    return canonicalize(raw, p)


def default_precision(p: int) -> int:
    return -(-(p + 6) // (p - 1)) + 2


@dataclass
class SingularWitness:
    p: int
    v: int
    m: int
    mu: int
    kind: str
    precision: Optional[int]
    A: Cyc
    alpha: Cyc
    a: int
    primarity: Primarity
    exponents: tuple = ()
    alpha_exponents: tuple = ()
    base: Optional[CycNum] = None
    degenerate: bool = False
    alerts: list = field(default_factory=list)

    def identity_holds(self) -> bool:
        """sigma(A) == A^mu alpha^p at working precision."""
        return galois_apply(self.A, 1, self.v) == self.A ** self.mu * self.alpha ** self.p

    def A_evaluator(self) -> Evaluator:
        if self.base is not None:
            return word_evaluator(self.base, self.exponents, self.v)
        if isinstance(self.A, CycNum):
            return cyc_evaluator(self.A)
        raise ValueError("no exact representation of A available")

    def alpha_evaluator(self) -> Evaluator:
        if self.base is not None:
            return word_evaluator(self.base, self.alpha_exponents, self.v)
        if isinstance(self.alpha, CycNum):
            return cyc_evaluator(self.alpha)
        raise ValueError("no exact representation of alpha available")

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "v": self.v,
            "m": self.m,
            "mu": self.mu,
            "kind": self.kind,
            "precision": self.precision,
            "A": cyc_to_strings(self.A),
            "alpha": cyc_to_strings(self.alpha),
            "a": self.a,
            "primarity": self.primarity.to_json(),
            "degenerate": self.degenerate,
            "alerts": list(self.alerts),
        }


def cyc_to_strings(x: Cyc) -> list[str]:
    return [str(c) for c in x.coeffs]


def kummer_unit_witness(
    p: int,
    v: int,
    m: int,
    precision: Optional[int] = None,
    *,
    base: Optional[CycNum] = None,
    character_primes: int = DEFAULT_CHARACTER_PRIMES,
) -> SingularWitness:
    """Singular unit with sigma(A) = A^mu alpha^p for mu = v^(2m).

    ``precision=None`` selects exact arithmetic (small p only).  ``base``
    overrides the cyclotomic unit delta.
    """
    if not 1 <= m <= (p - 3) // 2:
        raise ValueError(f"m must lie in 1..{(p - 3) // 2}, got {m}")
    if precision is not None and precision * (p - 1) < p + 2:
        raise ValueError(f"precision {precision} too small for p={p}: need N(p-1) >= p+2")
    mu = pow(v, 2 * m, p)
    delta = base if base is not None else cyclotomic_unit_base(p, v)
    e = tuple(pow(mu, -j, p) for j in range(p - 1))
    t = []
    for j in range(p - 1):
        diff = e[j - 1] - mu * e[j]  # e[-1] is e_(p-2), the wrap-around term
        assert diff % p == 0
        t.append(diff // p)
    work = delta if precision is None else delta.to_mod(precision)
    A = groupring_apply(work, e, v)
    alpha = groupring_apply(work, t, v)
    prim = classify_primarity(A)
    w = SingularWitness(
        p=p, v=v, m=m, mu=mu, kind="unit", precision=precision, A=A, alpha=alpha,
        a=prim.a, primarity=prim, exponents=e, alpha_exponents=tuple(t), base=delta,
    )
    w.degenerate = looks_like_pth_power(w.A_evaluator(), p, character_primes)
    if w.degenerate:
        w.alerts.append("degenerate: A passes the p-th power test, so K(A^(1/p)) = K")
    if prim.is_primary:
        w.alerts.append(f"primary: A is {prim}, so pi does not ramify in K(A^(1/p))")
    return w


# -- relation checks on candidates ------------------------------------------------

@dataclass
class RelationReport:
    kind: str
    mu: int
    n: int  # discrete log of mu
    m: int
    valuation: object
    semi_primary: bool
    eigen_relation: Optional[bool]
    congruence: bool
    parity: bool
    realness: Optional[bool] = None
    d_relation: Optional[bool] = None

    @property
    def all_ok(self) -> bool:
        checks = [self.semi_primary, self.eigen_relation, self.congruence, self.parity,
                  self.realness, self.d_relation]
        return all(c is not False for c in checks) and self.eigen_relation is not None

    def to_json(self) -> dict:
        val = self.valuation
        return {
            "kind": self.kind,
            "mu": self.mu,
            "log_mu": self.n,
            "m": self.m,
            "valuation": None if val == math.inf else int(val),
            "valuation_is_lower_bound": isinstance(val, AtLeast) or val == math.inf,
            "semi_primary": self.semi_primary,
            "eigen_relation": self.eigen_relation,
            "congruence": self.congruence,
            "parity": self.parity,
            "realness": self.realness,
            "d_relation": self.d_relation,
            "all_ok": self.all_ok,
        }


def verify_singular_relations(
    A: Cyc,
    mu: int,
    kind: str,
    v: int,
    D: Optional[Cyc] = None,
    *,
    alpha: Optional[Cyc] = None,
    evaluator: Optional[Evaluator] = None,
    character_primes: int = DEFAULT_CHARACTER_PRIMES,
) -> RelationReport:
    """Check the defining relations of a negative, positive or unit singular number.

    sigma(A) A^(-mu) in K^p is decided from ``alpha`` when given, otherwise by the
    character test (needs an exact A or an ``evaluator``); it is None when
    undecidable.
    """
    p = A.p
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    if mu % p == 0:
        raise ValueError("mu must be a unit mod p")
    if lambda_valuation(A) != 0:
        raise ValueError("A must be a pi-unit")
    n = discrete_log(mu, v, p)
    parity = (n % 2 == 1) if kind == "negative" else (n % 2 == 0)
    m = (n - 1) // 2 if kind == "negative" else n // 2
    prim = classify_primarity(A)
    need = 2 * m + 1 if kind == "negative" else 2 * m
    congruence = 1 <= m <= (p - 3) // 2 and prim.valuation >= need

    mu_int = mu % p
    sA = galois_apply(A, 1, v)
    if alpha is not None:
        eigen = sA == A ** mu_int * alpha ** p
    else:
        if evaluator is None and isinstance(A, CycNum):
            evaluator = cyc_evaluator(A)
        if evaluator is None:
            eigen = None
        else:
            ev = evaluator

            def ratio(r: int, q: int) -> int:
                base = ev(r, q)
                if base == 0:
                    return 0  # the character test skips this q
                return ev(pow(r, v, q), q) * pow(base, -mu_int, q) % q

            eigen = looks_like_pth_power(ratio, p, character_primes)

    realness = (A.conjugate() == A) if kind == "unit" else None
    d_rel = None
    if D is not None:
        if kind == "negative":
            d_rel = A * A.conjugate() == D ** p
        elif kind == "positive":
            d_rel = A == A.conjugate() * D ** p
    return RelationReport(
        kind=kind, mu=mu_int, n=n, m=m, valuation=prim.valuation,
        semi_primary=prim.valuation >= 2, eigen_relation=eigen, congruence=congruence,
        parity=parity, realness=realness, d_relation=d_rel,
    )
