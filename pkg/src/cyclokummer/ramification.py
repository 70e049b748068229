"""Decomposition of p in the degree-p field M = Q(Omega).

The primes of S above pi are permuted by sigma_mu through k -> k v mu^(-1)
(mod p).  With d the multiplicative order of v mu^(-1):

* primary case:     p O_M = P_0 * (P_1 ... P_r)^d with r = (p-1)/d, all f = 1;
* non-primary case: p O_M = P^p.

The local verifier checks such a prediction against the minimal polynomial of
Omega modulo p^N: root enumeration over F_p, the Dedekind index test, and
Newton polygons where Dedekind is silent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .bernoulli import multiplicative_order


class StickelbergerForbidden(ValueError):
    """mu = v mod p, which the Stickelberger relation excludes."""


def _check_mu(p: int, v: int, mu: int) -> None:
    if mu % p == 0:
        raise ValueError("mu must be a unit mod p")
    if (mu - v) % p == 0:
        raise StickelbergerForbidden(f"mu = v = {v} mod {p} is excluded")


def order_d(p: int, v: int, mu: int) -> int:
    """Multiplicative order of v mu^(-1) mod p."""
    _check_mu(p, v, mu)
    return multiplicative_order(v * pow(mu, -1, p), p)


def orbit_map(p: int, v: int, mu: int, k: int) -> int:
    """Index n_k with sigma_mu(pi_k) = pi_(n_k), i.e. k v mu^(-1) mod p."""
    if not 0 <= k <= p - 1:
        raise ValueError(f"k must lie in 0..{p - 1}")
    return k * v * pow(mu, -1, p) % p


def orbits(p: int, v: int, mu: int) -> list[list[int]]:
    """Cycles of {0..p-1} under k -> k v mu^(-1), each starting at its least index."""
    _check_mu(p, v, mu)
    seen = [False] * p
    out = []
    for start in range(p):
        if seen[start]:
            continue
        cycle, k = [], start
        while not seen[k]:
            seen[k] = True
            cycle.append(k)
            k = orbit_map(p, v, mu, k)
        out.append(cycle)
    return out


def orbit_partition(p: int, v: int, mu: int) -> list[int]:
    """Orbit lengths, the fixed point 0 first."""
    return [len(c) for c in orbits(p, v, mu)]


FIXES_ALL = "fixes_all"
NEGATES_INDICES = "negates_indices"


@dataclass(frozen=True)
class HalfTurn:
    action: str
    value: int  # (v mu^-1)^((p-1)/2) as 1 or -1
    expected: Optional[str]

    @property
    def consistent(self) -> bool:
        return self.expected is None or self.action == self.expected


def half_turn(p: int, v: int, mu: int, kind: Optional[str] = None) -> HalfTurn:
    """Action of sigma_mu^((p-1)/2) on the primes pi_k.

    Negative kind expects every pi_k fixed; positive and unit kinds expect
    k -> -k.  The computed action is reported with the expectation so that a
    mismatch is visible rather than raised.
    """
    _check_mu(p, v, mu)
    val = pow(v * pow(mu, -1, p), (p - 1) // 2, p)
    if val == 1:
        action, sign = FIXES_ALL, 1
    elif val == p - 1:
        action, sign = NEGATES_INDICES, -1
    else:
        raise ArithmeticError("square of the half turn is not 1")
    expected = None
    if kind is not None:
        expected = FIXES_ALL if kind == "negative" else NEGATES_INDICES
    return HalfTurn(action, sign, expected)


@dataclass(frozen=True)
class PrimeShape:
    e: int
    f: int
    count: int

    def to_json(self) -> dict:
        return {"e": self.e, "f": self.f, "count": self.count}


@dataclass
class DecompositionReport:
    p: int
    mu: int
    d: int
    primary: bool
    primes: list
    orbit_partition: list = field(default_factory=list)

    def degree_sum(self) -> int:
        return sum(s.e * s.f * s.count for s in self.primes)

    def ramification_indices(self) -> list[int]:
        return sorted(s.e for s in self.primes for _ in range(s.count))

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "mu": self.mu,
            "d": self.d,
            "primary": self.primary,
            "primes": [s.to_json() for s in self.primes],
            "orbit_partition": list(self.orbit_partition),
        }


def predict_decomposition(p: int, v: int, mu: int, primary: bool) -> DecompositionReport:
    d = order_d(p, v, mu)
    if primary:
        primes = [PrimeShape(1, 1, 1), PrimeShape(d, 1, (p - 1) // d)]
    else:
        primes = [PrimeShape(p, 1, 1)]
    return DecompositionReport(p, mu % p, d, primary, primes, orbit_partition(p, v, mu))


# -- local verification from the minimal polynomial ----------------------------

CONFIRMED = "confirmed"
INCONCLUSIVE = "inconclusive"
CONTRADICTED = "contradicted"


@dataclass
class Verdict:
    status: str
    reason: str = ""
    roots: dict = field(default_factory=dict)  # root mod p -> multiplicity
    residual_degree: int = 0
    eisenstein_shift: Optional[bool] = None

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "reason": self.reason,
            "roots": {str(c): e for c, e in sorted(self.roots.items())},
            "residual_degree": self.residual_degree,
            "eisenstein_shift": self.eisenstein_shift,
        }


def _eval_mod(f: Sequence[int], x: int, m: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % m
    return acc


def _divide_linear(f: Sequence[int], c: int, p: int) -> tuple[list[int], int]:
    """Synthetic division of f by (x - c) over F_p: (quotient, remainder)."""
    n = len(f) - 1
    q = [0] * n
    acc = 0
    for k in range(n, 0, -1):
        acc = (acc * c + f[k]) % p
        q[k - 1] = acc
    rem = (acc * c + f[0]) % p
    return q, rem


def _poly_mul(a: Sequence[int], b: Sequence[int], m: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % m
    return out


def _strip(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_gcd_mod_p(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Monic gcd over F_p; [] stands for the zero polynomial."""
    a, b = _strip([x % p for x in a]), _strip([x % p for x in b])
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            coef = a[-1] * inv % p
            shift = len(a) - len(b)
            for i, y in enumerate(b):
                a[shift + i] = (a[shift + i] - coef * y) % p
            _strip(a)
        a, b = b, a
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def taylor_shift(f: Sequence[int], c: int, m: int) -> list[int]:
    """Coefficients of f(x + c) mod m."""
    g = list(f)
    n = len(g)
    for i in range(n):
        for k in range(n - 2, i - 1, -1):
            g[k] = (g[k] + c * g[k + 1]) % m
    return [x % m for x in g]


def taylor_shift_exact(f: Sequence[int], c: int) -> list[int]:
    g = [int(x) for x in f]
    n = len(g)
    for i in range(n):
        for k in range(n - 2, i - 1, -1):
            g[k] += c * g[k + 1]
    return g


def eisenstein_after_shift(f: Sequence[int], p: int, c: int) -> bool:
    """f(x + c) is Eisenstein at p (needs f modulo p^2)."""
    g = taylor_shift(f, c, p * p)
    return all(x % p == 0 for x in g[:-1]) and g[0] % (p * p) != 0


def _vp(x: int, p: int, cap: Optional[int]) -> Optional[int]:
    """p-adic valuation of x, or None when x = 0 mod p^cap (cap None: x = 0)."""
    if cap is not None:
        x %= p ** cap
    if x == 0:
        return None
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


def _lower_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    hull: list[tuple[int, int]] = []
    for pt in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_polygon_shapes(
    g: Sequence[int], e: int, p: int, precision: Optional[int]
) -> Optional[list[int]]:
    """Ramification indices of the roots of g with positive valuation, if forced.

    g is known modulo p^precision and has exactly e roots of positive valuation
    (g_e is a unit, g_0..g_(e-1) are divisible by p).  Each hull segment of
    length l and slope r/l in lowest terms splits off a factor whose irreducible
    pieces all have e divisible by the denominator; when that denominator is l
    the piece is a single totally ramified prime.  Coefficients lost to
    precision are only known to have valuation >= precision; the hull must not
    depend on them, else None is returned.  precision=None means g is exact.
    """
    vals = [_vp(c, p, precision) for c in g[: e + 1]]
    if vals[e] != 0:
        raise ValueError("coefficient at the multiplicity is not a unit")
    if precision is None:
        if vals[0] is None:
            raise ValueError("g vanishes at 0")
        hull = _lower_hull([(k, val) for k, val in enumerate(vals) if val is not None])
        unknown: set[int] = set()
    else:
        hull = _lower_hull([(k, precision if val is None else val) for k, val in enumerate(vals)])
        unknown = {k for k, val in enumerate(vals) if val is None}
    # an unknown point anywhere on the hull except the far left may move it
    for k in unknown - {0}:
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            if x1 <= k <= x2:
                if (precision - y1) * (x2 - x1) <= (y2 - y1) * (k - x1):
                    return None
    # raising an unknown g_0 only steepens the first segment; harmless iff it has length 1
    if 0 in unknown and hull[1][0] != 1:
        return None
    shapes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        length, rise = x2 - x1, y1 - y2
        if length // math.gcd(length, rise) != length:
            return None
        shapes.append(length)
    return shapes


def verify_decomposition_local(
    f: Sequence[int],
    report: DecompositionReport,
    precision: Optional[int] = 2,
    newton_polygon: bool = False,
) -> Verdict:
    """Corroborate a predicted decomposition from f known modulo p^precision.

    f is given constant term first and must be monic of degree p; precision=None
    declares its integer coefficients exact.  The Dedekind criterion decides
    whether the factorisation of f mod p describes the primes of M above p.
    When it fails at a repeated root c the result is inconclusive, unless
    ``newton_polygon`` is set and the Newton polygon of f(x + c) pins the
    primes through c down.
    """
    p = report.p
    if precision is not None and precision < 2:
        raise ValueError("need f modulo at least p^2")
    f = [int(c) for c in f]
    if len(f) != p + 1:
        raise ValueError(f"expected degree {p}, got {len(f) - 1}")
    if f[-1] % (p * p) != 1:
        raise ValueError("polynomial is not monic")
    mod2 = p * p

    # factor over F_p: repeated roots by synthetic division
    rest = [c % p for c in f]
    roots: dict[int, int] = {}
    for c in range(p):
        while len(rest) > 1:
            q, r = _divide_linear(rest, c, p)
            if r:
                break
            roots[c] = roots.get(c, 0) + 1
            rest = q
    residual = len(rest) - 1

    eis = None
    if not report.primary:
        eis = eisenstein_after_shift(f, p, p - 1)

    if residual > 0:
        deriv = [(k * rest[k]) % p for k in range(1, len(rest))]
        if len(_poly_gcd_mod_p(rest, deriv, p)) > 1:
            return Verdict(INCONCLUSIVE, "repeated non-linear factor mod p", roots, residual, eis)

    # Dedekind: g = radical of f mod p, h = f / g, F = (f - g h)/p
    g = rest[:]
    h = [1]
    for c, e in roots.items():
        g = _poly_mul(g, [(-c) % p, 1], mod2)
        for _ in range(e - 1):
            h = _poly_mul(h, [(-c) % p, 1], mod2)
    gh = _poly_mul(g, h, mod2)
    diff = [(a - b) % mod2 for a, b in zip(f, gh + [0] * (len(f) - len(gh)))]
    if any(x % p for x in diff):
        raise ArithmeticError("lifted factorisation does not reduce to f mod p")
    F = [x // p for x in diff]

    observed: list[int] = []
    method = "dedekind"
    for c, e in sorted(roots.items()):
        if e >= 2 and _eval_mod(F, c, p) == 0:
            if not newton_polygon:
                return Verdict(INCONCLUSIVE, "index divisible by p", roots, residual, eis)
            if precision is None:
                shifted = taylor_shift_exact(f, c)
            else:
                shifted = taylor_shift(f, c, p ** precision)
            shapes = newton_polygon_shapes(shifted, e, p, precision)
            if shapes is None:
                return Verdict(
                    INCONCLUSIVE,
                    f"index divisible by p; Newton polygon at {c} not determined"
                    + ("" if precision is None else f" modulo p^{precision}"),
                    roots, residual, eis,
                )
            observed.extend(shapes)
            method = "newton polygon"
        else:
            observed.append(e)

    if residual > 0:
        return Verdict(
            CONTRADICTED, "irreducible factor of degree > 1 forces inertia degree > 1",
            roots, residual, eis,
        )
    observed.sort()
    if observed != report.ramification_indices():
        return Verdict(
            CONTRADICTED, f"observed ramification {observed} ({method}), predicted "
            f"{report.ramification_indices()}", roots, residual, eis,
        )
    return Verdict(CONFIRMED, "" if method == "dedekind" else "via newton polygon",
                   roots, residual, eis)
