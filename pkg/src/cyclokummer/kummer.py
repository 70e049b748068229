"""The Kummer extension S = K[x]/(x^p - A^(p-1)) and its degree-p subfields.

omega is the class of x, so omega^p = A^(p-1).  Elements of S are vectors of
p coefficients in K (exact or mod p^N), entry j multiplying omega^j.

sigma_mu extends sigma with sigma_mu(omega) = omega^mu beta, where
beta = alpha^(p-1) zeta^w is the unique semi-primary choice; theta is the
K-automorphism omega -> omega zeta.  The period element

    Omega = sum_{i=0}^{p-2} sigma_mu^i(omega)

is fixed by sigma_mu and generates a degree-p field M = Q(Omega); its p
conjugates over K are Omega_i = theta^i(Omega).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import _kronecker
from .cyclotomic import Cyc, CycMod, _fold, galois_apply, groupring_apply, lambda_valuation
from .witness import SingularWitness


class NonRationalCoefficient(ArithmeticError):
    """A coefficient of the minimal polynomial left Q at working precision."""


class KummerExtension:
    """Shared data for arithmetic in S: p, v, A, mu and cached powers of A^(p-1)."""

    def __init__(self, A: Cyc, alpha: Cyc, mu: int, v: int):
        self.p = A.p
        self.A = A
        self.alpha = alpha
        self.mu = mu % self.p
        self.v = v
        self.omega_p = A ** (self.p - 1)  # omega^p
        self._omega_p_powers = [A.one(), self.omega_p]
        self._memo: dict = {}  # per-(mu, w) tables; derived data only

    @classmethod
    def from_witness(cls, w: SingularWitness) -> "KummerExtension":
        return cls(w.A, w.alpha, w.mu, w.v)

    def omega_p_power(self, t: int) -> Cyc:
        """(A^(p-1))^t, cached for small t."""
        cache = self._omega_p_powers
        while len(cache) <= min(t, 2 * self.p):
            cache.append(cache[-1] * self.omega_p)
        return cache[t] if t < len(cache) else self.omega_p ** t

    # -- constructors
    def element(self, coeffs: Sequence[Cyc]) -> "ExtElt":
        return ExtElt(self, tuple(coeffs))

    def from_base(self, c) -> "ExtElt":
        zero = self.A.zero()
        if not hasattr(c, "coeffs"):
            c = self.A.const(c)
        return ExtElt(self, (c,) + (zero,) * (self.p - 1))

    def zero(self) -> "ExtElt":
        return ExtElt(self, (self.A.zero(),) * self.p)

    def one(self) -> "ExtElt":
        return self.from_base(1)

    def omega(self, j: int = 1) -> "ExtElt":
        """omega^j for 0 <= j < p."""
        coeffs = [self.A.zero()] * self.p
        coeffs[j] = self.A.one()
        return ExtElt(self, tuple(coeffs))

    def monomial(self, c: Cyc, j: int) -> "ExtElt":
        """c * omega^j for any j >= 0, reduced by omega^p = A^(p-1)."""
        coeffs = [self.A.zero()] * self.p
        coeffs[j % self.p] = c * self.omega_p_power(j // self.p)
        return ExtElt(self, tuple(coeffs))


@dataclass(frozen=True)
class ExtElt:
    ext: KummerExtension
    coeffs: tuple

    def _check(self, other: "ExtElt") -> None:
        if not isinstance(other, ExtElt) or other.ext is not self.ext:
            raise ValueError("elements belong to different Kummer extensions")

    def __add__(self, other: "ExtElt") -> "ExtElt":
        self._check(other)
        return ExtElt(self.ext, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "ExtElt") -> "ExtElt":
        self._check(other)
        return ExtElt(self.ext, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "ExtElt":
        return ExtElt(self.ext, tuple(-a for a in self.coeffs))

    def scale(self, c) -> "ExtElt":
        """Multiply by an element (or integer) of the base field K."""
        return ExtElt(self.ext, tuple(a * c for a in self.coeffs))

    def __mul__(self, other: "ExtElt") -> "ExtElt":
        return ext_mul(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtElt) and other.ext is self.ext and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def in_base_field(self) -> bool:
        return all(c.is_zero() for c in self.coeffs[1:])

    def __repr__(self) -> str:
        return f"ExtElt(p={self.ext.p}, {list(self.coeffs)})"


def ext_mul(x: ExtElt, y: ExtElt) -> ExtElt:
    """Product in S, reduced with omega^p = A^(p-1)."""
    x._check(y)
    ext = x.ext
    if isinstance(ext.A, CycMod):
        return ExtElt(ext, _ext_mul_mod(x.coeffs, y.coeffs, ext))
    p = ext.p
    out = [ext.A.zero() for _ in range(2 * p - 1)]
    for i, a in enumerate(x.coeffs):
        if a.is_zero():
            continue
        for j, b in enumerate(y.coeffs):
            if not b.is_zero():
                out[i + j] = out[i + j] + a * b
    low = [out[j] + out[j + p] * ext.omega_p for j in range(p - 1)] + [out[p - 1]]
    return ExtElt(ext, tuple(low))


def _ext_mul_mod(xs: tuple, ys: tuple, ext: KummerExtension) -> tuple:
    # Two-dimensional Kronecker substitution: omega blocks of stride Z in zeta.
    p = ext.p
    modulus = ext.A.modulus
    N = ext.A.N
    Z = 2 * p - 3

    def flatten(elts):
        flat = []
        pad = [0] * (Z - (p - 1))
        for c in elts:
            flat.extend(c if isinstance(c, tuple) else c.coeffs)
            flat.extend(pad)
        return flat

    fx, fy = flatten(xs), flatten(ys)
    width = _kronecker.slot_bytes(modulus - 1, p * (p - 1))
    raw = _kronecker.unpack(
        _kronecker.pack(fx, width) * _kronecker.pack(fy, width), width, len(fx) + len(fy) - 1
    )
    raw.extend([0] * ((2 * p - 1) * Z - len(raw)))
    blocks = [
        tuple(c % modulus for c in _fold(raw[t * Z:(t + 1) * Z], p)) for t in range(2 * p - 1)
    ]
    # fold omega^(p+t) = omega^t * A^(p-1)
    high = blocks[p:]
    fh = flatten(high)
    width2 = _kronecker.slot_bytes(modulus - 1, p - 1)
    raw2 = _kronecker.unpack(
        _kronecker.pack(fh, width2) * _kronecker.pack(ext.omega_p.coeffs, width2),
        width2,
        len(fh) + p - 2,
    )
    raw2.extend([0] * ((p - 1) * Z - len(raw2)))
    out = []
    for t in range(p):
        lo = blocks[t]
        if t < p - 1:
            folded = _fold(raw2[t * Z:(t + 1) * Z], p)
            lo = [a + b for a, b in zip(lo, folded)]
        out.append(CycMod(p, N, lo))
    return tuple(out)


def theta_apply(x: ExtElt, i: int) -> ExtElt:
    """theta^i: omega -> omega zeta^i, identity on K."""
    p = x.ext.p
    return ExtElt(x.ext, tuple(c.mul_zeta(i * j % p) for j, c in enumerate(x.coeffs)))


@dataclass(frozen=True)
class SigmaMu:
    mu: int
    w: int
    beta: Cyc


def select_semiprimary_w(alpha: Cyc, mu: int) -> SigmaMu:
    """The unique w in [0, p-1] with alpha^(p-1) zeta^w semi-primary.

    With alpha^(p-1) = c0 + c1 lambda mod pi^2, w = -c1/c0 mod p.
    """
    p = alpha.p
    if lambda_valuation(alpha) != 0:
        raise ValueError("alpha must be a pi-unit")
    ap = alpha ** (p - 1)
    c0, c1 = ap.lambda_digits()[:2]
    c0 = _mod_p(c0, p)
    c1 = _mod_p(c1, p)
    w = -c1 * pow(c0, -1, p) % p
    return SigmaMu(mu % p, w, ap.mul_zeta(w))


def _mod_p(c, p: int) -> int:
    if isinstance(c, int):
        return c % p
    return c.numerator * pow(c.denominator, -1, p) % p


class _SigmaTables:
    """Per-extension tables for sigma_mu: beta^j and the omega exponent map."""

    def __init__(self, ext: KummerExtension, s: SigmaMu):
        p = ext.p
        self.targets = [(j * s.mu) % p for j in range(p)]
        self.factors = []
        beta_j = ext.A.one()
        for j in range(p):
            self.factors.append(beta_j * ext.omega_p_power((j * s.mu) // p))
            beta_j = beta_j * s.beta


def _tables(ext: KummerExtension, s: SigmaMu) -> _SigmaTables:
    key = ("sigma", s.mu, s.w)
    if key not in ext._memo:
        ext._memo[key] = _SigmaTables(ext, s)
    return ext._memo[key]


def sigma_mu_apply(x: ExtElt, s: SigmaMu, k: int = 1) -> ExtElt:
    """sigma_mu^k(x): coefficients by sigma, omega^j -> (omega^mu beta)^j."""
    if k < 0:
        raise ValueError("k must be non-negative")
    ext = x.ext
    tab = _tables(ext, s)
    zero = ext.A.zero()
    for _ in range(k):
        out = [zero] * ext.p
        for j, c in enumerate(x.coeffs):
            if not c.is_zero():
                t = tab.targets[j]
                out[t] = out[t] + galois_apply(c, 1, ext.v) * tab.factors[j]
        x = ExtElt(ext, tuple(out))
    return x


def omega_iterative(ext: KummerExtension, s: SigmaMu) -> ExtElt:
    """Omega as the orbit sum of omega under sigma_mu^0..sigma_mu^(p-2)."""
    term = ext.omega()
    total = term
    for _ in range(ext.p - 2):
        term = sigma_mu_apply(term, s)
        total = total + term
    return total


def omega_closed_form(ext: KummerExtension, s: SigmaMu, i: int = 0) -> ExtElt:
    """Omega_i from the explicit sum over k of

        omega^(mu_k) A^((p-1)(mu^k - mu_k)/p) beta^((sigma^k - mu^k)/(sigma - mu)) zeta^(i mu^k)

    with mu_k = mu^k mod p; all exponents are exact integers.
    """
    p = ext.p
    mu = s.mu
    total = ext.zero()
    for k, (j, c) in enumerate(_closed_form_terms(ext, s)):
        total = total + ext.monomial(c.mul_zeta(i * pow(mu, k, p)), j)
    return total


def _closed_form_terms(ext: KummerExtension, s: SigmaMu) -> list:
    key = ("closed", s.mu, s.w)
    if key in ext._memo:
        return ext._memo[key]
    p, mu, v = ext.p, s.mu, ext.v
    terms = []
    for k in range(p - 1):
        mu_k_exact = mu ** k
        mu_k = mu_k_exact % p
        a_part = ext.A ** ((p - 1) * (mu_k_exact - mu_k) // p)
        beta_part = groupring_apply(s.beta, [mu ** (k - 1 - j) for j in range(k)], v)
        terms.append((mu_k, a_part * beta_part))
    ext._memo[key] = terms
    return terms


def all_omegas(ext: KummerExtension, s: SigmaMu, closed_form: bool = False) -> list[ExtElt]:
    """Omega_0..Omega_(p-1)."""
    if closed_form:
        return [omega_closed_form(ext, s, i) for i in range(ext.p)]
    base = omega_iterative(ext, s)
    return [theta_apply(base, i) for i in range(ext.p)]


# -- minimal polynomial --------------------------------------------------------

def _poly_mul_monic(f: list, g: list, ext: KummerExtension) -> list:
    """(X^a + f)(X^b + g) for lower-coefficient lists f (len a) and g (len b)."""
    a, b = len(f), len(g)
    out = [ext.zero() for _ in range(a + b)]
    for i, fi in enumerate(f):
        for j, gj in enumerate(g):
            out[i + j] = out[i + j] + fi * gj
    for j, gj in enumerate(g):
        out[a + j] = out[a + j] + gj
    for i, fi in enumerate(f):
        out[b + i] = out[b + i] + fi
    return out


def _product_tree(factors: list, ext: KummerExtension) -> list:
    while len(factors) > 1:
        nxt = [
            _poly_mul_monic(factors[i], factors[i + 1], ext)
            for i in range(0, len(factors) - 1, 2)
        ]
        if len(factors) % 2:
            nxt.append(factors[-1])
        factors = nxt
    return factors[0]


def min_poly(omegas: Sequence[ExtElt]) -> list:
    """Coefficients (constant term first, leading 1 last) of prod_i (X - Omega_i).

    Every coefficient must be a rational number (an integer residue mod p^N in
    the modular tier); anything else raises NonRationalCoefficient.
    """
    if not omegas:
        raise ValueError("need at least one conjugate")
    ext = omegas[0].ext
    lows = _product_tree([[-o] for o in omegas], ext)
    out = []
    for k, c in enumerate(lows):
        if not c.in_base_field() or not c.coeffs[0].is_rational():
            raise NonRationalCoefficient(f"coefficient of X^{k} is not rational")
        out.append(c.coeffs[0].coeffs[0])
    out.append(1)
    return out


def poly_eval(coeffs: Sequence, x: ExtElt) -> ExtElt:
    """Horner evaluation of a polynomial with rational coefficients at x in S."""
    ext = x.ext
    acc = ext.zero()
    for c in reversed(coeffs):
        acc = acc * x + ext.from_base(c)
    return acc


@dataclass
class OmegaReport:
    sigma: SigmaMu
    omegas: list
    closed: list
    cross_formula_ok: bool
    order_ok: bool
    fixed_ok: bool
    distinct_ok: bool


def compute_omegas(ext: KummerExtension, s: Optional[SigmaMu] = None) -> OmegaReport:
    """Both routes to Omega_0..Omega_(p-1) together with the standard consistency checks."""
    if s is None:
        s = select_semiprimary_w(ext.alpha, ext.mu)
    omegas = all_omegas(ext, s)
    closed = all_omegas(ext, s, closed_form=True)
    p = ext.p
    omega = ext.omega()
    return OmegaReport(
        sigma=s,
        omegas=omegas,
        closed=closed,
        cross_formula_ok=omegas == closed,
        order_ok=sigma_mu_apply(omega, s, p - 1) == omega,
        fixed_ok=sigma_mu_apply(omegas[0], s) == omegas[0],
        distinct_ok=len(set(omegas)) == p,
    )
