import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from cyclokummer.bernoulli import primitive_root
from cyclokummer.cyclotomic import (
    AtLeast,
    CycMod,
    CycNum,
    PrimarityClass,
    canonicalize,
    classify_primarity,
    from_ints,
    galois_apply,
    groupring_apply,
    lam,
    lambda_valuation,
    norm,
    zeta,
)

X = sympy.Symbol("x")
SMALL_P = [5, 7, 11, 13]


def sympy_product(p, a, b):
    """Independent product oracle: polynomial product reduced by Phi_p."""
    fa = sympy.Poly(list(reversed(a)), X)
    fb = sympy.Poly(list(reversed(b)), X)
    r = (fa * fb).rem(sympy.Poly(sympy.cyclotomic_poly(p, X), X))
    coeffs = [int(c) for c in reversed(r.all_coeffs())]
    return coeffs + [0] * (p - 1 - len(coeffs))


def cyc_strategy(p, lo=-20, hi=20):
    return st.lists(st.integers(lo, hi), min_size=p - 1, max_size=p - 1).map(lambda c: CycNum(p, c))


@st.composite
def pair_of_cyc(draw, primes=SMALL_P):
    p = draw(st.sampled_from(primes))
    return p, draw(cyc_strategy(p)), draw(cyc_strategy(p))


# -- canonical form ----------------------------------------------------------------

@pytest.mark.parametrize("p", SMALL_P)
def test_canonicalize_zeta_top_power(p):
    assert canonicalize([0] * (p - 1) + [1], p).coeffs == tuple([-1] * (p - 1))


def test_canonicalize_one_and_length_check():
    assert canonicalize([1], 7) == CycNum(7, [1, 0, 0, 0, 0, 0])
    with pytest.raises(ValueError):
        canonicalize([0] * 8, 7)


@pytest.mark.parametrize("p", [5, 7])
def test_product_of_one_minus_zeta_powers_is_p(p):
    prod = CycNum(p, [1] + [0] * (p - 2))
    for k in range(1, p):
        prod = prod * (1 - zeta(p, k))
    assert prod == CycNum(p, [p] + [0] * (p - 2))


@given(pair_of_cyc())
def test_multiplication_matches_sympy_oracle(data):
    p, x, y = data
    assert list((x * y).coeffs) == sympy_product(p, list(x.coeffs), list(y.coeffs))


@given(pair_of_cyc())
def test_field_axioms(data):
    p, x, y = data
    assert x * y == y * x
    assert (x + y) - y == x
    if not x.is_zero():
        assert x * x.inverse() == x.one()
        assert (y / x) * x == y


def test_mod_tier_reduced_and_inverse():
    x = CycMod(7, 3, [-1, 400, 2, 3, 4, 6])
    assert all(0 <= c < 7 ** 3 for c in x.coeffs)
    assert x * x.inverse() == x.one()
    with pytest.raises(ValueError):
        lam(7, 3).inverse()


# -- Galois action -----------------------------------------------------------------

@pytest.mark.parametrize("p", SMALL_P)
def test_galois_examples(p):
    v = primitive_root(p)
    assert galois_apply(zeta(p), 1, v) == zeta(p, v)
    x = CycNum(p, list(range(1, p)))
    assert galois_apply(x, p - 1, v) == x
    half = galois_apply(lam(p), (p - 1) // 2, v)
    assert half == zeta(p, p - 1) - 1
    assert half == lam(p).conjugate()


@given(pair_of_cyc(), st.integers(0, 20))
def test_galois_is_ring_homomorphism(data, j):
    p, x, y = data
    v = primitive_root(p)
    s = lambda z: galois_apply(z, j, v)
    assert s(x + y) == s(x) + s(y)
    assert s(x * y) == s(x) * s(y)


# -- valuations --------------------------------------------------------------------

@pytest.mark.parametrize("p", SMALL_P)
def test_valuation_examples(p):
    v = primitive_root(p)
    assert lambda_valuation(lam(p)) == 1
    assert lambda_valuation(from_ints(p, p)) == p - 1
    assert lambda_valuation(1 - zeta(p, v)) == 1
    unit = (1 - zeta(p, v)) / (1 - zeta(p))
    assert lambda_valuation(unit) == 0
    assert lambda_valuation(CycNum(p, [0] * (p - 1))) == math.inf


def _valuation_by_division(x):
    """Oracle: divide by lambda until the quotient stops being integral."""
    k = 0
    lam_inv = lam(x.p).inverse()
    while True:
        q = x * lam_inv
        if any(Fraction(c).denominator % x.p == 0 for c in q.coeffs):
            return k
        x, k = q, k + 1


@given(pair_of_cyc(primes=[5, 7]))
def test_valuation_matches_repeated_division(data):
    p, x, _ = data
    if not x.is_zero():
        assert lambda_valuation(x) == _valuation_by_division(x)


@given(pair_of_cyc(primes=[5, 7, 11]))
def test_valuation_additive(data):
    p, x, y = data
    if not x.is_zero() and not y.is_zero():
        assert lambda_valuation(x * y) == lambda_valuation(x) + lambda_valuation(y)
        N = 4
        vx, vy = lambda_valuation(x.to_mod(N)), lambda_valuation(y.to_mod(N))
        if vx + vy < N * (p - 1) and not isinstance(vx, AtLeast) and not isinstance(vy, AtLeast):
            assert lambda_valuation(x.to_mod(N) * y.to_mod(N)) == vx + vy


def test_valuation_caps_in_mod_tier():
    val = lambda_valuation(from_ints(5, 5 ** 3, 3))
    assert isinstance(val, AtLeast) and val == 12
    assert lambda_valuation(from_ints(5, 5 ** 2, 3)) == 8


def test_valuation_rejects_non_integral():
    with pytest.raises(ValueError):
        lambda_valuation(CycNum(5, [Fraction(1, 5), 0, 0, 0]))


@pytest.mark.parametrize("p", range(3, 14))
def test_norm_of_lambda_is_p(p):
    if sympy.isprime(p):
        assert norm(lam(p)) == p


# -- primarity ---------------------------------------------------------------------

def test_primarity_examples():
    assert str(classify_primarity(from_ints(5, 6))) == "SemiPrimary(4)"
    assert classify_primarity(from_ints(5, 32)).status is PrimarityClass.HYPER_PRIMARY
    assert classify_primarity(zeta(5)).status is PrimarityClass.NOT_SEMI_PRIMARY
    with pytest.raises(ValueError):
        classify_primarity(lam(5))


def test_primarity_brute_force_at_five():
    # oracle: no fifth power is 6 mod 25, and 6 - 1 has lambda-valuation 4
    assert all(pow(a, 5, 25) != 6 for a in range(25))
    assert lambda_valuation(from_ints(5, 5)) == 4


def test_primarity_precision_floor():
    with pytest.raises(ValueError):
        classify_primarity(from_ints(37, 6, 1))


@given(st.sampled_from(SMALL_P), st.integers(-10 ** 6, 10 ** 6))
def test_rational_pth_powers_are_hyper_primary(p, a):
    if a % p:
        assert classify_primarity(from_ints(p, a ** p)).status is PrimarityClass.HYPER_PRIMARY
        assert classify_primarity(from_ints(p, a ** p, 3)).status is PrimarityClass.HYPER_PRIMARY


# -- group ring exponents ----------------------------------------------------------

@pytest.mark.parametrize("p", [5, 7])
def test_groupring_trivial_exponents(p):
    v = primitive_root(p)
    x = 1 + zeta(p) + zeta(p, 3)
    assert groupring_apply(x, [1] + [0] * (p - 2), v) == x
    assert groupring_apply(x, [0] * (p - 1), v) == x.one()


@given(st.sampled_from([5, 7]), st.lists(st.integers(-3, 3), min_size=6, max_size=6),
       st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_groupring_is_homomorphism(p, e1, e2):
    v = primitive_root(p)
    x = (1 - zeta(p, v)) / (1 - zeta(p))  # a unit, so negative exponents are fine
    y = 2 + zeta(p)
    e1, e2 = e1[: p - 1], e2[: p - 1]
    assert groupring_apply(x * y, e1, v) == groupring_apply(x, e1, v) * groupring_apply(y, e1, v)
    summed = [a + b for a, b in zip(e1, e2)]
    assert groupring_apply(x, summed, v) == groupring_apply(x, e1, v) * groupring_apply(x, e2, v)


def test_groupring_mod_rejects_non_unit_inverse():
    with pytest.raises(ValueError):
        groupring_apply(lam(5, 3), [-1, 0, 0, 0], 2)


# -- reduction CycNum -> CycMod ----------------------------------------------------

@given(pair_of_cyc(), st.integers(1, 5), st.integers(0, 5))
def test_reduction_commutes(data, N, j):
    p, x, y = data
    v = primitive_root(p)
    r = lambda z: z.to_mod(N)
    assert r(x + y) == r(x) + r(y)
    assert r(x * y) == r(x) * r(y)
    assert r(x - y) == r(x) - r(y)
    assert r(galois_apply(x, j, v)) == galois_apply(r(x), j, v)
    unit = (1 - zeta(p, v)) / (1 - zeta(p))
    assert r(unit.inverse()) == r(unit).inverse()
