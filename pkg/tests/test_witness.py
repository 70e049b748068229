import pytest
from hypothesis import given, settings, strategies as st

from cyclokummer.bernoulli import irregular_pairs, primitive_root, primitive_roots
from cyclokummer.cyclotomic import (
    CycNum,
    PrimarityClass,
    galois_apply,
    lambda_valuation,
    norm,
    zeta,
)
from cyclokummer.witness import (
    cyc_evaluator,
    cyclotomic_unit_base,
    default_precision,
    kummer_class_exponent,
    kummer_unit_witness,
    looks_like_pth_power,
    pth_power_characters,
    split_primes,
    verify_singular_relations,
    word_evaluator,
)


# -- cyclotomic unit base --------------------------------------------------------------

@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_unit_base_is_real_unit(p):
    v = primitive_root(p)
    delta = cyclotomic_unit_base(p, v)
    assert lambda_valuation(delta) == 0
    assert delta * galois_apply(delta, (p - 1) // 2, v).inverse() == delta.one()
    assert abs(norm(delta)) == 1


def test_unit_base_matches_definition_at_five():
    # zeta^((1-v)/2) (1 - zeta^v)/(1 - zeta) computed directly
    p, v = 5, 2
    direct = zeta(p, (1 - v) * pow(2, -1, p) % p) * (1 - zeta(p, v)) / (1 - zeta(p))
    assert cyclotomic_unit_base(p, v) == direct
    assert norm(direct) == 1


# -- character test --------------------------------------------------------------------

def test_split_primes_are_one_mod_p():
    qs = split_primes(37, 6)
    assert qs == sorted(set(qs)) and all(q % 37 == 1 and q > 74 for q in qs)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_character_test_on_known_powers(p):
    x = 3 + zeta(p) + 2 * zeta(p, 2)
    assert looks_like_pth_power(cyc_evaluator(x ** p), p)
    assert not looks_like_pth_power(cyc_evaluator(x), p)
    assert not looks_like_pth_power(cyc_evaluator(zeta(p)), p)
    assert kummer_class_exponent(cyc_evaluator(x ** 3 * (2 + zeta(p)) ** p), cyc_evaluator(x), p) == 3


def test_word_evaluator_matches_expansion():
    p, v = 7, 3
    base = cyclotomic_unit_base(p, v)
    exps = [1, -2, 0, 3, 1, 5]
    from cyclokummer.cyclotomic import groupring_apply
    expanded = cyc_evaluator(groupring_apply(base, exps, v))
    word = word_evaluator(base, exps, v)
    for q in split_primes(p, 3):
        for r in range(2, 12):
            r = pow(r, (q - 1) // p, q)
            if r != 1:  # zeta -> 1 is not a ring map on K
                assert expanded(r, q) == word(r, q)


# -- witnesses ---------------------------------------------------------------------------

def test_witness_p5_exact():
    w = kummer_unit_witness(5, 2, 1)
    assert w.mu == 4 and w.kind == "unit"
    assert galois_apply(w.A, 1, 2) * (w.A ** 4).inverse() == w.alpha ** 5
    assert w.identity_holds()
    assert not w.degenerate
    assert str(w.primarity) == "SemiPrimary(2)"


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_construction_identity_exact(p):
    v = primitive_root(p)
    for m in range(1, (p - 1) // 2):
        w = kummer_unit_witness(p, v, m)
        assert w.identity_holds()
        assert w.A.conjugate() == w.A
        assert w.primarity.status is not PrimarityClass.NOT_SEMI_PRIMARY
        assert w.primarity.valuation >= 2 * m


def test_witness_p37_pair():
    w = kummer_unit_witness(37, 2, 16, default_precision(37))
    assert w.mu == pow(2, 32, 37) == 7
    assert w.identity_holds()
    assert w.primarity.valuation >= 32
    assert not w.degenerate


@pytest.mark.parametrize("p", [37, 59])
def test_primary_witnesses_are_hyper_primary(p):
    for pair in irregular_pairs(p):
        w = kummer_unit_witness(p, pair.v, pair.m, default_precision(p))
        if w.primarity.is_primary:
            assert w.primarity.status is PrimarityClass.HYPER_PRIMARY
            assert any(a.startswith("primary") for a in w.alerts)


def test_regular_index_gives_exact_congruence_order():
    # away from irregular indices the unit is semi-primary of order exactly 2m
    for m in (1, 3, 15):
        w = kummer_unit_witness(37, 2, m, 4)
        assert str(w.primarity) == f"SemiPrimary({2 * m})"


def test_mod_and_exact_tiers_agree():
    exact = kummer_unit_witness(7, 3, 2)
    modular = kummer_unit_witness(7, 3, 2, 4)
    assert exact.A.to_mod(4) == modular.A
    assert exact.alpha.to_mod(4) == modular.alpha
    assert exact.primarity == modular.primarity


def test_witness_argument_checks():
    with pytest.raises(ValueError):
        kummer_unit_witness(37, 2, 0, 4)
    with pytest.raises(ValueError):
        kummer_unit_witness(37, 2, 18, 4)
    with pytest.raises(ValueError):
        kummer_unit_witness(37, 2, 16, 1)


def test_degenerate_flag():
    p, v = 7, 3
    base = (2 + zeta(p) + zeta(p, 6)) ** p
    w = kummer_unit_witness(p, v, 1, base=base)
    assert w.degenerate
    assert any(a.startswith("degenerate") for a in w.alerts)


def test_witness_json_layout():
    doc = kummer_unit_witness(7, 3, 1, 3).to_json()
    assert set(doc) >= {"p", "v", "m", "mu", "kind", "precision", "A", "alpha", "primarity"}
    assert len(doc["A"]) == 6 and all(isinstance(c, str) for c in doc["A"])


# -- relations ---------------------------------------------------------------------------

def test_relations_on_unit_witness():
    w = kummer_unit_witness(7, 3, 2)
    rep = verify_singular_relations(w.A, w.mu, "unit", 3, alpha=w.alpha)
    assert rep.all_ok and rep.realness and rep.eigen_relation
    # character route without alpha
    rep2 = verify_singular_relations(w.A, w.mu, "unit", 3)
    assert rep2.eigen_relation is True and rep2.all_ok


def test_relations_zeta_not_semi_primary():
    rep = verify_singular_relations(zeta(7), 2, "unit", 3)
    assert rep.semi_primary is False and not rep.all_ok


def test_relations_parity_for_wrong_kind():
    w = kummer_unit_witness(7, 3, 1)
    rep = verify_singular_relations(w.A, w.mu, "negative", 3, alpha=w.alpha)
    assert rep.parity is False


def test_relations_d_checks():
    p, v = 7, 3
    D = 2 + zeta(p)
    Dbar = D.conjugate()
    # positive kind: A / Abar = D^p
    A = D ** p / Dbar ** p
    assert verify_singular_relations(A, pow(v, 2, p), "positive", v, D=D ** 2 / Dbar ** 2).d_relation
    assert not verify_singular_relations(A, pow(v, 2, p), "positive", v, D=D / Dbar).d_relation
    # negative kind: A Abar = D^p
    A = D ** p
    assert verify_singular_relations(A, pow(v, 3, p), "negative", v, D=D * Dbar).d_relation
    assert not verify_singular_relations(A, pow(v, 3, p), "negative", v, D=2 * D * Dbar).d_relation
    # the unit kind carries no D relation
    w = kummer_unit_witness(p, v, 1)
    assert verify_singular_relations(w.A, w.mu, "unit", v, D=D).d_relation is None


def test_relations_rejects_bad_input():
    w = kummer_unit_witness(7, 3, 1)
    with pytest.raises(ValueError):
        verify_singular_relations(w.A, 0, "unit", 3)
    with pytest.raises(ValueError):
        verify_singular_relations(1 - zeta(7), 2, "unit", 3)
    with pytest.raises(ValueError):
        verify_singular_relations(w.A, 2, "imaginary", 3)


@pytest.mark.parametrize("p,m", [(7, 1), (11, 3), (37, 16)])
def test_eigen_annihilation(p, m):
    v = primitive_root(p)
    w = kummer_unit_witness(p, v, m, None if p < 37 else 4)
    A = w.A_evaluator()
    mu = w.mu

    def ratio(r, q):
        return A(pow(r, v, q), q) * pow(A(r, q), -mu, q) % q

    def twice(r, q):
        return ratio(pow(r, v, q), q) * pow(ratio(r, q), -mu, q) % q

    assert looks_like_pth_power(ratio, p)
    assert looks_like_pth_power(twice, p)


@pytest.mark.parametrize("p", [11, 37])
def test_uniqueness_across_primitive_roots(p):
    """Witnesses for the same eigenvalue built from different roots agree up to K^p."""
    v = primitive_root(p)
    m = irregular_pairs(p)[0].m if irregular_pairs(p) else 2
    w = kummer_unit_witness(p, v, m, 4)
    for v2 in primitive_roots(p)[1:3]:
        # the eigen-character is fixed by 2m; relative to sigma_(v2) its value is v2^(2m)
        w2 = kummer_unit_witness(p, v2, m, 4)
        assert w2.mu == pow(v2, 2 * m, p)
        assert kummer_class_exponent(w2.A_evaluator(), w.A_evaluator(), p) is not None
    # a different eigenvalue gives an independent class
    other = kummer_unit_witness(p, v, m - 1 if m > 1 else m + 1, 4)
    assert kummer_class_exponent(other.A_evaluator(), w.A_evaluator(), p) is None


@settings(max_examples=15)
@given(st.sampled_from([5, 7, 11, 13]), st.integers(1, 5))
def test_identity_property(p, m):
    m = 1 + (m - 1) % ((p - 3) // 2)
    w = kummer_unit_witness(p, primitive_root(p), m, 3)
    assert w.identity_holds()
    assert pth_power_characters(w.alpha_evaluator(), p, 1) is not None
