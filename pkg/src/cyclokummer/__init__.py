"""Cyclotomic singular numbers, their Kummer extensions and the splitting of p.

Arithmetic lives in Q(zeta_p), either exactly (CycNum) or modulo p^N (CycMod).
On top of it sit Bernoulli numbers mod p, singular unit witnesses, the degree-p
subfield M = Q(Omega) of K(A^((p-1)/p)), and predictions for how p decomposes
in M together with a local check against the minimal polynomial of Omega.
"""

from .bernoulli import (
    IrregularPair,
    bernoulli_even_mod_p,
    bernoulli_exact,
    irregular_pairs,
    normalize_bernoulli_index,
    primitive_root,
)
from .cyclotomic import (
    AtLeast,
    CycMod,
    CycNum,
    Primarity,
    PrimarityClass,
    canonicalize,
    classify_primarity,
    galois_apply,
    groupring_apply,
    lambda_valuation,
    norm,
)
from .kummer import (
    ExtElt,
    KummerExtension,
    NonRationalCoefficient,
    SigmaMu,
    all_omegas,
    compute_omegas,
    min_poly,
    omega_closed_form,
    omega_iterative,
    select_semiprimary_w,
    sigma_mu_apply,
    theta_apply,
)
from .ramification import (
    DecompositionReport,
    PrimeShape,
    StickelbergerForbidden,
    Verdict,
    half_turn,
    orbit_partition,
    predict_decomposition,
    verify_decomposition_local,
)
from .witness import (
    RelationReport,
    SingularWitness,
    kummer_unit_witness,
    verify_singular_relations,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
