from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wmin.arith import QSeries
from wmin.identities import (IdentityError, build_lhs, build_rhs, chain_ramanujan_to_psl22_ramond, chain_n2ns_to_n2ramond,
                             compare_generic_hand, eta_min_renormalization, list_ids, phi, phi2, sides,
                             theta0, theta1, verify, verify_deligne)

# ------------------------------------------------------------ products


def test_theta1_constant_term_is_one():
    t = theta1((1,), 6)
    assert t.coeff(0).terms == {(0,): 1}


def test_theta1_is_theta0_at_minus_root_q():
    # theta0(-q^(1/2) x): substitute through the monomial coefficient c and the exponent shift
    from wmin.ratsum import theta0_factors
    from wmin.identities import _product
    a = _product(1, theta0_factors((1,), 6, c=-1, qshift=Fraction(1, 2)), 6)
    assert a == theta1((1,), 6)


def test_phi2_is_phi_q2_over_phi():
    order = 20
    p = phi(order)
    p_q2 = QSeries.from_terms(0, {(2 * q, ()): c for q, e, c in p.items() if 2 * q < order}, order=order, offset=0)
    assert phi2(order) * p == p_q2


def test_theta0_jacobi_triple_product():
    # theta0(x) phi(q) = sum (-1)^n q^(n(n-1)/2) x^n
    order = 12
    lhs = theta0((1,), order) * phi(order, 1)
    terms = {}
    for n in range(-6, 7):
        q = n * (n - 1) // 2
        if q < order:
            terms[(q, (n,))] = (-1) ** (n % 2)
    assert lhs == QSeries.from_terms(1, terms, order=order, offset=0)


# ------------------------------------------------------------ named identities


def test_euler_lhs_coefficients():
    lhs = build_lhs("euler", 13)
    assert [lhs.coeff(j).terms.get((), 0) for j in range(13)] == [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]


def test_gauss_sums():
    tri = build_rhs("gauss_triangular", 11)
    assert {q for q, _, _ in tri.items()} == {0, 1, 3, 6, 10}
    sq = build_rhs("gauss_square", 17)
    assert sq.as_dict() == {(0, ()): 1, (1, ()): -2, (4, ()): 2, (9, ()): -2, (16, ()): 2}


@pytest.mark.parametrize("ident,order", [
    ("euler", 60), ("gauss_triangular", 60), ("gauss_square", 60),
    ("n2_ns", 12), ("n2_ramond", 12), ("ramanujan", 10),
    ("psl22_ns", 8), ("psl22_ramond", 8), ("spo23_ns", 8), ("spo23_ramond", 8),
    ("d211_ns", 5), ("d211_ramond", 5),
    ("spo_even_ns(3)", 3), ("spo_even_ramond(3)", 3), ("spo_odd_ns(2)", 4), ("spo_odd_ramond(2)", 4),
    ("spo_odd_ns(3)", 3), ("spo_odd_ramond(3)", 3),
    ("f4_ns", 3), ("f4_ramond", 3), ("g3_ns", 4), ("g3_ramond", 4),
])
def test_identity_holds(ident, order):
    rep = verify(ident, order)
    assert rep.equal, rep.first_mismatch
    assert rep.first_mismatch is None


@pytest.mark.parametrize("ident,variant,order", [
    ("euler", "weyl", 30), ("n2_ramond", "pairs", 20), ("gauss_triangular", "ns", 30),
    ("gauss_triangular", "ns_sum", 30), ("gauss_square", "printed", 30),
])
def test_alternative_forms_hold(ident, variant, order):
    assert verify(ident, order, variant).equal


# displays whose literal reading fails; the first mismatch pins the misprint
@pytest.mark.parametrize("ident,order,q", [
    ("gauss_triangular", 6, 1),
    ("spo23_ns", 4, Fraction(1, 2)),
    ("spo_even_ramond(3)", 3, 0),
    ("spo_odd_ns(2)", 3, 1),
    ("spo_odd_ramond(2)", 3, 0),
    ("f4_ns", 3, 0),
    ("f4_ramond", 3, 0),
    ("g3_ramond", 3, 0),
    ("deligne(D4)", 3, Fraction(1, 2)),
])
def test_printed_variant_fails(ident, order, q):
    rep = verify(ident, order, "printed")
    assert not rep.equal
    assert rep.first_mismatch[0] == q


def test_perturbed_rhs_is_caught_at_q1():
    sd = sides("euler", 20)
    from wmin.identities import compare
    from wmin.ratsum import term
    (lhs, rhs), _ = compare([sd.lhs, sd.rhs + [term(1, 1, ())]], 0, 20)
    assert lhs.first_mismatch(rhs)[0] == 1


def test_unknown_id_and_bad_variant():
    with pytest.raises(IdentityError):
        verify("no_such_identity", 4)
    with pytest.raises(IdentityError):
        verify("euler", 4, "printed")
    with pytest.raises(IdentityError):
        verify("euler", 0)


def test_list_ids_covers_catalog():
    ids = list_ids()
    for name in ("euler_partition", "ramanujan", "g3_ramond", "deligne(E6)", "generic_detNS(alg)"):
        assert name in ids


# ------------------------------------------------------------ chains and cross checks


def test_chains():
    assert chain_n2ns_to_n2ramond(12).equal
    assert chain_ramanujan_to_psl22_ramond(10).equal


@pytest.mark.parametrize("alg", ["psl22", "spo4", "spo5", "g3"])
@pytest.mark.parametrize("sector", ["ns", "ramond"])
def test_generic_equals_hand(alg, sector):
    rep = compare_generic_hand(alg, sector, 4)
    assert rep.equal, rep.first_mismatch


@pytest.mark.parametrize("alg", ["spo4", "spo6"])
def test_generic_ramond_second_choice(alg):
    assert verify(f"generic_detR({alg},1)", 3).equal


@pytest.mark.parametrize("alg,order", [("spo4", 4), ("spo6", 3), ("f4", 3)])
def test_eta_min_renormalization(alg, order):
    assert eta_min_renormalization(alg, order).equal


# ------------------------------------------------------------ Deligne


def test_deligne_d4():
    assert verify("deligne(D4)", 4).equal


def test_deligne_plus_one_term_vanishes():
    # the sum with coefficient 1 in place of (gamma|alpha) is identically zero
    assert verify_deligne("D4", 4, weight="one").equal


def test_deligne_large_types_need_flag():
    with pytest.raises(IdentityError):
        verify("deligne(E7)", 2)
    with pytest.raises(IdentityError):
        verify("deligne(E8)", 2)


@given(st.integers(1, 40))
def test_euler_truncation_is_consistent(order):
    # truncating a longer verification gives the shorter one
    lhs = build_lhs("euler", order)
    long = build_lhs("euler", 41)
    assert lhs.first_mismatch(long, order) is None
