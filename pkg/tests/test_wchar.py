from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from wmin.arith import QSeries
from wmin.catalog import lookup
from wmin.unitarity import A_bound, ell_of_s
from wmin.wchar import (CharRequest, CharacterError, char_request, char_verma, ell_rho, ell_simple, inverse_denominator,
                        nu_hat, s0_massless, twist_data, verma_count)
from wmin.weights import vadd, vscale, zero

ALGS = ["psl22", "spo3", "spo4", "spo5", "spo6", "spo7", "d21_1_2", "f4", "g3"]
FAST = ["psl22", "spo4", "spo5", "g3"]


def vacuum(d):
    return zero(d.n)


@pytest.mark.parametrize("aid", ALGS)
def test_twist_constants(aid):
    d = lookup(aid)
    td = twist_data(d)
    k = F(-7, 3)
    assert td.s_fg(k) == k * (d.dim_g_half - 2 * d.eps_R) / (8 * (k + d.h_dual))
    assert td.s_gh == -F(d.dim_g_half, 16)
    assert td.a_k(k) == td.s_fg(k) + td.s_gh


@pytest.mark.parametrize("aid", ALGS)
def test_energy_routes_agree(aid):
    d = lookup(aid)

    @settings(max_examples=40)
    @given(st.lists(st.integers(0, 5), min_size=len(d.fundamental_weights), max_size=len(d.fundamental_weights)),
           st.fractions(min_value=-10, max_value=10, max_denominator=8), st.integers(1, 9))
    def check(labels, s, j):
        nu = vacuum(d)
        for c, w in zip(labels, d.fundamental_weights):
            nu = vadd(nu, vscale(c, w))
        k = -d.h_dual - F(j, 5)
        lam = nu_hat(d, k, nu, s)
        assert ell_rho(d, k, lam) == ell_simple(d, k, lam) == ell_of_s(d, k, nu, s)

    check()


@pytest.mark.parametrize("aid", ALGS)
def test_massless_s_reaches_A(aid):
    d = lookup(aid)
    for k in (d.k0, d.k0 - 1, d.k0 - 2) if d.k0 is not None else (F(-5, 2),):
        if k == -d.h_dual:
            continue
        nu = vacuum(d)
        assert ell_of_s(d, k, nu, s0_massless(d, k, nu)) == A_bound(d, k, nu)


@pytest.mark.parametrize("aid", FAST)
def test_massless_vacuum_is_one(aid):
    d = lookup(aid)
    nu = vacuum(d)
    order = F(4)
    r = char_request(CharRequest(aid, d.k0, nu, A_bound(d, d.k0, nu), order=order), d)
    assert r.kind == "ramond_massless"
    assert r.series == QSeries.one(d.nvars, r.ell + order)


@pytest.mark.parametrize("aid", FAST)
def test_ns_vacuum_is_one(aid):
    d = lookup(aid)
    r = char_request(CharRequest(aid, d.k0, vacuum(d), 0, sector="ns", order=F(4)), d)
    assert r.kind == "ns_massless"
    assert r.series == QSeries.one(d.nvars, F(4))


@pytest.mark.parametrize("aid", FAST)
def test_verma_two_routes(aid):
    d = lookup(aid)
    v = char_verma(d, d.k0, vacuum(d), 0, F(3), depth=4)
    cnt = verma_count(d, F(3), depth=4)
    assert {(q, e): c for q, e, c in v.items()} == cnt


@pytest.mark.parametrize("aid", ALGS)
def test_inverse_ramond_denominator_counts(aid):
    d = lookup(aid)
    s = inverse_denominator(d, "ramond", 4)
    coeffs = [c for _, _, c in s.items()]
    assert coeffs and all(F(c).denominator == 1 and c >= 0 for c in coeffs)


def test_typical_and_massless_leading_energy():
    d = lookup("psl22")
    k = F(-3)
    nu = d.fundamental_weights[0]
    A = A_bound(d, k, nu)
    typ = char_request(CharRequest("psl22", k, nu, A + 1, order=F(2)), d)
    ml = char_request(CharRequest("psl22", k, nu, A, order=F(2)), d)
    assert typ.kind == "ramond_typical" and ml.kind == "ramond_massless"
    assert min(q for q, _, _ in typ.series.items()) == A + 1
    assert min(q for q, _, _ in ml.series.items()) == A
    # a massless module is a proper quotient of the typical one
    top = lambda s, q0: sum(c for q, _, c in s.items() if q == q0)
    assert top(ml.series, A) < top(typ.series, A + 1)


def test_request_errors():
    d = lookup("psl22")
    nu = d.fundamental_weights[0]
    with pytest.raises(CharacterError):
        char_request(CharRequest("psl22", F(-3), nu, A_bound(d, -3, nu) - 1), d)
    with pytest.raises(CharacterError):
        char_request(CharRequest("psl22", F(-3), nu, 0, sector="ns"), d)
    with pytest.raises(CharacterError):
        CharRequest("psl22", F(-3), nu, 0, order=F(0))
