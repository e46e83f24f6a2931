from __future__ import annotations

import json
from fractions import Fraction as F

import pytest

from wmin.catalog import CatalogError, all_ids, check_invariants, lookup, collapsing_ids
from wmin.weights import vscale, vsub

# dual Coxeter number and M_1(k) = a k + b
TABLE = {
    "psl22": (0, (-1, -1)),
    "spo3": (F(1, 2), (-4, -2)),
    "spo4": (0, (-2, -1)),
    "spo5": (F(-1, 2), (-2, -1)),
    "spo6": (-1, (-2, -1)),
    "spo7": (F(-3, 2), (-2, -1)),
    "f4": (-2, (F(-3, 2), -1)),
    "g3": (F(-3, 2), (F(-4, 3), -1)),
}


@pytest.mark.parametrize("aid", all_ids())
def test_invariants(aid):
    check_invariants(lookup(aid))


@pytest.mark.parametrize("aid", list(TABLE))
def test_table_values(aid):
    d = lookup(aid)
    h, (a, b) = TABLE[aid]
    assert d.h_dual == h
    assert (d.ideals[0].Ma, d.ideals[0].Mb) == (a, b)


@pytest.mark.parametrize("aid", all_ids())
def test_dim_half_and_collapsing_level(aid):
    d = lookup(aid)
    assert d.dim_g_half == -2 * (d.h_dual - 2)
    if d.k0 is not None:
        assert d.p(d.k0) == 0
        assert all(i.M(d.k0) == 0 for i in d.ideals)


@pytest.mark.parametrize("aid", all_ids())
def test_rho_R_identity(aid):
    d = lookup(aid)
    eps = d.eps_R
    for c in range(len(d.eta_min_options)):
        r = d.rho_R(c)
        assert d.form(r, vsub(d.rho_nat, r)) == (d.h_dual - F(eps, 2)) / 16 * (d.dim_g_half - eps)


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_spo_odd_p_polynomial(r):
    d = lookup(f"spo{2 * r + 1}")
    assert d.p_poly == (1, F(7, 4) - F(r, 2), F(5, 8) - F(r, 4))


def test_g3_p_polynomial():
    assert lookup("g3").p_poly == (1, F(1, 4), F(-3, 8))


def test_d21_levels():
    d = lookup("d21_1_2")
    assert [(i.Ma, i.Mb) for i in d.ideals] == [(F(-3, 2), -1), (-3, -1)]


def test_weyl_group_orders():
    sizes = {aid: len(lookup(aid).weyl) for aid in collapsing_ids()}
    assert sizes == {"psl22": 2, "spo4": 4, "spo5": 8, "spo6": 24, "spo7": 48, "f4": 48, "g3": 12}


def test_weyl_elements_preserve_the_form():
    d = lookup("f4")
    v = d.weight(e1=1, e2=F(1, 2), e3=-3)
    for w in d.weyl:
        wv = w(v)
        assert d.form(wv, wv) == d.form(v, v)


@pytest.mark.parametrize("text,aid", [("psl(2|2)", "psl22"), ("spo(2|5)", "spo5"), ("SPO7", "spo7"),
                                      ("F(4)", "f4"), ("g(3)", "g3"), ("d21_1_2", "d21_1_2")])
def test_aliases(text, aid):
    assert lookup(text).id == aid


def test_unknown_algebra():
    with pytest.raises(CatalogError):
        lookup("e8")


def test_json_dump_round_trips_through_json():
    for aid in all_ids():
        d = lookup(aid)
        js = json.loads(d.dumps())
        assert js["id"] == aid
        assert [F(x) for x in js["theta"]] == list(d.theta)
        assert js["dim_g_half"] == d.dim_g_half


def test_eta_min_choices():
    assert len(lookup("spo6").eta_min_options) == 2
    assert len(lookup("f4").eta_min_options) == 2
    assert len(lookup("d21_1_2").eta_min_options) == 2
    assert len(lookup("g3").eta_min_options) == 1
    d = lookup("spo6")
    assert d.eta_min(1) == vscale(-1, d.eta_min(0))
    with pytest.raises(CatalogError):
        lookup("g3").eta_min(1)
