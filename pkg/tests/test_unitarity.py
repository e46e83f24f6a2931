from __future__ import annotations

import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from wmin.catalog import lookup
from wmin.unitarity import (AB_gap, A_bound, B_bound, F_eta_min, F_of, Status, UnitarityError, coroot_value,
                            d_of_s, dominant_weights, ell_of_s, in_Pk_plus, massless_predicate, min_F,
                            ramond_extremal, s_at_A, s_partner, s_vertex, table_rows, verdict)
from wmin.weights import vadd, vscale, zero

# ------------------------------------------------------------ closed forms of the bounds


def grid(aid, levels, need=10):
    """(k, nu) pairs on the first four levels with at least ``need`` weights in P^+_k."""
    d = lookup(aid)
    out = []
    used = 0
    for k in levels:
        ws = dominant_weights(d, k)
        if len(ws) < need:
            continue
        out += [(k, nu) for nu in ws]
        used += 1
        if used == 4:
            break
    assert used == 4
    return d, out


def labels(d, nu):
    return [coroot_value(d, nu, i.theta) for i in d.ideals]


def test_psl22_closed_forms():
    d, pts = grid("psl22", [F(-j) for j in range(2, 30)])
    for k, nu in pts:
        r = labels(d, nu)[0]
        assert A_bound(d, k, nu) == -(k + 1) / 4
        assert B_bound(d, k, nu) == -(k * k + k + r * r) / (4 * k)
        assert ramond_extremal(d, k, nu) == (r == 0)
        assert A_bound(d, k, nu) == B_bound(d, k, nu) + AB_gap(d, k, nu)


def test_spo3_closed_forms():
    d, pts = grid("spo3", [F(-j, 4) for j in range(3, 60)])
    for k, nu in pts:
        r = labels(d, nu)[0]
        M = d.ideals[0].M(k)
        A = A_bound(d, k, nu)
        assert A == -(8 * k * k + 10 * k + 2 * r * r + 3) / (32 * k + 16)
        assert A == B_bound(d, k, nu)
        assert A == (M - 1) / 16 + r * r / (4 * M)
        assert ramond_extremal(d, k, nu) == (r in (0, M))


@pytest.mark.parametrize("r", [3, 4])
def test_spo_even_closed_forms(r):
    d, pts = grid(f"spo{2 * r}", [F(-j, 2) for j in range(2, 40)])
    h = d.h_dual
    for k, nu in pts:
        m = nu[1:]
        p = d.p(k)
        S = sum((2 * (r - i) - 1) * m[i - 1] + m[i - 1] ** 2 for i in range(1, r))
        A = A_bound(d, k, nu)
        assert A == -(S + p) / (4 * (k + h))
        assert A == (-4 * S - 4 * k * k + 2 * (r - 4) * k + r - 3) / (16 * (k + 2 - r))
        assert A == A_bound(d, k, nu, 1)
        # the sufficient bound carries an extra constant 1/4 next to p(k)
        S0 = sum((2 * (r - i) - 1) * m[i - 1] + m[i - 1] ** 2 for i in range(1, r + 1))
        S1 = sum(abs(2 * (r - i) - 1) * m[i - 1] + m[i - 1] ** 2 for i in range(1, r + 1))
        assert B_bound(d, k, nu, 0) == -(S0 + F(1, 4) + p) / (4 * (k + h))
        assert B_bound(d, k, nu, 1) == -(S1 + F(1, 4) + p) / (4 * (k + h))
        assert ramond_extremal(d, k, nu, 0) == (m[-1] == -m[-2])
        assert ramond_extremal(d, k, nu, 1) == (m[-1] == m[-2])
        for c in (0, 1):
            assert A == B_bound(d, k, nu, c) + AB_gap(d, k, nu, c)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_spo_odd_closed_forms(r):
    d, pts = grid(f"spo{2 * r + 1}", [F(-j, 2) for j in range(2, 40)])
    h = d.h_dual
    for k, nu in pts:
        m = nu[1:]
        # the linear coefficient is 2(r - i)
        S = sum(2 * (r - i) * m[i - 1] + m[i - 1] ** 2 for i in range(1, r + 1))
        A = A_bound(d, k, nu)
        assert A == -(S + d.p(k)) / (4 * (k + h))
        assert A == B_bound(d, k, nu)
        assert ramond_extremal(d, k, nu) == (m[-1] == 0)


@pytest.mark.parametrize("mm,nn", [(1, 1), (1, 2), (2, 3), (3, 4)])
def test_d21_closed_forms(mm, nn):
    aid = "spo4" if (mm, nn) == (1, 1) else f"d21_{mm}_{nn}"
    d = lookup(aid)
    a = F(mm, nn)
    base = -F(mm * nn, mm + nn)
    levels = [base * j for j in range(1, 40)]
    d, pts = grid(aid, levels)
    for k, nu in pts:
        M1, M2 = [i.M(k) for i in d.ideals]
        r1, r2 = labels(d, nu)
        A = A_bound(d, k, nu)
        assert A == -((a + 1) ** 2 * k * (k + 1) + a * (r1 + r2 + 1) ** 2) / (4 * (a + 1) ** 2 * k)
        assert A == -(F(mm * nn, (mm + nn) ** 2) * ((r1 + r2) ** 2 + 2 * (r1 + r2)) + d.p(k)) / (4 * k)
        # the fraction in B enters with a minus sign
        assert B_bound(d, k, nu, 0) == -(k + 1) / 4 - (mm * (r2 + 1) ** 2 + nn * r1 ** 2) / (4 * (mm + nn) * k)
        assert B_bound(d, k, nu, 1) == -(k + 1) / 4 - (mm * r2 ** 2 + nn * (r1 + 1) ** 2) / (4 * (mm + nn) * k)
        assert ramond_extremal(d, k, nu, 0) == (r1 == 0 or r2 == M2)
        assert ramond_extremal(d, k, nu, 1) == (r1 == M1 or r2 == 0)
        assert min_F(d, nu) == ((r1 - a * r2) ** 2 + 2 * (r1 + a * a * r2)) / (2 * (1 + a) ** 2)
        for c in (0, 1):
            assert A == B_bound(d, k, nu, c) + AB_gap(d, k, nu, c)


def test_f4_closed_forms():
    d, pts = grid("f4", [F(-2, 3) * j for j in range(1, 40)])
    for k, nu in pts:
        r1, r2, r3 = nu[1:]
        A = A_bound(d, k, nu)
        assert A == -(9 * k * k + 8 * r1 * r1 + 8 * r1 * (r2 + r3 + 5) + 8 * r2 * r2 - 8 * r2 * r3 + 32 * r2
                      + 8 * r3 * r3 + 8 * r3 - 4) / (36 * (k - 2))
        assert B_bound(d, k, nu, 0) == -(3 * k * k + 4 * (r1 * r1 + 4 * r1 + r2 * r2 + 2 * r2 + r3 * r3)) / (12 * (k - 2))
        assert B_bound(d, k, nu, 1) == -(3 * k * k + 4 * r1 * r1 + 12 * r1 + 4 * r2 * r2 + 12 * r2 + 4 * r3 * r3
                                         + 4 * r3 - 1) / (12 * (k - 2))
        assert ramond_extremal(d, k, nu, 0) == (r3 == 0)
        assert ramond_extremal(d, k, nu, 1) == (r1 == r2)
        for c in (0, 1):
            assert min_F(d, nu, c) == F(2, 9) * ((-r1 + r2 + r3) ** 2 + 5 * r1 + r2 + r3)
            assert A == B_bound(d, k, nu, c) + AB_gap(d, k, nu, c)


def test_g3_closed_forms():
    d, pts = grid("g3", [F(-3, 4) * j for j in range(1, 40)])
    for k, nu in pts:
        r1, r2 = nu[d.coords.index("e1")], nu[d.coords.index("e2")]
        assert 2 * r1 >= r2 >= r1
        A = A_bound(d, k, nu)
        assert A == (8 * k * k + 2 * k + 8 * r1 * r1 - 8 * r1 * r2 + 8 * r2 * r2 + 24 * r2 - 3) / (48 - 32 * k)
        assert A == B_bound(d, k, nu)
        assert ramond_extremal(d, k, nu) == (2 * r1 == r2)
        assert min_F(d, nu) == F(1, 8) * (2 * r1 - r2) * (2 * r1 - r2 - 1) + F(r1 + r2, 2)


# ------------------------------------------------------------ anchors


def test_anchor_spo3():
    d = lookup("spo3")
    k = F(-3, 4)
    assert verdict(d, k, zero(d.n), 0).status == Status.UNITARY
    half = vscale(F(1, 2), d.ideals[0].theta)
    assert verdict(d, k, half, F(1, 4)).status == Status.UNITARY


def test_anchor_psl22():
    d = lookup("psl22")
    v = verdict(d, -2, zero(d.n), F(1, 4))
    assert v.status == Status.UNITARY and v.A == F(1, 4)
    assert verdict(d, -2, zero(d.n), 0).status == Status.FAILS_NECESSARY


def test_verdict_statuses():
    d = lookup("f4")
    k = F(-8, 3)  # M_1 = 3
    nu = (0, F(3, 2), F(3, 2), F(3, 2))
    A, B = A_bound(d, k, nu), B_bound(d, k, nu)
    assert A < B
    assert verdict(d, k, nu, B).status == Status.UNITARY
    assert verdict(d, k, nu, A).status == Status.UNKNOWN_CONDITIONAL
    assert verdict(d, k, nu, A, assume_conjecture=True).status == Status.UNITARY_CONDITIONAL
    assert verdict(d, k, nu, A - 1).status == Status.FAILS_NECESSARY
    ext = (0, F(1), F(1), F(0))
    assert verdict(d, k, ext, A_bound(d, k, ext)).status == Status.EXTREMAL_BOUNDARY_OPEN
    assert verdict(d, k, ext, A_bound(d, k, ext) + 1).status == Status.FAILS_NECESSARY
    assert verdict(d, F(-1, 3), nu, 0).status == Status.NOT_LEVEL_ADMISSIBLE
    assert verdict(d, k, (0, F(1, 4), F(1), F(0)), 0).status == Status.NOT_DOMINANT
    assert verdict(d, k, nu, 0, sector="ns").status == Status.NS_REPORT_ONLY


def test_critical_level_is_rejected():
    d = lookup("spo6")
    with pytest.raises(UnitarityError):
        A_bound(d, -d.h_dual, zero(d.n))


def test_table_rows_spo3():
    rows = table_rows(lookup("spo3"), F(-5, 4))
    assert len(rows) == 4
    assert [r["ramond_extremal"] for r in rows] == [True, False, False, True]


def test_table_rows_g3():
    d = lookup("g3")
    rows = table_rows(d, F(-9, 4))
    got = sorted(tuple(F(x) for x in r["nu"]) for r in rows)
    # P^+_k with M_1 = 2 is 2 r_1 >= r_2 >= r_1 together with r_2 <= 2
    want = sorted(d.weight(e1=a, e2=b) for a in range(4) for b in range(4) if 2 * a >= b >= a and b <= 2)
    assert got == want


# ------------------------------------------------------------ properties

ALGS = ["psl22", "spo3", "spo4", "spo5", "spo6", "spo7", "d21_1_2", "d21_2_3", "f4", "g3"]


@st.composite
def dominant(draw, aid):
    d = lookup(aid)
    nu = zero(d.n)
    for w in d.fundamental_weights:
        nu = vadd(nu, vscale(draw(st.integers(0, 6)), w))
    return d, nu


@pytest.mark.parametrize("aid", ALGS)
def test_min_F_brute_force_matches_eta_min(aid):
    @given(dominant(aid), st.integers(0, 1))
    def check(dn, c):
        d, nu = dn
        c = c % len(d.eta_min_options)
        brute = min(F_of(d, nu, eta) for eta in d.delta_half_plus[c])
        assert brute == min_F(d, nu, c) == F_of(d, nu, d.eta_min(c))
        if not d.theta_half_is_root:
            assert F_eta_min(d, nu, c) == F_of(d, nu, d.eta_min(c))

    from hypothesis import settings
    settings(max_examples=200)(check)()


@pytest.mark.parametrize("aid", ALGS)
def test_ell_minus_B_is_d(aid):
    d = lookup(aid)

    @given(dominant(aid), st.fractions(min_value=-20, max_value=20, max_denominator=12),
           st.integers(1, 6))
    def check(dn, s, j):
        _, nu = dn
        k = -d.ideals[0].Mb / d.ideals[0].Ma - F(j, 7)  # a non-critical level
        if k + d.h_dual == 0:
            return
        assert ell_of_s(d, k, nu, s) - B_bound(d, k, nu) == d_of_s(d, k, s)
        assert ell_of_s(d, k, nu, s) == ell_of_s(d, k, nu, s_partner(d, k, s))
        assert ell_of_s(d, k, nu, s_vertex(d, k)) == B_bound(d, k, nu)

    from hypothesis import settings
    settings(max_examples=100)(check)()


@pytest.mark.parametrize("aid", ALGS)
def test_s_at_A_hits_A(aid):
    d = lookup(aid)
    k = d.ideals[0].M(0) and -F(7, 2)
    for nu in dominant_weights(d, -F(d.ideals[0].Mb + 3, d.ideals[0].Ma))[:10]:
        kk = -F(d.ideals[0].Mb + 3, d.ideals[0].Ma)
        for s in s_at_A(d, kk, nu):
            assert ell_of_s(d, kk, nu, s) == A_bound(d, kk, nu)
        assert massless_predicate(d, kk, nu, A_bound(d, kk, nu)) == (
            not d.theta_half_is_root or ramond_extremal(d, kk, nu))


def test_in_Pk_plus_bounds():
    d = lookup("spo6")
    k = F(-3, 2)  # M_1 = 2
    assert in_Pk_plus(d, k, (0, F(1), F(1), F(0)))
    assert not in_Pk_plus(d, k, (0, F(2), F(1), F(0)))
    assert not in_Pk_plus(d, k, (0, F(1), F(2), F(0)))
