"""Acceptance criteria 1 to 10; each test prints one PASS/FAIL line with its timing.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import os
import random
import sys
import time
from fractions import Fraction as F

import pytest

sys.path.insert(0, os.path.dirname(__file__))

import test_unitarity as closed  # noqa: E402
from wmin.arith import QSeries  # noqa: E402
from wmin.catalog import all_ids, lookup, collapsing_ids  # noqa: E402
from wmin.identities import (chain_ramanujan_to_psl22_ramond, chain_n2ns_to_n2ramond, compare_generic_hand, verify,  # noqa: E402
                             verify_deligne)
from wmin.unitarity import (B_bound, F_of, Status, A_bound, d_of_s, dominant_weights, ell_of_s,  # noqa: E402
                            min_F, verdict)
from wmin.wchar import CharRequest, char_massless, char_verma, inverse_denominator, verma_count  # noqa: E402
from wmin.weights import vadd, vscale, vsub, zero  # noqa: E402


def report(n: int, checks):
    """Run ``(label, fn, limit)`` checks, print one line and return overall success."""
    t0 = time.perf_counter()
    bad = []
    for label, fn, limit in checks:
        t = time.perf_counter()
        try:
            ok = fn()
        except AssertionError as exc:
            ok = False
            label = f"{label} ({exc})"
        dt = time.perf_counter() - t
        if not ok or (limit is not None and dt > limit):
            bad.append(f"{label} [{dt:.1f}s]")
    line = f"criterion {n:2d}: {'PASS' if not bad else 'FAIL'} ({time.perf_counter() - t0:.1f}s)"
    if bad:
        line += "  failed: " + "; ".join(bad)
    print(line, flush=True)
    return not bad


@pytest.fixture
def emit(capsys):
    def go(n, checks):
        with capsys.disabled():
            print()
            return report(n, checks)
    return go


def _eq(ident, order, **kw):
    return lambda: verify(ident, order, **kw).equal


def crit1():
    return [(i, _eq(i, 500), 5) for i in ("euler_partition", "gauss_triangular", "gauss_square")]


def crit2():
    return [("ramanujan", _eq("ramanujan", 40), 60),
            ("chain n2_ns to n2_ramond", lambda: chain_n2ns_to_n2ramond(30).equal, None),
            ("chain ramanujan to psl22_ramond", lambda: chain_ramanujan_to_psl22_ramond(30).equal, None)]


def crit3():
    return [(i, _eq(i, 60), None) for i in ("n2_ns", "n2_ramond")]


def crit4():
    return [(i, _eq(i, 20), None) for i in ("psl22_ns", "psl22_ramond")]


def crit5():
    out = []
    for alg in ("psl22", "spo4", "spo5", "spo6", "spo7", "f4", "g3"):
        for sec, tag in (("ns", "NS"), ("ramond", "R")):
            out.append((f"generic_det{tag}({alg})", _eq(f"generic_det{tag}({alg})", 8), 120))
            out.append((f"hand {alg} {sec}", lambda a=alg, s=sec: compare_generic_hand(a, s, 8).equal, 120))
    out += [(i, _eq(i, 8), 120) for i in ("spo23_ns", "spo23_ramond")]
    return out


def crit6():
    return [("deligne D4", lambda: verify_deligne("D4", 6).equal, 60),
            ("deligne E6", lambda: verify_deligne("E6", 4).equal, 600)]


def crit7():
    checks = [("psl22", closed.test_psl22_closed_forms), ("spo3", closed.test_spo3_closed_forms),
              ("f4", closed.test_f4_closed_forms), ("g3", closed.test_g3_closed_forms)]
    checks += [(f"spo even r={r}", lambda r=r: closed.test_spo_even_closed_forms(r)) for r in (3, 4)]
    checks += [(f"spo odd r={r}", lambda r=r: closed.test_spo_odd_closed_forms(r)) for r in (2, 3, 4)]
    checks += [(f"D(2,1;{m}/{n})", lambda m=m, n=n: closed.test_d21_closed_forms(m, n))
               for m, n in ((1, 1), (1, 2), (2, 3), (3, 4))]
    return [(label, lambda fn=fn: fn() is None, None) for label, fn in checks]


def crit8():
    def spo3():
        d = lookup("spo3")
        k = F(-3, 4)
        half = vscale(F(1, 2), d.ideals[0].theta)
        return (verdict(d, k, zero(d.n), 0).status == Status.UNITARY
                and verdict(d, k, half, F(1, 4)).status == Status.UNITARY)

    def psl22():
        d = lookup("psl22")
        return verdict(d, -2, zero(d.n), F(1, 4)).status == Status.UNITARY

    def spo3_bound():
        d = lookup("spo3")
        for M in range(1, 7):
            k = -F(M + 2, 4)
            assert d.ideals[0].M(k) == M
            for nu in dominant_weights(d, k):
                r = closed.labels(d, nu)[0]
                if A_bound(d, k, nu) != F(M - 1, 16) + r * r / (4 * F(M)):
                    return False
        return True

    return [("spo3 anchors", spo3, None), ("psl22 anchor", psl22, None), ("spo3 bound on M=1..6", spo3_bound, None)]


def _random_dominant(d, rng):
    nu = zero(d.n)
    for w in d.fundamental_weights:
        nu = vadd(nu, vscale(rng.randint(0, 8), w))
    return nu


def crit9():
    rng = random.Random(20240)

    def min_f():
        for aid in all_ids():
            d = lookup(aid)
            for _ in range(200):
                nu = _random_dominant(d, rng)
                c = rng.randrange(len(d.eta_min_options))
                brute = min(F_of(d, nu, eta) for eta in d.delta_half_plus[c])
                if not brute == min_F(d, nu, c) == F_of(d, nu, d.eta_min(c)):
                    return False
        return True

    def d_s():
        for aid in all_ids():
            d = lookup(aid)
            for _ in range(100):
                nu = _random_dominant(d, rng)
                k = -d.h_dual - F(rng.randint(1, 40), rng.randint(1, 9))
                s = F(rng.randint(-200, 200), rng.randint(1, 12))
                if ell_of_s(d, k, nu, s) - B_bound(d, k, nu) != d_of_s(d, k, s):
                    return False
        return True

    def catalog():
        for aid in all_ids():
            d = lookup(aid)
            if d.dim_g_half != -2 * (d.h_dual - 2):
                return False
            if d.k0 is not None and (d.p(d.k0) != 0 or any(i.M(d.k0) != 0 for i in d.ideals)):
                return False
            for c in range(len(d.eta_min_options)):
                r = d.rho_R(c)
                if d.form(r, vsub(d.rho_nat, r)) != (d.h_dual - F(d.eps_R, 2)) / 16 * (d.dim_g_half - d.eps_R):
                    return False
        return True

    def positivity():
        for aid in collapsing_ids() + ["spo3", "d21_1_2"]:
            s = inverse_denominator(lookup(aid), "ramond", 6)
            if not all(F(c).denominator == 1 and c >= 0 for _, _, c in s.items()):
                return False
        return True

    return [("min_F oracle", min_f, None), ("d(s) = ell(s) - B", d_s, None),
            ("catalog identities", catalog, None), ("1/F^R positivity", positivity, None)]


def crit10():
    out = []
    for aid in collapsing_ids():
        d = lookup(aid)
        nu = zero(d.n)

        def massless(d=d, nu=nu, aid=aid):
            r = char_massless(d, CharRequest(aid, d.k0, nu, A_bound(d, d.k0, nu), order=F(8)))
            return r.series == QSeries.one(d.nvars, r.ell + 8)

        def verma(d=d, nu=nu):
            v = char_verma(d, d.k0, nu, 0, F(5), depth=4)
            return {(q, e): c for q, e, c in v.items()} == verma_count(d, F(5), depth=4)

        out += [(f"massless {aid}", massless, None), (f"verma {aid}", verma, None)]
    return out


CRITERIA = [crit1, crit2, crit3, crit4, crit5, crit6, crit7, crit8, crit9, crit10]


@pytest.mark.parametrize("n", range(1, 11))
def test_criterion(n, emit):
    assert emit(n, CRITERIA[n - 1]())


if __name__ == "__main__":
    results = [report(n, c()) for n, c in enumerate(CRITERIA, 1)]
    sys.exit(0 if all(results) else 1)
