"""Per-algebra data for psl(2|2), spo(2|m), D(2,1;m/n), F(4) and G(3).

Coordinates list the delta's first, then the epsilon's.  Gram matrices follow
(theta|theta)=2 and the tabulated norms u_i=(theta_i|theta_i).  Every entry is
checked against its invariants when it is built.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .weights import (Weight, WeylElement, bil, inverse_matrix, reflection_matrix, solve, vadd,
                      vec, vscale, vsub, vsum, weyl_group, zero)

F = Fraction
HALF = F(1, 2)


class CatalogError(ValueError):
    """Unsupported or malformed algebra id."""


@dataclass(frozen=True)
class Ideal:
    """A simple ideal of g-natural with highest root theta_i and level M_i(k)=Ma*k+Mb."""

    theta: Weight
    hbar: Fraction
    Ma: Fraction
    Mb: Fraction
    chi: int
    u: Fraction

    def M(self, k) -> Fraction:
        return self.Ma * Fraction(k) + self.Mb


@dataclass
class AlgebraData:
    id: str
    family: str
    params: Tuple[int, ...]
    name: str
    coords: Tuple[str, ...]
    gram: Tuple[Tuple[Fraction, ...], ...]
    theta: Weight
    h_dual: Fraction
    ideals: Tuple[Ideal, ...]
    delta_nat_plus: Tuple[Weight, ...]
    simple_nat: Tuple[Weight, ...]
    delta_half_bar: Tuple[Weight, ...]
    delta_half_plus: Tuple[Tuple[Weight, ...], ...]
    xi: Weight
    eps_R: int
    dim_g_half: int
    eta_min_options: Tuple[Weight, ...]
    rho_nat: Weight
    rho_R_table: Tuple[Weight, ...]
    k0: Optional[Fraction]
    k0_critical: bool
    u_norm: Optional[Fraction]
    b_const: Optional[Fraction]
    M_nat_lattice: Tuple[Weight, ...]
    M_nat_ideal: Tuple[int, ...]
    hnat_basis: Tuple[Weight, ...]
    pi_odd_ns: Tuple[Weight, ...]
    dim_h: int
    scale: int = 2
    # filled in by _finish
    p_poly: Tuple[Fraction, Fraction, Fraction] = (F(1), F(0), F(0))
    hnat_gram_inv: Tuple[Tuple[Fraction, ...], ...] = ()
    simple_reflections: Tuple = ()
    fundamental_weights: Tuple[Weight, ...] = ()

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def theta_half_is_root(self) -> bool:
        return self.eps_R == 1

    @property
    def nvars(self) -> int:
        return len(self.hnat_basis)

    def form(self, a: Weight, b: Weight) -> Fraction:
        return bil(self.gram, a, b)

    def rho_R(self, choice: int = 0) -> Weight:
        return half_sum(self.delta_half_plus[self._choice(choice)], self.n)

    def eta_min(self, choice: int = 0) -> Weight:
        return self.eta_min_options[self._choice(choice)]

    def _choice(self, choice: int) -> int:
        if choice not in range(len(self.eta_min_options)):
            raise CatalogError(f"{self.id} has {len(self.eta_min_options)} eta_min choice(s)")
        return choice

    def p(self, k) -> Fraction:
        a, b, c = self.p_poly
        k = Fraction(k)
        return a * k * k + b * k + c

    def weight(self, **kw) -> Weight:
        """Weight from coordinate labels, e.g. ``data.weight(e1=1, e2=-1)``."""
        out = [F(0)] * self.n
        for lab, v in kw.items():
            out[self.coords.index(lab)] = Fraction(v)
        return tuple(out)

    @property
    def weyl(self) -> List[WeylElement]:
        return _weyl_cache(self.id)

    def is_long(self, gamma: Weight) -> bool:
        n = abs(self.form(gamma, gamma))
        return n == max(abs(self.form(a, a)) for a in self.delta_nat_plus)

    def is_short(self, gamma: Weight) -> bool:
        n = abs(self.form(gamma, gamma))
        return n == min(abs(self.form(a, a)) for a in self.delta_nat_plus)

    def to_json(self) -> dict:
        def w(v):
            return [str(x) for x in v]

        return {
            "id": self.id,
            "name": self.name,
            "coords": list(self.coords),
            "gram": [[str(x) for x in row] for row in self.gram],
            "theta": w(self.theta),
            "h_dual": str(self.h_dual),
            "ideals": [{"theta_i": w(i.theta), "hbar_i": str(i.hbar),
                        "M_i": {"a": str(i.Ma), "b": str(i.Mb)}, "chi_i": i.chi, "u_i": str(i.u)}
                       for i in self.ideals],
            "delta_nat_plus": [w(a) for a in self.delta_nat_plus],
            "simple_nat": [w(a) for a in self.simple_nat],
            "delta_half_bar": [w(a) for a in self.delta_half_bar],
            "delta_half_plus": [[w(a) for a in ch] for ch in self.delta_half_plus],
            "xi": w(self.xi),
            "eps_R": self.eps_R,
            "dim_g_half": self.dim_g_half,
            "eta_min_options": [w(a) for a in self.eta_min_options],
            "rho_nat": w(self.rho_nat),
            "rho_R": [w(self.rho_R(c)) for c in range(len(self.eta_min_options))],
            "k0": None if self.k0 is None else str(self.k0),
            "k0_critical": self.k0_critical,
            "u_norm": None if self.u_norm is None else str(self.u_norm),
            "b_const": None if self.b_const is None else str(self.b_const),
            "p_poly": [str(x) for x in self.p_poly],
            "M_nat_lattice": [w(a) for a in self.M_nat_lattice],
            "hnat_basis": [w(a) for a in self.hnat_basis],
            "dim_h": self.dim_h,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def half_sum(ws: Sequence[Weight], n: int) -> Weight:
    return vscale(HALF, vsum(ws, n))


# ------------------------------------------------------------- helpers


def _diag(*xs) -> Tuple[Tuple[Fraction, ...], ...]:
    n = len(xs)
    return tuple(tuple(F(xs[i]) if i == j else F(0) for j in range(n)) for i in range(n))


def _e(n: int, *pairs) -> Weight:
    """Weight with ``pairs = (index, value), ...``."""
    out = [F(0)] * n
    for i, v in pairs:
        out[i] += F(v)
    return tuple(out)


def _neg(w: Weight) -> Weight:
    return vscale(-1, w)


# ------------------------------------------------------------- families


def _psl22() -> AlgebraData:
    n = 4  # d1, d2, e1, e2
    gram = _diag(-1, -1, 1, 1)
    xi = _e(n, (0, HALF), (1, -HALF))
    theta = _e(n, (2, 1), (3, -1))
    th1 = _e(n, (0, 1), (1, -1))
    return AlgebraData(
        id="psl22", family="psl22", params=(), name="psl(2|2)",
        coords=("d1", "d2", "e1", "e2"), gram=gram, theta=theta, h_dual=F(0),
        ideals=(Ideal(th1, F(-2), F(-1), F(-1), -1, F(-2)),),
        delta_nat_plus=(th1,), simple_nat=(th1,),
        # g_{1/2} is 4-dimensional: each of +-xi occurs twice
        delta_half_bar=(xi, xi, _neg(xi), _neg(xi)),
        delta_half_plus=((xi, xi),),
        xi=xi, eps_R=0, dim_g_half=4,
        eta_min_options=(xi,), rho_nat=xi, rho_R_table=(xi,),
        k0=F(-1), k0_critical=False, u_norm=F(-2), b_const=F(1),
        M_nat_lattice=(th1,), M_nat_ideal=(0,), hnat_basis=(xi,),
        pi_odd_ns=(_e(n, (2, 1), (0, -1)), _e(n, (1, 1), (3, -1))),
        dim_h=2,
    )


def _spo(m: int) -> AlgebraData:
    if m < 3:
        raise CatalogError("spo(2|m) with m <= 2 is excluded")
    r = m // 2
    odd = m % 2 == 1
    n = r + 1  # d1, e1..er
    gram = _diag(HALF, *([-HALF] * r))
    d1 = _e(n, (0, 1))
    eps = [_e(n, (i + 1, 1)) for i in range(r)]
    theta = vscale(2, d1)
    roots = []
    for i in range(r):
        for j in range(i + 1, r):
            roots.append(vadd(eps[i], eps[j]))
            roots.append(vsub(eps[i], eps[j]))
    if odd:
        roots.extend(eps)
    if m == 3:
        simple = (eps[0],)
        ideals = (Ideal(eps[0], -HALF, F(-4), F(-2), -2, -HALF),)
        lattice, lat_ideal = (eps[0],), (0,)
    else:
        simple = [vsub(eps[i], eps[i + 1]) for i in range(r - 1)]
        simple.append(eps[r - 1] if odd else vadd(eps[r - 2], eps[r - 1]))
        simple = tuple(simple)
        lattice = tuple([vsub(eps[i], eps[i + 1]) for i in range(r - 1)] + [vadd(eps[r - 2], eps[r - 1])])
        hb = F(1) - F(m, 2)
        if m == 4:
            t1, t2 = vadd(eps[0], eps[1]), vsub(eps[0], eps[1])
            ideals = (Ideal(t1, hb, F(-2), F(-1), -1, F(-1)), Ideal(t2, hb, F(-2), F(-1), -1, F(-1)))
            lat_ideal = (1, 0)
        else:
            ideals = (Ideal(vadd(eps[0], eps[1]), hb, F(-2), F(-1), -1, F(-1)),)
            lat_ideal = (0,) * len(lattice)
    dhb = tuple(eps) + tuple(_neg(e) for e in eps) + ((zero(n),) if odd else ())
    if odd:
        plus = (tuple(eps),)
        etas = (eps[-1],)
        rho_nat = vsum((vscale(F(r - i) + HALF, eps[i - 1]) for i in range(1, r + 1)), n)
        rho_R_tab = (half_sum(eps, n),)
    else:
        plus = (tuple(eps), tuple(eps[:-1]) + (_neg(eps[-1]),))
        etas = (eps[-1], _neg(eps[-1]))
        rho_nat = vsum((vscale(r - i, eps[i - 1]) for i in range(1, r + 1)), n)
        rho_R_tab = (half_sum(eps, n), half_sum(list(eps[:-1]) + [_neg(eps[-1])], n))
    h = F(2) - F(m, 2)
    u = -HALF if m == 3 else F(-1)
    return AlgebraData(
        id=f"spo{m}", family="spo", params=(m,), name=f"spo(2|{m})",
        coords=("d1",) + tuple(f"e{i + 1}" for i in range(r)), gram=gram, theta=theta, h_dual=h,
        ideals=ideals, delta_nat_plus=tuple(roots), simple_nat=simple,
        delta_half_bar=dhb, delta_half_plus=plus, xi=eps[0], eps_R=1 if odd else 0,
        dim_g_half=m, eta_min_options=etas, rho_nat=rho_nat, rho_R_table=rho_R_tab,
        k0=-HALF, k0_critical=(m == 3), u_norm=u,
        b_const=(h + (F(1) - F(m, 2) if m != 3 else -HALF)) / u,
        M_nat_lattice=lattice, M_nat_ideal=lat_ideal, hnat_basis=tuple(eps),
        pi_odd_ns=(vsub(d1, eps[0]),), dim_h=1 + r,
    )


def _d21(mm: int, nn: int) -> AlgebraData:
    if mm < 1 or nn < 1 or math.gcd(mm, nn) != 1 or (mm, nn) == (1, 1):
        raise CatalogError("D(2,1;m/n) needs coprime positive m, n with (m,n) != (1,1)")
    a = F(mm, nn)
    n = 3  # e1, e2, e3
    gram = _diag(HALF, -1 / (2 * (1 + a)), -a / (2 * (1 + a)))
    e1, e2, e3 = (_e(n, (i, 1)) for i in range(3))
    theta = vscale(2, e1)
    t1, t2 = vscale(2, e2), vscale(2, e3)
    u1, u2 = -2 / (1 + a), -2 * a / (1 + a)
    pp, pm = vadd(e2, e3), vsub(e2, e3)
    return AlgebraData(
        id=f"d21_{mm}_{nn}", family="d21", params=(mm, nn), name=f"D(2,1;{a})",
        coords=("e1", "e2", "e3"), gram=gram, theta=theta, h_dual=F(0),
        ideals=(Ideal(t1, u1, -(1 + a), F(-1), -1, u1), Ideal(t2, u2, -(1 + a) / a, F(-1), -1, u2)),
        delta_nat_plus=(t1, t2), simple_nat=(t1, t2),
        delta_half_bar=(pp, pm, _neg(pp), _neg(pm)),
        delta_half_plus=((pp, pm), (pp, _neg(pm))),
        xi=pp, eps_R=0, dim_g_half=4, eta_min_options=(pm, _neg(pm)),
        rho_nat=pp, rho_R_table=(e2, e3),
        k0=None, k0_critical=False, u_norm=None, b_const=None,
        M_nat_lattice=(t1, t2), M_nat_ideal=(0, 1), hnat_basis=(e2, e3),
        pi_odd_ns=(vsub(e1, pp),), dim_h=3,
    )


def _f4() -> AlgebraData:
    n = 4  # d1, e1, e2, e3
    gram = _diag(2, F(-2, 3), F(-2, 3), F(-2, 3))
    d1 = _e(n, (0, 1))
    eps = [_e(n, (i + 1, 1)) for i in range(3)]
    roots = []
    for i in range(3):
        for j in range(i + 1, 3):
            roots += [vadd(eps[i], eps[j]), vsub(eps[i], eps[j])]
    roots += eps

    def s(a, b, c):
        return _e(n, (1, F(a, 2)), (2, F(b, 2)), (3, F(c, 2)))

    dhb = tuple(s(a, b, c) for a in (1, -1) for b in (1, -1) for c in (1, -1))
    plus1 = (s(1, 1, 1), s(1, 1, -1), s(1, -1, 1), s(-1, 1, 1))
    plus2 = (s(1, 1, 1), s(1, 1, -1), s(1, -1, 1), s(1, -1, -1))
    xi = s(1, 1, 1)
    h = F(-2)
    return AlgebraData(
        id="f4", family="f4", params=(), name="F(4)",
        coords=("d1", "e1", "e2", "e3"), gram=gram, theta=d1, h_dual=h,
        ideals=(Ideal(vadd(eps[0], eps[1]), F(-10, 3), F(-3, 2), F(-1), -1, F(-4, 3)),),
        delta_nat_plus=tuple(roots), simple_nat=(vsub(eps[0], eps[1]), vsub(eps[1], eps[2]), eps[2]),
        delta_half_bar=dhb, delta_half_plus=(plus1, plus2), xi=xi, eps_R=0, dim_g_half=8,
        eta_min_options=(s(-1, 1, 1), s(1, -1, -1)),
        rho_nat=_e(n, (1, F(5, 2)), (2, F(3, 2)), (3, HALF)),
        rho_R_table=(s(1, 1, 1), eps[0]),
        k0=F(-2, 3), k0_critical=False, u_norm=F(-4, 3), b_const=F(4),
        M_nat_lattice=(vsub(eps[0], eps[1]), vsub(eps[1], eps[2]), vadd(eps[1], eps[2])),
        M_nat_ideal=(0, 0, 0), hnat_basis=tuple(eps),
        pi_odd_ns=(vsub(vscale(HALF, d1), xi),), dim_h=4,
    )


def _g3() -> AlgebraData:
    n = 3  # d1, e1, e2
    q = F(1, 4)
    gram = ((HALF, F(0), F(0)), (F(0), -HALF, q), (F(0), q, -HALF))
    d1 = _e(n, (0, 1))
    e1, e2 = _e(n, (1, 1)), _e(n, (2, 1))

    def c(a, b):
        return _e(n, (1, a), (2, b))

    roots = (c(1, 0), c(-1, 1), c(0, 1), c(1, 1), c(2, 1), c(1, 2))
    z = zero(n)
    dhb = (e1, e2, c(1, 1), _neg(e1), _neg(e2), c(-1, -1), z)
    h = F(-3, 2)
    return AlgebraData(
        id="g3", family="g3", params=(), name="G(3)",
        coords=("d1", "e1", "e2"), gram=gram, theta=vscale(2, d1), h_dual=h,
        ideals=(Ideal(c(1, 2), F(-3), F(-4, 3), F(-1), -1, F(-3, 2)),),
        delta_nat_plus=roots, simple_nat=(e1, c(-1, 1)),
        delta_half_bar=dhb, delta_half_plus=((e1, e2, c(1, 1)),), xi=c(1, 1), eps_R=1,
        dim_g_half=7, eta_min_options=(e1,), rho_nat=c(2, 3), rho_R_table=(c(1, 1),),
        k0=F(-3, 4), k0_critical=False, u_norm=F(-3, 2), b_const=F(3),
        M_nat_lattice=(c(-1, 1), c(2, 1)), M_nat_ideal=(0, 0), hnat_basis=(e1, e2),
        pi_odd_ns=(vsub(d1, c(1, 1)),), dim_h=3,
    )


# ------------------------------------------------------------- derived data


def derive_p_poly(data: AlgebraData, choice: int = 0) -> Tuple[Fraction, Fraction, Fraction]:
    """Coefficients (1, b, c) of the monic quadratic p(k)."""
    rR = data.rho_R(choice)
    f = data.form
    const = 2 * f(rR, vsub(vscale(2, data.rho_nat), rR))
    if not data.theta_half_is_root:
        const -= 4 * f(vsub(data.rho_nat, rR), data.eta_min(choice)) ** 2
    d4 = F(data.dim_g_half, 4)
    # (k+1)^2 - (k+h) d/4 + const
    return (F(1), 2 - d4, 1 - data.h_dual * d4 + const)


def rho_g(data: AlgebraData) -> Weight:
    """Weyl vector of g: ``rho_nat + (1/2 - dim g_{1/2}/4) theta``."""
    return vadd(data.rho_nat, vscale(HALF - F(data.dim_g_half, 4), data.theta))


def _fundamental_weights(data: AlgebraData) -> Tuple[Weight, ...]:
    basis = data.hnat_basis
    out = []
    for i in range(len(data.simple_nat)):
        # solve (w|a_j^vee) = delta_ij with w in span(hnat_basis)
        rows = []
        rhs = []
        for j, a in enumerate(data.simple_nat):
            na = data.form(a, a)
            rows.append([2 * data.form(b, a) / na for b in basis])
            rhs.append(F(int(i == j)))
        c = solve(rows, rhs)
        if c is None:
            raise CatalogError("degenerate simple roots")
        out.append(vsum((vscale(x, b) for x, b in zip(c, basis)), data.n))
    return tuple(out)


def _finish(data: AlgebraData) -> AlgebraData:
    g = [[data.form(a, b) for b in data.hnat_basis] for a in data.hnat_basis]
    data.hnat_gram_inv = tuple(tuple(r) for r in inverse_matrix(g))
    data.simple_reflections = tuple(reflection_matrix(data.gram, a) for a in data.simple_nat)
    data.fundamental_weights = _fundamental_weights(data)
    polys = {derive_p_poly(data, c) for c in range(len(data.eta_min_options))}
    if len(polys) != 1:
        raise CatalogError(f"{data.id}: p(k) depends on the eta_min choice")
    data.p_poly = polys.pop()
    check_invariants(data)
    return data


def check_invariants(data: AlgebraData) -> None:
    """Raise AssertionError if any structural invariant fails."""
    f = data.form
    th = data.theta
    assert f(th, th) == 2, "(theta|theta) = 2"
    half = vscale(HALF, th)
    assert f(half, half) == HALF
    dhb = sorted(data.delta_half_bar)
    assert dhb == sorted(_neg(x) for x in data.delta_half_bar), "Delta_half symmetric"
    # the zero weight (present iff eps_R = 1) is counted through eps_R
    assert sum(1 for x in data.delta_half_bar if any(x)) + data.eps_R == data.dim_g_half
    assert data.dim_g_half == -2 * (data.h_dual - 2), "dim g_1/2 = -2(h - 2)"
    assert data.eps_R == (1 if zero(data.n) in data.delta_half_bar else 0)
    for idl in data.ideals:
        assert f(idl.theta, idl.theta) == idl.u, "(theta_i|theta_i) = u_i"
    for c in range(len(data.eta_min_options)):
        rR = data.rho_R(c)
        assert rR == data.rho_R_table[c], "rho_R matches the table"
        eps = data.eps_R
        lhs = f(rR, vsub(data.rho_nat, rR))
        rhs = (data.h_dual - F(eps, 2)) / 16 * (data.dim_g_half - eps)
        assert lhs == rhs, f"{data.id}: (rho_R|rho_nat - rho_R) identity"
        assert data.eta_min(c) in data.delta_half_plus[c]
        plus = data.delta_half_plus[c]
        nonzero = [x for x in data.delta_half_bar if any(x)]
        assert sorted(plus + tuple(_neg(x) for x in plus)) == sorted(nonzero)
    for x in data.delta_half_bar + (data.xi, data.rho_nat) + data.delta_nat_plus:
        assert f(x, th) == 0, "h-natural weights are orthogonal to theta"
    assert vsum(data.delta_nat_plus, data.n) == vscale(2, data.rho_nat), "rho_nat is the half sum"
    for a in data.delta_nat_plus:
        v = 2 * f(data.rho_nat, a) / f(a, a)
        assert v.denominator == 1
    if data.k0 is not None:
        for idl in data.ideals:
            assert idl.M(data.k0) == 0, "M_i(k0) = 0"
        assert data.p(data.k0) == 0, "p(k0) = 0"
    if data.b_const is not None:
        assert len({i.hbar for i in data.ideals}) == 1
        assert data.b_const == (data.h_dual + data.ideals[0].hbar) / data.u_norm
    rg = rho_g(data)
    assert f(rg, th) == data.h_dual - 1, "(rho|theta) = h - 1"
    for b in data.pi_odd_ns:
        assert f(b, th) == 1, "odd simple root has b(x) = 1/2"
    for lat, idx in zip(data.M_nat_lattice, data.M_nat_ideal):
        assert f(lat, lat) == data.ideals[idx].u, "lattice basis consists of long roots"
    for i, w in enumerate(data.fundamental_weights):
        for j, a in enumerate(data.simple_nat):
            assert 2 * f(w, a) / f(a, a) == (1 if i == j else 0)


# ------------------------------------------------------------- lookup

_ALIASES = {
    "psl22": "psl22", "psl(2|2)": "psl22",
    "f4": "f4", "f(4)": "f4",
    "g3": "g3", "g(3)": "g3",
}


def parse_id(text: str) -> Tuple[str, Tuple[int, ...]]:
    t = text.strip().lower().replace(" ", "")
    if t in _ALIASES:
        return _ALIASES[t], ()
    mo = re.fullmatch(r"spo(?:\(2\|)?(\d+)\)?", t) or re.fullmatch(r"spo_?(\d+)", t)
    if mo:
        return "spo", (int(mo.group(1)),)
    mo = re.fullmatch(r"d21[_:(]?(\d+)[_,/](\d+)\)?", t) or re.fullmatch(r"d\(2,1;(\d+)/(\d+)\)", t)
    if mo:
        return "d21", (int(mo.group(1)), int(mo.group(2)))
    raise CatalogError(f"unsupported algebra id {text!r}")


@lru_cache(maxsize=None)
def _build(family: str, params: Tuple[int, ...]) -> AlgebraData:
    if family == "psl22":
        d = _psl22()
    elif family == "spo":
        d = _spo(*params)
    elif family == "d21":
        d = _d21(*params)
    elif family == "f4":
        d = _f4()
    elif family == "g3":
        d = _g3()
    else:
        raise CatalogError(family)
    return _finish(d)


def lookup(algebra: str) -> AlgebraData:
    """Catalog entry for ids like ``psl22``, ``spo5``, ``spo(2|5)``, ``d21_1_2``, ``f4``, ``g3``."""
    return _build(*parse_id(algebra))


@lru_cache(maxsize=None)
def _weyl_cache(aid: str) -> List[WeylElement]:
    d = lookup(aid)
    return weyl_group(d.gram, d.simple_nat, d.rho_nat)


def all_ids() -> List[str]:
    """Every entry covered by the catalog checks."""
    ids = ["psl22"] + [f"spo{m}" for m in range(3, 13)]
    ids += ["d21_1_2", "d21_2_3", "d21_3_4", "f4", "g3"]
    return ids


def collapsing_ids() -> List[str]:
    """Algebras with a non-critical collapsing level k0."""
    return ["psl22", "spo4", "spo5", "spo6", "spo7", "f4", "g3"]
