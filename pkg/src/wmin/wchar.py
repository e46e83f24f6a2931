"""Verma denominators, the twisted Weyl vector, minimal energies and characters.

Characters are q-series in the lattice variables of h-natural: the exponent
vector of ``e^mu`` lists the h-natural coordinates of ``mu`` times
``data.scale``.  Every character is exact below ``ell + order``.

Infinite Weyl sums run over ``W-natural x T-natural``: a finite Weyl group
element composed with a translation by the lattice spanned by the long roots.
For a fixed finite element the q-exponent of a term is a positive definite
quadratic function of the lattice coordinates, so the terms below the
truncation bound are found exactly by ellipsoid enumeration.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .arith import QSeries, divide_by_binomial, expand_inverse_factor, rat
from .catalog import AlgebraData, rho_g
from .ratsum import Expander, Factor, Term, normalize, term
from .unitarity import (UnitarityError, _kh, ell_of_s, in_Pk_plus, massless_predicate,
                        ramond_extremal, s_vertex)
from .weights import (AffineWeight, Weight, bil, exps, form, lattice_points, lattice_vector,
                      pairing_x, pairing_xD, restrict, translate, vadd, vscale, vsub, zero)

F = Fraction
HALF = F(1, 2)


class CharacterError(ValueError):
    """A character request outside the supported range."""


# ------------------------------------------------------------ twist data


@dataclass(frozen=True)
class TwistData:
    gamma_prime: Weight
    gamma_half: Weight
    s_gh: Fraction
    rho_tw: AffineWeight
    dim_half: int
    eps: int
    h_dual: Fraction

    def s_fg(self, k) -> Fraction:
        k = rat(k)
        return k * (self.dim_half - 2 * self.eps) / (8 * (k + self.h_dual))

    def a_k(self, k) -> Fraction:
        return self.s_fg(k) + self.s_gh


def twist_data(data: AlgebraData, choice: int = 0) -> TwistData:
    eps = data.eps_R
    half_theta = vscale(HALF, data.theta)
    rR = data.rho_R(choice)
    gp = vsub(vsub(vscale(2, rR), rho_g(data)), vscale(F(eps, 2), half_theta))
    gh = vsub(rR, vscale(F(eps, 4), half_theta))
    return TwistData(gamma_prime=gp, gamma_half=gh, s_gh=-F(data.dim_g_half, 16),
                     rho_tw=AffineWeight(data.h_dual, F(0), vscale(-1, gp)),
                     dim_half=data.dim_g_half, eps=eps, h_dual=data.h_dual)


def rho_hat(data: AlgebraData) -> AffineWeight:
    """Untwisted affine Weyl vector ``h Lambda_0 + rho``."""
    return AffineWeight(data.h_dual, F(0), rho_g(data))


def a_of_k(data: AlgebraData, k, choice: int = 0) -> Fraction:
    return twist_data(data, choice).a_k(k)


def nu_hat(data: AlgebraData, k, nu: Weight, s, choice: int = 0) -> AffineWeight:
    """``k Lambda_0 + s theta + nu + rho_R``."""
    fin = vadd(vadd(vscale(rat(s), data.theta), nu), data.rho_R(choice))
    return AffineWeight(rat(k), F(0), fin)


def nu_hat_ns(data: AlgebraData, k, nu: Weight, t) -> AffineWeight:
    """``k Lambda_0 + t theta + nu`` (untwisted)."""
    return AffineWeight(rat(k), F(0), vadd(vscale(rat(t), data.theta), nu))


# ------------------------------------------------------------ minimal energy


def ell_rho(data: AlgebraData, k, lam: AffineWeight, choice: int = 0) -> Fraction:
    """``(L|L+2 rho_tw)/(2(k+h)) - L(x+D) + a(k)``."""
    k = rat(k)
    if lam.a0 != k:
        raise CharacterError("level of the affine weight differs from k")
    kh = _kh(data, k)
    td = twist_data(data, choice)
    two_rho = td.rho_tw.scale(2)
    return form(data, lam, lam + two_rho) / (2 * kh) - pairing_xD(data, lam) + td.a_k(k)


def ell_simple(data: AlgebraData, k, lam: AffineWeight, choice: int = 0) -> Fraction:
    """The same energy through gamma', s_fg and s_gh.

    The quadratic term is the full norm of the finite part and the delta part
    is dropped, since the energy does not depend on it.
    """
    k = rat(k)
    if lam.a0 != k:
        raise CharacterError("level of the affine weight differs from k")
    kh = _kh(data, k)
    td = twist_data(data, choice)
    fin = lam.fin
    quad = bil(data.gram, fin, fin) - 2 * bil(data.gram, fin, td.gamma_prime)
    return quad / (2 * kh) - pairing_x(data, fin) + td.s_fg(k) + td.s_gh


def ell_of_affine(data: AlgebraData, k, lam: AffineWeight, choice: int = 0) -> Fraction:
    return ell_rho(data, k, lam, choice)


def ell_ns(data: AlgebraData, k, lam: AffineWeight) -> Fraction:
    """Untwisted minimal energy ``(L|L+2 rho)/(2(k+h)) - L(x+D)``."""
    kh = _kh(data, rat(k))
    return form(data, lam, lam + rho_hat(data).scale(2)) / (2 * kh) - pairing_xD(data, lam)


def s0_massless(data: AlgebraData, k, nu: Weight, choice: int = 0) -> Fraction:
    """The s with ``ell(s) = A`` whose affine weight is atypical."""
    k = rat(k)
    if data.theta_half_is_root:
        return (2 * k + 1) / 4
    x = data.form(vadd(vsub(nu, data.rho_R(choice)), data.rho_nat), data.eta_min(choice))
    return (k + 1) / 2 - x


def alpha0_value(data: AlgebraData, lam: AffineWeight, rho: AffineWeight) -> Fraction:
    """``(lam + rho | delta - theta)``."""
    v = lam + rho
    return v.a0 - bil(data.gram, v.fin, data.theta)


def is_degenerate(data: AlgebraData, lam: AffineWeight, rho: AffineWeight) -> bool:
    """Degenerate iff ``(lam + rho | alpha_0^vee)`` is a positive integer, alpha_0 = delta - theta."""
    v = alpha0_value(data, lam, rho)
    return v.denominator == 1 and v > 0


# ------------------------------------------------------------ gradings


def grading_vector(data: AlgebraData, choice: int = 0, avoid: Sequence[Sequence[int]] = ()) -> Tuple[int, ...]:
    """Integer functional positive on ``-Delta-natural+`` and ``-Delta-half+``.

    The Laurent ring is completed in these directions.  The vector also
    avoids vanishing on every exponent in ``avoid``.
    """
    pos = [exps(data, vscale(-1, a)) for a in data.delta_nat_plus]
    pos += [exps(data, vscale(-1, e)) for e in data.delta_half_plus[choice]]
    avoid = [tuple(a) for a in avoid if any(a)]
    r = data.nvars
    for bound in range(1, 12):
        cands = sorted(itertools.product(range(-bound * 3, bound * 3 + 1), repeat=r),
                       key=lambda g: (sum(abs(x) for x in g), g))
        for g in cands:
            if all(sum(a * b for a, b in zip(g, p)) > 0 for p in pos) and \
                    all(sum(a * b for a, b in zip(g, v)) != 0 for v in avoid):
                return g
    raise CharacterError("no grading vector found")


# ------------------------------------------------------------ denominators


def _mono(data: AlgebraData, w: Weight) -> Tuple[int, ...]:
    return exps(data, w)


def denominator_factors(data: AlgebraData, sector: str, order, choice: int = 0) -> List[Factor]:
    """Factors ``(c, b, e, p)`` of the Verma denominator, all ``b`` below ``order``."""
    order = F(order)
    r = data.nvars
    z = (0,) * r
    out: List[Factor] = []
    n = 1
    while n - 1 < order:
        if n < order:
            out.append((-1, F(n), z, data.dim_h))
        for a in data.delta_nat_plus:
            out.append((-1, F(n - 1), _mono(data, vscale(-1, a)), 1))
            if n < order:
                out.append((-1, F(n), _mono(data, a), 1))
        if sector == "ns":
            if n - HALF < order:
                for eta in data.delta_half_bar:
                    out.append((1, n - HALF, _mono(data, eta), -1))
        elif sector == "ramond":
            plus = list(data.delta_half_plus[choice])
            prime = plus + ([zero(data.n)] if data.theta_half_is_root else [])
            for eta in prime:
                out.append((1, F(n - 1), _mono(data, vscale(-1, eta)), -1))
            if n < order:
                for eta in plus:
                    out.append((1, F(n), _mono(data, eta), -1))
        else:
            raise CharacterError(f"unknown sector {sector!r}")
        n += 1
    return [f for f in out if f[1] < order]


def expand_completed(t: Term, nvars: int, order, grading: Sequence[int], depth) -> QSeries:
    """Expand one term in the completion along ``grading``; exact for grade < depth."""
    n = normalize(t, grading)
    if n is None:
        return QSeries.zero(nvars, order)
    order = F(order)
    bound = order - n.qexp
    fin = QSeries.one(nvars, bound)
    for (c, e), p in sorted(n.q0.items(), key=lambda kv: (str(kv[0][0]), kv[0][1])):
        if p > 0:
            for _ in range(p):
                fin = fin.mul_binomial(c, 0, e)
    for c, b, e, p in sorted(n.pos, key=lambda f: (f[3] < 0, f[1])):
        for _ in range(abs(p)):
            fin = fin.mul_binomial(c, b, e) if p > 0 else fin.div_binomial(c, b, e)
    gmin = min((sum(a * b for a, b in zip(grading, m)) for _, m, _ in fin.items()), default=0)
    extra = max(0, -gmin)
    D = F(depth) + extra
    inv = QSeries.one(nvars, bound).with_depth(grading, D)
    for (c, e), p in n.q0.items():
        if p < 0:
            f = expand_inverse_factor(c, 0, e, bound, grading, D)
            for _ in range(-p):
                inv = inv * f
    res = inv * fin
    res = res.with_depth(grading, F(depth))
    return res.shift(n.qexp, n.mono, n.coeff)


def denominator_term(data: AlgebraData, sector: str, order, choice: int = 0) -> Term:
    return term(1, 0, (0,) * data.nvars, denominator_factors(data, sector, order, choice))


def denominator_NS(data: AlgebraData, order, depth=6) -> QSeries:
    g = grading_vector(data)
    return expand_completed(denominator_term(data, "ns", order), data.nvars, order, g, depth)


def denominator_R(data: AlgebraData, order, choice: int = 0, depth=6) -> QSeries:
    g = grading_vector(data, choice)
    return expand_completed(denominator_term(data, "ramond", order, choice), data.nvars, order, g, depth)


def inverse_denominator(data: AlgebraData, sector: str, order, choice: int = 0, depth=6) -> QSeries:
    """``1/F`` expanded in the completion (every factor inverted)."""
    fs = [(c, b, e, -p) for c, b, e, p in denominator_factors(data, sector, order, choice)]
    g = grading_vector(data, choice)
    return expand_completed(term(1, 0, (0,) * data.nvars, fs), data.nvars, order, g, depth)


def verma_generators(data: AlgebraData, order, choice: int = 0) -> List[Tuple[F, Tuple[int, ...], bool]]:
    """Ramond Verma module creation modes ``(q-step, weight exps, is_fermion)``."""
    order = F(order)
    out = []
    plus = list(data.delta_half_plus[choice])
    for a in data.delta_nat_plus:
        out.append((F(0), _mono(data, vscale(-1, a)), False))
    for eta in plus + ([zero(data.n)] if data.theta_half_is_root else []):
        out.append((F(0), _mono(data, vscale(-1, eta)), True))
    n = 1
    while n < order:
        for _ in range(data.dim_h):
            out.append((F(n), (0,) * data.nvars, False))
        for a in data.delta_nat_plus:
            out.append((F(n), _mono(data, a), False))
            out.append((F(n), _mono(data, vscale(-1, a)), False))
        for eta in data.delta_half_bar:
            out.append((F(n), _mono(data, eta), True))
        n += 1
    return out


def verma_count(data: AlgebraData, order, choice: int = 0, depth=6) -> Dict[Tuple[F, Tuple[int, ...]], int]:
    """Count PBW monomials of a Ramond Verma module, one generator at a time.

    Returns multiplicities of ``(q-step, weight)`` relative to the highest
    weight, for grade below ``depth``.
    """
    order = F(order)
    g = grading_vector(data, choice)
    gens = verma_generators(data, order, choice)

    def grade(e):
        return sum(a * b for a, b in zip(g, e))

    # the most grade one unit of q can remove
    slope = max([F(-grade(e), q) for q, e, _ in gens if q > 0 and grade(e) < 0] + [F(0)])
    r = data.nvars
    # integer q units keep the inner loop free of Fractions
    unit = math.lcm(*(x.denominator for x in [order, slope] + [q for q, _, _ in gens]))
    top = int(order * unit)
    sl = slope * unit

    def alive(q: int, gr: int) -> bool:
        return q < top and gr * unit - sl * (top - q) < depth * unit

    # knapsack over the generators: states (q, grade, weight) -> number of monomials
    states: Dict[Tuple[int, int, Tuple[int, ...]], int] = {(0, 0, (0,) * r): 1}
    for gq, ge, ferm in gens:
        gg = grade(ge)
        if gq == 0 and gg <= 0 and not ferm:
            raise CharacterError("a zero mode with non-positive grade")
        step = int(gq * unit)
        nxt: Dict[Tuple[int, int, Tuple[int, ...]], int] = {}
        for key, c in states.items():
            q, gr, e = key
            m = 0
            while True:
                nxt[key] = nxt.get(key, 0) + c
                m += 1
                if ferm and m > 1:
                    break
                q, gr = q + step, gr + gg
                if not alive(q, gr):
                    break
                e = tuple(x + y for x, y in zip(e, ge))
                key = (q, gr, e)
        states = nxt
    return {(F(q, unit), e): c for (q, gr, e), c in states.items() if gr < depth}


# ------------------------------------------------------------ Weyl sums


def _pi_nu(data: AlgebraData, k, nu: Weight, choice: int) -> List[AffineWeight]:
    """Odd isotropic simple roots orthogonal to the massless weight."""
    half_theta = vscale(HALF, data.theta)
    if data.id == "psl22":
        d1, d2, e1, e2 = (data.weight(**{c: 1}) for c in ("d1", "d2", "e1", "e2"))
        return [AffineWeight(F(0), -HALF, vsub(d1, e2)), AffineWeight(F(0), -HALF, vsub(e1, d2))]
    if data.id == "spo3":
        d1, e1 = data.weight(d1=1), data.weight(e1=1)
        m = data.ideals[0].M(rat(k))
        if not any(nu):
            return [AffineWeight(F(0), -HALF, vadd(d1, e1))]
        if tuple(nu) == vscale(m / 2, e1):
            return [AffineWeight(F(0), HALF, vsub(d1, e1))]
        raise CharacterError("spo(2|3) massless characters need nu = 0 or nu = (M/2) e1")
    return [AffineWeight(F(0), -HALF, vadd(half_theta, data.eta_min(choice)))]


@dataclass
class WeylSum:
    """Terms of a Weyl sum together with their bookkeeping."""

    terms: List[Term] = field(default_factory=list)
    translations: Dict[Tuple[int, ...], int] = field(default_factory=dict)


def affine_weyl_sum(data: AlgebraData, lam: AffineWeight, rho: AffineWeight, qpref: F,
                    mono_shift: Sequence[int], betas: Sequence[AffineWeight], top: F,
                    coeff=1, slack: int = 0) -> WeylSum:
    """``sum_w det(w) q^(qpref - (w(lam+rho)-rho)(x+D)) e^((w(lam+rho)-rho)|hnat + shift)
    / prod_beta (1 + q^(w beta (x+D)) e^(-w beta|hnat))`` over terms below ``top``."""
    lr = lam + rho
    rank = len(data.M_nat_lattice)
    out = WeylSum()
    for w in data.weyl:
        def qexp(c, w=w):
            mu = w(translate(data, lattice_vector(data, c), lr)) - rho
            return qpref - pairing_xD(data, mu)

        pts = lattice_points(qexp, rank, top, slack=slack)
        for c in pts:
            alpha = lattice_vector(data, c)
            mu = w(translate(data, alpha, lr)) - rho
            q = qpref - pairing_xD(data, mu)
            mono = tuple(a + b for a, b in zip(exps(data, restrict(data, mu.fin)), mono_shift))
            fs = []
            for beta in betas:
                wb = w(translate(data, alpha, beta))
                fs.append((1, pairing_xD(data, wb), exps(data, vscale(-1, wb.fin)), -1))
            out.terms.append(term(coeff * w.det, q, mono, fs))
            out.translations[c] = out.translations.get(c, 0) + 1
    return out


# ------------------------------------------------------------ requests


@dataclass(frozen=True)
class CharRequest:
    algebra: str
    k: Fraction
    nu: Weight
    ell: Fraction
    sector: str = "ramond"
    order: Fraction = F(6)
    eta_choice: int = 0
    assume_conjecture: bool = True

    def __post_init__(self):
        if F(self.order) <= 0:
            raise CharacterError("order must be positive")


@dataclass
class CharResult:
    series: QSeries
    ell: Fraction
    conditional_on_arakawa: bool
    kind: str
    grading: Tuple[int, ...]
    notes: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"kind": self.kind, "ell": str(self.ell), "conditional_on_arakawa": self.conditional_on_arakawa,
                "grading": list(self.grading), "series": self.series.to_json(), "notes": list(self.notes)}


def _divide_out(data: AlgebraData, num: Expander, nseries: QSeries, denom: Term, scale: F) -> QSeries:
    """``nseries / (denom * D0)`` where ``nseries`` already carries ``D0``."""
    n = normalize(denom, num.grading)
    powers: Dict = {}
    for key, p in n.q0.items():
        powers[key] = powers.get(key, 0) + p
    for key, p in num.d0.items():
        powers[key] = powers.get(key, 0) + p
    s = nseries
    for (c, e), p in powers.items():
        for _ in range(max(0, -p)):
            s = s.mul_binomial(c, 0, e)
    for c, b, e, p in n.pos:
        for _ in range(abs(p)):
            s = s.div_binomial(c, b, e) if p > 0 else s.mul_binomial(c, b, e)
    for (c, e), p in sorted(powers.items(), key=lambda kv: (str(kv[0][0]), kv[0][1])):
        for _ in range(max(0, p)):
            if c not in (1, -1):
                raise CharacterError("non-unit q^0 binomial")
            s = divide_by_binomial(s, c, e)
    s = s.shift(-n.qexp, tuple(-v for v in n.mono), 1 / (F(n.coeff) * scale))
    return s


def _ramond_sum(data, k, lam, choice, top, betas, coeff=1) -> WeylSum:
    td = twist_data(data, choice)
    kh = _kh(data, k)
    qpref = form(data, lam, lam + td.rho_tw.scale(2)) / (2 * kh) + td.a_k(k)
    shift = tuple(-v for v in exps(data, data.rho_R(choice)))
    return affine_weyl_sum(data, lam, td.rho_tw, qpref, shift, betas, top, coeff)


def _finish_char(data, sector, choice, sums: WeylSum, top, scale, grading) -> QSeries:
    ex = Expander(data.nvars, top, grading)
    plan = ex.plan(sums.terms)
    den = denominator_term(data, sector, top, choice)
    # the denominator's own q^0 binomials must be present in D0 as well
    nden = normalize(den, grading)
    for key, p in nden.q0.items():
        if p < 0:
            ex.d0[key] = max(ex.d0.get(key, 0), -p)
    nser = ex.expand(plan)
    return _divide_out(data, ex, nser, den, scale)


def char_massless(data: AlgebraData, req: CharRequest) -> CharResult:
    """Ramond massless character at ``ell = A(k, nu)``."""
    k, nu, choice = rat(req.k), tuple(req.nu), req.eta_choice
    if not in_Pk_plus(data, k, nu):
        raise CharacterError("nu is not in P^+_k")
    if not massless_predicate(data, k, nu, req.ell, choice):
        raise CharacterError("the module is not massless (ell must equal A and, if theta/2 is a root, "
                             "nu must be Ramond extremal)")
    s0 = s0_massless(data, k, nu, choice)
    lam = nu_hat(data, k, nu, s0, choice)
    td = twist_data(data, choice)
    if is_degenerate(data, lam, td.rho_tw):
        raise CharacterError("the affine weight is degenerate")
    ell = ell_rho(data, k, lam, choice)
    top = ell + F(req.order)
    betas = _pi_nu(data, k, nu, choice)
    sums = _ramond_sum(data, k, lam, choice, top, betas)
    g = grading_vector(data, choice, _beta_images(data, betas))
    s = _finish_char(data, "ramond", choice, sums, top, F(1 + data.eps_R), g)
    return CharResult(s, ell, True, "ramond_massless", g)


def _beta_images(data, betas) -> List[Tuple[int, ...]]:
    out = []
    for w in data.weyl:
        for b in betas:
            out.append(exps(data, w(b.fin)))
    return out


def char_NS_massless(data: AlgebraData, req: CharRequest, t0=None) -> CharResult:
    """NS character at ``ell = A`` from the atypical untwisted weight ``k L0 + t0 theta + nu``."""
    k, nu = rat(req.k), tuple(req.nu)
    if not in_Pk_plus(data, k, nu):
        raise CharacterError("nu is not in P^+_k")
    rh = rho_hat(data)
    if t0 is None:
        x = data.form(nu, data.xi)
        cands = [F(0)] if not any(nu) else [x, k + 1 - x]
        for t in cands:
            if not is_degenerate(data, nu_hat_ns(data, k, nu, t), rh):
                t0 = t
                break
        else:
            raise CharacterError("both choices of t0 give a degenerate weight")
    lam = nu_hat_ns(data, k, nu, t0)
    ell = ell_ns(data, k, lam)
    top = ell + F(req.order)
    kh = _kh(data, k)
    qpref = form(data, lam, lam + rh.scale(2)) / (2 * kh)
    betas = [AffineWeight(F(0), F(0), b) for b in data.pi_odd_ns]
    sums = affine_weyl_sum(data, lam, rh, qpref, (0,) * data.nvars, betas, top)
    g = grading_vector(data, 0, _beta_images(data, betas))
    s = _finish_char(data, "ns", 0, sums, top, F(1), g)
    return CharResult(s, ell, not (k == data.k0 and not any(nu)), "ns_massless", g,
                      notes=[f"t0={t0}"])


def char_numerator_typical(data: AlgebraData, req: CharRequest) -> Tuple[List[Term], Fraction]:
    """Terms of the typical Weyl sum at energy ``ell`` and the overall prefactor.

    The prefactor is 1: when theta/2 is a root the odd zero mode of weight 0
    doubles the top space, which the constant factor of the denominator
    already accounts for.

    Every term depends on s only through the common factor ``q^ell(s)``, so
    the sum is built at a rational reference s and shifted to ``req.ell``.
    This also covers ``ell > B``, where s itself is not real.
    """
    k, nu, choice = rat(req.k), tuple(req.nu), req.eta_choice
    if not in_Pk_plus(data, k, nu):
        raise CharacterError("nu is not in P^+_k")
    s_ref = s_vertex(data, k)
    lam = nu_hat(data, k, nu, s_ref, choice)
    ell_ref = ell_rho(data, k, lam, choice)
    shift = rat(req.ell) - ell_ref
    top = rat(req.ell) + F(req.order)
    sums = _ramond_sum(data, k, lam, choice, top - shift, [])
    terms = [Term(t.coeff, t.qexp + shift, t.mono, t.factors) for t in sums.terms]
    return terms, F(1)


def char_typical(data: AlgebraData, req: CharRequest) -> CharResult:
    terms, pref = char_numerator_typical(data, req)
    top = rat(req.ell) + F(req.order)
    g = grading_vector(data, req.eta_choice)
    ws = WeylSum(terms=terms)
    s = _finish_char(data, "ramond", req.eta_choice, ws, top, 1 / pref, g)
    return CharResult(s, rat(req.ell), True, "ramond_typical", g)


def char_verma(data: AlgebraData, k, nu: Weight, ell, order, choice: int = 0, depth=6) -> QSeries:
    """``q^ell e^nu / F^R`` in the completion (single Weyl term over the denominator)."""
    g = grading_vector(data, choice)
    fs = [(c, b, e, -p) for c, b, e, p in denominator_factors(data, "ramond", order, choice)]
    t = term(1, 0, (0,) * data.nvars, fs)
    s = expand_completed(t, data.nvars, order, g, depth)
    sh = exps(data, nu)
    return s.shift(rat(ell), sh)


def char_request(req: CharRequest, data: Optional[AlgebraData] = None) -> CharResult:
    """Dispatch on sector and on whether ``ell`` is the massless value."""
    from .catalog import lookup
    from .unitarity import A_bound
    data = data or lookup(req.algebra)
    if req.sector == "ns":
        if not any(req.nu) and data.k0 is not None and rat(req.k) == data.k0:
            return char_NS_massless(data, req)
        raise CharacterError("NS characters are supported for the massless vacuum case only")
    A = A_bound(data, req.k, tuple(req.nu), req.eta_choice)
    if rat(req.ell) == A and massless_predicate(data, req.k, tuple(req.nu), req.ell, req.eta_choice):
        return char_massless(data, req)
    if rat(req.ell) < A:
        raise CharacterError("ell is below the necessary bound A")
    return char_typical(data, req)
