"""Necessary and sufficient bounds for unitarity of Ramond twisted modules.

All quantities are exact rationals.  ``choice`` selects the positive system
of h-natural weights of g_{1/2} where two are available (default 0).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence

from .arith import rat
from .catalog import AlgebraData
from .weights import Weight, vadd, vscale, vsub, zero

F = Fraction


class UnitarityError(ValueError):
    """Invalid input for a bound (critical level, bad weight, ...)."""


class Status(str, Enum):
    NOT_LEVEL_ADMISSIBLE = "NotLevelAdmissible"
    NOT_DOMINANT = "NotDominant"
    UNITARY = "Unitary"
    UNITARY_CONDITIONAL = "UnitaryConditionalOnConjecture"
    UNKNOWN_CONDITIONAL = "UnknownConditional"
    EXTREMAL_BOUNDARY_OPEN = "ExtremalBoundaryOpen"
    FAILS_NECESSARY = "FailsNecessary"
    NS_REPORT_ONLY = "NSReportOnly"


@dataclass(frozen=True)
class HighestWeight:
    nu: Weight
    ell: Fraction
    sector: str = "ramond"


@dataclass
class UnitarityVerdict:
    status: Status
    A: Optional[Fraction] = None
    B: Optional[Fraction] = None
    is_ramond_extremal: Optional[bool] = None
    eta_min_used: Optional[Weight] = None
    basis: str = ""
    in_Pk_plus: Optional[bool] = None
    notes: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        def s(x):
            return None if x is None else str(x)

        return {
            "status": self.status.value,
            "A": s(self.A),
            "B": s(self.B),
            "is_ramond_extremal": self.is_ramond_extremal,
            "eta_min_used": None if self.eta_min_used is None else [str(x) for x in self.eta_min_used],
            "basis": self.basis,
            "in_Pk_plus": self.in_Pk_plus,
            "notes": list(self.notes),
        }


# ------------------------------------------------------------ basic checks


def _kh(data: AlgebraData, k) -> Fraction:
    kh = rat(k) + data.h_dual
    if kh == 0:
        raise UnitarityError("k equals the critical level -h")
    return kh


def coroot_value(data: AlgebraData, nu: Weight, alpha: Weight) -> Fraction:
    """``nu(alpha^vee) = 2(nu|alpha)/(alpha|alpha)``."""
    return 2 * data.form(nu, alpha) / data.form(alpha, alpha)


def levels_admissible(data: AlgebraData, k) -> bool:
    """All M_i(k) are non-negative integers."""
    for idl in data.ideals:
        m = idl.M(rat(k))
        if m.denominator != 1 or m < 0:
            return False
    return True


def is_dominant_integral(data: AlgebraData, nu: Weight) -> bool:
    if data.form(nu, data.theta) != 0:
        return False
    for a in data.simple_nat:
        v = coroot_value(data, nu, a)
        if v.denominator != 1 or v < 0:
            return False
    return True


def in_Pk_plus(data: AlgebraData, k, nu: Weight) -> bool:
    """``nu`` dominant integral with ``nu(theta_i^vee) <= M_i(k)`` for every ideal."""
    if not is_dominant_integral(data, nu):
        return False
    return all(coroot_value(data, nu, i.theta) <= i.M(rat(k)) for i in data.ideals)


def dominant_weights(data: AlgebraData, k) -> List[Weight]:
    """The finite set P^+_k, sorted by Dynkin labels."""
    k = rat(k)
    if not levels_admissible(data, k):
        return []
    top = max(int(i.M(k)) for i in data.ideals)
    out = []
    for labels in itertools.product(range(top + 1), repeat=len(data.fundamental_weights)):
        nu = zero(data.n)
        for c, w in zip(labels, data.fundamental_weights):
            nu = vadd(nu, vscale(c, w))
        if in_Pk_plus(data, k, nu):
            out.append(nu)
    return out


# ------------------------------------------------------------ F and c


def _check_root(data: AlgebraData, gamma: Weight) -> None:
    if gamma not in data.delta_nat_plus and vscale(-1, gamma) not in data.delta_nat_plus:
        raise UnitarityError(f"{gamma} is not a root of g-natural")


def c_gamma_eta(data: AlgebraData, gamma: Weight, eta: Weight) -> Fraction:
    """The constant of the commutator lemma for a root gamma and a weight eta of g_{-1/2}."""
    _check_root(data, gamma)
    if eta not in data.delta_half_bar:
        raise UnitarityError(f"{eta} is not an h-natural weight of g_1/2")
    if any(eta):
        v = data.form(gamma, eta)
        return v if v <= 0 else F(0)
    return -F(1, 2) if _is_minimal_length(data, gamma) else F(0)


def _is_minimal_length(data: AlgebraData, gamma: Weight) -> bool:
    # with a single root length every root counts as minimal
    return data.is_short(gamma)


def F_of(data: AlgebraData, nu: Weight, eta: Weight) -> Fraction:
    """``2(eta|nu)^2 + sum_{(g|eta)<=0}(g|eta)(nu|g) - sum_{(g|eta)>=0}(g|eta)(nu|g)`` over positive roots."""
    f = data.form
    out = 2 * f(eta, nu) ** 2
    for g in data.delta_nat_plus:
        ge = f(g, eta)
        if ge <= 0:
            out += ge * f(nu, g)
        if ge >= 0:
            out -= ge * f(nu, g)
    return out


def min_F(data: AlgebraData, nu: Weight, choice: int = 0) -> Fraction:
    """Brute force minimum of F over the chosen positive weights of g_{1/2}."""
    return min(F_of(data, nu, eta) for eta in data.delta_half_plus[data._choice(choice)])


def F_eta_min(data: AlgebraData, nu: Weight, choice: int = 0) -> Fraction:
    """Closed form of F at eta_min when theta/2 is not a root.

    ``2(nu|eta)((nu|eta) + 2(rho_nat - rho_R|eta)) - 2(nu|rho_R)``; the
    coefficient 2 of the last term is what the case checks require.
    """
    return _F_eta_min(data, nu, choice, F(2))


def F_eta_min_printed(data: AlgebraData, nu: Weight, choice: int = 0) -> Fraction:
    """Same closed form with coefficient 1 on ``(nu|rho_R)``, kept for comparison."""
    return _F_eta_min(data, nu, choice, F(1))


def _F_eta_min(data, nu, choice, c) -> Fraction:
    f = data.form
    eta = data.eta_min(choice)
    rR = data.rho_R(choice)
    ne = f(nu, eta)
    return 2 * ne * (ne + 2 * f(vsub(data.rho_nat, rR), eta)) - c * f(nu, rR)


# ------------------------------------------------------------ A and B


def A_bound(data: AlgebraData, k, nu: Weight, choice: int = 0) -> Fraction:
    """The necessary lower bound A(k, nu) for the minimal energy."""
    k = rat(k)
    kh = _kh(data, k)
    f = data.form
    p = data.p(k)
    if data.theta_half_is_root:
        rR = data.rho_R(choice)
        num = f(nu, vadd(nu, vscale(2, vsub(data.rho_nat, rR)))) - p / 2
    else:
        num = f(nu, vadd(nu, vscale(2, data.rho_nat))) - p / 2 + F_of(data, nu, data.eta_min(choice))
    return num / (2 * kh)


def B_bound(data: AlgebraData, k, nu: Weight, choice: int = 0) -> Fraction:
    """The free field sufficient bound B(k, nu, rho_R)."""
    k = rat(k)
    kh = _kh(data, k)
    mu = vsub(nu, data.rho_R(choice))
    return (-(k + 1) ** 2 / (4 * kh)
            + data.form(mu, vadd(mu, vscale(2, data.rho_nat))) / (2 * kh)
            + F(data.dim_g_half, 16))


def AB_gap(data: AlgebraData, k, nu: Weight, choice: int = 0) -> Fraction:
    """``A - B`` predicted in closed form: zero if theta/2 is a root, else a square over k+h."""
    if data.theta_half_is_root:
        return F(0)
    kh = _kh(data, k)
    x = data.form(vadd(vsub(nu, data.rho_R(choice)), data.rho_nat), data.eta_min(choice))
    return x * x / kh


# ------------------------------------------------------------ extremality


def is_extremal(data: AlgebraData, k, mu: Weight) -> bool:
    """``mu(theta_i^vee) > M_i(k) + chi_i`` for some ideal."""
    k = rat(k)
    return any(coroot_value(data, mu, i.theta) > i.M(k) + i.chi for i in data.ideals)


def ramond_extremal(data: AlgebraData, k, nu: Weight, choice: int = 0) -> bool:
    """``nu - rho_R`` lies outside P^+_k or is extremal."""
    mu = vsub(nu, data.rho_R(choice))
    if not in_Pk_plus(data, k, mu):
        return True
    return is_extremal(data, k, mu)


# ------------------------------------------------------------ ell(s) and friends


def ell_of_s(data: AlgebraData, k, nu: Weight, s, choice: int = 0) -> Fraction:
    """Minimal energy of the reduction of ``k L0 + s theta + nu + rho_R``."""
    k, s = rat(k), rat(s)
    kh = _kh(data, k)
    f = data.form
    eps = data.eps_R
    rR = data.rho_R(choice)
    mu = vsub(nu, rR)
    return (f(mu, vadd(mu, vscale(2, data.rho_nat))) / (2 * kh)
            + s * (s - k - 1 + F(eps, 2)) / kh
            + 2 * f(rR, vsub(data.rho_nat, rR)) / kh
            + k * (data.dim_g_half - 2 * eps) / (8 * kh)
            - F(data.dim_g_half, 16))


def s_vertex(data: AlgebraData, k) -> Fraction:
    """The s where ell(s) attains B: ``(k+1)/2 - eps/4``."""
    return (rat(k) + 1) / 2 - F(data.eps_R, 4)


def d_of_s(data: AlgebraData, k, s) -> Fraction:
    """``ell(s) - B`` in closed form, a square over ``k+h``."""
    kh = _kh(data, k)
    x = rat(s) - s_vertex(data, k)
    return x * x / kh


def s_partner(data: AlgebraData, k, s) -> Fraction:
    """The other root of ``ell(s') = ell(s)``: ``k + 1 - eps/2 - s``."""
    return rat(k) + 1 - F(data.eps_R, 2) - rat(s)


def s_at_A(data: AlgebraData, k, nu: Weight, choice: int = 0) -> List[Fraction]:
    """Values of s with ``ell(s) = A(k, nu)``."""
    k = rat(k)
    if data.theta_half_is_root:
        return [(2 * k + 1) / 4]
    x = data.form(vadd(vsub(nu, data.rho_R(choice)), data.rho_nat), data.eta_min(choice))
    c = (k + 1) / 2
    return sorted({c + x, c - x})


def s0_collapsing(data: AlgebraData, choice: int = 0) -> Fraction:
    """The s used at the collapsing level k0 with nu = 0."""
    if data.k0 is None:
        raise UnitarityError(f"{data.id} has no collapsing level")
    k0 = data.k0
    if data.theta_half_is_root:
        return (2 * k0 + 1) / 4
    return (k0 + 1) / 2 + data.form(vsub(data.rho_R(choice), data.rho_nat), data.eta_min(choice))


def g0_norm(data: AlgebraData, k, nu: Weight, ell, eta: Weight) -> Fraction:
    """Squared norm of ``G_0`` applied to the highest weight vector, up to the positive factor.

    For eta nonzero this is
    ``-2(k+h)ell + (nu|nu+2 rho_nat) - p(k)/2 + F_nu(eta)``; for eta = 0 (only when
    theta/2 is a root) it is twice ``-2(k+h)ell + (nu|nu+2(rho_nat-rho_R)) - p(k)/2``.
    """
    k, ell = rat(k), rat(ell)
    kh = _kh(data, k)
    f = data.form
    p = data.p(k)
    if not any(eta):
        if not data.theta_half_is_root:
            raise UnitarityError("eta = 0 is a weight only when theta/2 is a root")
        rR = data.rho_R(0)
        return 2 * (-2 * kh * ell + f(nu, vadd(nu, vscale(2, vsub(data.rho_nat, rR)))) - p / 2)
    if not any(eta in plus for plus in data.delta_half_plus):
        raise UnitarityError(f"{eta} is not a positive weight of g_1/2")
    return -2 * kh * ell + f(nu, vadd(nu, vscale(2, data.rho_nat))) - p / 2 + F_of(data, nu, eta)


def binding_eta(data: AlgebraData, choice: int = 0) -> Weight:
    """The weight whose norm condition defines A."""
    return zero(data.n) if data.theta_half_is_root else data.eta_min(choice)


def massless_predicate(data: AlgebraData, k, nu: Weight, ell, choice: int = 0) -> bool:
    if rat(ell) != A_bound(data, k, nu, choice):
        return False
    if data.theta_half_is_root:
        return ramond_extremal(data, k, nu, choice)
    return True


# ------------------------------------------------------------ verdict

# Extremal modules whose unitarity at ell = A is proved (N=3 and N=4 cases).


def _proved_extremal(data: AlgebraData, k, nu: Weight) -> bool:
    if data.id == "spo3":
        m = data.ideals[0].M(rat(k))
        return nu == zero(data.n) or nu == vscale(m / 2, data.ideals[0].theta)
    if data.id == "psl22":
        return nu == zero(data.n)
    return False


def verdict(data: AlgebraData, k, nu: Weight, ell, sector: str = "ramond",
            assume_conjecture: bool = False, choice: int = 0) -> UnitarityVerdict:
    """Classify ``L^W(nu, ell)`` at level k."""
    k, ell = rat(k), rat(ell)
    _kh(data, k)
    if len(nu) != data.n:
        raise UnitarityError("weight arity mismatch")
    if not levels_admissible(data, k):
        return UnitarityVerdict(Status.NOT_LEVEL_ADMISSIBLE, basis="levels M_i(k) must lie in Z_+")
    inP = in_Pk_plus(data, k, nu)
    if not inP:
        return UnitarityVerdict(Status.NOT_DOMINANT, in_Pk_plus=False, basis="nu must lie in P+_k")
    if sector.lower() == "ns":
        return UnitarityVerdict(Status.NS_REPORT_ONLY, in_Pk_plus=True,
                                is_ramond_extremal=None,
                                basis="NS sector: only P+_k membership is reported",
                                notes=["extremal (NS)" if is_extremal(data, k, nu) else "not extremal (NS)"])
    A = A_bound(data, k, nu, choice)
    B = B_bound(data, k, nu, choice)
    ext = ramond_extremal(data, k, nu, choice)
    v = UnitarityVerdict(Status.FAILS_NECESSARY, A=A, B=B, is_ramond_extremal=ext,
                         eta_min_used=binding_eta(data, choice), in_Pk_plus=True)
    if ell < A:
        v.basis = "ell < A(k,nu)"
        return v
    if ext:
        if ell != A:
            v.basis = "Ramond extremal weight forces ell = A(k,nu)"
            return v
        if _proved_extremal(data, k, nu):
            v.status = Status.UNITARY
            v.basis = "Ramond extremal, ell = A; proved for N=3 and N=4"
        else:
            v.status = Status.EXTREMAL_BOUNDARY_OPEN
            v.basis = "Ramond extremal, ell = A; unitarity open"
        return v
    if ell >= B:
        v.status = Status.UNITARY
        v.basis = "ell >= B(k,nu,rho_R) (free field realization)"
        return v
    if data.theta_half_is_root:
        # A = B here, so this branch is unreachable for consistent data
        v.status = Status.UNITARY
        v.basis = "theta/2 root: ell >= A = B"
        return v
    if assume_conjecture:
        v.status = Status.UNITARY_CONDITIONAL
        v.basis = "A <= ell < B: unitary assuming the reduction conjecture"
    else:
        v.status = Status.UNKNOWN_CONDITIONAL
        v.basis = "A <= ell < B: needs the reduction conjecture"
    return v


def table_rows(data: AlgebraData, k, choice: int = 0) -> List[Dict[str, object]]:
    """A, B and extremality for every nu in P^+_k."""
    k = rat(k)
    rows = []
    for nu in dominant_weights(data, k):
        labels = [int(coroot_value(data, nu, a)) for a in data.simple_nat]
        rows.append({
            "nu": [str(x) for x in nu],
            "dynkin": labels,
            "A": str(A_bound(data, k, nu, choice)),
            "B": str(B_bound(data, k, nu, choice)),
            "ramond_extremal": ramond_extremal(data, k, nu, choice),
        })
    return rows
