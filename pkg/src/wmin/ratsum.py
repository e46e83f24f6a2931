"""Sums of rational terms expanded as q-series.

A :class:`Term` is ``coeff * q^qexp * x^mono * prod (1 + c q^b x^e)^p``.  Factors
with ``b != 0`` are expanded in the ``|q| < 1`` sense (a factor with ``b < 0``
first pulls its monomial out).  Factors with ``b == 0`` live in the q^0 Laurent
ring and are oriented by a grading vector so that ``1 + c x^e`` always has
``grading . e > 0``.

Every q^0 denominator is cleared by multiplying with the common multiple ``D0``
of all such binomials.  After that each q-level is a Laurent polynomial, so two
sides can be compared exactly.  Two sides that agree after multiplying by the
same ``D0`` agree in every completion where ``D0`` is invertible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .arith import Coeff, Exps, QSeries, norm_coeff

Factor = Tuple[Coeff, Fraction, Exps, int]
Binomial = Tuple[Coeff, Exps]

_SMALL = 3


@dataclass(frozen=True)
class Term:
    coeff: Coeff
    qexp: Fraction
    mono: Exps
    factors: Tuple[Factor, ...] = ()


def term(coeff, qexp, mono: Sequence[int], factors: Iterable[Tuple] = ()) -> Term:
    fs = tuple((norm_coeff(Fraction(c)), Fraction(b), tuple(int(v) for v in e), int(p))
               for c, b, e, p in factors)
    return Term(norm_coeff(Fraction(coeff)), Fraction(qexp), tuple(int(v) for v in mono), fs)


def _add(a: Sequence[int], b: Sequence[int], k: int = 1) -> Exps:
    return tuple(x + k * y for x, y in zip(a, b))


def _grade(g: Optional[Sequence[int]], e: Sequence[int]) -> int:
    if g is None:
        raise ValueError("a q^0 binomial needs a grading vector")
    v = sum(a * b for a, b in zip(g, e))
    if v == 0:
        raise ValueError(f"grading vanishes on the q^0 binomial exponent {tuple(e)}")
    return v


@dataclass
class _Norm:
    coeff: Coeff
    qexp: Fraction
    mono: Exps
    q0: Dict[Binomial, int]
    pos: List[Factor]


def normalize(t: Term, grading: Optional[Sequence[int]] = None) -> Optional[_Norm]:
    """Orient every factor; returns None for a term that vanishes identically."""
    coeff: Coeff = t.coeff
    q = t.qexp
    mono = t.mono
    q0: Dict[Binomial, int] = {}
    pos: List[Factor] = []
    for c, b, e, p in t.factors:
        if p == 0 or c == 0:
            continue
        nonconst = any(e)
        if b < 0 or (b == 0 and nonconst and _grade(grading, e) < 0):
            # (1 + c m)^p = (c m)^p (1 + m^-1/c)^p
            coeff = coeff * Fraction(c) ** p
            q = q + b * p
            mono = _add(mono, e, p)
            c, b, e = norm_coeff(1 / Fraction(c)), -b, tuple(-v for v in e)
        if b == 0 and not nonconst:
            base = 1 + Fraction(c)
            if base == 0:
                if p < 0:
                    raise ZeroDivisionError("factor (1 - 1) in a denominator")
                return None
            coeff = coeff * base ** p
        elif b == 0:
            key = (c, e)
            q0[key] = q0.get(key, 0) + p
        else:
            pos.append((c, b, e, p))
    return _Norm(norm_coeff(coeff), q, mono, {k: v for k, v in q0.items() if v}, pos)


def _laurent_pow(nvars: int, factors: Sequence[Tuple[Binomial, int]]) -> Dict[Exps, Coeff]:
    out: Dict[Exps, Coeff] = {(0,) * nvars: 1}
    for (c, e), p in factors:
        for _ in range(p):
            nxt: Dict[Exps, Coeff] = {}
            for m, v in out.items():
                nxt[m] = nxt.get(m, 0) + v
                m2 = _add(m, e)
                nxt[m2] = nxt.get(m2, 0) + c * v
            out = {m: norm_coeff(v) for m, v in nxt.items() if v}
    return out


def _factor_terms(c: Coeff, b: Fraction, e: Exps, p: int, bound: Fraction) -> List[Tuple[Fraction, Exps, Coeff]]:
    """Expansion of ``(1 + c q^b x^e)^p`` (b > 0) below relative q-bound."""
    out = []
    j = 0
    while j * b < bound:
        if p > 0:
            if j > p:
                break
            cf = comb(p, j) * Fraction(c) ** j
        else:
            cf = comb(-p + j - 1, j) * Fraction(-c) ** j
        out.append((j * b, tuple(j * v for v in e), norm_coeff(cf)))
        j += 1
    return out


class Expander:
    """Accumulates the D0-cleared expansions of many terms."""

    def __init__(self, nvars: int, order, grading: Optional[Sequence[int]] = None,
                 d0: Optional[Dict[Binomial, int]] = None):
        self.nvars = nvars
        self.order = Fraction(order)
        self.grading = None if grading is None else tuple(grading)
        self.d0: Dict[Binomial, int] = dict(d0 or {})
        self._poly_cache: Dict[Tuple, Dict[Exps, Coeff]] = {}

    def plan(self, terms: Iterable[Term]) -> List[_Norm]:
        """Normalize terms and widen D0 to cover their q^0 denominators."""
        out = []
        for t in terms:
            n = normalize(t, self.grading)
            if n is None or not n.coeff:
                continue
            for k, p in n.q0.items():
                if p < 0:
                    self.d0[k] = max(self.d0.get(k, 0), -p)
            out.append(n)
        return out

    def _poly(self, q0: Dict[Binomial, int]) -> Dict[Exps, Coeff]:
        keys = set(self.d0) | set(q0)
        powers = tuple(sorted(((k, self.d0.get(k, 0) + q0.get(k, 0)) for k in keys),
                              key=lambda kv: (str(kv[0][0]), kv[0][1])))
        if any(p < 0 for _, p in powers):
            raise ValueError("D0 does not cover a q^0 denominator; plan all terms first")
        got = self._poly_cache.get(powers)
        if got is None:
            got = _laurent_pow(self.nvars, [kp for kp in powers if kp[1]])
            self._poly_cache[powers] = got
        return got

    def expand(self, norms: Iterable[_Norm]) -> QSeries:
        acc: Dict[Tuple[Fraction, Exps], Coeff] = {}
        offset: Optional[Fraction] = None
        for n in norms:
            if n.qexp >= self.order:
                continue
            offset = n.qexp if offset is None else min(offset, n.qexp)
            poly = self._poly(n.q0)
            if len(n.pos) <= _SMALL:
                self._expand_small(n, poly, acc)
            else:
                self._expand_big(n, poly, acc)
        if offset is None:
            offset = Fraction(0)
        acc = {k: v for k, v in acc.items() if v}
        return QSeries.from_terms(self.nvars, acc, order=self.order - offset, offset=offset)

    def _expand_small(self, n: _Norm, poly: Dict[Exps, Coeff], acc) -> None:
        bound = self.order - n.qexp
        parts: List[Tuple[Fraction, Exps, Coeff]] = [(Fraction(0), n.mono, n.coeff)]
        for c, b, e, p in n.pos:
            fe = _factor_terms(c, b, e, p, bound)
            parts = [(q1 + q2, _add(m1, m2), c1 * c2) for q1, m1, c1 in parts for q2, m2, c2 in fe
                     if q1 + q2 < bound]
        for q1, m1, c1 in parts:
            qa = n.qexp + q1
            for m2, c2 in poly.items():
                k = (qa, _add(m1, m2))
                acc[k] = norm_coeff(acc.get(k, 0) + c1 * c2)

    def _expand_big(self, n: _Norm, poly: Dict[Exps, Coeff], acc) -> None:
        bound = self.order - n.qexp
        s = QSeries.from_terms(self.nvars, {(0, m): c for m, c in poly.items()}, order=bound, offset=0)
        for c, b, e, p in sorted(n.pos, key=lambda f: (f[3] < 0, f[1])):
            if b >= bound:
                continue
            for _ in range(abs(p)):
                s = s.mul_binomial(c, b, e) if p > 0 else s.div_binomial(c, b, e)
        s = s.shift(n.qexp, n.mono, n.coeff)
        for q, m, c in s.items():
            k = (q, m)
            acc[k] = norm_coeff(acc.get(k, 0) + c)


def clear_and_expand(sides: Sequence[Iterable[Term]], nvars: int, order,
                     grading: Optional[Sequence[int]] = None,
                     d0: Optional[Dict[Binomial, int]] = None) -> Tuple[List[QSeries], Dict[Binomial, int]]:
    """Expand each side times the common q^0 denominator ``D0``."""
    ex = Expander(nvars, order, grading, d0)
    plans = [ex.plan(s) for s in sides]
    return [ex.expand(p) for p in plans], dict(ex.d0)


def d0_series(nvars: int, d0: Dict[Binomial, int], order) -> QSeries:
    poly = _laurent_pow(nvars, [kp for kp in d0.items() if kp[1]])
    return QSeries.from_terms(nvars, {(0, m): c for m, c in poly.items()}, order=Fraction(order), offset=0)


# ------------------------------------------------------------ product helpers


def theta0_factors(e: Sequence[int], order, c: Coeff = 1, qshift: Fraction = Fraction(0),
                   power: int = 1) -> List[Factor]:
    """Factors of ``theta0(c q^qshift x^e) = prod_j (1 - c q^{s+j-1} x^e)(1 - q^{j-s} x^-e / c)``."""
    order = Fraction(order)
    e = tuple(e)
    ne = tuple(-v for v in e)
    qshift = Fraction(qshift)
    out: List[Factor] = []
    j = 1
    ic = norm_coeff(1 / Fraction(c))
    while True:
        b1 = qshift + j - 1
        b2 = j - qshift
        done = True
        if b1 < order:
            out.append((norm_coeff(-Fraction(c)), b1, e, power))
            done = False
        if b2 < order:
            out.append((norm_coeff(-ic), b2, ne, power))
            done = False
        if done and b1 > 0 and b2 > 0:
            break
        j += 1
    return out


def theta1_factors(e: Sequence[int], order, power: int = 1) -> List[Factor]:
    """``theta1(x) = theta0(-q^(1/2) x)``."""
    return theta0_factors(e, order, c=-1, qshift=Fraction(1, 2), power=power)


def phi_factors(nvars: int, order, power: int = 1) -> List[Factor]:
    z = (0,) * nvars
    return [(-1, Fraction(j), z, power) for j in range(1, int(Fraction(order)) + 2)]


def phi1_factors(nvars: int, order, power: int = 1) -> List[Factor]:
    z = (0,) * nvars
    order = Fraction(order)
    out = []
    j = 1
    while j - Fraction(1, 2) < order:
        out.append((1, j - Fraction(1, 2), z, power))
        j += 1
    return out


def phi2_factors(nvars: int, order, power: int = 1) -> List[Factor]:
    z = (0,) * nvars
    return [(1, Fraction(j), z, power) for j in range(1, int(Fraction(order)) + 2)]
