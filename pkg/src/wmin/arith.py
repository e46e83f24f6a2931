"""Exact rationals, Laurent polynomials and truncated q-series.

A :class:`QSeries` is a formal sum of terms ``c * q^e * x^a`` where ``e`` is a
rational q-exponent on the grid ``offset + Z/denom`` and ``a`` is an integer
exponent vector over a fixed number of lattice variables.  Coefficients are
exact (``int`` or ``Fraction``).

Truncation follows the usual power series rule: a series is exact for
``e < offset + order`` and unknown above.  A product is exact up to the
smaller relative order measured from the summed offsets.

Optionally a series carries a lattice depth bound: a grading vector ``g`` and
an exclusive bound ``depth`` on ``g . a``.  This is only needed when a q-level
holds infinitely many monomials, e.g. ``1/(1 - x)`` expanded in powers of ``x``.

Internally each term is stored under one packed integer key holding the
q-step and the exponent vector, so multiplying monomials is an integer add.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

Rat = Fraction
Coeff = Union[int, Fraction]
Exps = Tuple[int, ...]

_BITS = 24
_BIAS = 1 << (_BITS - 1)
_MASK = (1 << _BITS) - 1

DEFAULT_MONOMIAL_LIMIT = 4_000_000


class SizeLimitError(RuntimeError):
    """Raised when a series grows past the configured monomial count."""


class ArityError(ValueError):
    """Raised when two operands have different numbers of lattice variables."""


_limit = [DEFAULT_MONOMIAL_LIMIT]


def set_monomial_limit(n: int) -> None:
    if n <= 0:
        raise ValueError("monomial limit must be positive")
    _limit[0] = int(n)


def get_monomial_limit() -> int:
    return _limit[0]


def rat(x: Union[int, str, Fraction]) -> Fraction:
    """Parse ``p/q`` strings, ints or Fractions into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational")
        return Fraction(s)
    raise TypeError(f"cannot read {x!r} as a rational")


def norm_coeff(c: Coeff) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


# ---------------------------------------------------------------- packing


class _Packer:
    __slots__ = ("n", "shift", "biasv", "rmask")

    def __init__(self, n: int):
        self.n = n
        self.shift = _BITS * n
        self.biasv = sum(_BIAS << (_BITS * i) for i in range(n))
        self.rmask = (1 << self.shift) - 1

    def pack(self, exps: Sequence[int]) -> int:
        r = 0
        for i, e in enumerate(exps):
            v = e + _BIAS
            if not 0 <= v <= _MASK:
                raise OverflowError("exponent out of packable range")
            r |= v << (_BITS * i)
        return r

    def unpack(self, r: int) -> Exps:
        return tuple(((r >> (_BITS * i)) & _MASK) - _BIAS for i in range(self.n))


_packers: Dict[int, _Packer] = {}


def _packer(n: int) -> _Packer:
    p = _packers.get(n)
    if p is None:
        p = _packers[n] = _Packer(n)
    return p


# --------------------------------------------------------- Laurent polys


class LaurentPoly:
    """Sparse Laurent polynomial over integer exponent vectors of fixed arity."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Optional[Mapping[Exps, Coeff]] = None):
        self.nvars = nvars
        self.terms: Dict[Exps, Coeff] = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(v) for v in e)
                if len(e) != nvars:
                    raise ArityError("exponent vector has wrong arity")
                if c:
                    self.terms[e] = norm_coeff(self.terms.get(e, 0) + c)
                    if not self.terms[e]:
                        del self.terms[e]

    @classmethod
    def monomial(cls, exps: Sequence[int], c: Coeff = 1) -> "LaurentPoly":
        return cls(len(exps), {tuple(exps): c})

    def _check(self, other: "LaurentPoly") -> None:
        if self.nvars != other.nvars:
            raise ArityError("arity mismatch")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = norm_coeff(out.get(e, 0) + c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        r = LaurentPoly(self.nvars)
        r.terms = out
        return r

    def __neg__(self) -> "LaurentPoly":
        r = LaurentPoly(self.nvars)
        r.terms = {e: -c for e, c in self.terms.items()}
        return r

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out: Dict[Exps, Coeff] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(self.nvars, {e: c for e, c in out.items() if c})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LaurentPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*x^{list(e)}" for e, c in sorted(self.terms.items()))


# ---------------------------------------------------------------- series


class QSeries:
    """Truncated q-series with Laurent polynomial coefficients.

    ``offset`` is a lower bound for every stored q-exponent and ``order`` the
    exclusive truncation bound measured from ``offset``.  ``order`` may be
    ``None`` for an exact finite object (a polynomial in q).
    """

    __slots__ = ("nvars", "denom", "offset", "order", "grading", "depth", "_t", "_pk")

    def __init__(self, nvars: int, denom: int = 1, offset: Coeff = 0,
                 order: Optional[Coeff] = None, grading: Optional[Sequence[int]] = None,
                 depth: Optional[Coeff] = None):
        if denom <= 0:
            raise ValueError("denom must be positive")
        self.nvars = nvars
        self.denom = int(denom)
        self.offset = Fraction(offset)
        self.order = None if order is None else Fraction(order)
        self.grading = None if grading is None else tuple(int(g) for g in grading)
        self.depth = None if depth is None else Fraction(depth)
        if self.depth is not None and self.grading is None:
            raise ValueError("a depth bound needs a grading vector")
        self._t: Dict[int, Coeff] = {}
        self._pk = _packer(nvars)

    # ---- construction

    @classmethod
    def from_terms(cls, nvars: int, terms: Mapping[Tuple[Coeff, Sequence[int]], Coeff],
                   order: Optional[Coeff] = None, offset: Optional[Coeff] = None,
                   denom: Optional[int] = None, grading=None, depth=None) -> "QSeries":
        qs = [Fraction(q) for q, _ in terms]
        if offset is None:
            offset = min(qs) if qs else 0
        offset = Fraction(offset)
        d = 1 if denom is None else denom
        for q in qs:
            d = _lcm(d, (q - offset).denominator)
        s = cls(nvars, d, offset, order, grading, depth)
        for (q, e), c in terms.items():
            s._add_term(Fraction(q), tuple(e), c)
        s._truncate()
        return s

    @classmethod
    def one(cls, nvars: int, order: Optional[Coeff] = None) -> "QSeries":
        return cls.monomial(nvars, 0, (0,) * nvars, 1, order)

    @classmethod
    def zero(cls, nvars: int, order: Optional[Coeff] = None) -> "QSeries":
        return cls(nvars, 1, 0, order)

    @classmethod
    def monomial(cls, nvars: int, qexp: Coeff, exps: Sequence[int], c: Coeff = 1,
                 order: Optional[Coeff] = None) -> "QSeries":
        """``c q^qexp x^exps``; ``order`` is absolute here (exclusive q bound)."""
        qexp = Fraction(qexp)
        rel = None if order is None else Fraction(order) - qexp
        s = cls(nvars, qexp.denominator if qexp.denominator else 1, qexp, rel)
        s.denom = 1
        if c and (rel is None or rel > 0):
            s._t[s._pk.pack(exps)] = norm_coeff(c)
        return s

    def _blank(self, offset=None, order=None, denom=None) -> "QSeries":
        s = QSeries.__new__(QSeries)
        s.nvars = self.nvars
        s.denom = self.denom if denom is None else denom
        s.offset = self.offset if offset is None else offset
        s.order = self.order if order is None else order
        s.grading = self.grading
        s.depth = self.depth
        s._t = {}
        s._pk = self._pk
        return s

    def copy(self) -> "QSeries":
        s = self._blank()
        s.order = self.order
        s._t = dict(self._t)
        return s

    def _add_term(self, q: Fraction, exps: Exps, c: Coeff) -> None:
        if len(exps) != self.nvars:
            raise ArityError("exponent vector has wrong arity")
        k = (q - self.offset) * self.denom
        if k.denominator != 1 or k < 0:
            raise ValueError("q-exponent off the series grid")
        key = (int(k) << self._pk.shift) | self._pk.pack(exps)
        v = norm_coeff(self._t.get(key, 0) + c)
        if v:
            self._t[key] = v
        else:
            self._t.pop(key, None)

    # ---- accessors

    @property
    def top(self) -> Optional[Fraction]:
        """Absolute exclusive q bound, or None when exact."""
        return None if self.order is None else self.offset + self.order

    def _qstep_bound(self) -> Optional[int]:
        """Smallest excluded q-step (relative to offset) or None."""
        if self.order is None:
            return None
        return math.ceil(self.order * self.denom)

    def __len__(self) -> int:
        return len(self._t)

    def items(self) -> Iterator[Tuple[Fraction, Exps, Coeff]]:
        sh, pk = self._pk.shift, self._pk
        for key in sorted(self._t, key=lambda k: (k >> sh, pk.unpack(k & pk.rmask))):
            yield self.offset + Fraction(key >> sh, self.denom), pk.unpack(key & pk.rmask), self._t[key]

    def as_dict(self) -> Dict[Tuple[Fraction, Exps], Coeff]:
        return {(q, e): c for q, e, c in self.items()}

    def levels(self) -> Dict[Fraction, LaurentPoly]:
        out: Dict[Fraction, Dict[Exps, Coeff]] = {}
        for q, e, c in self.items():
            out.setdefault(q, {})[e] = c
        return {q: LaurentPoly(self.nvars, t) for q, t in out.items()}

    def coeff(self, qexp: Coeff) -> LaurentPoly:
        qexp = Fraction(qexp)
        k = (qexp - self.offset) * self.denom
        out: Dict[Exps, Coeff] = {}
        if k.denominator == 1 and k >= 0:
            sh = self._pk.shift
            for key, c in self._t.items():
                if key >> sh == k:
                    out[self._pk.unpack(key & self._pk.rmask)] = c
        return LaurentPoly(self.nvars, out)

    def min_qexp(self) -> Optional[Fraction]:
        if not self._t:
            return None
        return self.offset + Fraction(min(self._t) >> self._pk.shift, self.denom)

    def is_zero(self) -> bool:
        return not self._t

    def n_monomials(self) -> int:
        return len(self._t)

    # ---- truncation

    def _truncate(self) -> "QSeries":
        kb = self._qstep_bound()
        sh = self._pk.shift
        if kb is not None:
            lim = kb << sh
            for key in [k for k in self._t if k >= lim]:
                del self._t[key]
        if self.depth is not None:
            g = self.grading
            for key in list(self._t):
                if self._gval(key & self._pk.rmask) >= self.depth:
                    del self._t[key]
        if len(self._t) > _limit[0]:
            raise SizeLimitError(f"series exceeds {_limit[0]} monomials")
        return self

    def _gval(self, packed: int) -> int:
        e = self._pk.unpack(packed)
        return sum(a * b for a, b in zip(self.grading, e))

    def truncated(self, order: Optional[Coeff] = None, absolute: bool = True) -> "QSeries":
        """Copy truncated at a (smaller) absolute q bound."""
        s = self.copy()
        if order is not None:
            top = Fraction(order) if absolute else s.offset + Fraction(order)
            if s.top is None or top < s.top:
                s.order = top - s.offset
        return s._truncate()

    def with_depth(self, grading: Sequence[int], depth: Coeff) -> "QSeries":
        s = self.copy()
        g = tuple(grading)
        if s.grading is not None and s.grading != g:
            raise ValueError("grading mismatch")
        s.grading = g
        d = Fraction(depth)
        s.depth = d if s.depth is None else min(s.depth, d)
        return s._truncate()

    # ---- rebasing

    def rebased(self, offset: Fraction, denom: int) -> "QSeries":
        """Same series on the grid ``offset + Z/denom`` (must contain the old grid)."""
        offset = Fraction(offset)
        if offset == self.offset and denom == self.denom:
            return self
        if denom % self.denom:
            raise ValueError("new grid must refine the old one")
        dk = (self.offset - offset) * denom
        if dk.denominator != 1 or dk < 0:
            raise ValueError("new offset incompatible with series grid")
        f = denom // self.denom
        dk = int(dk)
        sh, rm = self._pk.shift, self._pk.rmask
        s = self._blank(offset=offset, denom=denom)
        s.order = None if self.order is None else self.order + (self.offset - offset)
        s._t = {(((k >> sh) * f + dk) << sh) | (k & rm): c for k, c in self._t.items()}
        return s

    def _common(self, other: "QSeries") -> Tuple["QSeries", "QSeries"]:
        if self.nvars != other.nvars:
            raise ArityError("arity mismatch")
        off = min(self.offset, other.offset)
        d = _lcm(self.denom, other.denom)
        d = _lcm(d, (self.offset - other.offset).denominator)
        return self.rebased(off, d), other.rebased(off, d)

    def _merge_lattice(self, other: "QSeries") -> Tuple[Optional[Exps], Optional[Fraction]]:
        if self.grading is not None and other.grading is not None and self.grading != other.grading:
            raise ValueError("grading mismatch")
        g = self.grading if self.grading is not None else other.grading
        ds = [d for d in (self.depth, other.depth) if d is not None]
        return g, (min(ds) if ds else None)

    # ---- ring operations

    def __add__(self, other: Union["QSeries", Coeff]) -> "QSeries":
        if not isinstance(other, QSeries):
            other = QSeries.monomial(self.nvars, 0, (0,) * self.nvars, other)
        a, b = self._common(other)
        tops = [t for t in (self.top, other.top) if t is not None]
        s = a._blank()
        s.grading, s.depth = self._merge_lattice(other)
        s.order = None if not tops else min(tops) - a.offset
        t = dict(a._t)
        for k, c in b._t.items():
            v = t.get(k, 0) + c
            if v:
                t[k] = norm_coeff(v)
            else:
                t.pop(k, None)
        s._t = t
        return s._truncate()

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        s = self._blank()
        s._t = {k: -c for k, c in self._t.items()}
        return s

    def __sub__(self, other: Union["QSeries", Coeff]) -> "QSeries":
        if not isinstance(other, QSeries):
            other = QSeries.monomial(self.nvars, 0, (0,) * self.nvars, other)
        return self + (-other)

    def __rsub__(self, other: Coeff) -> "QSeries":
        return (-self) + other

    def scale(self, c: Coeff) -> "QSeries":
        s = self._blank()
        if c:
            s._t = {k: norm_coeff(v * c) for k, v in self._t.items()}
        return s

    def shift(self, qexp: Coeff = 0, exps: Optional[Sequence[int]] = None, c: Coeff = 1) -> "QSeries":
        """Multiply by the monomial ``c q^qexp x^exps`` (exact, no truncation loss)."""
        s = self._blank(offset=self.offset + Fraction(qexp))
        if exps is None or not any(exps):
            s._t = {k: norm_coeff(v * c) for k, v in self._t.items()} if c != 1 else dict(self._t)
        else:
            if self.depth is not None:
                s.depth = self.depth + sum(a * b for a, b in zip(self.grading, exps))
            dk = self._pk.pack(exps) - self._pk.biasv
            s._t = {k + dk: norm_coeff(v * c) for k, v in self._t.items()}
        return s._truncate()

    def _by_level(self) -> List[Tuple[int, List[Tuple[int, Coeff]]]]:
        sh, rm = self._pk.shift, self._pk.rmask
        lv: Dict[int, List[Tuple[int, Coeff]]] = {}
        for k, c in self._t.items():
            lv.setdefault(k >> sh, []).append((k & rm, c))
        return sorted(lv.items())

    def _gmin(self) -> Optional[int]:
        if self.grading is None:
            return None
        vals = [self._gval(k & self._pk.rmask) for k in self._t]
        m = min(vals) if vals else None
        if self.depth is not None:
            m = self.depth if m is None else min(m, self.depth)
        return m

    def __mul__(self, other: Union["QSeries", Coeff]) -> "QSeries":
        if not isinstance(other, QSeries):
            return self.scale(other)
        if self.nvars != other.nvars:
            raise ArityError("arity mismatch")
        d = _lcm(self.denom, other.denom)
        a = self.rebased(self.offset, d)
        b = other.rebased(other.offset, d)
        orders = [o for o in (a.order, b.order) if o is not None]
        s = a._blank(offset=a.offset + b.offset, order=min(orders) if orders else None, denom=d)
        g, _ = self._merge_lattice(other)
        s.grading = g
        s.depth = None
        if self.depth is not None or other.depth is not None:
            bounds = []
            if a.depth is not None:
                gm = b._gmin_with(g)
                bounds.append(a.depth + (gm if gm is not None else 0))
            if b.depth is not None:
                gm = a._gmin_with(g)
                bounds.append(b.depth + (gm if gm is not None else 0))
            s.depth = min(bounds)
        kb = s._qstep_bound()
        sh, biasv = a._pk.shift, a._pk.biasv
        out: Dict[int, Coeff] = {}
        la, lb = a._by_level(), b._by_level()
        limit = _limit[0]
        for qa, ta in la:
            if kb is not None and qa >= kb:
                break
            for qb, tb in lb:
                qs = qa + qb
                if kb is not None and qs >= kb:
                    break
                base = (qs << sh) - biasv
                get = out.get
                for ra, ca in ta:
                    r0 = base + ra
                    for rb, cb in tb:
                        k = r0 + rb
                        out[k] = get(k, 0) + ca * cb
                if len(out) > limit:
                    raise SizeLimitError(f"product exceeds {limit} monomials")
        s._t = {k: norm_coeff(v) for k, v in out.items() if v}
        return s._truncate()

    __rmul__ = __mul__

    def _gmin_with(self, g: Optional[Exps]) -> Optional[int]:
        if g is None:
            return None
        vals = [sum(x * y for x, y in zip(g, self._pk.unpack(k & self._pk.rmask))) for k in self._t]
        m = min(vals) if vals else None
        if self.depth is not None:
            m = self.depth if m is None else min(m, self.depth)
        return m

    def mul_binomial(self, c: Coeff, qexp: Coeff, exps: Sequence[int]) -> "QSeries":
        """Multiply by ``1 + c q^qexp x^exps`` (qexp >= 0) without a full product."""
        if not c:
            return self.copy()
        return self + self.shift(qexp, exps, c)

    def div_binomial(self, c: Coeff, qexp: Coeff, exps: Sequence[int]) -> "QSeries":
        """Divide by ``1 + c q^qexp x^exps`` with ``qexp > 0`` (a unit), level by level."""
        qexp = Fraction(qexp)
        if qexp <= 0:
            raise ValueError("div_binomial needs a positive q-exponent")
        if not c:
            return self.copy()
        if self.order is None:
            raise ValueError("division by a q-binomial needs a truncation order")
        d = _lcm(self.denom, qexp.denominator)
        s = self.rebased(self.offset, d)
        step = int(qexp * d)
        sh, rm = s._pk.shift, s._pk.rmask
        dk = s._pk.pack(exps) - s._pk.biasv
        lv: Dict[int, Dict[int, Coeff]] = {}
        for k, v in s._t.items():
            lv.setdefault(k >> sh, {})[k & rm] = v
        kb = s._qstep_bound()
        out: Dict[int, Dict[int, Coeff]] = {}
        for q in range(0, kb):
            cur = dict(lv.get(q, {}))
            prev = out.get(q - step)
            if prev:
                for r, v in prev.items():
                    r2 = r + dk
                    w = norm_coeff(cur.get(r2, 0) - c * v)
                    if w:
                        cur[r2] = w
                    else:
                        cur.pop(r2, None)
            if cur:
                out[q] = cur
        res = s._blank()
        res._t = {(q << sh) | r: v for q, t in out.items() for r, v in t.items()}
        return res._truncate()

    def __pow__(self, n: int) -> "QSeries":
        if n < 0:
            return self.inverse() ** (-n)
        r = QSeries.one(self.nvars, None)
        base = self
        while n:
            if n & 1:
                r = r * base
            n >>= 1
            if n:
                base = base * base
        return r

    # ---- inversion

    def inverse(self, grading: Optional[Sequence[int]] = None, depth: Optional[Coeff] = None) -> "QSeries":
        """Two-sided inverse up to truncation.

        The lowest q-level must be a single monomial, unless a grading and a
        depth are supplied; then the lowest level is inverted as a geometric
        series in the direction of positive grading.
        """
        if not self._t:
            raise ZeroDivisionError("series is zero")
        if self.order is None and len(self._t) > 1:
            raise ValueError("inverse of a non-monomial needs a truncation order")
        lv = self._by_level()
        q0, t0 = lv[0]
        sh, biasv, pk = self._pk.shift, self._pk.biasv, self._pk
        m_q = self.offset + Fraction(q0, self.denom)
        if len(t0) == 1:
            r0, c0 = t0[0]
            lead_exps = pk.unpack(r0)
            u = self.shift(-m_q, tuple(-v for v in lead_exps), Fraction(1) / c0 if c0 != 1 else 1)
            inv_u = u._unit_inverse()
            return inv_u.shift(-m_q, tuple(-v for v in lead_exps), Fraction(1) / c0 if c0 != 1 else 1)
        if grading is None or depth is None:
            raise ValueError("lowest q-coefficient is not a monomial; a grading and depth are required")
        g = tuple(grading)
        gv = [(sum(x * y for x, y in zip(g, pk.unpack(r))), r, c) for r, c in t0]
        gv.sort()
        if len(gv) > 1 and gv[0][0] == gv[1][0]:
            raise ValueError("grading does not single out a leading monomial")
        _, r0, c0 = gv[0]
        lead_exps = pk.unpack(r0)
        u = self.shift(-m_q, tuple(-v for v in lead_exps), Fraction(1) / c0 if c0 != 1 else 1)
        u = u.with_depth(g, depth)
        inv_u = u._geometric_inverse(g, Fraction(depth))
        return inv_u.shift(-m_q, tuple(-v for v in lead_exps), Fraction(1) / c0 if c0 != 1 else 1)

    def _unit_inverse(self) -> "QSeries":
        # self = 1 + R with R in strictly positive q-steps (offset 0)
        lv = dict(self._by_level())
        kb = self._qstep_bound()
        sh, biasv = self._pk.shift, self._pk.biasv
        one_key = self._pk.pack((0,) * self.nvars)
        if lv.get(0) != [(one_key, 1)]:
            raise ValueError("not a unit series")
        rest = [(q, t) for q, t in sorted(lv.items()) if q > 0]
        res: Dict[int, Dict[int, Coeff]] = {0: {one_key: 1}}
        total = 1
        for n in range(1, kb):
            acc: Dict[int, Coeff] = {}
            for q, t in rest:
                if q > n:
                    break
                prev = res.get(n - q)
                if not prev:
                    continue
                for ra, ca in t:
                    for rb, cb in prev.items():
                        k = ra + rb - biasv
                        acc[k] = acc.get(k, 0) - ca * cb
            acc = {k: norm_coeff(v) for k, v in acc.items() if v}
            if acc:
                res[n] = acc
                total += len(acc)
                if total > _limit[0]:
                    raise SizeLimitError("inverse exceeds monomial limit")
        s = self._blank()
        s._t = {(q << sh) | r: c for q, t in res.items() for r, c in t.items()}
        return s

    def _geometric_inverse(self, g: Exps, depth: Fraction) -> "QSeries":
        # self = 1 + R, every term of R has positive grading or positive q-step
        one_key = self._pk.pack((0,) * self.nvars)
        r = self - QSeries.one(self.nvars, None)
        for key in r._t:
            q = key >> self._pk.shift
            if q == 0 and self._gval(key & self._pk.rmask) <= 0:
                raise ValueError("leading level is not dominated by its leading monomial")
        result = QSeries.one(self.nvars, None).with_depth(g, depth)
        result.order = self.order
        power = result.copy()
        neg = -r
        for _ in range(10_000):
            power = power * neg
            power = power.with_depth(g, depth)
            power.order = self.order
            power._truncate()
            if power.is_zero():
                break
            result = result + power
        else:
            raise SizeLimitError("geometric inverse did not terminate")
        result.order = self.order
        result.depth = depth
        return result._truncate()

    def __truediv__(self, other: Union["QSeries", Coeff]) -> "QSeries":
        if isinstance(other, QSeries):
            return self * other.inverse()
        return self.scale(Fraction(1) / Fraction(other))

    # ---- substitution / specialization

    def map_exponents(self, matrix: Sequence[Sequence[Coeff]], nvars_out: int,
                      qshift: Optional[Sequence[Coeff]] = None) -> "QSeries":
        """Linear change of lattice variables ``x^a -> q^(s.a) y^(M a)``.

        ``matrix`` has ``nvars_out`` rows.  Exponents must stay integral.  A
        q-shift that lowers exponents shrinks the known window accordingly.
        """
        sh, rm, pk = self._pk.shift, self._pk.rmask, self._pk
        out: Dict[Tuple[Fraction, Exps], Coeff] = {}
        lows: List[Fraction] = []
        for key, c in self._t.items():
            e = pk.unpack(key & rm)
            q = self.offset + Fraction(key >> sh, self.denom)
            ne = []
            for row in matrix:
                v = sum(Fraction(a) * b for a, b in zip(row, e))
                if v.denominator != 1:
                    raise ValueError("non-integral exponent after substitution")
                ne.append(int(v))
            if qshift is not None:
                q += sum(Fraction(a) * b for a, b in zip(qshift, e))
            k = (q, tuple(ne))
            out[k] = out.get(k, 0) + c
        out = {k: v for k, v in out.items() if v}
        off = min((q for q, _ in out), default=self.offset)
        off = min(off, self.offset)
        res = QSeries.from_terms(nvars_out, out, offset=off, denom=self.denom)
        res.order = None if self.order is None else self.top - off
        return res._truncate()

    # ---- comparison and serialization

    def equal_to(self, other: "QSeries", upto: Optional[Coeff] = None) -> bool:
        return self.first_mismatch(other, upto) is None

    def first_mismatch(self, other: "QSeries", upto: Optional[Coeff] = None):
        """First (qexp, exps, lhs, rhs) that differs below the common bound."""
        tops = [t for t in (self.top, other.top) if t is not None]
        if upto is not None:
            tops.append(Fraction(upto))
        top = min(tops) if tops else None
        diff = self - other
        da = self.as_dict()
        db = other.as_dict()
        for q, e, c in diff.items():
            if top is not None and q >= top:
                break
            return q, e, da.get((q, e), 0), db.get((q, e), 0)
        return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.nvars == other.nvars and self.top == other.top and self.as_dict() == other.as_dict()

    __hash__ = None  # type: ignore[assignment]

    def to_json(self) -> dict:
        levels: Dict[Fraction, List[dict]] = {}
        for q, e, c in self.items():
            c = Fraction(c)
            levels.setdefault(q, []).append({"exps": list(e), "num": c.numerator, "den": c.denominator})
        out = {
            "offset": str(self.offset),
            "denom_lcm": self.denom,
            "order": None if self.order is None else str(self.order),
            "terms": [{"q_num": q.numerator, "q_den": q.denominator, "monomials": ms}
                      for q, ms in sorted(levels.items())],
        }
        if self.grading is not None:
            out["grading"] = list(self.grading)
            out["depth"] = None if self.depth is None else str(self.depth)
        return out

    @classmethod
    def from_json(cls, nvars: int, data: dict) -> "QSeries":
        terms = {}
        for t in data["terms"]:
            q = Fraction(t["q_num"], t["q_den"])
            for m in t["monomials"]:
                terms[(q, tuple(m["exps"]))] = Fraction(m["num"], m["den"])
        order = data.get("order")
        s = cls.from_terms(nvars, terms, offset=Fraction(data["offset"]), denom=data["denom_lcm"],
                           order=None if order is None else Fraction(order),
                           grading=data.get("grading"),
                           depth=None if data.get("depth") is None else Fraction(data["depth"]))
        return s

    def __repr__(self) -> str:
        parts = []
        for q, e, c in list(self.items())[:12]:
            parts.append(f"{c}*q^{q}*x^{list(e)}")
        more = " + ..." if len(self._t) > 12 else ""
        return f"QSeries({' + '.join(parts) or '0'}{more}; O(q^{self.top}))"


# ------------------------------------------------------- factor helpers


def expand_inverse_factor(c: Coeff, qexp: Coeff, exps: Sequence[int], order: Coeff,
                          grading: Optional[Sequence[int]] = None,
                          depth: Optional[Coeff] = None) -> QSeries:
    """Expand ``1/(1 + c q^qexp x^exps)`` as a |q|<1 geometric series.

    ``qexp > 0`` expands directly; ``qexp < 0`` first factors the monomial
    out; ``qexp == 0`` expands towards positive grading and needs ``depth``.
    The result is exact for absolute q-exponents below ``order``.
    """
    n = len(exps)
    qexp = Fraction(qexp)
    order = Fraction(order)
    c = norm_coeff(Fraction(c)) if isinstance(c, Fraction) else c
    if not c:
        return QSeries.one(n, order)
    if qexp == 0 and not any(exps):
        if c == -1:
            raise ZeroDivisionError("1/(1-1)")
        return QSeries.monomial(n, 0, exps, Fraction(1) / (1 + Fraction(c)), order)
    if qexp < 0 or (qexp == 0 and _grade(grading, exps, strict=True) < 0):
        # 1/(1 + c m) = (1/c) m^-1 / (1 + (1/c) m^-1)
        ic = norm_coeff(Fraction(1) / Fraction(c))
        inner = expand_inverse_factor(ic, -qexp, tuple(-v for v in exps), order - (-qexp),
                                      grading, None if depth is None else Fraction(depth) - _grade(grading, [-v for v in exps]))
        res = inner.shift(-qexp, tuple(-v for v in exps), ic)
        res.order = order - res.offset
        if depth is not None:
            res.grading, res.depth = tuple(grading), Fraction(depth)
        return res._truncate()
    terms: Dict[Tuple[Fraction, Exps], Coeff] = {}
    k = 0
    cp: Coeff = 1
    if qexp == 0:
        if depth is None:
            raise ValueError("a q^0 factor needs a lattice depth to expand")
        step = _grade(grading, exps)
        while k * step < depth:
            terms[(Fraction(0), tuple(k * v for v in exps))] = cp
            k += 1
            cp = norm_coeff(-cp * c)
        s = QSeries.from_terms(n, terms, offset=0, order=order, grading=grading, depth=depth)
        return s
    while k * qexp < order:
        terms[(k * qexp, tuple(k * v for v in exps))] = cp
        k += 1
        cp = norm_coeff(-cp * c)
    s = QSeries.from_terms(n, terms, offset=0, denom=qexp.denominator, order=order)
    if depth is not None:
        s = s.with_depth(grading, depth)
    return s


def _grade(grading: Optional[Sequence[int]], exps: Sequence[int], strict: bool = False) -> int:
    if grading is None:
        if strict:
            raise ValueError("a q^0 factor needs a grading to pick its expansion direction")
        return 0
    v = sum(a * b for a, b in zip(grading, exps))
    if strict and v == 0:
        raise ValueError("grading vanishes on the factor's monomial")
    return v


def product_of_binomials(nvars: int, factors: Iterable[Tuple[Coeff, Coeff, Sequence[int]]],
                         order: Coeff) -> QSeries:
    """Product of ``(1 + c q^b x^e)`` over the given factors (all ``b >= 0``)."""
    s = QSeries.one(nvars, Fraction(order))
    for c, b, e in factors:
        if Fraction(b) >= Fraction(order):
            continue
        if Fraction(b) < 0:
            raise ValueError("binomial with negative q-exponent")
        s = s.mul_binomial(c, b, e)
    return s


def divide_by_binomial(s: QSeries, c: Coeff, exps: Sequence[int]) -> QSeries:
    """Exact quotient of ``s`` by ``1 + c x^exps`` (a q^0 Laurent binomial).

    Works level by level and raises ``ValueError`` if some level is not
    divisible.  ``c`` must be +1 or -1.
    """
    if c not in (1, -1):
        raise ValueError("only +-1 binomials are supported")
    if not any(exps):
        return s.scale(Fraction(1, 1 + c)) if c != -1 else _raise_zero()
    pk = s._pk
    sh, rm = pk.shift, pk.rmask
    i0 = next(i for i, v in enumerate(exps) if v)
    step = exps[i0]
    lines: Dict[Tuple[int, Exps], Dict[int, Coeff]] = {}
    for key, cf in s._t.items():
        e = pk.unpack(key & rm)
        t = e[i0] // step
        rep = tuple(a - t * b for a, b in zip(e, exps))
        lines.setdefault((key >> sh, rep), {})[t] = cf
    out = s._blank()
    res: Dict[int, Coeff] = {}
    for (q, rep), line in lines.items():
        ts = sorted(line)
        lo, hi = ts[0], ts[-1]
        prev: Coeff = 0
        for t in range(lo, hi):
            cur = norm_coeff(line.get(t, 0) - c * prev)
            if cur:
                e = tuple(a + t * b for a, b in zip(rep, exps))
                res[(q << sh) | pk.pack(e)] = cur
            prev = cur
        if line[hi] != c * prev:
            raise ValueError("series is not divisible by the binomial")
    out._t = res
    return out


def _raise_zero():
    raise ZeroDivisionError("division by 1 - 1")
