"""Weights, the invariant form, affine weights, ev and the finite Weyl group.

A weight is a tuple of Fractions over the coordinate labels of an algebra
(the delta's first, then the epsilon's).  An affine weight adds a level
``a0`` (coefficient of Lambda_0) and a ``dcoef`` (coefficient of delta).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .arith import rat

if TYPE_CHECKING:
    from .catalog import AlgebraData

Weight = Tuple[Fraction, ...]
Matrix = Tuple[Tuple[Fraction, ...], ...]


# ---------------------------------------------------------------- vectors


def vec(xs: Iterable) -> Weight:
    return tuple(rat(x) for x in xs)


def zero(n: int) -> Weight:
    return (Fraction(0),) * n


def vadd(a: Sequence[Fraction], b: Sequence[Fraction]) -> Weight:
    if len(a) != len(b):
        raise ValueError("weight arity mismatch")
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence[Fraction], b: Sequence[Fraction]) -> Weight:
    if len(a) != len(b):
        raise ValueError("weight arity mismatch")
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a: Sequence[Fraction]) -> Weight:
    c = rat(c)
    return tuple(c * x for x in a)


def vsum(vs: Iterable[Sequence[Fraction]], n: int) -> Weight:
    out = zero(n)
    for v in vs:
        out = vadd(out, v)
    return out


def bil(gram: Sequence[Sequence[Fraction]], a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    """``a^T G b``."""
    if len(a) != len(gram) or len(b) != len(gram):
        raise ValueError("weight arity mismatch")
    s = Fraction(0)
    for i, ai in enumerate(a):
        if ai:
            row = gram[i]
            s += ai * sum((row[j] * bj for j, bj in enumerate(b) if bj), Fraction(0))
    return s


def solve(mat: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Exact Gauss-Jordan solve of a square system; None if singular."""
    n = len(mat)
    m = [list(map(Fraction, row)) + [Fraction(r)] for row, r in zip(mat, rhs)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return None
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[r][n] for r in range(n)]


def inverse_matrix(mat: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    n = len(mat)
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        col = solve(mat, e)
        if col is None:
            raise ValueError("singular matrix")
        cols.append(col)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


# ---------------------------------------------------------- affine weights


@dataclass(frozen=True)
class AffineWeight:
    """``a0 * Lambda_0 + dcoef * delta + fin``."""

    a0: Fraction
    dcoef: Fraction
    fin: Weight

    def __add__(self, o: "AffineWeight") -> "AffineWeight":
        return AffineWeight(self.a0 + o.a0, self.dcoef + o.dcoef, vadd(self.fin, o.fin))

    def __sub__(self, o: "AffineWeight") -> "AffineWeight":
        return AffineWeight(self.a0 - o.a0, self.dcoef - o.dcoef, vsub(self.fin, o.fin))

    def __neg__(self) -> "AffineWeight":
        return AffineWeight(-self.a0, -self.dcoef, vscale(-1, self.fin))

    def scale(self, c) -> "AffineWeight":
        c = rat(c)
        return AffineWeight(c * self.a0, c * self.dcoef, vscale(c, self.fin))


def affine(fin: Sequence, a0=0, dcoef=0) -> AffineWeight:
    return AffineWeight(rat(a0), rat(dcoef), vec(fin))


@dataclass(frozen=True)
class EvWeight:
    """Image of ev: ``q^qexp e^fin`` with ``fin`` restricted to h-natural."""

    qexp: Fraction
    fin: Weight


WeightLike = Union[Weight, AffineWeight]


def form(data: "AlgebraData", a: WeightLike, b: WeightLike) -> Fraction:
    """Invariant form; affine extension with (L0|delta)=1, (L0|L0)=(delta|delta)=0."""
    if isinstance(a, AffineWeight) != isinstance(b, AffineWeight):
        raise TypeError("cannot pair a weight with an affine weight")
    if isinstance(a, AffineWeight):
        return bil(data.gram, a.fin, b.fin) + a.a0 * b.dcoef + a.dcoef * b.a0
    return bil(data.gram, a, b)


def pairing_x(data: "AlgebraData", lam: WeightLike) -> Fraction:
    """``lam(x)``; x corresponds to theta/2 under the form."""
    fin = lam.fin if isinstance(lam, AffineWeight) else lam
    return bil(data.gram, fin, data.theta) / 2


def pairing_xD(data: "AlgebraData", lam: WeightLike) -> Fraction:
    d = lam.dcoef if isinstance(lam, AffineWeight) else Fraction(0)
    return pairing_x(data, lam) + d


def restrict(data: "AlgebraData", lam: WeightLike) -> Weight:
    """Restriction to h-natural, written back in full coordinates."""
    c = hnat_coords(data, lam)
    return vsum((vscale(ci, b) for ci, b in zip(c, data.hnat_basis)), data.n)


def hnat_coords(data: "AlgebraData", lam: WeightLike) -> Tuple[Fraction, ...]:
    fin = lam.fin if isinstance(lam, AffineWeight) else lam
    pairs = [bil(data.gram, fin, b) for b in data.hnat_basis]
    inv = data.hnat_gram_inv
    return tuple(sum((inv[i][j] * pairs[j] for j in range(len(pairs))), Fraction(0))
                 for i in range(len(pairs)))


def exps(data: "AlgebraData", lam: WeightLike) -> Tuple[int, ...]:
    """Integer monomial exponents of ``e^{lam|h-natural}``."""
    out = []
    for c in hnat_coords(data, lam):
        v = c * data.scale
        if v.denominator != 1:
            raise ValueError(f"weight {lam} is off the monomial lattice")
        out.append(int(v))
    return tuple(out)


def ev(data: "AlgebraData", lam: AffineWeight) -> EvWeight:
    """``e^{ev(lam)} = q^{-lam(x+D)} e^{lam|h-natural}``."""
    return EvWeight(-pairing_xD(data, lam), restrict(data, lam))


def in_hnat(data: "AlgebraData", lam: Weight) -> bool:
    return bil(data.gram, lam, data.theta) == 0


# ---------------------------------------------------------- Weyl group


def reflection_matrix(gram, alpha: Weight) -> Matrix:
    """Matrix of s_alpha acting on coordinate vectors (column convention)."""
    n = len(alpha)
    ga = [sum((gram[i][j] * alpha[j] for j in range(n)), Fraction(0)) for i in range(n)]
    na = sum((a * g for a, g in zip(alpha, ga)), Fraction(0))
    if na == 0:
        raise ValueError("cannot reflect in an isotropic vector")
    f = Fraction(2) / na
    return tuple(tuple(Fraction(int(i == j)) - f * alpha[i] * ga[j] for j in range(n)) for i in range(n))


def mat_apply(m: Matrix, v: Sequence[Fraction]) -> Weight:
    return tuple(sum((r[j] * v[j] for j in range(len(v)) if v[j]), Fraction(0)) for r in m)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n))
                 for i in range(n))


class WeylElement:
    """A Weyl group element given by a reduced word in the simple reflections."""

    __slots__ = ("word", "_gens", "_matrix")

    def __init__(self, word: Tuple[int, ...], gens: Sequence[Matrix], matrix: Optional[Matrix] = None):
        self.word = tuple(word)
        self._gens = gens
        self._matrix = matrix

    @property
    def det(self) -> int:
        return -1 if len(self.word) % 2 else 1

    @property
    def matrix(self) -> Matrix:
        if self._matrix is None:
            n = len(self._gens[0])
            m = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
            for i in self.word:
                m = mat_mul(m, self._gens[i])
            self._matrix = m
        return self._matrix

    def __call__(self, lam: WeightLike) -> WeightLike:
        if isinstance(lam, AffineWeight):
            return AffineWeight(lam.a0, lam.dcoef, mat_apply(self.matrix, lam.fin))
        return mat_apply(self.matrix, lam)

    def __repr__(self) -> str:
        return f"WeylElement({self.word})"


def weyl_group(gram, simple: Sequence[Weight], regular: Weight,
               limit: int = 500_000) -> List[WeylElement]:
    """All elements as shortest (hence reduced) words.

    Breadth first search on the orbit of a regular vector, which is in
    bijection with the group.
    """
    gens = [reflection_matrix(gram, a) for a in simple]
    start = tuple(Fraction(x) for x in regular)
    seen: Dict[Weight, Tuple[int, ...]] = {start: ()}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            w = seen[v]
            for i, g in enumerate(gens):
                v2 = mat_apply(g, v)
                if v2 not in seen:
                    # the word acts right to left, so the new reflection goes in front
                    seen[v2] = (i,) + w
                    nxt.append(v2)
                    if len(seen) > limit:
                        raise RuntimeError("Weyl group larger than the enumeration limit")
        frontier = nxt
    words = sorted(seen.values(), key=lambda w: (len(w), w))
    return [WeylElement(w, gens) for w in words]


def weyl_nat_orbit(data: "AlgebraData", word: Sequence[int], lam: WeightLike) -> WeightLike:
    """Apply the word ``s_{i1} ... s_{ik}`` of simple reflections of Delta-natural."""
    out = lam
    for i in reversed(tuple(word)):
        out = WeylElement((i,), data.simple_reflections)(out)
    return out


def word_det(word: Sequence[int]) -> int:
    return -1 if len(word) % 2 else 1


# ---------------------------------------------------------- translations


def lattice_coords(data: "AlgebraData", alpha: Weight) -> Tuple[int, ...]:
    """Integer coordinates of ``alpha`` in the M-natural basis."""
    basis = data.M_nat_lattice
    g = [[bil(data.gram, b1, b2) for b2 in basis] for b1 in basis]
    rhs = [bil(data.gram, b, alpha) for b in basis]
    c = solve(g, rhs)
    if c is None or any(x.denominator != 1 for x in c):
        raise ValueError("weight is not in the lattice M-natural")
    if vsum((vscale(x, b) for x, b in zip(c, basis)), data.n) != tuple(alpha):
        raise ValueError("weight is not in the lattice M-natural")
    return tuple(int(x) for x in c)


def lattice_vector(data: "AlgebraData", coords: Sequence[int]) -> Weight:
    return vsum((vscale(c, b) for c, b in zip(coords, data.M_nat_lattice)), data.n)


def coroot_image(data: "AlgebraData", alpha: Weight) -> Weight:
    """``sum_i (2/u_i) alpha_i`` where ``alpha_i`` is the part of alpha in ideal i."""
    c = lattice_coords(data, alpha)
    out = zero(data.n)
    for ci, b, idx in zip(c, data.M_nat_lattice, data.M_nat_ideal):
        out = vadd(out, vscale(ci * 2 / data.ideals[idx].u, b))
    return out


def translate(data: "AlgebraData", alpha: Weight, lam: AffineWeight) -> AffineWeight:
    """``t_alpha(lam) = lam + lam(K) a' - ((lam|a') + (a'|a')lam(K)/2) delta`` with a' the coroot image.

    For a single ideal of norm v this is ``lam + (2/v)lam(K)alpha - (2/v)((lam|alpha) + (alpha|alpha)lam(K)/v) delta``.
    """
    ap = coroot_image(data, alpha)
    k = lam.a0
    fin = vadd(lam.fin, vscale(k, ap))
    d = lam.dcoef - (bil(data.gram, lam.fin, ap) + bil(data.gram, ap, ap) * k / 2)
    return AffineWeight(lam.a0, d, fin)


# ---------------------------------------------------------- lattice points


def quadratic_coefficients(f: Callable[[Tuple[int, ...]], Fraction], dim: int):
    """Recover ``A, b, c`` with ``f(x) = x^T A x + b.x + c`` from values of f."""
    e = [tuple(int(i == j) for i in range(dim)) for j in range(dim)]
    z = (0,) * dim
    c = Fraction(f(z))
    fp = [Fraction(f(v)) for v in e]
    fm = [Fraction(f(tuple(-x for x in v))) for v in e]
    A = [[Fraction(0)] * dim for _ in range(dim)]
    b = [Fraction(0)] * dim
    for i in range(dim):
        A[i][i] = (fp[i] + fm[i]) / 2 - c
        b[i] = (fp[i] - fm[i]) / 2
    for i in range(dim):
        for j in range(i + 1, dim):
            v = tuple(int(k in (i, j)) for k in range(dim))
            fij = Fraction(f(v))
            A[i][j] = A[j][i] = (fij - c - b[i] - b[j] - A[i][i] - A[j][j]) / 2
    return A, b, c


def _is_pos_def(A) -> bool:
    n = len(A)
    for k in range(1, n + 1):
        sub = [row[:k] for row in A[:k]]
        if _det(sub) <= 0:
            return False
    return True


def _det(m) -> Fraction:
    n = len(m)
    a = [list(map(Fraction, r)) for r in m]
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return d


def quadratic_box(A, b, c, bound: Fraction, slack: int = 0) -> Optional[List[range]]:
    """Integer box containing every x with ``x^T A x + b.x + c < bound``.

    Exact: the minimum and the ellipsoid half-widths are computed in rationals;
    the square roots are rounded up.  Returns None if the region is empty.
    """
    n = len(A)
    if n == 0:
        return [] if c < bound else None
    if not _is_pos_def(A):
        raise ValueError("quadratic part is not positive definite")
    Ainv = inverse_matrix(A)
    center = [-sum((Ainv[i][j] * b[j] for j in range(n)), Fraction(0)) / 2 for i in range(n)]
    m = c - sum((b[i] * Ainv[i][j] * b[j] for i in range(n) for j in range(n)), Fraction(0)) / 4
    R = Fraction(bound) - m
    if R <= 0:
        return None
    out = []
    for i in range(n):
        w2 = R * Ainv[i][i]
        w = math.isqrt(w2.numerator // w2.denominator) + 1
        lo = math.floor(center[i]) - w - slack
        hi = math.ceil(center[i]) + w + slack
        out.append(range(lo, hi + 1))
    return out


def lattice_points(f: Callable[[Tuple[int, ...]], Fraction], dim: int, bound, slack: int = 0,
                   max_box: int = 5_000_000) -> List[Tuple[int, ...]]:
    """All integer points with ``f(x) < bound`` for an exactly quadratic, positive definite f."""
    A, b, c = quadratic_coefficients(f, dim)
    box = quadratic_box(A, b, c, Fraction(bound), slack)
    if box is None:
        return []
    size = 1
    for r in box:
        size *= len(r)
    if size > max_box:
        raise RuntimeError("lattice box too large")
    bound = Fraction(bound)
    return [x for x in itertools.product(*box) if f(x) < bound]


def lattice_points_min(fs: Sequence[Callable[[Tuple[int, ...]], Fraction]], dim: int, bound,
                       slack: int = 0) -> List[Tuple[int, ...]]:
    """Points where ``min_i f_i(x) < bound``; each f_i exactly quadratic and positive definite."""
    seen = set()
    for f in fs:
        for x in lattice_points(f, dim, bound, slack):
            seen.add(x)
    return sorted(seen)
