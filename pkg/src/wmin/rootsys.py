"""Simply laced root systems D4, E6, E7, E8 and their minimal gradings.

Roots are integer vectors in the basis of simple roots and the form is the
Cartan matrix, so ``(theta|theta) = 2``.  The centralizer of the minimal sl2
has the roots orthogonal to ``theta``; it is generated by the simple roots
orthogonal to ``theta``.  Weights restricted to its Cartan subalgebra are
written by their pairings with those simple roots (Dynkin labels).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Sequence, Tuple

from .weights import inverse_matrix

Vec = Tuple[int, ...]

_EDGES = {
    "D4": (4, [(1, 2), (2, 3), (2, 4)]),
    "E6": (6, [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)]),
    "E7": (7, [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4)]),
    "E8": (8, [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]),
}

# size of the centralizer's positive root system and the constant b
EXPECTED = {"D4": (12, 3, 4), "E6": (36, 15, 9), "E7": (63, 30, 14), "E8": (120, 63, 24)}


class RootSystemError(ValueError):
    pass


def cartan_matrix(typ: str) -> Tuple[Tuple[int, ...], ...]:
    if typ not in _EDGES:
        raise RootSystemError(f"unknown type {typ!r}; expected one of {sorted(_EDGES)}")
    n, edges = _EDGES[typ]
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges:
        a[i - 1][j - 1] = a[j - 1][i - 1] = -1
    return tuple(tuple(r) for r in a)


@dataclass
class RootSystem:
    typ: str
    cartan: Tuple[Tuple[int, ...], ...]
    positive: List[Vec] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.cartan)

    def form(self, a: Sequence, b: Sequence) -> Fraction:
        n = self.rank
        return sum((Fraction(a[i]) * self.cartan[i][j] * b[j] for i in range(n) for j in range(n)), Fraction(0))

    def simple(self, i: int) -> Vec:
        return tuple(int(i == j) for j in range(self.rank))

    def reflect(self, i: int, v: Sequence) -> tuple:
        c = sum(Fraction(v[j]) * self.cartan[j][i] for j in range(self.rank))
        out = list(v)
        out[i] = out[i] - c
        return tuple(out)

    @cached_property
    def theta(self) -> Vec:
        return max(self.positive, key=sum)

    @cached_property
    def h_dual(self) -> int:
        return sum(self.theta) + 1

    @cached_property
    def rho(self) -> Tuple[Fraction, ...]:
        inv = inverse_matrix([[Fraction(x) for x in r] for r in self.cartan])
        return tuple(sum(inv[i], Fraction(0)) for i in range(self.rank))

    def rho_pair(self, gamma: Sequence) -> Fraction:
        """``(rho|gamma)`` for gamma in simple root coordinates."""
        return sum((Fraction(x) for x in gamma), Fraction(0))

    @cached_property
    def nat_simple(self) -> List[int]:
        """Indices of simple roots orthogonal to theta."""
        return [i for i in range(self.rank) if self.form(self.simple(i), self.theta) == 0]

    @cached_property
    def nat_positive(self) -> List[Vec]:
        return [a for a in self.positive if self.form(a, self.theta) == 0]

    @cached_property
    def half(self) -> List[Vec]:
        """Roots with ``(beta|theta) = 1``."""
        return [a for a in self.positive if self.form(a, self.theta) == 1]

    @cached_property
    def nat_cartan(self) -> Tuple[Tuple[int, ...], ...]:
        j = self.nat_simple
        return tuple(tuple(self.cartan[a][b] for b in j) for a in j)

    def labels(self, v: Sequence) -> Vec:
        """Pairings with the centralizer's simple roots (restriction to its Cartan)."""
        out = []
        for i in self.nat_simple:
            x = sum(Fraction(v[j]) * self.cartan[j][i] for j in range(self.rank))
            if x.denominator != 1:
                raise RootSystemError("weight is not integral on the centralizer")
            out.append(int(x))
        return tuple(out)

    @cached_property
    def b(self) -> int:
        return (self.h_dual + self.h_dual_nat) // 2

    @cached_property
    def h_dual_nat(self) -> int:
        # each simple ideal of the centralizer: h = 1 + height of its highest root
        comps = _components(self.nat_cartan)
        vals = set()
        for comp in comps:
            sub = tuple(tuple(self.nat_cartan[a][b] for b in comp) for a in comp)
            vals.add(sum(max(_positive_roots(sub), key=sum)) + 1)
        if len(vals) != 1:
            raise RootSystemError("centralizer ideals have different dual Coxeter numbers")
        return vals.pop()

    @cached_property
    def a(self) -> int:
        return self.h_dual // 6 + 1

    @cached_property
    def alpha_chain(self) -> Vec:
        """``theta - alpha_1 - ... - alpha_{a-1}``, each step subtracting the unique simple root."""
        roots = set(self.positive)
        cur = self.theta
        for _ in range(self.a - 1):
            nxt = [tuple(c - int(i == j) for j, c in enumerate(cur)) for i in range(self.rank)]
            nxt = [v for v in nxt if v in roots]
            if len(nxt) != 1:
                raise RootSystemError("the simple root subtracted from theta is not unique")
            cur = nxt[0]
        return cur

    @cached_property
    def coset_words(self) -> Dict[Vec, Tuple[int, ...]]:
        """For each root eta a shortest word ``u`` (applied right to left) with ``u(theta) = eta``."""
        words: Dict[Vec, Tuple[int, ...]] = {self.theta: ()}
        frontier = [self.theta]
        while frontier:
            nxt = []
            for v in frontier:
                for i in range(self.rank):
                    w = tuple(int(x) for x in self.reflect(i, v))
                    if w not in words:
                        words[w] = (i,) + words[v]
                        nxt.append(w)
            frontier = nxt
        return words

    def apply_word(self, word: Sequence[int], v: Sequence) -> tuple:
        """Apply ``s_{word[0]} ... s_{word[-1]}`` to v."""
        for i in reversed(word):
            v = self.reflect(i, v)
        return tuple(v)


def _positive_roots(cartan) -> List[Vec]:
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = list(simple)
    seen = set(roots)
    frontier = list(simple)
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(n):
                pair = sum(v[j] * cartan[j][i] for j in range(n))
                if pair == -1:
                    w = tuple(c + int(i == j) for j, c in enumerate(v))
                    if w not in seen:
                        seen.add(w)
                        roots.append(w)
                        nxt.append(w)
        frontier = nxt
    return roots


def _components(cartan) -> List[List[int]]:
    n = len(cartan)
    left = set(range(n))
    out = []
    while left:
        stack = [min(left)]
        comp = []
        while stack:
            i = stack.pop()
            if i not in left:
                continue
            left.discard(i)
            comp.append(i)
            stack += [j for j in range(n) if j in left and cartan[i][j]]
        out.append(sorted(comp))
    return out


def root_system(typ: str) -> RootSystem:
    a = cartan_matrix(typ)
    return RootSystem(typ, a, _positive_roots(a))


def nat_orbit(cartan: Sequence[Sequence[int]], labels: Vec) -> List[Tuple[Vec, int]]:
    """Orbit of a strictly dominant label vector under the Weyl group, with ``det``.

    For a regular weight each orbit point is ``w(lambda)`` for a unique w, and
    its breadth first distance from lambda is the length of w.
    """
    n = len(cartan)
    seen = {labels: 1}
    frontier = [labels]
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(n):
                w = tuple(v[j] - v[i] * cartan[i][j] for j in range(n))
                if w not in seen:
                    seen[w] = -seen[v]
                    nxt.append(w)
        frontier = nxt
    return list(seen.items())


def to_dominant(cartan: Sequence[Sequence[int]], labels: Vec) -> Tuple[Vec, int]:
    """Dominant representative and ``det`` of the element moving it there; det 0 if singular."""
    n = len(cartan)
    v = list(labels)
    sign = 1
    while True:
        i = next((i for i in range(n) if v[i] < 0), None)
        if i is None:
            break
        c = v[i]
        v = [v[j] - c * cartan[i][j] for j in range(n)]
        sign = -sign
    if any(x == 0 for x in v):
        return tuple(v), 0
    return tuple(v), sign
