"""
Module: betti_formula
Component: Betti growth formulas
Purpose: Closed forms for n -> β_j(config(n, w)) as integer combinations of
C(n, a)·b^(n-a), obtained from skyline shapes and labeled convolution.

Description:
Every critical cell of cell(n, w) is a concatenation of tadpoles (runs of
free wheels closed by one filter) followed by a tail (free wheels only).
Removing the free singleton blocks of a critical cell leaves its skyline;
there are finitely many skylines per (j, w), and each one spawns a family of
cells whose size is counted by a single formula. Families of concatenations
multiply under labeled convolution, which keeps the C(n, a)·b^(n-a) basis
closed.

How it works:
1) Shapes
   - A tadpole shape is (leader size, follower multiset, free multiset). Its
     labeled count on i labels is i! / (leader · Π sizes · Π multiplicities!)
     divided by the number of same-size wheels competing to be the least.
   - For a singleton leader the count is a polynomial in i; it is rebased to
     C(i, a) by forward differences plus one indicator correction.
   - Tail shapes count W·C(n, K) for their K non-singleton disks.
2) Aggregation
   - D_d sums the tadpoles of degree d, T_d the tails of degree d;
     S_0 = δ, S_m = Σ D_d * S_(m-d) and β_j = Σ S_(j-d) * T_d.
3) Barcode tables
   - The same shape counts, without fixing w, give the (degree, birth, death)
     tables that the counting mode of the barcode consumes.

Initial State:
- The formula sidecar may hold previously computed formulas

Final State:
- Newly computed formulas are stored in the sidecar

Exceptions handled:
- InvalidInputError: w < 2, negative j, invalid skylines

Version: 0.1.0
Date: 2026-10-19

----------------------------------------------------------------------
Usage example:

from strip_homology.betti_formula import betti_growth_formula

formula = betti_growth_formula(1, 2)
print(formula.render())
print(formula.evaluate(12))     # 114687
----------------------------------------------------------------------
"""

# ----------- Imports ----------- #
from __future__ import annotations

import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Tuple

import sympy

from strip_homology.basis_cycles import BasisElement, FilterSpec, WheelSpec, iter_basis_elements
from strip_homology.errors import InvalidInputError
from strip_homology.tools.formula_cache import get_formula, store_formula

logger = logging.getLogger(__name__)

Death = Optional[int]  # None stands for infinity
BarKey = Tuple[int, int, Death]


# ----------- Term algebra ----------- #
class GrowthTerm(NamedTuple):
    """coefficient · C(n, a) · b^(n - a); b = 0 is the indicator of n = a."""

    coefficient: int
    a: int
    b: int

    def evaluate(self, n: int) -> int:
        if n < self.a:
            return 0
        return self.coefficient * math.comb(n, self.a) * self.b ** (n - self.a)


def labeled_convolution(t1: GrowthTerm, t2: GrowthTerm) -> GrowthTerm:
    """
    Labeled convolution of two terms.

    Returns:
        GrowthTerm: c1·c2·C(a1 + a2, a1) · C(n, a1 + a2) · (b1 + b2)^(n - a1 - a2)
    """
    a = t1.a + t2.a
    return GrowthTerm(t1.coefficient * t2.coefficient * math.comb(a, t1.a), a, t1.b + t2.b)


@dataclass(frozen=True)
class GrowthFormula:
    """Canonical integer combination of growth terms, merged by (a, b) and sorted."""

    terms: Tuple[GrowthTerm, ...] = ()

    @classmethod
    def of(cls, terms: Iterable[GrowthTerm]) -> "GrowthFormula":
        merged: Dict[Tuple[int, int], int] = defaultdict(int)
        for term in terms:
            merged[(term.a, term.b)] += term.coefficient
        return cls(tuple(GrowthTerm(c, a, b) for (a, b), c in sorted(merged.items()) if c))

    @classmethod
    def identity(cls) -> "GrowthFormula":
        return cls((GrowthTerm(1, 0, 0),))

    def __add__(self, other: "GrowthFormula") -> "GrowthFormula":
        return GrowthFormula.of(self.terms + other.terms)

    def __mul__(self, other: "GrowthFormula") -> "GrowthFormula":
        """Labeled convolution, extended bilinearly."""
        return GrowthFormula.of(labeled_convolution(x, y) for x in self.terms for y in other.terms)

    def scale(self, factor: int) -> "GrowthFormula":
        return GrowthFormula.of(GrowthTerm(t.coefficient * factor, t.a, t.b) for t in self.terms)

    def evaluate(self, n: int) -> int:
        """Exact value at n (0^0 = 1)."""
        return sum(term.evaluate(n) for term in self.terms)

    def egf(self, x: Optional[sympy.Symbol] = None) -> sympy.Expr:
        """Exponential generating function Σ c·x^a/a!·e^(bx)."""
        x = x if x is not None else sympy.Symbol("x")
        return sympy.Add(
            *[sympy.Integer(t.coefficient) * x**t.a / sympy.factorial(t.a) * sympy.exp(t.b * x) for t in self.terms]
        )

    def render(self) -> str:
        """Human-readable "c·C(n,a)·b^(n-a)" sum; b = 0 terms print as [n=a]."""
        if not self.terms:
            return "0"
        parts = []
        for term in self.terms:
            sign = "-" if term.coefficient < 0 else "+"
            magnitude = abs(term.coefficient)
            if term.b == 0:
                body = f"[n={term.a}]"
            else:
                body = f"C(n,{term.a})"
                if term.b != 1:
                    body += f"·{term.b}^(n-{term.a})"
            parts.append(f"{sign} {body}" if magnitude == 1 else f"{sign} {magnitude}·{body}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else text

    def to_json(self) -> List[Dict[str, object]]:
        return [{"coefficient": str(t.coefficient), "a": t.a, "b": t.b} for t in self.terms]

    def to_rows(self) -> List[List[str]]:
        return [[str(t.coefficient), str(t.a), str(t.b)] for t in self.terms]

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[str]]) -> "GrowthFormula":
        return cls.of(GrowthTerm(*(int(value) for value in row)) for row in rows)


# ----------- Label counting helpers ----------- #
def multisets(total: int, low: int, high: int) -> Iterator[Tuple[int, ...]]:
    """Nonincreasing tuples of parts in [low, high] summing to total."""
    if total == 0:
        yield ()
        return
    for first in range(min(high, total), low - 1, -1):
        for rest in multisets(total - first, low, first):
            yield (first,) + rest


def _multiplicity_product(parts: Tuple[int, ...]) -> int:
    return math.prod(math.factorial(m) for m in Counter(parts).values())


def wheel_arrangements(parts: Tuple[int, ...]) -> int:
    """Ways to arrange sum(parts) labels as an unordered set of wheels with these sizes."""
    return math.factorial(sum(parts)) // (math.prod(parts) * _multiplicity_product(parts))


def _tadpole_count(leader: int, followers: Tuple[int, ...], free: Tuple[int, ...]) -> int:
    size = leader + sum(followers) + sum(free)
    competitors = 1 + free.count(leader) + followers.count(leader)
    count = Fraction(
        math.factorial(size),
        leader * math.prod(followers) * math.prod(free) * _multiplicity_product(followers) * _multiplicity_product(free),
    ) / competitors
    if count.denominator != 1:
        raise ArithmeticError(f"Non-integral tadpole count for {(leader, followers, free)}")
    return int(count)


@lru_cache(maxsize=None)
def tadpole_table(size: int) -> Dict[BarKey, int]:
    """
    Labeled tadpoles on `size` labels, bucketed by (degree, birth, death).

    Only tadpoles with birth < death are kept.
    """
    table: Dict[BarKey, int] = defaultdict(int)
    for leader in range(1, size):
        for follower_total in range(leader, size - leader + 1):
            free_total = size - leader - follower_total
            total = leader + follower_total
            for followers in multisets(follower_total, leader, follower_total):
                for free in multisets(free_total, leader, max(free_total, leader)):
                    birth = max(max(free, default=0), follower_total)
                    if birth >= total:
                        continue
                    degree = sum(s - 1 for s in free) + total - 2
                    table[(degree, birth, total)] += _tadpole_count(leader, followers, free)
    return dict(table)


@lru_cache(maxsize=None)
def tail_table(size: int) -> Dict[BarKey, int]:
    """Labeled tails (free wheels only) on `size` labels, bucketed by (degree, birth, None)."""
    table: Dict[BarKey, int] = defaultdict(int)
    for parts in multisets(size, 1, max(size, 1)):
        table[(size - len(parts), max(parts, default=0), None)] += wheel_arrangements(parts)
    return dict(table)


# ----------- Polynomial rebasing ----------- #
def generalized_binomial(x: int, k: int) -> int:
    """C(x, k) for any integer x and k >= 0."""
    if k < 0:
        return 0
    return math.prod(x - t for t in range(k)) // math.factorial(k)


def newton_terms(values: List[int]) -> List[GrowthTerm]:
    """Rebases a polynomial given by p(0..d) into Σ Δ^a p(0)·C(n, a)."""
    terms = []
    row = list(values)
    a = 0
    while row:
        if row[0]:
            terms.append(GrowthTerm(row[0], a, 1))
        row = [y - x for x, y in zip(row, row[1:])]
        a += 1
    return terms


# ----------- Shapes ----------- #
@dataclass(frozen=True)
class TadpoleShape:
    leader: int
    followers: Tuple[int, ...]
    free: Tuple[int, ...]

    @property
    def total(self) -> int:
        return self.leader + sum(self.followers)

    @property
    def degree(self) -> int:
        return sum(s - 1 for s in self.free) + self.total - 2

    def formula(self) -> GrowthFormula:
        """Count of labeled tadpoles of this shape as a function of the label count."""
        if self.leader >= 2:
            size = self.total + sum(self.free)
            return GrowthFormula.of([GrowthTerm(_tadpole_count(self.leader, self.followers, self.free), size, 0)])
        big = tuple(s for s in self.free if s >= 2) + tuple(s for s in self.followers if s >= 2)
        big_free = tuple(s for s in self.free if s >= 2)
        big_followers = tuple(s for s in self.followers if s >= 2)
        singles = self.followers.count(1)
        k = sum(big)
        weight = math.factorial(k) // (
            math.prod(big) * _multiplicity_product(big_free) * _multiplicity_product(big_followers)
        )
        degree = k + singles
        values = [weight * math.comb(i, k) * generalized_binomial(i - k - 1, singles) for i in range(degree + 1)]
        correction = GrowthTerm(-weight * (-1) ** singles, k, 0)
        return GrowthFormula.of(newton_terms(values) + [correction])


@dataclass(frozen=True)
class TailShape:
    parts: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(s - 1 for s in self.parts)

    def formula(self) -> GrowthFormula:
        return GrowthFormula.of([GrowthTerm(wheel_arrangements(self.parts), sum(self.parts), 1)])


def tadpole_shapes(degree: int, w: int) -> Iterator[TadpoleShape]:
    """Tadpole shapes of one degree alive at w; singleton leaders carry no free singletons."""
    for leader in range(1, w + 1):
        free_low = 2 if leader == 1 else leader
        for follower_total in range(max(leader, w + 1 - leader), w + 1):
            total = leader + follower_total
            free_degree = degree - (total - 2)
            if free_degree < 0:
                continue
            for followers in multisets(follower_total, leader, w):
                for free_total in range(free_degree, 2 * free_degree + 1):
                    for free in multisets(free_total, free_low, w):
                        if sum(s - 1 for s in free) == free_degree:
                            yield TadpoleShape(leader, followers, free)


def tail_shapes(degree: int, w: int) -> Iterator[TailShape]:
    for total in range(degree, 2 * degree + 1):
        for parts in multisets(total, 2, w):
            if sum(s - 1 for s in parts) == degree:
                yield TailShape(parts)


# ----------- Skylines ----------- #
@dataclass(frozen=True)
class Skyline:
    """A critical cell whose only singleton blocks lead filters; None is the empty skyline."""

    element: Optional[BasisElement]

    @property
    def n(self) -> int:
        return 0 if self.element is None else self.element.n

    @property
    def degree(self) -> int:
        return 0 if self.element is None else self.element.degree

    def split(self) -> Tuple[List[Tuple], Tuple]:
        """Cuts after every filter: (tadpole factor runs, tail factors)."""
        if self.element is None:
            return [], ()
        tadpoles: List[Tuple] = []
        current: List = []
        for factor in self.element.factors:
            current.append(factor)
            if isinstance(factor, FilterSpec):
                tadpoles.append(tuple(current))
                current = []
        return tadpoles, tuple(current)

    @property
    def is_tadpole(self) -> bool:
        tadpoles, tail = self.split()
        return len(tadpoles) == 1 and not tail

    @property
    def is_tail(self) -> bool:
        return self.element is None or not self.element.filters

    def __str__(self) -> str:
        return "∅" if self.element is None else str(self.element)


def skylines(j: int, w: int) -> List[Skyline]:
    """
    Every skyline of degree j alive at w, labels 1..n'.

    Raises:
        InvalidInputError: If j < 0 or w < 2
    """
    _check(j, w)
    if j == 0:
        return [Skyline(None)]
    out = []
    for size in range(2, 3 * j + 1):
        for element in iter_basis_elements(size, w, j):
            if any(isinstance(factor, WheelSpec) and factor.size == 1 for factor in element.factors):
                continue
            out.append(Skyline(element))
    return out


def tadpole_count(s: Skyline) -> GrowthFormula:
    """
    Counts the cells obtained from a tadpole skyline by inserting free singletons.

    A singleton leader with rank r among the k skyline labels allows C(n - r, k - r)
    insertions; a wheel leader allows none, giving the indicator of n = k.

    Raises:
        InvalidInputError: If s is not a tadpole
    """
    if s.element is None or not s.is_tadpole:
        raise InvalidInputError(f"{s} is not a tadpole skyline")
    k = s.n
    leader = s.element.filters[0].leader
    if leader.size >= 2:
        return GrowthFormula.of([GrowthTerm(1, k, 0)])
    r = sorted(s.element.labels).index(leader.axle) + 1
    values = [generalized_binomial(n - r, k - r) for n in range(k - r + 1)]
    corrections = [GrowthTerm(-generalized_binomial(m - r, k - r), m, 0) for m in range(k) if generalized_binomial(m - r, k - r)]
    return GrowthFormula.of(newton_terms(values) + corrections)


def tail_count(s: Skyline) -> GrowthFormula:
    """Counts the cells obtained from a tail skyline with k disks: C(n, k)."""
    if not s.is_tail:
        raise InvalidInputError(f"{s} is not a tail skyline")
    return GrowthFormula.of([GrowthTerm(1, s.n, 1)])


# ----------- Aggregation ----------- #
def _check(j: int, w: int) -> None:
    if j < 0:
        raise InvalidInputError(f"Degree must be nonnegative, got {j}")
    if w < 2:
        raise InvalidInputError(f"Growth formulas need w >= 2, got {w}")


def _aggregate(tadpoles: Dict[int, GrowthFormula], tails: Dict[int, GrowthFormula], j: int) -> GrowthFormula:
    sequences = [GrowthFormula.identity()]
    for m in range(1, j + 1):
        total = GrowthFormula()
        for d in range(1, m + 1):
            total = total + tadpoles.get(d, GrowthFormula()) * sequences[m - d]
        sequences.append(total)
    result = GrowthFormula()
    for d in range(j + 1):
        result = result + sequences[j - d] * tails.get(d, GrowthFormula())
    return result


def _sum_formulas(formulas: Iterable[GrowthFormula]) -> GrowthFormula:
    total = GrowthFormula()
    for formula in formulas:
        total = total + formula
    return total


def betti_growth_formula(j: int, w: int, use_cache: bool = True) -> GrowthFormula:
    """
    Closed form of n -> β_j(config(n, w)).

    Parameters:
        j (int): homological degree, >= 0
        w (int): strip width, >= 2
        use_cache (bool): read and write the formula sidecar

    Returns:
        GrowthFormula: exact for every n >= 0

    Raises:
        InvalidInputError: If j < 0 or w < 2
    """
    _check(j, w)
    if use_cache:
        cached = get_formula(j, w)
        if cached is not None:
            logger.debug("Formula cache hit for j=%d w=%d", j, w)
            return GrowthFormula.from_rows(cached)
    tadpoles = {d: _sum_formulas(shape.formula() for shape in tadpole_shapes(d, w)) for d in range(1, j + 1)}
    tails = {d: _sum_formulas(shape.formula() for shape in tail_shapes(d, w)) for d in range(j + 1)}
    formula = _aggregate(tadpoles, tails, j)
    logger.info("Betti growth formula j=%d w=%d has %d terms", j, w, len(formula.terms))
    if use_cache:
        store_formula(j, w, formula.to_rows())
    return formula


def betti_growth_formula_from_skylines(j: int, w: int) -> GrowthFormula:
    """Same formula assembled from labeled skylines; an independent cross-check for small j."""
    _check(j, w)
    tadpoles: Dict[int, GrowthFormula] = {}
    tails: Dict[int, GrowthFormula] = {}
    for d in range(j + 1):
        for sky in skylines(d, w):
            if sky.is_tail:
                tails[d] = tails.get(d, GrowthFormula()) + tail_count(sky)
            elif sky.is_tadpole:
                tadpoles[d] = tadpoles.get(d, GrowthFormula()) + tadpole_count(sky)
    return _aggregate(tadpoles, tails, j)


class DominantTerm(NamedTuple):
    degree: int
    base: int


def dominant_term(f: GrowthFormula, j: int, w: int) -> DominantTerm:
    """
    Leading growth n^a·b^n of a formula: the largest base among nonzero terms,
    then the largest a with that base. Below j = w - 1 the growth is
    polynomial and the base reported is whatever the formula carries (1).
    """
    _check(j, w)
    live = [t for t in f.terms if t.b > 0]
    if not live:
        return DominantTerm(0, 0)
    base = max(t.b for t in live)
    degree = max(t.a for t in live if t.b == base)
    return DominantTerm(degree, base)


def expected_dominant(j: int, w: int) -> DominantTerm:
    """n^(qw + 2r)·(q + 1)^n where j = q(w - 1) + r."""
    _check(j, w)
    q, r = divmod(j, w - 1)
    return DominantTerm(q * w + 2 * r, q + 1)
