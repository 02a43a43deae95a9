"""
Module: basis_cycles
Component: Explicit homology bases
Purpose: Build cycle representatives for every critical cell, both for the
weighted permutohedral complexes P(n, W, k) and for cell(n, w), and verify
that they form a basis.

Description:
A basis element of H_*(cell(n, w)) is a left-to-right concatenation of
factors. A factor is either a free wheel (a unicycle that is not a follower)
or a filter (r >= 2 wheels in ascending axle order that together hold more
than w disks, each wheel holding at least total - w of them).

How it works:
1) Wheel chains
   - wheel_chain(x1 ... xk) is built by spin doubling: starting from (x1),
     each new label x turns c into c.x + (-1)^(m+1) x.c where m is the
     current length. The result is a (k-1)-cycle on 2^(k-1) one-block words.
2) Lifts and filters
   - lift_block concatenates the wheel chains of several wheels inside one
     block, ascending by axle. A filter chain is the boundary of that lift;
     only the faces sending every wheel entirely to one side survive, each
     with sign (-1)^(sum of sizes on the left) times the segment-permutation
     sign.
3) Weighted cycles
   - z(e) multiplies 0-cells for non-follower singletons with the boundary
     of the merged top cell of each leader-follower pair.
4) Verification
   - Every cycle must vanish under the boundary and have its critical cell as
     greatest supported cell with coefficient +-1, which makes the change of
     basis triangular and unimodular.

Philosophy:
- Elements are small immutable values; chains are materialized only on demand.

Exceptions handled:
- InvalidInputError: invalid wheels, filters or elements (the message names
  the violated condition), non-critical weighted cells
- SizeLimitError: exhaustive verification above n = 6

Version: 0.1.0
Date: 2026-10-19

----------------------------------------------------------------------
Usage example:

from strip_homology.basis_cycles import WheelSpec, wheel_chain

print(wheel_chain(WheelSpec((2, 1))))      # (1 2) + (2 1)
----------------------------------------------------------------------
"""

# ----------- Imports ----------- #
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache, reduce
from multiprocessing import get_context
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, Field
from tqdm import tqdm

from strip_homology.core_symbols import (
    PCell,
    SignedChain,
    Symbol,
    boundary,
    concat,
    split_into_wheels,
    strip_cell_key,
    weighted_cell_key,
)
from strip_homology.errors import InvalidInputError, SizeLimitError

logger = logging.getLogger(__name__)

INFINITY = None  # death of a bar that never dies
EXHAUSTIVE_LIMIT = 6


# ----------- Domain types ----------- #
@dataclass(frozen=True)
class WheelSpec:
    """A wheel: labels with the largest (the axle) first."""

    labels: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.labels:
            raise InvalidInputError("A wheel needs at least one label")
        if len(set(self.labels)) != len(self.labels):
            raise InvalidInputError(f"Repeated label in wheel {self.labels}")
        if self.labels[0] != max(self.labels):
            raise InvalidInputError(f"(i) wheel {self.labels} must start with its largest label")

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def axle(self) -> int:
        return self.labels[0]

    @property
    def rank(self) -> Tuple[int, int]:
        """Wheels rank by number of labels, then by axle."""
        return (len(self.labels), self.labels[0])

    def __str__(self) -> str:
        return " ".join(str(label) for label in self.labels)


@dataclass(frozen=True)
class FilterSpec:
    """r >= 2 wheels in ascending axle order."""

    wheels: Tuple[WheelSpec, ...]

    def __post_init__(self) -> None:
        if len(self.wheels) < 2:
            raise InvalidInputError(f"(ii) a filter needs at least two wheels, got {len(self.wheels)}")
        axles = [wheel.axle for wheel in self.wheels]
        if axles != sorted(axles):
            raise InvalidInputError(f"(ii) filter wheels must ascend by axle, got axles {axles}")
        labels = [label for wheel in self.wheels for label in wheel.labels]
        if len(set(labels)) != len(labels):
            raise InvalidInputError("Filter wheels overlap")

    @property
    def r(self) -> int:
        return len(self.wheels)

    @property
    def total(self) -> int:
        return sum(wheel.size for wheel in self.wheels)

    @property
    def leader(self) -> WheelSpec:
        return min(self.wheels, key=lambda wheel: wheel.rank)

    @property
    def birth(self) -> int:
        """Least width at which every wheel holds at least total - w disks."""
        return max(self.total - self.leader.size, max(wheel.size for wheel in self.wheels))

    @property
    def death(self) -> int:
        return self.total

    def valid_at(self, w: int) -> bool:
        return self.total >= w + 1 and all(wheel.size >= self.total - w for wheel in self.wheels) and all(
            wheel.size <= w for wheel in self.wheels
        )

    def __str__(self) -> str:
        return "[" + ", ".join(str(wheel) for wheel in self.wheels) + "]"


Factor = Union[WheelSpec, FilterSpec]


@dataclass(frozen=True)
class BasisElement:
    """Concatenation of free wheels and filters."""

    factors: Tuple[Factor, ...]

    def __post_init__(self) -> None:
        if not self.factors:
            raise InvalidInputError("A basis element needs at least one factor")
        labels = [label for factor in self.factors for label in _factor_labels(factor)]
        if len(set(labels)) != len(labels):
            raise InvalidInputError("Basis element factors overlap")

    @property
    def labels(self) -> frozenset:
        return frozenset(label for factor in self.factors for label in _factor_labels(factor))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def wheels(self) -> List[WheelSpec]:
        out: List[WheelSpec] = []
        for factor in self.factors:
            out.extend(factor.wheels if isinstance(factor, FilterSpec) else (factor,))
        return out

    @property
    def filters(self) -> List[FilterSpec]:
        return [factor for factor in self.factors if isinstance(factor, FilterSpec)]

    @property
    def degree(self) -> int:
        return sum(_factor_degree(factor) for factor in self.factors)

    @property
    def birth(self) -> int:
        wheels = max(wheel.size for wheel in self.wheels)
        return max([wheels] + [filt.total - filt.leader.size for filt in self.filters])

    @property
    def death(self) -> Optional[int]:
        totals = [filt.total for filt in self.filters]
        return min(totals) if totals else INFINITY

    def alive_at(self, w: int) -> bool:
        return self.birth <= w and (self.death is None or w < self.death)

    def validate(self, w: int) -> None:
        """
        Checks conditions (i) to (iv) at width w.

        Raises:
            InvalidInputError: naming the first violated condition
        """
        for wheel in self.wheels:
            if wheel.size > w:
                raise InvalidInputError(f"(i) wheel {wheel} has more than {w} labels")
        for filt in self.filters:
            if filt.total < w + 1:
                raise InvalidInputError(f"(ii) filter {filt} holds {filt.total} <= {w} disks")
            small = [wheel for wheel in filt.wheels if wheel.size < filt.total - w]
            if small:
                raise InvalidInputError(f"(ii) wheel {small[0]} of filter {filt} has fewer than {filt.total - w} labels")
        for left, right in zip(self.factors, self.factors[1:]):
            if isinstance(left, WheelSpec) and isinstance(right, WheelSpec) and left.rank < right.rank:
                raise InvalidInputError(f"(iii) free wheels {left} and {right} are not in decreasing rank")
            if isinstance(left, WheelSpec) and isinstance(right, FilterSpec) and left.rank < right.leader.rank:
                raise InvalidInputError(f"(iv) free wheel {left} ranks below the least wheel of filter {right}")

    def to_json(self) -> dict:
        return {
            "factors": [
                {
                    "kind": "filter" if isinstance(factor, FilterSpec) else "wheel",
                    "wheels": [list(wheel.labels) for wheel in (factor.wheels if isinstance(factor, FilterSpec) else (factor,))],
                }
                for factor in self.factors
            ],
            "degree": self.degree,
            "birth": self.birth,
            "death": self.death,
        }

    def __str__(self) -> str:
        return " | ".join(str(factor) for factor in self.factors)


def _factor_labels(factor: Factor) -> Tuple[int, ...]:
    if isinstance(factor, FilterSpec):
        return tuple(label for wheel in factor.wheels for label in wheel.labels)
    return factor.labels


def _factor_degree(factor: Factor) -> int:
    if isinstance(factor, FilterSpec):
        return factor.total - 2
    return factor.size - 1


# ----------- Wheel and filter chains ----------- #
def wheel_chain(spec: WheelSpec) -> SignedChain:
    """
    Fundamental cycle of one wheel.

    Parameters:
        spec (WheelSpec): wheel x1 x2 ... xk

    Returns:
        SignedChain: (k-1)-cycle on 2^(k-1) one-block words; the wheel's own
        word has coefficient +1

    Cost:
        - 2^(k-1) terms
    """
    words = {(spec.labels[0],): 1}
    for x in spec.labels[1:]:
        length = len(next(iter(words)))
        flip = 1 if length % 2 else -1
        grown = {}
        for word, coeff in words.items():
            grown[word + (x,)] = grown.get(word + (x,), 0) + coeff
            grown[(x,) + word] = grown.get((x,) + word, 0) + flip * coeff
        words = grown
    breaks = (len(spec.labels),)
    return SignedChain._of({Symbol._raw(word, breaks): coeff for word, coeff in words.items()}, spec.size - 1)


@lru_cache(maxsize=4096)
def _wheel_words(spec: WheelSpec) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    return tuple((symbol.word, coeff) for symbol, coeff in wheel_chain(spec).terms.items())


def _lift_words(wheels: Sequence[WheelSpec]) -> List[Tuple[Tuple[int, ...], int]]:
    ordered = sorted(wheels, key=lambda wheel: wheel.axle)
    products: List[Tuple[Tuple[int, ...], int]] = [((), 1)]
    for wheel in ordered:
        products = [(word + part, coeff * sign) for word, coeff in products for part, sign in _wheel_words(wheel)]
    return products


def lift_block(wheels: Sequence[WheelSpec]) -> SignedChain:
    """
    Places several wheels in one block, ascending by axle.

    Returns:
        SignedChain: one-block chain whose terms concatenate one spin word per
        wheel, with the product of the spin coefficients; a single wheel gives
        its wheel chain and singletons give the ascending word with +1
    """
    if not wheels:
        raise InvalidInputError("lift_block needs at least one wheel")
    total = sum(wheel.size for wheel in wheels)
    labels = [label for wheel in wheels for label in wheel.labels]
    if len(set(labels)) != len(labels):
        raise InvalidInputError("Lifted wheels overlap")
    breaks = (total,)
    return SignedChain._of({Symbol._raw(word, breaks): coeff for word, coeff in _lift_words(wheels)}, total - 1)


def filter_chain(f: FilterSpec, w: Optional[int] = None) -> SignedChain:
    """
    Cycle of a filter: the boundary of the lift of its merged block.

    Parameters:
        f (FilterSpec): the filter
        w (Optional[int]): width; when given the filter must be valid there

    Returns:
        SignedChain: (total - 2)-cycle, a sum over ordered splittings (A, B) of
        the wheels of eps(A, B) lift(A) | lift(B)

    Raises:
        InvalidInputError: If the filter is invalid at w
    """
    if w is not None and not f.valid_at(w):
        raise InvalidInputError(f"(ii) filter {f} is not valid at width {w}")
    wheels = f.wheels
    terms = {}
    indices = range(len(wheels))
    for size in range(1, len(wheels)):
        for chosen in itertools.combinations(indices, size):
            left = set(chosen)
            sign_exponent = sum(wheels[i].size for i in chosen)
            sign_exponent += sum(wheels[i].size * wheels[j].size for i in chosen for j in indices if j not in left and j < i)
            sign = -1 if sign_exponent % 2 else 1
            a_words = _lift_words([wheels[i] for i in chosen])
            b_words = _lift_words([wheels[j] for j in indices if j not in left])
            a_len = sum(wheels[i].size for i in chosen)
            breaks = (a_len, f.total)
            for a_word, a_coeff in a_words:
                for b_word, b_coeff in b_words:
                    terms[Symbol._raw(a_word + b_word, breaks)] = sign * a_coeff * b_coeff
    return SignedChain._of(terms, f.total - 2)


def basic_cycle(b: BasisElement, w: int) -> SignedChain:
    """
    Concatenates the wheel and filter cycles of a basis element.

    Raises:
        InvalidInputError: naming the violated condition if b is invalid at w
    """
    b.validate(w)
    chains = [filter_chain(factor) if isinstance(factor, FilterSpec) else wheel_chain(factor) for factor in b.factors]
    return reduce(concat, chains)


def critical_symbol(b: BasisElement) -> Symbol:
    """
    The critical cell a basis element stands for: a free wheel is its own
    block; a filter is its least wheel followed by one block holding the other
    wheels in ascending axle order.
    """
    blocks: List[Tuple[int, ...]] = []
    for factor in b.factors:
        if isinstance(factor, WheelSpec):
            blocks.append(factor.labels)
        else:
            leader = factor.leader
            blocks.append(leader.labels)
            blocks.append(tuple(label for wheel in factor.wheels if wheel != leader for label in wheel.labels))
    return Symbol._from_blocks_unchecked(blocks)


def basis_element_of(symbol: Symbol, w: int) -> BasisElement:
    """
    Inverse of critical_symbol on critical cells of cell(n, w).

    Raises:
        InvalidInputError: If the symbol is not a critical cell at width w
    """
    factors: List[Factor] = []
    leader: Optional[WheelSpec] = None
    for block in symbol.blocks:
        wheels = [WheelSpec(wheel) for wheel in split_into_wheels(block)]
        if leader is not None and all(wheel.rank > leader.rank for wheel in wheels):
            factors[-1] = FilterSpec(tuple(sorted([leader] + wheels, key=lambda wheel: wheel.axle)))
            leader = None
            continue
        if len(wheels) != 1:
            raise InvalidInputError(f"{symbol} is not critical: block {block} is neither a unicycle nor a follower")
        factors.append(wheels[0])
        leader = wheels[0]
    element = BasisElement(tuple(factors))
    element.validate(w)
    return element


# ----------- Enumeration ----------- #
def _free_wheels(remaining: Tuple[int, ...], w: Optional[int]) -> Iterator[WheelSpec]:
    limit = len(remaining) if w is None else min(w, len(remaining))
    for size in range(1, limit + 1):
        for chosen in itertools.combinations(remaining, size):
            axle = chosen[-1]
            for tail in itertools.permutations(chosen[:-1]):
                yield WheelSpec((axle,) + tail)


def _filters(remaining: Tuple[int, ...], w: Optional[int]) -> Iterator[FilterSpec]:
    low = 2 if w is None else max(2, w + 1)
    high = len(remaining) if w is None else min(len(remaining), 2 * w)
    for size in range(low, high + 1):
        for chosen in itertools.combinations(remaining, size):
            for word in itertools.permutations(chosen):
                wheels = split_into_wheels(word)
                if len(wheels) < 2:
                    continue
                filt = FilterSpec(tuple(WheelSpec(wheel) for wheel in wheels))
                if w is None or filt.valid_at(w):
                    yield filt


def _items(remaining: Tuple[int, ...], w: Optional[int]) -> Iterator[Factor]:
    yield from _free_wheels(remaining, w)
    yield from _filters(remaining, w)


def _extend(
    remaining: Tuple[int, ...], previous: Optional[WheelSpec], w: Optional[int]
) -> Iterator[Tuple[Factor, ...]]:
    if not remaining:
        yield ()
        return
    for item in _items(remaining, w):
        if previous is not None:
            pivot = item if isinstance(item, WheelSpec) else item.leader
            if previous.rank < pivot.rank:
                continue
        used = set(_factor_labels(item))
        rest = tuple(label for label in remaining if label not in used)
        state = item if isinstance(item, WheelSpec) else None
        for tail in _extend(rest, state, w):
            yield (item,) + tail


def first_factors(n: int, w: Optional[int] = None) -> List[Factor]:
    """Shard keys for parallel enumeration: every possible first factor."""
    return list(_items(tuple(range(1, n + 1)), w))


def iter_basis_elements(
    n: int, w: Optional[int] = None, degree: Optional[int] = None, first: Optional[Factor] = None
) -> Iterator[BasisElement]:
    """
    Streams basis elements on labels 1..n.

    Parameters:
        n (int): number of labels
        w (Optional[int]): keep elements alive at w; None keeps every element
            with birth < death (the whole barcode)
        degree (Optional[int]): keep one homological degree
        first (Optional[Factor]): restrict to one leading factor (a shard)

    Returns:
        Iterator[BasisElement]: deterministic order
    """
    labels = tuple(range(1, n + 1))
    heads = [first] if first is not None else list(_items(labels, w))
    for head in heads:
        used = set(_factor_labels(head))
        rest = tuple(label for label in labels if label not in used)
        state = head if isinstance(head, WheelSpec) else None
        for tail in _extend(rest, state, w):
            element = BasisElement((head,) + tail)
            if degree is not None and element.degree != degree:
                continue
            death = element.death
            if w is None:
                if death is not None and element.birth >= death:
                    continue
            elif not element.alive_at(w):
                continue
            yield element


def basis_elements(n: int, w: int, degree: Optional[int] = None) -> List[BasisElement]:
    """All basis elements of H_*(cell(n, w)), optionally in one degree."""
    return list(iter_basis_elements(n, w, degree))


# ----------- Weighted cycles ----------- #
def weighted_factors(e: PCell, k: int) -> List[Tuple[int, ...]]:
    """
    Splits a critical cell of P(n, W, k) into its factors.

    Returns:
        List[Tuple[int, ...]]: a 1-tuple per non-follower singleton and the
        merged sorted labels of every leader-follower pair, left to right

    Raises:
        InvalidInputError: If e is not critical
    """
    weights = e.weights
    if list(weights) != sorted(weights):
        raise InvalidInputError(f"Weights must be nondecreasing, got {weights}")
    factors: List[Tuple[int, ...]] = []
    leader: Optional[int] = None
    for index, block in enumerate(e.blocks):
        weight = e.block_weight(index)
        if weight > k:
            raise InvalidInputError(f"Block {block} of {e} is heavier than {k}")
        if leader is not None and leader < block[0]:
            if weights[leader - 1] + weight < k + 1:
                raise InvalidInputError(f"{e} is not critical: follower {block} and its leader weigh at most {k}")
            factors[-1] = tuple(sorted((leader,) + block))
            leader = None
            continue
        if len(block) != 1:
            raise InvalidInputError(f"{e} is not critical: block {block} is neither a singleton nor a follower")
        factors.append(block)
        leader = block[0]
    return factors


def z_weighted(e: PCell, k: int) -> SignedChain:
    """
    Basis cycle of a critical cell of P(n, W, k).

    Parameters:
        e (PCell): critical cell with nondecreasing weights
        k (int): weight threshold

    Returns:
        SignedChain: product of 0-cells and boundaries of merged pair blocks,
        on sorted-representative symbols; e is its greatest cell, coefficient +-1

    Raises:
        InvalidInputError: If e is not critical
    """
    chains = []
    for factor in weighted_factors(e, k):
        cell = Symbol._raw(factor, (len(factor),))
        chains.append(SignedChain.cell(cell) if len(factor) == 1 else boundary(cell))
    return reduce(concat, chains)


# ----------- Verification ----------- #
class BasisReport(BaseModel):
    """Outcome of an exhaustive basis verification."""

    n: int
    w_or_k: int
    degree: Optional[int] = None
    elements: int = 0
    failures: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def check_max_cell(chain: SignedChain, critical: Symbol, key) -> Optional[str]:
    """Returns None when `critical` is the greatest supported cell with coefficient +-1."""
    if not chain.boundary().is_zero():
        return "not a cycle"
    if chain.is_zero():
        return "zero chain"
    top = max(chain.support, key=key)
    if top != critical:
        return f"greatest cell is {top}, expected {critical}"
    if abs(chain.coefficient(top)) != 1:
        return f"greatest cell {top} has coefficient {chain.coefficient(top)}"
    return None


def _verify_element(job: Tuple[BasisElement, int]) -> Tuple[str, Optional[str]]:
    element, w = job
    return str(element), check_max_cell(basic_cycle(element, w), critical_symbol(element), strip_cell_key)


def verify_basis(n: int, w: int, dim: Optional[int] = None, workers: int = 1, progress: bool = False) -> BasisReport:
    """
    Exhaustively verifies the basis of H_*(cell(n, w)).

    Each basic cycle must be a cycle whose greatest cell is its critical cell
    with coefficient +-1, and no two elements may share a critical cell.

    Raises:
        SizeLimitError: If n exceeds the exhaustive regime
    """
    if n > EXHAUSTIVE_LIMIT:
        raise SizeLimitError(f"verify_basis is exhaustive and refuses n={n} > {EXHAUSTIVE_LIMIT}")
    elements = basis_elements(n, w, dim)
    report = BasisReport(n=n, w_or_k=w, degree=dim, elements=len(elements))
    jobs = [(element, w) for element in elements]
    if workers > 1 and len(jobs) > 1:
        with get_context("spawn").Pool(workers) as pool:
            outcomes = list(tqdm(pool.imap(_verify_element, jobs, chunksize=8), total=len(jobs), disable=not progress))
    else:
        outcomes = [_verify_element(job) for job in tqdm(jobs, disable=not progress)]
    for label, failure in outcomes:
        if failure:
            report.failures.append(f"{label}: {failure}")
    seen = {}
    for element in elements:
        cell = critical_symbol(element)
        if cell in seen:
            report.failures.append(f"{element} and {seen[cell]} share critical cell {cell}")
        seen[cell] = element
    logger.info("verify_basis n=%d w=%d: %d elements, %d failures", n, w, len(elements), len(report.failures))
    return report


def verify_weighted_basis(critical: Sequence[PCell], k: int) -> BasisReport:
    """Checks z(e) for a list of critical cells of one P(n, W, k)."""
    n = critical[0].to_symbol().n if critical else 0
    report = BasisReport(n=n, w_or_k=k, elements=len(critical))
    key = lambda symbol: weighted_cell_key(symbol.blocks)
    for cell in critical:
        failure = check_max_cell(z_weighted(cell, k), cell.to_symbol(), key)
        if failure:
            report.failures.append(f"{cell}: {failure}")
    return report
