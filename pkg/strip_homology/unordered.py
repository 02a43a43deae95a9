"""
Module: unordered
Component: Unordered strip complexes
Purpose: Homology of ucel(n, w) over F_p and over the rationals from the
leader-follower description of its critical cells.

Description:
A cell of ucel(n, w) is a composition of n. In characteristic p two
consecutive blocks form a leader-follower pair when they look like
∘^1|∘^(2k') or ∘^(2p^k)|∘^(2p^k(a-1)) with p not dividing a; for p = 0 the
second family only allows k = 0. Pairs are assigned disjointly from left to
right. A cell is critical when every pair has more than w disks and every
block outside a pair is ∘^1 or ∘^(2p^k), or is blocked: its least unit face
would start with a block that pairs with the free block before it.

How it works:
1) Classification
   - CharPPairRule decides pair shapes and the "power blocks" ∘^1, ∘^(2p^k).
   - assign_roles performs the greedy left-to-right pairing.
2) Enumeration and counting
   - A critical cell is a sequence of items, each a free power block, a
     pair or a blocked block; a free block may not be followed by a block
     it would pair with.
   - Counting runs a memoized recursion on (disks left, previous free block)
     so n = 20 is instant.
3) Growth
   - Skylines are critical cells without free singletons; singletons are
     re-inserted at the right end and before each ∘^1|∘^w pair, which
     predicts every Betti number as a sum of binomials.

Exceptions handled:
- InvalidInputError: n < 2 for least_unit_face, bad characteristic

Version: 0.1.0
Date: 2026-10-19

----------------------------------------------------------------------
Usage example:

from strip_homology.unordered import betti_unordered, least_unit_face

print(betti_unordered(3, 2, 2))    # {0: 1, 1: 2, 2: 0}
print(least_unit_face(12, 3))      # (6, 6)
----------------------------------------------------------------------
"""

# ----------- Imports ----------- #
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from strip_homology import config
from strip_homology.complexes import UCell, unordered_complex, faces, unordered_face_coefficient
from strip_homology.errors import InvalidInputError

logger = logging.getLogger(__name__)

Composition = Tuple[int, ...]

LEADER = "leader"
FOLLOWER = "follower"
FREE = "free"
UP = "up"
DOWN = "down"


# ----------- Pair rule ----------- #
def _p_part(m: int, p: int) -> int:
    """Largest power of p dividing m (1 when p = 0)."""
    if p == 0:
        return 1
    power = 1
    while m % (power * p) == 0:
        power *= p
    return power


def is_power_block(size: int, p: int) -> bool:
    """True for ∘^1 and for ∘^(2p^k); for p = 0 only ∘^1 and ∘^2."""
    if size == 1:
        return True
    if size % 2:
        return False
    half = size // 2
    if p == 0:
        return half == 1
    return _p_part(half, p) == half


class CharPPairRule(BaseModel):
    """Leader-follower pair shapes in characteristic p."""

    model_config = ConfigDict(frozen=True)

    p: int = 0

    def is_pair(self, leader: int, follower: int) -> bool:
        if leader == 1:
            return follower >= 2 and follower % 2 == 0
        if not is_power_block(leader, self.p):
            return False
        if follower < leader or follower % leader:
            return False
        a = follower // leader + 1
        return self.p == 0 or a % self.p != 0

    def power_blocks(self, w: int) -> List[int]:
        """Sizes 1 and 2p^k up to w, ascending."""
        return [size for size in range(1, w + 1) if is_power_block(size, self.p)]


@lru_cache(maxsize=None)
def pair_rule(p: int) -> CharPPairRule:
    return CharPPairRule(p=config.check_characteristic(p))


def assign_roles(composition: Composition, p: int) -> Tuple[str, ...]:
    """Greedy left-to-right pairing: each block is a leader, a follower or free."""
    rule = pair_rule(p)
    roles: List[str] = []
    index = 0
    while index < len(composition):
        if index + 1 < len(composition) and rule.is_pair(composition[index], composition[index + 1]):
            roles.extend((LEADER, FOLLOWER))
            index += 2
        else:
            roles.append(FREE)
            index += 1
    return tuple(roles)


def unordered_cell_key(composition: Composition, p: int) -> Tuple:
    """
    Sort key of the characteristic-p order on ucel cells: at the first
    differing block a follower is below a non-follower, followers ascend by
    size and non-followers descend by size.
    """
    return tuple(
        (0, size) if role == FOLLOWER else (1, -size) for size, role in zip(composition, assign_roles(composition, p))
    )


def is_blocked(previous: Optional[int], size: int, p: int) -> bool:
    """
    True when ∘^size is not a power block, does not follow the free block
    ∘^previous, and its least unit face starts with a block that would.

    A blocked block has no unit face compatible with the pairing on its
    left, so it survives in a critical cell. It needs previous = 2p^k and
    size = 2p^k a with p dividing a + 1, which never occurs for p = 0 or 2.
    """
    if previous is None or size < 2 or is_power_block(size, p):
        return False
    rule = pair_rule(p)
    if rule.is_pair(previous, size):
        return False
    face = least_unit_face(size, p)
    return face is not None and rule.is_pair(previous, face[0])


def unordered_partner(composition: Composition, w: int, p: int) -> Optional[Tuple[str, Composition]]:
    """
    Partner of a ucel(n, w) cell under the pair-rule matching.

    Scans the greedy roles left to right and acts on the first offending
    block: a leader pair of at most w disks is merged ("up"), a free block
    that is neither a power block nor blocked is split into its least unit
    face ("down").

    Returns:
        Optional[Tuple[str, Composition]]: ("up", coface) or ("down", face),
        or None for a critical cell
    """
    roles = assign_roles(composition, p)
    for index, role in enumerate(roles):
        size = composition[index]
        if role == LEADER and size + composition[index + 1] <= w:
            merged = composition[:index] + (size + composition[index + 1],) + composition[index + 2:]
            return UP, merged
        if role == FREE and not is_power_block(size, p):
            previous = composition[index - 1] if index and roles[index - 1] == FREE else None
            if not is_blocked(previous, size, p):
                return DOWN, composition[:index] + least_unit_face(size, p) + composition[index + 1:]
    return None


def is_critical_unordered(composition: Composition, w: int, p: int) -> bool:
    if max(composition) > w:
        return False
    return unordered_partner(composition, w, p) is None


# ----------- Boundary coefficients ----------- #
def ucel_boundary_coefficient(n: int, k: int) -> int:
    """
    Coefficient of ∘^k|∘^(n-k) in the boundary of ∘^n.

    Returns:
        int: 0 if k and n-k are odd; C(n/2, k/2) for n even; C((n-1)/2, k/2)
        for n odd and k even; -C((n-1)/2, (k-1)/2) for n and k odd
    """
    return unordered_face_coefficient(n, k)


def least_unit_face(n: int, p: int) -> Optional[Tuple[int, int]]:
    """
    Lexicographically least face of ∘^n whose coefficient is a unit in characteristic p.

    Parameters:
        n (int): block size, >= 2
        p (int): 0 or a prime

    Returns:
        Optional[Tuple[int, int]]: (1, n-1) for odd n; (2p^k, n-2p^k) for
        n = 2p^k a with p not dividing a and a >= 2; None when n = 2p^k,
        since then ∘^n is a cycle in characteristic p

    Raises:
        InvalidInputError: If n < 2
    """
    config.check_characteristic(p)
    if n < 2:
        raise InvalidInputError(f"∘^{n} has no faces")
    if n % 2:
        return (1, n - 1)
    leader = 2 * _p_part(n // 2, p)
    if leader == n:
        return None
    return (leader, n - leader)


# ----------- Critical cells ----------- #
def _items(remaining: int, previous: Optional[int], w: int, p: int) -> Iterator[Tuple[Composition, Optional[int]]]:
    rule = pair_rule(p)
    for leader in rule.power_blocks(min(w, remaining)):
        if previous is not None and rule.is_pair(previous, leader):
            continue
        yield (leader,), leader
        for follower in range(max(1, w + 1 - leader), min(w, remaining - leader) + 1):
            if rule.is_pair(leader, follower):
                yield (leader, follower), None
    if previous is not None:
        for size in range(2, min(w, remaining) + 1):
            if is_blocked(previous, size, p):
                yield (size,), None


def iter_critical_unordered(n: int, w: int, p: int, previous: Optional[int] = None) -> Iterator[Composition]:
    """Streams the critical compositions of n in ucel(n, w), all dimensions."""
    if n == 0:
        yield ()
        return
    for item, state in _items(n, previous, w, p):
        for rest in iter_critical_unordered(n - sum(item), w, p, state):
            yield item + rest


@lru_cache(maxsize=None)
def _count_by_blocks(remaining: int, previous: Optional[int], w: int, p: int) -> Tuple[int, ...]:
    if remaining == 0:
        return (1,)
    totals: List[int] = []
    for item, state in _items(remaining, previous, w, p):
        rest = _count_by_blocks(remaining - sum(item), state, w, p)
        shift = len(item)
        if len(totals) < len(rest) + shift:
            totals.extend([0] * (len(rest) + shift - len(totals)))
        for blocks, count in enumerate(rest):
            totals[blocks + shift] += count
    return tuple(totals)


def critical_counts_unordered(n: int, w: int, p: int) -> Dict[int, int]:
    """Critical cell counts of ucel(n, w) in characteristic p, by dimension 0..n-1."""
    config.check_characteristic(p)
    if n < 1 or w < 1:
        raise InvalidInputError(f"ucel({n},{w}) is not defined")
    by_blocks = _count_by_blocks(n, None, w, p)
    counts = {dim: 0 for dim in range(n)}
    for blocks, count in enumerate(by_blocks):
        if count:
            counts[n - blocks] += count
    return counts


@dataclass
class UBasisReport:
    """Dimensions of H_*(ucel(n, w); F_p), with optional relation checks."""

    n: int
    w: int
    p: int
    dims: Dict[int, int]
    relations: Dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "w": self.w,
            "p": self.p,
            "dims": [{"degree": degree, "dim": str(dim)} for degree, dim in sorted(self.dims.items())],
            "relations": dict(sorted(self.relations.items())),
        }


def betti_unordered(n: int, w: int, p: int) -> Dict[int, int]:
    """
    Betti numbers of ucel(n, w) over F_p (over the rationals for p = 0).

    Returns:
        Dict[int, int]: degree -> dimension for degrees 0..n-1
    """
    return critical_counts_unordered(n, w, p)


# ----------- Growth ----------- #
def skyline_insertion_count(n: int, skyline_size: int, slots: int) -> int:
    """Ways to insert n - skyline_size singletons into slots + 1 places: C(n - n' + k, k)."""
    extra = n - skyline_size
    if extra < 0:
        return 0
    return math.comb(extra + slots, slots)


def unordered_skylines(j: int, w: int, p: int) -> List[Tuple[Composition, int]]:
    """
    Critical cells of degree j without free singleton blocks.

    Returns:
        List[Tuple[Composition, int]]: each skyline with its number of ∘^1|∘^w pairs
    """
    out = []
    for size in range(0, 3 * j + 1):
        if size == 0:
            if j == 0:
                out.append(((), 0))
            continue
        for composition in iter_critical_unordered(size, w, p):
            if size - len(composition) != j:
                continue
            roles = assign_roles(composition, p)
            if any(block == 1 and role == FREE for block, role in zip(composition, roles)):
                continue
            slots = sum(
                1
                for index, role in enumerate(roles)
                if role == LEADER and composition[index] == 1 and composition[index + 1] == w
            )
            out.append((composition, slots))
    return out


def predicted_betti_unordered(n: int, j: int, w: int, p: int) -> int:
    """Betti number rebuilt from skylines and singleton insertions."""
    return sum(skyline_insertion_count(n, sum(sky), slots) for sky, slots in unordered_skylines(j, w, p))


class GrowthReport(BaseModel):
    j: int
    w: int
    p: int
    q: int
    threshold: int
    values: Dict[int, int]
    predicted_degree: int
    eventually_constant: bool
    polynomial_ok: bool
    prediction_matches: bool
    theta_expected: bool
    passed: bool


def _differences(values: List[int], order: int) -> List[int]:
    for _ in range(order):
        values = [b - a for a, b in zip(values, values[1:])]
    return values


def growth_check_unordered(j: int, w: int, p: int, n_range: range) -> GrowthReport:
    """
    Checks the growth of β_j(ucel(n, w); F_p) over a range of n.

    Past n0 = 3j every critical cell comes from a skyline, so the sequence is
    a polynomial of degree at most q = floor(j / (w - 1)): constant for odd w,
    and of exact degree q when w is even and j >= (w - 1)(w - 3).

    Parameters:
        j (int): homological degree
        w (int): width, >= 2
        p (int): characteristic
        n_range (range): values of n to evaluate

    Returns:
        GrowthReport: the sequence, the skyline prediction and the verdicts
    """
    if w < 2:
        raise InvalidInputError("Growth checks need w >= 2")
    config.check_characteristic(p)
    q = j // (w - 1)
    threshold = 3 * j
    values = {n: (critical_counts_unordered(n, w, p).get(j, 0) if n >= 1 else int(j == 0)) for n in n_range}
    tail = [values[n] for n in n_range if n >= threshold]
    predicted_degree = max((slots for _, slots in unordered_skylines(j, w, p)), default=0)
    eventually_constant = len(set(tail)) <= 1
    polynomial_ok = all(value == 0 for value in _differences(tail, q + 1))
    prediction_matches = all(values[n] == predicted_betti_unordered(n, j, w, p) for n in n_range if n >= 1)
    theta_expected = w % 2 == 0 and j >= (w - 1) * (w - 3)
    passed = polynomial_ok and prediction_matches
    if w % 2:
        passed = passed and eventually_constant
    if theta_expected:
        top = _differences(tail, q)
        passed = passed and predicted_degree == q and (not top or (len(set(top)) == 1 and top[0] > 0))
    logger.info("Growth check j=%d w=%d p=%d: q=%d passed=%s", j, w, p, q, passed)
    return GrowthReport(
        j=j,
        w=w,
        p=p,
        q=q,
        threshold=threshold,
        values=values,
        predicted_degree=predicted_degree,
        eventually_constant=eventually_constant,
        polynomial_ok=polynomial_ok,
        prediction_matches=prediction_matches,
        theta_expected=theta_expected,
        passed=passed,
    )


# ----------- Generators and relations ----------- #
@dataclass(frozen=True)
class UnorderedGenerator:
    kind: str  # "block" or "boundary"
    size: int

    @property
    def degree(self) -> int:
        return self.size - 1 if self.kind == "block" else self.size - 2

    def __str__(self) -> str:
        return f"∘^{self.size}" if self.kind == "block" else f"∂(∘^{self.size})"


def _powers(p: int, limit: int) -> List[int]:
    """2p^k for k >= 0 up to limit (only 2 when p = 0)."""
    if p == 0:
        return [2] if limit >= 2 else []
    out = []
    value = 2
    while value <= limit:
        out.append(value)
        value *= p
    return out


def unordered_generators(w: int, p: int) -> List[UnorderedGenerator]:
    """Algebra generators of H_*(ucel(*, w); F_p) under concatenation."""
    config.check_characteristic(p)
    generators = [UnorderedGenerator("block", 1)]
    generators.extend(UnorderedGenerator("block", size) for size in _powers(p, w))
    if w % 2 == 0:
        generators.append(UnorderedGenerator("boundary", w + 1))
    for power in _powers(p, 2 * w):
        least = ((w + 1 + power - 1) // power) * power
        if least <= 2 * w:
            candidate = UnorderedGenerator("boundary", least)
            if candidate not in generators:
                generators.append(candidate)
    return generators


def _block_boundary_mod_p(size: int, p: int) -> Dict[Composition, int]:
    spec = unordered_complex(size, size, p)
    out = {}
    for face, coeff in faces(spec, UCell((size,))):
        value = coeff % p if p else coeff
        if value:
            out[face.composition] = value
    return out


def check_unordered_relations(w: int, p: int) -> Dict[str, bool]:
    """
    Verifies the generator relations as chain-level identities in characteristic p.

    Returns:
        Dict[str, bool]: relation id -> holds
    """
    config.check_characteristic(p)
    results: Dict[str, bool] = {}
    reduce = (lambda value: value % p) if p else (lambda value: value)
    blocks = _powers(p, w)
    for size in blocks:
        expected = {(1, size): reduce(-1), (size, 1): reduce(1)}
        results[f"singleton_commutes_{size}"] = _block_boundary_mod_p(1 + size, p) == expected
    for generator in unordered_generators(w, p):
        if generator.kind != "boundary":
            continue
        n_prime = generator.size
        if 1 + n_prime - 2 * _p_part(n_prime // 2 if n_prime % 2 == 0 else n_prime, p) > w:
            continue
        chain = _block_boundary_mod_p(1 + n_prime, p)
        extra = {face: value for face, value in chain.items() if face not in {(1, n_prime), (n_prime, 1)}}
        results[f"singleton_commutes_boundary_{n_prime}"] = all(max(face) <= w for face in extra)
    if p != 2:
        for size in blocks:
            chain = _block_boundary_mod_p(2 * size, p)
            results[f"square_null_{size}"] = set(chain) == {(size, size)}
    for small in blocks:
        for large in blocks:
            if small < large:
                chain = _block_boundary_mod_p(small + large, p)
                results[f"anticommute_{small}_{large}"] = chain == {(small, large): 1, (large, small): 1}
    return results
