"""
Module: core_symbols
Component: Combinatorial substrate
Purpose: Cell symbols, signed chains, wheel decompositions, the signed boundary
and the total orders every Morse matching is built from.

Description:
A Symbol is an ordered sequence of ordered blocks partitioning a label set,
written "7 2 | 6 | 4 5 1 | 8 3". It labels one cell of the ordered complex;
its dimension is (#labels - #blocks).

How it works:
1) Storage
   - A Symbol is a flat label word plus the end offset of every block, which
     keeps hashing and lexicographic comparison cheap at factorial scale.
2) Boundary
   - A face splits one block g into two blocks a|b whose concatenation ab is a
     shuffle-preimage of g. Its sign is (-1)^len(a) * sgn(g -> ab), times the
     prefix sign (-1)^(sum of dimensions of the blocks before g).
   - All coefficients are +-1 and the boundary squares to zero.
3) Wheels and layers
   - Each block is cut at its running maxima; each piece is a wheel whose first
     entry (the axle) is its maximum.
   - The layer permutation lists all wheels in ascending axle order; it is the
     lexicographically least shuffle of the blocks.
4) Orders
   - weighted_cell_key realises the order on cells of the weighted
     permutohedral complex: at the first differing block a follower is below
     a non-follower, followers compare by size then sorted entries, and
     non-followers compare backwards (3 < 32 < 321 < 31 < 2 < 21 < 1).
   - strip_cell_key compares layer permutations first and, inside one layer,
     applies the weighted key to wheels ranked by (size, axle).

Philosophy:
- Every value here is immutable and every function pure.
- Validation happens at the public constructors; internal hot paths build
  symbols through the unchecked constructor.

Exceptions handled:
- InvalidInputError: empty blocks, repeated labels, overlapping label sets

Version: 0.1.0
Date: 2026-10-19

Cost:
- boundary(s) touches sum over blocks of (2^len - 2) faces

----------------------------------------------------------------------
Usage example:

from strip_homology.core_symbols import Symbol, boundary

s = Symbol.parse("1 2")
print(boundary(s))      # -(1 | 2) + (2 | 1)
----------------------------------------------------------------------
"""

# ----------- Imports ----------- #
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from typing_extensions import Self

from strip_homology.errors import InvalidInputError

# ----------- Types ----------- #
Label = int
Block = Tuple[int, ...]
Permutation = Tuple[int, ...]


@dataclass(frozen=True)
class Symbol:
    """A cell of the ordered complex: flat label word plus block end offsets."""

    word: Tuple[int, ...]
    breaks: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.word:
            raise InvalidInputError("A symbol needs at least one label")
        if len(set(self.word)) != len(self.word):
            raise InvalidInputError(f"Repeated label in symbol {self.word}")
        if any(label < 1 for label in self.word):
            raise InvalidInputError(f"Labels must be positive integers, got {self.word}")
        previous = 0
        for end in self.breaks:
            if end <= previous:
                raise InvalidInputError(f"Empty block in symbol {self.word} with breaks {self.breaks}")
            previous = end
        if previous != len(self.word):
            raise InvalidInputError(f"Block offsets {self.breaks} do not cover the word {self.word}")

    # ----------- Constructors ----------- #
    @classmethod
    def _raw(cls, word: Tuple[int, ...], breaks: Tuple[int, ...]) -> Self:
        symbol = object.__new__(cls)
        object.__setattr__(symbol, "word", word)
        object.__setattr__(symbol, "breaks", breaks)
        return symbol

    @classmethod
    def from_blocks(cls, blocks: Iterable[Sequence[int]]) -> Self:
        """Builds a validated symbol from a sequence of blocks."""
        word: List[int] = []
        breaks: List[int] = []
        for block in blocks:
            if len(block) == 0:
                raise InvalidInputError("Blocks must be nonempty")
            word.extend(int(label) for label in block)
            breaks.append(len(word))
        return cls(tuple(word), tuple(breaks))

    @classmethod
    def _from_blocks_unchecked(cls, blocks: Iterable[Sequence[int]]) -> Self:
        word: List[int] = []
        breaks: List[int] = []
        for block in blocks:
            word.extend(block)
            breaks.append(len(word))
        return cls._raw(tuple(word), tuple(breaks))

    @classmethod
    def parse(cls, text: str) -> Self:
        """
        Parses the textual form "7 2 | 6 | 4 5 1 | 8 3".

        Parameters:
            text (str): space-separated labels with '|' between blocks

        Returns:
            Symbol: the parsed symbol

        Raises:
            InvalidInputError: If a block is empty or a token is not an integer
        """
        blocks = []
        for chunk in text.split("|"):
            tokens = chunk.split()
            if not tokens:
                raise InvalidInputError(f"Empty block in {text!r}")
            try:
                blocks.append(tuple(int(token) for token in tokens))
            except ValueError as parse_error:
                raise InvalidInputError(f"Cannot parse symbol {text!r}: {parse_error}") from parse_error
        return cls.from_blocks(blocks)

    # ----------- Views ----------- #
    @property
    def blocks(self) -> Tuple[Block, ...]:
        start = 0
        out = []
        for end in self.breaks:
            out.append(self.word[start:end])
            start = end
        return tuple(out)

    @property
    def labels(self) -> frozenset:
        return frozenset(self.word)

    @property
    def n(self) -> int:
        return len(self.word)

    @property
    def dim(self) -> int:
        return len(self.word) - len(self.breaks)

    def relabel(self, mapping: Mapping[int, int]) -> Self:
        """Applies a label permutation entrywise; block structure is kept."""
        return type(self)._raw(tuple(mapping[label] for label in self.word), self.breaks)

    def concat(self, other: "Symbol") -> "Symbol":
        """Places `other` to the right of this symbol."""
        if self.labels & other.labels:
            raise InvalidInputError(f"Cannot concatenate symbols sharing labels: {self} and {other}")
        shift = len(self.word)
        return Symbol._raw(self.word + other.word, self.breaks + tuple(end + shift for end in other.breaks))

    def __str__(self) -> str:
        return " | ".join(" ".join(str(label) for label in block) for block in self.blocks)

    def __repr__(self) -> str:
        return f"Symbol({str(self)!r})"


class WeightedLabel(NamedTuple):
    label: int
    weight: int


@dataclass(frozen=True)
class PCell:
    """
    A cell of the weighted permutohedral complex P(n, W): an ordered list of
    unordered blocks. Blocks are stored sorted; weights[i-1] is label i's weight.
    """

    blocks: Tuple[Block, ...]
    weights: Tuple[int, ...]

    @classmethod
    def from_sets(cls, blocks: Iterable[Iterable[int]], weights: Sequence[int]) -> "PCell":
        normalized = tuple(tuple(sorted(block)) for block in blocks)
        labels = [label for block in normalized for label in block]
        if any(len(block) == 0 for block in normalized):
            raise InvalidInputError("PCell blocks must be nonempty")
        if len(set(labels)) != len(labels):
            raise InvalidInputError(f"PCell blocks overlap: {normalized}")
        if any(label < 1 or label > len(weights) for label in labels):
            raise InvalidInputError(f"PCell labels must lie in 1..{len(weights)}")
        return cls(normalized, tuple(weights))

    @classmethod
    def from_symbol(cls, symbol: Symbol, weights: Sequence[int]) -> "PCell":
        return cls(tuple(tuple(sorted(block)) for block in symbol.blocks), tuple(weights))

    def to_symbol(self) -> Symbol:
        """Returns the sorted-representative symbol (entries ascending in each block)."""
        return Symbol._from_blocks_unchecked(self.blocks)

    def block_weight(self, index: int) -> int:
        return sum(self.weights[label - 1] for label in self.blocks[index])

    def weighted_blocks(self) -> Tuple[frozenset, ...]:
        return tuple(
            frozenset(WeightedLabel(label, self.weights[label - 1]) for label in block) for block in self.blocks
        )

    @property
    def dim(self) -> int:
        return sum(len(block) for block in self.blocks) - len(self.blocks)

    def __str__(self) -> str:
        return " | ".join(" ".join(str(label) for label in block) for block in self.blocks)


class WheelDecomposition(NamedTuple):
    """Wheels of a symbol in block order, with the index of the block holding each."""

    wheels: Tuple[Block, ...]
    block_index: Tuple[int, ...]

    @property
    def axles(self) -> Tuple[int, ...]:
        return tuple(wheel[0] for wheel in self.wheels)


# ----------- Signed chains ----------- #
class SignedChain:
    """
    A finite integer combination of symbols of one dimension on one label set.
    Zero coefficients are never stored.
    """

    __slots__ = ("terms", "degree")

    def __init__(self, terms: Optional[Mapping[Symbol, int]] = None, degree: Optional[int] = None) -> None:
        cleaned = {symbol: int(coeff) for symbol, coeff in (terms or {}).items() if coeff}
        dims = {symbol.dim for symbol in cleaned}
        label_sets = {symbol.labels for symbol in cleaned}
        if len(dims) > 1:
            raise InvalidInputError(f"Chain mixes dimensions {sorted(dims)}")
        if len(label_sets) > 1:
            raise InvalidInputError("Chain mixes label sets")
        if cleaned:
            found = dims.pop()
            if degree is not None and degree != found:
                raise InvalidInputError(f"Declared degree {degree} but symbols have dimension {found}")
            degree = found
        self.terms: Dict[Symbol, int] = cleaned
        self.degree: int = 0 if degree is None else degree

    @classmethod
    def _of(cls, terms: Dict[Symbol, int], degree: int) -> "SignedChain":
        chain = object.__new__(cls)
        chain.terms = {symbol: coeff for symbol, coeff in terms.items() if coeff}
        chain.degree = degree
        return chain

    @classmethod
    def cell(cls, symbol: Symbol, coeff: int = 1) -> "SignedChain":
        return cls._of({symbol: coeff}, symbol.dim)

    @classmethod
    def zero(cls, degree: int) -> "SignedChain":
        return cls._of({}, degree)

    # ----------- Algebra ----------- #
    def _check_compatible(self, other: "SignedChain") -> None:
        if self.terms and other.terms and self.degree != other.degree:
            raise InvalidInputError(f"Cannot add chains of degrees {self.degree} and {other.degree}")

    def __add__(self, other: "SignedChain") -> "SignedChain":
        self._check_compatible(other)
        merged = dict(self.terms)
        for symbol, coeff in other.terms.items():
            merged[symbol] = merged.get(symbol, 0) + coeff
        degree = self.degree if self.terms else other.degree
        return SignedChain._of(merged, degree)

    def __neg__(self) -> "SignedChain":
        return SignedChain._of({symbol: -coeff for symbol, coeff in self.terms.items()}, self.degree)

    def __sub__(self, other: "SignedChain") -> "SignedChain":
        return self + (-other)

    def __mul__(self, scalar: int) -> "SignedChain":
        return SignedChain._of({symbol: coeff * scalar for symbol, coeff in self.terms.items()}, self.degree)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignedChain):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Symbol, int]]:
        return iter(self.terms.items())

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, symbol: Symbol) -> int:
        return self.terms.get(symbol, 0)

    @property
    def support(self) -> Tuple[Symbol, ...]:
        return tuple(self.terms)

    def boundary(self) -> "SignedChain":
        """Extends `boundary` linearly; the result has degree one less."""
        merged: Dict[Symbol, int] = {}
        for symbol, coeff in self.terms.items():
            for face, sign in boundary(symbol).terms.items():
                merged[face] = merged.get(face, 0) + sign * coeff
        return SignedChain._of(merged, self.degree - 1)

    def relabel(self, mapping: Mapping[int, int]) -> "SignedChain":
        return SignedChain._of({symbol.relabel(mapping): coeff for symbol, coeff in self.terms.items()}, self.degree)

    def to_json(self) -> List[Dict[str, str]]:
        """Serializes as [{symbol, coeff}] with decimal-string coefficients, sorted by symbol text."""
        return [
            {"symbol": str(symbol), "coeff": str(coeff)}
            for symbol, coeff in sorted(self.terms.items(), key=lambda item: item[0].word + (0,) + item[0].breaks)
        ]

    @classmethod
    def from_json(cls, rows: Iterable[Mapping[str, str]]) -> "SignedChain":
        return cls({Symbol.parse(row["symbol"]): int(row["coeff"]) for row in rows})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for symbol, coeff in sorted(self.terms.items(), key=lambda item: item[0].word + (0,) + item[0].breaks):
            sign = "-" if coeff < 0 else "+"
            magnitude = "" if abs(coeff) == 1 else f"{abs(coeff)}"
            parts.append(f"{sign} {magnitude}({symbol})")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else text

    def __repr__(self) -> str:
        return f"SignedChain({str(self)!r})"


# ----------- Shuffles ----------- #
def shuffles(a: Sequence[int], b: Sequence[int]) -> List[Block]:
    """
    Lists every riffle interleaving of two disjoint blocks.

    Parameters:
        a (Sequence[int]): first block, nonempty
        b (Sequence[int]): second block, nonempty, disjoint from a

    Returns:
        List[Block]: all C(|a|+|b|, |a|) interleavings, ordered lexicographically
        by the positions taken by the entries of a

    Raises:
        InvalidInputError: If a block is empty or the blocks share a label
    """
    if not a or not b:
        raise InvalidInputError("Shuffled blocks must be nonempty")
    if set(a) & set(b):
        raise InvalidInputError(f"Cannot shuffle overlapping blocks {tuple(a)} and {tuple(b)}")
    total = len(a) + len(b)
    out = []
    for positions in itertools.combinations(range(total), len(a)):
        chosen = set(positions)
        ia = iter(a)
        ib = iter(b)
        out.append(tuple(next(ia) if slot in chosen else next(ib) for slot in range(total)))
    return out


@lru_cache(maxsize=None)
def _block_splits(length: int) -> Tuple[Tuple[Tuple[int, ...], Tuple[int, ...], int], ...]:
    # (positions of a, positions of b, (-1)^len(a) * sgn(g -> ab))
    splits = []
    for size in range(1, length):
        for positions in itertools.combinations(range(length), size):
            rest = tuple(slot for slot in range(length) if slot not in positions)
            inversions = sum(slot - index for index, slot in enumerate(positions))
            sign = -1 if (size + inversions) % 2 else 1
            splits.append((positions, rest, sign))
    return tuple(splits)


def split_sign(merged: Sequence[int], first: Iterable[int]) -> int:
    """
    Sign of the face first|rest in the boundary of the single block `merged`.

    Parameters:
        merged (Sequence[int]): the block being split
        first (Iterable[int]): labels going to the left face block

    Returns:
        int: (-1)^len(first) * sgn(merged -> first rest)
    """
    chosen = set(first)
    inversions = 0
    seen_rest = 0
    for label in merged:
        if label in chosen:
            inversions += seen_rest
        else:
            seen_rest += 1
    return -1 if (len(chosen) + inversions) % 2 else 1


def boundary(s: Symbol) -> SignedChain:
    """
    Computes the signed boundary of one cell.

    Parameters:
        s (Symbol): the cell

    Returns:
        SignedChain: sum over faces (one block split into two) with +-1
        coefficients; the zero chain of degree -1 for 0-cells

    Initial State:
        - s is a valid symbol

    Final State:
        - boundary(boundary(s)) == 0

    Cost:
        - sum over blocks of (2^len - 2) faces
    """
    blocks = s.blocks
    terms: Dict[Symbol, int] = {}
    prefix_dim = 0
    for index, block in enumerate(blocks):
        if len(block) > 1:
            leibniz = -1 if prefix_dim % 2 else 1
            before = blocks[:index]
            after = blocks[index + 1:]
            for left, right, sign in _block_splits(len(block)):
                a = tuple(block[slot] for slot in left)
                b = tuple(block[slot] for slot in right)
                face = Symbol._from_blocks_unchecked(before + (a, b) + after)
                terms[face] = leibniz * sign
        prefix_dim += len(block) - 1
    return SignedChain._of(terms, s.dim - 1)


def concat(x: SignedChain, y: SignedChain) -> SignedChain:
    """
    Concatenation product of chains on disjoint label sets.

    Parameters:
        x (SignedChain): left factor
        y (SignedChain): right factor

    Returns:
        SignedChain: bilinear extension of symbol concatenation, degree deg x + deg y;
        satisfies d(x|y) = dx|y + (-1)^deg(x) x|dy

    Raises:
        InvalidInputError: If the two label sets overlap
    """
    if x.terms and y.terms:
        left_labels = next(iter(x.terms)).labels
        right_labels = next(iter(y.terms)).labels
        if left_labels & right_labels:
            raise InvalidInputError("Cannot concatenate chains on overlapping label sets")
    terms: Dict[Symbol, int] = {}
    for left, a in x.terms.items():
        shift = len(left.word)
        for right, b in y.terms.items():
            joined = Symbol._raw(left.word + right.word, left.breaks + tuple(end + shift for end in right.breaks))
            terms[joined] = a * b
    return SignedChain._of(terms, x.degree + y.degree)


# ----------- Wheels and layers ----------- #
def split_into_wheels(block: Sequence[int]) -> Tuple[Block, ...]:
    """Cuts one block at its running maxima."""
    wheels: List[List[int]] = []
    running = 0
    for label in block:
        if label > running:
            wheels.append([label])
            running = label
        else:
            wheels[-1].append(label)
    return tuple(tuple(wheel) for wheel in wheels)


def wheel_decompose(s: Symbol) -> WheelDecomposition:
    """
    Decomposes every block of a symbol into wheels.

    Parameters:
        s (Symbol): the cell

    Returns:
        WheelDecomposition: wheels in block order (blocks left to right), each
        starting with its maximum, and the block index of every wheel
    """
    wheels: List[Block] = []
    owners: List[int] = []
    for index, block in enumerate(s.blocks):
        for wheel in split_into_wheels(block):
            wheels.append(wheel)
            owners.append(index)
    return WheelDecomposition(tuple(wheels), tuple(owners))


def layer_permutation(s: Symbol) -> Permutation:
    """Returns the layer permutation: all wheels in ascending axle order, concatenated."""
    ordered = sorted(wheel_decompose(s).wheels, key=lambda wheel: wheel[0])
    return tuple(label for wheel in ordered for label in wheel)


def least_shuffle(s: Symbol) -> Permutation:
    """
    Lexicographically least shuffle of the blocks, by exhaustive enumeration.
    Meant for cross-checking layer_permutation on small symbols.
    """
    candidates = reduce(
        lambda acc, block: [merged for word in acc for merged in shuffles(word, block)],
        s.blocks[1:],
        [s.blocks[0]],
    )
    return min(candidates)


def wheel_rank_order(wheels: Iterable[Block]) -> List[Block]:
    """Sorts wheels by rank: number of elements, then axle."""
    return sorted(wheels, key=lambda wheel: (len(wheel), wheel[0]))


def wheel_contraction(s: Symbol) -> Tuple[Tuple[Block, ...], Tuple[int, ...]]:
    """
    Contracts every wheel of a symbol to one weighted point.

    Returns:
        Tuple: (blocks of wheel ranks, sorted; weights indexed by rank - 1).
        Ranks order wheels by (size, axle), so weights are nondecreasing.
    """
    decomposition = wheel_decompose(s)
    ranked = wheel_rank_order(decomposition.wheels)
    rank_of = {wheel[0]: rank for rank, wheel in enumerate(ranked, start=1)}
    weights = tuple(len(wheel) for wheel in ranked)
    blocks: List[List[int]] = [[] for _ in s.breaks]
    for wheel, owner in zip(decomposition.wheels, decomposition.block_index):
        blocks[owner].append(rank_of[wheel[0]])
    return tuple(tuple(sorted(block)) for block in blocks), weights


# ----------- Orders ----------- #
def weighted_cell_key(blocks: Sequence[Iterable[int]]) -> Tuple:
    """
    Sort key realising the total order on weighted permutohedral cells.

    The follower status of a block depends only on the blocks before it, so
    comparing per-block keys lexicographically compares at the first
    differing block.
    """
    key = []
    leader: Optional[int] = None
    for block in blocks:
        entries = sorted(block)
        if leader is not None and leader < entries[0]:
            key.append((0, len(entries), tuple(entries)))
            leader = None
        else:
            key.append((1, tuple(-entry for entry in reversed(entries))))
            leader = entries[0] if len(entries) == 1 else None
    return tuple(key)


def _compare(left: Tuple, right: Tuple) -> int:
    return (left > right) - (left < right)


def weighted_cell_order(f: PCell, g: PCell) -> int:
    """Returns -1, 0 or 1 as f precedes, equals or follows g."""
    return _compare(weighted_cell_key(f.blocks), weighted_cell_key(g.blocks))


def strip_cell_key(s: Symbol) -> Tuple:
    """Sort key of the strip order: layer permutation, then the weighted key on ranked wheels."""
    blocks, _ = wheel_contraction(s)
    return (layer_permutation(s), weighted_cell_key(blocks))


def strip_cell_order(f: Symbol, g: Symbol) -> int:
    """
    Compares two cells of the same strip complex.

    Returns:
        int: -1, 0 or 1 as f precedes, equals or follows g

    Raises:
        InvalidInputError: If the symbols have different label sets
    """
    if f.labels != g.labels:
        raise InvalidInputError(f"Cannot order cells on different label sets: {f} and {g}")
    return _compare(strip_cell_key(f), strip_cell_key(g))
