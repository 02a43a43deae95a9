"""
Module: complexes
Component: Cell complexes
Purpose: Enumerate the cells of cell(n, w), P(n, W, k) and ucel(n, w), and
assemble their sparse boundary matrices.

Description:
Three families are supported, selected by ComplexSpec.kind:

- strip                   cell(n, w): symbols whose blocks hold at most w labels
- weighted_permutohedron  P(n, W, k): ordered set partitions of weighted labels,
                          every block of total weight at most k
- unordered_strip         ucel(n, w): compositions of n with parts at most w

How it works:
1) Enumeration is dimension-local and streaming. A d-cell has n - d blocks.
   Every stream can be cut into shards keyed by the leading label of the
   first block (strip, weighted) or by the first part (unordered).
2) A PCell is represented by its sorted-representative symbol; its boundary is
   the symbol boundary of that representative, whose faces are again sorted.
3) ucel coefficients follow the binomial rule on block sizes, with the same
   prefix sign as ordered symbols.
4) Boundary matrices are dictionaries of nonzero entries indexed by the
   enumeration order of each dimension; they export to a sparse triplet text
   format ("dim rows cols nnz" header, then "row col value" lines).

Initial State:
- No global state; everything is recomputed on request

Final State:
- Streams and matrices are deterministic for a fixed spec

Exceptions handled:
- InvalidInputError: bad spec values, cells outside the complex
- SizeLimitError: ordered enumeration above the configured cell ceiling

Version: 0.1.0
Date: 2026-10-19

Cost:
- cell(n, w) has n! * #compositions cells per dimension; do not enumerate n >= 9

----------------------------------------------------------------------
Usage example:

from strip_homology.complexes import strip_complex, enumerate_cells, boundary_matrix

spec = strip_complex(3, 2)
print(len(list(enumerate_cells(spec, 1))))    # 12
print(boundary_matrix(spec, 1).to_triplets())
----------------------------------------------------------------------
"""

# ----------- Imports ----------- #
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from multiprocessing import get_context
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from strip_homology import config
from strip_homology.core_symbols import PCell, Symbol, boundary, split_sign, strip_cell_key, weighted_cell_key
from strip_homology.errors import InvalidInputError, SizeLimitError

logger = logging.getLogger(__name__)

Cell = Union[Symbol, PCell, "UCell"]


# ----------- Specs ----------- #
class ComplexKind(str, Enum):
    STRIP = "strip"
    WEIGHTED = "weighted_permutohedron"
    UNORDERED = "unordered_strip"


class ComplexSpec(BaseModel):
    """
    Identifies one complex of one of the three families.

    `w_or_k` is the width w for strip and unordered kinds and the weight
    threshold k for the weighted kind. `weights` is only meaningful for the
    weighted kind (defaults to all ones); `characteristic` only for the
    unordered kind.
    """

    model_config = ConfigDict(frozen=True)

    kind: ComplexKind
    n: int = Field(ge=1)
    w_or_k: int = Field(ge=1)
    weights: Optional[Tuple[int, ...]] = None
    characteristic: int = 0

    @field_validator("characteristic")
    @classmethod
    def _prime_or_zero(cls, value: int) -> int:
        return config.check_characteristic(value)

    @model_validator(mode="before")
    @classmethod
    def _default_weights(cls, values):
        if isinstance(values, dict) and values.get("weights") is None:
            if ComplexKind(values.get("kind")) is ComplexKind.WEIGHTED and isinstance(values.get("n"), int):
                values = {**values, "weights": (1,) * values["n"]}
        return values

    @model_validator(mode="after")
    def _check_weights(self) -> "ComplexSpec":
        if self.kind is ComplexKind.WEIGHTED:
            if len(self.weights) != self.n:
                raise ValueError(f"expected {self.n} weights, got {len(self.weights)}")
            if any(weight < 1 for weight in self.weights):
                raise ValueError("weights must be positive")
        elif self.weights is not None:
            raise ValueError(f"weights are only accepted for the weighted kind, not {self.kind.value}")
        if self.characteristic and self.kind is not ComplexKind.UNORDERED:
            raise ValueError("a characteristic is only attached to the unordered kind")
        return self

    @property
    def w(self) -> int:
        return self.w_or_k

    @property
    def k(self) -> int:
        return self.w_or_k

    def label(self) -> str:
        if self.kind is ComplexKind.STRIP:
            return f"cell({self.n},{self.w_or_k})"
        if self.kind is ComplexKind.WEIGHTED:
            return f"P({self.n},{list(self.weights)},{self.w_or_k})"
        return f"ucel({self.n},{self.w_or_k}) mod {self.characteristic}"


def _build_spec(**values) -> ComplexSpec:
    try:
        return ComplexSpec(**values)
    except ValidationError as err:
        raise InvalidInputError(f"Invalid complex: {err.errors()[0]['msg']}") from err


def strip_complex(n: int, w: int) -> ComplexSpec:
    """Returns the ComplexSpec of cell(n, w)."""
    return _build_spec(kind=ComplexKind.STRIP, n=n, w_or_k=w)


def weighted_complex(weights: Iterable[int], k: int) -> ComplexSpec:
    """Returns the ComplexSpec of P(n, weights, k) with n = len(weights)."""
    weights = tuple(weights)
    return _build_spec(kind=ComplexKind.WEIGHTED, n=len(weights), w_or_k=k, weights=weights)


def unordered_complex(n: int, w: int, p: int = 0) -> ComplexSpec:
    """Returns the ComplexSpec of ucel(n, w) over F_p (p = 0 for the rationals)."""
    return _build_spec(kind=ComplexKind.UNORDERED, n=n, w_or_k=w, characteristic=p)


# ----------- Unordered cells ----------- #
@dataclass(frozen=True)
class UCell:
    """A cell of ucel(n, w): the ordered block sizes."""

    composition: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.composition or any(size < 1 for size in self.composition):
            raise InvalidInputError(f"A composition needs positive parts, got {self.composition}")

    @classmethod
    def parse(cls, text: str) -> "UCell":
        """Parses "3|1" or "∘^3|∘^1"."""
        parts = []
        for chunk in text.split("|"):
            token = chunk.strip().replace("∘^", "").replace("o^", "")
            if token in {"∘", "o"}:
                token = "1"
            try:
                parts.append(int(token))
            except ValueError as err:
                raise InvalidInputError(f"Cannot parse unordered cell {text!r}") from err
        return cls(tuple(parts))

    @property
    def blocks(self) -> Tuple[int, ...]:
        return self.composition

    @property
    def n(self) -> int:
        return sum(self.composition)

    @property
    def dim(self) -> int:
        return sum(self.composition) - len(self.composition)

    def __str__(self) -> str:
        return "|".join(f"∘^{size}" for size in self.composition)


def unordered_face_coefficient(m: int, k: int) -> int:
    """
    Coefficient of the face ∘^k|∘^(m-k) in the boundary of the single block ∘^m.

    Raises:
        InvalidInputError: If k is not in 1..m-1
    """
    if not 1 <= k <= m - 1:
        raise InvalidInputError(f"No face ∘^{k}|∘^{m - k} of ∘^{m}")
    if k % 2 and (m - k) % 2:
        return 0
    if m % 2 == 0:
        return math.comb(m // 2, k // 2)
    if k % 2 == 0:
        return math.comb((m - 1) // 2, k // 2)
    return -math.comb((m - 1) // 2, (k - 1) // 2)


# ----------- Compositions ----------- #
def compositions(n: int, parts: int, max_part: int) -> Iterator[Tuple[int, ...]]:
    """Yields compositions of n into exactly `parts` parts, each in 1..max_part, lexicographically."""
    if parts == 0:
        if n == 0:
            yield ()
        return
    low = max(1, n - max_part * (parts - 1))
    high = min(max_part, n - (parts - 1))
    for first in range(low, high + 1):
        for rest in compositions(n - first, parts - 1, max_part):
            yield (first,) + rest


@lru_cache(maxsize=None)
def count_compositions(n: int, parts: int, max_part: int) -> int:
    """Number of compositions of n into `parts` parts bounded by max_part."""
    if parts == 0:
        return 1 if n == 0 else 0
    return sum(
        count_compositions(n - first, parts - 1, max_part)
        for first in range(1, min(max_part, n - parts + 1) + 1)
    )


def _breaks(composition: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(itertools.accumulate(composition))


# ----------- Enumeration ----------- #
def _check_dim(spec: ComplexSpec, dim: int) -> bool:
    return 0 <= dim <= spec.n - 1


def _strip_cells(spec: ComplexSpec, dim: int, shard: Optional[int]) -> Iterator[Symbol]:
    labels = tuple(range(1, spec.n + 1))
    shapes = [_breaks(c) for c in compositions(spec.n, spec.n - dim, spec.w)]
    if not shapes:
        return
    if shard is None:
        words = itertools.permutations(labels)
    else:
        rest = tuple(label for label in labels if label != shard)
        words = ((shard,) + tail for tail in itertools.permutations(rest))
    for word in words:
        for breaks in shapes:
            yield Symbol._raw(word, breaks)


def _ordered_set_partitions(
    remaining: Tuple[int, ...], parts: int, weights: Tuple[int, ...], k: int
) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    if parts == 0:
        if not remaining:
            yield ()
        return
    for size in range(1, len(remaining) - parts + 2):
        for block in itertools.combinations(remaining, size):
            if sum(weights[label - 1] for label in block) > k:
                continue
            chosen = set(block)
            rest = tuple(label for label in remaining if label not in chosen)
            for tail in _ordered_set_partitions(rest, parts - 1, weights, k):
                yield (block,) + tail


def _weighted_cells(spec: ComplexSpec, dim: int, shard: Optional[int]) -> Iterator[PCell]:
    labels = tuple(range(1, spec.n + 1))
    for blocks in _ordered_set_partitions(labels, spec.n - dim, spec.weights, spec.k):
        if shard is not None and blocks[0][0] != shard:
            continue
        yield PCell(blocks, spec.weights)


def _unordered_cells(spec: ComplexSpec, dim: int, shard: Optional[int]) -> Iterator[UCell]:
    for composition in compositions(spec.n, spec.n - dim, spec.w):
        if shard is None or composition[0] == shard:
            yield UCell(composition)


def shards(spec: ComplexSpec) -> List[int]:
    """Shard keys partitioning every enumeration stream of this complex."""
    if spec.kind is ComplexKind.UNORDERED:
        return list(range(1, min(spec.n, spec.w) + 1))
    return list(range(1, spec.n + 1))


def canonical_cells(spec: ComplexSpec, dim: int) -> List[Cell]:
    """Cells of one dimension in matrix index order: shards in ascending key order."""
    return [cell for shard in shards(spec) for cell in enumerate_cells(spec, dim, shard=shard)]


def enumerate_cells(
    spec: ComplexSpec, dim: int, shard: Optional[int] = None, ordered: bool = False, limit: Optional[int] = None
) -> Iterator[Cell]:
    """
    Streams the cells of one dimension.

    Parameters:
        spec (ComplexSpec): the complex
        dim (int): the dimension; outside 0..n-1 yields nothing
        shard (Optional[int]): restrict to one shard (see `shards`)
        ordered (bool): sort by the family's total order; materializes the dimension
        limit (Optional[int]): cell ceiling for ordered output; defaults to config.cell_limit()

    Returns:
        Iterator[Cell]: each admissible cell exactly once

    Raises:
        SizeLimitError: If ordered output would exceed the configured cell ceiling
    """
    if not _check_dim(spec, dim):
        return iter(())
    generator = {
        ComplexKind.STRIP: _strip_cells,
        ComplexKind.WEIGHTED: _weighted_cells,
        ComplexKind.UNORDERED: _unordered_cells,
    }[spec.kind]
    stream = generator(spec, dim, shard)
    if not ordered:
        return stream
    limit = limit if limit is not None else config.cell_limit()
    if spec.kind is ComplexKind.STRIP and count_cells(spec, dim) > limit:
        raise SizeLimitError(f"Refusing to sort {count_cells(spec, dim)} cells of {spec.label()} (limit {limit})")
    return iter(sorted(stream, key=cell_key(spec)))


def count_cells(spec: ComplexSpec, dim: int) -> int:
    """
    Counts the cells of one dimension without listing them where a closed form exists.

    Returns:
        int: n! * #compositions for strip, #compositions for unordered,
        a streamed count for weighted
    """
    if not _check_dim(spec, dim):
        return 0
    if spec.kind is ComplexKind.STRIP:
        return math.factorial(spec.n) * count_compositions(spec.n, spec.n - dim, spec.w)
    if spec.kind is ComplexKind.UNORDERED:
        return count_compositions(spec.n, spec.n - dim, spec.w)
    return sum(1 for _ in _weighted_cells(spec, dim, None))


def total_cells(spec: ComplexSpec) -> int:
    return sum(count_cells(spec, dim) for dim in range(spec.n))


def euler_characteristic(spec: ComplexSpec) -> int:
    """Alternating sum of cell counts."""
    return sum((-1) ** dim * count_cells(spec, dim) for dim in range(spec.n))


# ----------- Incidence ----------- #
def _check_member(spec: ComplexSpec, cell: Cell) -> None:
    if spec.kind is ComplexKind.STRIP:
        if not isinstance(cell, Symbol) or cell.labels != frozenset(range(1, spec.n + 1)):
            raise InvalidInputError(f"{cell!s} is not a cell of {spec.label()}")
        if any(len(block) > spec.w for block in cell.blocks):
            raise InvalidInputError(f"{cell!s} has a block wider than {spec.w}")
    elif spec.kind is ComplexKind.WEIGHTED:
        if not isinstance(cell, PCell) or sorted(label for block in cell.blocks for label in block) != list(
            range(1, spec.n + 1)
        ):
            raise InvalidInputError(f"{cell!s} is not a cell of {spec.label()}")
        if any(cell.block_weight(index) > spec.k for index in range(len(cell.blocks))):
            raise InvalidInputError(f"{cell!s} has a block heavier than {spec.k}")
    else:
        if not isinstance(cell, UCell) or cell.n != spec.n or max(cell.composition) > spec.w:
            raise InvalidInputError(f"{cell!s} is not a cell of {spec.label()}")


def _is_unit(coeff: int, p: int) -> bool:
    return coeff % p != 0 if p else coeff != 0


def faces(spec: ComplexSpec, cell: Cell, units_only: bool = False) -> List[Tuple[Cell, int]]:
    """
    Lists the codimension-one faces of a cell with their incidence numbers.

    Parameters:
        spec (ComplexSpec): the complex holding the cell
        cell (Cell): a cell of spec
        units_only (bool): keep only coefficients invertible in the complex's
            coefficient field (relevant for the unordered kind)

    Returns:
        List[Tuple[Cell, int]]: nonzero integer coefficients
    """
    if spec.kind is ComplexKind.STRIP:
        out = list(boundary(cell).terms.items())
    elif spec.kind is ComplexKind.WEIGHTED:
        out = [(PCell.from_symbol(face, spec.weights), coeff) for face, coeff in boundary(cell.to_symbol()).terms.items()]
    else:
        out = []
        sizes = cell.composition
        prefix = 0
        for index, size in enumerate(sizes):
            leibniz = -1 if prefix % 2 else 1
            for k in range(1, size):
                coeff = unordered_face_coefficient(size, k)
                if coeff:
                    face = UCell(sizes[:index] + (k, size - k) + sizes[index + 1:])
                    out.append((face, leibniz * coeff))
            prefix += size - 1
    if units_only:
        p = spec.characteristic
        out = [(face, coeff) for face, coeff in out if _is_unit(coeff, p)]
    return out


def cofaces(spec: ComplexSpec, cell: Cell, units_only: bool = False) -> List[Tuple[Cell, int]]:
    """
    Lists the codimension-one cofaces of a cell inside the complex.

    Only admissible cofaces are produced: merged blocks respect the width
    (strip, unordered) or the weight threshold (weighted).
    """
    out: List[Tuple[Cell, int]] = []
    if spec.kind is ComplexKind.STRIP:
        blocks = cell.blocks
        prefix = 0
        for index in range(len(blocks) - 1):
            left, right = blocks[index], blocks[index + 1]
            if len(left) + len(right) <= spec.w:
                leibniz = -1 if prefix % 2 else 1
                head, tail = blocks[:index], blocks[index + 2:]
                for merged in _interleavings(left, right):
                    coface = Symbol._from_blocks_unchecked(head + (merged,) + tail)
                    out.append((coface, leibniz * split_sign(merged, left)))
            prefix += len(left) - 1
    elif spec.kind is ComplexKind.WEIGHTED:
        blocks = cell.blocks
        prefix = 0
        for index in range(len(blocks) - 1):
            left, right = blocks[index], blocks[index + 1]
            merged = tuple(sorted(left + right))
            if sum(spec.weights[label - 1] for label in merged) <= spec.k:
                leibniz = -1 if prefix % 2 else 1
                coface = PCell(blocks[:index] + (merged,) + blocks[index + 2:], spec.weights)
                out.append((coface, leibniz * split_sign(merged, left)))
            prefix += len(left) - 1
    else:
        sizes = cell.composition
        prefix = 0
        for index in range(len(sizes) - 1):
            merged = sizes[index] + sizes[index + 1]
            if merged <= spec.w:
                coeff = unordered_face_coefficient(merged, sizes[index])
                if coeff:
                    leibniz = -1 if prefix % 2 else 1
                    out.append((UCell(sizes[:index] + (merged,) + sizes[index + 2:]), leibniz * coeff))
            prefix += sizes[index] - 1
    if units_only:
        p = spec.characteristic
        out = [(coface, coeff) for coface, coeff in out if _is_unit(coeff, p)]
    return out


def _interleavings(left: Tuple[int, ...], right: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
    total = len(left) + len(right)
    for positions in itertools.combinations(range(total), len(left)):
        chosen = set(positions)
        ia, ib = iter(left), iter(right)
        yield tuple(next(ia) if slot in chosen else next(ib) for slot in range(total))


def cell_key(spec: ComplexSpec) -> Callable[[Cell], Tuple]:
    """
    Returns the sort key realising the family's total order.

    strip: layer permutation, then the weighted order on contracted wheels;
    weighted: the follower/backwards order on blocks;
    unordered: the characteristic-p follower order on block sizes.
    """
    if spec.kind is ComplexKind.STRIP:
        return strip_cell_key
    if spec.kind is ComplexKind.WEIGHTED:
        return lambda cell: weighted_cell_key(cell.blocks)
    from strip_homology.unordered import unordered_cell_key

    p = spec.characteristic
    return lambda cell: unordered_cell_key(cell.composition, p)


# ----------- Boundary matrices ----------- #
@dataclass
class SparseBoundaryMatrix:
    """
    Matrix of the boundary map from dimension `dim` to `dim - 1`.

    Rows index (dim-1)-cells and columns index dim-cells, both in enumeration
    order. `entries` maps (row, col) to a nonzero coefficient; for a prime
    characteristic entries are reduced to 0..p-1.
    """

    dim: int
    rows: int
    cols: int
    entries: Dict[Tuple[int, int], int] = field(default_factory=dict)
    characteristic: int = 0
    row_cells: Optional[List[Cell]] = None
    col_cells: Optional[List[Cell]] = None

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def columns(self) -> Dict[int, Dict[int, int]]:
        out: Dict[int, Dict[int, int]] = {}
        for (row, col), value in self.entries.items():
            out.setdefault(col, {})[row] = value
        return out

    def to_dense(self) -> List[List[int]]:
        dense = [[0] * self.cols for _ in range(self.rows)]
        for (row, col), value in self.entries.items():
            dense[row][col] = value
        return dense

    def reduced(self, p: int) -> "SparseBoundaryMatrix":
        """Returns the same matrix with entries reduced mod p (dropping zeros)."""
        entries = {key: value % p for key, value in self.entries.items() if value % p}
        return SparseBoundaryMatrix(self.dim, self.rows, self.cols, entries, p, self.row_cells, self.col_cells)

    def compose(self, other: "SparseBoundaryMatrix") -> Dict[Tuple[int, int], int]:
        """Product self * other as a dict of nonzero entries; other maps into self's domain."""
        if other.rows != self.cols:
            raise InvalidInputError(f"Cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        by_row: Dict[int, List[Tuple[int, int]]] = {}
        for (row, col), value in other.entries.items():
            by_row.setdefault(row, []).append((col, value))
        product: Dict[Tuple[int, int], int] = {}
        for (row, middle), value in self.entries.items():
            for col, other_value in by_row.get(middle, ()):
                product[(row, col)] = product.get((row, col), 0) + value * other_value
        p = self.characteristic or other.characteristic
        return {key: value for key, value in product.items() if (value % p if p else value)}

    def to_triplets(self) -> str:
        """Serializes as "dim rows cols nnz" followed by sorted "row col value" lines."""
        lines = [f"{self.dim} {self.rows} {self.cols} {self.nnz}"]
        lines.extend(f"{row} {col} {value}" for (row, col), value in sorted(self.entries.items()))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_triplets(cls, text: str) -> "SparseBoundaryMatrix":
        """
        Parses the sparse triplet format.

        Raises:
            InvalidInputError: On a malformed header, an out-of-range index or
                a count mismatch
        """
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise InvalidInputError("Empty triplet document")
        try:
            dim, rows, cols, nnz = (int(token) for token in lines[0].split())
            entries = {}
            for line in lines[1:]:
                row, col, value = (int(token) for token in line.split())
                if not (0 <= row < rows and 0 <= col < cols):
                    raise InvalidInputError(f"Entry ({row}, {col}) outside a {rows}x{cols} matrix")
                if value:
                    entries[(row, col)] = value
        except ValueError as err:
            raise InvalidInputError(f"Malformed triplet document: {err}") from err
        if len(lines) - 1 != nnz:
            raise InvalidInputError(f"Header announces {nnz} entries, found {len(lines) - 1}")
        return cls(dim, rows, cols, entries)


def _shard_columns(job: Tuple[ComplexSpec, int, int]) -> List[Tuple[Cell, List[Tuple[Cell, int]]]]:
    spec, dim, shard = job
    return [(cell, faces(spec, cell)) for cell in enumerate_cells(spec, dim, shard=shard)]


def boundary_matrix(
    spec: ComplexSpec, dim: int, characteristic: Optional[int] = None, workers: int = 1, keep_cells: bool = False
) -> SparseBoundaryMatrix:
    """
    Assembles the boundary matrix of one dimension.

    Parameters:
        spec (ComplexSpec): the complex
        dim (int): source dimension, >= 1
        characteristic (Optional[int]): 0 for integer entries, a prime to reduce;
            defaults to the complex's own characteristic
        workers (int): processes assembling shards in parallel
        keep_cells (bool): attach the row and column cells

    Returns:
        SparseBoundaryMatrix: deterministic regardless of `workers`

    Raises:
        InvalidInputError: If dim < 1
    """
    if dim < 1:
        raise InvalidInputError(f"Boundary matrices start at dimension 1, got {dim}")
    p = spec.characteristic if characteristic is None else config.check_characteristic(characteristic)
    row_cells = canonical_cells(spec, dim - 1)
    row_index = {cell: index for index, cell in enumerate(row_cells)}
    jobs = [(spec, dim, shard) for shard in shards(spec)]
    if workers > 1 and len(jobs) > 1:
        with get_context("spawn").Pool(min(workers, len(jobs))) as pool:
            parts = pool.map(_shard_columns, jobs)
    else:
        parts = [_shard_columns(job) for job in jobs]
    columns = [column for part in parts for column in part]
    entries: Dict[Tuple[int, int], int] = {}
    for col, (_, column_faces) in enumerate(columns):
        for face, coeff in column_faces:
            value = coeff % p if p else coeff
            if value:
                entries[(row_index[face], col)] = value
    logger.debug("Assembled %s boundary in dimension %d: %d x %d, %d entries", spec.label(), dim, len(row_cells), len(columns), len(entries))
    return SparseBoundaryMatrix(
        dim,
        len(row_cells),
        len(columns),
        entries,
        p,
        row_cells if keep_cells else None,
        [cell for cell, _ in columns] if keep_cells else None,
    )
