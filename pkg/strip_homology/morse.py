"""
Module: morse
Component: Discrete Morse theory
Purpose: Matchings induced by total orders, gradient verification, and direct
enumeration of critical cells for the strip, weighted and unordered families.

Description:
For a total order on cells, g and f are matched when f is the greatest face
of g and g is the least coface of f (incidences must be units). Critical
cells are the unmatched ones. For each family the critical cells also have a
direct combinatorial description, which is what the enumerators here use so
that large complexes never need to be materialized.

How it works:
1) matching_from_order walks every cell of an enumerable complex; on ucel
   the pair rule gives the matching directly (pair_rule_matching).
2) verify_gradient builds the modified Hasse digraph with networkx (matched
   edges reversed) and checks that it is acyclic.
3) critical_cells_weighted chooses, left to right, either a non-follower
   singleton (smaller than a preceding non-follower singleton) or a leader
   singleton followed by a block of larger labels with enough weight.
4) critical_cells_strip reads critical cells off basis elements; in count
   mode it slices the counted barcode.
5) critical_cells_unordered defers to the characteristic-p pair rule.

Exceptions handled:
- SizeLimitError: matching or gradient checks on complexes that are too big
- InvalidInputError: weights that are not nondecreasing

Version: 0.1.0
Date: 2026-10-19

----------------------------------------------------------------------
Usage example:

from strip_homology.complexes import weighted_complex
from strip_homology.morse import matching_from_order, verify_gradient

spec = weighted_complex((1, 1, 1), 2)
matching = matching_from_order(spec)
print([str(cell) for cell in matching.critical()])     # ['3 | 2 | 1', '1 | 2 3']
print(verify_gradient(matching, spec))                 # True
----------------------------------------------------------------------
"""

# ----------- Imports ----------- #
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
from pydantic import BaseModel, Field

from strip_homology import config
from strip_homology.basis_cycles import critical_symbol, iter_basis_elements
from strip_homology.complexes import (
    Cell,
    ComplexKind,
    ComplexSpec,
    UCell,
    cell_key,
    cofaces,
    enumerate_cells,
    faces,
    total_cells,
)
from strip_homology.core_symbols import PCell, Symbol
from strip_homology.errors import InvalidInputError, SizeLimitError
from strip_homology.persistence import barcode, betti_at
from strip_homology.unordered import (
    UP,
    critical_counts_unordered,
    iter_critical_unordered,
    unordered_cell_key,
    unordered_partner,
)

logger = logging.getLogger(__name__)

GRADIENT_LIMIT = 7


# ----------- Reports ----------- #
class CriticalCellReport(BaseModel):
    """Per-dimension critical cell counts, optionally with the cells themselves."""

    kind: str
    n: int
    w_or_k: int
    p: int = 0
    counts: Dict[int, int] = Field(default_factory=dict)
    cells: Optional[List[str]] = None

    def to_rows(self) -> List[List[str]]:
        return [
            [self.kind, str(self.n), str(self.w_or_k), str(self.p), str(dim), str(count)]
            for dim, count in sorted(self.counts.items())
        ]

    def to_json(self) -> dict:
        payload = {
            "kind": self.kind,
            "n": self.n,
            "w_or_k": self.w_or_k,
            "p": self.p,
            "counts": [{"dim": dim, "count": str(count)} for dim, count in sorted(self.counts.items())],
        }
        if self.cells is not None:
            payload["cells"] = list(self.cells)
        return payload


# ----------- Matchings ----------- #
@dataclass
class MorseMatching:
    """
    Pairs [f, g] with f a face of g; `up` maps f to g and `down` maps g to f.
    """

    spec: ComplexSpec
    up: Dict[Cell, Cell] = field(default_factory=dict)
    down: Dict[Cell, Cell] = field(default_factory=dict)
    cells: Dict[int, List[Cell]] = field(default_factory=dict)

    def partner(self, cell: Cell) -> Optional[Cell]:
        return self.up.get(cell, self.down.get(cell))

    def is_critical(self, cell: Cell) -> bool:
        return cell not in self.up and cell not in self.down

    def critical(self, dim: Optional[int] = None) -> List[Cell]:
        dims = [dim] if dim is not None else sorted(self.cells)
        return [cell for d in dims for cell in self.cells.get(d, []) if self.is_critical(cell)]

    def critical_counts(self) -> Dict[int, int]:
        return {dim: sum(1 for cell in cells if self.is_critical(cell)) for dim, cells in sorted(self.cells.items())}


def _guard(spec: ComplexSpec, limit: Optional[int] = None) -> None:
    ceiling = limit if limit is not None else config.cell_limit()
    size = total_cells(spec)
    if size > ceiling:
        raise SizeLimitError(f"{spec.label()} has {size} cells, above the limit {ceiling}")


def matching_from_order(
    spec: ComplexSpec, key: Optional[Callable[[Cell], Tuple]] = None, limit: Optional[int] = None
) -> MorseMatching:
    """
    Matching induced by a total order on the cells of spec.

    Parameters:
        spec (ComplexSpec): an enumerable complex
        key (Optional[Callable]): sort key of the order; defaults to cell_key(spec)
        limit (Optional[int]): cell ceiling; defaults to config.cell_limit()

    Returns:
        MorseMatching: f is matched with g when f is the greatest unit face of g
        and g is the least unit coface of f

    Raises:
        SizeLimitError: If the complex exceeds the configured cell ceiling
    """
    _guard(spec, limit)
    key = key if key is not None else cell_key(spec)
    matching = MorseMatching(spec)
    for dim in range(spec.n):
        matching.cells[dim] = sorted(enumerate_cells(spec, dim), key=key)
    for dim in range(spec.n - 1):
        for f in matching.cells[dim]:
            upper = [coface for coface, _ in cofaces(spec, f, units_only=True)]
            if not upper:
                continue
            g = min(upper, key=key)
            top = max((face for face, _ in faces(spec, g, units_only=True)), key=key)
            if top == f:
                matching.up[f] = g
                matching.down[g] = f
    logger.debug("Matching on %s pairs %d cells", spec.label(), 2 * len(matching.up))
    return matching


def verify_gradient(m: MorseMatching, spec: Optional[ComplexSpec] = None) -> bool:
    """
    True iff the matching has no closed V-walk.

    Raises:
        SizeLimitError: If the complex has more than GRADIENT_LIMIT labels
    """
    spec = spec if spec is not None else m.spec
    if spec.n > GRADIENT_LIMIT:
        raise SizeLimitError(f"verify_gradient refuses n={spec.n} > {GRADIENT_LIMIT}")
    for f, g in m.up.items():
        if m.down.get(g) != f:
            return False
    graph = nx.DiGraph()
    for dim, cells in m.cells.items():
        graph.add_nodes_from(cells)
        if dim == 0:
            continue
        for g in cells:
            for f, _ in faces(spec, g, units_only=True):
                if m.up.get(f) == g:
                    graph.add_edge(f, g)
                else:
                    graph.add_edge(g, f)
    return nx.is_directed_acyclic_graph(graph)


def pair_rule_matching(spec: ComplexSpec, limit: Optional[int] = None) -> MorseMatching:
    """
    Matching on ucel(n, w) given by the characteristic-p pair rule.

    Each cell is matched through its first offending block: a light leader
    pair is merged, a free block with a unit face is split into its least
    unit face. Only mutual partners are recorded.

    Raises:
        InvalidInputError: If spec is not an unordered complex
        SizeLimitError: If the complex exceeds the cell ceiling
    """
    if spec.kind is not ComplexKind.UNORDERED:
        raise InvalidInputError(f"pair_rule_matching needs an unordered complex, got {spec.label()}")
    _guard(spec, limit)
    p = spec.characteristic
    matching = MorseMatching(spec)
    for dim in range(spec.n):
        matching.cells[dim] = sorted(enumerate_cells(spec, dim), key=cell_key(spec))
    for cells in matching.cells.values():
        for cell in cells:
            partner = unordered_partner(cell.composition, spec.w, p)
            if partner is None or partner[0] != UP:
                continue
            coface = UCell(partner[1])
            back = unordered_partner(coface.composition, spec.w, p)
            if back is not None and back[1] == cell.composition:
                matching.up[cell] = coface
                matching.down[coface] = cell
    logger.debug("Pair-rule matching on %s pairs %d cells", spec.label(), 2 * len(matching.up))
    return matching


def matching_for(spec: ComplexSpec, limit: Optional[int] = None) -> MorseMatching:
    """The family's matching: order-induced for strip and weighted, pair rule for unordered."""
    if spec.kind is ComplexKind.UNORDERED:
        return pair_rule_matching(spec, limit)
    return matching_from_order(spec, limit=limit)


def critical_cells_from_order(spec: ComplexSpec, limit: Optional[int] = None) -> Dict[int, int]:
    """Critical cell counts of the explicit matching, for cross-checking the enumerators."""
    return matching_for(spec, limit).critical_counts()


def unordered_cell_order(f: UCell, g: UCell, p: int) -> int:
    """Returns -1, 0 or 1 as f precedes, equals or follows g in the characteristic-p order."""
    left, right = unordered_cell_key(f.composition, p), unordered_cell_key(g.composition, p)
    return (left > right) - (left < right)


# ----------- Weighted family ----------- #
def _weighted_critical(
    remaining: Tuple[int, ...], previous: Optional[int], weights: Tuple[int, ...], k: int
) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    if not remaining:
        yield ()
        return
    for leader in remaining:
        if previous is not None and leader > previous:
            continue
        rest = tuple(label for label in remaining if label != leader)
        for tail in _weighted_critical(rest, leader, weights, k):
            yield ((leader,),) + tail
        larger = tuple(label for label in rest if label > leader)
        for size in range(1, len(larger) + 1):
            for block in itertools.combinations(larger, size):
                weight = sum(weights[label - 1] for label in block)
                if weight > k or weights[leader - 1] + weight < k + 1:
                    continue
                chosen = set(block)
                others = tuple(label for label in rest if label not in chosen)
                for tail in _weighted_critical(others, None, weights, k):
                    yield ((leader,), block) + tail


def iter_critical_weighted(n: int, weights: Sequence[int], k: int) -> Iterator[PCell]:
    """
    Streams the critical cells of P(n, W, k) in the follower order.

    Raises:
        InvalidInputError: If the weights are not nondecreasing or do not match n
    """
    weights = tuple(weights)
    if len(weights) != n:
        raise InvalidInputError(f"Expected {n} weights, got {len(weights)}")
    if list(weights) != sorted(weights):
        raise InvalidInputError(f"Weights must be nondecreasing, got {weights}")
    if max(weights, default=0) > k:
        return
    for blocks in _weighted_critical(tuple(range(1, n + 1)), None, weights, k):
        yield PCell(blocks, weights)


def critical_cells_weighted(n: int, weights: Sequence[int], k: int, list_cells: bool = False) -> CriticalCellReport:
    report = CriticalCellReport(kind=ComplexKind.WEIGHTED.value, n=n, w_or_k=k)
    report.counts = {dim: 0 for dim in range(n)}
    listed: List[str] = []
    for cell in iter_critical_weighted(n, weights, k):
        report.counts[cell.dim] += 1
        if list_cells:
            listed.append(str(cell))
    if list_cells:
        report.cells = listed
    return report


# ----------- Strip family ----------- #
def iter_critical_strip(n: int, w: int) -> Iterator[Symbol]:
    """Streams the critical cells of cell(n, w), one per basis element."""
    for element in iter_basis_elements(n, w):
        yield critical_symbol(element)


def critical_cells_strip(
    n: int, w: int, mode: str = "count", list_cells: bool = False, workers: int = 1, degrees: Optional[Tuple[int, int]] = None
) -> CriticalCellReport:
    """
    Critical cells of cell(n, w) per dimension.

    Parameters:
        mode (str): "enumerate" streams basis elements, "count" slices the counted barcode
        list_cells (bool): keep the cells (enumerate mode only)
        degrees (Optional[Tuple[int, int]]): restrict count mode to these degrees

    Raises:
        InvalidInputError: If w < 1 or the mode is unknown
    """
    if w < 1:
        raise InvalidInputError(f"Strip width must be at least 1, got {w}")
    report = CriticalCellReport(kind=ComplexKind.STRIP.value, n=n, w_or_k=w)
    if mode == "count" and not list_cells:
        low, high = degrees if degrees is not None else (0, max(n - 1, 0))
        bars = barcode(n, (low, high), mode="count", workers=workers)
        report.counts = {dim: betti_at(n, w, dim, bars) for dim in range(low, min(high, n - 1) + 1)}
        return report
    if mode not in ("count", "enumerate"):
        raise InvalidInputError(f"Unknown mode {mode!r}")
    report.counts = {dim: 0 for dim in range(n)}
    listed: List[str] = []
    for cell in iter_critical_strip(n, w):
        report.counts[cell.dim] += 1
        if list_cells:
            listed.append(str(cell))
    if list_cells:
        report.cells = listed
    return report


# ----------- Unordered family ----------- #
def critical_cells_unordered(n: int, w: int, p: int, list_cells: bool = False) -> CriticalCellReport:
    """Critical cells of ucel(n, w) in characteristic p; counts come from the memoized recursion."""
    report = CriticalCellReport(kind=ComplexKind.UNORDERED.value, n=n, w_or_k=w, p=p)
    report.counts = critical_counts_unordered(n, w, p)
    if list_cells:
        report.cells = [str(UCell(composition)) for composition in iter_critical_unordered(n, w, p)]
    return report
