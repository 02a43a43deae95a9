"""
Module: snf_oracle
Component: Homology oracle
Purpose: Ground truth for every other module: integral homology by Smith
normal form, field homology by rank, and field persistence of the width
filtration by standard column reduction.

Description:
The oracle only relies on the complexes module (cells, faces, boundary
matrices). None of the Morse or basis machinery is used here, so agreement
between the two sides is a genuine check.

How it works:
1) smith_normal_form first pivots on ±1 entries, shortest columns first
   and sparsest pivot row within a column; each such pivot clears its
   column and removes one row and one column. The small remainder is
   handled by pivoting on an entry of least absolute value and clearing
   its row and column; a final gcd/lcm pass restores the divisibility
   chain. Python integers keep everything exact.
2) rank_mod_p runs the same ±1 elimination, which is unimodular and so
   preserves ranks in every characteristic, then reduces the remaining
   columns over F_p with modular inverses or over the rationals with
   Fraction.
3) persistent_homology_field orders all cells of cell(n, n) by (largest block,
   dimension, enumeration index) and runs the standard persistence
   reduction; a pair (i, j) becomes the bar [f(i), f(j)) when nonempty.

Initial State:
- None; every call builds the matrices it needs

Final State:
- Pure results

Exceptions handled:
- SizeLimitError: complexes above the configured cell ceiling, persistence
  above n = 6
- InvalidInputError: malformed triplet documents

Version: 0.1.0
Date: 2026-10-19

----------------------------------------------------------------------
Usage example:

from strip_homology.complexes import strip_complex
from strip_homology.snf_oracle import homology_Z

print(homology_Z(strip_complex(3, 2)).betti)    # {0: 1, 1: 7, 2: 0}
----------------------------------------------------------------------
"""

# ----------- Imports ----------- #
from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field
from tqdm import tqdm

from strip_homology import config
from strip_homology.complexes import (
    ComplexSpec,
    SparseBoundaryMatrix,
    boundary_matrix,
    canonical_cells,
    count_cells,
    faces,
    strip_complex,
    total_cells,
)
from strip_homology.errors import InvalidInputError, SizeLimitError
from strip_homology.persistence import Bar, Barcode

logger = logging.getLogger(__name__)

PERSISTENCE_LIMIT = 6


# ----------- Results ----------- #
class SNFResult(BaseModel):
    """Nonzero invariant factors d1 | d2 | ... and the rank."""

    invariant_factors: List[int] = Field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def torsion(self) -> List[int]:
        return [factor for factor in self.invariant_factors if factor > 1]

    def to_json(self) -> dict:
        return {"rank": self.rank, "invariant_factors": [str(factor) for factor in self.invariant_factors]}


class HomologySummary(BaseModel):
    """Betti numbers and torsion per degree; characteristic None means the integers."""

    complex: str
    characteristic: Optional[int] = None
    cells: Dict[int, int] = Field(default_factory=dict)
    betti: Dict[int, int] = Field(default_factory=dict)
    torsion: Dict[int, List[int]] = Field(default_factory=dict)

    @property
    def euler_consistent(self) -> bool:
        cells = sum((-1) ** dim * count for dim, count in self.cells.items())
        return cells == sum((-1) ** dim * b for dim, b in self.betti.items())

    @property
    def torsion_free(self) -> bool:
        return not any(self.torsion.values())

    def to_json(self) -> dict:
        return {
            "complex": self.complex,
            "characteristic": self.characteristic,
            "degrees": [
                {
                    "degree": degree,
                    "cells": str(self.cells.get(degree, 0)),
                    "betti": str(self.betti[degree]),
                    "torsion": [str(factor) for factor in self.torsion.get(degree, [])],
                }
                for degree in sorted(self.betti)
            ],
        }


# ----------- Smith normal form ----------- #
class _SparseWorkMatrix:
    """Row- and column-indexed copy of a sparse integer matrix, kept in sync."""

    def __init__(self, entries: Dict[Tuple[int, int], int]) -> None:
        self.rows: Dict[int, Dict[int, int]] = {}
        self.cols: Dict[int, Dict[int, int]] = {}
        for (row, col), value in entries.items():
            if value:
                self._set(row, col, value)

    def _set(self, row: int, col: int, value: int) -> None:
        if value:
            self.rows.setdefault(row, {})[col] = value
            self.cols.setdefault(col, {})[row] = value
            return
        if col in self.rows.get(row, {}):
            del self.rows[row][col]
            if not self.rows[row]:
                del self.rows[row]
            del self.cols[col][row]
            if not self.cols[col]:
                del self.cols[col]

    def add_row(self, target: int, source: int, factor: int) -> None:
        for col, value in list(self.rows.get(source, {}).items()):
            self._set(target, col, self.rows.get(target, {}).get(col, 0) + factor * value)

    def add_col(self, target: int, source: int, factor: int) -> None:
        for row, value in list(self.cols.get(source, {}).items()):
            self._set(row, target, self.cols.get(target, {}).get(row, 0) + factor * value)

    def pivot(self) -> Tuple[int, int, int]:
        best: Optional[Tuple[int, int, int]] = None
        for row, cols in self.rows.items():
            for col, value in cols.items():
                if best is None or abs(value) < abs(best[2]):
                    best = (row, col, value)
                    if abs(value) == 1:
                        return best
        return best

    def drop(self, row: int, col: int) -> None:
        self._set(row, col, 0)

    def delete_row(self, row: int) -> None:
        for col in self.rows.pop(row, {}):
            del self.cols[col][row]
            if not self.cols[col]:
                del self.cols[col]

    def eliminate_units(self) -> int:
        """
        Pivots on ±1 entries until none is left.

        Returns:
            int: the number of pivots, each an invariant factor 1
        """
        count = 0
        changed = True
        while changed:
            changed = False
            for col in sorted(self.cols, key=lambda c: (len(self.cols[c]), c)):
                entries = self.cols.get(col)
                if not entries:
                    continue
                units = [row for row, value in entries.items() if abs(value) == 1]
                if not units:
                    continue
                row = min(units, key=lambda r: (len(self.rows[r]), r))
                value = entries[row]
                for other, entry in list(entries.items()):
                    if other != row:
                        self.add_row(other, row, -entry * value)
                self.delete_row(row)
                count += 1
                changed = True
        return count


def _divisibility_chain(diagonal: List[int]) -> List[int]:
    factors = sorted(abs(value) for value in diagonal)
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            g = math.gcd(factors[i], factors[j])
            if g != factors[i]:
                factors[i], factors[j] = g, factors[i] * factors[j] // g
    return sorted(factors)


def smith_normal_form(m: SparseBoundaryMatrix) -> SNFResult:
    """
    Invariant factors of an integer matrix.

    Parameters:
        m (SparseBoundaryMatrix): integer entries (characteristic ignored)

    Returns:
        SNFResult: nonzero invariant factors in divisibility order
    """
    work = _SparseWorkMatrix(m.entries)
    units = work.eliminate_units()
    logger.debug("SNF of a %dx%d matrix: %d unit pivots, %d rows left", m.rows, m.cols, units, len(work.rows))
    diagonal: List[int] = []
    while work.rows:
        row, col, value = work.pivot()
        for other in [r for r in work.cols.get(col, {}) if r != row]:
            work.add_row(other, row, -(work.rows[other][col] // value))
        for other in [c for c in work.rows.get(row, {}) if c != col]:
            work.add_col(other, col, -(work.rows[row][other] // value))
        if work.cols.get(col) == {row: value} and work.rows.get(row) == {col: value}:
            diagonal.append(value)
            work.drop(row, col)
    return SNFResult(invariant_factors=[1] * units + _divisibility_chain(diagonal))


def sparse_from_dense(rows: Sequence[Sequence[int]], dim: int = 1) -> SparseBoundaryMatrix:
    """Wraps a dense integer matrix."""
    height = len(rows)
    width = len(rows[0]) if rows else 0
    entries = {(r, c): value for r, row in enumerate(rows) for c, value in enumerate(row) if value}
    return SparseBoundaryMatrix(dim, height, width, entries)


def smith_normal_form_triplets(text: str) -> SNFResult:
    """Smith normal form of a matrix in the sparse triplet format."""
    return smith_normal_form(SparseBoundaryMatrix.from_triplets(text))


# ----------- Field ranks ----------- #
def _field_ops(p: int):
    if p:
        return (lambda value: value % p), (lambda value: pow(value, -1, p))
    return (lambda value: value), (lambda value: 1 / Fraction(value))


def _reduce_column(column: Dict[int, object], pivots: Dict[int, Dict[int, object]], p: int) -> Dict[int, object]:
    normalize, inverse = _field_ops(p)
    while column:
        low = max(column)
        if low not in pivots:
            break
        other = pivots[low]
        factor = normalize(column[low] * inverse(other[low]))
        for row, value in other.items():
            updated = normalize(column.get(row, 0) - factor * value)
            if updated:
                column[row] = updated
            else:
                column.pop(row, None)
    return column


def _centered(value: int, p: int) -> int:
    if not p:
        return value
    value %= p
    return value - p if value > p // 2 else value


def rank_mod_p(m: SparseBoundaryMatrix, p: int) -> int:
    """Rank over F_p for a prime p, over the rationals for p = 0."""
    config.check_characteristic(p)
    work = _SparseWorkMatrix({key: _centered(value, p) for key, value in m.entries.items()})
    units = work.eliminate_units()
    normalize, _ = _field_ops(p)
    pivots: Dict[int, Dict[int, object]] = {}
    for col in sorted(work.cols):
        column = {row: normalize(value) for row, value in work.cols[col].items() if normalize(value)}
        column = _reduce_column(column, pivots, p)
        if column:
            pivots[max(column)] = column
    return units + len(pivots)


# ----------- Homology ----------- #
def _guard(spec: ComplexSpec, limit: Optional[int] = None) -> None:
    limit = limit if limit is not None else config.cell_limit()
    size = total_cells(spec)
    if size > limit:
        raise SizeLimitError(f"{spec.label()} has {size} cells, above the oracle limit {limit}")


def homology_Z(
    spec: ComplexSpec, workers: int = 1, progress: bool = False, limit: Optional[int] = None
) -> HomologySummary:
    """
    Integral homology of a complex.

    Parameters:
        limit (Optional[int]): cell ceiling; defaults to config.cell_limit()

    Raises:
        SizeLimitError: If the complex exceeds the configured cell ceiling
    """
    _guard(spec, limit)
    cells = {dim: count_cells(spec, dim) for dim in range(spec.n)}
    snf: Dict[int, SNFResult] = {}
    for dim in tqdm(range(1, spec.n), disable=not progress, desc="snf"):
        snf[dim] = smith_normal_form(boundary_matrix(spec, dim, characteristic=0, workers=workers))
    summary = HomologySummary(complex=spec.label(), cells=cells)
    for dim in range(spec.n):
        outgoing = snf[dim].rank if dim in snf else 0
        incoming = snf[dim + 1] if dim + 1 in snf else SNFResult()
        summary.betti[dim] = cells[dim] - outgoing - incoming.rank
        summary.torsion[dim] = incoming.torsion
    logger.info("homology_Z %s: %s", spec.label(), summary.betti)
    return summary


def homology_field(
    spec: ComplexSpec,
    p: Optional[int] = None,
    workers: int = 1,
    progress: bool = False,
    limit: Optional[int] = None,
) -> HomologySummary:
    """Homology over F_p (rationals for p = 0); p defaults to the complex's characteristic."""
    _guard(spec, limit)
    p = spec.characteristic if p is None else config.check_characteristic(p)
    cells = {dim: count_cells(spec, dim) for dim in range(spec.n)}
    ranks = {
        dim: rank_mod_p(boundary_matrix(spec, dim, characteristic=p, workers=workers), p)
        for dim in tqdm(range(1, spec.n), disable=not progress, desc="rank")
    }
    summary = HomologySummary(complex=spec.label(), characteristic=p, cells=cells)
    for dim in range(spec.n):
        summary.betti[dim] = cells[dim] - ranks.get(dim, 0) - ranks.get(dim + 1, 0)
    return summary


# ----------- Persistence ----------- #
def persistent_homology_field(n: int, p: int = 0, progress: bool = False) -> Barcode:
    """
    Barcode of the width filtration cell(n, 1) ⊆ ... ⊆ cell(n, n) over a field.

    Parameters:
        n (int): number of disks, at most PERSISTENCE_LIMIT
        p (int): 0 for the rationals or a prime

    Raises:
        SizeLimitError: If n > PERSISTENCE_LIMIT
    """
    config.check_characteristic(p)
    if n > PERSISTENCE_LIMIT:
        raise SizeLimitError(f"persistent_homology_field refuses n={n} > {PERSISTENCE_LIMIT}")
    bars = Barcode(n)
    if n < 1:
        return bars
    spec = strip_complex(n, n)
    ordered = []
    for dim in range(n):
        for position, cell in enumerate(canonical_cells(spec, dim)):
            ordered.append((max(len(block) for block in cell.blocks), dim, position, cell))
    ordered.sort(key=lambda item: item[:3])
    index = {item[3]: i for i, item in enumerate(ordered)}
    normalize, _ = _field_ops(p)

    pivots: Dict[int, Dict[int, object]] = {}
    paired = set()
    for j, (value, dim, _, cell) in enumerate(tqdm(ordered, disable=not progress, desc="reduce")):
        column = {}
        for face, coeff in faces(spec, cell):
            entry = normalize(coeff)
            if entry:
                column[index[face]] = entry
        column = _reduce_column(column, pivots, p)
        if not column:
            continue
        low = max(column)
        pivots[low] = column
        paired.update((low, j))
        birth = ordered[low][0]
        if birth < value:
            bars.add(Bar(ordered[low][1], birth, value))
    for i, (value, dim, _, _) in enumerate(ordered):
        if i not in paired:
            bars.add(Bar(dim, value, None))
    logger.info("Oracle persistence n=%d p=%d: %d distinct bars", n, p, len(bars))
    return bars
