"""
Module: persistence
Component: Persistence barcodes over strip width
Purpose: Barcode of PH_*(config(n, *)) read off basis elements, by streaming
enumeration for small n and by shape counting for large n, plus the
structural checks on bar lengths.

Description:
Every basis element is born at the first width where all of its wheels and
filters are valid and dies at the least filter total. The barcode is the
multiset of (degree, birth, death) over all basis elements.

How it works:
1) Enumerate mode
   - Streams iter_basis_elements(n) with no width, sharded by leading factor
     over a process pool; each element contributes bar_of(element).
2) Count mode
   - Aggregates labeled tadpole and tail tables: a cell is a sequence of
     tadpoles followed by a tail, degrees add, births take the maximum and
     deaths the minimum; binomials distribute the labels.
3) Checks
   - check_barlength flags finite bars with death > 2·birth and finite bars
     in the stable range j < birth - 1.

Initial State:
- No barcode

Final State:
- Barcode with exact multiplicities

Exceptions handled:
- SizeLimitError: enumerate mode above ENUMERATE_LIMIT
- InvalidInputError: malformed degree ranges

Version: 0.1.0
Date: 2026-10-19

----------------------------------------------------------------------
Usage example:

from strip_homology.persistence import barcode

bars = barcode(12, (1, 1))
print(bars.to_json())
----------------------------------------------------------------------
"""

# ----------- Imports ----------- #
from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from multiprocessing import get_context
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Tuple

from pydantic import BaseModel, Field
from tqdm import tqdm

from strip_homology.basis_cycles import BasisElement, Factor, first_factors, iter_basis_elements
from strip_homology.betti_formula import BarKey, tadpole_table, tail_table
from strip_homology.errors import InvalidInputError, SizeLimitError

logger = logging.getLogger(__name__)

ENUMERATE_LIMIT = 8


# ----------- Bars ----------- #
class Bar(NamedTuple):
    """Half-open interval [birth, death) in one degree; death None is infinity."""

    degree: int
    birth: int
    death: Optional[int]

    def alive_at(self, w: int) -> bool:
        return self.birth <= w and (self.death is None or w < self.death)

    def __str__(self) -> str:
        end = "∞" if self.death is None else str(self.death)
        return f"[{self.birth}, {end})"


def _bar_sort_key(bar: Bar) -> Tuple[int, int, float]:
    return (bar.degree, bar.birth, math.inf if bar.death is None else bar.death)


@dataclass
class Barcode:
    """Multiset of bars with arbitrary-precision multiplicities."""

    n: int
    bars: Dict[Bar, int] = field(default_factory=dict)

    def add(self, bar: Bar, multiplicity: int = 1) -> None:
        if multiplicity <= 0:
            return
        self.bars[bar] = self.bars.get(bar, 0) + multiplicity

    def merge(self, other: "Barcode") -> None:
        for bar, multiplicity in other.bars.items():
            self.add(bar, multiplicity)

    def items(self) -> List[Tuple[Bar, int]]:
        return sorted(self.bars.items(), key=lambda item: _bar_sort_key(item[0]))

    def degrees(self) -> List[int]:
        return sorted({bar.degree for bar in self.bars})

    def restrict(self, degrees: Iterable[int]) -> "Barcode":
        keep = set(degrees)
        return Barcode(self.n, {bar: m for bar, m in self.bars.items() if bar.degree in keep})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Barcode) and self.bars == other.bars

    def __len__(self) -> int:
        return len(self.bars)

    def to_json(self) -> List[Dict[str, object]]:
        rows = []
        for bar, multiplicity in self.items():
            row: Dict[str, object] = {"degree": bar.degree, "birth": bar.birth}
            if bar.death is not None:
                row["death"] = bar.death
            row["multiplicity"] = str(multiplicity)
            rows.append(row)
        return rows

    def to_rows(self) -> List[List[str]]:
        return [
            [str(bar.degree), str(bar.birth), "" if bar.death is None else str(bar.death), str(multiplicity)]
            for bar, multiplicity in self.items()
        ]


def bar_of(b: BasisElement) -> Bar:
    """
    Bar of one basis element.

    birth = max(largest wheel, max over filters of total - least wheel size);
    death = least filter total, or infinity without filters.
    """
    return Bar(b.degree, b.birth, b.death)


# ----------- Degree ranges ----------- #
def parse_degrees(text: str) -> Tuple[int, int]:
    """Parses "a..b" or "a" into an inclusive range."""
    try:
        if ".." in text:
            low, high = (int(part) for part in text.split("..", 1))
        else:
            low = high = int(text)
    except ValueError as err:
        raise InvalidInputError(f"Degree range must look like a..b, got {text!r}") from err
    return check_degrees((low, high))


def check_degrees(degrees: Tuple[int, int]) -> Tuple[int, int]:
    low, high = degrees
    if low < 0 or high < low:
        raise InvalidInputError(f"Invalid degree range {low}..{high}")
    return degrees


# ----------- Enumerate mode ----------- #
def _shard_bars(job: Tuple[int, Factor, Tuple[int, int]]) -> Dict[Bar, int]:
    n, head, (low, high) = job
    counts: Dict[Bar, int] = defaultdict(int)
    for element in iter_basis_elements(n, None, None, head):
        if low <= element.degree <= high:
            counts[bar_of(element)] += 1
    return dict(counts)


def _barcode_enumerate(n: int, degrees: Tuple[int, int], workers: int, progress: bool) -> Barcode:
    if n > ENUMERATE_LIMIT:
        raise SizeLimitError(f"Enumerate mode refuses n={n} > {ENUMERATE_LIMIT}; use count mode")
    result = Barcode(n)
    if n == 0:
        return result
    jobs = [(n, head, degrees) for head in first_factors(n)]
    if workers > 1 and len(jobs) > 1:
        with get_context("spawn").Pool(workers) as pool:
            partials = list(tqdm(pool.imap(_shard_bars, jobs), total=len(jobs), disable=not progress))
    else:
        partials = [_shard_bars(job) for job in tqdm(jobs, disable=not progress)]
    for partial in partials:
        for bar, multiplicity in partial.items():
            result.add(bar, multiplicity)
    return result


# ----------- Count mode ----------- #
def _min_death(d1: Optional[int], d2: Optional[int]) -> Optional[int]:
    if d1 is None:
        return d2
    if d2 is None:
        return d1
    return min(d1, d2)


def _combine(left: Dict[BarKey, int], right: Dict[BarKey, int], weight: int, max_degree: int) -> Iterator[Tuple[BarKey, int]]:
    for (d1, b1, e1), m1 in left.items():
        for (d2, b2, e2), m2 in right.items():
            degree = d1 + d2
            if degree > max_degree:
                continue
            birth = max(b1, b2)
            death = _min_death(e1, e2)
            if death is not None and birth >= death:
                continue
            yield (degree, birth, death), weight * m1 * m2


def _tables(size: int) -> Tuple[int, Dict[BarKey, int], Dict[BarKey, int]]:
    return size, tadpole_table(size), tail_table(size)


def _barcode_count(n: int, degrees: Tuple[int, int], workers: int, progress: bool) -> Barcode:
    sizes = range(n + 1)
    if workers > 1 and n > 1:
        with get_context("spawn").Pool(workers) as pool:
            rows = list(tqdm(pool.imap(_tables, sizes), total=n + 1, disable=not progress))
    else:
        rows = [_tables(size) for size in tqdm(sizes, disable=not progress)]
    tadpoles = {size: table for size, table, _ in rows}
    tails = {size: table for size, _, table in rows}
    max_degree = degrees[1]

    sequences: List[Dict[BarKey, int]] = [{(0, 0, None): 1}]
    for m in range(1, n + 1):
        current: Dict[BarKey, int] = defaultdict(int)
        for i in range(2, m + 1):
            for key, value in _combine(tadpoles[i], sequences[m - i], math.comb(m, i), max_degree):
                current[key] += value
        sequences.append(dict(current))

    totals: Dict[BarKey, int] = defaultdict(int)
    for i in range(n + 1):
        for key, value in _combine(sequences[i], tails[n - i], math.comb(n, i), max_degree):
            totals[key] += value
    result = Barcode(n)
    for (degree, birth, death), multiplicity in totals.items():
        if degree >= degrees[0]:
            result.add(Bar(degree, birth, death), multiplicity)
    return result


def barcode(
    n: int,
    degrees: Optional[Tuple[int, int]] = None,
    mode: str = "count",
    workers: int = 1,
    progress: bool = False,
) -> Barcode:
    """
    Barcode of PH_*(config(n, *)).

    Parameters:
        n (int): number of disks
        degrees (Optional[Tuple[int, int]]): inclusive degree range, default all
        mode (str): "enumerate" streams basis elements, "count" aggregates shapes
        workers (int): process pool size
        progress (bool): show a tqdm bar on stderr

    Returns:
        Barcode: identical in both modes wherever both run

    Raises:
        SizeLimitError: enumerate mode above ENUMERATE_LIMIT
        InvalidInputError: invalid mode or degree range
    """
    if n < 0:
        raise InvalidInputError(f"n must be nonnegative, got {n}")
    degrees = check_degrees(degrees if degrees is not None else (0, max(n - 1, 0)))
    if mode == "enumerate":
        result = _barcode_enumerate(n, degrees, workers, progress)
    elif mode == "count":
        result = _barcode_count(n, degrees, workers, progress)
    else:
        raise InvalidInputError(f"Unknown barcode mode {mode!r}")
    logger.info("Barcode n=%d degrees=%s mode=%s: %d distinct bars", n, degrees, mode, len(result))
    return result


# ----------- Slices and checks ----------- #
def betti_at(n: int, w: int, j: int, bars: Optional[Barcode] = None) -> int:
    """Number of degree-j bars alive at w, computing the barcode if needed."""
    bars = bars if bars is not None else barcode(n, (j, j))
    return sum(m for bar, m in bars.bars.items() if bar.degree == j and bar.alive_at(w))


def barcode_totals(bars: Barcode) -> Dict[int, List[int]]:
    """Betti table per degree for w = 1..n."""
    return {
        degree: [betti_at(bars.n, w, degree, bars) for w in range(1, bars.n + 1)]
        for degree in bars.degrees()
    }


class BarlengthReport(BaseModel):
    checked: int = 0
    violations: List[str] = Field(default_factory=list)
    unstable: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations and not self.unstable


def check_barlength(bars: Barcode) -> BarlengthReport:
    """
    Flags finite bars that outlive twice their birth, and finite bars born at
    w in a degree j < w - 1 where homology is already stable.
    """
    report = BarlengthReport()
    for bar, multiplicity in bars.items():
        report.checked += 1
        if bar.death is None:
            continue
        if bar.death > 2 * bar.birth:
            report.violations.append(f"degree {bar.degree} bar {bar} ×{multiplicity} dies after {2 * bar.birth}")
        if bar.degree < bar.birth - 1:
            report.unstable.append(f"degree {bar.degree} bar {bar} ×{multiplicity} is finite in the stable range")
    return report


def persisting_fraction(n: int, w: int, j: int, bars: Optional[Barcode] = None) -> Fraction:
    """Share of degree-j bars alive at w that are still alive at w + 1; 1 when none are alive."""
    bars = bars if bars is not None else barcode(n, (j, j))
    alive = betti_at(n, w, j, bars)
    if alive == 0:
        return Fraction(1)
    persisting = sum(m for bar, m in bars.bars.items() if bar.degree == j and bar.alive_at(w) and bar.alive_at(w + 1))
    return Fraction(persisting, alive)


def persisting_candidates(n: int, w: int, j: int) -> int:
    """Basis elements alive at w whose filters hold only wheels of at least two labels."""
    return sum(
        1
        for element in iter_basis_elements(n, w, j)
        if all(wheel.size >= 2 for filt in element.filters for wheel in filt.wheels)
    )


def persisting_upper_bound(n: int, j: int) -> int:
    """C(n, 2j)·(2j)!·2^(2j-1): symbols ending in at least n - 2j descending singletons."""
    if j == 0:
        return 1
    return math.comb(n, 2 * j) * math.factorial(2 * j) * 2 ** (2 * j - 1)
