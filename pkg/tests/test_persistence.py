import math
from fractions import Fraction

import pytest

from strip_homology.errors import InvalidInputError, SizeLimitError
from strip_homology.persistence import (
    Bar,
    Barcode,
    barcode,
    barcode_totals,
    betti_at,
    check_barlength,
    parse_degrees,
    persisting_candidates,
    persisting_fraction,
    persisting_upper_bound,
)


def _bars(bars):
    return dict(bars.restrict([0, 1]).bars)


def test_barcode_of_three_disks():
    bars = barcode(3)
    assert _bars(bars) == {
        Bar(0, 1, 2): 5,
        Bar(0, 1, None): 1,
        Bar(1, 2, 3): 4,
        Bar(1, 2, None): 3,
    }
    assert bars.bars[Bar(2, 3, None)] == 2


def test_barcode_of_two_disks():
    assert barcode(2).bars == {Bar(0, 1, 2): 1, Bar(0, 1, None): 1, Bar(1, 2, None): 1}


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_modes_agree(n):
    assert barcode(n, mode="enumerate") == barcode(n, mode="count")


def test_enumerate_mode_is_parallel_safe():
    assert barcode(5, mode="enumerate", workers=2) == barcode(5, mode="enumerate", workers=1)


def test_enumerate_mode_has_a_ceiling():
    with pytest.raises(SizeLimitError):
        barcode(9, mode="enumerate")


def test_betti_slices():
    bars = barcode(3)
    assert [betti_at(3, 2, j, bars) for j in range(3)] == [1, 7, 0]
    assert barcode_totals(bars)[0] == [6, 1, 1]


def test_total_bars_in_degree_zero_count_orderings():
    bars = barcode(5, (0, 0))
    assert sum(m for bar, m in bars.bars.items() if bar.alive_at(1)) == math.factorial(5)


def test_persisting_fraction():
    assert persisting_fraction(3, 2, 1) == Fraction(3, 7)
    assert persisting_fraction(3, 1, 1) == Fraction(1)


def test_persisting_candidates_bound_the_exact_count():
    bars = barcode(5, (1, 1))
    alive = betti_at(5, 2, 1, bars)
    persisting = persisting_fraction(5, 2, 1, bars) * alive
    assert persisting <= persisting_candidates(5, 2, 1) <= alive


def test_persisting_upper_bound():
    assert persisting_upper_bound(10, 0) == 1
    assert persisting_upper_bound(4, 1) == 6 * 2 * 2


def test_barlength_flags_long_bars():
    bars = Barcode(6)
    bars.add(Bar(2, 2, 5))
    report = check_barlength(bars)
    assert not report.passed
    assert len(report.violations) == 1


@pytest.mark.parametrize("n", range(1, 9))
def test_barlength_holds_up_to_eight_disks(n):
    assert check_barlength(barcode(n)).passed


@pytest.mark.slow
@pytest.mark.parametrize("n", range(9, 13))
def test_barlength_holds_up_to_twelve_disks(n):
    assert check_barlength(barcode(n)).passed


def test_serialization_omits_infinite_death():
    rows = barcode(2).to_json()
    assert {"degree": 1, "birth": 2, "multiplicity": "1"} in rows
    assert ["0", "1", "2", "1"] in barcode(2).to_rows()


def test_degree_parsing():
    assert parse_degrees("0..3") == (0, 3)
    assert parse_degrees("2") == (2, 2)
    for text in ("3..1", "a..b", "-1"):
        with pytest.raises(InvalidInputError):
            parse_degrees(text)


def test_unknown_mode():
    with pytest.raises(InvalidInputError):
        barcode(3, mode="fast")


@pytest.mark.slow
def test_twelve_disk_anchors():
    bars = barcode(12, (0, 2))
    assert dict(bars.restrict([0]).bars) == {Bar(0, 1, 2): 479001599, Bar(0, 1, None): 1}
    assert dict(bars.restrict([1]).bars) == {Bar(1, 2, 3): 114621, Bar(1, 2, None): 66}
    assert dict(bars.restrict([2]).bars) == {
        Bar(2, 2, 3): 45412532,
        Bar(2, 2, 4): 1485,
        Bar(2, 2, None): 1485,
        Bar(2, 3, 4): 560779,
        Bar(2, 3, None): 440,
    }


@pytest.mark.slow
def test_twelve_disk_top_degree():
    bars = barcode(12, (11, 11))
    assert bars.bars == {Bar(11, 12, None): math.factorial(11)}
