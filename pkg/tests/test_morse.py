import itertools

import pytest

from strip_homology.complexes import UCell, faces, strip_complex, unordered_complex, weighted_complex
from strip_homology.core_symbols import layer_permutation, split_into_wheels, wheel_contraction, wheel_rank_order
from strip_homology.errors import InvalidInputError, SizeLimitError
from strip_homology.morse import (
    critical_cells_from_order,
    critical_cells_strip,
    critical_cells_weighted,
    iter_critical_weighted,
    matching_for,
    matching_from_order,
    pair_rule_matching,
    unordered_cell_order,
    verify_gradient,
)
from strip_homology.snf_oracle import homology_Z
from strip_homology.unordered import critical_counts_unordered, iter_critical_unordered


def test_hexagon_matching():
    spec = weighted_complex((1, 1, 1), 2)
    matching = matching_from_order(spec)
    assert sorted(str(cell) for cell in matching.critical()) == ["1 | 2 3", "3 | 2 | 1"]
    assert verify_gradient(matching)
    assert matching.critical_counts() == {0: 1, 1: 1, 2: 0}


def test_corrupted_matching_is_rejected():
    spec = weighted_complex((1, 1, 1), 2)
    matching = matching_from_order(spec)
    f, g = next(iter(matching.up.items()))
    matching.down[g] = next(cell for cell in matching.cells[0] if cell != f)
    assert not verify_gradient(matching)


def test_gradient_check_refuses_large_complexes():
    matching = matching_from_order(strip_complex(3, 2))
    matching.spec = strip_complex(8, 2)
    with pytest.raises(SizeLimitError):
        verify_gradient(matching)


@pytest.mark.parametrize("spec", [strip_complex(4, 2), strip_complex(4, 3), weighted_complex((1, 1, 2, 2), 3)])
def test_order_matching_is_gradient(spec):
    assert verify_gradient(matching_from_order(spec))


@pytest.mark.parametrize("n, w", [(3, 2), (4, 2), (4, 3), (5, 2)])
def test_strip_order_matches_enumeration(n, w):
    direct = critical_cells_strip(n, w, mode="enumerate").counts
    assert critical_cells_from_order(strip_complex(n, w)) == direct


@pytest.mark.parametrize("n, w", [(3, 2), (4, 3), (5, 3)])
def test_count_mode_matches_enumeration(n, w):
    assert critical_cells_strip(n, w, mode="count").counts == critical_cells_strip(n, w, mode="enumerate").counts


@pytest.mark.parametrize("n, w", [(3, 2), (4, 2), (4, 3)])
def test_strip_critical_cells_are_betti_numbers(n, w):
    assert critical_cells_strip(n, w).counts == homology_Z(strip_complex(n, w)).betti


def test_cell_3_2_report():
    report = critical_cells_strip(3, 2, mode="enumerate", list_cells=True)
    assert report.counts == {0: 1, 1: 7, 2: 0}
    assert len(report.cells) == 8
    assert report.to_rows()[1] == ["strip", "3", "2", "0", "1", "7"]


@pytest.mark.parametrize(
    "weights, k",
    [((1, 1, 1, 1), 2), ((1, 1, 2, 2), 3), ((1, 2), 2), ((1, 1, 1, 2, 3), 4)],
)
def test_weighted_enumeration_matches_order(weights, k):
    report = critical_cells_weighted(len(weights), weights, k)
    assert report.counts == critical_cells_from_order(weighted_complex(weights, k))


def test_weights_one_two_threshold_two():
    report = critical_cells_weighted(2, (1, 2), 2, list_cells=True)
    assert report.counts == {0: 2, 1: 0}


def test_weighted_requires_sorted_weights():
    with pytest.raises(InvalidInputError):
        list(iter_critical_weighted(3, (2, 1, 1), 3))


@pytest.mark.parametrize("n", range(2, 8))
@pytest.mark.parametrize("w", range(1, 5))
@pytest.mark.parametrize("p", [0, 2, 3, 5])
def test_unordered_pair_rule_matching_agrees_with_enumeration(n, w, p):
    spec = unordered_complex(n, w, p)
    matching = pair_rule_matching(spec)
    assert verify_gradient(matching)
    for f, g in matching.up.items():
        assert f in {face for face, _ in faces(spec, g, units_only=True)}
    expected = critical_counts_unordered(n, w, p)
    assert matching.critical_counts() == expected
    assert critical_cells_from_order(spec) == expected
    critical = {cell.composition for cell in matching.critical()}
    assert critical == set(iter_critical_unordered(n, w, p))


def test_blocked_cell_survives_the_matching():
    matching = pair_rule_matching(unordered_complex(6, 4, 3))
    assert matching.is_critical(UCell((2, 4)))
    assert matching.partner(UCell((2, 2, 2))) is not None


def test_pair_rule_matching_needs_an_unordered_complex():
    with pytest.raises(InvalidInputError):
        pair_rule_matching(strip_complex(3, 2))


def test_matching_for_dispatches_on_kind():
    assert matching_for(strip_complex(3, 2)).critical_counts() == matching_from_order(strip_complex(3, 2)).critical_counts()
    unordered = matching_for(unordered_complex(5, 3, 2))
    assert unordered.critical_counts() == critical_counts_unordered(5, 3, 2)


def test_explicit_limit_refuses_matching(monkeypatch):
    monkeypatch.delenv("STRIP_HOMOLOGY_CELL_LIMIT", raising=False)
    with pytest.raises(SizeLimitError):
        matching_from_order(strip_complex(4, 3), limit=20)
    with pytest.raises(SizeLimitError):
        critical_cells_from_order(unordered_complex(8, 4, 3), limit=10)


@pytest.mark.parametrize("n", range(2, 6))
@pytest.mark.parametrize("w", range(1, 5))
def test_strip_layers_contract_to_weighted_critical_cells(n, w):
    critical = matching_from_order(strip_complex(n, w)).critical()
    for sigma in itertools.permutations(range(1, n + 1)):
        layer = {wheel_contraction(cell) for cell in critical if layer_permutation(cell) == sigma}
        wheels = wheel_rank_order(split_into_wheels(sigma))
        weights = tuple(len(wheel) for wheel in wheels)
        contracted = {(cell.blocks, weights) for cell in iter_critical_weighted(len(weights), weights, w)}
        assert layer == contracted


def test_unordered_cell_order():
    assert unordered_cell_order(UCell((1, 2)), UCell((1, 2)), 0) == 0
    # a follower sorts below a non-follower at the first difference
    assert unordered_cell_order(UCell((1, 2, 1)), UCell((1, 1, 2)), 0) == -1
