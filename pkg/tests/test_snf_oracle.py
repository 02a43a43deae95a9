import random

import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_smith_normal_form

from strip_homology.complexes import strip_complex, unordered_complex, weighted_complex
from strip_homology.errors import InvalidInputError, SizeLimitError
from strip_homology.morse import critical_cells_strip
from strip_homology.persistence import barcode
from strip_homology.snf_oracle import (
    homology_field,
    homology_Z,
    persistent_homology_field,
    rank_mod_p,
    smith_normal_form,
    smith_normal_form_triplets,
    sparse_from_dense,
)


@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [1, 1, 1]),
        ([[2, 0], [0, 6]], [2, 6]),
        ([[2, 4], [6, 8]], [2, 4]),
        ([[4, 0], [0, 6]], [2, 12]),
        ([[0, 0], [0, 0]], []),
    ],
)
def test_invariant_factors(rows, expected):
    assert smith_normal_form(sparse_from_dense(rows)).invariant_factors == expected


def _sympy_factors(rows):
    diagonal = sympy_smith_normal_form(Matrix(rows), domain=ZZ)
    return sorted(abs(int(diagonal[i, i])) for i in range(min(diagonal.shape)) if diagonal[i, i] != 0)


@pytest.mark.parametrize("seed", range(8))
def test_agrees_with_sympy(seed):
    rng = random.Random(seed)
    size = rng.randint(2, 5)
    rows = [[rng.choice([0, 0, 1, -1, 2, 3, -4, 6]) for _ in range(size)] for _ in range(size)]
    assert smith_normal_form(sparse_from_dense(rows)).invariant_factors == _sympy_factors(rows)


def test_triplet_input():
    result = smith_normal_form_triplets("1 2 2 2\n0 0 2\n1 1 6\n")
    assert result.invariant_factors == [2, 6]
    assert result.to_json() == {"rank": 2, "invariant_factors": ["2", "6"]}
    assert result.torsion == [2, 6]


def test_field_ranks():
    m = sparse_from_dense([[2, 0], [0, 3]])
    assert rank_mod_p(m, 0) == 2
    assert rank_mod_p(m, 2) == 1
    assert rank_mod_p(m, 3) == 1
    assert rank_mod_p(m, 5) == 2
    with pytest.raises(InvalidInputError):
        rank_mod_p(m, 4)


def test_integral_homology_of_cell_3_2():
    summary = homology_Z(strip_complex(3, 2))
    assert summary.betti == {0: 1, 1: 7, 2: 0}
    assert summary.torsion_free
    assert summary.euler_consistent


@pytest.mark.parametrize("spec", [strip_complex(4, 2), strip_complex(4, 3), weighted_complex((1, 1, 1, 1), 2)])
def test_strip_and_weighted_homology_is_torsion_free(spec):
    summary = homology_Z(spec)
    assert summary.torsion_free
    assert summary.euler_consistent
    assert homology_field(spec, 2).betti == summary.betti


def test_unordered_homology_depends_on_characteristic():
    spec = unordered_complex(4, 4)
    rational = homology_field(spec, 0).betti
    mod_two = homology_field(spec, 2).betti
    assert rational != mod_two
    assert homology_field(unordered_complex(4, 4, 2)).characteristic == 2


def test_oracle_respects_cell_limit(monkeypatch):
    monkeypatch.setenv("STRIP_HOMOLOGY_CELL_LIMIT", "20")
    with pytest.raises(SizeLimitError):
        homology_Z(strip_complex(4, 3))


def test_explicit_cell_limit_overrides_environment(monkeypatch):
    monkeypatch.delenv("STRIP_HOMOLOGY_CELL_LIMIT", raising=False)
    with pytest.raises(SizeLimitError):
        homology_Z(strip_complex(4, 3), limit=20)
    with pytest.raises(SizeLimitError):
        homology_field(unordered_complex(6, 6, 2), limit=10)
    monkeypatch.setenv("STRIP_HOMOLOGY_CELL_LIMIT", "20")
    assert homology_Z(strip_complex(4, 3), limit=1000).betti[0] == 1


@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[1, 2], [3, 4]], [1, 2]),
        ([[1, 1, 0], [0, 2, 2], [-1, 0, 4]], [1, 1, 6]),
        ([[-1, 0], [0, 0]], [1]),
    ],
)
def test_unit_pivots_keep_the_invariant_factors(rows, expected):
    assert smith_normal_form(sparse_from_dense(rows)).invariant_factors == expected
    assert _sympy_factors(rows) == expected


@pytest.mark.parametrize("seed", range(8))
def test_rational_rank_agrees_with_sympy(seed):
    rng = random.Random(100 + seed)
    height, width = rng.randint(2, 6), rng.randint(2, 6)
    rows = [[rng.choice([0, 0, 0, 1, -1, 2, 3, -5]) for _ in range(width)] for _ in range(height)]
    assert rank_mod_p(sparse_from_dense(rows), 0) == Matrix(rows).rank()


@pytest.mark.parametrize("seed", range(4))
def test_modular_rank_agrees_with_reduced_matrix(seed):
    rng = random.Random(200 + seed)
    rows = [[rng.choice([0, 1, -1, 2, 3, 4]) for _ in range(5)] for _ in range(5)]
    for p in (2, 3, 5):
        factors = smith_normal_form(sparse_from_dense(rows)).invariant_factors
        assert rank_mod_p(sparse_from_dense(rows), p) == sum(1 for factor in factors if factor % p)


@pytest.mark.parametrize("w", range(1, 6))
def test_strip_oracle_matches_critical_cells(w):
    assert homology_Z(strip_complex(5, w)).betti == critical_cells_strip(5, w, mode="enumerate").counts


@pytest.mark.slow
@pytest.mark.parametrize("w", range(1, 7))
def test_strip_oracle_matches_critical_cells_on_six_disks(w):
    report = homology_Z(strip_complex(6, w))
    assert report.betti == critical_cells_strip(6, w, mode="enumerate").counts
    assert report.torsion_free


def test_reduction_barcode_of_three_disks():
    bars = persistent_homology_field(3).restrict([0, 1])
    assert bars.bars == {
        (0, 1, 2): 5,
        (0, 1, None): 1,
        (1, 2, 3): 4,
        (1, 2, None): 3,
    }


def test_reduction_barcode_of_two_disks():
    assert persistent_homology_field(2).bars == {(0, 1, 2): 1, (0, 1, None): 1, (1, 2, None): 1}


@pytest.mark.parametrize("n, p", [(3, 0), (4, 0), (4, 2), (5, 3)])
def test_reduction_barcode_matches_counting(n, p):
    assert persistent_homology_field(n, p) == barcode(n)


@pytest.mark.slow
@pytest.mark.parametrize("p", [0, 2])
def test_reduction_barcode_matches_counting_on_six_disks(p):
    assert persistent_homology_field(6, p) == barcode(6)


def test_reduction_barcode_has_a_ceiling():
    with pytest.raises(SizeLimitError):
        persistent_homology_field(7)
