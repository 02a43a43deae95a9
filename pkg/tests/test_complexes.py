import pytest

from strip_homology.complexes import (
    ComplexKind,
    SparseBoundaryMatrix,
    UCell,
    boundary_matrix,
    canonical_cells,
    cofaces,
    count_cells,
    enumerate_cells,
    euler_characteristic,
    faces,
    strip_complex,
    total_cells,
    unordered_complex,
    unordered_face_coefficient,
    weighted_complex,
)
from strip_homology.core_symbols import Symbol
from strip_homology.errors import InvalidInputError, SizeLimitError


def test_cell_3_2_counts():
    spec = strip_complex(3, 2)
    assert count_cells(spec, 0) == 6
    assert count_cells(spec, 1) == 12
    assert count_cells(spec, 2) == 0
    assert euler_characteristic(spec) == -6


@pytest.mark.parametrize("spec", [strip_complex(4, 2), weighted_complex((1, 1, 2, 2), 3), unordered_complex(6, 3)])
def test_enumeration_matches_counts(spec):
    for dim in range(spec.n):
        cells = list(enumerate_cells(spec, dim))
        assert len(cells) == count_cells(spec, dim)
        assert len(set(cells)) == len(cells)


def test_shards_partition_the_cells():
    spec = strip_complex(4, 3)
    assert sorted(canonical_cells(spec, 1), key=str) == sorted(enumerate_cells(spec, 1), key=str)


def test_dimension_out_of_range_is_empty():
    spec = strip_complex(3, 2)
    assert list(enumerate_cells(spec, 5)) == []
    assert count_cells(spec, -1) == 0


@pytest.mark.parametrize(
    "m, k, expected",
    [(4, 2, 2), (4, 1, 0), (5, 1, -1), (5, 2, 2), (6, 2, 3), (2, 1, 0), (3, 1, -1)],
)
def test_unordered_face_coefficients(m, k, expected):
    assert unordered_face_coefficient(m, k) == expected


def test_unordered_face_coefficient_rejects_degenerate_split():
    with pytest.raises(InvalidInputError):
        unordered_face_coefficient(4, 4)


@pytest.mark.parametrize(
    "spec",
    [strip_complex(4, 3), strip_complex(5, 3), weighted_complex((1, 1, 2, 2), 3), unordered_complex(6, 6), unordered_complex(7, 5)],
)
def test_boundary_squared_vanishes(spec):
    for dim in range(2, spec.n):
        upper = boundary_matrix(spec, dim)
        lower = boundary_matrix(spec, dim - 1)
        assert lower.compose(upper) == {}


def test_boundary_matrix_is_worker_independent():
    spec = strip_complex(4, 3)
    assert boundary_matrix(spec, 2, workers=1).entries == boundary_matrix(spec, 2, workers=2).entries


def test_boundary_matrix_rejects_dim_zero():
    with pytest.raises(InvalidInputError):
        boundary_matrix(strip_complex(3, 2), 0)


def test_faces_and_cofaces_agree():
    spec = strip_complex(4, 3)
    cell = Symbol.parse("3 1 | 4 | 2")
    for coface, coeff in cofaces(spec, cell):
        assert dict(faces(spec, coface))[cell] == coeff


def test_cofaces_respect_width():
    spec = strip_complex(3, 2)
    assert cofaces(spec, Symbol.parse("2 1 | 3")) == []


def test_unordered_units_only_drops_non_units():
    spec = unordered_complex(6, 6, p=3)
    assert UCell((2, 4)) in dict(faces(spec, UCell((6,))))
    assert faces(spec, UCell((6,)), units_only=True) == []


def test_triplets_round_trip_and_validation():
    matrix = boundary_matrix(strip_complex(3, 2), 1)
    parsed = SparseBoundaryMatrix.from_triplets(matrix.to_triplets())
    assert parsed.entries == matrix.entries
    with pytest.raises(InvalidInputError):
        SparseBoundaryMatrix.from_triplets("1 2 2 2\n0 0 1\n")
    with pytest.raises(InvalidInputError):
        SparseBoundaryMatrix.from_triplets("1 2 2 1\n5 0 1\n")


def test_spec_validation():
    with pytest.raises(InvalidInputError):
        unordered_complex(4, 2, p=4)
    with pytest.raises(InvalidInputError):
        weighted_complex((1, 0, 2), 3)
    assert weighted_complex((1, 1, 2), 3).kind is ComplexKind.WEIGHTED


def test_ordered_enumeration_respects_cell_limit(monkeypatch):
    monkeypatch.setenv("STRIP_HOMOLOGY_CELL_LIMIT", "10")
    with pytest.raises(SizeLimitError):
        list(enumerate_cells(strip_complex(4, 2), 1, ordered=True))


def test_total_cells_of_full_width():
    assert total_cells(strip_complex(3, 3)) == 6 + 12 + 6


def _assert_boundary_squared_vanishes(spec):
    for dim in range(2, spec.n):
        assert boundary_matrix(spec, dim - 1).compose(boundary_matrix(spec, dim)) == {}


@pytest.mark.parametrize("n", range(2, 11))
@pytest.mark.parametrize("p", [0, 2, 3])
def test_unordered_boundary_squared_vanishes_at_full_width(n, p):
    _assert_boundary_squared_vanishes(unordered_complex(n, n, p))


@pytest.mark.parametrize("n", range(2, 6))
def test_strip_boundary_squared_vanishes_at_full_width(n):
    _assert_boundary_squared_vanishes(strip_complex(n, n))


@pytest.mark.slow
def test_strip_boundary_squared_vanishes_on_six_disks():
    _assert_boundary_squared_vanishes(strip_complex(6, 6))


def test_explicit_limit_overrides_environment(monkeypatch):
    monkeypatch.setenv("STRIP_HOMOLOGY_CELL_LIMIT", "10")
    assert len(list(enumerate_cells(strip_complex(4, 2), 1, ordered=True, limit=1000))) == count_cells(strip_complex(4, 2), 1)
    monkeypatch.delenv("STRIP_HOMOLOGY_CELL_LIMIT")
    with pytest.raises(SizeLimitError):
        list(enumerate_cells(strip_complex(4, 2), 1, ordered=True, limit=10))
