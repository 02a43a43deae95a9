import itertools

import pytest

from strip_homology.complexes import enumerate_cells, strip_complex
from strip_homology.core_symbols import (
    SignedChain,
    Symbol,
    boundary,
    concat,
    layer_permutation,
    least_shuffle,
    split_into_wheels,
    wheel_decompose,
)
from strip_homology.errors import InvalidInputError


def test_parse_and_render():
    s = Symbol.parse("7 2 | 6 | 4 5 1 | 8 3")
    assert s.blocks == ((7, 2), (6,), (4, 5, 1), (8, 3))
    assert s.n == 8
    assert s.dim == 4
    assert str(s) == "7 2 | 6 | 4 5 1 | 8 3"


@pytest.mark.parametrize("text", ["1 | | 2", "1 1", "0 | 1", "a b"])
def test_parse_rejects(text):
    with pytest.raises(InvalidInputError):
        Symbol.parse(text)


def test_boundary_of_one_block():
    d = boundary(Symbol.parse("1 2"))
    assert d.coefficient(Symbol.parse("1 | 2")) == -1
    assert d.coefficient(Symbol.parse("2 | 1")) == 1
    assert len(d) == 2
    assert d.degree == 0


def test_boundary_of_zero_cell_is_zero():
    assert boundary(Symbol.parse("2 | 1 | 3")).is_zero()


@pytest.mark.parametrize("text", ["1 2 3", "3 1 | 2 4", "4 2 1 3", "2 5 | 1 4 3"])
def test_boundary_squares_to_zero(text):
    assert SignedChain.cell(Symbol.parse(text)).boundary().boundary().is_zero()


def test_leibniz_rule_for_concatenation():
    x = SignedChain.cell(Symbol.parse("2 1"))
    y = SignedChain.cell(Symbol.parse("3 5 4"))
    left = concat(x, y).boundary()
    right = concat(x.boundary(), y) + concat(x, y.boundary()) * (-1) ** x.degree
    assert left == right


def test_concat_rejects_overlap():
    with pytest.raises(InvalidInputError):
        concat(SignedChain.cell(Symbol.parse("1 2")), SignedChain.cell(Symbol.parse("2 3")))


def test_chain_arithmetic_drops_zeros():
    a = SignedChain.cell(Symbol.parse("1 | 2"))
    assert (a - a).is_zero()
    assert (a * 3).coefficient(Symbol.parse("1 | 2")) == 3


def test_wheels_cut_at_running_maxima():
    assert split_into_wheels((3, 1, 2, 5, 4, 6)) == ((3, 1, 2), (5, 4), (6,))
    decomposition = wheel_decompose(Symbol.parse("3 1 | 5 2 4"))
    assert decomposition.wheels == ((3, 1), (5, 2, 4))
    assert decomposition.block_index == (0, 1)


@pytest.mark.parametrize("text", ["2 1 | 3", "3 1 | 2 4", "4 1 | 3 2", "1 | 2 | 3", "5 2 | 4 1 3"])
def test_layer_permutation_is_least_shuffle(text):
    s = Symbol.parse(text)
    assert layer_permutation(s) == least_shuffle(s)


def test_wheels_of_a_three_block_symbol():
    s = Symbol.parse("7 2 | 6 | 4 5 8 1 3")
    assert wheel_decompose(s).wheels == ((7, 2), (6,), (4,), (5,), (8, 1, 3))
    assert layer_permutation(s) == (4, 5, 6, 7, 2, 8, 1, 3)
    assert least_shuffle(s) == layer_permutation(s)


def _all_cells(n):
    spec = strip_complex(n, n)
    return [cell for dim in range(n) for cell in enumerate_cells(spec, dim)]


@pytest.mark.parametrize("n", range(1, 6))
def test_layer_permutation_is_least_shuffle_everywhere(n):
    for s in _all_cells(n):
        assert layer_permutation(s) == least_shuffle(s)


@pytest.mark.slow
def test_layer_permutation_is_least_shuffle_on_six_labels():
    for s in _all_cells(6):
        assert layer_permutation(s) == least_shuffle(s)


@pytest.mark.parametrize("n", range(1, 5))
def test_boundary_commutes_with_relabeling(n):
    cells = _all_cells(n)
    for values in itertools.permutations(range(1, n + 1)):
        mapping = dict(zip(range(1, n + 1), values))
        for s in cells:
            assert boundary(s.relabel(mapping)) == boundary(s).relabel(mapping)


@pytest.mark.parametrize(
    "left, middle, right",
    [("2 1", "3", "5 4"), ("1 | 3", "2 5", "4"), ("4 1 2", "3 | 6", "5")],
)
def test_concatenation_is_associative(left, middle, right):
    x, y, z = (SignedChain.cell(Symbol.parse(text)) for text in (left, middle, right))
    assert concat(concat(x, y), z) == concat(x, concat(y, z))
    assert concat(concat(x.boundary(), y), z) == concat(x.boundary(), concat(y, z))
