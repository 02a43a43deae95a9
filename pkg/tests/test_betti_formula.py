import math

import pytest
import sympy

from strip_homology.betti_formula import (
    DominantTerm,
    GrowthFormula,
    GrowthTerm,
    betti_growth_formula,
    betti_growth_formula_from_skylines,
    dominant_term,
    expected_dominant,
    labeled_convolution,
    tadpole_table,
)
from strip_homology.errors import InvalidInputError
from strip_homology.persistence import barcode, betti_at
from strip_homology.tools import formula_cache


def test_terms_and_indicators():
    assert GrowthTerm(3, 2, 2).evaluate(4) == 3 * 6 * 4
    assert GrowthTerm(5, 3, 0).evaluate(3) == 5
    assert GrowthTerm(5, 3, 0).evaluate(4) == 0
    assert GrowthTerm(1, 2, 1).evaluate(1) == 0


def test_labeled_convolution():
    assert labeled_convolution(GrowthTerm(1, 1, 1), GrowthTerm(1, 1, 1)) == GrowthTerm(2, 2, 2)
    f = GrowthFormula.of([GrowthTerm(2, 1, 1), GrowthTerm(-1, 0, 2)])
    assert GrowthFormula.identity() * f == f


def test_formula_merges_like_terms():
    f = GrowthFormula.of([GrowthTerm(1, 0, 2), GrowthTerm(-1, 0, 2), GrowthTerm(4, 1, 1)])
    assert f.terms == (GrowthTerm(4, 1, 1),)
    assert GrowthFormula.from_rows(f.to_rows()) == f


def test_first_betti_number_at_width_two():
    f = betti_growth_formula(1, 2)
    assert f.evaluate(3) == 7
    assert f.evaluate(12) == 114687
    for n in range(2, 10):
        expected = 2 * math.comb(n, 2) * 2 ** (n - 2) - n * 2 ** (n - 1) + 2**n - 1
        assert f.evaluate(n) == expected


def test_rendering():
    f = GrowthFormula.of([GrowthTerm(2, 2, 2), GrowthTerm(-1, 0, 0), GrowthTerm(1, 0, 2)])
    assert f.render() == "- [n=0] + C(n,0)·2^(n-0) + 2·C(n,2)·2^(n-2)"
    assert GrowthFormula().render() == "0"


@pytest.mark.parametrize("j, w", [(0, 2), (1, 2), (1, 3), (2, 2), (2, 3), (3, 2)])
def test_formula_matches_barcode(j, w):
    f = betti_growth_formula(j, w)
    for n in range(1, 8):
        assert f.evaluate(n) == betti_at(n, w, j, barcode(n, (j, j))), n


@pytest.mark.parametrize("j, w", [(1, 2), (2, 2), (2, 3)])
def test_skylines_agree_with_shapes(j, w):
    assert betti_growth_formula_from_skylines(j, w) == betti_growth_formula(j, w, use_cache=False)


def test_egf_coefficients_are_values():
    f = betti_growth_formula(1, 2)
    x = sympy.Symbol("x")
    series = sympy.series(f.egf(x), x, 0, 7).removeO()
    for n in range(7):
        assert series.coeff(x, n) * sympy.factorial(n) == f.evaluate(n)


@pytest.mark.parametrize("j, w", [(1, 2), (2, 2), (3, 3), (4, 3)])
def test_dominant_growth(j, w):
    assert dominant_term(betti_growth_formula(j, w), j, w) == expected_dominant(j, w)


def test_expected_dominant():
    assert expected_dominant(1, 2) == DominantTerm(2, 2)
    assert expected_dominant(3, 3) == DominantTerm(5, 2)


def test_degree_zero_tadpoles():
    # (degree, birth, death) -> count for a single tadpole on two labels
    assert tadpole_table(2)[(0, 1, 2)] == 1


def test_formula_cache_round_trip(isolated_cache):
    first = betti_growth_formula(2, 2)
    assert isolated_cache.exists()
    assert formula_cache.get_formula(2, 2) == first.to_rows()
    formula_cache.clear_formula_cache()
    assert betti_growth_formula(2, 2) == first


def test_invalid_parameters():
    with pytest.raises(InvalidInputError):
        betti_growth_formula(1, 1)
    with pytest.raises(InvalidInputError):
        betti_growth_formula(-1, 3)


@pytest.mark.parametrize("w", range(2, 5))
def test_formulas_match_counts_through_degree_three(w):
    formulas = {j: betti_growth_formula(j, w) for j in range(4)}
    for n in range(1, 9):
        bars = barcode(n, (0, 3))
        for j, formula in formulas.items():
            assert formula.evaluate(n) == betti_at(n, w, j, bars), (j, n)


@pytest.mark.slow
@pytest.mark.parametrize("w", range(2, 5))
def test_formulas_match_counts_up_to_twelve_disks(w):
    formulas = {j: betti_growth_formula(j, w) for j in range(4)}
    for n in range(9, 13):
        bars = barcode(n, (0, 3))
        for j, formula in formulas.items():
            assert formula.evaluate(n) == betti_at(n, w, j, bars), (j, n)


@pytest.mark.parametrize("w", range(2, 5))
@pytest.mark.parametrize("j", range(0, 4))
def test_dominant_term_in_low_degrees(j, w):
    assert dominant_term(betti_growth_formula(j, w), j, w) == expected_dominant(j, w)


@pytest.mark.slow
@pytest.mark.parametrize("w", range(2, 5))
@pytest.mark.parametrize("j", [4, 5])
def test_dominant_term_in_degrees_four_and_five(j, w):
    assert dominant_term(betti_growth_formula(j, w), j, w) == expected_dominant(j, w)
