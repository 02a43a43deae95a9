import pytest

from strip_homology.errors import InvalidInputError
from strip_homology.persistence import barcode
from strip_homology.rendering import (
    render_barcode_svg,
    render_barcode_text,
    render_csv,
    render_json,
    validate_document,
)


def test_text_barcode():
    text = render_barcode_text(barcode(2))
    assert text.splitlines()[0] == "H_0"
    assert "[1, ∞)" in text
    assert "×1" in text


def test_csv_rows():
    assert render_csv(["a", "b"], [["1", "2"]]) == "a,b\n1,2\n"


def test_json_is_validated():
    document = render_json(barcode(2).to_json(), "barcode")
    assert '"multiplicity": "1"' in document
    with pytest.raises(InvalidInputError):
        validate_document([{"degree": -1, "birth": 1, "multiplicity": "1"}], "barcode")


def test_svg_is_deterministic():
    bars = barcode(3)
    first = render_barcode_svg(bars)
    assert first.lstrip().startswith("<?xml")
    assert "<svg" in first
    assert first == render_barcode_svg(bars)


def test_missing_schema():
    with pytest.raises(RuntimeError):
        validate_document({}, "no_such_schema")
