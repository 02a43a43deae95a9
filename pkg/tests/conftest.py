import pytest

from strip_homology.tools import formula_cache


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    """Points the formula sidecar at a temporary file for every test."""
    path = tmp_path / "formulas.json"
    monkeypatch.setenv("STRIP_HOMOLOGY_CACHE_FILE", str(path))
    formula_cache.clear_formula_cache()
    yield path
    formula_cache.clear_formula_cache()


@pytest.fixture
def nokcycle_weights():
    return (1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 4)
