import pytest
from pydantic import ValidationError

from strip_homology import config
from strip_homology.errors import InvalidInputError


def test_defaults_without_environment(monkeypatch):
    monkeypatch.delenv("STRIP_HOMOLOGY_CELL_LIMIT", raising=False)
    monkeypatch.delenv("STRIP_HOMOLOGY_LOG_LEVEL", raising=False)
    assert config.cell_limit() == config.DEFAULT_CELL_LIMIT
    assert config.log_level() == "WARNING"


@pytest.mark.parametrize("raw", ["lots", "-5", "0", " "])
def test_bad_integers_fall_back(monkeypatch, raw):
    monkeypatch.setenv("STRIP_HOMOLOGY_CELL_LIMIT", raw)
    assert config.cell_limit() == config.DEFAULT_CELL_LIMIT


def test_environment_overrides(monkeypatch, tmp_path):
    monkeypatch.setenv("STRIP_HOMOLOGY_WORKERS", "3")
    monkeypatch.setenv("STRIP_HOMOLOGY_CACHE_FILE", str(tmp_path / "f.json"))
    assert config.default_workers() == 3
    assert config.cache_file() == tmp_path / "f.json"


@pytest.mark.parametrize("p", [0, 2, 3, 2147483647])
def test_characteristics(p):
    assert config.check_characteristic(p) == p


@pytest.mark.parametrize("p", [1, 4, -3, 2**31 + 11])
def test_bad_characteristics(p):
    with pytest.raises(InvalidInputError):
        config.check_characteristic(p)


def test_run_config_requires_parameters():
    with pytest.raises(ValidationError):
        config.RunConfig(subcommand="betti", n=3)
    with pytest.raises(ValidationError):
        config.RunConfig(subcommand="barcode", n=3, degrees=(2, 1))
    cfg = config.RunConfig(subcommand="oracle", triplets="m.txt")
    assert cfg.n is None
