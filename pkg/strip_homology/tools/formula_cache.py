"""
Module: formula_cache
Component: Betti growth formula sidecar

Description:
Reusable helpers to persist Betti growth formulas between runs. Skyline
aggregation is the costly step of building a formula, so every formula is
stored under its "j,w" key in a JSON file and served from memory afterwards.

- Lazy loading with an in-memory cache
- Persistence through the JSON file named by STRIP_HOMOLOGY_CACHE_FILE
- Safe for single-process use; worker processes never write to it

Usage:
    from strip_homology.tools.formula_cache import get_formula, store_formula

Version: 0.1.0
Date: 2026-10-19
"""

# ----------- Imports ----------- #
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional

from strip_homology import config

logger = logging.getLogger(__name__)

# ----------- Internal State ----------- #
_formulas: Optional[Dict[str, List[List[str]]]] = None  # Lazy-loaded on first access
_loaded_from: Optional[Path] = None


# ----------- Functions ----------- #
def _key(j: int, w: int) -> str:
    return f"{j},{w}"


def load_formula_cache() -> Dict[str, List[List[str]]]:
    """
    Loads cached formulas from persistent storage.

    Returns:
        Dict[str, List[List[str]]]: "j,w" -> list of [coefficient, a, b] decimal strings

    Initial State:
        - The sidecar may or may not exist on disk

    Final State:
        - The in-memory cache holds the file content, or is empty
    """
    global _formulas, _loaded_from
    path = config.cache_file()
    try:
        with path.open("r", encoding="utf-8") as handle:
            _formulas = json.load(handle).get("formulas", {})
    except FileNotFoundError:
        _formulas = {}
    except json.JSONDecodeError as err:
        logger.warning("Ignoring unreadable formula cache %s: %s", path, err)
        _formulas = {}
    _loaded_from = path
    return _formulas


def save_formula_cache(formulas: Dict[str, List[List[str]]]) -> None:
    """
    Writes the cache to persistent storage.

    Raises:
        RuntimeError: If the sidecar cannot be written
    """
    path = config.cache_file()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as handle:
            json.dump({"formulas": formulas}, handle, indent=2, sort_keys=True)
    except OSError as err:
        raise RuntimeError(f"Failed to save formula cache to {path}: {err}") from err


def _cache() -> Dict[str, List[List[str]]]:
    if _formulas is None or _loaded_from != config.cache_file():
        load_formula_cache()
    return _formulas


def store_formula(j: int, w: int, terms: List[List[str]]) -> None:
    """
    Records one formula and persists the cache.

    Final State:
        - Cache and file hold the new entry; a write failure is logged and the
          in-memory entry kept
    """
    cache = _cache()
    cache[_key(j, w)] = terms
    try:
        save_formula_cache(cache)
    except RuntimeError as err:
        logger.warning("%s", err)


def get_formula(j: int, w: int) -> Optional[List[List[str]]]:
    """Returns the cached terms for (j, w), or None."""
    return _cache().get(_key(j, w))


def clear_formula_cache() -> None:
    """Forgets the in-memory cache; the file is left untouched."""
    global _formulas, _loaded_from
    _formulas = None
    _loaded_from = None
