"""
Module: config
Component: Runtime configuration
Purpose: Environment-driven defaults and the validated RunConfig used by the CLI.

Description:
Settings come from the process environment, optionally seeded from a `.env`
file through python-dotenv. Every knob has a documented default so the
library works with no environment at all:

- STRIP_HOMOLOGY_CELL_LIMIT   ceiling on cells the oracle may materialize (1_000_000)
- STRIP_HOMOLOGY_WORKERS      default worker processes (os.cpu_count())
- STRIP_HOMOLOGY_LOG_LEVEL    logging level name (WARNING)
- STRIP_HOMOLOGY_CACHE_FILE   JSON sidecar for cached Betti growth formulas

RunConfig validates one CLI invocation before anything is dispatched, so that
every downstream module can assume well-formed ranges.

Initial State:
- `.env` may or may not exist in the working directory

Final State:
- Environment variables from `.env` are visible through os.environ
- Getters return typed values or the documented defaults

Exceptions handled:
- ValueError: unparsable integer environment values fall back to defaults
  with a logged warning

Version: 0.1.0
Date: 2026-10-19
"""

# ----------- Imports ----------- #
import logging
import os
from pathlib import Path
from typing import Literal, Optional, Tuple

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator, model_validator
from sympy import isprime

from strip_homology.errors import InvalidInputError

# ----------- Constants ----------- #
ROOT = Path(__file__).parent
DEFAULT_CELL_LIMIT = 1_000_000
DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_CACHE_FILE = ROOT / "memory" / "formulas.json"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

logger = logging.getLogger(__name__)

load_dotenv()


# ----------- Environment getters ----------- #
def _int_from_env(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        logger.warning("Ignoring %s=%r: not an integer, using %d", name, raw, default)
        return default
    if value < 1:
        logger.warning("Ignoring %s=%r: must be positive, using %d", name, raw, default)
        return default
    return value


def cell_limit() -> int:
    """
    Returns the oracle cell ceiling.

    Returns:
        int: STRIP_HOMOLOGY_CELL_LIMIT if set to a positive integer, else 1_000_000.
    """
    return _int_from_env("STRIP_HOMOLOGY_CELL_LIMIT", DEFAULT_CELL_LIMIT)


def default_workers() -> int:
    """Returns STRIP_HOMOLOGY_WORKERS or the number of available cores."""
    return _int_from_env("STRIP_HOMOLOGY_WORKERS", os.cpu_count() or 1)


def log_level() -> str:
    """Returns the configured logging level name, upper-cased."""
    return os.environ.get("STRIP_HOMOLOGY_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper()


def cache_file() -> Path:
    """Returns the path of the Betti growth formula sidecar."""
    raw = os.environ.get("STRIP_HOMOLOGY_CACHE_FILE")
    return Path(raw) if raw else DEFAULT_CACHE_FILE


def check_characteristic(p: int) -> int:
    """
    Validates a coefficient characteristic.

    Parameters:
        p (int): 0 for the rationals, or a prime

    Returns:
        int: p unchanged

    Raises:
        InvalidInputError: If p is neither 0 nor prime, or p >= 2**31
    """
    if p == 0:
        return p
    if p < 0 or p >= 2**31 or not isprime(p):
        raise InvalidInputError(f"Characteristic must be 0 or a prime below 2**31, got {p}")
    return p


# ----------- Run configuration ----------- #
Subcommand = Literal[
    "betti", "barcode", "formula", "unordered", "critical", "basis", "verify", "oracle", "matrix"
]


class RunConfig(BaseModel):
    """Validated parameters of one CLI invocation."""

    subcommand: Subcommand
    n: Optional[int] = Field(default=None, ge=0)
    w: Optional[int] = Field(default=None, ge=1)
    j: Optional[int] = Field(default=None, ge=0)
    degrees: Optional[Tuple[int, int]] = None
    characteristic: int = 0
    kind: Literal["strip", "weighted_permutohedron", "unordered_strip"] = "strip"
    weights: Optional[Tuple[int, ...]] = None
    dim: Optional[int] = Field(default=None, ge=0)
    mode: Literal["enumerate", "count"] = "count"
    fmt: Literal["json", "csv", "svg", "text"] = "text"
    level: Literal["quick", "full"] = "quick"
    eval_n: Optional[int] = Field(default=None, ge=0)
    workers: int = Field(default_factory=default_workers, ge=1)
    cell_limit: int = Field(default_factory=cell_limit, ge=1)
    output: Optional[Path] = None
    progress: bool = False
    list_cells: bool = False
    from_order: bool = False
    chains: bool = False
    persistence: bool = False
    over_field: bool = False
    triplets: Optional[Path] = None

    @field_validator("characteristic")
    @classmethod
    def _prime_or_zero(cls, value: int) -> int:
        return check_characteristic(value)

    @field_validator("weights")
    @classmethod
    def _positive_weights(cls, value: Optional[Tuple[int, ...]]) -> Optional[Tuple[int, ...]]:
        if value is not None and any(weight < 1 for weight in value):
            raise ValueError("weights must be positive integers")
        return value

    @model_validator(mode="after")
    def _check_ranges(self) -> "RunConfig":
        if self.degrees is not None:
            low, high = self.degrees
            if low < 0 or high < low:
                raise ValueError(f"degree range {low}..{high} is empty or negative")
        if self.subcommand in {"betti", "barcode", "unordered", "critical", "basis", "oracle", "matrix"}:
            if self.n is None and not (self.subcommand == "oracle" and self.triplets is not None):
                raise ValueError(f"'{self.subcommand}' requires --n")
        if self.subcommand == "matrix" and (self.dim is None or self.dim < 1):
            raise ValueError("'matrix' requires --dim >= 1")
        if self.subcommand in {"betti", "unordered", "basis"} and self.w is None:
            raise ValueError(f"'{self.subcommand}' requires --w")
        if self.subcommand == "formula" and (self.j is None or self.w is None):
            raise ValueError("'formula' requires --j and --w")
        if self.subcommand == "formula" and self.w is not None and self.w < 2:
            raise ValueError("growth formulas need w >= 2")
        return self
