"""
Module: rendering
Component: Output formats
Purpose: Serialize documents as JSON, CSV, plain text and SVG barcodes.

Description:
Every writer returns a string so the CLI decides where it goes. JSON
documents are validated against the package schemas before they are
serialized. SVG barcodes are drawn with matplotlib on the Agg backend with a
fixed hash salt and no date metadata, so the same barcode gives the same
bytes.

How it works:
1) load_schema reads strip_homology/schemas/<name>.json once.
2) render_json validates, then dumps with sorted-free, indented output.
3) render_barcode_svg draws one band per degree; every bar is a horizontal
   segment whose thickness grows with log(multiplicity); the exact
   multiplicity is written in a right-hand column and infinite bars run to
   the "∞" column.

Exceptions handled:
- InvalidInputError: a document that does not match its schema
- RuntimeError: unreadable schema files

Version: 0.1.0
Date: 2026-10-19
"""

# ----------- Imports ----------- #
from __future__ import annotations

import csv
import io
import json
import math
from functools import lru_cache
from typing import Any, Iterable, List, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from jsonschema import ValidationError, validate  # noqa: E402

from strip_homology.config import ROOT  # noqa: E402
from strip_homology.errors import InvalidInputError  # noqa: E402
from strip_homology.persistence import Barcode  # noqa: E402

SCHEMA_DIR = ROOT / "schemas"
SVG_HASH_SALT = "strip-homology"


# ----------- JSON ----------- #
@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    path = SCHEMA_DIR / f"{name}.json"
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as err:
        raise RuntimeError(f"Failed to load schema {name}: {err}") from err


def validate_document(document: Any, schema_name: str) -> None:
    """
    Raises:
        InvalidInputError: If the document does not match the schema
    """
    try:
        validate(instance=document, schema=load_schema(schema_name))
    except ValidationError as err:
        raise InvalidInputError(f"Output does not match schema {schema_name}: {err.message}") from err


def render_json(document: Any, schema_name: str) -> str:
    validate_document(document, schema_name)
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


# ----------- CSV and text ----------- #
def render_csv(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def render_barcode_text(barcode: Barcode) -> str:
    """One "[b, d)  ×m" row per bar, grouped under an "H_j" heading per degree."""
    lines: List[str] = []
    current = None
    for bar, multiplicity in barcode.items():
        if bar.degree != current:
            current = bar.degree
            lines.append(f"H_{current}")
        lines.append(f"  {bar!s:<10} ×{multiplicity}")
    return "\n".join(lines) + "\n" if lines else ""


# ----------- SVG ----------- #
def _thickness(multiplicity: int) -> float:
    return 0.6 + 1.2 * math.log(multiplicity + 1)


def render_barcode_svg(barcode: Barcode) -> str:
    """
    Barcode figure as an SVG document.

    Columns 0..n carry the widths; an extra column n + 1 stands for infinity.
    Bars of one degree share a band, ordered by birth then death.
    """
    plt.rcParams["svg.hashsalt"] = SVG_HASH_SALT
    plt.rcParams["svg.fonttype"] = "none"
    items = barcode.items()
    infinity = barcode.n + 1
    height = max(2.0, 0.35 * len(items) + 0.6 * len(barcode.degrees()) + 1)
    fig, ax = plt.subplots(figsize=(8, height))
    try:
        row = 0
        labels = []
        for degree in reversed(barcode.degrees()):
            bars = [(bar, m) for bar, m in items if bar.degree == degree]
            for bar, multiplicity in reversed(bars):
                end = infinity if bar.death is None else bar.death
                ax.plot([bar.birth, end], [row, row], color="tab:blue", linewidth=_thickness(multiplicity), solid_capstyle="butt")
                if bar.death is None:
                    ax.annotate("", xy=(end + 0.3, row), xytext=(end, row), arrowprops={"arrowstyle": "->", "color": "tab:blue"})
                ax.text(infinity + 0.8, row, f"×{multiplicity}", va="center", fontsize=8)
                row += 1
            labels.append((row - len(bars) / 2 - 0.5, f"H_{degree}"))
            ax.axhline(row - 0.5, color="0.85", linewidth=0.5)
            row += 1
        ax.set_xlim(0, infinity + 2.5)
        ax.set_ylim(-1, max(row, 1))
        ax.set_xticks(list(range(0, infinity + 1)))
        ax.set_xticklabels([str(w) for w in range(0, infinity)] + ["∞"])
        ax.set_yticks([position for position, _ in labels])
        ax.set_yticklabels([label for _, label in labels])
        ax.set_xlabel("w")
        ax.set_title(f"Barcode of config({barcode.n}, w)")
        ax.grid(axis="x", color="0.9", linewidth=0.5)
        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
        return buffer.getvalue()
    finally:
        plt.close(fig)
