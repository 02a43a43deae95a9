"""
Module: cli
Component: Command-line entry point
Purpose: Batch computation, verification and barcode rendering from the shell.

Description:
`strip-homology <subcommand>` validates its arguments into a RunConfig,
dispatches to the library and writes one document to stdout or --output.
JSON documents are validated against the package schemas before writing.

Subcommands:
- betti      Betti numbers of cell(n, w) from critical cell counts
- barcode    persistence barcode of config(n, *) over the width
- formula    closed-form growth of β_j(config(n, w)) in n
- unordered  H_*(ucel(n, w); F_p) with generator relations
- critical   critical cell counts (CSV: kind,n,w_or_k,p,dim,count)
- basis      basis elements of H_*(cell(n, w)) with critical cells and chains
- verify     rule suite from verify_policy.json (exit 1 on failure)
- oracle     Smith normal form / field homology / reduction barcodes
- matrix     sparse triplet export of one boundary matrix

Exit codes:
- 0 success
- 1 verification failed
- 2 invalid input or refused computation

Version: 0.1.0
Date: 2026-10-19

----------------------------------------------------------------------
Usage example:

strip-homology betti --n 3 --w 2                          # 1,7
strip-homology formula --j 1 --w 2 --eval 3               # 7
strip-homology barcode --n 12 --degrees 0..1 --format json
strip-homology unordered --n 3 --w 2 --p 2
strip-homology verify --level quick --progress
----------------------------------------------------------------------
"""

# ----------- Imports ----------- #
from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from strip_homology import __version__, config
from strip_homology.basis_cycles import basic_cycle, critical_symbol, iter_basis_elements
from strip_homology.betti_formula import betti_growth_formula, dominant_term
from strip_homology.checks import run_policy
from strip_homology.complexes import ComplexKind, ComplexSpec, boundary_matrix
from strip_homology.errors import InvalidInputError, StripHomologyError
from strip_homology.models import BettiTable, FormulaDocument
from strip_homology.morse import (
    CriticalCellReport,
    critical_cells_strip,
    critical_cells_unordered,
    critical_cells_weighted,
    matching_for,
)
from strip_homology.persistence import barcode, parse_degrees
from strip_homology.rendering import render_barcode_svg, render_barcode_text, render_csv, render_json
from strip_homology.snf_oracle import homology_field, homology_Z, persistent_homology_field, smith_normal_form_triplets
from strip_homology.unordered import UBasisReport, betti_unordered, check_unordered_relations, unordered_generators

logger = logging.getLogger("strip_homology")

DEFAULT_FORMATS = {
    "betti": "text",
    "barcode": "text",
    "formula": "text",
    "unordered": "csv",
    "critical": "csv",
    "basis": "json",
    "verify": "json",
    "oracle": "json",
    "matrix": "text",
}
KIND_ALIASES = {"strip": "strip", "weighted": "weighted_permutohedron", "unordered": "unordered_strip"}


class VerificationFailed(Exception):
    """Carries the rendered report of a failed verify run."""

    def __init__(self, document: str) -> None:
        super().__init__("verification failed")
        self.document = document


# ----------- Argument parsing ----------- #
def _weights(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"weights must be comma-separated integers, got {text!r}") from err


def _degrees(text: str) -> Tuple[int, int]:
    try:
        return parse_degrees(text)
    except InvalidInputError as err:
        raise argparse.ArgumentTypeError(str(err)) from err


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=None, help="worker processes (default: STRIP_HOMOLOGY_WORKERS or all cores)")
    common.add_argument("--progress", action="store_true", help="show progress bars on stderr")
    common.add_argument("--log-level", default=None, help="logging level (default: STRIP_HOMOLOGY_LOG_LEVEL or WARNING)")
    common.add_argument("--output", default=None, help="write the document to this path instead of stdout")
    common.add_argument("--format", dest="fmt", choices=["json", "csv", "svg", "text"], default=None)
    common.add_argument("--cell-limit", type=int, default=None, help="override STRIP_HOMOLOGY_CELL_LIMIT")

    parser = argparse.ArgumentParser(prog="strip-homology", description="Homology of disk configurations in a strip.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    betti = sub.add_parser("betti", parents=[common], help="Betti numbers of cell(n, w)")
    betti.add_argument("--n", type=int, required=True)
    betti.add_argument("--w", type=int, required=True)
    betti.add_argument("--degrees", type=_degrees, default=None)

    bars = sub.add_parser("barcode", parents=[common], help="persistence barcode over the width")
    bars.add_argument("--n", type=int, required=True)
    bars.add_argument("--degrees", type=_degrees, default=None)
    bars.add_argument("--mode", choices=["enumerate", "count"], default="count")

    formula = sub.add_parser("formula", parents=[common], help="Betti growth formula")
    formula.add_argument("--j", type=int, required=True)
    formula.add_argument("--w", type=int, required=True)
    formula.add_argument("--eval", dest="eval_n", type=int, default=None)

    unordered = sub.add_parser("unordered", parents=[common], help="homology of ucel(n, w) over F_p")
    unordered.add_argument("--n", type=int, required=True)
    unordered.add_argument("--w", type=int, required=True)
    unordered.add_argument("--p", type=int, default=0)

    critical = sub.add_parser("critical", parents=[common], help="critical cell counts")
    critical.add_argument("--kind", choices=sorted(KIND_ALIASES), default="strip")
    critical.add_argument("--n", type=int, default=None)
    critical.add_argument("--w", "--k", dest="w", type=int, required=True)
    critical.add_argument("--weights", type=_weights, default=None)
    critical.add_argument("--p", type=int, default=0)
    critical.add_argument("--mode", choices=["enumerate", "count"], default="count")
    critical.add_argument("--list-cells", action="store_true")
    critical.add_argument(
        "--from-order", action="store_true", help="count the critical cells of the explicit matching on the built complex"
    )

    basis = sub.add_parser("basis", parents=[common], help="basis elements of H_*(cell(n, w))")
    basis.add_argument("--n", type=int, required=True)
    basis.add_argument("--w", type=int, required=True)
    basis.add_argument("--dim", type=int, default=None)
    basis.add_argument("--chains", action="store_true", help="include the basic cycle of every element")

    verify = sub.add_parser("verify", parents=[common], help="run the verification suite")
    verify.add_argument("--level", choices=["quick", "full"], default="quick")

    oracle = sub.add_parser("oracle", parents=[common], help="independent homology oracle")
    oracle.add_argument("--kind", choices=sorted(KIND_ALIASES), default="strip")
    oracle.add_argument("--n", type=int, default=None)
    oracle.add_argument("--w", "--k", dest="w", type=int, default=None)
    oracle.add_argument("--weights", type=_weights, default=None)
    oracle.add_argument("--p", type=int, default=None, help="field characteristic; omit for integral homology")
    oracle.add_argument("--persistence", action="store_true", help="reduction barcode of the width filtration")
    oracle.add_argument("--triplets", default=None, help="Smith normal form of a sparse triplet file")

    matrix = sub.add_parser("matrix", parents=[common], help="export a boundary matrix")
    matrix.add_argument("--kind", choices=sorted(KIND_ALIASES), default="strip")
    matrix.add_argument("--n", type=int, required=True)
    matrix.add_argument("--w", "--k", dest="w", type=int, required=True)
    matrix.add_argument("--weights", type=_weights, default=None)
    matrix.add_argument("--dim", type=int, required=True)
    matrix.add_argument("--p", type=int, default=0)
    return parser


def to_run_config(args: argparse.Namespace) -> config.RunConfig:
    """
    Converts parsed arguments into a validated RunConfig.

    Raises:
        InvalidInputError: On any validation failure
    """
    values = {key: value for key, value in vars(args).items() if value is not None}
    values.pop("log_level", None)
    if "kind" in values:
        values["kind"] = KIND_ALIASES[values["kind"]]
    if "p" in values:
        values["over_field"] = True
        values["characteristic"] = values.pop("p")
    values["fmt"] = values.get("fmt") or DEFAULT_FORMATS[args.subcommand]
    if args.subcommand == "critical" and values.get("kind") == "weighted_permutohedron" and "n" not in values:
        values["n"] = len(values.get("weights") or ())
    try:
        return config.RunConfig(**values)
    except ValidationError as err:
        first = err.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "arguments"
        raise InvalidInputError(f"{location}: {first['msg']}") from err


# ----------- Helpers ----------- #
def _spec(cfg: config.RunConfig) -> ComplexSpec:
    values = {"kind": ComplexKind(cfg.kind), "n": cfg.n, "w_or_k": cfg.w}
    if cfg.kind == ComplexKind.WEIGHTED.value:
        values["weights"] = cfg.weights
    if cfg.kind == ComplexKind.UNORDERED.value:
        values["characteristic"] = cfg.characteristic
    try:
        return ComplexSpec(**values)
    except ValidationError as err:
        raise InvalidInputError(f"Invalid complex: {err.errors()[0]['msg']}") from err


def _unsupported(cfg: config.RunConfig, allowed: Sequence[str]) -> None:
    if cfg.fmt not in allowed:
        raise InvalidInputError(f"'{cfg.subcommand}' does not support --format {cfg.fmt} (use one of {', '.join(allowed)})")


def _critical_from_matching(cfg: config.RunConfig) -> CriticalCellReport:
    spec = _spec(cfg)
    matching = matching_for(spec, cfg.cell_limit)
    report = CriticalCellReport(kind=spec.kind.value, n=spec.n, w_or_k=spec.w_or_k, p=spec.characteristic)
    report.counts = matching.critical_counts()
    if cfg.list_cells:
        report.cells = [str(cell) for cell in matching.critical()]
    return report


# ----------- Commands ----------- #
def cmd_betti(cfg: config.RunConfig) -> str:
    _unsupported(cfg, ("text", "csv", "json"))
    counts = critical_cells_strip(cfg.n, cfg.w, workers=cfg.workers, degrees=cfg.degrees).counts
    if cfg.degrees is not None:
        counts = {d: c for d, c in counts.items() if cfg.degrees[0] <= d <= cfg.degrees[1]}
    table = BettiTable(n=cfg.n, w=cfg.w, betti=counts)
    if cfg.fmt == "json":
        return render_json(table.to_json(), "betti")
    if cfg.fmt == "csv":
        return render_csv(["n", "w", "degree", "betti"], table.to_rows())
    values = [counts[d] for d in sorted(counts)]
    while len(values) > 1 and values[-1] == 0 and cfg.degrees is None:
        values.pop()
    return ",".join(str(value) for value in values) + "\n"


def cmd_barcode(cfg: config.RunConfig) -> str:
    bars = barcode(cfg.n, cfg.degrees, mode=cfg.mode, workers=cfg.workers, progress=cfg.progress)
    if cfg.fmt == "json":
        return render_json(bars.to_json(), "barcode")
    if cfg.fmt == "csv":
        return render_csv(["degree", "birth", "death", "multiplicity"], bars.to_rows())
    if cfg.fmt == "svg":
        return render_barcode_svg(bars)
    return render_barcode_text(bars)


def cmd_formula(cfg: config.RunConfig) -> str:
    _unsupported(cfg, ("text", "csv", "json"))
    formula = betti_growth_formula(cfg.j, cfg.w)
    if cfg.fmt == "csv":
        return render_csv(["coefficient", "a", "b"], formula.to_rows())
    if cfg.fmt == "text":
        if cfg.eval_n is not None:
            return f"{formula.evaluate(cfg.eval_n)}\n"
        return formula.render() + "\n"
    dominant = dominant_term(formula, cfg.j, cfg.w)
    document = FormulaDocument(
        j=cfg.j,
        w=cfg.w,
        terms=formula.to_json(),
        rendered=formula.render(),
        dominant={"degree": dominant.degree, "base": dominant.base},
        values={cfg.eval_n: formula.evaluate(cfg.eval_n)} if cfg.eval_n is not None else None,
    )
    return render_json(document.to_json(), "formula")


def cmd_unordered(cfg: config.RunConfig) -> str:
    _unsupported(cfg, ("text", "csv", "json"))
    dims = betti_unordered(cfg.n, cfg.w, cfg.characteristic)
    if cfg.fmt == "csv":
        return render_csv(["n", "w", "p", "degree", "dim"], [[str(cfg.n), str(cfg.w), str(cfg.characteristic), str(d), str(v)] for d, v in sorted(dims.items())])
    if cfg.fmt == "text":
        return ",".join(str(dims[d]) for d in sorted(dims)) + "\n"
    report = UBasisReport(cfg.n, cfg.w, cfg.characteristic, dims, check_unordered_relations(cfg.w, cfg.characteristic))
    document = report.to_json()
    document["generators"] = [str(generator) for generator in unordered_generators(cfg.w, cfg.characteristic)]
    return render_json(document, "unordered")


def cmd_critical(cfg: config.RunConfig) -> str:
    _unsupported(cfg, ("csv", "json"))
    if cfg.from_order:
        report = _critical_from_matching(cfg)
    elif cfg.kind == ComplexKind.WEIGHTED.value:
        weights = cfg.weights if cfg.weights is not None else (1,) * cfg.n
        report = critical_cells_weighted(len(weights), weights, cfg.w, list_cells=cfg.list_cells)
    elif cfg.kind == ComplexKind.UNORDERED.value:
        report = critical_cells_unordered(cfg.n, cfg.w, cfg.characteristic, list_cells=cfg.list_cells)
    else:
        report = critical_cells_strip(cfg.n, cfg.w, mode=cfg.mode, list_cells=cfg.list_cells, workers=cfg.workers)
    if cfg.fmt == "json":
        return render_json(report.to_json(), "critical")
    return render_csv(["kind", "n", "w_or_k", "p", "dim", "count"], report.to_rows())


def cmd_basis(cfg: config.RunConfig) -> str:
    _unsupported(cfg, ("json", "text"))
    elements = list(iter_basis_elements(cfg.n, cfg.w, cfg.dim))
    if cfg.fmt == "text":
        return "".join(f"{critical_symbol(element)}\t{element}\n" for element in elements)
    rows = []
    for element in elements:
        row = element.to_json()
        row["critical"] = str(critical_symbol(element))
        if cfg.chains:
            row["chain"] = basic_cycle(element, cfg.w).to_json()
        rows.append(row)
    return render_json({"n": cfg.n, "w": cfg.w, "degree": cfg.dim, "elements": rows}, "basis")


def cmd_verify(cfg: config.RunConfig) -> str:
    _unsupported(cfg, ("json", "text"))
    result = run_policy(cfg.level, workers=cfg.workers, progress=cfg.progress, limit=cfg.cell_limit)
    if cfg.fmt == "json":
        document = render_json(result.model_dump(), "verify")
    else:
        lines = [f"{result.status}: {result.summary}"]
        lines.extend(f"  [{detail.status}] {detail.id}: {detail.comment}" for detail in result.details)
        document = "\n".join(lines) + "\n"
    if result.failed:
        raise VerificationFailed(document)
    return document


def cmd_oracle(cfg: config.RunConfig) -> str:
    if cfg.triplets is not None:
        try:
            text = cfg.triplets.read_text(encoding="utf-8")
        except OSError as err:
            raise InvalidInputError(f"Cannot read {cfg.triplets}: {err}") from err
        return render_json(smith_normal_form_triplets(text).to_json(), "snf")
    if cfg.persistence:
        bars = persistent_homology_field(cfg.n, cfg.characteristic, progress=cfg.progress)
        if cfg.fmt == "text":
            return render_barcode_text(bars)
        return render_json(bars.to_json(), "barcode")
    spec = _spec(cfg)
    if cfg.over_field:
        summary = homology_field(spec, cfg.characteristic, workers=cfg.workers, progress=cfg.progress, limit=cfg.cell_limit)
    else:
        summary = homology_Z(spec, workers=cfg.workers, progress=cfg.progress, limit=cfg.cell_limit)
    return render_json(summary.to_json(), "homology")


def cmd_matrix(cfg: config.RunConfig) -> str:
    spec = _spec(cfg)
    p = cfg.characteristic if cfg.kind == ComplexKind.UNORDERED.value else 0
    return boundary_matrix(spec, cfg.dim, characteristic=p, workers=cfg.workers).to_triplets()


COMMANDS: Dict[str, Callable[[config.RunConfig], str]] = {
    "betti": cmd_betti,
    "barcode": cmd_barcode,
    "formula": cmd_formula,
    "unordered": cmd_unordered,
    "critical": cmd_critical,
    "basis": cmd_basis,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "matrix": cmd_matrix,
}


# ----------- Entry point ----------- #
def _emit(document: str, cfg: Optional[config.RunConfig]) -> None:
    if cfg is not None and cfg.output is not None:
        try:
            cfg.output.parent.mkdir(parents=True, exist_ok=True)
            cfg.output.write_text(document, encoding="utf-8")
        except OSError as err:
            raise RuntimeError(f"Failed to write {cfg.output}: {err}") from err
        return
    sys.stdout.write(document)


def _error_line(err: Exception) -> str:
    return json.dumps({"error": type(err).__name__, "message": str(err)}, ensure_ascii=False)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=(args.log_level or config.log_level()).upper(), format=config.LOG_FORMAT, stream=sys.stderr)
    cfg = None
    try:
        cfg = to_run_config(args)
        _emit(COMMANDS[cfg.subcommand](cfg), cfg)
    except VerificationFailed as failure:
        _emit(failure.document, cfg)
        return 1
    except StripHomologyError as err:
        print(_error_line(err), file=sys.stderr)
        return 2
    except RuntimeError as err:
        print(_error_line(err), file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
