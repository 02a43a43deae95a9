"""
Module: checks
Component: Verification suite
Purpose: Run the rules of verify_policy.json and aggregate them into a
single ok / partial / fail verdict.

Description:
Each rule names a target (a check function registered below), its
parameters under "assert", a level (quick or full) and a severity. A rule
that fails with severity "fail" fails the run; a failing "warning" rule only
downgrades it to "partial". Scores start from the policy base, lose the
deduction of the failing severity and are aggregated with min.

How it works:
1) load_policy reads verify_policy.json and validates it against
   schemas/verify_policy.json.
2) run_policy filters the rules by level (full includes quick), runs each
   check and turns its (passed, comment) into a CheckFeedback.
3) Unexpected exceptions inside a check become failures of that rule, so
   one broken check never hides the others.

Initial State:
- verify_policy.json present next to this module

Final State:
- VerifyResult with one CheckFeedback per executed rule

Exceptions handled:
- RuntimeError: unreadable policy file
- InvalidInputError: policy that does not match its schema

Version: 0.1.0
Date: 2026-10-19
"""

# ----------- Imports ----------- #
from __future__ import annotations

import itertools
import json
import logging
import random
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from tqdm import tqdm

from strip_homology.basis_cycles import verify_basis, verify_weighted_basis
from strip_homology.betti_formula import (
    betti_growth_formula,
    betti_growth_formula_from_skylines,
    dominant_term,
    expected_dominant,
)
from strip_homology.complexes import (
    ComplexKind,
    ComplexSpec,
    boundary_matrix,
    enumerate_cells,
    strip_complex,
    unordered_complex,
    weighted_complex,
)
from strip_homology.config import ROOT
from strip_homology.core_symbols import boundary
from strip_homology.errors import InvalidInputError
from strip_homology.models import CheckFeedback, VerifyResult
from strip_homology.morse import (
    critical_cells_strip,
    critical_cells_unordered,
    critical_cells_weighted,
    iter_critical_weighted,
    matching_for,
    verify_gradient,
)
from strip_homology.persistence import Bar, barcode, betti_at
from strip_homology.persistence import check_barlength as barlength_report
from strip_homology.rendering import validate_document
from strip_homology.snf_oracle import homology_field, homology_Z, persistent_homology_field
from strip_homology.unordered import check_unordered_relations, growth_check_unordered

logger = logging.getLogger(__name__)

POLICY_FILE = ROOT / "verify_policy.json"
LEVELS = {"quick": ("quick",), "full": ("quick", "full")}

CheckOutcome = Tuple[bool, str]


# ----------- Helpers ----------- #
def _spec(params: dict) -> ComplexSpec:
    values = {"kind": ComplexKind(params["kind"]), "n": params["n"], "w_or_k": params["w_or_k"]}
    if "weights" in params:
        values["weights"] = tuple(params["weights"])
    if params.get("p"):
        values["characteristic"] = params["p"]
    return ComplexSpec(**values)


def _random_weighted(seed: int, n_max: int, weight_max: int) -> ComplexSpec:
    rng = random.Random(seed)
    n = rng.randint(2, n_max)
    weights = sorted(rng.randint(1, weight_max) for _ in range(n))
    return weighted_complex(weights, rng.randint(weights[-1], sum(weights)))


def _sweep_specs(params: dict) -> Iterator[ComplexSpec]:
    """
    Complexes named by a rule: one complex when "n" is given, otherwise a
    sweep over n <= n_max and w <= w_max (only w = n with "full_width"),
    over "p_values" for the unordered kind, or over "seeds" random weight
    vectors for the weighted kind.
    """
    if "n" in params:
        yield _spec(params)
        return
    kind = ComplexKind(params["kind"])
    if kind is ComplexKind.WEIGHTED:
        for seed in range(params["seeds"]):
            yield _random_weighted(seed, params["n_max"], params.get("weight_max", 3))
        return
    for n in range(1, params["n_max"] + 1):
        low = n if params.get("full_width") else 1
        for w in range(low, min(n, params.get("w_max", n)) + 1):
            if kind is ComplexKind.STRIP:
                yield strip_complex(n, w)
                continue
            for p in params.get("p_values", [0]):
                yield unordered_complex(n, w, p)


def _range(params: dict, single: str, upper: str, low: int = 1) -> range:
    if single in params:
        return range(params[single], params[single] + 1)
    return range(low, params[upper] + 1)


def _direct_counts(spec: ComplexSpec, workers: int) -> Dict[int, int]:
    if spec.kind is ComplexKind.STRIP:
        return critical_cells_strip(spec.n, spec.w, mode="enumerate", workers=workers).counts
    if spec.kind is ComplexKind.WEIGHTED:
        return critical_cells_weighted(spec.n, spec.weights, spec.k).counts
    return critical_cells_unordered(spec.n, spec.w, spec.characteristic).counts


# ----------- Checks ----------- #
def check_boundary_squared(params: dict, workers: int, progress: bool, limit: Optional[int] = None) -> CheckOutcome:
    specs = list(_sweep_specs(params))
    for spec in specs:
        for dim in range(2, spec.n):
            product = boundary_matrix(spec, dim - 1, workers=workers).compose(boundary_matrix(spec, dim, workers=workers))
            if product:
                return False, f"∂∘∂ is nonzero in dimension {dim} of {spec.label()} ({len(product)} entries)"
    return True, f"∂∘∂ = 0 on {len(specs)} complexes, up to {specs[-1].label()}"


def check_boundary_equivariance(params: dict, workers: int, progress: bool, limit: Optional[int] = None) -> CheckOutcome:
    checked = 0
    for n in _range(params, "n", "n_max"):
        spec = strip_complex(n, n)
        relabelings = [dict(zip(range(1, n + 1), image)) for image in itertools.permutations(range(1, n + 1))]
        for dim in range(n):
            for cell in enumerate_cells(spec, dim):
                d = boundary(cell)
                for mapping in relabelings:
                    if boundary(cell.relabel(mapping)) != d.relabel(mapping):
                        return False, f"∂ does not commute with relabeling {mapping} on {cell}"
                checked += 1
    return True, f"∂ commutes with every relabeling on {checked} cells"


def check_critical_vs_oracle(params: dict, workers: int, progress: bool, limit: Optional[int] = None) -> CheckOutcome:
    specs = list(_sweep_specs(params))
    integral = params.get("ring") == "Z"
    for spec in tqdm(specs, disable=not progress or len(specs) == 1, desc="oracle"):
        counts = _direct_counts(spec, workers)
        if integral:
            summary = homology_Z(spec, workers=workers, limit=limit)
            if not summary.torsion_free:
                return False, f"{spec.label()} has torsion {summary.torsion}"
        else:
            summary = homology_field(spec, workers=workers, limit=limit)
        if counts != summary.betti:
            return False, f"{spec.label()}: critical counts {counts} differ from Betti numbers {summary.betti}"
    if len(specs) == 1:
        return True, f"{specs[0].label()}: critical counts equal Betti numbers {summary.betti}"
    return True, f"critical counts equal Betti numbers on {len(specs)} complexes"


def check_order_matching(params: dict, workers: int, progress: bool, limit: Optional[int] = None) -> CheckOutcome:
    specs = list(_sweep_specs(params))
    for spec in specs:
        matching = matching_for(spec, limit)
        if not verify_gradient(matching, spec):
            return False, f"the matching on {spec.label()} has a closed V-walk"
        from_order = matching.critical_counts()
        direct = _direct_counts(spec, workers)
        if from_order != direct:
            return False, f"{spec.label()}: matching leaves {from_order}, enumerator gives {direct}"
    if len(specs) == 1:
        return True, f"{specs[0].label()}: gradient matching with critical counts {direct}"
    return True, f"gradient matchings agree with the enumerators on {len(specs)} complexes"


def check_basis(params: dict, workers: int, progress: bool, limit: Optional[int] = None) -> CheckOutcome:
    report = verify_basis(params["n"], params["w"], workers=workers, progress=progress)
    if not report.passed:
        return False, f"{len(report.failures)} failures, first: {report.failures[0]}"
    return True, f"{report.elements} basic cycles verified"


def check_weighted_basis(params: dict, workers: int, progress: bool, limit: Optional[int] = None) -> CheckOutcome:
    weights = tuple(params["weights"])
    critical = list(iter_critical_weighted(len(weights), weights, params["k"]))
    report = verify_weighted_basis(critical, params["k"])
    if not report.passed:
        return False, f"{len(report.failures)} failures, first: {report.failures[0]}"
    return True, f"{report.elements} weighted cycles verified"


def check_barcode_modes(params: dict, workers: int, progress: bool, limit: Optional[int] = None) -> CheckOutcome:
    n = params["n"]
    enumerated = barcode(n, mode="enumerate", workers=workers, progress=progress)
    counted = barcode(n, mode="count", workers=workers)
    if enumerated != counted:
        return False, f"n={n}: enumerate and count modes disagree"
    return True, f"n={n}: {len(counted)} distinct bars agree"


def check_barcode_oracle(params: dict, workers: int, progress: bool, limit: Optional[int] = None) -> CheckOutcome:
    characteristics = params.get("p_values", [params.get("p", 0)])
    for n in _range(params, "n", "n_max"):
        counted = barcode(n, mode="count", workers=workers)
        for p in characteristics:
            if persistent_homology_field(n, p, progress=progress) != counted:
                return False, f"n={n} p={p}: reduction barcode differs from the counted barcode"
    return True, f"reduction and counting agree for n in {_range(params, 'n', 'n_max')} and p in {characteristics}"


def check_barcode_anchor(params: dict, workers: int, progress: bool, limit: Optional[int] = None) -> CheckOutcome:
    n, degree = params["n"], params["degree"]
    computed = barcode(n, (degree, degree), mode="count", workers=workers, progress=progress)
    expected = {Bar(degree, birth, death): int(multiplicity) for birth, death, multiplicity in params["bars"]}
    if computed.bars != expected:
        return False, f"n={n} degree {degree}: got {computed.to_json()}"
    return True, f"n={n} degree {degree}: anchors reproduced"


def check_barlength(params: dict, workers: int, progress: bool, limit: Optional[int] = None) -> CheckOutcome:
    checked = 0
    for n in _range(params, "n", "n_max"):
        report = barlength_report(barcode(n, mode="count", workers=workers))
        if not report.passed:
            return False, f"n={n}: " + "; ".join((report.violations + report.unstable)[:3])
        checked += report.checked
    return True, f"{checked} bars within the length bound"


def check_formula_count(params: dict, workers: int, progress: bool, limit: Optional[int] = None) -> CheckOutcome:
    degrees = _range(params, "j", "j_max", low=0)
    widths = _range(params, "w", "w_max", low=2)
    formulas = {(j, w): betti_growth_formula(j, w) for j in degrees for w in widths}
    for n in range(1, params["n_max"] + 1):
        bars = barcode(n, (degrees[0], degrees[-1]), mode="count", workers=workers)
        for (j, w), formula in formulas.items():
            expected = betti_at(n, w, j, bars)
            if formula.evaluate(n) != expected:
                return False, f"j={j} w={w} n={n}: formula gives {formula.evaluate(n)}, barcode gives {expected}"
    if len(formulas) == 1:
        (j, w), formula = next(iter(formulas.items()))
        return True, f"j={j} w={w}: {formula.render()}"
    return True, f"{len(formulas)} formulas match the counted Betti numbers up to n={params['n_max']}"


def check_formula_skylines(params: dict, workers: int, progress: bool, limit: Optional[int] = None) -> CheckOutcome:
    j, w = params["j"], params["w"]
    shapes = betti_growth_formula(j, w, use_cache=False)
    skylines = betti_growth_formula_from_skylines(j, w)
    if shapes != skylines:
        return False, f"j={j} w={w}: {shapes.render()} != {skylines.render()}"
    return True, f"j={j} w={w}: {shapes.render()}"


def check_dominant_term(params: dict, workers: int, progress: bool, limit: Optional[int] = None) -> CheckOutcome:
    checked = 0
    for w in _range(params, "w", "w_max", low=2):
        for j in _range(params, "j", "j_max", low=0):
            found = dominant_term(betti_growth_formula(j, w), j, w)
            expected = expected_dominant(j, w)
            if found != expected:
                return False, f"j={j} w={w}: dominant term {found}, expected {expected}"
            checked += 1
    return True, f"{checked} dominant terms equal n^(qw+2r)·(q+1)^n"


def check_betti_value(params: dict, workers: int, progress: bool, limit: Optional[int] = None) -> CheckOutcome:
    n, w, j = params["n"], params["w"], params["j"]
    value = critical_cells_strip(n, w, workers=workers).counts.get(j, 0)
    if value != int(params["expected"]):
        return False, f"β_{j}(cell({n},{w})) = {value}, expected {params['expected']}"
    return True, f"β_{j}(cell({n},{w})) = {value}"


def check_unordered_relations_rule(params: dict, workers: int, progress: bool, limit: Optional[int] = None) -> CheckOutcome:
    relations = check_unordered_relations(params["w"], params["p"])
    broken = sorted(name for name, holds in relations.items() if not holds)
    if broken:
        return False, f"relations failing: {', '.join(broken)}"
    return True, f"{len(relations)} relations hold"


def check_unordered_growth(params: dict, workers: int, progress: bool, limit: Optional[int] = None) -> CheckOutcome:
    w = params["w"]
    for p in params.get("p_values", [0]):
        for j in _range(params, "j", "j_max", low=0):
            report = growth_check_unordered(j, w, p, range(1, params["n_max"] + 1))
            if not report.passed:
                return False, f"j={j} w={w} p={p}: growth check failed on {report.values}"
    return True, f"β_j(ucel(n,{w})) grows as predicted up to n={params['n_max']}"


def check_homology_free(params: dict, workers: int, progress: bool, limit: Optional[int] = None) -> CheckOutcome:
    summary = homology_Z(strip_complex(params["n"], params["w"]), workers=workers, progress=progress, limit=limit)
    if not summary.torsion_free:
        return False, f"{summary.complex} has torsion {summary.torsion}"
    return True, f"{summary.complex} is torsion-free with Betti numbers {summary.betti}"


CHECKS: Dict[str, Callable[..., CheckOutcome]] = {
    "boundary_squared": check_boundary_squared,
    "boundary_equivariance": check_boundary_equivariance,
    "critical_vs_oracle": check_critical_vs_oracle,
    "order_matching": check_order_matching,
    "basis": check_basis,
    "weighted_basis": check_weighted_basis,
    "barcode_modes": check_barcode_modes,
    "barcode_oracle": check_barcode_oracle,
    "barcode_anchor": check_barcode_anchor,
    "barlength": check_barlength,
    "formula_count": check_formula_count,
    "formula_skylines": check_formula_skylines,
    "dominant_term": check_dominant_term,
    "betti_value": check_betti_value,
    "unordered_relations": check_unordered_relations_rule,
    "unordered_growth": check_unordered_growth,
    "homology_free": check_homology_free,
}


# ----------- Policy ----------- #
def load_policy(path: Optional[Path] = None) -> dict:
    """
    Loads and validates a verification policy.

    Raises:
        RuntimeError: If the file cannot be read
        InvalidInputError: If the policy does not match its schema or names an unknown target
    """
    path = path or POLICY_FILE
    try:
        with open(path, "r", encoding="utf-8") as f:
            policy = json.load(f)
    except (OSError, json.JSONDecodeError) as err:
        raise RuntimeError(f"Failed to load verification policy {path}: {err}") from err
    validate_document(policy, "verify_policy")
    unknown = sorted({rule["target"] for rule in policy["rules"]} - set(CHECKS))
    if unknown:
        raise InvalidInputError(f"Unknown verification targets: {', '.join(unknown)}")
    return policy


def run_policy(
    level: str = "quick",
    workers: int = 1,
    progress: bool = False,
    path: Optional[Path] = None,
    limit: Optional[int] = None,
) -> VerifyResult:
    """
    Runs every rule of the given level.

    Parameters:
        limit (Optional[int]): cell ceiling for the oracle; defaults to config.cell_limit()

    Returns:
        VerifyResult: 'ok' when all rules pass, 'partial' when only warnings
        fail, 'fail' otherwise
    """
    policy = load_policy(path)
    scoring = policy["scoring"]
    rules = [rule for rule in policy["rules"] if rule["level"] in LEVELS[level]]
    details: List[CheckFeedback] = []
    for rule in tqdm(rules, disable=not progress, desc="verify"):
        try:
            passed, comment = CHECKS[rule["target"]](rule["assert"], workers, progress, limit)
        except Exception as err:
            logger.exception("Rule %s raised", rule["id"])
            passed, comment = False, f"error: {err}"
        if passed:
            details.append(CheckFeedback(id=rule["id"], status="valid", comment=comment, score=scoring["base"]))
            continue
        severity = rule["severity"]
        score = max(0.0, scoring["base"] - scoring["deductions"][severity])
        details.append(
            CheckFeedback(
                id=rule["id"],
                status="fail" if severity == "fail" else "warning",
                comment=f"{rule['message']} {comment}",
                score=score,
            )
        )
    scores = [detail.score for detail in details] or [scoring["base"]]
    score = min(scores) if scoring["aggregation"] == "min" else sum(scores) / len(scores)
    failed = sum(1 for detail in details if detail.status == "fail")
    warned = sum(1 for detail in details if detail.status == "warning")
    status = "fail" if failed else "partial" if warned else "ok"
    summary = f"{len(details) - failed - warned}/{len(details)} rules passed, {failed} failed, {warned} warnings"
    logger.info("verify %s: %s", level, summary)
    return VerifyResult(status=status, level=level, summary=summary, score=score, details=details)
