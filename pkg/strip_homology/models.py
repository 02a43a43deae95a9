"""
Module: models
Component: Output documents
Purpose: Pydantic models for the documents the command line writes.

Description:
Library modules return domain objects (Barcode, GrowthFormula, reports).
These models give the CLI one place where those objects become plain JSON
documents and CSV rows, with multiplicities always serialized as decimal
strings.

Version: 0.1.0
Date: 2026-10-19
"""

# ----------- Imports ----------- #
from __future__ import annotations

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field


# ----------- Verification ----------- #
class CheckFeedback(BaseModel):
    """
    Outcome of one verification rule.

    Parameters:
        id (str): rule id from verify_policy.json
        status (str): 'valid' | 'warning' | 'fail'
        comment (str): what was checked, or what went wrong
        score (float 0..1)
    """

    id: str
    status: Literal["valid", "warning", "fail"]
    comment: str
    score: float = 1.0


class VerifyResult(BaseModel):
    """
    Aggregated verification run.

    Parameters:
        status (str): 'ok' | 'partial' | 'fail'
        level (str): 'quick' | 'full'
        summary (str)
        score (float): aggregated with the policy's rule (min)
        details (List[CheckFeedback])
    """

    status: Literal["ok", "partial", "fail"]
    level: str
    summary: str
    score: float
    details: List[CheckFeedback] = Field(default_factory=list)

    @property
    def failed(self) -> bool:
        return self.status == "fail"


# ----------- Tables ----------- #
class BettiTable(BaseModel):
    """Betti numbers of cell(n, w) per degree."""

    n: int
    w: int
    betti: Dict[int, int]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "w": self.w,
            "betti": [{"degree": degree, "betti": str(value)} for degree, value in sorted(self.betti.items())],
        }

    def to_rows(self) -> List[List[str]]:
        return [[str(self.n), str(self.w), str(degree), str(value)] for degree, value in sorted(self.betti.items())]


class FormulaDocument(BaseModel):
    """A Betti growth formula with its rendering and optional evaluations."""

    j: int
    w: int
    terms: List[Dict[str, object]]
    rendered: str
    dominant: Dict[str, int]
    values: Optional[Dict[int, int]] = None

    def to_json(self) -> dict:
        payload = {
            "j": self.j,
            "w": self.w,
            "terms": self.terms,
            "rendered": self.rendered,
            "dominant": self.dominant,
        }
        if self.values is not None:
            payload["values"] = [{"n": n, "betti": str(value)} for n, value in sorted(self.values.items())]
        return payload
