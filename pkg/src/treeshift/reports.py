"""Check records and campaign reports, with JSON and CSV output."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import __version__

GTS_LAMBDA = "GTS_LAMBDA"
GTS_MU = "GTS_MU"
KELMANS_THM1 = "KELMANS_THM1"
COLLAPSE_THM2 = "COLLAPSE_THM2"
MINIMALITY = "MINIMALITY"
IDENTITY_2AJI = "IDENTITY_2AJI"
POSET_MINIMAL = "POSET_MINIMAL"
POSET_MAXIMAL = "POSET_MAXIMAL"
COUNTEREXAMPLE_THM2 = "COUNTEREXAMPLE_THM2"


def gts_rho(alpha: float) -> str:
    return f"GTS_RHO({alpha:g})"


def _move_key(move) -> str:
    return "" if move is None else json.dumps(move, sort_keys=True, separators=(",", ":"))


@dataclass
class CheckRecord:
    theorem_id: str
    tree_code: str
    quantity: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    check: str
    move: dict | None = None
    detail: dict = field(default_factory=dict)

    def sort_key(self) -> tuple:
        return (self.theorem_id, self.tree_code, _move_key(self.move), self.quantity)

    def to_dict(self) -> dict:
        out = {
            "theorem_id": self.theorem_id,
            "tree_code": self.tree_code,
            "quantity": self.quantity,
            "move": self.move,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "check": self.check,
            "passed": self.passed,
        }
        if self.detail:
            out["detail"] = self.detail
        return out


def strict(theorem_id, code, quantity, lhs, rhs, tol, move=None, detail=None) -> CheckRecord:
    margin = float(lhs) - float(rhs)
    return CheckRecord(theorem_id, code, quantity, float(lhs), float(rhs), margin, margin > tol,
                       "strict", move, detail or {})


def equal(theorem_id, code, quantity, lhs, rhs, tol, move=None, detail=None) -> CheckRecord:
    margin = float(lhs) - float(rhs)
    return CheckRecord(theorem_id, code, quantity, float(lhs), float(rhs), margin,
                       abs(margin) <= tol, "equal", move, detail or {})


def at_least(theorem_id, code, quantity, lhs, rhs, tol, move=None, detail=None) -> CheckRecord:
    margin = float(lhs) - float(rhs)
    return CheckRecord(theorem_id, code, quantity, float(lhs), float(rhs), margin,
                       margin >= -tol, "at_least", move, detail or {})


def exact(theorem_id, code, quantity, lhs, rhs, move=None, detail=None, passed=None) -> CheckRecord:
    """Integer check; ``passed`` overrides plain equality for set-membership style checks."""
    ok = lhs == rhs if passed is None else passed
    return CheckRecord(theorem_id, code, quantity, lhs, rhs, lhs - rhs, bool(ok), "exact",
                       move, detail or {})


@dataclass
class CampaignReport:
    campaign: str
    n: int
    alpha_grid: list[float]
    tol: float
    records: list[CheckRecord]
    diagnostics: dict = field(default_factory=dict)
    tool_version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def __post_init__(self) -> None:
        self.records.sort(key=CheckRecord.sort_key)

    @property
    def summary(self) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = {}
        for r in self.records:
            s = out.setdefault(r.theorem_id, {"total": 0, "passed": 0, "failed": 0})
            s["total"] += 1
            s["passed" if r.passed else "failed"] += 1
        return out

    @property
    def min_margin(self) -> dict[str, float]:
        """Smallest margin per theorem among strict checks."""
        out: dict[str, float] = {}
        for r in self.records:
            if r.check == "strict":
                out[r.theorem_id] = min(out.get(r.theorem_id, math.inf), r.margin)
        return out

    @property
    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed]

    @property
    def passed(self) -> bool:
        return not self.failures and not self.diagnostics.get("failures")

    def select(self, theorem_id=None, quantity=None) -> list[CheckRecord]:
        return [
            r for r in self.records
            if (theorem_id is None or r.theorem_id == theorem_id)
            and (quantity is None or r.quantity == quantity)
        ]

    def to_dict(self) -> dict:
        return {
            "campaign": self.campaign,
            "n": self.n,
            "alpha_grid": list(self.alpha_grid),
            "tol": self.tol,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
            "passed": self.passed,
            "summary": self.summary,
            "min_margin": self.min_margin,
            "diagnostics": self.diagnostics,
            "records": [r.to_dict() for r in self.records],
        }


CSV_COLUMNS = ["campaign", "n", "theorem_id", "tree_code", "quantity", "move",
               "lhs", "rhs", "margin", "passed"]


def reports_to_json(reports: list[CampaignReport]) -> str:
    doc = {
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "passed": all(r.passed for r in reports),
        "reports": [r.to_dict() for r in reports],
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def reports_to_csv(reports: list[CampaignReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rep in reports:
        for r in rep.records:
            w.writerow([rep.campaign, rep.n, r.theorem_id, r.tree_code, r.quantity,
                        _move_key(r.move), repr(r.lhs), repr(r.rhs), repr(r.margin),
                        str(r.passed).lower()])
    return buf.getvalue()
