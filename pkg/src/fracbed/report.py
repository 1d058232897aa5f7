"""Inequality reports: both sides of a claim, error budgets and a verdict."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .params import Params

THEOREM_IDS = ("BBM", "T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9", "Pitt",
               "Uncertainty", "Lemma1", "SW", "Triangle", "Reduction", "HLS")
VERDICTS = ("holds", "holds-within-error", "violated", "divergent")
SHARP = "sharp"
PROOF_CHAIN = "proof-chain, not claimed sharp"
IDENTITY = "identity"


def judge(lhs: float, rhs: float, lhs_error: float, rhs_error: float,
          direction: str, tolerance: float = 0.0) -> str:
    """Verdict for lhs >= rhs (``'>='``), lhs <= rhs (``'<='``) or lhs = rhs (``'=='``)."""
    vals = (lhs, rhs, lhs_error, rhs_error)
    if not all(math.isfinite(v) for v in vals) or rhs == 0:
        return "divergent"
    ratio = lhs / rhs
    slack = (lhs_error + rhs_error) / abs(rhs) + tolerance
    if direction == ">=":
        if ratio >= 1:
            return "holds"
        return "holds-within-error" if ratio >= 1 - slack else "violated"
    if direction == "<=":
        if ratio <= 1:
            return "holds"
        return "holds-within-error" if ratio <= 1 + slack else "violated"
    if direction == "==":
        if abs(ratio - 1) <= tolerance:
            return "holds"
        return "holds-within-error" if abs(ratio - 1) <= slack else "violated"
    raise ValueError(f"direction must be '>=', '<=' or '==', got {direction!r}")


@dataclass
class InequalityReport:
    theorem_id: str
    params: Params
    function_ids: list[str]
    lhs: float
    rhs: float
    constant: float
    lhs_error: float = 0.0
    rhs_error: float = 0.0
    direction: str = ">="
    constant_label: str = SHARP
    tolerance: float = 0.0
    runtime_ms: float = 0.0
    notes: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    verdict: str = ""

    def __post_init__(self):
        if self.theorem_id not in THEOREM_IDS:
            raise ValueError(f"unknown theorem id {self.theorem_id!r}")
        if not self.verdict:
            self.verdict = judge(self.lhs, self.rhs, self.lhs_error, self.rhs_error,
                                 self.direction, self.tolerance)
        elif self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def ratio(self) -> float:
        if self.rhs == 0 or not math.isfinite(self.rhs):
            return math.nan
        return self.lhs / self.rhs

    @property
    def ok(self) -> bool:
        return self.verdict in ("holds", "holds-within-error")

    def as_dict(self) -> dict:
        return {
            "theoremId": self.theorem_id,
            "params": self.params.as_dict(),
            "functionIds": list(self.function_ids),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "constant": self.constant,
            "ratio": self.ratio,
            "lhsError": self.lhs_error,
            "rhsError": self.rhs_error,
            "direction": self.direction,
            "constantLabel": self.constant_label,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "runtimeMs": self.runtime_ms,
            "notes": list(self.notes),
            "extra": self.extra,
        }

    def to_json(self, timestamps: bool = True) -> str:
        d = self.as_dict()
        if not timestamps:
            d.pop("runtimeMs")
        return json.dumps(d, sort_keys=True, allow_nan=True)

    @classmethod
    def from_dict(cls, d: dict) -> "InequalityReport":
        pd = dict(d["params"])
        pd["lam"] = pd.pop("lambda")
        return cls(theorem_id=d["theoremId"], params=Params(**pd),
                   function_ids=list(d["functionIds"]), lhs=d["lhs"], rhs=d["rhs"],
                   constant=d["constant"], lhs_error=d["lhsError"],
                   rhs_error=d["rhsError"], direction=d["direction"],
                   constant_label=d["constantLabel"], tolerance=d["tolerance"],
                   runtime_ms=d.get("runtimeMs", 0.0), notes=list(d["notes"]),
                   extra=dict(d["extra"]), verdict=d["verdict"])

    @classmethod
    def from_json(cls, s: str) -> "InequalityReport":
        return cls.from_dict(json.loads(s))

    def summary(self) -> str:
        return (f"{self.theorem_id:<11} {self.verdict:<19} ratio={self.ratio:.6g} "
                f"lhs={self.lhs:.6g} rhs={self.rhs:.6g} [{self.constant_label}]")
