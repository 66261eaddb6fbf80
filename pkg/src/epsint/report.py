"""Check reports: JSON-serializable pass/fail records with witnesses."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .errors import TheoremViolation
from .rational import format_rational

# Every report carries these so that a failure cannot be blamed on a missing
# closure: in finite dimension over polyhedral data they are all identities.
COLLAPSE_NOTES = (
    "weak-* closures and closed convex hulls are identities for finite-dimensional polyhedral data",
    "finite atomic measure: weak (Gelfand) and strong (Bochner) integrals coincide; no singular part",
    "intersection over gamma > 0 of budget-(eps1 + gamma) unions equals the gamma = 0 union",
)


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, float):
        if obj in (float("inf"), float("-inf")):
            return format_rational(obj)
        return obj
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


@dataclass
class CheckReport:
    theorem: str
    status: str = "pass"
    witnesses: list = field(default_factory=list)
    counterexample: Optional[dict] = None
    notes: list = field(default_factory=lambda: list(COLLAPSE_NOTES))
    arithmetic: str = "exact"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def fail(self, message: str, **payload) -> "CheckReport":
        if self.status == "pass":
            self.status = "fail"
            self.counterexample = {"message": message, **payload}
        return self

    def merge(self, other: "CheckReport", label: str) -> None:
        self.witnesses.append({"subcheck": label, "status": other.status})
        if not other.passed:
            self.fail(f"{label} failed", sub=other.to_json())

    def raise_for_status(self) -> "CheckReport":
        if not self.passed:
            raise TheoremViolation(f"{self.theorem}: {self.counterexample.get('message')}", self.counterexample)
        return self

    def to_json(self) -> dict:
        return to_jsonable(
            {
                "theorem": self.theorem,
                "status": self.status,
                "witnesses": self.witnesses,
                "counterexample": self.counterexample,
                "notes": self.notes,
                "arithmetic": self.arithmetic,
            }
        )

    def to_text(self) -> str:
        lines = [f"[{self.status.upper()}] {self.theorem} ({self.arithmetic})"]
        lines.append(f"  witnesses: {len(self.witnesses)}")
        if self.counterexample:
            lines.append(f"  counterexample: {self.counterexample.get('message')}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)
