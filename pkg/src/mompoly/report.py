"""Machine-readable verdicts."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

VERDICT_SCHEMA = "mompoly.verdict/1"
POLY_SCHEMA = "mompoly.poly/1"


def jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, bool) or x is None or isinstance(x, (str, float)):
        return x
    if isinstance(x, int):
        # big counts travel as decimal strings
        return x if abs(x) < 2**53 else str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in x]
    return str(x)


@dataclass
class VerdictReport:
    claim: str
    params: dict
    passed: bool
    witnesses: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.passed and not self.witnesses:
            raise ValueError(f"failed verdict {self.claim!r} must carry a witness")

    def to_json(self) -> dict:
        return {
            "schema": VERDICT_SCHEMA,
            "claim": self.claim,
            "params": jsonable(self.params),
            "passed": self.passed,
            "witnesses": jsonable(self.witnesses),
            "detail": jsonable(self.detail),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)
