"""Named-row error and coherence budgets with per-kind combination rules."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

from .errors import IncompleteBudgetError, ValidationError

TIME_KINDS = ("T1", "T2")
PROBABILITY_KINDS = ("decoherence", "error")
KINDS = TIME_KINDS + PROBABILITY_KINDS


@dataclass(frozen=True)
class BudgetRow:
    mechanism: str
    kind: str
    value: float
    category: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown budget kind '{self.kind}'")
        if not (self.value >= 0):
            raise ValidationError(f"budget value for '{self.mechanism}' must be non-negative")


@dataclass
class Budget:
    """Ordered rows. Times combine as reciprocal rate sums, probabilities add."""

    title: str = ""
    rows: list = field(default_factory=list)

    def add(self, mechanism: str, kind: str, value: float, category: str = "") -> "Budget":
        self.rows.append(BudgetRow(mechanism, kind, float(value), category))
        return self

    def values(self, kind: str) -> list[float]:
        return [r.value for r in self.rows if r.kind == kind]

    def combined(self, kind: str) -> float:
        vals = self.values(kind)
        if kind in TIME_KINDS:
            if not vals:
                return math.inf
            rate = sum(0.0 if math.isinf(v) else 1.0 / v for v in vals)
            return math.inf if rate == 0 else 1.0 / rate
        if kind in PROBABILITY_KINDS:
            return float(sum(vals))
        raise ValidationError(f"unknown budget kind '{kind}'")

    @property
    def combined_T1(self) -> float:
        return self.combined("T1")

    @property
    def combined_T2(self) -> float:
        return self.combined("T2")

    def require(self, mechanisms) -> None:
        present = {r.mechanism for r in self.rows}
        missing = [m for m in mechanisms if m not in present]
        if missing:
            raise IncompleteBudgetError(missing)

    def records(self) -> list[dict]:
        out = [asdict(r) for r in self.rows]
        for kind in KINDS:
            if self.values(kind):
                out.append({"mechanism": "combined", "kind": kind,
                            "value": self.combined(kind), "category": ""})
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["mechanism", "category", "kind", "value"])
        for rec in self.records():
            w.writerow([rec["mechanism"], rec["category"], rec["kind"], f"{rec['value']:.9g}"])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"title": self.title, "rows": self.records()}, indent=2,
                          sort_keys=True)
