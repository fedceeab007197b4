"""Verdicts shared by the decision engines."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .arith import RealAlgebraic


class Status(Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"

    @property
    def exit_code(self) -> int:
        return {"sat": 10, "unsat": 20, "unknown": 30}[self.value]


@dataclass
class Decision:
    status: Status
    engine: str
    witness: tuple[RealAlgebraic, ...] | None = None
    trace: Any = None
    stats: dict = field(default_factory=dict)
    reason: str = ""

    def witness_json(self, names) -> dict | None:
        if self.witness is None:
            return None
        out = {}
        for name, a in zip(names, self.witness):
            if a.exact is not None:
                out[name] = {"value": _q(a.exact), "approx": float(a.exact)}
            else:
                out[name] = {"algebraic": a.to_json(), "approx": float(a)}
        return out


def _q(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
