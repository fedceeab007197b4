"""Engine dispatch and the conflict-set pipeline."""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

from .cad import CadOptions, decide_cad
from .conflict import (ConflictSet, CoverMethod, EvaluationMatrix, build_matrix, cover_exact,
                       cover_greedy, minimize_dropwise, verify_conflict)
from .constraint import ConstraintSystem, InputError, preprocess
from .decision import Decision, Status
from .vs import VsOptions, decide_vs

__all__ = ["ENGINES", "decide", "ConflictResult", "find_conflict"]

ENGINES = ("auto", "cad", "vs")


def decide(sys: ConstraintSystem, engine: str = "auto", budget: int | None = None,
           partial: bool = True, hybrid: bool = False,
           order: Sequence[str] | None = None) -> Decision:
    """Decide satisfiability of a conjunction.

    ``auto`` runs virtual substitution and hands the whole problem to CAD as
    soon as a degree exceeds two; ``vs`` reports unknown instead.  ``order``
    names the variables in CAD projection order (first lifted first); for
    virtual substitution it is the elimination order.
    """
    if engine not in ENGINES:
        raise InputError(f"unknown engine {engine!r}")
    sys = preprocess(sys)
    if sys.conflict is not None:
        return Decision(Status.UNSAT, "preprocess", stats={"conflict": sorted(sys.conflict)})
    work, perm = sys, None
    if order is not None:
        work = sys.reorder(order)
        perm = [list(order).index(v) for v in sys.variables]
    if engine == "cad":
        d = decide_cad(work, CadOptions(partial=partial, budget=budget))
    else:
        vorder = list(range(work.nvars)) if order is not None else None
        d = decide_vs(work, VsOptions(budget=budget, hybrid=hybrid, fallback=(engine == "auto"),
                                      partial_cad=partial, order=vorder))
    if perm is not None and d.witness is not None:
        d.witness = tuple(d.witness[perm[i]] for i in range(sys.nvars))
    return d


@dataclass
class ConflictResult:
    decision: Decision
    conflict: ConflictSet | None = None
    matrix: EvaluationMatrix | None = None
    t_decide_ms: float = 0.0
    t_conflict_ms: float = 0.0


def find_conflict(sys: ConstraintSystem, engine: str = "auto", cover: str = "exact",
                  partial: bool = True, verify: bool = False, minimize: bool = False,
                  budget: int | None = None, hybrid: bool = False,
                  order: Sequence[str] | None = None) -> ConflictResult:
    """Decide ``sys`` and, when UNSAT, extract a conflict set from the trace."""
    method = CoverMethod(cover)
    t0 = time.perf_counter()
    pre = preprocess(sys)
    d = decide(pre, engine, budget, partial, hybrid, order)
    t1 = time.perf_counter()
    res = ConflictResult(d, t_decide_ms=(t1 - t0) * 1e3)
    if d.status is not Status.UNSAT:
        return res
    columns = [c.id for c in sys.constraints]
    if pre.conflict is not None:
        cs = ConflictSet(tuple(pre.conflict), method)
        M = EvaluationMatrix.from_rows([], columns, pre.conflict)
    else:
        M = build_matrix(d.trace, columns)
        cs = cover_exact(M) if method is CoverMethod.EXACT else cover_greedy(M)
    verify_engine = "cad" if engine == "cad" else "auto"
    if minimize:
        cs = minimize_dropwise(sys, cs, verify_engine, budget)
    if verify:
        verify_conflict(sys, cs, verify_engine, budget)
    res.conflict, res.matrix = cs, M
    res.t_conflict_ms = (time.perf_counter() - t1) * 1e3
    return res
