"""Cylindrical algebraic decomposition for conjunctions of sign conditions.

Projection uses the Collins operator in Hong's improved form: coefficients
and subresultant coefficients are taken over the reducta of each polynomial.
Lifting builds stacks over exact algebraic sample points and evaluates every
constraint at the lowest level where all of its variables are assigned.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Iterable, Sequence

from .arith import NEG_INF, POS_INF, RealAlgebraic, compare, rational_between
from .constraint import ConstraintSystem
from .decision import Decision, Status
from .points import AlgebraicPoint, DegenerateLifting, real_roots_over, sign_at_point
from .poly import MultiPoly, projection_factors, subresultant_psc

__all__ = ["ProjectionChain", "TracePoint", "CadTrace", "CadOptions", "project",
           "lift", "lift_partial", "decide_cad", "cad_cells"]


@dataclass
class ProjectionChain:
    """``levels[k]`` holds the polynomials whose main variable is ``x_k``."""
    nvars: int
    levels: list[list[MultiPoly]]

    def level_sizes(self) -> list[int]:
        return [len(l) for l in self.levels]

    @classmethod
    def explicit(cls, nvars: int, polys: Iterable[MultiPoly]) -> "ProjectionChain":
        """Place the given polynomials by main variable without projecting."""
        levels: list[list[MultiPoly]] = [[] for _ in range(nvars)]
        for p in polys:
            for f in projection_factors(p):
                if f not in levels[f.main_var]:
                    levels[f.main_var].append(f)
        return cls(nvars, levels)


@dataclass
class TracePoint:
    level: int
    point: AlgebraicPoint
    entries: tuple          # per constraint column: 1 violated, 0 holds, None not applicable
    pruned: bool = False

    def row(self) -> tuple[int, ...]:
        return tuple(e or 0 for e in self.entries)


@dataclass
class CadTrace:
    ids: tuple[int, ...]
    points: list[TracePoint] = field(default_factory=list)

    @property
    def full_points(self) -> list[TracePoint]:
        return [p for p in self.points if not p.pruned]

    @property
    def compensation_rows(self) -> list[TracePoint]:
        return [p for p in self.points if p.pruned]

    def dump(self) -> str:
        lines = []
        for p in self.points:
            flags = "".join("-" if e is None else str(e) for e in p.entries)
            lines.append(f"{p.level} {json.dumps(p.point.to_json())} {flags}")
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass
class CadOptions:
    partial: bool = False
    budget: int | None = None        # maximum number of sample points
    stop_at_sat: bool = True
    chain: ProjectionChain | None = None


class BudgetExceeded(Exception):
    pass


# ---------------------------------------------------------------------------
# projection

def _reducta(p: MultiPoly, v: int) -> list[MultiPoly]:
    out = []
    cs = p.coeffs(v)
    d = len(cs) - 1
    while d >= 0:
        while d >= 0 and cs[d].is_zero():
            d -= 1
        if d < 0:
            break
        out.append(MultiPoly.from_coeffs(cs[:d + 1], v))
        if cs[d].is_constant():
            break
        d -= 1
    return out


def _proj(polys: Sequence[MultiPoly], v: int) -> list[MultiPoly]:
    out: list[MultiPoly] = []
    reds = [_reducta(p, v) for p in polys]
    for red in reds:
        for r in red:
            out.append(r.leading_coefficient(v))
            d = r.degree(v)
            if d >= 2:
                out.extend(subresultant_psc(r, r.derivative(v), v))
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            q = polys[j]
            for r in reds[i]:
                if r.degree(v) >= 1:
                    out.extend(subresultant_psc(r, q, v))
    return out


def project(polys: Iterable[MultiPoly], nvars: int | None = None) -> ProjectionChain:
    """Projection chain of ``polys`` down to the first variable."""
    polys = list(polys)
    if nvars is None:
        nvars = polys[0].nvars if polys else 0
    chain = ProjectionChain.explicit(nvars, polys)
    for v in range(nvars - 1, 0, -1):
        for f in _proj(chain.levels[v], v):
            for g in projection_factors(f):
                lv = chain.levels[g.main_var]
                if g not in lv:
                    lv.append(g)
    for lv in chain.levels:
        lv.sort(key=lambda p: (p.total_degree(), len(p.terms), p.to_str()))
    return chain


# ---------------------------------------------------------------------------
# lifting

def _stack_roots(polys: Sequence[MultiPoly], pt: AlgebraicPoint):
    roots = []
    for p in polys:
        rs = real_roots_over(p, pt)
        if rs:
            roots.extend(rs)
    roots.sort(key=cmp_to_key(lambda a, b: compare(a[0], b[0])))
    uniq = []
    for r in roots:
        if not uniq or compare(uniq[-1][0], r[0]) != 0:
            uniq.append(r)
    return uniq


def stack_samples(polys: Sequence[MultiPoly], pt: AlgebraicPoint) -> list[tuple[RealAlgebraic, MultiPoly | None]]:
    """Sample coordinates of the stack over ``pt``: sectors and sections, ascending."""
    roots = _stack_roots(polys, pt)
    if not roots:
        return [(RealAlgebraic.from_rational(0), None)]
    out = [(RealAlgebraic.from_rational(rational_between(NEG_INF, roots[0][0])), None)]
    for i, r in enumerate(roots):
        out.append(r)
        upper = roots[i + 1][0] if i + 1 < len(roots) else POS_INF
        out.append((RealAlgebraic.from_rational(rational_between(r[0], upper)), None))
    return out


def _constraint_levels(sys: ConstraintSystem) -> list[int]:
    return [max(c.poly.variables(), default=-1) + 1 for c in sys.constraints]


def _run(chain: ProjectionChain, sys: ConstraintSystem, opts: CadOptions):
    n = sys.nvars
    levels = _constraint_levels(sys)
    by_level: list[list[int]] = [[] for _ in range(n + 1)]
    for j, l in enumerate(levels):
        by_level[l].append(j)
    trace = CadTrace(tuple(c.id for c in sys.constraints))
    count = [0]
    first_sat: list[AlgebraicPoint] = []

    def visit(pt: AlgebraicPoint, entries: list):
        k = pt.level
        entries = list(entries)
        violated = False
        for j in by_level[k]:
            c = sys.constraints[j]
            ok = c.rel.holds(sign_at_point(c.poly, pt))
            entries[j] = 0 if ok else 1
            violated |= not ok
        if k == n:
            trace.points.append(TracePoint(k, pt, tuple(entries)))
            if 1 not in entries:
                if not first_sat:
                    first_sat.append(pt)
                if opts.stop_at_sat:
                    return pt
            return None
        if violated and opts.partial:
            trace.points.append(TracePoint(k, pt, tuple(entries), pruned=True))
            return None
        for a, rel in stack_samples(chain.levels[k], pt):
            count[0] += 1
            if opts.budget is not None and count[0] > opts.budget:
                raise BudgetExceeded
            found = visit(pt.extend(a, rel), entries)
            if found is not None:
                return found
        return None

    visit(AlgebraicPoint(n), [None] * len(sys.constraints))
    return (first_sat[0] if first_sat else None), trace, count[0]


def lift(chain: ProjectionChain, sys: ConstraintSystem, options: CadOptions | None = None):
    """Full lifting; returns ``(witness point or None, trace)``."""
    opts = options or CadOptions()
    opts = CadOptions(False, opts.budget, opts.stop_at_sat, chain)
    w, trace, _ = _run(chain, sys, opts)
    return w, trace


def lift_partial(chain: ProjectionChain, sys: ConstraintSystem, options: CadOptions | None = None):
    """Lifting that skips stacks above samples falsifying a lower-level constraint."""
    opts = options or CadOptions()
    opts = CadOptions(True, opts.budget, opts.stop_at_sat, chain)
    w, trace, _ = _run(chain, sys, opts)
    return w, trace


def cad_cells(chain: ProjectionChain) -> list[AlgebraicPoint]:
    """All full-dimensional-index sample points of the CAD defined by ``chain``."""
    empty = ConstraintSystem((), tuple(f"x{i}" for i in range(chain.nvars)))
    _, trace, _ = _run(chain, empty, CadOptions(stop_at_sat=False))
    return [p.point for p in trace.points]


def decide_cad(sys: ConstraintSystem, options: CadOptions | None = None) -> Decision:
    opts = options or CadOptions()
    polys = [c.poly for c in sys.constraints if not c.poly.is_constant()]
    try:
        chain = opts.chain or project(polys, sys.nvars)
        witness, trace, cells = _run(chain, sys, opts)
    except BudgetExceeded:
        return Decision(Status.UNKNOWN, "cad", stats={"cells": opts.budget}, reason="cell budget exceeded")
    except DegenerateLifting as e:
        return Decision(Status.UNKNOWN, "cad", reason=str(e))
    stats = {"cells": cells, "projection": chain.level_sizes(), "rows": len(trace.points)}
    if witness is not None:
        stats["point"] = witness
        return Decision(Status.SAT, "cad", witness=witness.coords, trace=trace, stats=stats)
    return Decision(Status.UNSAT, "cad", trace=trace, stats=stats)
