"""Conflict sets from evaluation matrices.

Rows are test points, columns are original constraint ids, and an entry is 1
when the constraint is violated at the point.  A set of columns that hits
every row is a conflict set; the smallest such set solves a 0-1 covering
problem, which is done here by branch and bound.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

__all__ = ["EvaluationMatrix", "ConflictSet", "CoverMethod", "MatrixError",
           "build_matrix", "cover_exact", "cover_greedy", "verify_conflict",
           "minimize_dropwise", "conflict_json"]


class MatrixError(ValueError):
    pass


class CoverMethod(Enum):
    EXACT = "exact"
    GREEDY = "greedy"


@dataclass
class EvaluationMatrix:
    rows: list[tuple[int, ...]]
    columns: tuple[int, ...]
    mandatory: frozenset[int] = frozenset()
    n_rows_raw: int = 0            # rows before mandatory columns removed any

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], columns: Sequence[int] | None = None,
                  mandatory=()) -> "EvaluationMatrix":
        rows = [tuple(int(bool(x)) for x in r) for r in rows]
        if columns is None:
            columns = tuple(range(1, (len(rows[0]) if rows else 0) + 1))
        mand = frozenset(mandatory)
        pos = [j for j, c in enumerate(columns) if c in mand]
        kept = [r for r in rows if not any(r[j] for j in pos)]
        return cls(kept, tuple(columns), mand, len(rows))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.columns)

    def column_masks(self) -> dict[int, int]:
        """Bitmask of covered rows per column id (mandatory columns excluded)."""
        masks = {}
        for j, c in enumerate(self.columns):
            if c in self.mandatory:
                continue
            m = 0
            for i, r in enumerate(self.rows):
                if r[j]:
                    m |= 1 << i
            masks[c] = m
        return masks

    def is_cover(self, ids) -> bool:
        ids = set(ids) | set(self.mandatory)
        pos = [j for j, c in enumerate(self.columns) if c in ids]
        return all(any(r[j] for j in pos) for r in self.rows)


@dataclass
class ConflictSet:
    ids: tuple[int, ...]
    method: CoverMethod
    verified: bool | None = None
    certified_minimal: bool | None = None

    def __post_init__(self):
        self.ids = tuple(sorted(set(self.ids)))

    def __len__(self):
        return len(self.ids)


# ---------------------------------------------------------------------------
# matrix construction

def build_matrix(trace, m: int | Sequence[int]) -> EvaluationMatrix:
    """Evaluation matrix from an UNSAT trace.

    ``m`` is the number of original constraints (columns ``1..m``) or an
    explicit column id list.  Local conflicts in the trace become mandatory
    columns and rows they cover are dropped.
    """
    columns = tuple(range(1, m + 1)) if isinstance(m, int) else tuple(m)
    index = {c: j for j, c in enumerate(columns)}
    rows = []
    for ids, entries in _trace_rows(trace):
        row = [0] * len(columns)
        for cid, e in zip(ids, entries):
            if e:
                row[index[cid]] = 1
        rows.append(tuple(row))
    mandatory = frozenset().union(*getattr(trace, "local_conflicts", [])) if getattr(
        trace, "local_conflicts", None) else frozenset()
    for r in rows:
        if not any(r) and not mandatory:
            raise MatrixError("trace contains a satisfying test point")
    return EvaluationMatrix.from_rows(rows, columns, mandatory)


def _trace_rows(trace):
    if hasattr(trace, "points"):
        for p in trace.points:
            yield trace.ids, p.entries
    else:
        for ids, entries in trace.rows:
            yield ids, entries


# ---------------------------------------------------------------------------
# covering

def _reduce(rows: list[int], cols: dict[int, int], colbit: dict[int, int]):
    """Row and column dominance reductions on bitmask form.

    ``rows`` are column-bitsets (over positions of ``order``), ``cols`` maps id
    to row bitsets.  Returns reduced ``cols`` restricted to surviving rows.
    """
    changed = True
    while changed:
        changed = False
        # rows: keep minimal rows only (a superset row is covered whenever its subset is)
        uniq = sorted(set(rows), key=lambda r: (bin(r).count("1"), r))
        keep = []
        for r in uniq:
            if not any((k & r) == k for k in keep):
                keep.append(r)
        if len(keep) != len(rows):
            changed = True
        rows = keep
        ids = sorted(cols)
        # columns over the current rows
        masks = {}
        for c in ids:
            bit = colbit[c]
            m = 0
            for i, r in enumerate(rows):
                if r & bit:
                    m |= 1 << i
            masks[c] = m
        drop = set()
        for c in ids:
            if masks[c] == 0:
                drop.add(c)
                continue
            for d in ids:
                if d < c and d not in drop and (masks[c] & masks[d]) == masks[c]:
                    drop.add(c)
                    break
        if drop:
            changed = True
            for c in drop:
                del cols[c]
            rows = [r & ~sum(colbit[c] for c in drop) for r in rows]
    return rows, cols


def _prepare(M: EvaluationMatrix):
    active = [c for c in M.columns if c not in M.mandatory]
    colbit = {c: 1 << k for k, c in enumerate(active)}
    pos = {c: j for j, c in enumerate(M.columns)}
    rows = []
    for r in M.rows:
        bits = 0
        for c in active:
            if r[pos[c]]:
                bits |= colbit[c]
        if not bits:
            raise MatrixError("trace/matrix inconsistency: uncoverable row")
        rows.append(bits)
    return rows, {c: 0 for c in active}, colbit


def _masks(rows, cols, colbit):
    out = {}
    for c in cols:
        bit = colbit[c]
        m = 0
        for i, r in enumerate(rows):
            if r & bit:
                m |= 1 << i
        out[c] = m
    return out


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _greedy(masks: dict[int, int], full: int) -> list[int]:
    chosen, unc = [], full
    while unc:
        best = max(sorted(masks), key=lambda c: _popcount(masks[c] & unc))
        chosen.append(best)
        unc &= ~masks[best]
    return chosen


def _lower_bound(masks, unc) -> int:
    if not unc:
        return 0
    best = max((_popcount(m & unc) for m in masks.values()), default=0)
    if best == 0:
        return 10 ** 9
    n = _popcount(unc)
    return -(-n // best)


def _min_size(masks: dict[int, int], full: int, upper: int) -> int:
    best = [upper]
    ids = sorted(masks)

    def rec(unc, size):
        if not unc:
            best[0] = min(best[0], size)
            return
        if size + _lower_bound(masks, unc) >= best[0]:
            return
        # branch on the uncovered row with the fewest candidate columns
        fewest = None
        u = unc
        while u:
            b = u & -u
            cands = [c for c in ids if masks[c] & b]
            if fewest is None or len(cands) < len(fewest):
                fewest = cands
            u ^= b
        for c in fewest:
            rec(unc & ~masks[c], size + 1)

    rec(full, 0)
    return best[0]


def _lexmin(masks: dict[int, int], full: int, k: int) -> list[int] | None:
    ids = sorted(masks)

    def rec(start, unc, chosen):
        if not unc:
            return list(chosen)
        if len(chosen) + _lower_bound({c: masks[c] for c in ids[start:]}, unc) > k:
            return None
        for t in range(start, len(ids)):
            c = ids[t]
            if not masks[c] & unc:
                continue
            chosen.append(c)
            res = rec(t + 1, unc & ~masks[c], chosen)
            chosen.pop()
            if res is not None:
                return res
        return None

    return rec(0, full, [])


def cover_exact(M: EvaluationMatrix) -> ConflictSet:
    """Minimum cover (plus mandatory columns); ties go to the lexicographically smallest ids."""
    if not M.rows:
        return ConflictSet(tuple(M.mandatory), CoverMethod.EXACT)
    rows, cols, colbit = _prepare(M)
    rows, cols = _reduce(rows, cols, colbit)
    masks = _masks(rows, cols, colbit)
    full = (1 << len(rows)) - 1
    greedy = _greedy(masks, full)
    k = _min_size(masks, full, len(greedy) + 1)
    k = min(k, len(greedy))
    sel = _lexmin(masks, full, k)
    assert sel is not None and len(sel) == k
    return ConflictSet(tuple(sel) + tuple(M.mandatory), CoverMethod.EXACT)


def cover_greedy(M: EvaluationMatrix) -> ConflictSet:
    """Classic greedy cover: most newly covered rows first, ties by lowest id."""
    if not M.rows:
        return ConflictSet(tuple(M.mandatory), CoverMethod.GREEDY)
    rows, cols, colbit = _prepare(M)
    masks = _masks(rows, cols, colbit)
    full = (1 << len(rows)) - 1
    return ConflictSet(tuple(_greedy(masks, full)) + tuple(M.mandatory), CoverMethod.GREEDY)


# ---------------------------------------------------------------------------
# verification

def verify_conflict(sys, cs: ConflictSet, engine: str | Callable = "auto", budget: int | None = None) -> bool | None:
    """Re-decide the subsystem on ``cs.ids``: True if UNSAT, False if SAT, None if inconclusive."""
    from .constraint import preprocess
    from .decision import Status
    decide = _engine(engine, budget)
    d = decide(preprocess(sys.restrict(cs.ids)))
    res = {Status.UNSAT: True, Status.SAT: False}.get(d.status)
    cs.verified = res
    return res


def minimize_dropwise(sys, cs: ConflictSet, engine: str | Callable = "auto",
                      budget: int | None = None) -> ConflictSet:
    """Drop elements one at a time while the remainder stays UNSAT."""
    from .constraint import preprocess
    from .decision import Status
    decide = _engine(engine, budget)
    keep = list(cs.ids)
    certified = True
    for cid in list(cs.ids):
        if len(keep) == 1:
            break
        trial = [c for c in keep if c != cid]
        d = decide(preprocess(sys.restrict(trial)))
        if d.status == Status.UNSAT:
            keep = trial
        elif d.status == Status.UNKNOWN:
            certified = False
    return ConflictSet(tuple(keep), cs.method, cs.verified, certified)


def _engine(engine, budget):
    if callable(engine):
        return engine
    from .solver import decide

    return lambda s: decide(s, engine=engine, budget=budget)


def conflict_json(cs: ConflictSet, M: EvaluationMatrix | None) -> dict:
    out = {"status": "unsat", "conflict": list(cs.ids), "method": cs.method.value,
           "verified": bool(cs.verified)}
    if M is not None:
        out["matrix"] = {"rows": M.n_rows_raw, "cols": len(M.columns), "mandatory": sorted(M.mandatory)}
    return out
