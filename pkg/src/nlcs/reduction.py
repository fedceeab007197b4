"""Encoding of set covering as minimum conflict extraction.

Column ``i`` of a 0/1 matrix with ``k`` rows becomes the univariate constraint
``p_i = 0`` where ``p_i`` has a simple root at every ``j`` with
``M[j][i] = 0``.  The test point ``x = j`` then violates exactly the
constraints whose column has a 1 in row ``j``, so minimum conflict sets and
minimum covers coincide in size.
"""
from __future__ import annotations

from typing import Sequence

from .conflict import EvaluationMatrix, cover_exact
from .constraint import Constraint, ConstraintSystem, InputError, Relation
from .poly import MultiPoly

__all__ = ["column_polynomial", "matrix_to_system", "roundtrip_check"]


def _check(M: Sequence[Sequence[int]]) -> None:
    if not M or not M[0]:
        raise InputError("matrix must be nonempty")
    width = len(M[0])
    for r in M:
        if len(r) != width or any(e not in (0, 1) for e in r):
            raise InputError("matrix must be rectangular with 0/1 entries")
        if not any(r):
            raise InputError("every row needs at least one 1")


def column_polynomial(M: Sequence[Sequence[int]], i: int) -> tuple[MultiPoly, int]:
    """``prod_j (x - j)^(1 - M[j][i])`` (rows numbered from 1) and the number of multiplications."""
    p = MultiPoly.const(1, 1)
    x = MultiPoly.var(1, 0)
    mults = 0
    for j, row in enumerate(M, start=1):
        if row[i] == 0:
            p = p * (x - j)
            mults += 1
    return p, mults


def matrix_to_system(M: Sequence[Sequence[int]]) -> ConstraintSystem:
    _check(M)
    cons = tuple(Constraint(column_polynomial(M, i)[0], Relation.EQ, i + 1) for i in range(len(M[0])))
    return ConstraintSystem(cons, ("x",))


def roundtrip_check(M: Sequence[Sequence[int]], engine: str = "cad") -> bool:
    """Minimum conflict of the encoded system has the size of a minimum cover of ``M``."""
    from .solver import find_conflict

    res = find_conflict(matrix_to_system(M), engine=engine, cover="exact")
    if res.conflict is None:
        return False
    return len(res.conflict) == len(cover_exact(EvaluationMatrix.from_rows(M)))
