import random
from itertools import combinations, product

import pytest
from gmpy2 import mpq

from nlcs.cad import CadOptions, decide_cad
from nlcs.conflict import (ConflictSet, CoverMethod, EvaluationMatrix, MatrixError, build_matrix,
                           conflict_json, cover_exact, cover_greedy, minimize_dropwise,
                           verify_conflict)
from nlcs.constraint import parse_native, preprocess
from nlcs.decision import Status
from nlcs.vs import decide_vs

HYP = "vars: x y\nx > 1\ny > 1\nx*y < 1\nx + y > 5\n"


def brute_min_cover(rows, m):
    for k in range(1, m + 1):
        for cols in combinations(range(m), k):
            if all(any(r[j] for j in cols) for r in rows):
                return k
    raise AssertionError("no cover")


def test_matrix_from_two_points():
    s = preprocess(parse_native("vars: x\nx > 0\nx < 0\n"))
    d = decide_cad(s, CadOptions(stop_at_sat=False))
    M = build_matrix(d.trace, 2)
    # the sample at x = 0 violates both, the other two one each
    assert sorted(set(M.rows)) == [(0, 1), (1, 0), (1, 1)]
    assert M.mandatory == frozenset() and cover_exact(M).ids == (1, 2)


def test_matrix_mandatory_from_local_conflict():
    s = preprocess(parse_native("vars: x y\nx >= 0\ny^2 + x > 3\nx < 0\n"))
    d = decide_vs(s)
    assert d.status is Status.UNSAT
    M = build_matrix(d.trace, 3)
    assert M.mandatory == frozenset({1, 3})
    assert all(not r[0] and not r[2] for r in M.rows)
    assert cover_exact(M).ids == (1, 3)


def test_matrix_compensation_rows():
    s = preprocess(parse_native("vars: x y\nx^2 < 0\ny > 0\n"))
    d = decide_cad(s, CadOptions(partial=True))
    M = build_matrix(d.trace, 2)
    assert M.rows and set(M.rows) == {(1, 0)}


def test_build_matrix_rejects_satisfying_row():
    s = preprocess(parse_native("vars: x\nx > 0\n"))
    d = decide_cad(s, CadOptions(stop_at_sat=False))
    with pytest.raises(MatrixError):
        build_matrix(d.trace, 1)


def test_cover_examples():
    I3 = EvaluationMatrix.from_rows([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert cover_exact(I3).ids == (1, 2, 3)
    assert cover_greedy(I3).ids == (1, 2, 3)
    M = EvaluationMatrix.from_rows([(1, 0, 1), (0, 1, 1), (1, 1, 1)])
    assert cover_exact(M).ids == (3,)
    assert cover_greedy(M).ids == (3,)


def test_greedy_suboptimal():
    # greedy takes the big middle column first, then still needs two more
    M = EvaluationMatrix.from_rows([(1, 0, 1), (1, 0, 1), (0, 1, 1), (0, 1, 1), (1, 0, 0), (0, 1, 0)])
    ex, gr = cover_exact(M), cover_greedy(M)
    assert len(ex) == 2 and len(gr) == 3
    assert M.is_cover(ex.ids) and M.is_cover(gr.ids)


def test_uncoverable_row():
    with pytest.raises(MatrixError, match="inconsistency"):
        cover_exact(EvaluationMatrix.from_rows([(1, 0), (0, 0)]))


@pytest.mark.parametrize("seed", range(40))
def test_exact_and_greedy_vs_brute_force(seed):
    rng = random.Random(seed)
    k, m = rng.randint(1, 6), rng.randint(1, 6)
    rows = []
    while len(rows) < k:
        r = tuple(rng.randint(0, 1) for _ in range(m))
        if any(r):
            rows.append(r)
    M = EvaluationMatrix.from_rows(rows)
    ex, gr = cover_exact(M), cover_greedy(M)
    assert M.is_cover(ex.ids) and M.is_cover(gr.ids)
    assert len(ex) == brute_min_cover(rows, m) <= len(gr)


def test_exhaustive_2x2():
    nz = [r for r in product((0, 1), repeat=2) if any(r)]
    for rows in product(nz, repeat=2):
        assert len(cover_exact(EvaluationMatrix.from_rows(rows))) == brute_min_cover(rows, 2)


def test_exact_tie_break_lexicographic():
    M = EvaluationMatrix.from_rows([(1, 1, 1)])
    assert cover_exact(M).ids == (1,)


def test_verify_examples():
    s = parse_native("vars: x\nx > 0\nx < 0\n")
    assert verify_conflict(s, ConflictSet((1, 2), CoverMethod.EXACT)) is True
    h = parse_native(HYP)
    cs = ConflictSet((1, 2, 3), CoverMethod.EXACT)
    assert verify_conflict(h, cs) is True and cs.verified is True
    assert verify_conflict(h, ConflictSet((1, 3), CoverMethod.EXACT)) is False
    # x = 2, y = 1/10 satisfies x > 1 and xy < 1
    assert h.restrict([1, 3]).satisfied_by([mpq(2), mpq(1, 10)])


def test_minimum_conflict_size_by_subsets():
    h = parse_native(HYP)
    unsat = [ids for k in range(1, 5) for ids in combinations(h.ids, k)
             if decide_cad(preprocess(h.restrict(ids))).status is Status.UNSAT]
    assert min(len(u) for u in unsat) == 3


def test_minimize_examples():
    h = parse_native(HYP)
    out = minimize_dropwise(h, ConflictSet((1, 2, 3, 4), CoverMethod.EXACT))
    assert out.ids == (1, 2, 3) and out.certified_minimal
    assert minimize_dropwise(h, out).ids == (1, 2, 3)
    one = parse_native("vars: x\nx^2 < 0\nx > 5\n")
    assert minimize_dropwise(one, ConflictSet((1,), CoverMethod.EXACT)).ids == (1,)


def test_minimize_unknown_not_certified():
    h = parse_native(HYP)
    from nlcs.decision import Decision

    def unknown(_):
        return Decision(Status.UNKNOWN, "stub")
    out = minimize_dropwise(h, ConflictSet((1, 2, 3), CoverMethod.EXACT), unknown)
    assert out.ids == (1, 2, 3) and out.certified_minimal is False


def test_verify_inconclusive():
    from nlcs.decision import Decision
    h = parse_native(HYP)
    cs = ConflictSet((1, 2, 3), CoverMethod.EXACT)
    assert verify_conflict(h, cs, lambda _: Decision(Status.UNKNOWN, "stub")) is None


def test_conflict_json_shape():
    M = EvaluationMatrix.from_rows([(1, 0), (0, 1)])
    cs = cover_exact(M)
    cs.verified = True
    assert conflict_json(cs, M) == {"status": "unsat", "conflict": [1, 2], "method": "exact",
                                    "verified": True, "matrix": {"rows": 2, "cols": 2, "mandatory": []}}
