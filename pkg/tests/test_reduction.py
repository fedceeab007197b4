import random
from itertools import combinations, product

import pytest

from nlcs.cad import decide_cad
from nlcs.constraint import InputError, preprocess
from nlcs.decision import Status
from nlcs.reduction import column_polynomial, matrix_to_system, roundtrip_check
from nlcs.solver import find_conflict


def brute_min_cover(M):
    m = len(M[0])
    for k in range(1, m + 1):
        for cols in combinations(range(m), k):
            if all(any(r[j] for j in cols) for r in M):
                return k


def brute_min_conflict(sys):
    for k in range(1, len(sys.constraints) + 1):
        for ids in combinations(sys.ids, k):
            if decide_cad(preprocess(sys.restrict(ids))).status is Status.UNSAT:
                return k


def test_single_entry():
    s = matrix_to_system([[1]])
    assert s.constraints[0].poly.is_constant() and s.constraints[0].poly.constant_value() == 1
    res = find_conflict(s, "cad")
    assert res.decision.status is Status.UNSAT and res.conflict.ids == (1,)


def test_antidiagonal():
    s = matrix_to_system([[0, 1], [1, 0]])
    assert [c.poly.evaluate([1]) for c in s.constraints] == [0, -1]
    assert [c.poly.evaluate([2]) for c in s.constraints] == [1, 0]
    assert len(find_conflict(s, "cad").conflict) == 2 == brute_min_cover([[0, 1], [1, 0]])


def test_all_ones():
    s = matrix_to_system([[1, 1], [1, 1]])
    assert all(c.poly.is_constant() for c in s.constraints)
    assert len(find_conflict(s, "cad").conflict) == 1


def test_identity_3():
    assert roundtrip_check([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_invalid_matrices():
    for bad in ([], [[0, 0]], [[1, 2]], [[1, 0], [1]]):
        with pytest.raises(InputError):
            matrix_to_system(bad)


def test_multiplication_count():
    M = [[0, 1, 1], [0, 0, 1], [1, 0, 1], [0, 1, 0]]
    for i in range(3):
        p, mults = column_polynomial(M, i)
        assert mults <= len(M) and p.degree(0) == sum(1 for r in M if r[i] == 0)


def test_all_2x2():
    nz = [r for r in product((0, 1), repeat=2) if any(r)]
    for M in product(nz, repeat=2):
        assert roundtrip_check([list(r) for r in M])


@pytest.mark.parametrize("seed", range(15))
def test_random_4x4_against_subset_oracle(seed):
    rng = random.Random(seed)
    M = []
    while len(M) < 4:
        r = [rng.randint(0, 1) for _ in range(4)]
        if any(r):
            M.append(r)
    assert roundtrip_check(M)
    assert brute_min_conflict(matrix_to_system(M)) == brute_min_cover(M)
