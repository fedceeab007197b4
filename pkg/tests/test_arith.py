import random

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from nlcs.arith import (NEG_INF, POS_INF, RealAlgebraic, Sign, compare, count_roots,
                        isolate_real_roots, rational_between, refine, sign_at)

x = sympy.Symbol("x")


def sqrt2():
    return isolate_real_roots([-2, 0, 1])[1]


def coeffs_of(expr):
    return [mpq(int(c.p), int(c.q)) for c in reversed(sympy.Poly(expr, x).all_coeffs())]


def test_sqrt2_intervals():
    a, b = isolate_real_roots([-2, 0, 1])
    assert -2 <= a.lo <= a.hi <= -1
    assert 1 <= b.lo <= b.hi <= 2
    assert a.exact is None and b.exact is None


def test_rational_roots_exact():
    roots = isolate_real_roots([-9, 0, 1])
    assert [r.exact for r in roots] == [-3, 3]


def test_no_real_roots():
    assert isolate_real_roots([1, 0, 1]) == []


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError, match="zero polynomial"):
        isolate_real_roots([0])


def test_compare_examples():
    r2 = sqrt2()
    assert compare(r2, RealAlgebraic.from_rational(mpq(3, 2))) == -1
    assert compare(r2, sqrt2()) == 0
    assert compare(RealAlgebraic.from_rational(-3), RealAlgebraic.from_rational(3)) == -1


def test_sign_at_examples():
    assert sign_at([-9, 0, 1], RealAlgebraic.from_rational(-3)) is Sign.ZERO
    assert sign_at([0, 1], sqrt2()) is Sign.POSITIVE
    assert sign_at([-3, 0, 1], sqrt2()) is Sign.NEGATIVE
    assert sign_at([-2, 0, 1], sqrt2()) is Sign.ZERO
    # (x^2-2)(x+1) vanishes at sqrt2 through the shared factor
    assert sign_at([-2, -2, 1, 1], sqrt2()) is Sign.ZERO
    assert sign_at([2, 0, -1], sqrt2()) is Sign.ZERO
    assert sign_at([-1, 1], isolate_real_roots([-2, 0, 1])[0]) is Sign.NEGATIVE


def test_rational_between_examples():
    m3, m2 = RealAlgebraic.from_rational(-3), RealAlgebraic.from_rational(-2)
    assert rational_between(m3, m2) == mpq(-5, 2)
    q = rational_between(sqrt2(), RealAlgebraic.from_rational(mpq(3, 2)))
    assert 2 < q * q < mpq(9, 4)
    assert rational_between(NEG_INF, RealAlgebraic.from_rational(-5)) < -5
    assert rational_between(RealAlgebraic.from_rational(7), POS_INF) > 7
    with pytest.raises(ValueError):
        rational_between(m2, m3)


def test_refine_examples():
    r = refine(sqrt2(), mpq(1, 8))
    assert r.hi - r.lo <= mpq(1, 8)
    assert r.lo * r.lo <= 2 <= r.hi * r.hi
    three = RealAlgebraic.from_rational(3)
    assert refine(three, mpq(1, 100)).exact == 3
    tight = refine(sqrt2(), mpq(1, 1000))
    assert refine(tight, 1).width() == tight.width()


def test_json_roundtrip():
    r = sqrt2()
    back = RealAlgebraic.from_json(r.to_json())
    assert compare(r, back) == 0
    assert r.to_json()["poly"] == ["-2", "0", "1"]


@pytest.mark.parametrize("seed", range(15))
def test_isolation_matches_sympy(seed):
    rng = random.Random(seed)
    deg = rng.randint(1, 6)
    expr = sum(rng.randint(-5, 5) * x ** k for k in range(deg)) + rng.choice([1, -1, 2]) * x ** deg
    ours = isolate_real_roots(coeffs_of(expr))
    oracle = sorted(set(sympy.real_roots(sympy.Poly(expr, x))), key=lambda r: float(r))
    assert len(ours) == len(oracle)
    for a, b in zip(ours, oracle):
        assert abs(float(a) - float(b.evalf(30))) < 1e-9
        if b.is_rational:
            assert a.exact == mpq(int(b.p), int(b.q))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=7), min_size=1, max_size=5))
def test_planted_rational_roots(qs):
    expr = sympy.Integer(1)
    for q in qs:
        expr *= x - sympy.Rational(q.numerator, q.denominator)
    roots = isolate_real_roots(coeffs_of(sympy.expand(expr)))
    want = sorted(set(mpq(q.numerator, q.denominator) for q in qs))
    assert [r.exact for r in roots] == want


def _random_algebraic(rng):
    while True:
        deg = rng.randint(1, 4)
        c = [rng.randint(-6, 6) for _ in range(deg)] + [1]
        roots = isolate_real_roots(c)
        if roots:
            return rng.choice(roots)


@pytest.mark.parametrize("seed", range(10))
def test_compare_total_order(seed):
    rng = random.Random(seed)
    nums = [_random_algebraic(rng) for _ in range(6)]
    floats = [float(a) for a in nums]
    for i, a in enumerate(nums):
        for j, b in enumerate(nums):
            c = compare(a, b)
            assert c == -compare(b, a)
            if abs(floats[i] - floats[j]) > 1e-9:
                assert c == (1 if floats[i] > floats[j] else -1)
            for k in nums:
                if c <= 0 and compare(b, k) <= 0:
                    assert compare(a, k) <= 0


@pytest.mark.parametrize("seed", range(10))
def test_refinement_preserves_sign(seed):
    rng = random.Random(100 + seed)
    a = _random_algebraic(rng)
    p = [rng.randint(-4, 4) for _ in range(rng.randint(1, 4))] + [1]
    before = sign_at(p, a.copy())
    assert sign_at(p, a.refine(mpq(1, 10 ** 6))) is before
    val = sympy.Poly(list(reversed(p)), x).eval(sympy.Float(float(a), 30))
    if abs(val) > 1e-6:
        assert before is (Sign.POSITIVE if val > 0 else Sign.NEGATIVE)


def test_count_roots():
    assert count_roots([-2, 0, 1], 0, 2) == 1
    assert count_roots([-2, 0, 1], -2, 2) == 2
