import random

import mpmath
import pytest
import sympy
from gmpy2 import mpq

from conftest import SYMS, random_multipoly, to_sympy
from nlcs.arith import Sign, isolate_real_roots
from nlcs.points import AlgebraicPoint, real_roots_over, sign_at_point
from nlcs.poly import MultiPoly, parse_poly


def P(text):
    return parse_poly(text, ["x", "y", "z"])


def sqrt2_point():
    r = isolate_real_roots([-2, 0, 1])[1]
    return AlgebraicPoint(3).extend(r)


def test_sign_on_circle_over_sqrt2():
    pt = sqrt2_point()
    roots = real_roots_over(P("x^2 + y^2 - 3"), pt)
    assert [float(r) for r, _ in roots] == pytest.approx([-1.0, 1.0])
    full = pt.extend(*roots[1])
    assert sign_at_point(P("x^2 + y^2 - 3"), full) is Sign.ZERO
    assert sign_at_point(P("x*y - 1"), full) is Sign.POSITIVE
    assert sign_at_point(P("y - 1"), full) is Sign.ZERO


def test_nested_radical():
    # y = sqrt(sqrt2): y^2 - x = 0 over x = sqrt2
    pt = sqrt2_point()
    (neg, pos) = real_roots_over(P("y^2 - x"), pt)
    full = pt.extend(*pos)
    assert sign_at_point(P("y^4 - 2"), full) is Sign.ZERO
    assert sign_at_point(P("y - x"), full) is Sign.NEGATIVE
    assert sign_at_point(P("x*y - 1"), full) is Sign.POSITIVE


def test_vanishing_fibre():
    pt = sqrt2_point()
    assert real_roots_over(P("(x^2 - 2)*y"), pt) is None


@pytest.mark.parametrize("seed", range(20))
def test_sign_against_numeric(seed):
    rng = random.Random(seed)
    base = rng.choice([[-2, 0, 1], [-3, 0, 1], [-1, -1, 1], [-5, 0, 0, 1]])
    a = rng.choice(isolate_real_roots(base))
    pt = AlgebraicPoint(3).extend(a)
    g = P("y^2") + random_multipoly(rng, 3, 1, 2).subs({2: 0})
    roots = real_roots_over(g, pt)
    if not roots:
        pytest.skip("empty fibre")
    r, rel = roots[rng.randrange(len(roots))]
    full = pt.extend(r, rel)
    f = random_multipoly(rng, 3, 2, 4).subs({2: 0})
    mpmath.mp.dps = 60
    exact_x = [s for s in sympy.real_roots(sympy.Poly(list(reversed([int(c) for c in base])), SYMS[0]))
               if abs(float(s) - float(a)) < 1e-9][0]
    xn = sympy.N(exact_x, 60)
    gy = sympy.Poly(to_sympy(g).subs(SYMS[0], xn), SYMS[1])
    ys = [y for y in mpmath.polyroots([mpmath.mpf(str(c)) for c in gy.all_coeffs()],
                                      maxsteps=400, extraprec=200)
          if abs(mpmath.im(y)) < 1e-20 and abs(float(mpmath.re(y)) - float(r)) < 1e-6]
    assert ys
    num = sympy.N(to_sympy(f).subs({SYMS[0]: xn, SYMS[1]: sympy.Float(str(mpmath.re(ys[0])), 60)}), 40)
    got = sign_at_point(f, full)
    if abs(num) > 1e-20:
        assert got is (Sign.POSITIVE if num > 0 else Sign.NEGATIVE)
    else:
        assert sympy.simplify(to_sympy(f).subs({SYMS[0]: exact_x})) == 0 or got is Sign.ZERO


def test_rational_point_evaluation():
    pt = AlgebraicPoint(2)
    for q in (mpq(1, 2), mpq(-3)):
        pt = pt.extend(isolate_real_roots(MultiPoly.from_univariate([-q, 1]))[0])
    f = parse_poly("x*y + 3/2", ["x", "y"])
    assert sign_at_point(f, pt) is Sign.ZERO
