import math
import random

import pytest
import sympy

from nlcs.poly import MultiPoly

SYMS = sympy.symbols("x0:4")


def to_sympy(p: MultiPoly):
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        mon = sympy.Rational(int(c.numerator), int(c.denominator))
        for i, k in enumerate(e):
            if k:
                mon *= SYMS[i] ** k
        expr += mon
    return sympy.expand(expr)


def from_sympy(expr, nvars: int) -> MultiPoly:
    poly = sympy.Poly(sympy.expand(expr), *SYMS[:nvars])
    return MultiPoly(nvars, {e: sympy_q(c) for e, c in poly.terms()})


def sympy_q(c):
    from gmpy2 import mpq

    c = sympy.Rational(c)
    return mpq(int(c.p), int(c.q))


def random_multipoly(rng: random.Random, nvars: int, max_deg: int = 2, terms: int = 4) -> MultiPoly:
    t = {}
    for _ in range(terms):
        e = tuple(rng.randint(0, max_deg) for _ in range(nvars))
        if sum(e) <= max_deg + 1:
            t[e] = rng.randint(-4, 4)
    return MultiPoly(nvars, t)


@pytest.fixture
def rng():
    return random.Random(12345)


def isclose(a, b, tol=1e-9):
    return math.isclose(float(a), float(b), rel_tol=tol, abs_tol=tol)


def witness_holds(sys, witness) -> bool:
    """Exact check of an algebraic witness against every constraint."""
    from nlcs.points import AlgebraicPoint, sign_at_point

    pt = AlgebraicPoint(sys.nvars)
    for a in witness:
        pt = pt.extend(a)
    return all(c.rel.holds(sign_at_point(c.poly, pt)) for c in sys.constraints)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
