import random
from itertools import combinations

import pytest
import sympy
from gmpy2 import mpq

from conftest import random_multipoly, to_sympy
from nlcs.arith import Sign, isolate_real_roots, sign_at
from nlcs.cad import CadOptions, ProjectionChain, cad_cells, decide_cad, lift, lift_partial, project
from nlcs.constraint import parse_native
from nlcs.decision import Status
from nlcs.gen import random_system
from nlcs.points import sign_at_point
from nlcs.poly import parse_poly


def P(text, names=("x", "y")):
    return parse_poly(text, list(names))


def sys_of(text):
    return parse_native(text)


def base_roots(chain):
    out = []
    for p in chain.levels[0]:
        out += [float(r) for r in isolate_real_roots(p.as_univariate())]
    return out


def test_project_two_curves_contains_intersections():
    chain = project([P("x^2 + y^2 - 1"), P("x^2 - y + 1/2")], 2)
    roots = base_roots(chain)
    c = float(sympy.sqrt(sympy.Rational(1, 2) * (sympy.sqrt(7) - 2)))
    for want in (-1, -c, c, 1):
        assert any(abs(r - want) < 1e-12 for r in roots)


def test_project_single_line_has_no_base_roots():
    assert base_roots(project([P("y - x")], 2)) == []


def test_project_circle():
    roots = base_roots(project([P("x^2 + y^2 - 1")], 2))
    assert any(abs(r + 1) < 1e-12 for r in roots) and any(abs(r - 1) < 1e-12 for r in roots)


def test_explicit_chain_stacks():
    polys = [P("x^2 + y^2 - 1"), P("x^2 - y + 1/2"), P("x + 1"), P("x - 1"), P("4*x^4 + 8*x^2 - 3")]
    cells = [c for c in cad_cells(ProjectionChain.explicit(2, polys)) if c.level == 2]
    assert len(cells) == 47


def test_lift_unsat_two_curves_with_bound():
    s = sys_of("vars: x y\nx^2 + y^2 - 1 = 0\nx^2 - y + 1/2 = 0\nx - 1 >= 0\n")
    w, trace = lift(project(s.polys(), 2), s)
    assert w is None
    for tp in trace.full_points:
        assert 1 in tp.entries
    # every proper subset is satisfiable, so the whole system is the core
    for k in (1, 2):
        for ids in combinations(s.ids, k):
            assert decide_cad(s.restrict(ids)).status is Status.SAT


def test_lift_sat_inside_circle_above_parabola():
    s = sys_of("vars: x y\nx^2 + y^2 - 1 < 0\nx^2 - y + 1/2 < 0\n")
    w, _ = lift(project(s.polys(), 2), s)
    assert w is not None
    assert s.satisfied_by([mpq(0), mpq(3, 4)])
    for c in s.constraints:
        assert c.rel.holds(sign_at_point(c.poly, w))


def test_lift_square_negative():
    s = sys_of("vars: x\nx^2 < 0\n")
    w, trace = lift(project(s.polys(), 1), s)
    assert w is None and trace.points
    assert all(tp.row() == (1,) for tp in trace.points)


def test_partial_prunes_on_negative_x():
    s = sys_of("vars: x y\nx < 0\nx*y > 1\ny^2 <= 3\n")
    chain = project(s.polys(), 2)
    w1, full = lift(chain, s, CadOptions(stop_at_sat=False))
    w2, part = lift_partial(chain, s, CadOptions(stop_at_sat=False))
    assert (w1 is None) == (w2 is None)
    comp = part.compensation_rows
    assert comp
    for tp in comp:
        assert tp.level == 1 and tp.row() == (1, 0, 0)
        assert sign_at(P("x", ["x"]).as_univariate(), tp.point.coords[0]) is not Sign.NEGATIVE


def test_partial_prunes_everything():
    s = sys_of("vars: x y\nx^2 < 0\ny > 0\n")
    w, trace = lift_partial(project(s.polys(), 2), s)
    assert w is None
    assert trace.points and all(tp.pruned for tp in trace.points)


def test_partial_off_matches_lift():
    s = sys_of("vars: x y\nx < 0\nx*y > 1\ny^2 <= 3\n")
    chain = project(s.polys(), 2)
    _, a = lift(chain, s, CadOptions(stop_at_sat=False))
    d = decide_cad(s, CadOptions(partial=False, stop_at_sat=False))
    assert [tp.entries for tp in a.points] == [tp.entries for tp in d.trace.points]


def test_decide_examples():
    d = decide_cad(sys_of("vars: x\n(x+5)*(x+2)*(x-6) >= 0\nx^2 - 9 <= 0\n"))
    assert d.status is Status.SAT
    assert decide_cad(sys_of("vars: x\nx > 0\nx < 0\n")).status is Status.UNSAT
    d = decide_cad(sys_of("vars: x1 x2\nx1*x2 >= 1\nx1 <= 3\n"))
    assert d.status is Status.SAT


def test_budget_gives_unknown():
    s = sys_of("vars: x y\nx^2 + y^2 - 1 < 0\nx^2 - y + 1/2 > 0\nx*y > 5\n")
    d = decide_cad(s, CadOptions(budget=3))
    assert d.status is Status.UNKNOWN


def _brute_univariate(sys):
    """Satisfiability by testing every root and a point in every gap (sympy)."""
    x = sympy.Symbol("x0")
    exprs = [(to_sympy(c.poly), c.rel) for c in sys.constraints]
    roots = set()
    for e, _ in exprs:
        if e.free_symbols:
            roots |= set(sympy.real_roots(sympy.Poly(e, x)))
    pts = sorted(roots, key=lambda r: float(r))

    def rational_mid(a, b):
        # exact rational strictly inside (a, b), from a 40-digit midpoint
        m = sympy.Rational(str(((a + b) / 2).evalf(40)))
        assert a < m < b
        return m

    if pts:
        tests = list(pts) + [sympy.floor(pts[0]) - 1, sympy.ceiling(pts[-1]) + 1]
        tests += [rational_mid(a, b) for a, b in zip(pts, pts[1:])]
    else:
        tests = [sympy.Integer(0)]

    def ok(t):
        for e, rel in exprs:
            v = sympy.simplify(e.subs(x, t))
            s = Sign(int(sympy.sign(v)))
            if not rel.holds(s):
                return False
        return True

    return any(ok(t) for t in tests)


@pytest.mark.parametrize("seed", range(25))
def test_univariate_brute_force(seed):
    rng = random.Random(seed)
    sys = random_system(rng, 1, rng.randint(1, 4), degree=3, max_terms=3)
    d = decide_cad(sys)
    assert d.status is not Status.UNKNOWN
    assert (d.status is Status.SAT) == _brute_univariate(sys)


@pytest.mark.parametrize("seed", range(20))
def test_unsat_rows_cover_and_partial_agreement(seed):
    rng = random.Random(500 + seed)
    sys = random_system(rng, 2, rng.randint(2, 4))
    chain = project(sys.polys(), 2)
    w1, t1 = lift(chain, sys)
    w2, t2 = lift_partial(chain, sys)
    assert (w1 is None) == (w2 is None)
    if w1 is None:
        for tp in t1.points + t2.points:
            assert 1 in tp.row()
    else:
        for c in sys.constraints:
            assert c.rel.holds(sign_at_point(c.poly, w1))


def sign_vectors_realised(polys, probes):
    chain = project(polys, 2)
    cells = [c for c in cad_cells(chain) if c.level == 2]
    have = {tuple(sign_at_point(p, c) for p in polys) for c in cells}
    missing = []
    for q in probes:
        v = tuple(Sign.of(p.evaluate(q)) for p in polys)
        if v not in have:
            missing.append(q)
    return missing


@pytest.mark.parametrize("seed", range(5))
def test_sign_invariance_sample(seed):
    rng = random.Random(seed)
    polys = [p for p in (random_multipoly(rng, 2, 2, 3) for _ in range(3)) if not p.is_constant()]
    probes = [[mpq(rng.randint(-40, 40), rng.randint(1, 8)) for _ in range(2)] for _ in range(40)]
    assert sign_vectors_realised(polys, probes) == []
