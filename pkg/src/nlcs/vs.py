"""Virtual substitution for variables occurring with degree at most two.

A node is a conjunction of atoms ``p ⋈ 0``.  Each atom remembers
``sources`` (the input constraints it was derived from) and ``origin``
(``sources`` plus the constraints that generated the test terms substituted
along the way).  Leaf rows of the evaluation matrix mark the sources of false
atoms; syntactic contradictions found by the simplifier report origins and
become mandatory conflict members.
"""
from __future__ import annotations

import math
from functools import cmp_to_key, lru_cache
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, product
from typing import Sequence

from gmpy2 import mpq

from .arith import (NEG_INF, POS_INF, RealAlgebraic, Sign, compare, isolate_real_roots,
                    rational_between, sign_at, simplest_between)
from .constraint import Constraint, ConstraintSystem, Relation
from .decision import Decision, Status
from .points import AlgebraicPoint, DegenerateLifting, real_roots_over, sign_at_point
from .poly import MultiPoly

__all__ = ["TermKind", "TestTerm", "Atom", "VsNode", "VsTrace", "VsOptions", "DegreeTooHigh",
           "SimplifyResult", "candidate_terms", "virtual_substitute", "simplify", "decide_vs"]


class DegreeTooHigh(Exception):
    def __init__(self, var: int):
        super().__init__(f"variable {var} occurs with degree > 2")
        self.var = var


class TermKind(Enum):
    MINUS_INFINITY = "-inf"
    STANDARD = "root"
    EPSILON = "root+eps"


@dataclass(frozen=True)
class Atom:
    poly: MultiPoly
    rel: Relation
    sources: frozenset
    origin: frozenset

    def truth(self) -> bool | None:
        if not self.poly.is_constant():
            return None
        return self.rel.holds(Sign.of(self.poly.constant_value()))


@dataclass(frozen=True)
class TestTerm:
    """``(a + b*sqrt(c)) / d`` (or -oo), with validity guards.

    ``generator`` is the polynomial whose root the term denotes and ``branch``
    the sign in front of the square root of the quadratic formula (0 for
    linear roots); both are used to realise the term as a number.
    """
    kind: TermKind
    a: MultiPoly | None = None
    b: MultiPoly | None = None
    c: MultiPoly | None = None
    d: MultiPoly | None = None
    guards: tuple = ()
    origin: frozenset = frozenset()
    sources: frozenset = frozenset()
    generator: MultiPoly | None = None
    branch: int = 0

    def key(self):
        return (self.kind, self.a, self.b, self.c, self.d)

    def to_str(self, names) -> str:
        if self.kind is TermKind.MINUS_INFINITY:
            return "-oo"
        num = self.a.to_str(names)
        if self.b is not None and not self.b.is_zero():
            num = f"({num}) + ({self.b.to_str(names)})*sqrt({self.c.to_str(names)})"
        s = f"({num})/({self.d.to_str(names)})"
        return s + " + eps" if self.kind is TermKind.EPSILON else s


@dataclass
class VsNode:
    atoms: tuple
    nvars: int
    substitution: tuple = ()          # ((var, TestTerm, atoms before substitution), ...)

    @classmethod
    def from_system(cls, sys: ConstraintSystem) -> "VsNode":
        atoms = tuple(Atom(c.poly, c.rel, frozenset({c.id}), frozenset({c.id})) for c in sys.constraints)
        return cls(atoms, sys.nvars)

    def variables(self) -> set[int]:
        out = set()
        for a in self.atoms:
            out |= a.poly.variables()
        return out

    def to_strs(self, names) -> list[str]:
        return [f"{a.poly.to_str(names)} {a.rel.symbol} 0" for a in self.atoms]


@dataclass
class SimplifyResult:
    kind: str                           # "true", "false" or "simplified"
    node: VsNode | None = None
    local_conflict: frozenset = frozenset()
    false_sources: frozenset = frozenset()
    syntactic: bool = False


@dataclass
class VsTrace:
    ids: tuple
    rows: list = field(default_factory=list)          # (ids, entries)
    local_conflicts: list = field(default_factory=list)
    branches: int = 0


@dataclass
class VsOptions:
    budget: int | None = None      # maximum number of explored nodes
    hybrid: bool = False
    fallback: bool = True          # delegate to CAD when a degree exceeds two
    partial_cad: bool = True       # pruning mode of any CAD run started from here
    order: Sequence[int] | None = None


class _Budget(Exception):
    pass


# ---------------------------------------------------------------------------
# candidate terms

def _nz(p: MultiPoly, rel: Relation, src, org) -> Atom:
    return Atom(p, rel, src, org)


def _isqrt_rational(q) -> object | None:
    if q < 0:
        return None
    n, d = int(q.numerator), int(q.denominator)
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return mpq(rn, rd)
    return None


def _atom_terms(atom: Atom, v: int) -> list[TestTerm]:
    p = atom.poly
    deg = p.degree(v)
    if deg <= 0:
        return []
    if deg > 2:
        raise DegreeTooHigh(v)
    n = p.nvars
    zero = MultiPoly(n)
    src, org = atom.sources, atom.origin
    cs = p.coeffs(v)
    out = []
    if deg == 1:
        c0, c1 = cs
        g = (_nz(c1, Relation.NE, src, org),)
        out.append(TestTerm(TermKind.STANDARD, -c0, zero, zero, c1, g, org, src, p, 0))
    else:
        a0, a1, a2 = cs
        disc = a1 * a1 - a2 * a0 * 4
        base_guards = (_nz(a2, Relation.NE, src, org), _nz(disc, Relation.GE, src, org))
        if disc.is_constant():
            dv = disc.constant_value()
            root = _isqrt_rational(dv)
            if dv == 0:
                out.append(TestTerm(TermKind.STANDARD, -a1, zero, zero, a2 * 2, base_guards, org, src, p, 1))
            elif root is not None:
                for s in (1, -1):
                    out.append(TestTerm(TermKind.STANDARD, -a1 + root * s, zero, zero, a2 * 2,
                                        base_guards, org, src, p, s))
            elif dv > 0:
                for s in (1, -1):
                    out.append(TestTerm(TermKind.STANDARD, -a1, MultiPoly.const(n, s), disc, a2 * 2,
                                        base_guards, org, src, p, s))
        else:
            for s in (1, -1):
                out.append(TestTerm(TermKind.STANDARD, -a1, MultiPoly.const(n, s), disc, a2 * 2,
                                    base_guards, org, src, p, s))
        if not a2.is_constant() and not a1.is_zero():
            g = (_nz(a2, Relation.EQ, src, org), _nz(a1, Relation.NE, src, org))
            out.append(TestTerm(TermKind.STANDARD, -a0, zero, zero, a1, g, org, src,
                                MultiPoly.from_coeffs([a0, a1], v), 0))
    if atom.rel.is_strict:
        out += [TestTerm(TermKind.EPSILON, t.a, t.b, t.c, t.d, t.guards, t.origin, t.sources,
                         t.generator, t.branch) for t in out]
    return out


def candidate_terms(node: VsNode | ConstraintSystem, v: int) -> list[TestTerm]:
    """-oo, then root and root+eps terms for every atom mentioning ``x_v``."""
    if isinstance(node, ConstraintSystem):
        node = VsNode.from_system(node)
    out = [TestTerm(TermKind.MINUS_INFINITY)]
    seen = {out[0].key()}
    std, eps = [], []
    for atom in node.atoms:
        for t in _atom_terms(atom, v):
            if t.key() in seen:
                continue
            seen.add(t.key())
            (eps if t.kind is TermKind.EPSILON else std).append(t)
    return out + std + eps


# ---------------------------------------------------------------------------
# substitution rules (results are DNF: list of lists of atoms)

def _sub_root(p: MultiPoly, rel: Relation, v: int, t: TestTerm, src, org) -> list[list[Atom]]:
    k = p.degree(v)
    if k <= 0:
        return [[Atom(p, rel, src, org)]]
    cs = p.coeffs(v)
    A, B, C, D = t.a, t.b, t.c, t.d
    n = p.nvars
    # (A + B sqrt C)^i = Pi + Qi sqrt C ; accumulate sum c_i (A+B sqrt C)^i D^(k-i)
    Pi, Qi = MultiPoly.const(n, 1), MultiPoly(n)
    P, Q = MultiPoly(n), MultiPoly(n)
    dpow = [MultiPoly.const(n, 1)]
    for _ in range(k + 1):
        dpow.append(dpow[-1] * D)
    for i, ci in enumerate(cs):
        if i > 0:
            Pi, Qi = Pi * A + Qi * B * C, Pi * B + Qi * A
        if not ci.is_zero():
            f = ci * dpow[k - i]
            P = P + f * Pi
            Q = Q + f * Qi
    if k % 2:
        P, Q = P * D, Q * D
    if Q.is_zero() or C is None or C.is_zero():
        return [[Atom(P, rel, src, org)]]
    delta = P * P - Q * Q * C
    L, E, G, N_ = Relation.LT, Relation.EQ, Relation.GT, Relation.NE
    LE, GE = Relation.LE, Relation.GE
    mk = lambda q, r: Atom(q, r, src, org)
    if rel is E:
        return [[mk(P * Q, LE), mk(delta, E)]]
    if rel is N_:
        return [[mk(P * Q, G)], [mk(delta, N_)]]
    if rel is L:
        return [[mk(P, L), mk(delta, G)], [mk(Q, LE), mk(P, L)], [mk(Q, LE), mk(delta, L)]]
    if rel is LE:
        return [[mk(P, LE), mk(delta, GE)], [mk(Q, LE), mk(delta, LE)]]
    if rel is G:
        return [[mk(P, G), mk(delta, G)], [mk(Q, GE), mk(P, G)], [mk(Q, GE), mk(delta, L)]]
    if rel is GE:
        return [[mk(P, GE), mk(delta, GE)], [mk(Q, GE), mk(delta, LE)]]
    raise AssertionError(rel)


def _and(*dnfs):
    out = []
    for combo in product(*dnfs):
        out.append([a for part in combo for a in part])
    return out


def _all_zero(p: MultiPoly, v: int, src, org) -> list[list[Atom]]:
    return [[Atom(c, Relation.EQ, src, org) for c in p.coeffs(v)]]


def _some_nonzero(p: MultiPoly, v: int, src, org) -> list[list[Atom]]:
    return [[Atom(c, Relation.NE, src, org)] for c in p.coeffs(v)]


def _sub_eps_pos(p: MultiPoly, v: int, t: TestTerm, src, org) -> list[list[Atom]]:
    """p(r + eps) > 0 : p(r) > 0, or p(r) = 0 and p'(r + eps) > 0."""
    if p.degree(v) <= 0:
        return [[Atom(p, Relation.GT, src, org)]]
    pos = _sub_root(p, Relation.GT, v, t, src, org)
    zero = _sub_root(p, Relation.EQ, v, t, src, org)
    return pos + _and(zero, _sub_eps_pos(p.derivative(v), v, t, src, org))


def _sub_eps(p: MultiPoly, rel: Relation, v: int, t: TestTerm, src, org) -> list[list[Atom]]:
    if p.degree(v) <= 0:
        return [[Atom(p, rel, src, org)]]
    if rel is Relation.EQ:
        return _all_zero(p, v, src, org)
    if rel is Relation.NE:
        return _some_nonzero(p, v, src, org)
    if rel is Relation.GT:
        return _sub_eps_pos(p, v, t, src, org)
    if rel is Relation.LT:
        return _sub_eps_pos(-p, v, t, src, org)
    if rel is Relation.GE:
        return _sub_eps_pos(p, v, t, src, org) + _all_zero(p, v, src, org)
    return _sub_eps_pos(-p, v, t, src, org) + _all_zero(p, v, src, org)


def _sub_minf(p: MultiPoly, rel: Relation, v: int, src, org) -> list[list[Atom]]:
    if p.degree(v) <= 0:
        return [[Atom(p, rel, src, org)]]
    if rel is Relation.EQ:
        return _all_zero(p, v, src, org)
    if rel is Relation.NE:
        return _some_nonzero(p, v, src, org)
    strict = {Relation.LT: Relation.LT, Relation.LE: Relation.LT,
              Relation.GT: Relation.GT, Relation.GE: Relation.GT}[rel]
    cs = p.coeffs(v)
    out = []
    for j in range(len(cs) - 1, -1, -1):
        if cs[j].is_zero():
            continue
        lead = cs[j] if j % 2 == 0 else -cs[j]
        branch = [Atom(cs[i], Relation.EQ, src, org) for i in range(len(cs) - 1, j, -1)
                  if not cs[i].is_zero()]
        branch.append(Atom(lead, strict, src, org))
        out.append(branch)
    if rel in (Relation.LE, Relation.GE):
        out += _all_zero(p, v, src, org)
    return out


def _collapse(dnf: list[list[Atom]]) -> list[list[Atom]]:
    """Evaluate constant atoms inside one atom's DNF.

    A branch left empty makes the whole DNF true (``[[]]``).  When every branch
    is false the result is a single branch holding one false atom, which keeps
    the sources needed for the evaluation matrix.
    """
    out, witness_false = [], None
    for branch in dnf:
        kept, dead = [], None
        for a in branch:
            tv = a.truth()
            if tv is False:
                dead = a
                break
            if tv is None:
                kept.append(a)
        if dead is not None:
            witness_false = witness_false or dead
            continue
        if not kept:
            return [[]]
        out.append(kept)
    return out if out else [[witness_false]]


def _substitute_parts(node: VsNode, v: int, t: TestTerm) -> tuple[list[Atom], list[list[list[Atom]]]]:
    """Conjunctive part and pending disjunctions of ``node[t // x_v]``."""
    conj: list[Atom] = list(t.guards)
    pending = []
    for atom in node.atoms:
        src = atom.sources
        org = atom.origin | t.origin
        if atom.poly.degree(v) <= 0:
            dnf = [[atom]]
        elif t.kind is TermKind.STANDARD:
            dnf = _sub_root(atom.poly, atom.rel, v, t, src, org)
        elif t.kind is TermKind.EPSILON:
            dnf = _sub_eps(atom.poly, atom.rel, v, t, src, org)
        else:
            dnf = _sub_minf(atom.poly, atom.rel, v, src, org)
        dnf = _collapse(dnf)
        if len(dnf) == 1:
            conj.extend(dnf[0])
        else:
            pending.append(dnf)
    return conj, pending


def virtual_substitute(node: VsNode, v: int, t: TestTerm) -> list[VsNode]:
    """Substitute ``t`` for ``x_v``; one node per disjunct of the result."""
    conj, pending = _substitute_parts(node, v, t)
    hist = node.substitution + ((v, t, node.atoms),)
    return [VsNode(tuple(conj + b), node.nvars, hist) for b in _and(*pending)]


# ---------------------------------------------------------------------------
# simplification

def simplify(node: VsNode) -> SimplifyResult:
    """Drop true atoms, sign-normalise, merge duplicates and detect contradictions."""
    false = [a for a in node.atoms if a.truth() is False]
    if false:
        return SimplifyResult("false", None,
                              frozenset().union(*(a.origin for a in false)),
                              frozenset().union(*(a.sources for a in false)))
    groups: dict = {}
    order = []
    for a in node.atoms:
        if a.truth() is True:
            continue
        scale, p = a.poly.primitive()
        rel = a.rel if scale > 0 else a.rel.flip()
        if p not in groups:
            groups[p] = []
            order.append(p)
        groups[p].append(Atom(p, rel, a.sources, a.origin))
    atoms = []
    for p in order:
        grp = _merge_same(groups[p])
        signs = frozenset({Sign.NEGATIVE, Sign.ZERO, Sign.POSITIVE})
        for a in grp:
            signs &= a.rel.signs()
        if not signs:
            core = _minimal_contradiction(grp)
            return SimplifyResult("false", None, frozenset().union(*(a.origin for a in core)),
                                  frozenset().union(*(a.sources for a in core)), syntactic=True)
        atoms.extend(grp)
    if not atoms:
        return SimplifyResult("true", VsNode((), node.nvars, node.substitution))
    # only before any substitution: deeper down the cores drag term
    # generators into the mandatory set and usually enlarge the conflict
    core = None if node.substitution else _univariate_contradiction(atoms)
    if core:
        return SimplifyResult("false", None, frozenset().union(*(a.origin for a in core)),
                              frozenset().union(*(a.sources for a in core)), syntactic=True)
    return SimplifyResult("simplified", VsNode(tuple(atoms), node.nvars, node.substitution))


def _merge_same(grp: list[Atom]) -> list[Atom]:
    by_rel: dict = {}
    for a in grp:
        if a.rel in by_rel:
            b = by_rel[a.rel]
            by_rel[a.rel] = Atom(a.poly, a.rel, b.sources | a.sources, b.origin | a.origin)
        else:
            by_rel[a.rel] = a
    return list(by_rel.values())


def _minimal_contradiction(grp: list[Atom]) -> list[Atom]:
    for k in (2, 3):
        best = None
        for combo in combinations(grp, k):
            s = frozenset({Sign.NEGATIVE, Sign.ZERO, Sign.POSITIVE})
            for a in combo:
                s &= a.rel.signs()
            if not s:
                size = len(frozenset().union(*(a.origin for a in combo)))
                if best is None or size < best[0]:
                    best = (size, combo)
        if best:
            return list(best[1])
    return grp


def _univariate_contradiction(atoms: list[Atom]) -> list[Atom] | None:
    """One or two atoms in a single common variable that cannot hold together."""
    by_var: dict = {}
    for a in atoms:
        vs = a.poly.variables()
        if len(vs) == 1:
            by_var.setdefault(next(iter(vs)), []).append(a)
    best = None
    for v, grp in by_var.items():
        for k in (1, 2):
            for combo in combinations(grp, k):
                key = tuple((tuple(a.poly.coeffs(v)), a.rel) for a in combo)
                if _uni_unsat(key):
                    size = len(frozenset().union(*(a.origin for a in combo)))
                    if best is None or size < best[0]:
                        best = (size, list(combo))
            if best:
                break
    return best[1] if best else None


@lru_cache(maxsize=4096)
def _uni_unsat(key) -> bool:
    # exact sample-point test: every root and a rational in every gap
    polys = [[c.constant_value() for c in cs] for cs, _ in key]
    roots: list[RealAlgebraic] = []
    for p in polys:
        for r in isolate_real_roots(p):
            if not any(compare(r, q) == 0 for q in roots):
                roots.append(r)
    roots.sort(key=cmp_to_key(compare))
    samples = list(roots)
    bounds = [NEG_INF] + roots + [POS_INF]
    samples += [RealAlgebraic.from_rational(rational_between(a, b)) for a, b in zip(bounds, bounds[1:])]
    for s in samples:
        if all(rel.holds(sign_at(p, s)) for p, (_, rel) in zip(polys, key)):
            return False
    return True


# ---------------------------------------------------------------------------
# decision

def _choose_variable(node: VsNode, order: Sequence[int] | None):
    """Next variable to eliminate together with its candidate terms.

    With an explicit order the first present variable is taken; otherwise the
    variable minimising (max degree, number of candidates, index).
    """
    present = node.variables()
    if order is not None:
        v = next(u for u in order if u in present)
        return v, candidate_terms(node, v)
    best = None
    for v in sorted(present):
        deg = max(a.poly.degree(v) for a in node.atoms)
        if deg > 2:
            continue
        cands = candidate_terms(node, v)
        key = (deg, len(cands), v)
        if best is None or key < best[0]:
            best = (key, v, cands)
    if best is None:
        raise DegreeTooHigh(min(present))
    return best[1], best[2]


class _Fallback(Exception):
    pass


def decide_vs(sys: ConstraintSystem, options: VsOptions | None = None) -> Decision:
    """Depth-first virtual substitution; degree > 2 falls back to CAD."""
    from .cad import CadOptions, decide_cad

    opts = options or VsOptions()
    root = VsNode.from_system(sys)
    order = list(opts.order) if opts.order is not None else None
    trace = VsTrace(tuple(c.id for c in sys.constraints))
    count = [0]
    sat: list = []

    def row(sources):
        trace.rows.append((trace.ids, tuple(1 if i in sources else 0 for i in trace.ids)))

    def explore(node: VsNode, pending=()) -> bool:
        count[0] += 1
        if opts.budget is not None and count[0] > opts.budget:
            raise _Budget
        res = simplify(node)
        if res.kind == "false":
            if res.syntactic:
                trace.local_conflicts.append(res.local_conflict)
            else:
                row(res.false_sources)
            return False
        node = res.node
        if pending:
            # expand the smallest disjunction first
            k = min(range(len(pending)), key=lambda i: len(pending[i]))
            rest = pending[:k] + pending[k + 1:]
            for branch in pending[k]:
                child = VsNode(node.atoms + tuple(branch), node.nvars, node.substitution)
                if explore(child, rest):
                    return True
            return False
        if res.kind == "true":
            sat.append((node, None))
            return True
        try:
            v, cands = _choose_variable(node, order)
        except DegreeTooHigh as e:
            if opts.hybrid:
                return _hybrid(node)
            raise _Fallback(e.var)
        for t in cands:
            conj, parts = _substitute_parts(node, v, t)
            child = VsNode(tuple(conj), node.nvars, node.substitution + ((v, t, node.atoms),))
            if explore(child, tuple(parts)):
                return True
        return False

    def _hybrid(node: VsNode) -> bool:
        sub, sources = _node_system(node)
        d = decide_cad(sub, CadOptions(partial=opts.partial_cad, budget=opts.budget))
        count[0] += d.stats.get("cells", 0)
        if d.status is Status.SAT:
            sat.append((node, d))
            return True
        if d.status is Status.UNKNOWN:
            raise _Budget
        for p in d.trace.points:
            bad = frozenset().union(*(sources[j] for j, e in enumerate(p.entries) if e))
            row(bad)
        return False

    try:
        found = explore(root)
    except _Budget:
        return Decision(Status.UNKNOWN, "vs", stats={"branches": count[0]}, reason="node budget exceeded")
    except _Fallback as e:
        if not opts.fallback:
            return Decision(Status.UNKNOWN, "vs", stats={"branches": count[0]},
                            reason=f"degree > 2 in x{e.args[0]}")
        d = decide_cad(sys, CadOptions(partial=opts.partial_cad, budget=opts.budget))
        d.engine = "vs->cad"
        d.stats["fallback"] = "degree"
        return d
    trace.branches = count[0]
    stats = {"branches": count[0]}
    if not found:
        return Decision(Status.UNSAT, "vs", trace=trace, stats=stats)
    leaf, cad_decision = sat[0]
    try:
        witness = _realise(sys, leaf, cad_decision)
    except DegenerateLifting as e:
        return Decision(Status.UNKNOWN, "vs", stats=stats, reason=str(e))
    if witness is None:
        return Decision(Status.UNKNOWN, "vs", stats=stats, reason="witness failed validation")
    return Decision(Status.SAT, "vs", witness=witness, trace=trace, stats=stats)


def _node_system(node: VsNode):
    cons = tuple(Constraint(a.poly, a.rel, j + 1) for j, a in enumerate(node.atoms))
    names = tuple(f"x{i}" for i in range(node.nvars))
    return ConstraintSystem(cons, names), [a.sources for a in node.atoms]


# ---------------------------------------------------------------------------
# witness reconstruction

def _realise(sys: ConstraintSystem, leaf: VsNode, cad_decision) -> tuple | None:
    n = sys.nvars
    steps = list(leaf.substitution)
    eliminated = [v for v, _, _ in steps]
    rest = [v for v in range(n) if v not in eliminated]
    lift_order = rest + eliminated[::-1]
    perm = [0] * n
    for pos, v in enumerate(lift_order):
        perm[v] = pos
    pt = AlgebraicPoint(n)
    if cad_decision is not None:
        # the CAD witness covers the variables left in the node; recompute it in lift order
        from .cad import decide_cad

        sub, _ = _node_system(leaf)
        sub = ConstraintSystem(tuple(Constraint(c.poly.permute(perm), c.rel, c.id) for c in sub.constraints),
                               sub.variables)
        d = decide_cad(sub)
        wpt = d.stats.get("point")
        if d.status is not Status.SAT or wpt is None:
            return None
        pt = wpt.restrict(len(rest))
    else:
        for _ in rest:
            pt = pt.extend(RealAlgebraic.from_rational(0))
    for v, t, before in reversed(steps):
        atoms = [Atom(a.poly.permute(perm), a.rel, a.sources, a.origin) for a in before]
        pt = _realise_step(pt, t, perm[v], atoms, perm)
        if pt is None:
            return None
    values = [pt.coords[perm[v]] for v in range(n)]
    for c in sys.constraints:
        if not c.rel.holds(sign_at_point(c.poly.permute(perm), pt)):
            return None
    return tuple(values)


def _holds_all(atoms, pt) -> bool:
    return all(a.rel.holds(sign_at_point(a.poly, pt)) for a in atoms)


def _root_of(t: TestTerm, pos: int, pt: AlgebraicPoint, perm):
    g = t.generator.permute(perm)
    roots = real_roots_over(g, pt)
    if not roots:
        return None
    if len(roots) == 1 or t.branch == 0:
        return roots[0] if len(roots) == 1 else None
    a2 = g.coefficient(pos, 2)
    s = int(sign_at_point(a2, pt))
    if s == 0:
        return roots[0] if len(roots) == 1 else None
    return roots[-1] if t.branch * s > 0 else roots[0]


def _realise_step(pt: AlgebraicPoint, t: TestTerm, pos: int, atoms, perm) -> AlgebraicPoint | None:
    if t.kind is TermKind.MINUS_INFINITY:
        for k in range(0, 200):
            cand = pt.extend(RealAlgebraic.from_rational(-(mpq(2) ** k)))
            if _holds_all(atoms, cand):
                return cand
        return None
    root = _root_of(t, pos, pt, perm)
    if root is None:
        return None
    r, rel = root
    if t.kind is TermKind.STANDARD:
        cand = pt.extend(r, rel)
        return cand if _holds_all(atoms, cand) else None
    for k in range(0, 200):
        eps = mpq(1, 2 ** k)
        r._tighten(eps / 2)
        lo = r.exact if r.exact is not None else r.hi
        upper = (r.exact if r.exact is not None else r.lo) + eps
        q = simplest_between(lo, upper)
        cand = pt.extend(RealAlgebraic.from_rational(q))
        if _holds_all(atoms, cand):
            return cand
    return None
