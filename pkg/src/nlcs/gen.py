"""Random constraint systems with known status.

Satisfiable instances are planted around a rational point: every relation
is chosen among those that hold there.  Unsatisfiable instances embed a small
contradictory core (at most four constraints) among satisfiable filler, so
the minimum conflict is small by construction.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .arith import Sign
from .constraint import Constraint, ConstraintSystem, Relation
from .poly import MultiPoly

__all__ = ["Instance", "random_poly", "random_system", "planted_sat", "planted_unsat",
           "desk_corpus", "write_corpus"]

NAMES = ("x", "y", "z")
_COEFFS = (-3, -2, -1, 1, 2, 3)


@dataclass
class Instance:
    name: str
    system: ConstraintSystem
    expected: str          # "sat" or "unsat"
    core: tuple = ()       # ids of the planted contradiction


def _monomials(n: int, degree: int) -> list[tuple]:
    out = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    if degree >= 2:
        out += [tuple(2 if j == i else 0 for j in range(n)) for i in range(n)]
        out += [tuple(1 if j in (a, b) else 0 for j in range(n))
                for a in range(n) for b in range(a + 1, n)]
    return out


def random_poly(rng: random.Random, n: int, degree: int = 2, max_terms: int = 3) -> MultiPoly:
    """Sparse polynomial: a constant plus 1..max_terms-1 random monomials."""
    mons = _monomials(n, degree)
    k = rng.randint(1, min(max_terms - 1, len(mons)))
    terms = {m: rng.choice(_COEFFS) for m in rng.sample(mons, k)}
    if rng.random() < 0.8:
        terms[(0,) * n] = rng.choice(_COEFFS)
    return MultiPoly(n, terms)


def random_system(rng: random.Random, n: int, m: int, degree: int = 2, max_terms: int = 3) -> ConstraintSystem:
    rels = list(Relation)
    cons = tuple(Constraint(random_poly(rng, n, degree, max_terms), rng.choice(rels), i + 1)
                 for i in range(m))
    return ConstraintSystem(cons, NAMES[:n])


def _point(rng: random.Random, n: int) -> list[Fraction]:
    return [Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2))) for _ in range(n)]


def _holding(rng: random.Random, s: Sign) -> Relation:
    return rng.choice([r for r in Relation if r.holds(s)])


def _filler(rng: random.Random, n: int, count: int, at: list, degree: int) -> list:
    out = []
    for _ in range(count):
        p = random_poly(rng, n, degree)
        out.append((p, _holding(rng, Sign.of(p.evaluate(at)))))
    return out


def planted_sat(rng: random.Random, n: int, m: int, degree: int = 2) -> ConstraintSystem:
    at = _point(rng, n)
    cons = tuple(Constraint(p, r, i + 1) for i, (p, r) in enumerate(_filler(rng, n, m, at, degree)))
    return ConstraintSystem(cons, NAMES[:n])


def _core(rng: random.Random, n: int) -> list:
    """A small unsatisfiable conjunction, chosen among a few families."""
    x = lambda i: MultiPoly.var(n, i)
    c = lambda v: MultiPoly.const(n, v)
    i = rng.randrange(n)
    j = rng.choice([k for k in range(n) if k != i]) if n > 1 else i
    a, b = rng.randint(1, 3), rng.randint(1, 3)
    kind = rng.choice(["square", "bounds", "disc", "product"] + (["ball", "chain", "hyper"] if n > 1 else []))
    if kind == "square":          # x^2 + a < 0 style, possibly split in two
        if rng.random() < 0.5:
            return [(x(i) ** 2 + c(a), Relation.LT)]
        return [(x(i) ** 2 - c(b), Relation.LE), (x(i) ** 2 - c(b + a), Relation.GT)]
    if kind == "bounds":          # x >= a, x <= a - b
        return [(x(i) - c(a), Relation.GE), (x(i) - c(a - b), Relation.LE)]
    if kind == "disc":            # x^2 + b x + c <= 0 with negative discriminant, and x^2 <= a^2, x >= a + 1
        if rng.random() < 0.5:
            return [(x(i) ** 2 + x(i) * b + c(b * b), Relation.LE)]
        return [(x(i) ** 2 - c(a * a), Relation.LE), (x(i) - c(a + 1), Relation.GE)]
    if kind == "product":         # x y = 1 with x = 0
        if n > 1:
            return [(x(i) * x(j) - c(1), Relation.EQ), (x(i), Relation.EQ)]
        return [(x(i) * x(i) - c(a), Relation.EQ), (x(i), Relation.EQ)]
    if kind == "ball":            # x^2 + y^2 < 1 and x + y > 2
        return [(x(i) ** 2 + x(j) ** 2 - c(a * a), Relation.LT), (x(i) + x(j) - c(2 * a), Relation.GT)]
    if kind == "chain":           # x >= a, y >= x, y <= 0
        return [(x(i) - c(a), Relation.GE), (x(j) - x(i), Relation.GE), (x(j), Relation.LE)]
    # x > 1, y > 1, x y < 1
    return [(x(i) - c(1), Relation.GT), (x(j) - c(1), Relation.GT), (x(i) * x(j) - c(1), Relation.LT)]


def planted_unsat(rng: random.Random, n: int, m: int, degree: int = 2) -> tuple[ConstraintSystem, tuple]:
    core = _core(rng, n)
    fill = _filler(rng, n, max(0, m - len(core)), _point(rng, n), degree)
    items = [(p, r, True) for p, r in core] + [(p, r, False) for p, r in fill]
    rng.shuffle(items)
    cons = tuple(Constraint(p, r, k + 1) for k, (p, r, _) in enumerate(items))
    core_ids = tuple(k + 1 for k, (_, _, is_core) in enumerate(items) if is_core)
    return ConstraintSystem(cons, NAMES[:n]), core_ids


def desk_corpus(seed: int = 2024, size: int = 40) -> list[Instance]:
    """Half satisfiable, half unsatisfiable; 1-3 variables, 2-12 constraints."""
    rng = random.Random(seed)
    out = []
    for k in range(size):
        n = rng.randint(1, 3)
        m = rng.randint(2, 12)
        if k % 2 == 0:
            sys = planted_sat(rng, n, m)
            out.append(Instance(f"p{k:02d}_sat.nlcs", sys, "sat"))
        else:
            sys, core = planted_unsat(rng, n, m)
            out.append(Instance(f"p{k:02d}_unsat.nlcs", sys, "unsat", core))
    return out


def write_corpus(directory, seed: int = 2024, size: int = 40) -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for inst in desk_corpus(seed, size):
        path = d / inst.name
        header = f"# expected: {inst.expected}"
        if inst.core:
            header += "  planted core: " + " ".join(map(str, inst.core))
        path.write_text(header + "\n" + inst.system.to_native(), encoding="utf-8")
        paths.append(path)
    return paths
