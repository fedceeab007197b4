"""Exact computation at points with real algebraic coordinates.

A point ``(a_0, ..., a_{k-1})`` keeps, for every irrational coordinate, a
*relative* polynomial ``r_i(x_0, ..., x_i)`` with ``r_i(a_0..a_{i-1}, a_i) = 0``
whose leading coefficient in ``x_i`` does not vanish at the prefix.  Signs are
decided by interval evaluation; zeros are certified by eliminating the
coordinates from ``z - f`` with resultants, which yields a univariate
polynomial having ``f(a)`` among its roots.
"""
from __future__ import annotations

from typing import Sequence

from gmpy2 import mpq

from .arith import (RealAlgebraic, Sign, _deg, _ev, isolate_real_roots, sign_at,
                    upoly_squarefree)
from .poly import MultiPoly, divexact, gcd, resultant, subresultant_psc

__all__ = ["AlgebraicPoint", "DegenerateLifting", "sign_at_point", "real_roots_over",
           "eval_partial", "box_eval"]


class DegenerateLifting(ArithmeticError):
    """Elimination collapsed to zero for every available defining polynomial."""


class AlgebraicPoint:
    """A point of R^k with exact real algebraic coordinates."""

    __slots__ = ("nvars", "coords", "relative", "_signs")

    def __init__(self, nvars: int, coords: Sequence[RealAlgebraic] = (), relative: Sequence = ()):
        self.nvars = nvars
        self.coords = tuple(coords)
        rel = list(relative) + [None] * (len(self.coords) - len(relative))
        self.relative = tuple(rel)
        self._signs: dict = {}

    @property
    def level(self) -> int:
        return len(self.coords)

    def extend(self, a: RealAlgebraic, rel: MultiPoly | None = None) -> "AlgebraicPoint":
        if a.exact is not None:
            rel = None
        elif rel is None:
            rel = MultiPoly.from_univariate(a.defining, self.nvars, self.level)
        return AlgebraicPoint(self.nvars, self.coords + (a,), self.relative + (rel,))

    def rational_values(self) -> dict[int, object]:
        return {i: c.exact for i, c in enumerate(self.coords) if c.exact is not None}

    def irrational_indices(self) -> list[int]:
        return [i for i, c in enumerate(self.coords) if c.exact is None]

    def reduce(self, f: MultiPoly) -> MultiPoly:
        """Substitute the rational coordinates of the point into ``f``."""
        vals = {i: v for i, v in self.rational_values().items() if f.degree(i) > 0}
        return f.subs(vals) if vals else f

    def absolute(self, i: int) -> MultiPoly:
        return MultiPoly.from_univariate(self.coords[i].defining, self.nvars, i)

    def restrict(self, k: int) -> "AlgebraicPoint":
        return AlgebraicPoint(self.nvars, self.coords[:k], self.relative[:k])

    def is_rational(self) -> bool:
        return all(c.exact is not None for c in self.coords)

    def to_json(self) -> list:
        return [c.to_json() for c in self.coords]

    def __repr__(self):
        return f"AlgebraicPoint({list(self.coords)})"


# ---------------------------------------------------------------------------
# interval evaluation

def _pow_iv(lo, hi, e):
    if e == 1:
        return lo, hi
    a, b = lo ** e, hi ** e
    if e % 2 == 0:
        if lo >= 0:
            return a, b
        if hi <= 0:
            return b, a
        return mpq(0), max(a, b)
    return a, b


def box_eval(f: MultiPoly, box: dict[int, tuple]) -> tuple:
    """Interval enclosure of ``f`` over a box ``{var: (lo, hi)}``."""
    lo_sum = hi_sum = mpq(0)
    for e, c in f.terms.items():
        lo = hi = c
        for i, k in enumerate(e):
            if k:
                a, b = _pow_iv(*box[i], k)
                cands = (lo * a, lo * b, hi * a, hi * b)
                lo, hi = min(cands), max(cands)
        lo_sum += lo
        hi_sum += hi
    return lo_sum, hi_sum


def _box(pt: AlgebraicPoint, idx, extra=None) -> dict:
    b = {i: (pt.coords[i].lo, pt.coords[i].hi) for i in idx}
    if extra:
        b.update(extra)
    return b


def _shrink(nums: Sequence[RealAlgebraic]) -> None:
    for a in nums:
        if a.exact is None:
            a._tighten(a.width() / 4)


# ---------------------------------------------------------------------------
# elimination

def _eliminate(F: MultiPoly, pt: AlgebraicPoint, absolute: bool) -> MultiPoly | None:
    """Eliminate all irrational coordinates of ``pt`` from ``F`` (highest first)."""
    n = F.nvars
    for i in reversed(pt.irrational_indices()):
        if F.degree(i) <= 0:
            continue
        if absolute:
            r = MultiPoly.from_univariate(pt.coords[i].defining, n, i)
        else:
            r = pt.relative[i]
            if r.nvars != n:
                r = r.extend(n)
        R = resultant(F, r, i)
        if R.is_zero():
            # F and r share a factor G in x_0..x_i.  Near the point G is nonzero
            # on a dense set, so by continuity of roots the value stays a root
            # of F / G^k; drop every copy of G and retry.
            G = gcd(F, r)
            while G.degree(i) > 0:
                F = divexact(F, G)
                G = gcd(F, r)
            if F.degree(i) <= 0:
                continue
            R = resultant(F, r, i)
            if R.is_zero():
                return None
        F = R
    return F


def _value_polynomial(g: MultiPoly, pt: AlgebraicPoint) -> list:
    """Univariate polynomial (coefficient list) with ``g(pt)`` among its roots."""
    n = pt.nvars
    z = MultiPoly.var(n + 1, n)
    F = z - g.extend(n + 1)
    for absolute in (False, True):
        R = _eliminate(F, pt, absolute)
        if R is not None:
            return R.as_univariate()
    raise DegenerateLifting("value polynomial vanished identically")


# ---------------------------------------------------------------------------
# signs

def sign_at_point(f: MultiPoly, pt: AlgebraicPoint) -> Sign:
    """Exact sign of ``f`` at ``pt``; ``f`` may only use the point's variables."""
    cached = pt._signs.get(f)
    if cached is not None:
        return cached
    s = _sign_at_point(f, pt)
    pt._signs[f] = s
    return s


def _sign_at_point(f: MultiPoly, pt: AlgebraicPoint) -> Sign:
    g = pt.reduce(f)
    if g.is_constant():
        return Sign.of(g.constant_value())
    used = sorted(g.variables())
    if used[-1] >= pt.level:
        raise ValueError("polynomial uses unassigned variables")
    if len(used) == 1:
        return sign_at(g.as_univariate(), pt.coords[used[0]])
    idx = [i for i in pt.irrational_indices() if i <= used[-1]]
    nums = [pt.coords[i] for i in idx]
    for _ in range(4):
        lo, hi = box_eval(g, _box(pt, used))
        if lo > 0:
            return Sign.POSITIVE
        if hi < 0:
            return Sign.NEGATIVE
        _shrink([pt.coords[i] for i in used])
    R = _value_polynomial(g, pt.restrict(idx[-1] + 1))
    maybe_zero = _ev(R, 0) == 0
    left = right = None
    if maybe_zero:
        roots = isolate_real_roots(upoly_squarefree(R))
        k = next(j for j, r in enumerate(roots) if r.exact == 0)
        if k > 0:
            left = roots[k - 1].hi
        if k + 1 < len(roots):
            right = roots[k + 1].lo
        if left is None and right is None:
            return Sign.ZERO
    while True:
        lo, hi = box_eval(g, _box(pt, used))
        if lo > 0:
            return Sign.POSITIVE
        if hi < 0:
            return Sign.NEGATIVE
        if maybe_zero and (left is None or lo > left) and (right is None or hi < right):
            return Sign.ZERO
        _shrink(nums)


# ---------------------------------------------------------------------------
# roots over a point

_EPS = {k: (-1) ** (k * (k - 1) // 2) for k in range(64)}


def _pmv(signs: Sequence[int]) -> int:
    """Permanences minus variations of a sign sequence with nonzero head."""
    nz = [(i, s) for i, s in enumerate(signs) if s]
    total = 0
    for (i0, s0), (i1, s1) in zip(nz, nz[1:]):
        gap = i1 - i0
        if gap % 2:
            total += _EPS[gap] * s0 * s1
    return total


def count_distinct_real_roots(P: MultiPoly, v: int, pt: AlgebraicPoint) -> int:
    """Number of distinct real roots of ``P(pt, x_v)``; ``lc(P)`` must not vanish at ``pt``."""
    p = P.degree(v)
    if p <= 0:
        return 0
    if p == 1:
        return 1
    s_lc = int(sign_at_point(P.leading_coefficient(v), pt))
    seq = [s_lc, s_lc]
    psc = subresultant_psc(P, P.derivative(v), v)
    for j in range(p - 2, -1, -1):
        s = int(sign_at_point(psc[j], pt))
        seq.append(_EPS[p - j] * s)
    return _pmv(seq)


def truncate_at(q: MultiPoly, v: int, pt: AlgebraicPoint) -> MultiPoly | None:
    """Drop leading terms in ``x_v`` whose coefficients vanish at ``pt``.

    Returns ``None`` when ``q(pt, x_v)`` is identically zero.
    """
    cs = q.coeffs(v)
    for d in range(len(cs) - 1, -1, -1):
        if not cs[d].is_zero() and sign_at_point(cs[d], pt) != Sign.ZERO:
            return MultiPoly.from_coeffs(cs[:d + 1], v)
    return None


def real_roots_over(q: MultiPoly, pt: AlgebraicPoint) -> list[tuple[RealAlgebraic, MultiPoly]] | None:
    """Real roots of ``q(pt, y)`` with ``y = x_{pt.level}``, ascending.

    Each root comes with its relative polynomial.  ``None`` signals that
    ``q`` vanishes identically over the point.
    """
    v = pt.level
    g = pt.reduce(q)
    g = truncate_at(g, v, pt)
    if g is None:
        return None
    if g.degree(v) <= 0:
        return []
    irr = [i for i in g.variables() if i != v]
    if not irr:
        return [(r, g) for r in isolate_real_roots(g.as_univariate())]
    n = count_distinct_real_roots(g, v, pt)
    if n == 0:
        return []
    R = None
    for absolute in (False, True):
        R = _eliminate(g, pt, absolute)
        if R is not None:
            break
    if R is None:
        raise DegenerateLifting("root polynomial vanished identically")
    cands = isolate_real_roots(R.as_univariate())
    nums = [pt.coords[i] for i in pt.irrational_indices()]
    used = sorted(irr)
    while len(cands) > n:
        box = _box(pt, used)
        keep = []
        for c in cands:
            b = dict(box)
            b[v] = (c.lo, c.hi)
            lo, hi = box_eval(g, b)
            if lo <= 0 <= hi:
                keep.append(c)
        cands = keep
        if len(cands) > n:
            _shrink(nums)
            _shrink(cands)
    if len(cands) < n:
        raise AssertionError("root count mismatch during lifting")
    return [(c, g) for c in cands]


def eval_partial(p: MultiPoly, coords: Sequence) -> MultiPoly | Sign:
    """Substitute a prefix of coordinates into ``p``.

    With every variable of ``p`` assigned the result is its exact sign;
    otherwise the polynomial with the rational coordinates substituted.
    """
    pt = coords if isinstance(coords, AlgebraicPoint) else _point(p.nvars, coords)
    if all(i < pt.level for i in p.variables()):
        return sign_at_point(p, pt)
    if not pt.is_rational():
        raise ValueError("partial evaluation at irrational coordinates has no polynomial form")
    return pt.reduce(p)


def _point(nvars, coords) -> AlgebraicPoint:
    pt = AlgebraicPoint(nvars)
    for c in coords:
        if not isinstance(c, RealAlgebraic):
            c = RealAlgebraic.from_rational(c)
        pt = pt.extend(c)
    return pt
