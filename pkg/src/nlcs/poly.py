"""Sparse multivariate polynomials over Q and elimination tools.

A :class:`MultiPoly` lives in a fixed variable universe ``x_0 < x_1 < ...``
(``nvars`` variables) and maps exponent tuples to nonzero rationals.  The
canonical term order is lexicographic with the highest-indexed variable most
significant; the leading term, sign normalisation and printing all use it.
"""
from __future__ import annotations

import math
import re
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq, mpz

from .arith import Rational, Sign, as_rational

__all__ = [
    "MultiPoly", "ParseError", "parse_poly", "resultant", "discriminant",
    "subresultant_psc", "squarefree_part", "gcd", "content", "divexact",
    "projection_factors", "det",
]

_ZERO = mpq(0)
_ONE = mpq(1)


class MultiPoly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | None = None, *, _clean: bool = False):
        self.nvars = nvars
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            t = {}
            for e, c in terms.items():
                c = as_rational(c)
                if c:
                    if len(e) != nvars:
                        raise ValueError("exponent vector length does not match nvars")
                    t[tuple(e)] = c
            self.terms = t
        self._hash = None

    # -- constructors ----------------------------------------------------
    @classmethod
    def const(cls, nvars: int, c) -> "MultiPoly":
        c = as_rational(c)
        return cls(nvars, {(0,) * nvars: c} if c else {}, _clean=True)

    @classmethod
    def var(cls, nvars: int, i: int, power: int = 1) -> "MultiPoly":
        e = [0] * nvars
        e[i] = power
        return cls(nvars, {tuple(e): _ONE}, _clean=True)

    @classmethod
    def from_univariate(cls, coeffs: Sequence, nvars: int = 1, v: int = 0) -> "MultiPoly":
        t = {}
        for k, c in enumerate(coeffs):
            c = as_rational(c)
            if c:
                e = [0] * nvars
                e[v] = k
                t[tuple(e)] = c
        return cls(nvars, t, _clean=True)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence["MultiPoly"], v: int) -> "MultiPoly":
        """Sum of ``coeffs[k] * x_v^k``; the coefficients must be free of ``x_v``."""
        n = coeffs[0].nvars
        t: dict = {}
        for k, c in enumerate(coeffs):
            for e, a in c.terms.items():
                e2 = e[:v] + (e[v] + k,) + e[v + 1:]
                t[e2] = t.get(e2, _ZERO) + a
        return cls(n, {e: c for e, c in t.items() if c}, _clean=True)

    # -- basic queries ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Rational:
        if not self.terms:
            return _ZERO
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def constant_term(self) -> Rational:
        return self.terms.get((0,) * self.nvars, _ZERO)

    def degree(self, v: int) -> int:
        """Degree in ``x_v``; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(e[v] for e in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    @property
    def main_var(self) -> int:
        """Highest variable index with positive degree, -1 for constants."""
        m = -1
        for e in self.terms:
            for i in range(self.nvars - 1, m, -1):
                if e[i]:
                    m = i
                    break
        return m

    def variables(self) -> set[int]:
        out = set()
        for e in self.terms:
            out.update(i for i, k in enumerate(e) if k)
        return out

    def coefficient(self, v: int, k: int) -> "MultiPoly":
        t = {}
        for e, c in self.terms.items():
            if e[v] == k:
                t[e[:v] + (0,) + e[v + 1:]] = c
        return MultiPoly(self.nvars, t, _clean=True)

    def coeffs(self, v: int) -> list["MultiPoly"]:
        d = self.degree(v)
        buckets: list[dict] = [{} for _ in range(max(d, 0) + 1)]
        for e, c in self.terms.items():
            buckets[e[v]][e[:v] + (0,) + e[v + 1:]] = c
        return [MultiPoly(self.nvars, b, _clean=True) for b in buckets]

    def leading_coefficient(self, v: int) -> "MultiPoly":
        return self.coefficient(v, self.degree(v))

    def leading_term(self):
        """(exponent, coefficient) of the lexicographically largest term."""
        e = max(self.terms, key=lambda e: e[::-1])
        return e, self.terms[e]

    def as_univariate(self) -> list:
        """Dense coefficients (low -> high) if at most one variable occurs."""
        vs = self.variables()
        if len(vs) > 1:
            raise ValueError("polynomial is not univariate")
        if not vs:
            return [self.constant_value()] if self.terms else []
        v = vs.pop()
        out = [_ZERO] * (self.degree(v) + 1)
        for e, c in self.terms.items():
            out[e[v]] = c
        return out

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable universes differ")
            return other
        return MultiPoly.const(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, _ZERO) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return MultiPoly(self.nvars, t, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = as_rational(other)
            if not c:
                return MultiPoly(self.nvars)
            return MultiPoly(self.nvars, {e: a * c for e, a in self.terms.items()}, _clean=True)
        other = self._coerce(other)
        if len(other.terms) < len(self.terms):
            a, b = other, self
        else:
            a, b = self, other
        t: dict = {}
        bt = list(b.terms.items())
        for ea, ca in a.terms.items():
            for eb, cb in bt:
                e = tuple(x + y for x, y in zip(ea, eb))
                t[e] = t.get(e, _ZERO) + ca * cb
        return MultiPoly(self.nvars, {e: c for e, c in t.items() if c}, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = MultiPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Rational)) or hasattr(other, "denominator"):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and substitution ----------------------------------------
    def derivative(self, v: int) -> "MultiPoly":
        t = {}
        for e, c in self.terms.items():
            if e[v]:
                t[e[:v] + (e[v] - 1,) + e[v + 1:]] = c * e[v]
        return MultiPoly(self.nvars, t, _clean=True)

    def subs(self, values: Mapping[int, object]) -> "MultiPoly":
        """Substitute rationals for some variables (their exponents become 0)."""
        vals = {i: as_rational(v) for i, v in values.items()}
        t: dict = {}
        for e, c in self.terms.items():
            e2 = list(e)
            for i, x in vals.items():
                k = e[i]
                if k:
                    c = c * x ** k
                    e2[i] = 0
            if c:
                e2 = tuple(e2)
                t[e2] = t.get(e2, _ZERO) + c
        return MultiPoly(self.nvars, {e: c for e, c in t.items() if c}, _clean=True)

    def evaluate(self, values: Sequence) -> Rational:
        acc = _ZERO
        vals = [as_rational(v) for v in values]
        for e, c in self.terms.items():
            for x, k in zip(vals, e):
                if k:
                    c = c * x ** k
            acc += c
        return acc

    def compose(self, v: int, q: "MultiPoly") -> "MultiPoly":
        """Replace ``x_v`` by the polynomial ``q``."""
        cs = self.coeffs(v)
        out = MultiPoly(self.nvars)
        for c in reversed(cs):
            out = out * q + c
        return out

    def permute(self, perm: Sequence[int], nvars: int | None = None) -> "MultiPoly":
        """Variable ``i`` becomes variable ``perm[i]`` in a universe of ``nvars``."""
        n = self.nvars if nvars is None else nvars
        t = {}
        for e, c in self.terms.items():
            e2 = [0] * n
            for i, k in enumerate(e):
                if k:
                    e2[perm[i]] = k
            t[tuple(e2)] = c
        return MultiPoly(n, t, _clean=True)

    def extend(self, nvars: int) -> "MultiPoly":
        pad = (0,) * (nvars - self.nvars)
        return MultiPoly(nvars, {e + pad: c for e, c in self.terms.items()}, _clean=True)

    # -- normalisation ---------------------------------------------------
    def primitive(self) -> tuple[Rational, "MultiPoly"]:
        """``(c, p)`` with ``self == c * p``, ``p`` integral, content 1 and a
        positive leading coefficient."""
        if not self.terms:
            return _ZERO, self
        den = 1
        for c in self.terms.values():
            den = den * int(c.denominator) // math.gcd(den, int(c.denominator))
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, int(c * den))
        if self.leading_term()[1] < 0:
            g = -g
        scale = mpq(den, g)
        return 1 / scale, MultiPoly(self.nvars, {e: c * scale for e, c in self.terms.items()}, _clean=True)

    def normalized(self) -> "MultiPoly":
        return self.primitive()[1]

    def sign_normalized(self) -> tuple[int, "MultiPoly"]:
        """Primitive form and the sign of the positive factor dropped from it."""
        c, p = self.primitive()
        return (1 if c > 0 else -1), p

    # -- printing --------------------------------------------------------
    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"x{i}" for i in range(self.nvars)]
        parts = []
        for e in sorted(self.terms, key=lambda e: e[::-1], reverse=True):
            c = self.terms[e]
            mon = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            mag = abs(c)
            if not mon:
                body = _fmt_q(mag)
            elif mag == 1:
                body = mon
            else:
                body = f"{_fmt_q(mag)}*{mon}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"MultiPoly({self.to_str()})"


def _fmt_q(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# division, gcd, content

def divexact(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Exact quotient ``a / b``; raises ``ArithmeticError`` if ``b`` does not divide ``a``."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if b.is_constant():
        return a * (1 / b.constant_value())
    n = a.nvars
    eb, cb = b.leading_term()
    bt = list(b.terms.items())
    r = dict(a.terms)
    q: dict = {}
    while r:
        er = max(r, key=lambda e: e[::-1])
        m = tuple(x - y for x, y in zip(er, eb))
        if min(m) < 0:
            raise ArithmeticError("inexact polynomial division")
        c = r[er] / cb
        q[m] = c
        for e, cc in bt:
            e2 = tuple(x + y for x, y in zip(e, m))
            s = r.get(e2, _ZERO) - c * cc
            if s:
                r[e2] = s
            else:
                r.pop(e2, None)
    return MultiPoly(n, q, _clean=True)


def prem(a: MultiPoly, b: MultiPoly, v: int) -> MultiPoly:
    """Pseudo-remainder of ``a`` by ``b`` in ``x_v``."""
    db = b.degree(v)
    lb = b.leading_coefficient(v)
    xv = MultiPoly.var(a.nvars, v)
    r = a
    da = r.degree(v)
    # fixed number of steps so the multiplier is lc(b)^(deg a - deg b + 1)
    steps = da - db + 1
    for _ in range(max(steps, 0)):
        dr = r.degree(v)
        if dr < db:
            r = r * lb
            continue
        r = r * lb - r.leading_coefficient(v) * (xv ** (dr - db)) * b
    return r


def content(p: MultiPoly, v: int) -> MultiPoly:
    """Gcd of the coefficients of ``p`` viewed in ``x_v`` (normalised)."""
    g = MultiPoly(p.nvars)
    for c in p.coeffs(v):
        if not c.is_zero():
            g = gcd(g, c)
            if g.is_constant():
                return MultiPoly.const(p.nvars, 1)
    return g


def primitive_part(p: MultiPoly, v: int) -> MultiPoly:
    if p.is_zero():
        return p
    return divexact(p, content(p, v)).normalized()


def gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Normalised greatest common divisor over Q."""
    return _gcd_cached(a, b)


@lru_cache(maxsize=20000)
def _gcd_cached(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    n = a.nvars
    if a.is_zero():
        return b.normalized()
    if b.is_zero():
        return a.normalized()
    if a.is_constant() or b.is_constant():
        return MultiPoly.const(n, 1)
    v = max(a.main_var, b.main_var)
    if a.degree(v) == 0:
        return gcd(a, content(b, v))
    if b.degree(v) == 0:
        return gcd(content(a, v), b)
    ca, cb = content(a, v), content(b, v)
    pa, pb = divexact(a, ca), divexact(b, cb)
    c = gcd(ca, cb)
    if pa.degree(v) < pb.degree(v):
        pa, pb = pb, pa
    while True:
        r = prem(pa, pb, v)
        if r.is_zero():
            break
        if r.degree(v) == 0:
            pb = MultiPoly.const(n, 1)
            break
        pa, pb = pb, primitive_part(r, v)
    g = primitive_part(pb, v) if not pb.is_constant() else pb
    return (c * g).normalized()


def squarefree_part(p: MultiPoly, v: int) -> MultiPoly:
    """``p / gcd(p, dp/dx_v)``, normalised."""
    if p.is_zero():
        return p
    d = p.derivative(v)
    if d.is_zero():
        return MultiPoly.const(p.nvars, 1)
    g = gcd(p, d)
    return divexact(p, g).normalized()


def projection_factors(p: MultiPoly) -> list[MultiPoly]:
    """Normalised polynomials whose common zero set covers that of ``p``.

    Contents are split off recursively and the primitive part is made
    squarefree in its main variable; constants are dropped.
    """
    out: list[MultiPoly] = []
    _factors(p, out)
    seen, uniq = set(), []
    for f in out:
        if f not in seen:
            seen.add(f)
            uniq.append(f)
    return uniq


def _factors(p: MultiPoly, out: list) -> None:
    if p.is_zero() or p.is_constant():
        return
    v = p.main_var
    cont = content(p, v)
    pp = divexact(p, cont) if not cont.is_constant() else p
    out.append(squarefree_part(pp, v))
    _factors(cont, out)


# ---------------------------------------------------------------------------
# determinants and subresultants

def det(mat: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant of a square matrix of polynomials.

    Variables are removed one at a time by evaluation at integer points and
    Newton interpolation; the constant base case is exact Gaussian elimination.
    """
    n = len(mat)
    if n == 0:
        raise ValueError("empty matrix")
    nv = mat[0][0].nvars
    used = set()
    for row in mat:
        for e in row:
            if not e.is_constant():
                used |= e.variables()
    if not used:
        return MultiPoly.const(nv, _qdet([[e.constant_value() for e in row] for row in mat]))
    w = max(used)
    degs = [[e.degree(w) for e in row] for row in mat]
    rows_bound = sum(max(max(r), 0) for r in degs)
    cols_bound = sum(max(max(degs[i][j] for i in range(n)), 0) for j in range(n))
    bound = min(rows_bound, cols_bound)
    pts, vals = [], []
    for k in range(bound + 1):
        t = mpq((k + 1) // 2 if k % 2 else -(k // 2))
        pts.append(t)
        vals.append(det([[e.subs({w: t}) if e.degree(w) > 0 else e for e in row] for row in mat]))
    return _newton(pts, vals, w, nv)


def _newton(pts, vals, w, nv) -> MultiPoly:
    a = list(vals)
    m = len(pts)
    for j in range(1, m):
        for i in range(m - 1, j - 1, -1):
            a[i] = (a[i] - a[i - 1]) * (1 / (pts[i] - pts[i - j]))
    xw = MultiPoly.var(nv, w)
    out = a[m - 1]
    for i in range(m - 2, -1, -1):
        out = out * (xw - pts[i]) + a[i]
    return out


def _qdet(m) -> Rational:
    m = [list(r) for r in m]
    n = len(m)
    d = _ONE
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            return _ZERO
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            d = -d
        pk = m[k][k]
        d *= pk
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            if ri[k]:
                f = ri[k] / pk
                for j in range(k + 1, n):
                    if rk[j]:
                        ri[j] -= f * rk[j]
    return d


def _sub_matrix(p: MultiPoly, q: MultiPoly, v: int, j: int) -> list[list[MultiPoly]]:
    m, n = p.degree(v), q.degree(v)
    P, Q = p.coeffs(v), q.coeffs(v)
    zero = MultiPoly(p.nvars)
    width = m + n - j
    cols = m + n - 2 * j
    rows = []
    for coeffs, deg, count in ((P, m, n - j), (Q, n, m - j)):
        for s in range(count - 1, -1, -1):
            row = []
            for c in range(cols):
                e = width - 1 - c - s
                row.append(coeffs[e] if 0 <= e <= deg else zero)
            rows.append(row)
    return rows


def subresultant_psc(p: MultiPoly, q: MultiPoly, v: int) -> list[MultiPoly]:
    """Principal subresultant coefficients ``psc_0 .. psc_{min(deg p, deg q)-1}``.

    ``psc_j`` is the determinant of the Sylvester submatrix with ``n-j`` shifted
    copies of ``p`` above ``m-j`` copies of ``q`` and the first ``m+n-2j``
    columns; ``psc_0`` is the resultant.
    """
    m, n = p.degree(v), q.degree(v)
    if m < 1 or n < 1:
        raise ValueError("subresultants need positive degree in the eliminated variable")
    return [_psc(p, q, v, j) for j in range(min(m, n))]


@lru_cache(maxsize=50000)
def _psc(p: MultiPoly, q: MultiPoly, v: int, j: int) -> MultiPoly:
    return det(_sub_matrix(p, q, v, j))


def resultant(p: MultiPoly, q: MultiPoly, v: int) -> MultiPoly:
    """Sylvester resultant of ``p`` and ``q`` with respect to ``x_v``."""
    if p.degree(v) < 1 or q.degree(v) < 1:
        raise ValueError("resultant needs positive degree in the eliminated variable")
    return _psc(p, q, v, 0)


def discriminant(p: MultiPoly, v: int) -> MultiPoly:
    """``(-1)^(d(d-1)/2) * res(p, dp/dx_v) / lc(p)``; for ``a y^2 + b y + c`` this is ``b^2 - 4ac``."""
    d = p.degree(v)
    if d < 2:
        raise ValueError("discriminant needs degree >= 2")
    r = resultant(p, p.derivative(v), v)
    r = divexact(r, p.leading_coefficient(v))
    return -r if (d * (d - 1) // 2) % 2 else r


# ---------------------------------------------------------------------------
# textual syntax

class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.msg, self.line, self.col = msg, line, col


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][-+]?\d+)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str, line: int, col0: int):
    pos, toks = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            j = pos
            while j < len(text) and text[j].isspace():
                j += 1
            raise ParseError(f"unexpected character {text[j]!r}", line, col0 + j)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), col0 + start))
        pos = m.end()
    toks.append(("end", "", col0 + len(text)))
    return toks


class _PolyParser:
    def __init__(self, text, names, declare, line, col0):
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.names = names
        self.declare = declare
        self.line = line
        self.terms = []

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.line, tok[2])

    # polynomials are built over a growing universe; widened at the end
    def raw(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        v = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return v

    def expr(self):
        acc = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            acc = _padd(acc, rhs) if op == "+" else _padd(acc, _pneg(rhs))
        return acc

    def term(self):
        acc = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                acc = _pmul(acc, rhs)
            else:
                if any(any(e) for e in rhs) or not rhs:
                    self.fail("division is only allowed by a nonzero constant", tok)
                acc = _pscale(acc, 1 / rhs[()])
        return acc

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            v = self.unary()
            return v if tok[1] == "+" else _pneg(v)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num" or not tok[1].isdigit():
                self.fail("exponent must be a nonnegative integer", tok)
            k = int(tok[1])
            out = {(): _ONE}
            for _ in range(k):
                out = _pmul(out, base)
            return out
        return base

    def atom(self):
        tok = self.take()
        if tok[0] == "num":
            return {(): as_rational(tok[1])}
        if tok[0] == "name":
            if tok[1] not in self.names:
                if not self.declare:
                    raise ParseError(f"undeclared variable {tok[1]!r}", self.line, tok[2])
                self.names.append(tok[1])
            return {((self.names.index(tok[1]), 1),): _ONE}
        if tok[1] == "(":
            v = self.expr()
            if self.take()[1] != ")":
                self.fail("expected ')'", self.toks[self.i - 1])
            return v
        self.fail("expected a number, variable or '('", tok)


# sparse dict polys keyed by sorted ((var, exp), ...) during parsing

def _padd(a, b):
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, _ZERO) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _pneg(a):
    return {k: -c for k, c in a.items()}


def _pscale(a, s):
    return {k: c * s for k, c in a.items() if c * s}


def _pmul(a, b):
    out: dict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            d = dict(ka)
            for v, e in kb:
                d[v] = d.get(v, 0) + e
            k = tuple(sorted(d.items()))
            out[k] = out.get(k, _ZERO) + ca * cb
    return {k: c for k, c in out.items() if c}


def _to_multipoly(d, nvars):
    t = {}
    for k, c in d.items():
        e = [0] * nvars
        for v, x in k:
            e[v] = x
        t[tuple(e)] = c
    return MultiPoly(nvars, t, _clean=True)


def parse_poly(text: str, names: list[str], *, declare: bool = False, line: int = 1, col: int = 1,
               nvars: int | None = None) -> MultiPoly:
    """Parse ``+ - * ^`` syntax over ``names`` (e.g. ``x^2 + y^2 - 1``).

    With ``declare=True`` unknown names are appended to ``names``.
    """
    parser = _PolyParser(text, names, declare, line, col)
    d = parser.raw()
    return _to_multipoly(d, nvars if nvars is not None else len(names))

