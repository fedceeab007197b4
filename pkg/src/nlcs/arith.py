"""Exact rational and real algebraic number arithmetic.

Rationals are ``gmpy2.mpq``.  Univariate polynomials over Q are plain
coefficient sequences, lowest degree first.  Real roots are isolated with
Sturm sequences and represented by :class:`RealAlgebraic`.
"""
from __future__ import annotations

import math
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq, mpz

Rational = type(mpq())

__all__ = [
    "Rational", "Sign", "RealAlgebraic", "NEG_INF", "POS_INF",
    "as_rational", "isolate_real_roots", "compare", "sign_at",
    "rational_between", "refine",
]


def as_rational(x) -> Rational:
    """Coerce ints, strings (``"3/4"``, ``"1.25"``, ``"1e-3"``), Fractions and mpq."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            num, den = s.split("/", 1)
            return mpq(int(num), int(den))
        return mpq(Fraction(s))
    if isinstance(x, float):
        return mpq(Fraction(x))
    return mpq(x)


class Sign(IntEnum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1

    @classmethod
    def of(cls, x) -> "Sign":
        return cls.POSITIVE if x > 0 else cls.NEGATIVE if x < 0 else cls.ZERO


# ---------------------------------------------------------------------------
# univariate helpers (coefficient lists, low -> high)

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _deg(p) -> int:
    return len(p) - 1


def _ev(p, x):
    acc = mpq(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sgn_at(p, x) -> int:
    v = _ev(p, x)
    return (v > 0) - (v < 0)


def _derivative(p):
    return [c * i for i, c in enumerate(p)][1:]


def _divmod(a, b):
    a = [mpq(c) for c in a]
    db = _deg(b)
    lb = b[-1]
    if _deg(a) < db:
        return [], _trim(a)
    q = [mpq(0)] * (_deg(a) - db + 1)
    for i in range(_deg(a) - db, -1, -1):
        c = a[i + db] / lb
        q[i] = c
        if c:
            for j in range(db + 1):
                a[i + j] -= c * b[j]
    return _trim(q), _trim(a[:db])


def _rem(a, b):
    return _divmod(a, b)[1]


def _monic(p):
    lc = p[-1]
    return [c / lc for c in p]


def upoly_gcd(a, b):
    """Monic gcd over Q (``[1]`` for coprime inputs, ``[]`` if both zero)."""
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _rem(a, b)
    return _monic(a) if a else []


def upoly_primitive(p):
    """Integer coefficients with gcd 1 and positive leading coefficient."""
    p = _trim(p)
    if not p:
        return []
    den = 1
    for c in p:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [mpz(c * den) for c in p]
    g = 0
    for c in ints:
        g = math.gcd(g, int(c))
    if p[-1] < 0:
        g = -g
    return [mpq(c // g) for c in ints]


def upoly_squarefree(p):
    p = _trim(p)
    if _deg(p) < 1:
        return p
    g = upoly_gcd(p, _derivative(p))
    if _deg(g) < 1:
        return upoly_primitive(p)
    return upoly_primitive(_divmod(p, g)[0])


def sturm_sequence(p):
    seq = [list(p), _derivative(p)]
    while True:
        r = _rem(seq[-2], seq[-1])
        if not r:
            return seq
        # positive rescaling keeps the sign pattern
        scale = abs(r[-1])
        seq.append([-c / scale for c in r])


def _variations(seq, x) -> int:
    count, last = 0, 0
    for q in seq:
        s = _sgn_at(q, x)
        if s:
            if last and s != last:
                count += 1
            last = s
    return count


def _variations_inf(seq, positive: bool) -> int:
    count, last = 0, 0
    for q in seq:
        if not q:
            continue
        s = 1 if q[-1] > 0 else -1
        if not positive and _deg(q) % 2:
            s = -s
        if last and s != last:
            count += 1
        last = s
    return count


def count_roots(p, lo, hi) -> int:
    """Number of distinct real roots of ``p`` in the closed interval [lo, hi]."""
    p = upoly_squarefree(p)
    if _deg(p) < 1:
        return 0
    seq = sturm_sequence(p)
    n = _variations(seq, lo) - _variations(seq, hi)
    if _ev(p, lo) == 0:
        n += 1
    return n


def _cauchy_bound(p) -> Rational:
    lc = abs(p[-1])
    return 1 + max(abs(c) / lc for c in p[:-1]) if len(p) > 1 else mpq(1)


def interval_eval_upoly(p, lo, hi):
    """Exact interval enclosure of p over [lo, hi] (Horner form)."""
    alo = ahi = mpq(0)
    for c in reversed(p):
        prods = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(prods) + c, max(prods) + c
    return alo, ahi


# ---------------------------------------------------------------------------

class _Infinity:
    def __init__(self, sign: int):
        self.sign = sign

    def __repr__(self):
        return "+oo" if self.sign > 0 else "-oo"


NEG_INF = _Infinity(-1)
POS_INF = _Infinity(1)


class RealAlgebraic:
    """A real root of a squarefree primitive integer polynomial, pinned by an
    isolating interval.

    The value never changes; ``lo``/``hi`` may tighten internally as other
    operations refine the interval.
    """

    __slots__ = ("_poly", "_lo", "_hi", "_exact", "_slo")

    def __init__(self, defining: Sequence, lo, hi, *, check: bool = True):
        poly = upoly_squarefree([as_rational(c) for c in defining])
        lo, hi = as_rational(lo), as_rational(hi)
        if _deg(poly) < 1:
            raise ValueError("defining polynomial must have positive degree")
        if lo > hi:
            raise ValueError("empty isolating interval")
        self._poly = tuple(poly)
        self._exact = None
        if lo == hi:
            if _ev(poly, lo) != 0:
                raise ValueError("point interval is not a root")
            self._set_exact(lo)
            return
        if check and count_roots(poly, lo, hi) != 1:
            raise ValueError("interval does not isolate exactly one root")
        self._lo, self._hi = lo, hi
        for end in (lo, hi):
            if _ev(poly, end) == 0:
                self._set_exact(end)
                return
        self._slo = _sgn_at(poly, lo)
        self._detect_rational()

    def _detect_rational(self) -> None:
        # keeps the invariant ``exact is None`` <=> irrational
        self._tighten(mpq(1, 2 * abs(int(self._poly[-1]))))
        if self._exact is None:
            q = _rational_root_in(self._poly, self._lo, self._hi)
            if q is not None:
                self._set_exact(q)

    @classmethod
    def from_rational(cls, q) -> "RealAlgebraic":
        q = as_rational(q)
        return cls([-q, 1], q, q, check=False)

    def _set_exact(self, q):
        self._exact = q
        self._lo = self._hi = q
        self._slo = 0
        self._poly = (mpq(-q.numerator), mpq(q.denominator))

    # -- read-only views -------------------------------------------------
    @property
    def defining(self) -> tuple:
        return self._poly

    @property
    def lo(self) -> Rational:
        return self._lo

    @property
    def hi(self) -> Rational:
        return self._hi

    @property
    def exact(self):
        return self._exact

    @property
    def is_rational(self) -> bool:
        return self._exact is not None

    @property
    def degree(self) -> int:
        return _deg(self._poly)

    def width(self) -> Rational:
        return self._hi - self._lo

    # -- refinement ------------------------------------------------------
    def _bisect(self) -> None:
        mid = (self._lo + self._hi) / 2
        s = _sgn_at(self._poly, mid)
        if s == 0:
            self._set_exact(mid)
        elif s == self._slo:
            self._lo = mid
        else:
            self._hi = mid

    def _tighten(self, width) -> None:
        while self._exact is None and self._hi - self._lo > width:
            self._bisect()

    def refine(self, width) -> "RealAlgebraic":
        width = as_rational(width)
        if width <= 0:
            raise ValueError("width must be positive")
        out = self.copy()
        out._tighten(width)
        return out

    def copy(self) -> "RealAlgebraic":
        out = object.__new__(RealAlgebraic)
        out._poly, out._lo, out._hi = self._poly, self._lo, self._hi
        out._exact, out._slo = self._exact, self._slo
        return out

    # -- comparisons -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, RealAlgebraic):
            return compare(self, other) == 0
        if isinstance(other, (int, Fraction, Rational)):
            return compare(self, RealAlgebraic.from_rational(other)) == 0
        return NotImplemented

    __hash__ = None

    def __lt__(self, other):
        return compare(self, _coerce(other)) < 0

    def __le__(self, other):
        return compare(self, _coerce(other)) <= 0

    def __gt__(self, other):
        return compare(self, _coerce(other)) > 0

    def __ge__(self, other):
        return compare(self, _coerce(other)) >= 0

    def __float__(self):
        if self._exact is not None:
            return float(self._exact)
        self._tighten(abs(self._lo + self._hi) * mpq(1, 2**55) + mpq(1, 2**60))
        return float((self._lo + self._hi) / 2)

    def __repr__(self):
        if self._exact is not None:
            return f"RealAlgebraic({self._exact})"
        return f"RealAlgebraic(root of {list(map(str, self._poly))} in [{self._lo}, {self._hi}] ~ {float(self):.6g})"

    def to_json(self) -> dict:
        return {"poly": [str(c) for c in self._poly], "lo": _qstr(self._lo), "hi": _qstr(self._hi)}

    @classmethod
    def from_json(cls, obj: dict) -> "RealAlgebraic":
        return cls([as_rational(c) for c in obj["poly"]], as_rational(obj["lo"]), as_rational(obj["hi"]))


def _qstr(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _coerce(x) -> RealAlgebraic:
    return x if isinstance(x, RealAlgebraic) else RealAlgebraic.from_rational(x)


# ---------------------------------------------------------------------------
# operations

def _as_coeffs(p) -> list:
    if hasattr(p, "as_univariate"):
        return [mpq(c) for c in p.as_univariate()]
    return _trim(as_rational(c) for c in p)


def _rational_root_in(poly, lo, hi):
    """Return the rational root of integer ``poly`` in [lo, hi] if there is one.

    A rational root of an integer polynomial with leading coefficient ``a`` has
    the form k/a, so it suffices to test the multiples of 1/a inside the interval.
    """
    a = int(poly[-1])
    for k in range(math.ceil(lo * a), math.floor(hi * a) + 1):
        q = mpq(k, a)
        if _ev(poly, q) == 0:
            return q
    return None


def isolate_real_roots(p) -> list[RealAlgebraic]:
    """All distinct real roots of a univariate polynomial, in ascending order."""
    coeffs = _as_coeffs(p)
    if not coeffs:
        raise ValueError("zero polynomial has no root isolation")
    poly = upoly_squarefree(coeffs)
    if _deg(poly) < 1:
        return []
    seq = sturm_sequence(poly)
    bound = _cauchy_bound(poly)
    roots: list[RealAlgebraic] = []
    _isolate(poly, seq, -bound, bound, _variations(seq, -bound) - _variations(seq, bound), roots)
    roots.sort(key=lambda r: r.lo)
    for r in roots:
        if r.exact is None:
            r._detect_rational()
    return roots


def _isolate(poly, seq, a, b, n, out) -> None:
    # invariant: a, b are not roots; n roots in (a, b)
    while n:
        if n == 1:
            r = object.__new__(RealAlgebraic)
            r._poly, r._lo, r._hi, r._exact = tuple(poly), a, b, None
            r._slo = _sgn_at(poly, a)
            out.append(r)
            return
        mid = (a + b) / 2
        if _ev(poly, mid) == 0:
            out.append(RealAlgebraic.from_rational(mid))
            delta = (b - a) / 4
            while True:
                lo, hi = mid - delta, mid + delta
                if _ev(poly, lo) and _ev(poly, hi) and _variations(seq, lo) - _variations(seq, hi) == 1:
                    break
                delta /= 2
            n_left = _variations(seq, a) - _variations(seq, lo)
            _isolate(poly, seq, a, lo, n_left, out)
            a, n = hi, n - n_left - 1
            continue
        n_left = _variations(seq, a) - _variations(seq, mid)
        _isolate(poly, seq, a, mid, n_left, out)
        a, n = mid, n - n_left


def compare(a: RealAlgebraic, b: RealAlgebraic) -> int:
    """Exact three-way comparison: -1, 0 or 1."""
    if a is b:
        return 0
    if a.exact is not None and b.exact is not None:
        return (a.exact > b.exact) - (a.exact < b.exact)
    if a.hi < b.lo:
        return -1
    if b.hi < a.lo:
        return 1
    if a.exact is not None:
        return -_orientation(b, a.exact)
    if b.exact is not None:
        return _orientation(a, b.exact)
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    g = upoly_gcd(a.defining, b.defining)
    if _deg(g) >= 1 and count_roots(g, lo, hi) == 1:
        return 0
    while not (a.hi < b.lo or b.hi < a.lo):
        if a.width() >= b.width():
            a._tighten(a.width() / 2)
        else:
            b._tighten(b.width() / 2)
        if a.exact is not None or b.exact is not None:
            return compare(a, b)
    return -1 if a.hi < b.lo else 1


def _orientation(r: RealAlgebraic, q) -> int:
    """Compare irrational ``r`` with rational ``q`` (never equal)."""
    while r.lo <= q <= r.hi:
        r._bisect()
        if r.exact is not None:
            return (r.exact > q) - (r.exact < q)
    return 1 if r.lo > q else -1


def sign_at(p, a: RealAlgebraic) -> Sign:
    """Exact sign of univariate ``p`` at the algebraic number ``a``."""
    coeffs = _as_coeffs(p)
    if not coeffs:
        return Sign.ZERO
    if a.exact is not None:
        return Sign.of(_ev(coeffs, a.exact))
    g = upoly_gcd(coeffs, a.defining)
    if _deg(g) >= 1 and _sgn_at(g, a.lo) != _sgn_at(g, a.hi):
        return Sign.ZERO
    while True:
        lo, hi = interval_eval_upoly(coeffs, a.lo, a.hi)
        if lo > 0:
            return Sign.POSITIVE
        if hi < 0:
            return Sign.NEGATIVE
        a._tighten(a.width() / 4)
        if a.exact is not None:
            return Sign.of(_ev(coeffs, a.exact))


def simplest_between(lo, hi) -> Rational:
    """The rational with least denominator (then least magnitude) in (lo, hi)."""
    if lo >= hi:
        raise ValueError("empty interval")
    if lo < 0 < hi:
        return mpq(0)
    if hi <= 0:
        return -simplest_between(-hi, -lo)
    # continued-fraction search on 0 <= lo < hi
    fl = math.floor(lo)
    if fl + 1 < hi:
        return mpq(fl + 1)
    if lo == fl:
        # lo is an integer; need a value strictly above it
        return fl + 1 / (_simplest_above_zero(1 / (hi - fl)))
    return fl + 1 / simplest_between(1 / (hi - fl), 1 / (lo - fl))


def _simplest_above_zero(bound):
    # smallest positive integer strictly greater than ``bound``
    return mpq(math.floor(bound) + 1)


def rational_between(a, b) -> Rational:
    """A deterministic rational strictly between ``a`` and ``b`` (a < b).

    Either argument may be an infinity marker.  Below the least root the
    result is ``floor(lo) - 1``; above the greatest it is ``ceil(hi) + 1``.
    """
    if a is NEG_INF and b is POS_INF:
        return mpq(0)
    if a is NEG_INF:
        b = _coerce(b)
        return b.exact - 1 if b.exact is not None else mpq(math.floor(b.lo) - 1)
    if b is POS_INF:
        a = _coerce(a)
        return a.exact + 1 if a.exact is not None else mpq(math.ceil(a.hi) + 1)
    a, b = _coerce(a), _coerce(b)
    if compare(a, b) >= 0:
        raise ValueError("rational_between requires a < b")
    while not a.hi < b.lo:
        if a.width() >= b.width():
            a._tighten(a.width() / 2)
        else:
            b._tighten(b.width() / 2)
    return simplest_between(a.hi, b.lo)


def refine(a: RealAlgebraic, width) -> RealAlgebraic:
    return a.refine(width)
