"""Input model: indexed conjunctions of polynomial sign conditions.

Constraint ids are the 1-based positions in the original input; every later
stage (preprocessing, engines, conflict sets) reports in these ids.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum

from .arith import Sign
from .poly import MultiPoly, ParseError, parse_poly

__all__ = [
    "Relation", "Constraint", "ConstraintSystem", "InputError", "ParseError",
    "UnsupportedFeature", "parse_native", "parse_smtlib_subset", "parse_file",
    "preprocess", "holds",
]


class InputError(ValueError):
    pass


class UnsupportedFeature(InputError):
    def __init__(self, construct: str, line: int | None = None):
        where = f" (line {line})" if line else ""
        super().__init__(f"unsupported SMT-LIB feature: {construct}{where}")
        self.construct = construct


class Relation(Enum):
    LT = "<"
    LE = "<="
    EQ = "="
    NE = "!="
    GT = ">"
    GE = ">="

    @property
    def symbol(self) -> str:
        return self.value

    def holds(self, s: Sign) -> bool:
        return s in _ALLOWED[self]

    def negate(self) -> "Relation":
        return _NEGATE[self]

    def flip(self) -> "Relation":
        """Relation for the negated polynomial: p < 0 iff -p > 0."""
        return _FLIP[self]

    def signs(self) -> frozenset:
        return _ALLOWED[self]

    @property
    def is_strict(self) -> bool:
        return self in (Relation.LT, Relation.GT, Relation.NE)


_N, _Z, _P = Sign.NEGATIVE, Sign.ZERO, Sign.POSITIVE
_ALLOWED = {
    Relation.LT: frozenset({_N}),
    Relation.LE: frozenset({_N, _Z}),
    Relation.EQ: frozenset({_Z}),
    Relation.NE: frozenset({_N, _P}),
    Relation.GT: frozenset({_P}),
    Relation.GE: frozenset({_Z, _P}),
}
_NEGATE = {
    Relation.LT: Relation.GE, Relation.LE: Relation.GT, Relation.EQ: Relation.NE,
    Relation.NE: Relation.EQ, Relation.GT: Relation.LE, Relation.GE: Relation.LT,
}
_FLIP = {
    Relation.LT: Relation.GT, Relation.LE: Relation.GE, Relation.EQ: Relation.EQ,
    Relation.NE: Relation.NE, Relation.GT: Relation.LT, Relation.GE: Relation.LE,
}
_BY_SIGNS = {v: k for k, v in _ALLOWED.items()}


def relation_from_signs(signs: frozenset) -> Relation | None:
    return _BY_SIGNS.get(frozenset(signs))


def holds(rel: Relation, s: Sign) -> bool:
    return rel.holds(s)


@dataclass(frozen=True)
class Constraint:
    poly: MultiPoly
    rel: Relation
    id: int

    @property
    def is_constant(self) -> bool:
        return self.poly.is_constant()

    def constant_truth(self) -> bool | None:
        """Truth value of a variable-free constraint, else ``None``."""
        if not self.poly.is_constant():
            return None
        return self.rel.holds(Sign.of(self.poly.constant_value()))

    def to_str(self, names) -> str:
        return f"{self.poly.to_str(names)} {self.rel.symbol} 0"


@dataclass(frozen=True)
class ConstraintSystem:
    constraints: tuple[Constraint, ...]
    variables: tuple[str, ...]
    n_original: int = 0
    conflict: frozenset[int] | None = None   # set when preprocessing proved UNSAT

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "variables", tuple(self.variables))
        if not self.n_original:
            object.__setattr__(self, "n_original", max((c.id for c in self.constraints), default=0))
        for c in self.constraints:
            if c.poly.nvars != len(self.variables):
                raise InputError("constraint polynomial does not match the variable list")

    @property
    def provenance(self) -> dict[int, int]:
        """Internal position -> original id."""
        return {i: c.id for i, c in enumerate(self.constraints)}

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def ids(self) -> list[int]:
        return [c.id for c in self.constraints]

    def __len__(self):
        return len(self.constraints)

    def polys(self) -> list[MultiPoly]:
        return [c.poly for c in self.constraints]

    def restrict(self, ids) -> "ConstraintSystem":
        keep = set(ids)
        return ConstraintSystem(tuple(c for c in self.constraints if c.id in keep),
                                self.variables, self.n_original)

    def reorder(self, order) -> "ConstraintSystem":
        """Same system with variables renumbered to follow ``order`` (names)."""
        order = list(order)
        if sorted(order) != sorted(self.variables):
            raise InputError("variable order must be a permutation of the declared variables")
        perm = [order.index(v) for v in self.variables]
        cons = tuple(Constraint(c.poly.permute(perm), c.rel, c.id) for c in self.constraints)
        return ConstraintSystem(cons, tuple(order), self.n_original, self.conflict)

    def satisfied_by(self, values) -> bool:
        """Exact check at a rational point (sequence in variable order)."""
        return all(c.rel.holds(Sign.of(c.poly.evaluate(values))) for c in self.constraints)

    def to_native(self) -> str:
        lines = ["vars: " + " ".join(self.variables)]
        lines += [c.to_str(self.variables) for c in self.constraints]
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# native format

_REL_RE = re.compile(r"<=|>=|!=|==|<|>|=")
_REL_TOKENS = {"<": Relation.LT, "<=": Relation.LE, "=": Relation.EQ, "==": Relation.EQ,
               "!=": Relation.NE, ">": Relation.GT, ">=": Relation.GE}


def parse_native(text: str) -> ConstraintSystem:
    """Parse ``vars: x y`` (optional) followed by one ``<poly> <rel> <poly>`` per line.

    Without a header, variables are declared in order of first appearance.
    ``#`` starts a comment.
    """
    names: list[str] = []
    declared = False
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("vars:") or stripped.startswith("vars "):
            if declared or rows:
                raise ParseError("variable header must come first and only once", lineno, 1)
            body = stripped[4:].lstrip(": ")
            for tok in body.replace(",", " ").split():
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok):
                    raise ParseError(f"bad variable name {tok!r}", lineno, line.find(tok) + 1)
                if tok in names:
                    raise ParseError(f"variable {tok!r} declared twice", lineno, line.find(tok) + 1)
                names.append(tok)
            declared = True
            continue
        rels = list(_REL_RE.finditer(line))
        if len(rels) != 1:
            col = rels[1].start() + 1 if rels else len(line.rstrip()) + 1
            raise ParseError("expected exactly one relation symbol", lineno, col)
        m = rels[0]
        rows.append((lineno, line[:m.start()], m.group(), line[m.end():], m.end()))
    parsed = []
    for lineno, lhs, op, rhs, off in rows:
        a = parse_poly(lhs, names, declare=not declared, line=lineno, col=1, nvars=None)
        b = parse_poly(rhs, names, declare=not declared, line=lineno, col=off + 1, nvars=None)
        parsed.append((a, b, _REL_TOKENS[op]))
    n = len(names)
    cons = []
    for i, (a, b, rel) in enumerate(parsed, 1):
        cons.append(Constraint(a.extend(n) - b.extend(n), rel, i))
    return ConstraintSystem(tuple(cons), tuple(names), len(cons))


# ---------------------------------------------------------------------------
# SMT-LIB subset

_SMT_TOKEN = re.compile(r"\s*(?:(;[^\n]*)|(\()|(\))|(\|[^|]*\|)|(\"(?:[^\"]|\"\")*\")|([^\s();|\"]+))")


def _sexprs(text: str):
    """Parse all top-level s-expressions; atoms carry their line numbers."""
    pos, stack, out = 0, [], []
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def line_of(p):
        lo, hi = 0, len(line_starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if line_starts[mid] <= p:
                lo = mid
            else:
                hi = mid - 1
        return lo + 1

    while pos < len(text):
        m = _SMT_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ParseError("unexpected character", line_of(pos), 1)
            break
        pos = m.end()
        if m.group(1):
            continue
        if m.group(2):
            stack.append(_SList(line_of(m.start(2))))
        elif m.group(3):
            if not stack:
                raise ParseError("unbalanced ')'", line_of(m.start(3)), 1)
            done = stack.pop()
            (stack[-1] if stack else out).append(done)
        else:
            tok = m.group(4) or m.group(5) or m.group(6)
            atom = _Atom(tok.strip("|"), line_of(m.start()))
            (stack[-1] if stack else out).append(atom)
    if stack:
        raise ParseError("unbalanced '('", stack[-1].line, 1)
    return out


class _SList(list):
    def __init__(self, line):
        super().__init__()
        self.line = line


class _Atom(str):
    def __new__(cls, s, line):
        o = super().__new__(cls, s)
        o.line = line
        return o


_SMT_REL = {"<": Relation.LT, "<=": Relation.LE, "=": Relation.EQ, ">": Relation.GT,
            ">=": Relation.GE, "distinct": Relation.NE}
_UNSUPPORTED = {"or": "disjunction (or)", "let": "let", "ite": "ite", "=>": "implication (=>)",
                "xor": "xor", "exists": "quantifier (exists)", "forall": "quantifier (forall)",
                "/": "division", "div": "division", "to_int": "to_int", "abs": "abs"}
_NUM_RE = re.compile(r"\d+(\.\d+)?")


def parse_smtlib_subset(text: str) -> ConstraintSystem:
    """Parse QF_NRA input whose asserts are conjunctions of (negated) atoms."""
    names: list[str] = []
    atoms: list[tuple[MultiPoly, Relation]] = []
    for cmd in _sexprs(text):
        if not isinstance(cmd, list) or not cmd:
            raise ParseError("expected a command", getattr(cmd, "line", 1), 1)
        head = cmd[0]
        if head in ("set-logic", "set-info", "set-option", "check-sat", "exit", "get-model",
                    "get-unsat-core", "push", "pop"):
            if head == "set-logic" and len(cmd) > 1 and cmd[1] not in ("QF_NRA", "QF_LRA", "NRA", "ALL"):
                raise UnsupportedFeature(f"logic {cmd[1]}", cmd.line)
            continue
        if head in ("declare-fun", "declare-const"):
            name = cmd[1]
            sort = cmd[-1]
            if head == "declare-fun" and cmd[2]:
                raise UnsupportedFeature("uninterpreted function", cmd.line)
            if sort != "Real":
                raise UnsupportedFeature(f"sort {sort}", cmd.line)
            if name in names:
                raise ParseError(f"variable {name!r} declared twice", cmd.line, 1)
            names.append(name)
            continue
        if head == "assert":
            if len(cmd) != 2:
                raise ParseError("assert takes one argument", cmd.line, 1)
            _collect(cmd[1], names, atoms, negated=False)
            continue
        if head == "define-fun":
            raise UnsupportedFeature("define-fun", cmd.line)
        raise UnsupportedFeature(f"command {head}", cmd.line)
    n = len(names)
    cons = tuple(Constraint(p.extend(n) if p.nvars != n else p, r, i)
                 for i, (p, r) in enumerate(atoms, 1))
    return ConstraintSystem(cons, tuple(names), len(cons))


def _collect(e, names, atoms, negated: bool) -> None:
    line = getattr(e, "line", None)
    if isinstance(e, str):
        if e == "true" or e == "false":
            truth = (e == "true") != negated
            if not truth:
                atoms.append((MultiPoly(len(names)), Relation.NE))
            return
        raise ParseError(f"expected a formula, found {e!r}", line or 1, 1)
    if not e:
        raise ParseError("empty formula", line or 1, 1)
    head = e[0]
    if head in _UNSUPPORTED:
        raise UnsupportedFeature(_UNSUPPORTED[head], line)
    if head == "and":
        if negated:
            raise UnsupportedFeature("disjunction (not over and)", line)
        for sub in e[1:]:
            _collect(sub, names, atoms, negated)
        return
    if head == "not":
        if len(e) != 2:
            raise ParseError("not takes one argument", line or 1, 1)
        _collect(e[1], names, atoms, not negated)
        return
    if head in _SMT_REL:
        rel = _SMT_REL[head]
        args = [_term(a, names) for a in e[1:]]
        if len(args) < 2:
            raise ParseError(f"{head} needs two arguments", line or 1, 1)
        if head == "distinct" and len(args) > 2:
            raise UnsupportedFeature("distinct with more than two arguments", line)
        if negated and len(args) > 2:
            raise UnsupportedFeature("disjunction (negated chained comparison)", line)
        for a, b in zip(args, args[1:]):
            n = max(a.nvars, b.nvars)
            p = a.extend(n) - b.extend(n)
            atoms.append((p, rel.negate() if negated else rel))
        return
    raise UnsupportedFeature(str(head), line)


def _term(e, names) -> MultiPoly:
    n = len(names)
    line = getattr(e, "line", None)
    if isinstance(e, str):
        if _NUM_RE.fullmatch(e):
            return MultiPoly.const(n, e)
        if e in names:
            return MultiPoly.var(n, names.index(e))
        raise ParseError(f"undeclared variable {e!r}", line or 1, 1)
    if not e:
        raise ParseError("empty term", line or 1, 1)
    head, args = e[0], e[1:]
    if head == "/":
        vals = [_term(a, names) for a in args]
        if len(vals) == 2 and all(v.is_constant() for v in vals) and not vals[1].is_zero():
            return MultiPoly.const(n, vals[0].constant_value() / vals[1].constant_value())
        raise UnsupportedFeature("division", line)
    if head in _UNSUPPORTED:
        raise UnsupportedFeature(_UNSUPPORTED[head], line)
    vals = [_term(a, names) for a in args]
    if head == "+":
        out = MultiPoly.const(n, 0)
        for v in vals:
            out = out + v
        return out
    if head == "*":
        out = MultiPoly.const(n, 1)
        for v in vals:
            out = out * v
        return out
    if head == "-":
        if len(vals) == 1:
            return -vals[0]
        out = vals[0]
        for v in vals[1:]:
            out = out - v
        return out
    if head == "^" or head == "pow":
        if len(args) == 2 and isinstance(args[1], str) and args[1].isdigit():
            return vals[0] ** int(args[1])
    raise UnsupportedFeature(f"operator {head}", line)


def parse_file(path, fmt: str | None = None) -> ConstraintSystem:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if fmt is None:
        fmt = "smt2" if str(path).endswith(".smt2") else "native"
    return parse_smtlib_subset(text) if fmt == "smt2" else parse_native(text)


# ---------------------------------------------------------------------------
# preprocessing

def preprocess(sys: ConstraintSystem) -> ConstraintSystem:
    """Trivial rewriting with id provenance.

    Polynomials are scaled by a positive rational to primitive integer form,
    constant-true constraints are dropped, exact duplicates keep the lowest id,
    and a constant-false constraint yields a system carrying that conflict.
    """
    if sys.conflict is not None:
        return sys
    seen: dict = {}
    out = []
    for c in sorted(sys.constraints, key=lambda c: c.id):
        truth = c.constant_truth()
        if truth is True:
            continue
        if truth is False:
            poly = MultiPoly.const(sys.nvars, c.poly.constant_value())
            return ConstraintSystem((Constraint(poly, c.rel, c.id),), sys.variables,
                                    sys.n_original, frozenset({c.id}))
        scale, p = c.poly.primitive()
        if scale < 0:
            p = -p
        rel = c.rel
        key = (p, rel)
        if key in seen:
            continue
        seen[key] = c.id
        out.append(Constraint(p, rel, c.id))
    return ConstraintSystem(tuple(out), sys.variables, sys.n_original)
