"""The first-order language of set theory: syntax, classification, truth.

Terms are variables or hereditarily finite constants.  Bounded quantifiers
``(all x in t)`` and ``(ex x in t)`` are primitive nodes.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from .setcode import (
    EMPTYSET,
    HFSet,
    SetCode,
    code_eq,
    encode,
    format_hf,
    member_codes,
    universe,
)


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at column {pos + 1}")
        self.pos = pos


class UnboundVariable(KeyError):
    def __str__(self):
        return f"unbound variable {self.args[0]!r}"


class FuelExhausted(RuntimeError):
    pass


class NotDelta0(ValueError):
    pass


# -- terms ------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    value: HFSet

    def __str__(self):
        return format_hf(self.value)


Term = Var | Const


def _term_vars(t) -> frozenset:
    return frozenset([t.name]) if isinstance(t, Var) else frozenset()


# -- formulas ---------------------------------------------------------------

@dataclass(frozen=True)
class Formula:
    span: tuple | None = field(default=None, compare=False, repr=False, kw_only=True)

    @cached_property
    def free_vars(self) -> frozenset:
        return _free(self)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Member(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Equal(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ForAll(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ForAllIn(Formula):
    var: str
    bound: Term
    body: Formula


@dataclass(frozen=True)
class ExistsIn(Formula):
    var: str
    bound: Term
    body: Formula


ATOMS = (Member, Equal)
BINARY = (And, Or, Implies, Iff)
UNBOUNDED = (ForAll, Exists)
BOUNDED = (ForAllIn, ExistsIn)
QUANTIFIERS = UNBOUNDED + BOUNDED

FALSUM = Equal(Const(EMPTYSET), Const(frozenset([EMPTYSET])))


def _free(f: Formula) -> frozenset:
    if isinstance(f, ATOMS):
        return _term_vars(f.left) | _term_vars(f.right)
    if isinstance(f, Not):
        return f.body.free_vars
    if isinstance(f, BINARY):
        return f.left.free_vars | f.right.free_vars
    if isinstance(f, UNBOUNDED):
        return f.body.free_vars - {f.var}
    if isinstance(f, BOUNDED):
        return (f.body.free_vars - {f.var}) | _term_vars(f.bound)
    raise TypeError(f"not a formula: {f!r}")


def is_sentence(f: Formula) -> bool:
    return not f.free_vars


def substitute(f: Formula, name: str, value: HFSet) -> Formula:
    """Replace free occurrences of ``name`` by the constant ``value``."""
    c = Const(value)

    def term(t):
        return c if isinstance(t, Var) and t.name == name else t

    def go(g):
        if name not in g.free_vars:
            return g
        if isinstance(g, ATOMS):
            return type(g)(term(g.left), term(g.right))
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, BINARY):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, UNBOUNDED):
            return type(g)(g.var, go(g.body)) if g.var != name else g
        if isinstance(g, BOUNDED):
            body = g.body if g.var == name else go(g.body)
            return type(g)(g.var, term(g.bound), body)
        raise TypeError(g)

    return go(f)


def substitute_all(f: Formula, env: Mapping[str, HFSet]) -> Formula:
    for k, v in env.items():
        f = substitute(f, k, v)
    return f


def rename(f: Formula, name: str, new: str) -> Formula:
    """Replace free occurrences of the variable ``name`` by the variable ``new``."""
    v = Var(new)

    def term(t):
        return v if isinstance(t, Var) and t.name == name else t

    def go(g):
        if name not in g.free_vars:
            return g
        if isinstance(g, ATOMS):
            return type(g)(term(g.left), term(g.right))
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, BINARY):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, UNBOUNDED):
            return type(g)(g.var, go(g.body)) if g.var != name else g
        body = g.body if g.var == name else go(g.body)
        return type(g)(g.var, term(g.bound), body)

    return go(f)


def free_for(f: Formula, name: str, new: str) -> bool:
    """True when no free occurrence of ``name`` sits under a binder of ``new``."""
    if name == new or name not in f.free_vars:
        return True
    if isinstance(f, ATOMS):
        return True
    if isinstance(f, Not):
        return free_for(f.body, name, new)
    if isinstance(f, BINARY):
        return free_for(f.left, name, new) and free_for(f.right, name, new)
    if f.var == name:
        return True  # only a bound term can still mention name
    if f.var == new and name in f.body.free_vars:
        return False
    return free_for(f.body, name, new)


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(<->|->|[(){},=]|[A-Za-z_][A-Za-z0-9_']*)")
_KEYWORDS = {"in", "and", "or", "not", "all", "ex"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    out, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        out.append((m.group(1), m.start(1)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0):
        j = self.i + k
        return self.toks[j][0] if j < len(self.toks) else None

    def pos(self):
        return self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of input, expected {expected or 'more'}", len(self.text))
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", self.pos())
        self.i += 1
        return tok

    def ident(self) -> str:
        p = self.pos()
        tok = self.take("identifier" if self.peek() is None else None)
        if tok in _KEYWORDS or not re.match(r"[A-Za-z_]", tok):
            raise ParseError(f"expected a variable, found {tok!r}", p)
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek() is not None:
            raise ParseError(f"trailing input {self.peek()!r}", self.pos())
        return f

    def iff(self):
        start = self.pos()
        f = self.imp()
        while self.peek() == "<->":
            self.take()
            f = Iff(f, self.imp(), span=(start, self.pos()))
        return f

    def imp(self):
        start = self.pos()
        f = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(f, self.imp(), span=(start, self.pos()))
        return f

    def disj(self):
        start = self.pos()
        f = self.conj()
        while self.peek() == "or":
            self.take()
            f = Or(f, self.conj(), span=(start, self.pos()))
        return f

    def conj(self):
        start = self.pos()
        f = self.unary()
        while self.peek() == "and":
            self.take()
            f = And(f, self.unary(), span=(start, self.pos()))
        return f

    def unary(self):
        start = self.pos()
        if self.peek() == "not":
            self.take()
            return Not(self.unary(), span=(start, self.pos()))
        if self.peek() == "(" and self.peek(1) in ("all", "ex"):
            self.take("(")
            q = self.take()
            var = self.ident()
            bound = None
            if self.peek() == "in":
                self.take()
                bound = self.term()
            self.take(")")
            body = self.unary()
            span = (start, self.pos())
            if bound is None:
                return (ForAll if q == "all" else Exists)(var, body, span=span)
            return (ForAllIn if q == "all" else ExistsIn)(var, bound, body, span=span)
        if self.peek() == "(":
            self.take()
            f = self.iff()
            self.take(")")
            return f
        return self.atom()

    def atom(self):
        start = self.pos()
        left = self.term()
        op = self.peek()
        if op == "in":
            self.take()
            return Member(left, self.term(), span=(start, self.pos()))
        if op == "=":
            self.take()
            return Equal(left, self.term(), span=(start, self.pos()))
        raise ParseError(f"expected 'in' or '=', found {op!r}", self.pos())

    def term(self):
        if self.peek() == "{":
            return Const(self.hf())
        return Var(self.ident())

    def hf(self) -> HFSet:
        self.take("{")
        kids = []
        if self.peek() == "}":
            self.take()
            return EMPTYSET
        while True:
            kids.append(self.hf())
            if self.peek() == ",":
                self.take()
                continue
            self.take("}")
            return frozenset(kids)


def parse_formula(text: str) -> Formula:
    return _Parser(text).parse()


# -- printing ---------------------------------------------------------------

_LEVEL = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<->", Implies: "->", Or: "or", And: "and"}


def _level(f) -> int:
    if isinstance(f, BINARY):
        return _LEVEL[type(f)]
    if isinstance(f, (Not,) + QUANTIFIERS):
        return 5
    return 6


def to_text(f: Formula) -> str:
    if isinstance(f, Member):
        return f"{f.left} in {f.right}"
    if isinstance(f, Equal):
        return f"{f.left} = {f.right}"
    if isinstance(f, Not):
        inner = to_text(f.body)
        return f"not {inner}" if _level(f.body) >= 5 else f"not ({inner})"
    if isinstance(f, QUANTIFIERS):
        q = "all" if isinstance(f, (ForAll, ForAllIn)) else "ex"
        head = f"({q} {f.var} in {f.bound})" if isinstance(f, BOUNDED) else f"({q} {f.var})"
        inner = to_text(f.body)
        return head + (inner if _level(f.body) == 5 else f"({inner})")
    if isinstance(f, BINARY):
        p = _level(f)
        left, right = to_text(f.left), to_text(f.right)
        right_assoc = isinstance(f, Implies)
        if _level(f.left) < p or (_level(f.left) == p and right_assoc):
            left = f"({left})"
        if _level(f.right) < p or (_level(f.right) == p and not right_assoc):
            right = f"({right})"
        return f"{left} {_OPS[type(f)]} {right}"
    raise TypeError(f"not a formula: {f!r}")


# -- classification ---------------------------------------------------------

@dataclass(frozen=True)
class FormulaClass:
    kind: str  # "Delta0", "Sigma", "Pi" or "Unclassified"
    n: int = 0

    def __str__(self):
        return self.kind if self.kind in ("Delta0", "Unclassified") else f"{self.kind}{self.n}"


DELTA0 = FormulaClass("Delta0")
UNCLASSIFIED = FormulaClass("Unclassified")


def is_delta0(f: Formula) -> bool:
    if isinstance(f, ATOMS):
        return True
    if isinstance(f, UNBOUNDED):
        return False
    if isinstance(f, (Not,) + BOUNDED):
        return is_delta0(f.body)
    return is_delta0(f.left) and is_delta0(f.right)


def classify(f: Formula) -> FormulaClass:
    if is_delta0(f):
        return DELTA0
    if not isinstance(f, UNBOUNDED):
        return UNCLASSIFIED
    kind = type(f)
    body = f
    while isinstance(body, kind):
        body = body.body
    inner = classify(body)
    if inner == DELTA0:
        return FormulaClass("Sigma" if kind is Exists else "Pi", 1)
    want = "Pi" if kind is Exists else "Sigma"
    if inner.kind == want:
        return FormulaClass("Sigma" if kind is Exists else "Pi", inner.n + 1)
    return UNCLASSIFIED


def strip_block(f: Formula) -> tuple[list[str], Formula]:
    """Variables of the leading block of like unbounded quantifiers, and the body."""
    names, kind = [], type(f)
    while isinstance(f, UNBOUNDED) and type(f) is kind:
        names.append(f.var)
        f = f.body
    return names, f


# -- evaluation on codes ----------------------------------------------------

class _Fuel:
    __slots__ = ("left", "used")

    def __init__(self, amount: int):
        self.left = amount
        self.used = 0

    def tick(self, k: int = 1):
        self.left -= k
        self.used += k
        if self.left < 0:
            raise FuelExhausted("evaluation ran out of fuel")


def _code_term(t, env, fuel):
    if isinstance(t, Const):
        return encode(t.value)
    try:
        v = env[t.name]
    except KeyError:
        raise UnboundVariable(t.name) from None
    return v if isinstance(v, SetCode) else encode(v)


def _members(c: SetCode, fuel: _Fuel) -> list[SetCode]:
    ms = member_codes(c)
    fuel.tick(len(ms) + 1)
    return ms


def _eval_code(f: Formula, env: dict, fuel: _Fuel) -> bool:
    fuel.tick()
    if isinstance(f, Member):
        a, b = _code_term(f.left, env, fuel), _code_term(f.right, env, fuel)
        return any(code_eq(m, a) for m in _members(b, fuel))
    if isinstance(f, Equal):
        a, b = _code_term(f.left, env, fuel), _code_term(f.right, env, fuel)
        fuel.tick()
        return bool(code_eq(a, b))
    if isinstance(f, Not):
        return not _eval_code(f.body, env, fuel)
    if isinstance(f, And):
        return _eval_code(f.left, env, fuel) and _eval_code(f.right, env, fuel)
    if isinstance(f, Or):
        return _eval_code(f.left, env, fuel) or _eval_code(f.right, env, fuel)
    if isinstance(f, Implies):
        return (not _eval_code(f.left, env, fuel)) or _eval_code(f.right, env, fuel)
    if isinstance(f, Iff):
        return _eval_code(f.left, env, fuel) == _eval_code(f.right, env, fuel)
    if isinstance(f, BOUNDED):
        bound = _code_term(f.bound, env, fuel)
        want_all = isinstance(f, ForAllIn)
        for m in _members(bound, fuel):
            val = _eval_code(f.body, {**env, f.var: m}, fuel)
            if val != want_all:
                return val
        return want_all
    raise NotDelta0(f"unbounded quantifier over {f.var!r}")


def eval_bounded_steps(f: Formula, env: Mapping | None = None, fuel: int = 1_000_000) -> tuple[bool, int]:
    if not is_delta0(f):
        raise NotDelta0(f"not a bounded formula: {f}")
    meter = _Fuel(fuel)
    val = _eval_code(f, dict(env or {}), meter)
    return val, meter.used


def eval_bounded(f: Formula, env: Mapping | None = None, fuel: int = 1_000_000) -> bool:
    """Truth of a bounded formula; env maps variables to codes (or HF sets)."""
    return eval_bounded_steps(f, env, fuel)[0]


# -- evaluation over a finite universe ---------------------------------------

def _set_term(t, env):
    if isinstance(t, Const):
        return t.value
    try:
        return env[t.name]
    except KeyError:
        raise UnboundVariable(t.name) from None


def eval_over_universe(f: Formula, univ, env: Mapping | None = None) -> bool:
    univ = list(univ)
    return _eval_set(f, dict(env or {}), univ)


def _eval_set(f, env, univ) -> bool:
    if isinstance(f, Member):
        return _set_term(f.left, env) in _set_term(f.right, env)
    if isinstance(f, Equal):
        return _set_term(f.left, env) == _set_term(f.right, env)
    if isinstance(f, Not):
        return not _eval_set(f.body, env, univ)
    if isinstance(f, And):
        return _eval_set(f.left, env, univ) and _eval_set(f.right, env, univ)
    if isinstance(f, Or):
        return _eval_set(f.left, env, univ) or _eval_set(f.right, env, univ)
    if isinstance(f, Implies):
        return (not _eval_set(f.left, env, univ)) or _eval_set(f.right, env, univ)
    if isinstance(f, Iff):
        return _eval_set(f.left, env, univ) == _eval_set(f.right, env, univ)
    if isinstance(f, BOUNDED):
        dom = _set_term(f.bound, env)
    else:
        dom = univ
    test = all if isinstance(f, (ForAll, ForAllIn)) else any
    return test(_eval_set(f.body, {**env, f.var: u}, univ) for u in dom)


def truth(f: Formula, env: Mapping | None = None, max_rank: int = 3) -> bool:
    """Truth with unbounded quantifiers read over the sets of rank <= max_rank."""
    return eval_over_universe(f, universe(max_rank), env)


# -- random bounded formulas --------------------------------------------------

def random_delta0(rng: random.Random, depth: int = 3, free: tuple = (),
                  consts: list | None = None) -> Formula:
    """A random bounded formula whose free variables lie in ``free``."""
    consts = consts if consts is not None else universe(2)
    counter = [0]

    def term(scope):
        if scope and rng.random() < 0.7:
            return Var(rng.choice(scope))
        return Const(rng.choice(consts))

    def go(d, scope):
        r = rng.random()
        if d <= 0 or r < 0.2:
            return (Member if rng.random() < 0.6 else Equal)(term(scope), term(scope))
        if r < 0.3:
            return Not(go(d - 1, scope))
        if r < 0.6:
            op = rng.choice([And, Or, Implies, Iff])
            return op(go(d - 1, scope), go(d - 1, scope))
        counter[0] += 1
        v = f"v{counter[0]}"
        q = rng.choice([ForAllIn, ExistsIn])
        return q(v, term(scope), go(d - 1, scope + [v]))

    return go(depth, list(free))
