"""Ordinals below epsilon_0 in Cantor normal form.

An :class:`Ordinal` is an immutable tuple of ``(exponent, coefficient)``
terms with strictly decreasing exponents.  Finite ordinals are written
``Ordinal(5)``; ``OMEGA`` is the first limit.

The pairing function is Goedel's: ``godel_pair(a, b)`` is the order type of
the pairs preceding ``(a, b)`` when pairs are ordered by maximum, then first
component, then second component.
"""

from __future__ import annotations

import math
import re
from functools import lru_cache
from typing import Iterable

MAX_DEPTH = 32


class OrdinalError(ValueError):
    pass


class Ordinal:
    __slots__ = ("terms", "_key", "_hash", "_depth")

    def __init__(self, value: int | Iterable = 0):
        if isinstance(value, int):
            if value < 0:
                raise OrdinalError("negative ordinal")
            terms = ((ZERO, value),) if value else ()
        else:
            terms = tuple(value)
            for i, (e, c) in enumerate(terms):
                if not isinstance(e, Ordinal) or not isinstance(c, int) or c < 1:
                    raise OrdinalError(f"bad term {(e, c)!r}")
                if i and not e < terms[i - 1][0]:
                    raise OrdinalError("exponents must strictly decrease")
        self.terms = terms
        self._key = tuple((e._key, c) for e, c in terms)
        self._hash = hash(self._key)
        self._depth = 1 + max((e._depth for e, _ in terms), default=-1)
        if self._depth > MAX_DEPTH:
            raise OrdinalError(f"exponent tower deeper than {MAX_DEPTH}")

    # -- comparisons -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = _coerce(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._key < _coerce(other)._key

    def __le__(self, other):
        return self._key <= _coerce(other)._key

    def __gt__(self, other):
        return self._key > _coerce(other)._key

    def __ge__(self, other):
        return self._key >= _coerce(other)._key

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        return ord_add(self, _coerce(other))

    def __radd__(self, other):
        return ord_add(_coerce(other), self)

    def __mul__(self, other):
        return ord_mul(self, _coerce(other))

    def __rmul__(self, other):
        return ord_mul(_coerce(other), self)

    def __bool__(self):
        return bool(self.terms)

    # -- structure -------------------------------------------------------
    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not self.terms[0][0])

    def __int__(self):
        if not self.is_finite:
            raise OrdinalError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    @property
    def finite_part(self) -> int:
        if self.terms and not self.terms[-1][0]:
            return self.terms[-1][1]
        return 0

    @property
    def limit_part(self) -> "Ordinal":
        """The largest limit ordinal (or zero) below or equal to self."""
        if self.terms and not self.terms[-1][0]:
            return Ordinal(self.terms[:-1])
        return self

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and bool(self.terms[-1][0])

    @property
    def lead_exponent(self) -> "Ordinal":
        return self.terms[0][0] if self.terms else ZERO

    def __repr__(self):
        return f"Ordinal({format_ordinal(self)!r})"

    def __str__(self):
        return format_ordinal(self)


ZERO = Ordinal.__new__(Ordinal)
ZERO.terms = ()
ZERO._key = ()
ZERO._hash = hash(())
ZERO._depth = 0

_SMALL = [Ordinal(i) for i in range(1, 64)]


def _coerce(x) -> Ordinal:
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, int):
        if x == 0:
            return ZERO
        if 0 < x < 64:
            return _SMALL[x - 1]
        return Ordinal(x)
    raise TypeError(f"not an ordinal: {x!r}")


ord_of = _coerce
ONE = _coerce(1)
OMEGA = Ordinal([(ONE, 1)])


def omega_pow(e, c: int = 1) -> Ordinal:
    return Ordinal([(_coerce(e), c)]) if c else ZERO


def ord_cmp(a, b) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    ka, kb = _coerce(a)._key, _coerce(b)._key
    return (ka > kb) - (ka < kb)


def ord_add(a, b) -> Ordinal:
    a, b = _coerce(a), _coerce(b)
    if not b.terms:
        return a
    if not a.terms:
        return b
    if a.is_finite and b.is_finite:
        return _coerce(int(a) + int(b))
    e0, c0 = b.terms[0]
    kept = []
    for e, c in a.terms:
        if e > e0:
            kept.append((e, c))
        elif e == e0:
            return Ordinal(kept + [(e0, c + c0)] + list(b.terms[1:]))
        else:
            break
    return Ordinal(kept + list(b.terms))


def ord_mul(a, b) -> Ordinal:
    a, b = _coerce(a), _coerce(b)
    if not a.terms or not b.terms:
        return ZERO
    if a.is_finite and b.is_finite:
        return _coerce(int(a) * int(b))
    lead, lc = a.terms[0]
    out = ZERO
    for f, d in b.terms:
        if f:
            piece = Ordinal([(ord_add(lead, f), d)])
        else:
            piece = Ordinal([(lead, lc * d)] + list(a.terms[1:]))
        out = ord_add(out, piece)
    return out


def ord_sub(a, b) -> Ordinal:
    """Left subtraction: the unique ``r`` with ``b + r == a`` (requires b <= a)."""
    a, b = _coerce(a), _coerce(b)
    if b > a:
        raise OrdinalError(f"{b} > {a}")
    if a.is_finite:
        return _coerce(int(a) - int(b))
    for i, (ea, ca) in enumerate(a.terms):
        if i >= len(b.terms):
            return Ordinal(a.terms[i:])
        eb, cb = b.terms[i]
        if (ea, ca) == (eb, cb):
            continue
        if ea == eb:
            return Ordinal([(ea, ca - cb)] + list(a.terms[i + 1:]))
        return Ordinal(a.terms[i:])
    return ZERO


# -- Goedel pairing -------------------------------------------------------

def _half_exponent(e: Ordinal) -> Ordinal:
    """Exponent h with order type of omega^e x omega^e equal to omega^h."""
    if not e:
        return ZERO
    le, lc = e.terms[-1]
    head = Ordinal(list(e.terms[:-1]) + ([(le, lc - 1)] if lc > 1 else []))
    if not le:
        return ord_add(ord_mul(head, 2), ONE)
    return ord_add(ord_mul(head, 2), omega_pow(le))


@lru_cache(maxsize=4096)
def square_type(m: Ordinal) -> Ordinal:
    """Order type of the pairs whose maximum is below ``m``."""
    if m.is_finite:
        return _coerce(int(m) ** 2)
    cur, total = ZERO, ZERO
    for e, c in m.terms:
        if not e:
            d = ord_mul(cur, 2)
            total = ord_add(total, ord_add(ord_mul(d, c), c))
        elif not cur:
            total = omega_pow(_half_exponent(e))
            if c > 1:
                total = ord_add(total, omega_pow(ord_add(e, e), c - 1))
        else:
            total = ord_add(total, omega_pow(ord_add(cur.lead_exponent, e), c))
        cur = ord_add(cur, omega_pow(e, c))
    return total


def godel_pair(a, b) -> Ordinal:
    a, b = _coerce(a), _coerce(b)
    if a.is_finite and b.is_finite:
        x, y = int(a), int(b)
        m = max(x, y)
        return _coerce(m * m + x if x < m else m * m + m + y)
    m = max(a, b)
    base = square_type(m)
    if a < m:
        return ord_add(base, a)
    return ord_add(ord_add(base, m), b)


def godel_unpair(c) -> tuple[Ordinal, Ordinal]:
    c = _coerce(c)
    if c.is_finite:
        n = int(c)
        m = math.isqrt(n)
        r = n - m * m
        return (_coerce(r), _coerce(m)) if r < m else (_coerce(m), _coerce(r - m))
    if any(not e.is_finite for e, _ in c.terms):
        raise OrdinalError("godel_unpair supports ordinals below omega^omega")
    m = _largest_below(c)
    r = ord_sub(c, square_type(m))
    if r < m:
        return r, m
    return m, ord_sub(r, m)


def _largest_below(c: Ordinal) -> Ordinal:
    """Largest m with square_type(m) <= c, built greedily term by term."""
    top = int(c.lead_exponent) // 2 + 1
    m = ZERO
    for k in range(top, -1, -1):
        lo, hi = 0, 1
        while square_type(ord_add(m, omega_pow(k, hi))) <= c:
            lo, hi = hi, hi * 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if square_type(ord_add(m, omega_pow(k, mid))) <= c:
                lo = mid
            else:
                hi = mid
        if lo:
            m = ord_add(m, omega_pow(k, lo))
    return m


# -- text syntax ----------------------------------------------------------

def format_ordinal(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    parts = []
    for e, c in a.terms:
        if not e:
            parts.append(str(c))
            continue
        if e == ONE:
            base = "w"
        elif e.is_finite or e == OMEGA:
            base = f"w^{format_ordinal(e)}"
        else:
            base = f"w^({format_ordinal(e)})"
        parts.append(base if c == 1 else f"{base}*{c}")
    return "+".join(parts)


_TOKEN = re.compile(r"\s*(\d+|w|\^|\*|\+|\(|\))")


def parse_ordinal(text: str) -> Ordinal:
    """Parse ``w^2*3+w+4`` style text (sums and products are normalized)."""
    tokens, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise OrdinalError(f"bad ordinal syntax at column {pos + 1}: {text!r}")
        tokens.append(m.group(1))
        pos = m.end()
    if not tokens:
        raise OrdinalError("empty ordinal")
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else None

    def take(expected=None):
        nonlocal i
        tok = peek()
        if tok is None or (expected and tok != expected):
            raise OrdinalError(f"expected {expected or 'token'} in {text!r}")
        i += 1
        return tok

    def expr():
        val = term()
        while peek() == "+":
            take()
            val = ord_add(val, term())
        return val

    def term():
        val = power()
        while peek() == "*":
            take()
            val = ord_mul(val, power())
        return val

    def power():
        base = atom()
        if peek() == "^":
            take()
            if base != OMEGA:
                raise OrdinalError("only w may be raised to a power")
            return omega_pow(atom())
        return base

    def atom():
        tok = take()
        if tok == "w":
            return OMEGA
        if tok == "(":
            val = expr()
            take(")")
            return val
        if tok.isdigit():
            return _coerce(int(tok))
        raise OrdinalError(f"unexpected {tok!r} in {text!r}")

    val = expr()
    if i != len(tokens):
        raise OrdinalError(f"trailing input in {text!r}")
    return val
