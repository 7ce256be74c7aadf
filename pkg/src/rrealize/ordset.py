"""Finite sets of ordinals, the even/odd interleaving and its projections."""

from __future__ import annotations

from typing import Iterable, Sequence

from .ordinal import Ordinal, OrdinalError, ZERO, ord_of, parse_ordinal


class OrdSet:
    """Immutable finite set of ordinals, stored sorted ascending."""

    __slots__ = ("elems", "_hash")

    def __init__(self, elems: Iterable = ()):
        items = {ord_of(e) for e in elems}
        self.elems: tuple[Ordinal, ...] = tuple(sorted(items, key=lambda o: o._key))
        self._hash = hash(self.elems)

    @classmethod
    def _sorted(cls, elems: tuple) -> "OrdSet":
        s = cls.__new__(cls)
        s.elems = elems
        s._hash = hash(elems)
        return s

    def __iter__(self):
        return iter(self.elems)

    def __len__(self):
        return len(self.elems)

    def __contains__(self, x):
        return ord_of(x) in set(self.elems)

    def __eq__(self, other):
        return isinstance(other, OrdSet) and self.elems == other.elems

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return bool(self.elems)

    def sort_key(self):
        return tuple(e._key for e in self.elems)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __or__(self, other):
        return OrdSet(self.elems + other.elems)

    def __sub__(self, other):
        drop = set(other.elems)
        return OrdSet._sorted(tuple(e for e in self.elems if e not in drop))

    def __repr__(self):
        return f"OrdSet({format_ordset(self)})"

    def __str__(self):
        return format_ordset(self)


EMPTY = OrdSet()


def _double(x: Ordinal, odd: int) -> Ordinal:
    # 2*(lam + n) = lam + 2n: left multiplication by 2 fixes limit parts
    if x.is_finite:
        return ord_of(2 * int(x) + odd)
    lam, n = x.limit_part, x.finite_part
    k = 2 * n + odd
    return Ordinal(list(lam.terms) + ([(ZERO, k)] if k else []))


def interleave(a: OrdSet, b: OrdSet) -> OrdSet:
    """``a (+) b = {2i : i in a} | {2i+1 : i in b}``."""
    return OrdSet([_double(x, 0) for x in a] + [_double(x, 1) for x in b])


def project(x: OrdSet, side: int) -> OrdSet:
    if side not in (0, 1):
        raise ValueError("side must be 0 or 1")
    out = []
    for e in x:
        if e.is_finite:
            n = int(e)
            if n % 2 == side:
                out.append(ord_of(n // 2))
            continue
        n = e.finite_part
        if n % 2 == side:
            k = n // 2
            out.append(Ordinal(list(e.limit_part.terms) + ([(ZERO, k)] if k else [])))
    # halving preserves order, so the result is already sorted
    return OrdSet._sorted(tuple(out))


def delta(x: OrdSet, y: OrdSet) -> int:
    return int(x == y)


def pack(items: Sequence[OrdSet]) -> OrdSet:
    """Right-nested interleave ``x0 (+) (x1 (+) (... (+) xn-1))``, empty for no items."""
    out = EMPTY
    for it in reversed(items):
        out = interleave(it, out)
    return out


def unpack(x: OrdSet, n: int) -> list[OrdSet]:
    out = []
    for _ in range(n):
        out.append(project(x, 0))
        x = project(x, 1)
    return out


def seq(items: Sequence[OrdSet]) -> OrdSet:
    """Length-prefixed list: ``{n} (+) pack(items)``."""
    return interleave(OrdSet([len(items)]), pack(items))


MAX_SEQ_LEN = 1 << 16


def unseq(x: OrdSet) -> list[OrdSet]:
    head = project(x, 0)
    if len(head) != 1 or not head.elems[0].is_finite:
        raise ValueError("not a sequence encoding")
    n = int(head.elems[0])
    if n > MAX_SEQ_LEN:
        raise ValueError("sequence length prefix too large")
    body = project(x, 1)
    items = unpack(body, n)
    if pack(items) != body:
        raise ValueError("sequence payload has trailing content")
    return items


def parse_ordset(text: str) -> OrdSet:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise OrdinalError(f"set literal must be braced: {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return EMPTY
    parts, depth, cur = [], 0, []
    for ch in inner:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return OrdSet(parse_ordinal(p) for p in parts)


def format_ordset(x: OrdSet) -> str:
    return "{" + ", ".join(str(e) for e in x) + "}"
