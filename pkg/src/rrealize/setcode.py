"""Hereditarily finite sets and their codes as sets of ordinals.

A code of ``x`` comes from a bijection ``f: alpha -> tc({x})`` with
``f(0) = x``; it is the set ``{p(i, j) : f(i) in f(j)}`` where ``p`` is the
Goedel pairing.  HF sets are plain ``frozenset`` values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .ordinal import OMEGA, Ordinal, godel_pair, godel_unpair, ord_of
from .ordset import EMPTY, OrdSet

HFSet = frozenset
EMPTYSET: HFSet = frozenset()


class IllFormedCode(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


# -- HF sets ----------------------------------------------------------------

@lru_cache(maxsize=None)
def rank(x: HFSet) -> int:
    return max((rank(y) + 1 for y in x), default=0)


@lru_cache(maxsize=None)
def ackermann(x: HFSet) -> int:
    """Ackermann's bijection HF -> N; sets of lower rank get smaller numbers."""
    return sum(1 << ackermann(y) for y in x)


def hf_key(x: HFSet):
    return (rank(x), ackermann(x))


def code_order_key(x: HFSet):
    # encode lists tc({x}) by descending rank, ties by Ackermann number
    return (-rank(x), ackermann(x))


@lru_cache(maxsize=None)
def from_ackermann(n: int) -> HFSet:
    return frozenset(from_ackermann(i) for i in range(n.bit_length()) if n >> i & 1)


def tc(x: HFSet) -> frozenset:
    """Transitive closure (does not contain ``x`` itself)."""
    out, todo = set(), list(x)
    while todo:
        y = todo.pop()
        if y not in out:
            out.add(y)
            todo.extend(y)
    return frozenset(out)


def universe(max_rank: int) -> list[HFSet]:
    """All HF sets of rank <= ``max_rank`` in canonical order."""
    if max_rank > 4:
        raise ValueError("rank > 4 universes are not enumerable at desk scale")
    # sets of rank <= r are exactly V_{r+1}, and |V_{k+1}| = 2 ** |V_k|
    count = 0
    for _ in range(max_rank + 1):
        count = 1 << count
    return [from_ackermann(n) for n in range(count)]


def von_neumann(n: int) -> HFSet:
    out = EMPTYSET
    for _ in range(n):
        out = out | {out}
    return out


def parse_hf(text: str) -> HFSet:
    s = "".join(text.split())
    pos = 0

    def node():
        nonlocal pos
        if pos >= len(s) or s[pos] != "{":
            raise ValueError(f"expected '{{' at column {pos + 1} in {text!r}")
        pos += 1
        kids = []
        if pos < len(s) and s[pos] == "}":
            pos += 1
            return EMPTYSET
        while True:
            kids.append(node())
            if pos < len(s) and s[pos] == ",":
                pos += 1
                continue
            if pos < len(s) and s[pos] == "}":
                pos += 1
                return frozenset(kids)
            raise ValueError(f"expected ',' or '}}' at column {pos + 1} in {text!r}")

    out = node()
    if pos != len(s):
        raise ValueError(f"trailing input in {text!r}")
    return out


def format_hf(x: HFSet) -> str:
    return "{" + ",".join(format_hf(y) for y in sorted(x, key=hf_key)) + "}"


# -- codes --------------------------------------------------------------------

@dataclass(frozen=True)
class SetCode:
    code: OrdSet
    domain: Ordinal

    def __str__(self):
        return f"domain={self.domain}\n{self.code}"


def infer_domain(code: OrdSet) -> int:
    """Finite codes determine their domain: every index but 0 is a member."""
    top = 0
    for e in code:
        try:
            i, j = godel_unpair(e)
            top = max(top, int(i), int(j))
        except ValueError:
            raise IllFormedCode(f"{e} does not unpair to finite indices") from None
    return top + 1


def as_code(code: OrdSet) -> SetCode:
    return SetCode(code, ord_of(infer_domain(code)))


def encode(x: HFSet) -> SetCode:
    return _encode(x)


@lru_cache(maxsize=None)
def _encode(x: HFSet) -> SetCode:
    order = [x] + sorted(tc(x), key=code_order_key)
    index = {y: i for i, y in enumerate(order)}
    pairs = [godel_pair(index[y], j) for j, z in enumerate(order) for y in z]
    return SetCode(OrdSet(pairs), ord_of(len(order)))


def encode_with(x: HFSet, order: list) -> SetCode:
    """Code of ``x`` for an explicit enumeration of ``tc({x})`` starting with ``x``."""
    if not order or order[0] != x or set(order) != set(tc(x)) | {x} or len(set(order)) != len(order):
        raise ValueError("order must enumerate tc({x}) with x first")
    index = {y: i for i, y in enumerate(order)}
    pairs = [godel_pair(index[y], j) for j, z in enumerate(order) for y in z]
    return SetCode(OrdSet(pairs), ord_of(len(order)))


def _relation(c: SetCode) -> tuple[int, dict[int, list[int]]]:
    if not c.domain.is_finite:
        raise IllFormedCode("infinite domain")
    n = int(c.domain)
    if n < 1:
        raise IllFormedCode("domain must be at least 1")
    if n > len(c.code) + 1:
        # every index but the root must occur as a member somewhere
        raise IllFormedCode("some index is not in the transitive closure of the root")
    kids: dict[int, list[int]] = {j: [] for j in range(n)}
    for e in c.code:
        try:
            i, j = godel_unpair(e)
        except ValueError as exc:
            raise IllFormedCode(str(exc)) from None
        if not (i.is_finite and j.is_finite) or int(i) >= n or int(j) >= n:
            raise IllFormedCode(f"pair index of {e} outside domain {n}")
        kids[int(j)].append(int(i))
    return n, kids


def _decode_from(n: int, kids: dict, root: int) -> tuple[HFSet, dict[int, HFSet]]:
    memo: dict[int, HFSet] = {}
    onstack: set[int] = set()

    def go(k: int) -> HFSet:
        if k in memo:
            return memo[k]
        if k in onstack:
            raise IllFormedCode("membership cycle")
        onstack.add(k)
        val = frozenset(go(i) for i in kids[k])
        onstack.discard(k)
        memo[k] = val
        return val

    import sys
    if n > 900:
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * n))
    return go(root), memo


@lru_cache(maxsize=65536)
def decode_all(c: SetCode) -> tuple[HFSet, ...]:
    """Decoded value of every index; validates the code."""
    n, kids = _relation(c)
    if any(0 in v for v in kids.values()):
        raise IllFormedCode("index 0 is a member of another index")
    root, memo = _decode_from(n, kids, 0)
    if len(memo) != n:
        raise IllFormedCode("some index is not in the transitive closure of the root")
    vals = tuple(memo[k] for k in range(n))
    if len(set(vals)) != n:
        raise IllFormedCode("not extensional: two indices code the same set")
    return vals


def decode(c: SetCode) -> HFSet:
    return decode_all(c)[0]


def is_well_formed(c: SetCode) -> bool:
    try:
        decode_all(c)
    except IllFormedCode:
        return False
    return True


def _restrict(n: int, kids: dict, idx: int) -> SetCode:
    seen, todo = {idx}, [idx]
    while todo:
        k = todo.pop()
        for i in kids[k]:
            if i not in seen:
                seen.add(i)
                todo.append(i)
    order = [idx] + sorted(seen - {idx})
    new = {old: k for k, old in enumerate(order)}
    pairs = [godel_pair(new[i], new[j]) for j in order for i in kids[j]]
    return SetCode(OrdSet(pairs), ord_of(len(order)))


def derived_code(c: SetCode, x_index) -> SetCode:
    """Code of the member at ``x_index`` obtained by restricting the enumeration."""
    decode_all(c)
    n, kids = _relation(c)
    k = ord_of(x_index)
    if not k.is_finite or int(k) >= n:
        raise IndexOutOfRange(f"index {x_index} outside domain {n}")
    return _restrict(n, kids, int(k))


def index_of(c: SetCode, x: HFSet) -> int:
    vals = decode_all(c)
    try:
        return vals.index(x)
    except ValueError:
        raise IndexOutOfRange(f"{format_hf(x)} is not in tc of the coded set") from None


def member_indices(c: SetCode) -> list[int]:
    n, kids = _relation(c)
    return sorted(kids[0])


def member_codes(c: SetCode) -> list[SetCode]:
    """Derived codes of the members of the coded set, by ascending index."""
    decode_all(c)
    n, kids = _relation(c)
    return [_restrict(n, kids, i) for i in sorted(kids[0])]


def code_eq(c: SetCode, d: SetCode) -> int:
    return int(decode(c) == decode(d))


def tc_code(c: SetCode) -> SetCode:
    """Code of tc(decode(c)): adjoin a top index holding every non-root index, re-root there."""
    decode_all(c)
    n, kids = _relation(c)
    kids = dict(kids)
    kids[n] = list(range(1, n))
    return _restrict(n + 1, kids, n)


# -- the symbolic code of omega ----------------------------------------------

class OmegaCode:
    """Code of omega for ``f(0) = omega, f(k+1) = k``; infinite, so kept symbolic."""

    domain = OMEGA

    def __contains__(self, e) -> bool:
        i, j = godel_unpair(ord_of(e))
        if not (i.is_finite and j.is_finite):
            return False
        i, j = int(i), int(j)
        return i >= 1 and (j == 0 or i < j)

    def pairs_below(self, bound: int) -> OrdSet:
        return OrdSet(e for e in range(bound) if e in self)

    def member_code(self, k: int) -> SetCode:
        """Derived code of the natural number ``k`` (index ``k + 1``)."""
        idx = k + 1
        order = [idx] + list(range(1, idx))
        new = {old: p for p, old in enumerate(order)}
        pairs = [godel_pair(new[i], new[j]) for j in order for i in range(1, j)]
        return SetCode(OrdSet(pairs), ord_of(len(order)))


def parse_code(text: str) -> SetCode:
    """SetCode file: optional ``domain=<ordinal>`` header line then an OrdSet literal."""
    from .ordinal import parse_ordinal
    from .ordset import parse_ordset

    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip() and not ln.strip().startswith("#")]
    domain = None
    if lines and lines[0].startswith("domain="):
        domain = parse_ordinal(lines[0][len("domain="):])
        lines = lines[1:]
    code = parse_ordset(" ".join(lines)) if lines else EMPTY
    return SetCode(code, domain if domain is not None else ord_of(infer_domain(code)))


def all_enumerations(x: HFSet, limit: int = 24):
    """Valid (x-first) enumerations of tc({x}); at most ``limit`` of them."""
    rest = sorted(tc(x), key=hf_key)
    for perm in itertools.islice(itertools.permutations(rest), limit):
        yield [x] + list(perm)
