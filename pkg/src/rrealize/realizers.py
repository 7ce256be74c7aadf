"""Realizer trees and their transport encoding as sets of ordinals.

Each node is serialized as ``{tag} (+) payload``::

    Empty            {0} (+) {}
    Leaf(S)          {1} (+) S
    Pair(a, b)       {2} (+) (ser a (+) ser b)
    Choice(i, r)     {3} (+) ({i} (+) ser r)
    ProgParam(P, q)  {4} (+) ({g} (+) q)      g = Goedel number of P's text
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING

from .ordset import EMPTY, OrdSet, format_ordset, interleave, parse_ordset, project

if TYPE_CHECKING:
    from .macro import MacroProgram


class MalformedSerialization(ValueError):
    pass


class Realizer:
    __slots__ = ()


@dataclass(frozen=True)
class Empty(Realizer):
    def __str__(self):
        return "empty"


@dataclass(frozen=True)
class Leaf(Realizer):
    value: OrdSet

    def __str__(self):
        return f"leaf {self.value}"


@dataclass(frozen=True)
class Pair(Realizer):
    first: Realizer
    second: Realizer

    def __str__(self):
        return f"pair({self.first}, {self.second})"


@dataclass(frozen=True)
class Choice(Realizer):
    index: int
    body: Realizer

    def __post_init__(self):
        if self.index not in (0, 1):
            raise ValueError("choice index must be 0 or 1")

    def __str__(self):
        return f"choice {self.index}({self.body})"


@dataclass(frozen=True)
class ProgParam(Realizer):
    program: "MacroProgram"
    param: OrdSet = EMPTY

    def __str__(self):
        return f"progparam[{self.program.name}] {self.param}"


EMPTY_REALIZER = Empty()


def text_number(text: str) -> int:
    """Injective Goedel number of a program text (leading 1 byte keeps zeros)."""
    return int.from_bytes(b"\x01" + text.encode("utf-8"), "big")


def number_text(n: int) -> str:
    raw = n.to_bytes((n.bit_length() + 7) // 8, "big")
    if not raw or raw[0] != 1:
        raise MalformedSerialization("not a program number")
    try:
        return raw[1:].decode("utf-8")
    except UnicodeDecodeError:
        raise MalformedSerialization("program number is not UTF-8 text") from None


@lru_cache(maxsize=65536)
def serialize(r: Realizer) -> OrdSet:
    if isinstance(r, Empty):
        return interleave(OrdSet([0]), EMPTY)
    if isinstance(r, Leaf):
        return interleave(OrdSet([1]), r.value)
    if isinstance(r, Pair):
        return interleave(OrdSet([2]), interleave(serialize(r.first), serialize(r.second)))
    if isinstance(r, Choice):
        return interleave(OrdSet([3]), interleave(OrdSet([r.index]), serialize(r.body)))
    if isinstance(r, ProgParam):
        g = text_number(r.program.text)
        return interleave(OrdSet([4]), interleave(OrdSet([g]), r.param))
    raise TypeError(f"not a realizer: {r!r}")


def _single_int(s: OrdSet, what: str) -> int:
    if len(s) != 1 or not s.elems[0].is_finite:
        raise MalformedSerialization(f"{what} must be a single natural number, got {s}")
    return int(s.elems[0])


@lru_cache(maxsize=65536)
def deserialize(s: OrdSet) -> Realizer:
    from .macro import assemble_macro, AssemblyError

    tag = _single_int(project(s, 0), "tag")
    body = project(s, 1)
    if tag == 0:
        if body:
            raise MalformedSerialization("empty realizer carries a payload")
        out = EMPTY_REALIZER
    elif tag == 1:
        out = Leaf(body)
    elif tag == 2:
        out = Pair(deserialize(project(body, 0)), deserialize(project(body, 1)))
    elif tag == 3:
        i = _single_int(project(body, 0), "choice index")
        if i not in (0, 1):
            raise MalformedSerialization("choice index must be 0 or 1")
        out = Choice(i, deserialize(project(body, 1)))
    elif tag == 4:
        g = _single_int(project(body, 0), "program number")
        try:
            prog = assemble_macro(number_text(g))
        except AssemblyError as exc:
            raise MalformedSerialization(f"program text does not assemble: {exc}") from None
        out = ProgParam(prog, project(body, 1))
    else:
        raise MalformedSerialization(f"unknown tag {tag}")
    if serialize(out) != s:
        raise MalformedSerialization("non-canonical serialization")
    return out


def try_deserialize(s: OrdSet) -> Realizer | None:
    try:
        return deserialize(s)
    except MalformedSerialization:
        return None


def depth(r: Realizer) -> int:
    if isinstance(r, Pair):
        return 1 + max(depth(r.first), depth(r.second))
    if isinstance(r, Choice):
        return 1 + depth(r.body)
    return 1


# -- realizer files -------------------------------------------------------------

def dump_realizer(r: Realizer, program_ref) -> str:
    """Indented tree text; ``program_ref(program)`` names the file holding a program."""
    lines = []

    def go(node, ind):
        pad = "  " * ind
        if isinstance(node, Empty):
            lines.append(pad + "empty")
        elif isinstance(node, Leaf):
            lines.append(f"{pad}leaf {format_ordset(node.value)}")
        elif isinstance(node, Pair):
            lines.append(pad + "pair")
            go(node.first, ind + 1)
            go(node.second, ind + 1)
        elif isinstance(node, Choice):
            lines.append(f"{pad}choice {node.index}")
            go(node.body, ind + 1)
        else:
            lines.append(f"{pad}progparam {program_ref(node.program)} {format_ordset(node.param)}")

    go(r, 0)
    return "\n".join(lines) + "\n"


def load_realizer(text: str, load_program) -> Realizer:
    """Inverse of :func:`dump_realizer`; ``load_program(name)`` returns a MacroProgram."""
    rows = []
    for ln, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        ind = len(raw) - len(raw.lstrip(" "))
        if ind % 2:
            raise ValueError(f"line {ln}: indentation must be a multiple of two spaces")
        rows.append((ind // 2, raw.strip(), ln))
    pos = 0

    def node(level):
        nonlocal pos
        if pos >= len(rows):
            raise ValueError("unexpected end of realizer file")
        ind, line, ln = rows[pos]
        if ind != level:
            raise ValueError(f"line {ln}: expected indentation level {level}")
        pos += 1
        word, _, rest = line.partition(" ")
        if word == "empty":
            return EMPTY_REALIZER
        if word == "leaf":
            return Leaf(parse_ordset(rest))
        if word == "pair":
            a = node(level + 1)
            return Pair(a, node(level + 1))
        if word == "choice":
            return Choice(int(rest), node(level + 1))
        if word == "progparam":
            name, _, param = rest.partition(" ")
            return ProgParam(load_program(name), parse_ordset(param or "{}"))
        raise ValueError(f"line {ln}: unknown node {word!r}")

    out = node(0)
    if pos != len(rows):
        raise ValueError(f"line {rows[pos][2]}: trailing content")
    return out
