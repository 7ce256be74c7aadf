"""Ordinal Turing machines: a transition-table micro machine with sparse tapes.

Three heads (oracle, work, output) run over ordinal-indexed tapes that store
only their 1-positions.  The parameter lives on its own read-only track that
is read under the work head.  Successor steps are exact; an omega limit is
taken only when the run is provably eventually periodic, in which case every
component receives its liminf.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .ordinal import OMEGA, ZERO, Ordinal, ord_add, ord_of
from .ordset import EMPTY, OrdSet, format_ordset, parse_ordset

HEADS = ("oracle", "work", "output")


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int = 1):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line, self.col = line, col


# -- results ------------------------------------------------------------------

@dataclass(frozen=True)
class RunResult:
    status: str  # "halted", "fuel-exhausted", "limit-undetermined"
    output_bit: int | None = None
    output_set: OrdSet = EMPTY
    steps_used: int = 0
    detail: str = ""

    @property
    def halted(self) -> bool:
        return self.status == "halted"

    @property
    def accepted(self) -> bool:
        return self.status == "halted" and self.output_bit == 1

    def to_record(self) -> dict:
        return {
            "status": self.status,
            "output_bit": self.output_bit,
            "output_set": format_ordset(self.output_set),
            "steps_used": self.steps_used,
        }


def halted(bit: int, out: OrdSet = EMPTY, steps: int = 0) -> RunResult:
    return RunResult("halted", bit, out, steps)


def fuel_exhausted(steps: int, detail: str = "") -> RunResult:
    return RunResult("fuel-exhausted", None, EMPTY, steps, detail)


# -- micro programs -----------------------------------------------------------

MOVES = {"L": -1, "S": 0, "R": 1}


@dataclass(frozen=True)
class Action:
    write_work: int | None  # None keeps the cell
    write_output: int | None
    move_work: str
    move_oracle: str
    move_output: str
    next_state: str


@dataclass(frozen=True)
class MicroProgram:
    """Transitions keyed by (state, oracle bit, work bit, output bit, param bit).

    A key component of ``None`` is a wildcard; the first matching rule in
    listed order applies.
    """

    states: tuple
    rules: tuple  # ((state, o, w, out, p), Action)
    start: str
    halt: str

    def __post_init__(self):
        if self.halt not in self.states or self.start not in self.states:
            raise ValueError("start and halt must be listed states")
        for (s, *_), act in self.rules:
            if s == self.halt:
                raise ValueError("halt state has outgoing transitions")
            if s not in self.states or act.next_state not in self.states:
                raise ValueError(f"unknown state in rule for {s!r}")
        for s in self.states:
            if s == self.halt:
                continue
            for bits in itertools.product((0, 1), repeat=4):
                if self.lookup(s, *bits) is None:
                    raise ValueError(f"no transition for state {s!r} on bits {bits}")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.states)})
        object.__setattr__(self, "_table", {})

    def lookup(self, state, o, w, out, p) -> Action | None:
        table = self.__dict__.get("_table")
        key = (state, o, w, out, p)
        if table is not None and key in table:
            return table[key]
        for (s, *pat), act in self.rules:
            if s == state and all(q is None or q == b for q, b in zip(pat, (o, w, out, p))):
                if table is not None:
                    table[key] = act
                return act
        return None

    def state_index(self, s) -> int:
        return self._index[s]


@dataclass
class Config:
    time: Ordinal
    state: str
    heads: dict
    work: set
    output: set
    oracle: frozenset
    param: frozenset

    def snapshot(self):
        return (self.time, self.state, tuple(self.heads[h] for h in HEADS),
                frozenset(self.work), frozenset(self.output))


def initial_config(p: MicroProgram, oracle: OrdSet, param: OrdSet) -> Config:
    return Config(ZERO, p.start, {h: ZERO for h in HEADS}, set(), set(),
                  frozenset(oracle), frozenset(param))


def _move(pos: Ordinal, how: str) -> Ordinal:
    if how == "R":
        return ord_add(pos, 1)
    if how == "L":
        # no immediate predecessor at 0 or at a limit: reset to 0
        if pos.finite_part == 0:
            return ZERO
        return Ordinal(list(pos.limit_part.terms) + ([(ZERO, pos.finite_part - 1)] if pos.finite_part > 1 else []))
    return pos


def read_bits(c: Config) -> tuple[int, int, int, int]:
    w = c.heads["work"]
    return (int(c.heads["oracle"] in c.oracle), int(w in c.work),
            int(c.heads["output"] in c.output), int(w in c.param))


def micro_step(p: MicroProgram, c: Config) -> Config:
    if c.state == p.halt:
        raise ValueError("configuration is halted")
    act = p.lookup(c.state, *read_bits(c))
    work, output = set(c.work), set(c.output)
    for tape, val, head in ((work, act.write_work, "work"), (output, act.write_output, "output")):
        if val == 1:
            tape.add(c.heads[head])
        elif val == 0:
            tape.discard(c.heads[head])
    heads = {
        "work": _move(c.heads["work"], act.move_work),
        "oracle": _move(c.heads["oracle"], act.move_oracle),
        "output": _move(c.heads["output"], act.move_output),
    }
    return Config(ord_add(c.time, 1), act.next_state, heads, work, output, c.oracle, c.param)


# -- omega limits -------------------------------------------------------------

class LimitUndetermined(Exception):
    pass


def _finite_offsets(positions: list[Ordinal]):
    lam = positions[0].limit_part
    if any(q.limit_part != lam for q in positions):
        return None, None
    return lam, [q.finite_part for q in positions]


def _region(tape, lam: Ordinal) -> set[int]:
    """Finite offsets n with lam + n on the tape."""
    out = set()
    for q in tape:
        if q.limit_part == lam:
            out.add(q.finite_part)
    return out


def omega_limit(p: MicroProgram, trace: list[Config], period: int) -> Config:
    """Limit configuration after an eventually periodic trace.

    ``trace`` holds consecutive configurations; the last ``3 * period`` of them
    must repeat with the heads either cycling or drifting right by a fixed
    amount into blank tape.
    """
    if period < 1 or len(trace) < 3 * period + 1:
        raise LimitUndetermined("trace too short for the requested period")
    tail = trace[-(3 * period + 1):]
    blocks = [tail[k * period:(k + 1) * period + 1] for k in range(3)]
    for k in (1, 2):
        for a, b in zip(blocks[0], blocks[k]):
            if a.state != b.state or read_bits(a) != read_bits(b):
                raise LimitUndetermined("state/read sequence is not periodic")
    last = blocks[2]
    new_heads, new_tapes = {}, {"work": set(last[-1].work), "output": set(last[-1].output)}
    for h in HEADS:
        seqs = [[c.heads[h] for c in blk[:-1]] for blk in blocks]
        lam, offs = _finite_offsets([q for s in seqs for q in s] + [last[-1].heads[h]])
        if lam is None:
            raise LimitUndetermined(f"{h} head crosses a limit inside the cycle")
        n = period
        o0, o1, o2 = offs[:n], offs[n:2 * n], offs[2 * n:3 * n]
        d = o1[0] - o0[0]
        if [x + d for x in o0] != o1 or [x + d for x in o1] != o2 or d < 0:
            raise LimitUndetermined(f"{h} head is not translation periodic")
        tapes = [getattr(c, h) for c in last]
        if d == 0:
            new_heads[h] = lam if min(o2) == 0 else ord_add(lam, min(o2))
            if h != "oracle":
                visited = set(o2)
                hist = [_region(t, lam) for t in tapes]
                for v in visited:
                    # liminf over the cycle of a repeatedly visited cell
                    if all(v in s for s in hist):
                        new_tapes[h].add(ord_add(lam, v))
                    else:
                        new_tapes[h].discard(ord_add(lam, v))
            continue
        m = min(o2)
        # everything the head meets from now on must be a shifted copy of the past
        tracks = [(getattr(blocks[1][0], h), getattr(last[0], h))]
        if h == "work":
            tracks.append((blocks[1][0].param, last[0].param))
        for prev_tape, cur_tape in tracks:
            cur, prev = _region(cur_tape, lam), _region(prev_tape, lam)
            if {x - d for x in cur if x >= m} != {x for x in prev if x >= m - d}:
                raise LimitUndetermined(f"{h} head meets non-periodic tape content")
        new_heads[h] = ord_add(lam, OMEGA)
        if h != "oracle":
            end = _region(getattr(last[-1], h), lam)
            if any(x >= m for x in end):
                raise LimitUndetermined(f"{h} tape receives infinitely many marks below the limit")
    # state: liminf of the indices seen cofinally
    state = min((c.state for c in last[:-1]), key=p.state_index)
    start = last[-1].time
    return Config(ord_add(start.limit_part, OMEGA), state, new_heads, new_tapes["work"],
                  new_tapes["output"], last[-1].oracle, last[-1].param)


def _find_period(trace: list[Config], max_period: int) -> int | None:
    for period in range(1, max_period + 1):
        if len(trace) < 3 * period + 1:
            return None
        tail = trace[-(3 * period + 1):]
        ok = all(tail[i].state == tail[i + period].state and read_bits(tail[i]) == read_bits(tail[i + period])
                 for i in range(2 * period + 1))
        if ok:
            return period
    return None


def micro_run(p: MicroProgram, oracle: OrdSet = EMPTY, param: OrdSet = EMPTY, fuel: int = 10_000,
              omega_jumps: int = 0, window: int = 64) -> RunResult:
    """Run until halt; with ``omega_jumps > 0`` a stuck periodic run may pass to its next limit."""
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    c = initial_config(p, oracle, param)
    trace = [c]
    steps, jumps = 0, 0
    while c.state != p.halt:
        if steps >= fuel:
            if jumps < omega_jumps:
                period = _find_period(trace, window)
                if period is None:
                    return RunResult("limit-undetermined", None, EMPTY, steps, "no periodic tail")
                try:
                    c = omega_limit(p, trace, period)
                except LimitUndetermined as exc:
                    return RunResult("limit-undetermined", None, EMPTY, steps, str(exc))
                jumps += 1
                fuel += steps
                trace = [c]
                continue
            return fuel_exhausted(steps)
        c = micro_step(p, c)
        steps += 1
        trace.append(c)
        if len(trace) > 4 * window + 2:
            del trace[0]
    out = OrdSet(c.output)
    return halted(int(ZERO in c.output), out, steps)


# -- text format ----------------------------------------------------------------

def _bit(tok: str, line: int, col: int):
    if tok == "*":
        return None
    if tok in ("0", "1"):
        return int(tok)
    raise ParseError(f"expected 0, 1 or *, found {tok!r}", line, col)


def _write(tok: str, line: int, col: int):
    if tok == "-":
        return None
    if tok in ("0", "1"):
        return int(tok)
    raise ParseError(f"expected 0, 1 or -, found {tok!r}", line, col)


def assemble_micro(text: str) -> MicroProgram:
    """Micro machine text.

    Optional ``states ...`` line fixing the state order (it matters for the
    liminf of states), ``start S`` / ``halt H`` headers, then rules
    ``S o w out p -> ww wout mw mo mout T`` with ``*`` wildcards and ``-`` for
    "leave the cell as it is".
    """
    start = halt = None
    states: list[str] = []
    rules = []

    def note(s):
        if s not in states:
            states.append(s)

    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line == ".micro":
            continue
        toks = line.split()
        if toks[0] == "states":
            for name in toks[1:]:
                note(name)
            continue
        if toks[0] in ("start", "halt"):
            if len(toks) != 2:
                raise ParseError(f"{toks[0]} takes one state name", ln, len(raw) - len(raw.lstrip()) + 1)
            if toks[0] == "start":
                start = toks[1]
            else:
                halt = toks[1]
            note(toks[1])
            continue
        if len(toks) != 12 or toks[5] != "->":
            raise ParseError("rule must read: S o w out p -> ww wout mw mo mout T", ln, 1)
        col = lambda i: raw.find(toks[i]) + 1  # noqa: E731
        key = (toks[0],) + tuple(_bit(toks[i], ln, col(i)) for i in range(1, 5))
        ww, wo = _write(toks[6], ln, col(6)), _write(toks[7], ln, col(7))
        for i in (8, 9, 10):
            if toks[i] not in MOVES:
                raise ParseError(f"move must be L, R or S, found {toks[i]!r}", ln, col(i))
        note(toks[0])
        note(toks[11])
        rules.append((key, Action(ww, wo, toks[8], toks[9], toks[10], toks[11])))
    if start is None or halt is None:
        raise ParseError("missing start or halt header", 1, 1)
    try:
        return MicroProgram(tuple(states), tuple(rules), start, halt)
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from None


def disassemble_micro(p: MicroProgram) -> str:
    show = lambda b: "*" if b is None else str(b)  # noqa: E731
    keep = lambda b: "-" if b is None else str(b)  # noqa: E731
    lines = [".micro", "states " + " ".join(p.states), f"start {p.start}", f"halt {p.halt}"]
    for (s, o, w, out, par), a in p.rules:
        lines.append(f"{s} {show(o)} {show(w)} {show(out)} {show(par)} -> "
                     f"{keep(a.write_work)} {keep(a.write_output)} {a.move_work} {a.move_oracle} "
                     f"{a.move_output} {a.next_state}")
    return "\n".join(lines) + "\n"


# -- shipped primitive recognizers ----------------------------------------------

def eq_constant_micro(bound: int) -> MicroProgram:
    """Accept iff oracle and parameter agree below ``bound``.

    Oracle and work heads walk right together comparing the oracle bit with
    the parameter bit.
    """
    rules = []
    for i in range(bound):
        for b in (0, 1):
            rules.append(((f"q{i}", b, None, None, b), Action(None, None, "R", "R", "S", f"q{i + 1}")))
        rules.append(((f"q{i}", None, None, None, None), Action(None, None, "S", "S", "S", "halt")))
    rules.append(((f"q{bound}", None, None, None, None), Action(None, 1, "S", "S", "S", "halt")))
    states = tuple(f"q{i}" for i in range(bound + 1)) + ("halt",)
    return MicroProgram(states, tuple(rules), "q0", "halt")


def eq_section_micro(bound: int) -> MicroProgram:
    """Accept iff the two interleaved sections of the oracle agree below ``bound``.

    Positions 2i and 2i+1 are compared pairwise: the even bit is held in the
    state while the head steps onto the odd cell.
    """
    rules = []
    for i in range(bound):
        for b in (0, 1):
            rules.append(((f"e{i}", b, None, None, None), Action(None, None, "S", "R", "S", f"o{i}_{b}")))
            rules.append(((f"o{i}_{b}", b, None, None, None), Action(None, None, "S", "R", "S", f"e{i + 1}")))
            rules.append(((f"o{i}_{b}", 1 - b, None, None, None), Action(None, None, "S", "S", "S", "halt")))
    rules.append(((f"e{bound}", None, None, None, None), Action(None, 1, "S", "S", "S", "halt")))
    states = [f"e{i}" for i in range(bound + 1)] + [f"o{i}_{b}" for i in range(bound) for b in (0, 1)]
    return MicroProgram(tuple(states) + ("halt",), tuple(rules), "e0", "halt")


def write_then_halt_micro() -> MicroProgram:
    """Writes 1 at output position 0, then halts (two steps)."""
    rules = (
        (("w", None, None, None, None), Action(None, 1, "S", "S", "S", "h")),
        (("h", None, None, None, None), Action(None, None, "S", "S", "S", "halt")),
    )
    return MicroProgram(("w", "h", "halt"), rules, "w", "halt")


def loop_micro() -> MicroProgram:
    """Two states that bounce forever without moving."""
    rules = (
        (("a", None, None, None, None), Action(None, None, "S", "S", "S", "b")),
        (("b", None, None, None, None), Action(None, None, "S", "S", "S", "a")),
    )
    return MicroProgram(("a", "b", "halt"), rules, "a", "halt")


def parse_tape(text: str) -> OrdSet:
    return parse_ordset(text)
