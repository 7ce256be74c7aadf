"""Recognizers judged against finite candidate pools."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .macro import DEFAULT_CONFIG, MacroProgram, VMConfig, assemble_macro, run_candidates
from .ordinal import ord_of
from .ordset import EMPTY, OrdSet, format_ordset, interleave, pack, parse_ordset, project
from .otm import MicroProgram, RunResult, micro_run


class EmptyChain(ValueError):
    pass


@dataclass(frozen=True)
class Recognizer:
    program: MacroProgram | MicroProgram
    parameter: OrdSet = EMPTY


class CandidatePool:
    """Duplicate-free ordered list of candidate oracles."""

    def __init__(self, candidates: Iterable[OrdSet] = ()):
        self.candidates: tuple[OrdSet, ...] = tuple(dict.fromkeys(candidates))

    def __iter__(self):
        return iter(self.candidates)

    def __len__(self):
        return len(self.candidates)

    def __contains__(self, x):
        return x in set(self.candidates)

    def __add__(self, other) -> "CandidatePool":
        return CandidatePool(self.candidates + tuple(other))

    def __repr__(self):
        return f"CandidatePool({len(self)} candidates)"

    @classmethod
    def parse(cls, text: str) -> "CandidatePool":
        rows = [ln.strip() for ln in text.splitlines()]
        return cls(parse_ordset(r) for r in rows if r and not r.startswith("#"))

    def dump(self) -> str:
        return "".join(format_ordset(c) + "\n" for c in self.candidates)


# -- verdicts ---------------------------------------------------------------------

@dataclass(frozen=True)
class Recognizes:
    witness: OrdSet

    def __str__(self):
        return f"recognizes {format_ordset(self.witness)}"


@dataclass(frozen=True)
class RejectsAll:
    def __str__(self):
        return "rejects-all"


@dataclass(frozen=True)
class Ambiguous:
    witnesses: tuple

    def __str__(self):
        return f"ambiguous {len(self.witnesses)}"


@dataclass(frozen=True)
class Undetermined:
    reason: str

    def __str__(self):
        return f"undetermined {self.reason}"


@dataclass(frozen=True)
class Undefined:
    verdict: object

    def __str__(self):
        return f"undefined ({self.verdict})"


def run_pool(r: Recognizer, pool: Iterable[OrdSet], relative_to: OrdSet | None = None,
             fuel: int = 100_000, config: VMConfig = DEFAULT_CONFIG) -> list[RunResult]:
    cands = list(pool)
    if isinstance(r.program, MicroProgram):
        return [micro_run(r.program, z if relative_to is None else interleave(relative_to, z), r.parameter, fuel)
                for z in cands]
    return run_candidates(r.program, r.parameter, relative_to, cands, fuel, config)


def verdict_of(cands: list[OrdSet], results: list[RunResult]):
    for z, res in zip(cands, results):
        if not res.halted:
            return Undetermined(f"{res.status} on {format_ordset(z)}")
    hits = tuple(z for z, res in zip(cands, results) if res.output_bit == 1)
    if not hits:
        return RejectsAll()
    if len(hits) > 1:
        return Ambiguous(hits)
    return Recognizes(hits[0])


def test_recognizer(r: Recognizer, pool: Iterable[OrdSet], relative_to: OrdSet | None = None,
                    fuel: int = 100_000, config: VMConfig = DEFAULT_CONFIG):
    """Run ``r`` on ``relative_to (+) z`` for each pool member ``z``.

    ``relative_to=None`` hands the candidate over as the whole oracle.
    """
    cands = list(CandidatePool(pool))
    return verdict_of(cands, run_pool(r, cands, relative_to, fuel, config))


test_recognizer.__test__ = False  # keep pytest from collecting the name


def accept_bits(r: Recognizer, pool: Iterable[OrdSet], relative_to: OrdSet | None = None,
                fuel: int = 100_000) -> list[int | None]:
    return [res.output_bit for res in run_pool(r, pool, relative_to, fuel)]


def rho(r: Recognizer, pool: Iterable[OrdSet], fuel: int = 100_000, relative_to: OrdSet | None = None):
    """Both projections of the recognized set, or Undefined with the verdict."""
    v = test_recognizer(r, pool, relative_to, fuel)
    if isinstance(v, Recognizes):
        return project(v.witness, 0), project(v.witness, 1)
    return Undefined(v)


# -- primitive recognizers -----------------------------------------------------------

EQ_CONSTANT = assemble_macro(
    """
    # accept exactly the candidate equal to the parameter
    read p param
    cmpcand p
    halt r
    """,
    "eq-constant",
)

EQ_SECTION = assemble_macro(
    """
    # accept iff the candidate equals the context
    read c ctx
    cmpcand c
    halt r
    """,
    "eq-section",
)

ACCEPT_ALL = assemble_macro("halt 1", "accept-all")
REJECT_ALL = assemble_macro("halt 0", "reject-all")


def eq_constant(c: OrdSet) -> Recognizer:
    return Recognizer(EQ_CONSTANT, c)


# -- chains ---------------------------------------------------------------------------

def _chain_program(k: int) -> MacroProgram:
    lines = [".entry main", ".seed main build", ".proc main",
             "    read z cand", "    read b ctx", "    read ps param", "    mov rest z"]
    for i in range(k):
        lines += [f"    proj w{i} rest 0", "    proj rest rest 1"]
    lines += ["    set nil {}", "    eq rest nil", "    jz no"]
    # links are checked from the base towards the target
    for i in reversed(range(k)):
        above = "b" if i == k - 1 else f"w{i + 1}"
        lines += [f"    nth p ps {i}", f"    exec p {above} w{i}", "    jz no"]
    lines += ["    halt 1", "no:", "    halt 0", ".proc build", "    read b ctx", "    read ps param",
              "    set acc {}"]
    for i in reversed(range(k)):
        above = "b" if i == k - 1 else f"w{i + 1}"
        lines += [f"    nth p ps {i}", f"    find w{i} p {above}", "    jz fail"]
    for i in reversed(range(k)):
        lines.append(f"    ilv acc w{i} acc")
    lines += ["    out acc", "    halt 1", "fail:", "    halt 0"]
    return assemble_macro("\n".join(lines) + "\n", f"chain-{k}")


def chain_package(links: list) -> tuple[Recognizer, OrdSet]:
    """Composite recognizer for a chain plus the packaged witness.

    ``links[i] = (recognizer_i, x_i)`` where recognizer_i recognizes x_i
    relative to x_{i+1} (the last link is relative to the base).  The witness
    is ``x_0 (+) (x_1 (+) (... (+) {}))`` whose first projection is x_0.
    """
    from .realizers import ProgParam, serialize

    if not links:
        raise EmptyChain("a chain needs at least one link")
    progs = []
    for rec, _ in links:
        if not isinstance(rec.program, MacroProgram):
            raise TypeError("chain links must be macro programs")
        progs.append(serialize(ProgParam(rec.program, rec.parameter)))
    z = pack([x for _, x in links])
    return Recognizer(_chain_program(len(links)), pack(progs)), z


def mutants(z: OrdSet, count: int = 7) -> list[OrdSet]:
    """Distinct single-element mutations of ``z``: deletions first, then insertions."""
    out: list[OrdSet] = []
    seen = {z}

    def add(m):
        if m not in seen:
            seen.add(m)
            out.append(m)

    for e in z.elems:
        add(z - OrdSet([e]))
        if len(out) >= count:
            return out
    n = 0
    while len(out) < count:
        if ord_of(n) not in z:
            add(z | OrdSet([n]))
        n += 1
    return out
