"""Checking realizers against formulas over a finite universe.

Implications and quantifiers are realized by program/parameter pairs whose
program *recognizes* (rather than computes) the realizer of the consequent or
instance.  Quantification over all realizers and all sets is replaced by an
antecedent suite, a candidate pool and a finite universe, so a verdict is one
of ``Realized`` (evidence), ``Refuted`` (decisive) or ``Unknown``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .formula import (
    ATOMS,
    BOUNDED,
    FALSUM,
    And,
    Const,
    Equal,
    Exists,
    ExistsIn,
    ForAll,
    ForAllIn,
    Formula,
    Iff,
    Implies,
    Member,
    Not,
    NotDelta0,
    Or,
    Var,
    classify,
    eval_over_universe,
    is_delta0,
    strip_block,
    substitute,
    to_text,
)
from .macro import MacroProgram, VMConfig, assemble_macro, env_encode, predict, run_candidates
from .ordset import EMPTY, OrdSet, format_ordset, interleave, project
from .realizers import (
    EMPTY_REALIZER,
    Choice,
    Empty,
    Leaf,
    MalformedSerialization,
    Pair,
    ProgParam,
    Realizer,
    deserialize,
    dump_realizer,
    load_realizer,
    serialize,
    try_deserialize,
)
from .recognizer import CandidatePool, verdict_of, Recognizes, RejectsAll, Ambiguous
from .setcode import IllFormedCode, as_code, decode, encode, hf_key, is_well_formed, universe

__all__ = [
    "Realizer", "Empty", "Leaf", "Pair", "Choice", "ProgParam", "EMPTY_REALIZER",
    "serialize", "deserialize", "MalformedSerialization", "dump_realizer", "load_realizer",
    "CheckContext", "Realized", "Refuted", "Unknown", "check", "canonical_realizer",
    "canonical_delta0_realizer", "NotTrue", "NotDelta0", "closure", "holds", "probe_family",
    "empty_recognizing_realizer", "canonical_witness", "antecedents", "unrealizable", "combine",
]


class NotTrue(ValueError):
    pass


# -- truth -----------------------------------------------------------------------------

def holds(f: Formula, env: Mapping | None = None, rank: int = 3) -> bool:
    """Truth; unbounded quantifiers range over the sets of rank <= ``rank``."""
    return _holds(f, _freeze(env), rank)


@lru_cache(maxsize=200_000)
def _holds(f, env, rank):
    univ = () if is_delta0(f) else _universe(rank)
    return eval_over_universe(f, univ, dict(env))


@lru_cache(maxsize=8)
def _universe(rank: int) -> tuple:
    return tuple(universe(rank))


def _freeze(env) -> tuple:
    return tuple(sorted((env or {}).items(), key=lambda kv: kv[0]))


def closure(f: Formula) -> Formula:
    """Universal closure over the free variables in sorted order."""
    for v in sorted(f.free_vars, reverse=True):
        f = ForAll(v, f)
    return f


# -- canonical realizers ---------------------------------------------------------------

def _template(kind: str, var: str, target: Formula) -> MacroProgram:
    return _template_text(kind, var, to_text(target))


@lru_cache(maxsize=65536)
def _template_text(kind: str, var: str, text: str) -> MacroProgram:
    if kind == "imp":
        head = ["    read e param", f'    canon t "{text}" e']
    elif kind == "all":
        head = ["    read e param", "    read u in", "    decchk u", "    jz no",
                f'    bind e e "{var}" u', f'    canon t "{text}" e']
    else:
        head = ["    read e param", f'    wit t "{var}" "{text}" e']
    body = head + ["    jz no", "    pkg t t", "    cmpcand t", "    halt r", "no:", "    halt 0"]
    return assemble_macro("\n".join(body) + "\n", f"canon-{kind}")


def _param(f: Formula, env: Mapping) -> OrdSet:
    return env_encode({k: encode(env[k]) for k in f.free_vars if k in env})


def _member_target(var: str, bound, body: Formula, conn) -> Formula:
    return conn(Member(Var(var), bound), body)


def canonical_realizer(f: Formula, env: Mapping | None = None, rank: int = 3) -> Realizer:
    """The realizer the truth-lemma construction produces for a true formula."""
    env = dict(env or {})
    missing = f.free_vars - set(env)
    if missing:
        raise KeyError(f"unbound variables {sorted(missing)}")
    return _canon(f, _freeze({k: env[k] for k in f.free_vars}), rank)


@lru_cache(maxsize=100_000)
def _canon(f: Formula, env: tuple, rank: int) -> Realizer:
    d = dict(env)
    if not _holds(f, env, rank):
        raise NotTrue(f"formula is false: {to_text(f)}")
    return _build(f, d, rank)


def _build(f: Formula, env: dict, rank: int) -> Realizer:
    if isinstance(f, ATOMS):
        return EMPTY_REALIZER
    if isinstance(f, And):
        return Pair(_sub(f.left, env, rank), _sub(f.right, env, rank))
    if isinstance(f, Or):
        for i, side in enumerate((f.left, f.right)):
            if holds(side, {k: env[k] for k in side.free_vars}, rank):
                return Choice(i, _sub(side, env, rank))
        raise NotTrue(f"no true disjunct in {to_text(f)}")
    if isinstance(f, Implies):
        return ProgParam(_template("imp", "", f.right), _param(f.right, env))
    if isinstance(f, Not):
        return ProgParam(_template("imp", "", FALSUM), EMPTY)
    if isinstance(f, Iff):
        return Pair(_build(Implies(f.left, f.right), env, rank), _build(Implies(f.right, f.left), env, rank))
    if isinstance(f, ForAll):
        return ProgParam(_template("all", f.var, f.body), _param(f, env))
    if isinstance(f, ForAllIn):
        target = _member_target(f.var, f.bound, f.body, Implies)
        return ProgParam(_template("all", f.var, target), _param(f, env))
    if isinstance(f, Exists):
        return ProgParam(_template("ex", f.var, f.body), _param(f, env))
    if isinstance(f, ExistsIn):
        target = _member_target(f.var, f.bound, f.body, And)
        return ProgParam(_template("ex", f.var, target), _param(f, env))
    raise TypeError(f"not a formula: {f!r}")


def _sub(f, env, rank):
    return _canon(f, _freeze({k: env[k] for k in f.free_vars}), rank)


def canonical_delta0_realizer(f: Formula, env: Mapping | None = None) -> Realizer:
    if not is_delta0(f):
        raise NotDelta0(f"not a bounded formula: {to_text(f)}")
    return canonical_realizer(f, env)


def canonical_witness(var: str, f: Formula, env: Mapping, rank: int = 3) -> OrdSet | None:
    """``c_a (+) ser(r)`` for the first ``a`` making ``f`` true, with ``r`` its canonical realizer."""
    if isinstance(f, And) and isinstance(f.left, Member) and f.left.left == Var(var):
        b = f.left.right
        dom = b.value if isinstance(b, Const) else env[b.name]
        cands = sorted(dom, key=hf_key)
    else:
        cands = _universe(rank)
    for a in cands:
        e2 = {**{k: v for k, v in env.items() if k != var}, var: a}
        e2 = {k: e2[k] for k in f.free_vars if k in e2}
        if holds(f, e2, rank):
            return interleave(encode(a).code, serialize(canonical_realizer(f, e2, rank)))
    return None


EMPTY_RECOGNIZER = assemble_macro(
    """
    # on any input, recognize the empty realizer
    rempty t
    pkg t t
    cmpcand t
    halt r
    """,
    "recognize-empty",
)


def empty_recognizing_realizer() -> ProgParam:
    return ProgParam(EMPTY_RECOGNIZER, EMPTY)


# -- verdicts ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Realized:
    def __str__(self):
        return "Realized"


@dataclass(frozen=True)
class Refuted:
    reason: str
    path: tuple = ()

    def __str__(self):
        return f"Refuted: {self.reason} at {'/'.join(self.path) or 'root'}"


@dataclass(frozen=True)
class Unknown:
    reason: str
    path: tuple = ()

    def __str__(self):
        return f"Unknown: {self.reason} at {'/'.join(self.path) or 'root'}"


REALIZED = Realized()


def combine(verdicts) -> object:
    unknown = None
    for v in verdicts:
        if isinstance(v, Refuted):
            return v
        if isinstance(v, Unknown) and unknown is None:
            unknown = v
    return unknown or REALIZED


# -- context -----------------------------------------------------------------------------

@dataclass
class CheckContext:
    universe: list = field(default_factory=lambda: list(universe(3)))
    pool: CandidatePool = field(default_factory=CandidatePool)
    antecedent_suite: dict = field(default_factory=dict)
    fuel: int = 100_000
    rank: int = 3
    auto_seed: bool = True
    stats: dict = field(default_factory=lambda: {"recognitions": 0, "runs": 0})

    def __post_init__(self):
        extra = [encode(u).code for u in self.universe]
        for rs in self.antecedent_suite.values():
            extra += [serialize(r) for r in rs]
        self.pool = CandidatePool(list(self.pool) + extra)
        self._vm = VMConfig(pool=self.pool.candidates, universe_rank=self.rank,
                            seed_predictions=self.auto_seed)

    def register(self, f: Formula, r: Realizer):
        """Add a validated realizer for ``f`` to the suite (and its serialization to the pool)."""
        self.antecedent_suite.setdefault(f, [])
        if r not in self.antecedent_suite[f]:
            self.antecedent_suite[f].append(r)
        self.pool = self.pool + [serialize(r)]
        self._vm = VMConfig(pool=self.pool.candidates, universe_rank=self.rank,
                            seed_predictions=self.auto_seed)

    def widened(self, pool=(), fuel: int | None = None) -> "CheckContext":
        return CheckContext(list(self.universe), self.pool + list(pool),
                            {k: list(v) for k, v in self.antecedent_suite.items()},
                            fuel if fuel is not None else self.fuel, self.rank, self.auto_seed)


# -- the checker ---------------------------------------------------------------------------

def check(r: Realizer, f: Formula, ctx: CheckContext | None = None):
    ctx = ctx or CheckContext()
    return _check(r, closure(f), ctx, ())


def _recognize(r: ProgParam, context: OrdSet, ctx: CheckContext):
    cands = list(ctx.pool)
    if ctx.auto_seed:
        cands += predict(r.program, r.param, context, ctx._vm, ctx.fuel)
    cands = list(dict.fromkeys(cands))
    ctx.stats["recognitions"] += 1
    ctx.stats["runs"] += len(cands)
    return verdict_of(cands, run_candidates(r.program, r.param, context, cands, ctx.fuel, ctx._vm))


def unrealizable(f: Formula, ctx: CheckContext) -> bool:
    """Formulas for which no realizer exists at all (false bounded or false universal-bounded)."""
    if is_delta0(f):
        return not holds(f, None, ctx.rank)
    cls = classify(f)
    if cls.kind == "Pi" and cls.n == 1:
        return not eval_over_universe(f, ctx.universe)
    if isinstance(f, And):
        return unrealizable(f.left, ctx) or unrealizable(f.right, ctx)
    if isinstance(f, Or):
        return unrealizable(f.left, ctx) and unrealizable(f.right, ctx)
    return False


def antecedents(f: Formula, ctx: CheckContext) -> list | None:
    """Realizers fed into an implication with antecedent ``f``; None when none are known."""
    if f in ctx.antecedent_suite:
        return list(ctx.antecedent_suite[f])
    if is_delta0(f):
        return variants(f, ctx.rank) if holds(f, None, ctx.rank) else []
    cls = classify(f)
    if cls.kind == "Pi" and cls.n == 1:
        return [canonical_realizer(f, None, ctx.rank)] if eval_over_universe(f, ctx.universe) else []
    if holds(f, None, ctx.rank):
        return [canonical_realizer(f, None, ctx.rank)]
    return None


def variants(f: Formula, rank: int = 3) -> list:
    """Canonical realizer plus the alternatives a true disjunction admits."""
    out = [canonical_realizer(f, None, rank)]
    if isinstance(f, Or):
        for i, side in enumerate((f.left, f.right)):
            if holds(side, None, rank):
                c = Choice(i, canonical_realizer(side, None, rank))
                if c not in out:
                    out.append(c)
    return out


def _check(r: Realizer, f: Formula, ctx: CheckContext, path: tuple):
    if isinstance(f, ATOMS):
        if holds(f, None, ctx.rank):
            return REALIZED
        return Refuted("false atomic formula", path)
    if isinstance(f, Not):
        return _check(r, Implies(f.body, FALSUM), ctx, path + ("not",))
    if isinstance(f, Iff):
        return _check(r, And(Implies(f.left, f.right), Implies(f.right, f.left)), ctx, path + ("iff",))
    if isinstance(f, And):
        if not isinstance(r, Pair):
            return Refuted("conjunction needs a pair", path)
        left = _check(r.first, f.left, ctx, path + ("and.0",))
        if isinstance(left, Refuted):
            return left
        return combine([left, _check(r.second, f.right, ctx, path + ("and.1",))])
    if isinstance(f, Or):
        if not isinstance(r, Choice):
            return Refuted("disjunction needs a tagged choice", path)
        side = f.left if r.index == 0 else f.right
        return _check(r.body, side, ctx, path + (f"or.{r.index}",))
    if isinstance(f, ForAllIn):
        return _forall(r, f.var, Implies(Member(Var(f.var), f.bound), f.body), ctx, path + ("allin",),
                       extra=_bound_members(f.bound))
    if isinstance(f, ExistsIn):
        if not isinstance(r, ProgParam):
            return Refuted("existential quantifier needs a program with parameter", path)
        return _exists(r, f.var, And(Member(Var(f.var), f.bound), f.body), ctx, path + ("exin",), f)
    if not isinstance(r, ProgParam):
        return Refuted(f"{type(f).__name__.lower()} needs a program with parameter", path)
    if isinstance(f, Implies):
        suite = antecedents(f.left, ctx)
        if suite is None:
            return Unknown("no realizers known for the antecedent", path)
        out = []
        for k, ra in enumerate(suite):
            context = interleave(serialize(ra), EMPTY)
            out.append(_consequent(r, context, f.right, ctx, path + (f"imp[{k}]",)))
            if isinstance(out[-1], Refuted):
                return out[-1]
        return combine(out)
    if isinstance(f, ForAll):
        return _forall(r, f.var, f.body, ctx, path + ("all",))
    if isinstance(f, Exists):
        return _exists(r, f.var, f.body, ctx, path + ("ex",), f)
    raise TypeError(f"not a formula: {f!r}")


def _exists(r, var, body, ctx, path, origin):
    v = _recognize(r, EMPTY, ctx)
    if not isinstance(v, Recognizes):
        return _search_failure(v, origin, ctx, path)
    x = project(v.witness, 0)
    code = project(x, 0)
    if not is_well_formed(as_code(code)):
        return Refuted("recognized pair does not start with a set code", path)
    inner = try_deserialize(project(x, 1))
    if inner is None:
        return Refuted("recognized pair does not end with a realizer", path)
    a = decode(as_code(code))
    return _check(inner, substitute(body, var, a), ctx, path[:-1] + (f"{path[-1]}={_show(a)}",))


def _bound_members(bound) -> list:
    return sorted(bound.value, key=hf_key) if isinstance(bound, Const) else []


def _forall(r, var, body, ctx, path, extra=()):
    if not isinstance(r, ProgParam):
        return Refuted("universal quantifier needs a program with parameter", path)
    out = []
    for u in dict.fromkeys(list(ctx.universe) + list(extra)):
        context = interleave(encode(u).code, EMPTY)
        v = _consequent(r, context, substitute(body, var, u), ctx, path + (f"{var}={_show(u)}",))
        if isinstance(v, Refuted):
            return v
        out.append(v)
    return combine(out)


def _consequent(r: ProgParam, context: OrdSet, target: Formula, ctx, path):
    v = _recognize(r, context, ctx)
    if not isinstance(v, Recognizes):
        return _search_failure(v, target, ctx, path)
    inner = try_deserialize(project(v.witness, 0))
    if inner is None:
        return Refuted("recognized object is not a realizer", path)
    return _check(inner, target, ctx, path)


def _search_failure(v, target, ctx, path):
    if isinstance(v, Ambiguous):
        return Refuted(f"ambiguous recognition ({len(v.witnesses)} candidates accepted)", path)
    if isinstance(v, RejectsAll):
        if unrealizable(target, ctx):
            return Refuted("no candidate accepted and the target has no realizer", path)
        return Unknown("no pool candidate was accepted", path)
    return Unknown(str(v), path)


def _show(x) -> str:
    from .setcode import format_hf

    return format_hf(x)


# -- realizer families used as refutation probes -------------------------------------------

def probe_family(f: Formula, rank: int = 3) -> list:
    """Realizers of every shape a checker might be handed for ``f`` (all of them halt)."""
    from .recognizer import ACCEPT_ALL, EQ_CONSTANT, REJECT_ALL

    fam = [EMPTY_REALIZER, Leaf(OrdSet([1])), Pair(EMPTY_REALIZER, EMPTY_REALIZER),
           Choice(0, EMPTY_REALIZER), Choice(1, EMPTY_REALIZER),
           ProgParam(ACCEPT_ALL), ProgParam(REJECT_ALL), empty_recognizing_realizer(),
           ProgParam(EQ_CONSTANT, interleave(serialize(EMPTY_REALIZER), EMPTY))]
    fam.append(_skeleton(f))
    return fam


def _skeleton(f: Formula) -> Realizer:
    """Canonical shape built without asking whether the parts are true."""
    if isinstance(f, ATOMS):
        return EMPTY_REALIZER
    if isinstance(f, And):
        return Pair(_skeleton(f.left), _skeleton(f.right))
    if isinstance(f, Or):
        return Choice(0, _skeleton(f.left))
    if isinstance(f, Iff):
        return Pair(_skeleton(Implies(f.left, f.right)), _skeleton(Implies(f.right, f.left)))
    if isinstance(f, Implies):
        return ProgParam(_template("imp", "", f.right), EMPTY)
    if isinstance(f, Not):
        return ProgParam(_template("imp", "", FALSUM), EMPTY)
    if isinstance(f, (ForAll, ForAllIn)):
        target = f.body if isinstance(f, ForAll) else Implies(Member(Var(f.var), f.bound), f.body)
        return ProgParam(_template("all", f.var, target), EMPTY)
    target = f.body if isinstance(f, Exists) else And(Member(Var(f.var), f.bound), f.body)
    return ProgParam(_template("ex", f.var, target), EMPTY)
