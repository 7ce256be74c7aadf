"""Intuitionistic Hilbert calculus over the membership language, with extraction.

A proof is a list of steps; each step is a premise, an axiom instance given by
its schema and a substitution, or one of the rules ``mp``, ``genimp`` and
``exelim``.  :func:`check_proof` is purely syntactic.  :func:`extract` folds
the realizer constructors for schemata and rules over a checked proof.

Realizers of open formulas realize their universal closure (sorted variable
order), so every constructor below is wrapped in closure layers that read one
set code per free variable into an environment and then build the realizer of
the instance.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .formula import (
    Equal,
    Exists,
    ForAll,
    Formula,
    Implies,
    Not,
    Or,
    And,
    ParseError,
    Var,
    free_for,
    parse_formula,
    rename,
    to_text,
)
from .macro import MacroProgram, assemble_macro, env_encode, macro_run
from .ordset import EMPTY, OrdSet, interleave, project
from .realizability import CheckContext, Refuted, _recognize, check, closure
from .realizers import ProgParam, Realizer, deserialize, serialize, try_deserialize
from .recognizer import Recognizes

SCHEMATA = ("P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8", "Q1", "Q2", "Q3", "Q4")
RULES = ("mp", "genimp", "exelim")


class MalformedInstance(ValueError):
    pass


class RecognitionFailed(RuntimeError):
    pass


class PremiseNotRealized(ValueError):
    pass


# -- proofs ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Premise:
    formula: Formula


@dataclass(frozen=True)
class AxiomInstance:
    schema: str
    bindings: tuple  # sorted (key, text) pairs

    @classmethod
    def of(cls, schema: str, **bindings) -> "AxiomInstance":
        return cls(schema, tuple(sorted((k, str(v)) for k, v in bindings.items())))

    @property
    def formula(self) -> Formula:
        return instance_formula(self.schema, dict(self.bindings))


@dataclass(frozen=True)
class Rule:
    rule: str
    refs: tuple  # 1-based step indices
    vars: tuple = ()


@dataclass(frozen=True)
class Proof:
    steps: tuple

    def __len__(self):
        return len(self.steps)

    @classmethod
    def parse(cls, text: str) -> "Proof":
        return parse_proof(text)

    def dump(self) -> str:
        return dump_proof(self)


_SCHEMA_KEYS = {
    "P1": ("phi", "psi"), "P2": ("phi", "psi", "xi"), "P3": ("phi", "psi"),
    "P4": ("phi", "psi"), "P5": ("phi", "psi"), "P6": ("phi", "psi", "xi"),
    "P7": ("phi", "psi"), "P8": ("phi", "psi"),
    "Q1": ("phi", "x", "t"), "Q2": ("phi", "x", "t"), "Q3": ("x",), "Q4": ("phi", "x", "s", "t"),
}
_VAR_KEYS = ("x", "s", "t")


def _bindings(schema: str, b: Mapping[str, str]):
    if schema not in _SCHEMA_KEYS:
        raise MalformedInstance(f"unknown schema {schema!r}")
    need = _SCHEMA_KEYS[schema]
    allowed = set(need) | ({"side"} if schema in ("P4", "P5") else set())
    missing = [k for k in need if k not in b]
    if missing:
        raise MalformedInstance(f"{schema} needs {', '.join(missing)}")
    extra = set(b) - allowed
    if extra:
        raise MalformedInstance(f"{schema} does not take {', '.join(sorted(extra))}")
    out = {}
    for k in need:
        if k in _VAR_KEYS:
            if not parse_ok_var(b[k]):
                raise MalformedInstance(f"{k} must be a variable name, got {b[k]!r}")
            out[k] = b[k]
        else:
            try:
                out[k] = parse_formula(b[k]) if isinstance(b[k], str) else b[k]
            except ParseError as exc:
                raise MalformedInstance(f"{k}: {exc}") from None
    side = str(b.get("side", "0"))
    if side not in ("0", "1"):
        raise MalformedInstance("side must be 0 or 1")
    out["side"] = int(side)
    return out


def parse_ok_var(name: str) -> bool:
    return name.isidentifier() and name not in {"in", "and", "or", "not", "all", "ex"}


def instance_formula(schema: str, bindings: Mapping[str, str]) -> Formula:
    """The formula an axiom instance denotes; raises MalformedInstance."""
    b = _bindings(schema, bindings)
    phi, psi, xi = b.get("phi"), b.get("psi"), b.get("xi")
    I = Implies
    if schema == "P1":
        return I(phi, I(psi, phi))
    if schema == "P2":
        return I(I(phi, I(psi, xi)), I(I(phi, psi), I(phi, xi)))
    if schema == "P3":
        return I(phi, I(psi, And(phi, psi)))
    if schema == "P4":
        return I(And(phi, psi), psi if b["side"] else phi)
    if schema == "P5":
        return I(psi if b["side"] else phi, Or(phi, psi))
    if schema == "P6":
        return I(Or(phi, psi), I(I(phi, xi), I(I(psi, xi), xi)))
    if schema == "P7":
        return I(I(phi, psi), I(I(phi, Not(psi)), Not(phi)))
    if schema == "P8":
        return I(phi, I(Not(phi), psi))
    x = b["x"]
    if schema == "Q3":
        return Equal(Var(x), Var(x))
    if schema in ("Q1", "Q2"):
        t = b["t"]
        if not free_for(phi, x, t):
            raise MalformedInstance(f"{t} is not free for {x}")
        inst = rename(phi, x, t)
        return I(ForAll(x, phi), inst) if schema == "Q1" else I(inst, Exists(x, phi))
    s, t = b["s"], b["t"]
    if not (free_for(phi, x, s) and free_for(phi, x, t)):
        raise MalformedInstance(f"{s} and {t} must be free for {x}")
    return I(Equal(Var(s), Var(t)), I(rename(phi, x, s), rename(phi, x, t)))


def parse_proof(text: str) -> Proof:
    steps = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        try:
            if word == "premise":
                steps.append(Premise(parse_formula(rest)))
            elif word == "axiom":
                toks = shlex.split(rest)
                if not toks:
                    raise MalformedInstance("axiom needs a schema id")
                kv = {}
                for tok in toks[1:]:
                    k, eq, v = tok.partition("=")
                    if not eq:
                        raise MalformedInstance(f"binding {tok!r} is not key=value")
                    kv[k] = v
                ax = AxiomInstance.of(toks[0], **kv)
                _bindings(ax.schema, dict(ax.bindings))
                steps.append(ax)
            elif word in RULES:
                toks = rest.split()
                arity = 2 if word == "mp" else 3
                if len(toks) != arity:
                    raise MalformedInstance(f"{word} takes {arity} operands")
                if word == "mp":
                    steps.append(Rule("mp", (int(toks[0]), int(toks[1]))))
                else:
                    steps.append(Rule(word, (int(toks[0]),), (toks[1], toks[2])))
            else:
                raise MalformedInstance(f"unknown step kind {word!r}")
        except (ParseError, MalformedInstance, ValueError) as exc:
            raise MalformedInstance(f"line {ln}: {exc}") from None
    return Proof(tuple(steps))


def dump_proof(p: Proof) -> str:
    out = []
    for s in p.steps:
        if isinstance(s, Premise):
            out.append(f"premise {to_text(s.formula)}")
        elif isinstance(s, AxiomInstance):
            out.append(" ".join(["axiom", s.schema] + [f"{k}={shlex.quote(v)}" for k, v in s.bindings]))
        else:
            out.append(" ".join([s.rule] + [str(i) for i in s.refs] + list(s.vars)))
    return "\n".join(out) + "\n"


# -- checking --------------------------------------------------------------------------

@dataclass(frozen=True)
class Valid:
    formulas: tuple

    @property
    def conclusion(self) -> Formula:
        return self.formulas[-1]

    def __bool__(self):
        return True

    def __str__(self):
        return "valid"


@dataclass(frozen=True)
class Invalid:
    step: int
    reason: str

    def __bool__(self):
        return False

    def __str__(self):
        return f"invalid step {self.step}: {self.reason}"


def _generalize(theta: Formula, x: str, y: str) -> Formula | str:
    """The formula phi with phi[y/x] == theta, or a reason why none qualifies."""
    if not free_for(theta, y, x):
        return f"{x} is not free for {y}"
    phi = rename(theta, y, x)
    if not free_for(phi, x, y) or rename(phi, x, y) != theta:
        return f"{y} is not free for {x}"
    return phi


def rule_conclusion(rule: Rule, premises: list) -> Formula | str:
    """Conclusion of a rule application, or the reason it is not an instance."""
    if rule.rule == "mp":
        a, imp = premises
        if not isinstance(imp, Implies):
            return "second operand is not an implication"
        if imp.left != a:
            return "antecedent does not match the first operand"
        return imp.right
    (prem,) = premises
    x, y = rule.vars
    if not (parse_ok_var(x) and parse_ok_var(y)):
        return "rule variables must be names"
    if not isinstance(prem, Implies):
        return "premise is not an implication"
    if rule.rule == "genimp":
        side, theta = prem.left, prem.right
    else:
        theta, side = prem.left, prem.right
    phi = _generalize(theta, x, y)
    if isinstance(phi, str):
        return phi
    quant = ForAll(x, phi) if rule.rule == "genimp" else Exists(x, phi)
    if x != y and y in side.free_vars:
        return f"{y} occurs free in {to_text(side)}"
    if x == y and x in side.free_vars:
        return f"{x} occurs free in {to_text(side)}"
    if y in quant.free_vars:
        return f"{y} occurs free in {to_text(quant)}"
    return Implies(side, quant) if rule.rule == "genimp" else Implies(quant, side)


def check_proof(p: Proof):
    formulas = []
    for i, s in enumerate(p.steps, 1):
        if isinstance(s, Premise):
            formulas.append(s.formula)
            continue
        if isinstance(s, AxiomInstance):
            try:
                formulas.append(s.formula)
            except MalformedInstance as exc:
                return Invalid(i, str(exc))
            continue
        if s.rule not in RULES:
            return Invalid(i, f"unknown rule {s.rule!r}")
        want = 2 if s.rule == "mp" else 1
        if len(s.refs) != want or len(s.vars) != (0 if s.rule == "mp" else 2):
            return Invalid(i, f"{s.rule} has the wrong arity")
        if any(not 1 <= r < i for r in s.refs):
            return Invalid(i, "references must point to earlier steps")
        out = rule_conclusion(s, [formulas[r - 1] for r in s.refs])
        if isinstance(out, str):
            return Invalid(i, out)
        formulas.append(out)
    if not formulas:
        return Invalid(0, "empty proof")
    return Valid(tuple(formulas))


# -- realizer programs -----------------------------------------------------------------

_GIVE = ["    pkg t t", "    cmpcand t", "    halt r", "no:", "    halt 0"]


def _staged(name: str, prologue: list, items: list, result: str) -> list:
    """Verifier and builder procedures for a staged recognition.

    ``items`` are raw instruction lines or ``("app", dest, fn, arg)``: ``dest``
    becomes the first projection of the unique object ``fn`` recognizes relative
    to ``arg``.  The accepted candidate is ``result (+) pack(stage objects)``.
    """
    apps = [it for it in items if isinstance(it, tuple)]
    ver = [f".proc {name}"] + prologue + ["    read z cand", "    proj res z 0", "    proj zs z 1"]
    for i in range(len(apps)):
        ver += [f"    proj z{i} zs 0", "    proj zs zs 1"]
    ver += ["    set nil {}", "    eq zs nil", "    jz no"]
    bld = [f".proc {name}_b"] + prologue + ["    set nil {}"]
    k = 0
    for it in items:
        if isinstance(it, str):
            ver.append("    " + it)
            bld.append("    " + it)
            continue
        _, dest, fn, arg = it
        ver += [f"    ilv cx {arg} nil", f"    exec {fn} cx z{k}", "    jz no", f"    proj {dest} z{k} 0"]
        bld += [f"    ilv cx {arg} nil", f"    find z{k} {fn} cx", "    jz no", f"    proj {dest} z{k} 0"]
        k += 1
    ver += [f"    eq res {result}", "    jz no", "    halt 1", "no:", "    halt 0"]
    bld += ["    set acc {}"] + [f"    ilv acc z{i} acc" for i in reversed(range(k))]
    bld += [f"    ilv o {result} acc", "    out o", "    halt 1", "no:", "    halt 0"]
    return [f".seed {name} {name}_b"] + ver + bld


def _plain(name: str, body: list) -> list:
    return [f".proc {name}"] + ["    " + b for b in body] + _GIVE


def _library() -> list:
    out = []
    plain = {
        "const": ["read t param"],
        "k1": ["read r in", "rprog t const r"],
        "p3": ["read r in", "rprog t pair2 r"],
        "pair2": ["read r param", "read s in", "rpair t r s", "jz no"],
        "fst": ["read r in", "rfst t r", "jz no"],
        "snd": ["read r in", "rsnd t r", "jz no"],
        "inl": ["read r in", "rchoice t 0 r", "jz no"],
        "inr": ["read r in", "rchoice t 1 r", "jz no"],
        "case0": ["read b param", "read s in", "ilv p s b", "rprog t applyfix p"],
        "case1": ["read b param", "rprog t applyin b"],
        "p2": ["read r in", "rprog t p2b r"],
        "p2b": ["read r param", "read s in", "ilv p r s", "rprog t p2c p"],
        "p7": ["read r in", "rprog t p7b r"],
        "p7b": ["read r param", "read s in", "ilv p r s", "rprog t p7c p"],
        "p8": ["read r in", "rempty e", "rprog t const e"],
        "pairex": ["read c param", "read r in", "ilv p c r", "rprog t const p"],
        "eqimp": ["read r in", "set nil {}", "rprog t ident nil"],
        "ident": ["read t in"],
    }
    for name, body in plain.items():
        out += _plain(name, body)
    # case split on the tag of a disjunction realizer
    out += [".proc p6", "    read r in", "    rtag i r", "    jz no", "    rbody b r", "    jz no",
            "    set one {1}", "    eq i one", "    jnz right", "    rprog t case0 b",
            "    pkg t t", "    cmpcand t", "    halt r", "right:", "    rprog t case1 b"] + _GIVE
    out += _staged("applyfix", ["    read p param", "    proj s p 0", "    proj b p 1"],
                   [("app", "w", "s", "b")], "w")
    out += _staged("applyin", ["    read b param", "    read u in"], [("app", "w", "u", "b")], "w")
    pro = ["    read p param", "    proj r p 0", "    proj s p 1", "    read x in"]
    # right to left: r and s are applied to the input before their results meet
    out += _staged("p2c", pro, [("app", "a", "r", "x"), ("app", "b", "s", "x"), ("app", "c", "a", "b")], "c")
    out += _staged("p7c", pro, [("app", "a", "r", "x"), ("app", "b", "s", "x"), ("app", "c", "b", "a")], "c")
    return out


LIBRARY = _library()
_LIB_TEXT = "\n".join([".entry k1"] + LIBRARY) + "\n"
_LIB = assemble_macro(_LIB_TEXT, "hilbert")
LIBRARY_PROGRAM = _LIB

_ENTRY = {"P1": "k1", "P2": "p2", "P3": "p3", "P6": "p6", "P7": "p7", "P8": "p8", "Q4": "eqimp"}


def library_realizer(entry: str, param: OrdSet = EMPTY) -> ProgParam:
    return ProgParam(_LIB.with_entry(entry), param)


def _layers(vars_: list, body: tuple, extra: list = ()) -> list:
    """Closure layers over ``vars_`` ending in ``body``.

    ``body`` is ``("plain", lines)`` computing ``t`` from the environment ``e``
    and payload ``k``, or ``("staged", prologue, items, result)``.
    """
    n = len(vars_)
    out = list(extra)
    head = ["    read p param", "    proj e p 0", "    proj k p 1"]
    for i, v in enumerate(vars_):
        pro = head + ["    read u in", "    decchk u", "    jz no", f'    bind e e "{v}" u', "    jz no"]
        if i < n - 1:
            out += [f".proc cl{i}"] + pro + ["    ilv p e k", f"    rprog t cl{i + 1} p"] + _GIVE
        elif body[0] == "plain":
            out += [f".proc cl{i}"] + pro + ["    " + b for b in body[1]] + _GIVE
        else:
            out += _staged(f"cl{i}", pro + list(body[1]), list(body[2]), body[3])
    if n == 0:
        if body[0] == "plain":
            out += [".proc cl0"] + head + ["    " + b for b in body[1]] + ["    out t", "    halt 1", "no:", "    halt 0"]
        else:
            out += _staged("cl0", head + list(body[1]), list(body[2]), body[3])
    return out


@lru_cache(maxsize=4096)
def _closure_program(vars_: tuple, body: tuple, extra: tuple) -> MacroProgram:
    text = "\n".join([".entry cl0"] + LIBRARY + list(extra and extra) + _layers(list(vars_), body)) + "\n"
    return assemble_macro(text, "hilbert-closure")


def _freeze(body):
    return tuple(tuple(x) if isinstance(x, list) else x for x in body)


def closure_realizer(vars_, body, payload: OrdSet, ctx: CheckContext | None = None, extra=()) -> Realizer:
    """Realizer of the closure over ``vars_`` whose instances are built by ``body``."""
    prog = _closure_program(tuple(vars_), _freeze(body), tuple(extra))
    param = interleave(env_encode({}), payload)
    if vars_:
        return ProgParam(prog, param)
    ctx = ctx or CheckContext()
    entry = "cl0" if body[0] == "plain" else "cl0_b"
    res = macro_run(prog, param=param, fuel=ctx.fuel, config=ctx._vm, entry=entry)
    if not res.accepted:
        raise RecognitionFailed(f"closed instance could not be built ({res.status})")
    out = res.output_set if body[0] == "plain" else project(res.output_set, 0)
    r = try_deserialize(out)
    if r is None:
        raise RecognitionFailed("built object is not a realizer")
    return r


def _instantiate(fn: str, ws, present, tag: str) -> tuple[list, str]:
    """Stage items applying the closure realizer in ``fn`` to the codes of ``ws``."""
    items, cur = [], fn
    for j, w in enumerate(ws):
        c = f"{tag}c{j}"
        items += [f'get {c} e "{w}"', "jz no"] if w in present else [f"set {c} {{}}"]
        items.append(("app", f"{tag}{j}", cur, c))
        cur = f"{tag}{j}"
    return items, cur


def realize_axiom(schema: str, bindings: Mapping[str, str], ctx: CheckContext | None = None) -> Realizer:
    """Realizer of the universal closure of an axiom instance."""
    f = instance_formula(schema, bindings)
    b = _bindings(schema, bindings)
    vars_ = sorted(f.free_vars)
    if schema in ("P4", "P5"):
        inner = library_realizer((("fst", "snd"), ("inl", "inr"))[schema == "P5"][b["side"]])
    elif schema in _ENTRY:
        inner = library_realizer(_ENTRY[schema])
    else:
        inner = None
    if inner is not None:
        return closure_realizer(vars_, ("plain", ["mov t k"]), serialize(inner), ctx)
    if schema == "Q3":
        return closure_realizer(vars_, ("plain", ["rempty t"]), EMPTY, ctx)
    t = b["t"]
    fetch = [f'get c e "{t}"', "jz no"] if t in vars_ else ["set c {}"]
    target = "applyin" if schema == "Q1" else "pairex"
    return closure_realizer(vars_, ("plain", fetch + [f"rprog t {target} c"]), EMPTY, ctx)


# -- rules -------------------------------------------------------------------------------

@dataclass
class ExtractionEnv:
    premise_realizers: dict = field(default_factory=dict)
    ctx: CheckContext = field(default_factory=CheckContext)


def _verify(r: Realizer, f: Formula, ctx: CheckContext, what: str):
    v = check(r, f, ctx)
    if isinstance(v, Refuted):
        raise PremiseNotRealized(f"{what} does not realize {to_text(f)}: {v}")


def apply_rule(rule: str, inputs: list, side: tuple, env: ExtractionEnv, formulas: list,
               verify: bool = True) -> Realizer:
    """Realizer for the conclusion of ``rule`` applied to premises ``formulas``."""
    ctx = env.ctx
    r = Rule(rule, tuple(range(1, len(inputs) + 1)), tuple(side))
    concl = rule_conclusion(r, list(formulas))
    if isinstance(concl, str):
        raise MalformedInstance(concl)
    if rule == "mp":
        ra, rimp = inputs
        if not isinstance(rimp, ProgParam):
            raise PremiseNotRealized("an implication realizer must be a program with parameter")
        if verify:
            _verify(ra, formulas[0], ctx, "first premise")
            _verify(rimp, formulas[1], ctx, "second premise")
        if not formulas[1].free_vars:
            v = _recognize(rimp, interleave(serialize(ra), EMPTY), ctx)
            if not isinstance(v, Recognizes):
                raise RecognitionFailed(f"implication realizer: {v}")
            out = try_deserialize(project(v.witness, 0))
            if out is None:
                raise RecognitionFailed("recognized object is not a realizer")
            return out
        vars_ = sorted(concl.free_vars)
        items_a, a = _instantiate("ka", sorted(formulas[0].free_vars), vars_, "a")
        items_b, f = _instantiate("kb", sorted(formulas[1].free_vars), vars_, "b")
        items = ["proj ka k 0", "proj kb k 1"] + items_a + items_b + [("app", "res", f, a)]
        return closure_realizer(vars_, ("staged", [], items, "res"),
                                interleave(serialize(ra), serialize(rimp)), ctx)
    (rp,) = inputs
    if not isinstance(rp, ProgParam):
        raise PremiseNotRealized("the premise realizer must be a program with parameter")
    if verify:
        _verify(rp, formulas[0], ctx, "premise")
    x, y = side
    vars_ = sorted(concl.free_vars)
    pvars = sorted(formulas[0].free_vars)
    present = set(vars_) | {y}
    inst, fn = _instantiate("k", pvars, present, "i")
    if rule == "genimp":
        extra = _plain("gi_1", ["read q param", "read s in", "ilv q2 q s", "rprog t gi_2 q2"])
        pro = ["    read q2 param", "    proj q q2 0", "    proj s q2 1", "    proj e q 0", "    proj k q 1",
               "    read u in", "    decchk u", "    jz no", f'    bind e e "{y}" u', "    jz no"]
        extra += _staged("gi_2", pro, inst + [("app", "res", fn, "s")], "res")
        body = ("plain", ["ilv q e k", "rprog t gi_1 q"])
    else:
        pro = ["    read q param", "    proj e q 0", "    proj k q 1", "    read u in"]
        items = [("app", "pr", "u", "nil"), "proj c pr 0", "proj w pr 1", "decchk c", "jz no",
                 f'bind e e "{y}" c', "jz no"] + inst + [("app", "res", fn, "w")]
        extra = _staged("ee_1", pro, items, "res")
        body = ("plain", ["ilv q e k", "rprog t ee_1 q"])
    return closure_realizer(vars_, body, serialize(rp), ctx, extra=tuple(extra))


def extract(p: Proof, env: ExtractionEnv, verify_premises: bool = True) -> Realizer:
    """Realizer of the proof's conclusion (of its universal closure when open)."""
    res = check_proof(p)
    if not res:
        raise MalformedInstance(str(res))
    ctx = env.ctx
    realizers: list[Realizer] = []
    for i, s in enumerate(p.steps):
        f = res.formulas[i]
        if isinstance(s, Premise):
            if f not in env.premise_realizers:
                raise PremiseNotRealized(f"no realizer for premise {to_text(f)}")
            r = env.premise_realizers[f]
            if verify_premises:
                _verify(r, f, ctx, f"premise {i + 1}")
        elif isinstance(s, AxiomInstance):
            r = realize_axiom(s.schema, dict(s.bindings), ctx)
        else:
            r = apply_rule(s.rule, [realizers[j - 1] for j in s.refs], s.vars, env,
                           [res.formulas[j - 1] for j in s.refs], verify=False)
        realizers.append(r)
        ctx.register(closure(f), r)
    return realizers[-1]
