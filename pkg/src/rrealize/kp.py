"""Realizers for the Kripke-Platek axioms, choice and replacement.

Every emitter follows the same recipe: build the witness the way the
realizing program is meant to find it, then show that the program accepts it
and nothing else in a pool made of the witness and its single-element mutants.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import (
    And,
    Const,
    Exists,
    ExistsIn,
    ForAll,
    ForAllIn,
    Formula,
    Iff,
    Implies,
    Member,
    NotDelta0,
    Var,
    is_delta0,
    parse_formula,
    rename,
    substitute_all,
    to_text,
)
from .macro import MacroProgram, assemble_macro, env_encode, macro_run, predict
from .ordset import EMPTY, OrdSet, format_ordset, interleave, project, seq, unseq
from .realizability import CheckContext, Realized, check
from .realizers import EMPTY_REALIZER, Pair, ProgParam, Realizer, serialize, try_deserialize
from .recognizer import CandidatePool, Recognizer, mutants
from .setcode import EMPTYSET, HFSet, OmegaCode, encode, format_hf

AXIOMS = ("Extensionality", "Pairing", "EmptySet", "Union", "Infinity",
          "Delta0Separation", "Replacement", "EpsilonInduction", "Choice")


class MalformedInstance(ValueError):
    pass


class AntecedentNotRealized(ValueError):
    pass


class RecognitionFailed(RuntimeError):
    pass


class PremiseNotRealized(ValueError):
    pass


class EmptyMember(ValueError):
    pass


@dataclass(frozen=True)
class AxiomInstance:
    axiom: str
    sets: tuple = ()  # (name, HFSet) pairs
    formula: Formula | None = None
    params: tuple = ()  # (name, HFSet) pairs for the formula's other free variables

    def get(self, name: str) -> HFSet:
        try:
            return dict(self.sets)[name]
        except KeyError:
            raise MalformedInstance(f"{self.axiom} needs the set {name!r}") from None


@dataclass
class Probe:
    """A recognizer run relative to ``context`` that must single out ``witness``."""

    description: str
    recognizer: Recognizer
    context: OrdSet | None
    witness: OrdSet | None  # None: the program must reject every finite candidate


@dataclass
class EmissionResult:
    realizer: Realizer
    formula: Formula | None
    witnesses: list
    mutation_pool: CandidatePool
    probes: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)


_GIVE = ["    pkg t t", "    cmpcand t", "    halt r", "no:", "    halt 0"]
_CONST = [".proc const", "    read t param"] + _GIVE
_NIL_SEQ = format_ordset(seq([]))
_TRUE = ["    set one {1}", "    eq one one"]
_FALSE = ["    set one {1}", "    set zero {}", "    eq one zero"]


def _program(lines: list, name: str) -> MacroProgram:
    return assemble_macro("\n".join(lines + _CONST) + "\n", name)


def _pool(witnesses) -> CandidatePool:
    out = []
    for w in witnesses:
        out.append(w)
        out += mutants(w, 7)
    return CandidatePool(out)


def _result(realizer, formula, witnesses, probes, extra=None) -> EmissionResult:
    objs = [w for _, w in witnesses] + [p.witness for p in probes if p.witness is not None]
    return EmissionResult(realizer, formula, list(witnesses), _pool(objs), probes, extra or {})


def _const_formula(f: Formula, env: dict) -> Formula:
    return substitute_all(f, env)


def _fresh(base: str, taken) -> str:
    name, k = base, 0
    while name in taken:
        k += 1
        name = f"{base}{k}"
    return name


def _env(values: dict) -> OrdSet:
    return env_encode({k: encode(v) for k, v in values.items()})


# -- existence of a computed set -----------------------------------------------------------

def _exists_program(compute: list, var: str, body: Formula, name: str) -> MacroProgram:
    """Compute a code ``c`` from the environment, then recognize (c, canonical realizer of body)."""
    text = to_text(body)
    lines = [".entry main", ".proc main", "    read e param"] + ["    " + c for c in compute] + [
        "    jz no", f'    bind e e "{var}" c', "    jz no", f'    canon b "{text}" e', "    jz no",
        "    ilv t c b"] + _GIVE
    lines += [".proc wit", "    read e param"] + ["    " + c for c in compute] + [
        "    jz no", "    cmpcand c", "    halt r", "no:", "    halt 0"]
    return _program(lines, name)


def _emit_exists(compute, var, body, values, label, describe) -> EmissionResult:
    prog = _exists_program(compute, var, body, label)
    env = _env(values)
    r = ProgParam(prog, env)
    # the witness is the value each entry compares its candidate against
    code = predict(prog.with_entry("wit"), env, EMPTY)
    if not code:
        raise MalformedInstance(f"{label}: no witness could be computed")
    c = code[0]
    full = predict(prog, env, EMPTY)[0]
    formula = _const_formula(Exists(var, body), values)
    probes = [Probe(f"{describe} (bare code)", Recognizer(prog.with_entry("wit"), env), None, c),
              Probe(f"{describe} (with body realizer)", Recognizer(prog, env), EMPTY, full)]
    return _result(r, formula, [(describe, c)], probes)


def _ext_realizer() -> tuple[Realizer, list]:
    prog = _program([".entry const"], "extensionality")
    empty_imp = ProgParam(prog, serialize(EMPTY_REALIZER))
    per_z = ProgParam(prog, serialize(Pair(empty_imp, empty_imp)))
    forward = ProgParam(prog, serialize(per_z))
    backward = ProgParam(prog, serialize(EMPTY_REALIZER))
    probes = [Probe("realizer of the membership equivalence", Recognizer(prog, serialize(per_z)), EMPTY,
                    interleave(serialize(per_z), EMPTY)),
              Probe("realizer of the equation", Recognizer(prog, serialize(EMPTY_REALIZER)), EMPTY,
                    interleave(serialize(EMPTY_REALIZER), EMPTY))]
    return Pair(forward, backward), probes


def extensionality_formula(a: HFSet | None = None, b: HFSet | None = None) -> Formula:
    f = parse_formula("x = y <-> (all z)(z in x <-> z in y)")
    if a is None:
        return ForAll("x", ForAll("y", f))
    return substitute_all(f, {"x": a, "y": b})


def emit_basic(ax: AxiomInstance) -> EmissionResult:
    kind = ax.axiom
    if kind == "Extensionality":
        r, probes = _ext_realizer()
        formula = extensionality_formula(ax.get("a"), ax.get("b")) if ax.sets else extensionality_formula()
        if not ax.sets:
            prog = _program([".entry const"], "extensionality")
            r = ProgParam(prog, serialize(ProgParam(prog, serialize(r))))
        return _result(r, formula, [(p.description, project(p.witness, 0)) for p in probes], probes)
    if kind == "Pairing":
        a, b = ax.get("a"), ax.get("b")
        body = parse_formula("a in z and b in z and (all w in z)(w = a or w = b)")
        return _emit_exists(['get a e "a"', "jz no", 'get b e "b"', "jz no", "cpair c a b"], "z", body,
                            {"a": a, "b": b}, "pairing", f"code of {{{format_hf(a)}, {format_hf(b)}}}")
    if kind == "EmptySet":
        body = parse_formula("(all w in z)(not w = w)")
        return _emit_exists(["set c {}", "set one {1}", "eq one one"], "z", body, {}, "empty-set",
                            "code of the empty set")
    if kind == "Union":
        x = ax.get("X")
        body = parse_formula("(all w in X)(all v in w)(v in z) and (all v in z)(ex w in X)(v in w)")
        return _emit_exists(['get x e "X"', "jz no", "cunion c x"], "z", body, {"X": x}, "union",
                            f"code of the union of {format_hf(x)}")
    if kind == "Infinity":
        return _emit_infinity()
    raise MalformedInstance(f"emit_basic does not handle {kind!r}")


INFINITY_FORMULA = parse_formula(
    "(ex z)((ex e in z)(all t in e)(not t = t) and (all w in z)(ex v in z)((all t in w)(t in v) and w in v))")


def _emit_infinity() -> EmissionResult:
    prog = _program([".entry main", ".proc main", "    read z cand", "    proj p z 0", "    proj c p 0",
                     "    isomega c", "    halt r",
                     ".proc wit", "    read c cand", "    isomega c", "    halt r"], "infinity")
    omega = OmegaCode()
    window = omega.pairs_below(64)
    probes = [Probe("code of omega (finite window)", Recognizer(prog.with_entry("wit")), None, None)]
    res = EmissionResult(ProgParam(prog), INFINITY_FORMULA, [("code of omega below 64", window)],
                         _pool([window]), probes, {"symbolic_witness": omega})
    return res


# -- separation -------------------------------------------------------------------------------

def separation_formula(phi: Formula, var: str, X: HFSet, params: dict) -> tuple[Formula, Formula, str, str]:
    taken = phi.free_vars | {var}
    z, xs = _fresh("sep_z", taken), _fresh("sep_X", taken)
    body = And(ForAllIn(var, Var(z), And(Member(Var(var), Var(xs)), phi)),
               ForAllIn(var, Var(xs), Implies(phi, Member(Var(var), Var(z)))))
    return _const_formula(Exists(z, body), {xs: X, **params}), body, z, xs


def emit_separation(phi: Formula, params: dict, X: HFSet, var: str = "x") -> EmissionResult:
    if not is_delta0(phi):
        raise NotDelta0("separation needs a bounded formula")
    extra = phi.free_vars - {var} - set(params)
    if extra:
        raise MalformedInstance(f"no values for {', '.join(sorted(extra))}")
    formula, body, z, xs = separation_formula(phi, var, X, params)
    compute = [f'get x e "{xs}"', "jz no", f'csep c x "{var}" "{to_text(phi)}" e']
    return _emit_exists(compute, z, body, {xs: X, **params}, "separation",
                        f"code of the subset of {format_hf(X)}")


# -- replacement --------------------------------------------------------------------------------

def replacement_formulas(phi: Formula, X: HFSet, params: dict, xv: str = "x", yv: str = "y"):
    taken = phi.free_vars | {xv, yv}
    xs, ys = _fresh("rep_X", taken), _fresh("rep_Y", taken)
    ante = ForAllIn(xv, Var(xs), Exists(yv, phi))
    cons = Exists(ys, ForAllIn(xv, Var(xs), ExistsIn(yv, Var(ys), phi)))
    values = {xs: X, **params}
    return _const_formula(ante, values), _const_formula(Implies(ante, cons), values), xs, ys


def _evidence_check(prefix: str) -> list:
    """Lines checking one three-level recognition: zs = pack(z1, z2, z3) for code m, pair pr."""
    return [f"    proj z1 {prefix} 0", f"    proj q {prefix} 1", "    proj z2 q 0", "    proj q q 1",
            "    proj z3 q 0", "    proj q q 1", "    set nil {}", "    eq q nil", "    jz fail",
            "    ilv cx m nil", "    exec r cx z1", "    jz fail", "    proj s1 z1 0",
            "    rempty em", "    ilv cx em nil", "    exec s1 cx z2", "    jz fail", "    proj s2 z2 0",
            "    exec s2 nil z3", "    jz fail", "    proj pr3 z3 0"]


_EVIDENCE_FIND = ["    set nil {}", "    ilv cx m nil", "    find z1 r cx", "    jz no", "    proj s1 z1 0",
                  "    rempty em", "    ilv cx em nil", "    find z2 s1 cx", "    jz no", "    proj s2 z2 0",
                  "    find z3 s2 nil", "    jz no", "    proj pr3 z3 0", "    ilv zs z3 nil", "    ilv zs z2 zs",
                  "    ilv zs z1 zs"]


def _replacement_program(xs: str) -> MacroProgram:
    lines = [".entry main", ".seed main main_b", ".seed yw yw_b",
             # realizer of the implication: recognize (realizer of the conclusion, (Y, W))
             ".proc main", "    read e param", "    read r in", "    read z cand", "    proj t z 0",
             "    proj yw z 1", "    call audit", "    jz no", "    ilv q e yw", "    rprog u exw q",
             "    eq t u", "    jz no", "    halt 1", "no:", "    halt 0",
             ".proc main_b", "    read e param", "    read r in", "    call build", "    jz no",
             "    ilv q e yw", "    rprog u exw q", "    ilv o u yw", "    out o", "    halt 1", "no:", "    halt 0",
             ".proc yw", "    read e param", "    read r in", "    read yw cand", "    call audit", "    halt r",
             ".proc yw_b", "    read e param", "    read r in", "    call build", "    jz no", "    out yw",
             "    halt 1", "no:", "    halt 0",
             # (Y, W) audit: pass 1 over X, pass 2 over the members of Y's code
             ".proc audit", "    proj A yw 0", "    proj W yw 1", "    keys kw W", "    jz fail",
             f'    get X e "{xs}"', "    jz fail",
             "    members ms X", "    jz fail", "    proj n ms 0", "    proj nw W 0", "    eq n nw", "    jz fail",
             "    set i {}",
             "pass1:", "    lt i n", "    jz pass2", "    at m ms i", "    at w W i", "    jz fail",
             "    proj k w 0", "    eq k m", "    jz fail", "    proj ev w 1", "    proj pr ev 0", "    proj zs ev 1"]
    lines += _evidence_check("zs")
    lines += ["    eq pr3 pr", "    jz fail", "    proj cy pr 0", "    isin cy A", "    jz fail", "    inc i",
              "    jmp pass1",
              "pass2:", "    ccanon A", "    jz fail", "    members as A", "    proj na as 0", "    set j {}",
              "next:", "    lt j na", "    jz ok", "    at a as j", "    set i {}",
              "scan:", "    lt i n", "    jz fail", "    at w W i", "    proj ev w 1", "    proj pr ev 0",
              "    proj cy pr 0", "    codeq cy a", "    jnz hit", "    inc i", "    jmp scan",
              "hit:", "    inc j", "    jmp next",
              "ok:"] + _TRUE + ["    ret", "fail:"] + _FALSE + ["    ret"]
    lines += [".proc build", f'    get X e "{xs}"', "    jz bad", "    members ms X", "    proj n ms 0",
              f"    set W {_NIL_SEQ}", f"    set ys {_NIL_SEQ}", "    set i {}",
              "loop:", "    lt i n", "    jz done", "    at m ms i"]
    lines += [ln.replace("jz no", "jz bad") for ln in _EVIDENCE_FIND]
    lines += ["    ilv ev pr3 zs", "    ilv w m ev", "    push W W w", "    proj cy pr3 0", "    push ys ys cy",
              "    inc i", "    jmp loop",
              "done:", "    cset A ys", "    jz bad", "    ilv yw A W"] + _TRUE + ["    ret", "bad:"] + _FALSE + ["    ret"]
    # realizer of the conclusion and of its bounded body
    lines += [".proc exw", "    read q param", "    proj yw q 1", "    proj A yw 0", "    rprog b b1 q",
              "    ilv t A b"] + _GIVE
    lines += [".proc b1", "    read q param", "    read u in", "    ilv q2 q u", "    rprog t b2 q2"] + _GIVE
    lines += [".proc b2", "    read q2 param", "    proj q q2 0", "    proj u q2 1", "    proj yw q 1",
              "    proj W yw 1", "    proj n W 0", "    set i {}",
              "look:", "    lt i n", "    jz vac", "    at w W i", "    proj k w 0", "    codeq k u", "    jnz found",
              "    inc i", "    jmp look",
              "found:", "    proj ev w 1", "    proj pr ev 0", "    proj cy pr 0", "    proj rr pr 1",
              "    rempty em", "    rpair pp em rr", "    jz no", "    ilv wv cy pp", "    rprog t const wv",
              "    pkg t t", "    cmpcand t", "    halt r",
              "vac:", "    rempty t"] + _GIVE
    return _program(lines, "replacement")


def emit_replacement(phi: Formula, params: dict, X: HFSet, antecedent: Realizer, ctx: CheckContext | None = None,
                     xv: str = "x", yv: str = "y") -> EmissionResult:
    ctx = ctx or CheckContext()
    ante, formula, xs, _ = replacement_formulas(phi, X, params, xv, yv)
    v = check(antecedent, ante, ctx)
    if not isinstance(v, Realized):
        raise AntecedentNotRealized(f"antecedent check gave {v}")
    ctx.register(ante, antecedent)
    prog = _replacement_program(xs)
    env = _env({xs: X, **params})
    context = interleave(serialize(antecedent), EMPTY)
    res = macro_run(prog, param=env, fuel=ctx.fuel * 10, context=context, config=ctx._vm, entry="yw_b")
    if not res.accepted:
        raise RecognitionFailed(f"could not assemble (Y, W) ({res.status})")
    yw = res.output_set
    top = macro_run(prog, param=env, fuel=ctx.fuel * 10, context=context, config=ctx._vm, entry="main_b")
    if not top.accepted:
        raise RecognitionFailed("could not assemble the conclusion realizer")
    probes = [Probe("(Y, W)", Recognizer(prog.with_entry("yw"), env), context, yw),
              Probe("conclusion realizer with (Y, W)", Recognizer(prog, env), context, top.output_set)]
    witnesses = [("code of Y", project(yw, 0)), ("(Y, W)", yw)]
    return _result(ProgParam(prog, env), formula, witnesses, probes)


def replacement_table(yw: OrdSet) -> list:
    """The W entries as (x code, y code, realizer serialization) triples."""
    out = []
    for w in unseq(project(yw, 1)):
        pr = project(project(w, 1), 0)
        out.append((project(w, 0), project(pr, 0), project(pr, 1)))
    return out


# -- epsilon induction ---------------------------------------------------------------------------

def induction_formulas(phi: Formula, params: dict, var: str = "a"):
    """(premise, conclusion, full scheme) with the parameters as constants."""
    w = _fresh("ind_x", phi.free_vars | {var})
    step = ForAll(var, Implies(ForAllIn(w, Var(var), rename(phi, var, w)), phi))
    concl = ForAll(var, phi)
    c = lambda f: _const_formula(f, params)  # noqa: E731
    return c(step), c(concl), c(Implies(step, concl))


def _induction_program() -> MacroProgram:
    mktbl = [  # table of (member code, member realizer) for the members of k, read off T
        ".proc mktbl", "    members ms k", f"    set tbl {_NIL_SEQ}", "    proj nm ms 0", "    set j {}",
        "tl:", "    lt j nm", "    jz td", "    at m ms j", f"    set km {_NIL_SEQ}", "    push km km m",
        "    sel hit T km", "    set zero {}", "    at h hit zero", "    jz tbad", "    proj hv h 1", "    proj hr hv 1",
        "    proj he hr 1", "    proj cm he 0", "    ilv kv m cm", "    push tbl tbl kv", "    inc j", "    jmp tl",
        "td:"] + _TRUE + ["    ret", "tbad:"] + _FALSE + ["    ret"]
    lines = [".entry main", ".seed s s_b", ".seed ally ally_b",
             ".proc main", "    read r in", "    rprog t ally r"] + _GIVE
    lines += [".proc ally", "    read r param", "    read c in", "    read z cand", "    proj cy z 0",
              "    proj T z 1", "    rprog S s r", "    set nil {}", "    ilv cx c nil", "    exec S cx T", "    jz no",
              "    proj n T 0", "    set i {}", "    mov last i",
              "cnt:", "    mov j i", "    inc j", "    lt j n", "    jz got", "    mov i j", "    jmp cnt",
              "got:", "    at w T i", "    jz no", "    proj ev w 1", "    proj rest ev 1", "    proj e rest 1",
              "    proj cv e 0", "    eq cv cy", "    jz no", "    halt 1", "no:", "    halt 0"]
    lines += [".proc ally_b", "    read r param", "    read c in", "    rprog S s r", "    set nil {}",
              "    ilv cx c nil", "    find T S cx", "    jz no", "    proj n T 0", "    set i {}",
              "cnt:", "    mov j i", "    inc j", "    lt j n", "    jz got", "    mov i j", "    jmp cnt",
              "got:", "    at w T i", "    jz no", "    proj ev w 1", "    proj rest ev 1", "    proj e rest 1",
              "    proj cv e 0", "    ilv o cv T", "    out o", "    halt 1", "no:", "    halt 0"]
    # s: accepts exactly the table for tc({x}), checking the entries below x by recursion
    lines += [".proc s", "    read r param", "    read c0 in", "    tclist K c0", "    jz no", "    read T cand",
              "    keys ks T", "    eq ks K", "    jz no", "    proj n K 0", "    set nil {}", "    set i {}",
              "below:", "    mov j i", "    inc j", "    lt j n", "    jz local", "    at k K i", "    tclist Kk k",
              "    sel Tk T Kk", "    rprog S s r", "    ilv cx k nil", "    exec S cx Tk", "    jz no", "    mov i j",
              "    jmp below",
              "local:", "    at k K i", "    at w T i", "    proj ev w 1", "    proj lt ev 0", "    proj rest ev 1",
              "    proj z1 rest 0", "    proj e rest 1", "    call mktbl", "    jz no", "    rprog lx lt tbl",
              "    eq lx lt", "    jz no", "    ilv cx k nil", "    exec r cx z1", "    jz no", "    proj a1 z1 0",
              "    ilv cx lt nil", "    exec a1 cx e", "    jz no", "    halt 1", "no:", "    halt 0"]
    lines += [".proc s_b", "    read r param", "    read c0 in", "    tclist K c0", "    jz no", "    proj n K 0",
              f"    set T {_NIL_SEQ}", "    set nil {}", "    set i {}",
              "loop:", "    lt i n", "    jz done", "    at k K i", "    call mktbl", "    jz no",
              "    rprog lx lt tbl", "    ilv cx k nil", "    find z1 r cx", "    jz no", "    proj a1 z1 0",
              "    ilv cx lx nil", "    find e a1 cx", "    jz no", "    ilv rest z1 e", "    ilv ev lx rest",
              "    ilv w k ev", "    push T T w", "    inc i", "    jmp loop",
              "done:", "    out T", "    halt 1", "no:", "    halt 0"]
    # realizer of (all x in z) phi(x) from the members' realizers
    lines += [".proc lt", "    read tbl param", "    read u in", "    ilv q tbl u", "    rprog t lt2 q"] + _GIVE
    lines += [".proc lt2", "    read q param", "    proj tbl q 0", "    proj u q 1", "    proj n tbl 0", "    set i {}",
              "look:", "    lt i n", "    jz vac", "    at kv tbl i", "    proj k kv 0", "    codeq k u", "    jnz hit",
              "    inc i", "    jmp look",
              "hit:", "    proj t kv 1", "    pkg t t", "    cmpcand t", "    halt r",
              "vac:", "    rempty t"] + _GIVE
    return _program(lines + mktbl, "induction")


INDUCTION = _induction_program()


def induction_realizer() -> ProgParam:
    """Uniform realizer of the induction scheme (the formula enters only through the premise)."""
    return ProgParam(INDUCTION)


def emit_induction(phi: Formula, params: dict, y: HFSet, premise: Realizer, ctx: CheckContext | None = None,
                   var: str = "a") -> EmissionResult:
    ctx = ctx or CheckContext()
    step, concl, scheme = induction_formulas(phi, params, var)
    if not isinstance(premise, ProgParam) or not isinstance(check(premise, step, ctx), Realized):
        raise PremiseNotRealized("the premise does not realize the induction step")
    ctx.register(step, premise)
    rp = serialize(premise)
    cy = encode(y).code
    context = interleave(cy, EMPTY)
    res = macro_run(INDUCTION, param=rp, fuel=ctx.fuel * 10, context=context, config=ctx._vm, entry="s_b")
    if not res.accepted:
        raise RecognitionFailed(f"the recursion stalled below {format_hf(y)} ({res.status})")
    table = res.output_set
    entries = unseq(table)
    last = project(project(project(entries[-1], 1), 1), 1)
    r_y = try_deserialize(project(last, 0))
    if r_y is None:
        raise RecognitionFailed("the step realizer did not yield a realizer")
    formula = _const_formula(phi, {**params, var: y})
    probes = [Probe("table", Recognizer(INDUCTION.with_entry("s"), rp), context, table),
              Probe("realizer with table", Recognizer(INDUCTION.with_entry("ally"), rp), context,
                    interleave(project(last, 0), table))]
    witnesses = [("table", table), ("realizer", project(last, 0))]
    return _result(r_y, formula, witnesses, probes,
                   {"scheme": scheme, "scheme_realizer": induction_realizer(), "entries": len(entries)})


def table_entries(table: OrdSet) -> list:
    """(key code, lower realizer, step recognition, step object) per entry."""
    out = []
    for w in unseq(table):
        ev = project(w, 1)
        rest = project(ev, 1)
        out.append((project(w, 0), project(ev, 0), project(rest, 0), project(rest, 1)))
    return out


def pack_table(entries: list) -> OrdSet:
    return seq([interleave(k, interleave(lt, interleave(z1, e))) for k, lt, z1, e in entries])


# -- choice -----------------------------------------------------------------------------------

_PAIR = ("(ex {u} in {p})(ex {w} in {p})((all {t} in {u})({t} = {a}) and {a} in {u} and "
         "(all {t} in {w})({t} = {a} or {t} = {b}) and {a} in {w} and {b} in {w} and "
         "(all {t} in {p})({t} = {u} or {t} = {w}))")


def _pair_text(p, a, b, tag):
    return _PAIR.format(p=p, a=a, b=b, u=f"u{tag}", w=f"w{tag}", t=f"t{tag}")


CHOICE_BODY = parse_formula(
    f"(all y in X)(ex p in f)(ex v in y){_pair_text('p', 'y', 'v', 1)}"
    f" and (all p in f)(ex y in X)(ex v in y){_pair_text('p', 'y', 'v', 2)}"
    f" and (all p in f)(all q in f)(all y in X)(all v in y)(all v2 in y)"
    f"({_pair_text('p', 'y', 'v', 3)} and {_pair_text('q', 'y', 'v2', 4)} -> v = v2)")


def choice_formulas(X: HFSet):
    ante = parse_formula("(all y in X)(ex x)(x in y)")
    concl = Exists("f", CHOICE_BODY)
    return _const_formula(ante, {"X": X}), _const_formula(Implies(ante, concl), {"X": X})


def _choice_program() -> MacroProgram:
    body = to_text(CHOICE_BODY)
    lines = [".entry main", ".seed main main_b", ".seed fev fev_b",
             ".proc main", "    read e param", "    read r in", "    read z cand", "    proj t z 0", "    proj fe z 1",
             "    call fchk", "    jz no", "    proj F fe 0", "    ilv q e F", "    rprog u exf q", "    eq t u",
             "    jz no", "    halt 1", "no:", "    halt 0",
             ".proc main_b", "    read e param", "    read r in", "    call build", "    jz no", "    proj F fe 0",
             "    ilv q e F", "    rprog u exf q", "    ilv o u fe", "    out o", "    halt 1", "no:", "    halt 0",
             ".proc fev", "    read e param", "    read r in", "    read fe cand", "    call fchk", "    halt r",
             ".proc fev_b", "    read e param", "    read r in", "    call build", "    jz no", "    out fe",
             "    halt 1", "no:", "    halt 0",
             # bounded check that F is a choice function, then one recognition per member
             ".proc fchk", "    proj F fe 0", "    proj EV fe 1", "    ccanon F", "    jz fail", "    keys kv EV", "    jz fail",
             '    bind e2 e "f" F',
             "    jz fail", f'    d0 "{body}" e2', "    jz fail", '    get X e "X"', "    members ms X",
             "    proj n ms 0", "    proj nv EV 0", "    eq n nv", "    jz fail", "    set i {}",
             "each:", "    lt i n", "    jz ok", "    at m ms i", "    at zs EV i"] + _evidence_check("zs") + [
             "    proj cx pr3 0", "    capp d F m", "    jz fail", "    codeq d cx", "    jz fail", "    inc i",
             "    jmp each",
             "ok:"] + _TRUE + ["    ret", "fail:"] + _FALSE + ["    ret"]
    lines += [".proc build", '    get X e "X"', "    members ms X", "    proj n ms 0", f"    set L {_NIL_SEQ}",
              f"    set EV {_NIL_SEQ}", "    set i {}",
              "loop:", "    lt i n", "    jz done", "    at m ms i"] + [
        ln.replace("jz no", "jz bad") for ln in _EVIDENCE_FIND] + [
        "    push EV EV zs", "    proj cx pr3 0", "    ilv kv m cx", "    push L L kv", "    inc i", "    jmp loop",
        "done:", "    cfun F L", "    jz bad", "    ilv fe F EV"] + _TRUE + ["    ret", "bad:"] + _FALSE + ["    ret"]
    lines += [".proc exf", "    read q param", "    proj e q 0", "    proj F q 1", '    bind e e "f" F', "    jz no",
              f'    canon b "{body}" e', "    jz no", "    ilv t F b"] + _GIVE
    return _program(lines, "choice")


CHOICE = _choice_program()


def emit_choice(X: HFSet, premise: Realizer, ctx: CheckContext | None = None) -> EmissionResult:
    ctx = ctx or CheckContext()
    for y in X:
        if not y:
            raise EmptyMember(f"{format_hf(y)} is an empty member")
    ante, formula = choice_formulas(X)
    if not isinstance(check(premise, ante, ctx), Realized):
        raise PremiseNotRealized("the premise does not realize that every member is inhabited")
    ctx.register(ante, premise)
    env = _env({"X": X})
    context = interleave(serialize(premise), EMPTY)
    fe = macro_run(CHOICE, param=env, fuel=ctx.fuel * 10, context=context, config=ctx._vm, entry="fev_b")
    top = macro_run(CHOICE, param=env, fuel=ctx.fuel * 10, context=context, config=ctx._vm, entry="main_b")
    if not (fe.accepted and top.accepted):
        raise RecognitionFailed("a member's element could not be recognized")
    probes = [Probe("choice function with evidence", Recognizer(CHOICE.with_entry("fev"), env), context,
                    fe.output_set),
              Probe("conclusion realizer", Recognizer(CHOICE, env), context, top.output_set)]
    witnesses = [("code of f", project(fe.output_set, 0))]
    return _result(ProgParam(CHOICE, env), formula, witnesses, probes)


def choice_function(code: OrdSet) -> dict:
    """Decode a choice-function code into {argument: value}."""
    from .setcode import as_code, decode

    f = decode(as_code(code))
    out = {}
    for p in f:
        parts = sorted(p, key=len)
        a = next(iter(parts[0]))
        b = next(iter(parts[-1] - parts[0]), a)
        out[a] = b
    return out
