"""Command-line front end.

Exit codes: 0 success / Realized / valid, 1 Refuted / invalid, 2 Unknown /
Undetermined, 3 usage or parse errors.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import json
import sys
from pathlib import Path

from . import __version__

OK, REFUTED, UNKNOWN, USAGE = 0, 1, 2, 3
DEFAULT_RANK = 3
DEFAULT_FUEL = 1_000_000


class UsageError(Exception):
    """Bad flag value; ``flag`` names the offending option."""

    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


# -- reports --------------------------------------------------------------------------

class Report:
    def __init__(self, args):
        self.args = args
        self.rows: list[tuple[str, object]] = []

    def add(self, key: str, value):
        self.rows.append((key, value))

    def manifest(self) -> dict:
        flags = {k: _plain(v) for k, v in sorted(vars(self.args).items())
                 if k not in ("func", "json", "command", "command_path", "action") and v is not None}
        return {"command": self.args.command_path, "version": __version__, "flags": flags}

    def emit(self, out=None):
        out = out or sys.stdout
        stamp = _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
        if self.args.json:
            doc = {"generated": stamp, "manifest": self.manifest(),
                   "report": {k: _plain(v) for k, v in self.rows}}
            out.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")
            return
        out.write(f"# generated {stamp}\n")
        m = self.manifest()
        out.write(f"command: {m['command']}\n")
        for k, v in m["flags"].items():
            out.write(f"flag.{k}: {_flat(v)}\n")
        for k, v in self.rows:
            out.write(f"{k}: {_flat(v)}\n")


SHOW_LIMIT = 240


def show(x) -> str:
    """Full text of a set, or a digest line when it is too long to read."""
    text = str(x)
    if len(text) <= SHOW_LIMIT:
        return text
    digest = hashlib.sha1(text.encode()).hexdigest()[:12]
    n = len(x) if hasattr(x, "__len__") else "?"
    return f"<{n} elements, sha1 {digest}>"


def _plain(v):
    from .ordset import OrdSet

    if isinstance(v, OrdSet):
        return show(v)
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return str(v)


def _flat(v) -> str:
    from .ordset import OrdSet

    if isinstance(v, OrdSet):
        return show(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_flat(x) for x in v)
    return str(v).replace("\n", " | ")


# -- input helpers -------------------------------------------------------------------

def _text_or_file(value: str) -> str:
    """A literal, or the contents of the file it names."""
    p = Path(value)
    if len(value) < 4096 and p.is_file():
        return p.read_text()
    return value


def _read(flag: str, path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(flag, f"cannot read {path}: {exc.strerror}") from None


def _ordset(flag: str, value: str | None):
    from .ordset import EMPTY, parse_ordset

    if value is None:
        return EMPTY
    try:
        return parse_ordset(_text_or_file(value).strip())
    except ValueError as exc:
        raise UsageError(flag, str(exc)) from None


def _hf(flag: str, value: str):
    from .setcode import parse_hf

    try:
        return parse_hf(_text_or_file(value).strip())
    except ValueError as exc:
        raise UsageError(flag, str(exc)) from None


def _formula(flag: str, value: str):
    from .formula import ParseError, parse_formula

    try:
        return parse_formula(_text_or_file(value).strip())
    except ParseError as exc:
        raise UsageError(flag, str(exc)) from None


def _bindings(flag: str, items) -> dict:
    out = {}
    for item in items or ():
        name, eq, val = item.partition("=")
        if not eq or not name.isidentifier():
            raise UsageError(flag, f"expected name=set, got {item!r}")
        out[name] = _hf(flag, val)
    return out


def load_program(flag: str, path: str):
    """Macro program from its text, or a micro program when the file says ``.micro``."""
    from .macro import AssemblyError, assemble_macro
    from .otm import ParseError, assemble_micro

    lib = library_program(path)
    if lib is not None:
        return lib
    text = _read(flag, path)
    first = next((ln.split("#", 1)[0].strip() for ln in text.splitlines() if ln.split("#", 1)[0].strip()), "")
    try:
        if first == ".micro" or first.startswith("start "):
            return assemble_micro(text)
        return assemble_macro(text, Path(path).stem)
    except (AssemblyError, ParseError) as exc:
        raise UsageError(flag, f"{path}: {exc}") from None


def library_program(name: str):
    """Programs shipped with the package, addressed as ``lib:<name>``."""
    if not name.startswith("lib:"):
        return None
    from . import kp, proofcalc, recognizer

    table = {"eq-constant": recognizer.EQ_CONSTANT, "eq-section": recognizer.EQ_SECTION,
             "accept-all": recognizer.ACCEPT_ALL, "reject-all": recognizer.REJECT_ALL,
             "hilbert": proofcalc.LIBRARY_PROGRAM, "induction": kp.INDUCTION, "choice": kp.CHOICE}
    try:
        return table[name[4:]]
    except KeyError:
        raise UsageError("--program", f"unknown library program {name!r}") from None


def _pool(flag: str, paths) -> list:
    from .recognizer import CandidatePool

    out = []
    for p in paths or ():
        try:
            out += list(CandidatePool.parse(_read(flag, p)))
        except ValueError as exc:
            raise UsageError(flag, f"{p}: {exc}") from None
    return out


# -- realizer files ------------------------------------------------------------------

def save_realizer(r, path: Path) -> list[Path]:
    """Write ``r`` to ``path`` plus one ``.masm`` file per distinct program."""
    from .macro import disassemble_macro
    from .realizers import dump_realizer

    written = []

    def ref(prog):
        text = disassemble_macro(prog)
        tag = hashlib.sha1(text.encode()).hexdigest()[:10]
        name = f"{prog.name or 'program'}-{tag}.masm"
        target = path.parent / name
        if not target.exists():
            target.write_text(text)
            written.append(target)
        return name

    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_realizer(r, ref))
    return [path] + written


def read_realizer(flag: str, path: str):
    from .macro import AssemblyError, assemble_macro
    from .realizers import load_realizer

    base = Path(path).parent

    def prog(name):
        lib = library_program(name)
        if lib is not None:
            return lib
        target = base / name
        try:
            return assemble_macro(target.read_text(), Path(name).stem.rsplit("-", 1)[0])
        except OSError:
            raise UsageError(flag, f"program file {target} is missing") from None
        except AssemblyError as exc:
            raise UsageError(flag, f"{target}: {exc}") from None

    try:
        return load_realizer(_read(flag, path), prog)
    except ValueError as exc:
        raise UsageError(flag, f"{path}: {exc}") from None


def _context(args):
    from .realizability import CheckContext
    from .setcode import universe

    if not 0 <= args.universe_rank <= 4:
        raise UsageError("--universe-rank", "must be between 0 and 4")
    if args.fuel < 1:
        raise UsageError("--fuel", "must be positive")
    return CheckContext(universe=list(universe(args.universe_rank)), pool=_pool("--pool", args.pool),
                        fuel=args.fuel, rank=args.universe_rank)


def _verdict_code(v) -> int:
    name = type(v).__name__
    if name in ("Realized", "Recognizes", "Valid"):
        return OK
    if name in ("Refuted", "Invalid", "RejectsAll", "Ambiguous"):
        return REFUTED
    return UNKNOWN


# -- commands ------------------------------------------------------------------------------

def cmd_ord(args, rep):
    from .ordinal import OrdinalError, format_ordinal, godel_pair, godel_unpair, parse_ordinal

    try:
        a = parse_ordinal(args.expr)
    except (OrdinalError, ValueError) as exc:
        raise UsageError("expr", str(exc)) from None
    if args.unpair:
        try:
            i, j = godel_unpair(a)
        except (OrdinalError, ValueError) as exc:
            raise UsageError("--unpair", str(exc)) from None
        rep.add("pair", f"{format_ordinal(i)} {format_ordinal(j)}")
        return OK
    if args.pair_with is not None:
        try:
            b = parse_ordinal(args.pair_with)
        except (OrdinalError, ValueError) as exc:
            raise UsageError("--pair-with", str(exc)) from None
        rep.add("code", format_ordinal(godel_pair(a, b)))
        return OK
    rep.add("ordinal", format_ordinal(a))
    return OK


def cmd_code(args, rep):
    from .setcode import IllFormedCode, IndexOutOfRange, decode, derived_code, encode, format_hf, parse_code

    if args.action == "encode":
        c = encode(_hf("value", args.value))
        rep.add("domain", c.domain)
        rep.add("code", c.code)
        return OK
    try:
        c = parse_code(_text_or_file(args.value))
    except ValueError as exc:
        raise UsageError("value", str(exc)) from None
    try:
        if args.action == "decode":
            rep.add("set", format_hf(decode(c)))
            return OK
        if args.index is None:
            raise UsageError("--index", "derive needs a member index")
        d = derived_code(c, args.index)
        rep.add("domain", d.domain)
        rep.add("code", d.code)
        rep.add("set", format_hf(decode(d)))
        return OK
    except (IllFormedCode, IndexOutOfRange) as exc:
        rep.add("error", f"{type(exc).__name__}: {exc}")
        return REFUTED


def cmd_otm(args, rep):
    from .macro import MacroProgram, disassemble_macro, macro_run
    from .otm import disassemble_micro, micro_run

    prog = load_program("program", args.program)
    if args.action == "assemble":
        text = disassemble_macro(prog) if isinstance(prog, MacroProgram) else disassemble_micro(prog)
        rep.add("kind", "macro" if isinstance(prog, MacroProgram) else "micro")
        rep.add("lines", len(text.splitlines()))
        if args.out:
            Path(args.out).write_text(text)
            rep.add("written", args.out)
        else:
            rep.add("text", text.rstrip("\n"))
        return OK
    oracle, param = _ordset("--oracle", args.oracle), _ordset("--param", args.param)
    if isinstance(prog, MacroProgram):
        res = macro_run(prog, oracle, param, args.fuel)
    else:
        res = micro_run(prog, oracle, param, args.fuel)
    rep.add("status", res.status)
    rep.add("output_bit", res.output_bit)
    rep.add("output_set", res.output_set)
    rep.add("steps_used", res.steps_used)
    if res.status == "halted":
        return OK
    return UNKNOWN


def cmd_rec(args, rep):
    from .recognizer import Recognizer, chain_package, mutants, rho, test_recognizer

    if args.action == "chain":
        if not args.link:
            raise UsageError("--link", "give at least one PROGRAM PARAM WITNESS triple")
        links = [(Recognizer(load_program("--link", p), _ordset("--link", q)), _ordset("--link", x))
                 for p, q, x in args.link]
        rec, z = chain_package(links)
        base = _ordset("--base", args.base)
        pool = [z] + mutants(z, 7) + _pool("--pool", args.pool)
        v = test_recognizer(rec, pool, base, args.fuel)
        rep.add("package", z)
        rep.add("pool_size", len(pool))
        rep.add("verdict", f"recognizes {show(v.witness)}" if hasattr(v, "witness") else v)
        return _verdict_code(v)
    rec = Recognizer(load_program("--program", args.program), _ordset("--param", args.param))
    pool = _pool("--pool", args.pool)
    if not pool:
        raise UsageError("--pool", "the candidate pool is empty")
    ctx = _ordset("--context", args.context) if args.context is not None else None
    if args.action == "test":
        v = test_recognizer(rec, pool, ctx, args.fuel)
        rep.add("pool_size", len(pool))
        rep.add("verdict", f"recognizes {show(v.witness)}" if hasattr(v, "witness") else v)
        return _verdict_code(v)
    out = rho(rec, pool, args.fuel, ctx)
    rep.add("rho", out)
    return OK if out is not None and type(out).__name__ != "Undefined" else UNKNOWN


def cmd_formula(args, rep):
    from .formula import FuelExhausted, NotDelta0, UnboundVariable, classify, eval_bounded, to_text, truth

    f = _formula("formula", args.formula)
    if args.action == "parse":
        rep.add("formula", to_text(f))
        rep.add("free", sorted(f.free_vars))
        return OK
    if args.action == "classify":
        rep.add("class", classify(f))
        return OK
    env = _bindings("--env", args.env)
    try:
        try:
            value = eval_bounded(f, env, args.fuel)
            how = "bounded"
        except NotDelta0:
            value = truth(f, env, args.universe_rank)
            how = f"universe rank {args.universe_rank}"
    except UnboundVariable as exc:
        raise UsageError("--env", f"no value for {exc}") from None
    except FuelExhausted:
        rep.add("value", "undetermined")
        return UNKNOWN
    rep.add("value", str(value).lower())
    rep.add("evaluated_over", how)
    return OK if value else REFUTED


def cmd_realize(args, rep):
    from .realizability import NotTrue, canonical_realizer, check
    from .realizers import serialize

    if args.action == "check":
        if not args.formula or not args.realizer:
            raise UsageError("--formula" if not args.formula else "--realizer", "required for check")
        f = _formula("--formula", args.formula)
        r = read_realizer("--realizer", args.realizer)
        ctx = _context(args)
        v = check(r, f, ctx)
        rep.add("verdict", type(v).__name__)
        rep.add("detail", v)
        rep.add("runs", ctx.stats.get("runs", 0))
        return _verdict_code(v)
    if args.action == "canonical":
        if not args.formula:
            raise UsageError("--formula", "required for canonical")
        f = _formula("--formula", args.formula)
        try:
            r = canonical_realizer(f, None, args.universe_rank)
        except NotTrue as exc:
            rep.add("error", f"not true: {exc}")
            return REFUTED
        if args.out:
            files = save_realizer(r, Path(args.out))
            rep.add("written", [str(p) for p in files])
        rep.add("serialization", serialize(r))
        return OK
    if not args.realizer:
        raise UsageError("--realizer", "required for serialize")
    r = read_realizer("--realizer", args.realizer)
    rep.add("serialization", serialize(r))
    return OK


def cmd_kp(args, rep):
    from . import kp
    from .realizability import canonical_realizer, check
    from .recognizer import test_recognizer

    axiom = args.axiom
    sets = _bindings("--set", args.set)
    params = _bindings("--param", args.param)
    phi = _formula("--phi", args.phi) if args.phi else None
    premise = read_realizer("--premise", args.premise) if args.premise else None
    ctx = _context(args)

    def need_phi():
        if phi is None:
            raise UsageError("--phi", f"{axiom} needs a formula")
        return phi

    def need(name):
        if name not in sets:
            raise UsageError("--set", f"{axiom} needs {name}=<set>")
        return sets[name]

    try:
        if axiom in ("Extensionality", "Pairing", "EmptySet", "Union", "Infinity"):
            res = kp.emit_basic(kp.AxiomInstance(axiom, tuple(sorted(sets.items()))))
        elif axiom == "Delta0Separation":
            res = kp.emit_separation(need_phi(), params, need("X"), args.var or "x")
        elif axiom == "Replacement":
            ante, _, _, _ = kp.replacement_formulas(need_phi(), need("X"), params)
            res = kp.emit_replacement(phi, params, sets["X"], premise or canonical_realizer(ante), ctx)
        elif axiom == "EpsilonInduction":
            step, _, _ = kp.induction_formulas(need_phi(), params, args.var or "a")
            res = kp.emit_induction(phi, params, need("y"), premise or canonical_realizer(step), ctx,
                                    args.var or "a")
        elif axiom == "Choice":
            ante, _ = kp.choice_formulas(need("X"))
            res = kp.emit_choice(sets["X"], premise or canonical_realizer(ante), ctx)
        else:
            raise UsageError("axiom", f"unknown axiom {axiom!r}; choose from {', '.join(kp.AXIOMS)}")
    except (kp.MalformedInstance, kp.EmptyMember, ValueError) as exc:
        if isinstance(exc, UsageError):
            raise
        rep.add("error", f"{type(exc).__name__}: {exc}")
        return REFUTED
    except kp.RecognitionFailed as exc:
        rep.add("error", f"RecognitionFailed: {exc}")
        return UNKNOWN
    from .formula import to_text
    from .setcode import format_hf

    out = Path(args.out) if args.out else None
    verdict = check(res.realizer, res.formula, ctx.widened(res.mutation_pool)) if res.formula else None
    rep.add("axiom", axiom)
    rep.add("formula", to_text(res.formula) if res.formula else "-")
    rep.add("verdict", type(verdict).__name__ if verdict is not None else "-")
    probe_codes = []
    for i, pr in enumerate(res.probes):
        v = test_recognizer(pr.recognizer, res.mutation_pool, pr.context)
        ok = (type(v).__name__ == "RejectsAll") if pr.witness is None else (getattr(v, "witness", None) == pr.witness)
        probe_codes.append(ok)
        seen = f"recognizes {show(v.witness)}" if hasattr(v, "witness") else str(v)
        rep.add(f"probe.{i}", f"{pr.description}: {seen} ({'ok' if ok else 'MISMATCH'})")
    for name, w in res.witnesses:
        rep.add(f"witness.{name}", w)
    if "symbolic_witness" in res.extra:
        rep.add("symbolic_witness", "code of omega (domain w)")
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        files = save_realizer(res.realizer, out / "realizer.rlz")
        for i, (name, w) in enumerate(res.witnesses):
            (out / f"witness{i}.ords").write_text(f"# {name}\n{w}\n")
            files.append(out / f"witness{i}.ords")
        (out / "pool.txt").write_text(res.mutation_pool.dump())
        (out / "formula.fml").write_text(to_text(res.formula) + "\n" if res.formula else "")
        script = [f"# verification for {axiom}",
                  f"rrealize realize check --formula formula.fml --realizer realizer.rlz --pool pool.txt "
                  f"--universe-rank {args.universe_rank} --fuel {args.fuel}"]
        (out / "verify.txt").write_text("\n".join(script) + "\n")
        files += [out / "pool.txt", out / "formula.fml", out / "verify.txt"]
        rep.add("written", [str(p) for p in files])
    if "entries" in res.extra:
        rep.add("table_entries", res.extra["entries"])
    if axiom == "Choice" and res.witnesses:
        fn = kp.choice_function(res.witnesses[0][1])
        rep.add("choice", ", ".join(f"{format_hf(k)} -> {format_hf(v)}" for k, v in sorted(fn.items(), key=str)))
    if not all(probe_codes):
        return REFUTED
    return _verdict_code(verdict) if verdict is not None else OK


def cmd_proof(args, rep):
    from .formula import to_text
    from .proofcalc import (
        ExtractionEnv,
        MalformedInstance,
        PremiseNotRealized,
        Premise,
        RecognitionFailed,
        check_proof,
        extract,
        parse_proof,
    )
    from .realizability import check

    try:
        p = parse_proof(_read("file", args.file))
    except MalformedInstance as exc:
        raise UsageError("file", str(exc)) from None
    res = check_proof(p)
    rep.add("steps", len(p.steps))
    rep.add("result", res)
    if not res:
        return REFUTED
    rep.add("conclusion", to_text(res.conclusion))
    if args.action == "check":
        return OK
    premises = [s.formula for s in p.steps if isinstance(s, Premise)]
    given = args.premises or []
    if len(given) != len(premises):
        raise UsageError("--premises", f"the proof has {len(premises)} premises, {len(given)} realizers given")
    ctx = _context(args)
    env = ExtractionEnv({f: read_realizer("--premises", path) for f, path in zip(premises, given)}, ctx)
    try:
        r = extract(p, env)
    except (PremiseNotRealized, MalformedInstance) as exc:
        rep.add("error", f"{type(exc).__name__}: {exc}")
        return REFUTED
    except RecognitionFailed as exc:
        rep.add("error", f"RecognitionFailed: {exc}")
        return UNKNOWN
    v = check(r, res.conclusion, _context(args))
    rep.add("verdict", type(v).__name__)
    if args.out:
        rep.add("written", [str(x) for x in save_realizer(r, Path(args.out))])
    return _verdict_code(v)


def cmd_selftest(args, rep):
    from .acceptance import run_all

    wanted = set(args.only) if args.only else None
    outcomes = run_all(wanted, echo=None if args.json else lambda line: print(line, flush=True))
    for o in outcomes:
        rep.add(f"criterion.{o.number}", f"{'pass' if o.passed else 'FAIL'} {o.seconds:.1f}s {o.detail}")
    return OK if all(o.passed for o in outcomes) else REFUTED


# -- parser ---------------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(self.prog, message)


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="rrealize", description="Recognizability-based realizability toolkit.")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, fuel=DEFAULT_FUEL):
        p.add_argument("--json", action="store_true", help="structured report")
        p.add_argument("--fuel", type=int, default=fuel, help=f"step budget (default {fuel})")
        p.add_argument("--universe-rank", type=int, default=DEFAULT_RANK,
                       help="unbounded quantifiers range over sets of rank <= this (default 3)")

    p = sub.add_parser("ord", help="normalize an ordinal, or pair/unpair")
    p.add_argument("expr")
    p.add_argument("--pair-with")
    p.add_argument("--unpair", action="store_true")
    common(p)
    p.set_defaults(func=cmd_ord)

    p = sub.add_parser("code", help="set codes")
    p.add_argument("action", choices=("encode", "decode", "derive"))
    p.add_argument("value", help="hereditarily finite set (encode) or code text or file (decode, derive)")
    p.add_argument("--index", type=int)
    common(p)
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("otm", help="run or assemble machine programs")
    p.add_argument("action", choices=("run", "assemble"))
    p.add_argument("program")
    p.add_argument("--oracle")
    p.add_argument("--param")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_otm)

    p = sub.add_parser("rec", help="recognizer tests")
    p.add_argument("action", choices=("test", "rho", "chain"))
    p.add_argument("--program")
    p.add_argument("--param")
    p.add_argument("--context")
    p.add_argument("--pool", action="append")
    p.add_argument("--link", nargs=3, action="append", metavar=("PROGRAM", "PARAM", "WITNESS"))
    p.add_argument("--base")
    common(p, 100_000)
    p.set_defaults(func=cmd_rec)

    p = sub.add_parser("formula", help="parse, classify or evaluate formulas")
    p.add_argument("action", choices=("parse", "classify", "eval"))
    p.add_argument("formula", help="formula text or file")
    p.add_argument("--env", action="append", metavar="NAME=SET")
    common(p)
    p.set_defaults(func=cmd_formula)

    p = sub.add_parser("realize", help="check, build or serialize realizers")
    p.add_argument("action", choices=("check", "canonical", "serialize"))
    p.add_argument("--formula")
    p.add_argument("--realizer")
    p.add_argument("--pool", action="append")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("kp", help="emit realizers for set-theoretic axioms")
    p.add_argument("action", choices=("emit",))
    p.add_argument("axiom")
    p.add_argument("--set", action="append", metavar="NAME=SET")
    p.add_argument("--param", action="append", metavar="NAME=SET")
    p.add_argument("--phi")
    p.add_argument("--var")
    p.add_argument("--premise")
    p.add_argument("--pool", action="append")
    p.add_argument("--out")
    common(p, 100_000)
    p.set_defaults(func=cmd_kp)

    p = sub.add_parser("proof", help="check proofs or extract realizers")
    p.add_argument("action", choices=("check", "extract"))
    p.add_argument("file")
    p.add_argument("--premises", nargs="*")
    p.add_argument("--pool", action="append")
    p.add_argument("--out")
    common(p, 100_000)
    p.set_defaults(func=cmd_proof)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--only", type=int, action="append", metavar="N")
    common(p)
    p.set_defaults(func=cmd_selftest)
    return top


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if hasattr(sys, "set_int_max_str_digits"):
        # serialized programs are Goedel numbers with tens of thousands of digits
        sys.set_int_max_str_digits(0)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    args.command_path = " ".join([args.command] + ([args.action] if hasattr(args, "action") else []))
    rep = Report(args)
    try:
        code = args.func(args, rep)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE
    except RecursionError:
        print("error: input nests too deeply", file=sys.stderr)
        return USAGE
    rep.emit()
    return code


cli_dispatch = main

if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
