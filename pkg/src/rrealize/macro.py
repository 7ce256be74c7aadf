"""Macro virtual machine for recognizing programs.

Programs are register machines over sets of ordinals.  A run sees an oracle
``context (+) candidate``, a read-only parameter, and finishes with ``halt``
carrying a bit.  Set-level intrinsics (interleaving, code checks, bounded
truth, realizer construction, nested runs) each cost one unit of fuel; nested
runs draw on the same fuel budget.

Text format, one instruction per line, ``#`` comments::

    .entry main          # optional, defaults to the first procedure
    .seed main build     # optional: a procedure building what ``main`` accepts
    .proc main
        read t param
        cmpcand t
        halt r
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from .ordinal import ord_of
from .ordset import EMPTY, OrdSet, format_ordset, interleave, pack, parse_ordset, project, seq, unpack, unseq
from .otm import RunResult, fuel_exhausted, halted
from .setcode import IllFormedCode, as_code, code_eq, decode, decode_all, member_codes


class AssemblyError(ValueError):
    def __init__(self, msg: str, line: int, col: int = 1):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line, self.col = line, col


class MalformedOperand(RuntimeError):
    pass


class _OutOfFuel(Exception):
    pass


class _NeedsCandidate(Exception):
    pass


# -- instruction set -------------------------------------------------------------

SOURCES = ("oracle", "ctx", "cand", "in", "extra", "param")

OPS: dict[str, tuple[str, ...]] = {
    "read": ("reg", "src"),
    "set": ("reg", "set"),
    "mov": ("reg", "reg"),
    "proj": ("reg", "reg", "int"),
    "ilv": ("reg", "reg", "reg"),
    "pkg": ("reg", "reg"),
    "nth": ("reg", "reg", "int"),
    "eq": ("reg", "reg"),
    "cmporc": ("rs",),
    "cmpcand": ("rs",),
    "codeq": ("reg", "reg"),
    "decchk": ("reg",),
    "isin": ("reg", "reg"),
    "size": ("reg", "reg"),
    "member": ("reg", "reg", "reg"),
    "inc": ("reg",),
    "lt": ("reg", "reg"),
    "d0": ("str", "reg"),
    "bind": ("reg", "reg", "str", "reg"),
    "get": ("reg", "reg", "str"),
    "canon": ("reg", "str", "reg"),
    "wit": ("reg", "str", "str", "reg"),
    "cpair": ("reg", "reg", "reg"),
    "cunion": ("reg", "reg"),
    "csep": ("reg", "reg", "str", "str", "reg"),
    "cset": ("reg", "reg"),
    "cfun": ("reg", "reg"),
    "capp": ("reg", "reg", "reg"),
    "ccanon": ("reg",),
    "tclist": ("reg", "reg"),
    "members": ("reg", "reg"),
    "isomega": ("reg",),
    "sel": ("reg", "reg", "reg"),
    "keys": ("reg", "reg"),
    "at": ("reg", "reg", "reg"),
    "push": ("reg", "reg", "reg"),
    "rempty": ("reg",),
    "rleaf": ("reg", "reg"),
    "rpair": ("reg", "reg", "reg"),
    "rchoice": ("reg", "int", "reg"),
    "rfst": ("reg", "reg"),
    "rsnd": ("reg", "reg"),
    "rtag": ("reg", "reg"),
    "rbody": ("reg", "reg"),
    "rprog": ("reg", "proc", "reg"),
    "exec": ("reg", "reg", "reg"),
    "find": ("reg", "reg", "reg"),
    "out": ("reg",),
    "jz": ("label",),
    "jnz": ("label",),
    "jmp": ("label",),
    "call": ("proc",),
    "ret": (),
    "halt": ("bit",),
}

TERMINAL = ("halt", "jmp", "ret")
_CAND_OPS = ("cmporc", "cmpcand")


@dataclass(frozen=True)
class Instr:
    op: str
    args: tuple

    def text(self) -> str:
        parts = [self.op]
        for kind, a in zip(OPS[self.op], self.args):
            if kind == "str":
                parts.append('"' + a.replace("\\", "\\\\").replace('"', '\\"') + '"')
            elif kind in ("set",) or (kind == "rs" and isinstance(a, OrdSet)):
                parts.append(format_ordset(a))
            else:
                parts.append(str(a))
        return " ".join(parts)


@dataclass(frozen=True)
class Proc:
    name: str
    body: tuple  # Instr
    labels: tuple  # (label, index) in index order


@dataclass(frozen=True, eq=False)
class MacroProgram:
    procs: tuple
    entry: str
    seeds: tuple = ()  # (procedure, builder procedure)
    name: str = field(default="", compare=False)

    @cached_property
    def text(self) -> str:
        return _disassemble(self)

    def proc(self, name: str) -> Proc:
        for p in self.procs:
            if p.name == name:
                return p
        raise KeyError(name)

    @property
    def seed(self) -> str | None:
        return dict(self.seeds).get(self.entry)

    def with_entry(self, entry: str) -> "MacroProgram":
        self.proc(entry)
        return assemble_macro(_disassemble(self, entry=entry))

    def __eq__(self, other):
        return isinstance(other, MacroProgram) and self.text == other.text

    def __hash__(self):
        return hash(self.text)

    def __len__(self):
        return sum(len(p.body) for p in self.procs)


# -- assembler -------------------------------------------------------------------

_TOK = re.compile(r'"(?:[^"\\]|\\.)*"|\{[^}]*\}|[^\s"{]+')
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


def _strip_comment(line: str) -> str:
    depth, quoted, esc = 0, False, False
    for i, ch in enumerate(line):
        if quoted:
            if esc:
                esc = False
            elif ch == "\\":
                esc = True
            elif ch == '"':
                quoted = False
        elif ch == '"':
            quoted = True
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        elif ch == "#" and depth == 0:
            return line[:i]
    return line


def _unquote(tok: str) -> str:
    return re.sub(r"\\(.)", r"\1", tok[1:-1])


@lru_cache(maxsize=4096)
def assemble_macro(text: str, name: str = "") -> MacroProgram:
    procs: list[tuple[str, list, dict, int]] = []
    entry = None
    seeds: dict[str, str] = {}
    cur = None
    for ln, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        toks = [(m.group(0), m.start() + 1) for m in _TOK.finditer(_strip_comment(raw))]
        word, col = toks[0]
        if word == ".seed":
            if len(toks) != 3 or not all(_IDENT.match(t[0]) for t in toks[1:]):
                raise AssemblyError(".seed takes a procedure and its builder", ln, col)
            seeds[toks[1][0]] = toks[2][0]
            continue
        if word in (".entry", ".proc"):
            if len(toks) != 2 or not _IDENT.match(toks[1][0]):
                raise AssemblyError(f"{word} takes one procedure name", ln, col)
            if word == ".entry":
                entry = toks[1][0]
            else:
                if any(p[0] == toks[1][0] for p in procs):
                    raise AssemblyError(f"duplicate procedure {toks[1][0]!r}", ln, col)
                cur = (toks[1][0], [], {}, ln)
                procs.append(cur)
            continue
        if cur is None:
            cur = ("main", [], {}, ln)
            procs.append(cur)
        if word.endswith(":") and len(toks) == 1:
            label = word[:-1]
            if not _IDENT.match(label):
                raise AssemblyError(f"bad label {label!r}", ln, col)
            if label in cur[2]:
                raise AssemblyError(f"duplicate label {label!r}", ln, col)
            cur[2][label] = len(cur[1])
            continue
        if word not in OPS:
            raise AssemblyError(f"unknown instruction {word!r}", ln, col)
        kinds = OPS[word]
        if len(toks) - 1 != len(kinds):
            where = toks[-1][1] + len(toks[-1][0]) if len(toks) - 1 < len(kinds) else toks[len(kinds) + 1][1]
            raise AssemblyError(f"{word} expects {len(kinds)} operand(s), got {len(toks) - 1}", ln, where)
        args = []
        for kind, (tok, c) in zip(kinds, toks[1:]):
            args.append(_operand(kind, tok, ln, c))
        cur[1].append((Instr(word, tuple(args)), ln))
    if not procs:
        raise AssemblyError("empty program", 1, 1)
    names = [p[0] for p in procs]
    entry = entry or names[0]
    if entry not in names:
        raise AssemblyError(f"entry procedure {entry!r} is not defined", 1, 1)
    for a, b in seeds.items():
        if a not in names or b not in names:
            raise AssemblyError(f"seed pair {a} {b} names an undefined procedure", 1, 1)
    out = []
    for pname, body, labels, pline in procs:
        if not body:
            raise AssemblyError(f"procedure {pname!r} is empty", pline, 1)
        if body[-1][0].op not in TERMINAL:
            raise AssemblyError(f"procedure {pname!r} can run past its last instruction", body[-1][1], 1)
        for ins, ln in body:
            for kind, a in zip(OPS[ins.op], ins.args):
                if kind == "label" and (a not in labels or labels[a] >= len(body)):
                    raise AssemblyError(f"branch target {a!r} is not an instruction", ln, 1)
                if kind == "proc" and a not in names:
                    raise AssemblyError(f"unknown procedure {a!r}", ln, 1)
        lab = tuple(sorted(labels.items(), key=lambda kv: (kv[1], kv[0])))
        out.append(Proc(pname, tuple(i for i, _ in body), lab))
    return MacroProgram(tuple(out), entry, tuple(sorted(seeds.items())), name or entry)


def _operand(kind: str, tok: str, ln: int, col: int):
    if kind in ("reg", "label", "proc"):
        if not _IDENT.match(tok):
            raise AssemblyError(f"expected a name, found {tok!r}", ln, col)
        return tok
    if kind == "src":
        if tok not in SOURCES:
            raise AssemblyError(f"read source must be one of {', '.join(SOURCES)}", ln, col)
        return tok
    if kind == "set" or (kind == "rs" and tok.startswith("{")):
        try:
            return parse_ordset(tok)
        except ValueError as exc:
            raise AssemblyError(str(exc), ln, col) from None
    if kind == "rs":
        return _operand("reg", tok, ln, col)
    if kind == "int":
        if not tok.isdigit():
            raise AssemblyError(f"expected a number, found {tok!r}", ln, col)
        return int(tok)
    if kind == "str":
        if not (tok.startswith('"') and tok.endswith('"') and len(tok) >= 2):
            raise AssemblyError(f"expected a quoted string, found {tok!r}", ln, col)
        return _unquote(tok)
    if kind == "bit":
        if tok not in ("0", "1", "r"):
            raise AssemblyError(f"halt takes 0, 1 or r, found {tok!r}", ln, col)
        return tok
    raise AssertionError(kind)


def _disassemble(p: MacroProgram, entry: str | None = None) -> str:
    lines = []
    entry = entry or p.entry
    if len(p.procs) > 1 or entry != p.procs[0].name:
        lines.append(f".entry {entry}")
    for a, b in p.seeds:
        lines.append(f".seed {a} {b}")
    for proc in p.procs:
        lines.append(f".proc {proc.name}")
        at: dict[int, list[str]] = {}
        for lab, idx in proc.labels:
            at.setdefault(idx, []).append(lab)
        for i, ins in enumerate(proc.body):
            for lab in at.get(i, ()):
                lines.append(f"{lab}:")
            lines.append("    " + ins.text())
    return "\n".join(lines) + "\n"


def disassemble_macro(p: MacroProgram) -> str:
    return p.text


# -- environments: variable name -> code ------------------------------------------

def _name_number(name: str) -> int:
    return int.from_bytes(b"\x01" + name.encode(), "big")


def env_encode(env: dict) -> OrdSet:
    """``seq`` of ``{name} (+) code`` entries sorted by variable name."""
    items = []
    for k in sorted(env):
        v = env[k]
        items.append(interleave(OrdSet([_name_number(k)]), v.code if hasattr(v, "code") else v))
    return seq(items)


@lru_cache(maxsize=65536)
def env_decode(e: OrdSet) -> dict:
    out = {}
    if not e:
        return out
    for item in unseq(e):
        n = project(item, 0)
        if len(n) != 1 or not n.elems[0].is_finite:
            raise ValueError("bad environment entry")
        raw = int(n.elems[0]).to_bytes((int(n.elems[0]).bit_length() + 7) // 8, "big")
        out[raw[1:].decode()] = as_code(project(item, 1))
    return out


def env_values(e: OrdSet) -> dict:
    return {k: decode(c) for k, c in env_decode(e).items()}


# -- machine ----------------------------------------------------------------------

@dataclass(frozen=True)
class VMConfig:
    pool: tuple = ()
    universe_rank: int = 3
    seed_predictions: bool = True


DEFAULT_CONFIG = VMConfig()


class _Meter:
    __slots__ = ("left", "used")

    def __init__(self, fuel: int):
        self.left, self.used = fuel, 0

    def tick(self, k: int = 1):
        self.left -= k
        self.used += k
        if self.left < 0:
            # the step that overran is not charged
            self.used += self.left
            self.left = 0
            raise _OutOfFuel()


@dataclass
class _State:
    proc: Proc
    pc: int
    regs: dict
    flag: int = 0
    stack: list = field(default_factory=list)
    out: OrdSet = EMPTY

    def copy(self) -> "_State":
        return _State(self.proc, self.pc, dict(self.regs), self.flag, list(self.stack), self.out)


_UNKNOWN = object()
_MEMO: dict = {}
_MEMO_LIMIT = 400_000


def clear_memo():
    _MEMO.clear()


class Machine:
    def __init__(self, config: VMConfig = DEFAULT_CONFIG):
        self.config = config
        self._ckey = (hash(config.pool), config.universe_rank, config.seed_predictions)

    # -- top level ------------------------------------------------------
    def start(self, prog: MacroProgram, entry: str | None = None) -> _State:
        return _State(prog.proc(entry or prog.entry), 0, {})

    def run(self, prog, param, ctx, cand, meter, entry=None) -> tuple[int, OrdSet]:
        key = (prog.text, entry, param, ctx, cand, self._ckey)
        hit = _MEMO.get(key)
        if hit is not None:
            bit, out, steps = hit
            meter.tick(steps)
            return bit, out
        before = meter.used
        st = self.start(prog, entry)
        bit, out = self.resume(prog, st, param, ctx, cand, meter)
        if len(_MEMO) > _MEMO_LIMIT:
            _MEMO.clear()
        _MEMO[key] = (bit, out, meter.used - before)
        return bit, out

    def run_prefix(self, prog, param, ctx, meter, entry=None):
        """Run until the first instruction that looks at the candidate."""
        st = self.start(prog, entry)
        try:
            result = self.resume(prog, st, param, ctx, _UNKNOWN, meter, pause=True)
        except _NeedsCandidate:
            return st, None
        return st, result

    # -- interpreter ----------------------------------------------------
    def resume(self, prog, st: _State, param, ctx, cand, meter, pause=False):
        regs = st.regs
        while True:
            body = st.proc.body
            ins = body[st.pc]
            op, a = ins.op, ins.args
            if pause and (op in _CAND_OPS or (op == "read" and a[1] in ("cand", "oracle"))):
                raise _NeedsCandidate()
            meter.tick()
            st.pc += 1

            def get(name):
                try:
                    return regs[name]
                except KeyError:
                    raise MalformedOperand(f"register {name!r} read before it was set") from None

            if op == "read":
                regs[a[0]] = self._source(a[1], param, ctx, cand)
            elif op == "set":
                regs[a[0]] = a[1]
            elif op == "mov":
                regs[a[0]] = get(a[1])
            elif op == "proj":
                if a[2] not in (0, 1):
                    raise MalformedOperand("proj side must be 0 or 1")
                regs[a[0]] = project(get(a[1]), a[2])
            elif op == "ilv":
                regs[a[0]] = interleave(get(a[1]), get(a[2]))
            elif op == "pkg":
                regs[a[0]] = interleave(get(a[1]), EMPTY)
            elif op == "nth":
                x = get(a[1])
                for _ in range(a[2]):
                    x = project(x, 1)
                regs[a[0]] = project(x, 0)
            elif op == "eq":
                st.flag = int(get(a[0]) == get(a[1]))
            elif op in _CAND_OPS:
                val = a[0] if isinstance(a[0], OrdSet) else get(a[0])
                src = self._source("oracle" if op == "cmporc" else "cand", param, ctx, cand)
                st.flag = int(src == val)
            elif op == "codeq":
                st.flag = _codeq(get(a[0]), get(a[1]))
            elif op == "decchk":
                st.flag = int(_well_formed(get(a[0])))
            elif op == "isin":
                x, y = get(a[0]), get(a[1])
                st.flag = int(_well_formed(x) and _well_formed(y) and decode(as_code(x)) in decode(as_code(y)))
            elif op == "size":
                c = get(a[1])
                regs[a[0]] = OrdSet([len(member_codes(as_code(c)))]) if _well_formed(c) else EMPTY
            elif op == "member":
                c, k = get(a[1]), _small(get(a[2]))
                ms = member_codes(as_code(c)) if _well_formed(c) else []
                if k is None or k >= len(ms):
                    st.flag = 0
                    regs[a[0]] = EMPTY
                else:
                    st.flag = 1
                    regs[a[0]] = ms[k].code
            elif op == "inc":
                k = _small(get(a[0]))
                if k is None:
                    raise MalformedOperand("inc needs a register holding {n}")
                regs[a[0]] = OrdSet([k + 1])
            elif op == "lt":
                x, y = _small(get(a[0])), _small(get(a[1]))
                st.flag = int(x is not None and y is not None and x < y)
            elif op == "d0":
                st.flag = self._d0(a[0], get(a[1]))
            elif op == "bind":
                e = get(a[1])
                try:
                    env = dict(env_decode(e))
                except ValueError:
                    raise MalformedOperand("bind on a malformed environment") from None
                if _well_formed(get(a[3])):
                    env[a[2]] = as_code(get(a[3]))
                    st.flag = 1
                else:
                    st.flag = 0
                regs[a[0]] = env_encode(env)
            elif op == "get":
                try:
                    code = env_decode(get(a[1])).get(a[2])
                except ValueError:
                    code = None
                st.flag = int(code is not None)
                regs[a[0]] = code.code if code is not None else EMPTY
            elif op == "canon":
                val = self._canon(a[1], get(a[2]))
                st.flag = int(val is not None)
                regs[a[0]] = val if val is not None else EMPTY
            elif op == "wit":
                val = self._wit(a[1], a[2], get(a[3]))
                st.flag = int(val is not None)
                regs[a[0]] = val if val is not None else EMPTY
            elif op in _CODE_OPS:
                self._code_op(st, op, a, get)
            elif op.startswith("r") and op not in ("read", "ret"):
                self._realizer_op(prog, st, op, a, get)
            elif op == "exec":
                st.flag = self._exec(get(a[0]), get(a[1]), get(a[2]), meter)
            elif op == "find":
                val = self.find(get(a[1]), get(a[2]), meter)
                st.flag = int(val is not None)
                regs[a[0]] = val if val is not None else EMPTY
            elif op == "out":
                st.out = get(a[0])
            elif op == "jz":
                if not st.flag:
                    st.pc = _label(st.proc, a[0])
            elif op == "jnz":
                if st.flag:
                    st.pc = _label(st.proc, a[0])
            elif op == "jmp":
                st.pc = _label(st.proc, a[0])
            elif op == "call":
                st.stack.append((st.proc, st.pc))
                st.proc, st.pc = prog.proc(a[0]), 0
            elif op == "ret":
                if not st.stack:
                    raise MalformedOperand("ret with an empty call stack")
                st.proc, st.pc = st.stack.pop()
            elif op == "halt":
                bit = st.flag if a[0] == "r" else int(a[0])
                return bit, st.out
            else:  # pragma: no cover
                raise MalformedOperand(f"unknown op {op}")

    def _source(self, src, param, ctx, cand):
        if src == "param":
            return param
        if src in ("cand", "oracle") and cand is _UNKNOWN:
            raise _NeedsCandidate()
        if src == "cand":
            return cand
        if src == "oracle":
            return cand if ctx is None else interleave(ctx, cand)
        c = ctx if ctx is not None else EMPTY
        if src == "ctx":
            return c
        return project(c, 0 if src == "in" else 1)

    # -- intrinsics -------------------------------------------------------
    def _d0(self, text: str, e: OrdSet) -> int:
        from .formula import FuelExhausted, NotDelta0, UnboundVariable, eval_bounded

        try:
            env = env_decode(e)
            return int(eval_bounded(_formula(text), env))
        except (ValueError, IllFormedCode, UnboundVariable, NotDelta0, FuelExhausted):
            return 0

    def _canon(self, text: str, e: OrdSet):
        from .realizability import NotTrue, canonical_realizer
        from .realizers import serialize

        try:
            env = env_values(e)
            return serialize(canonical_realizer(_formula(text), env, self.config.universe_rank))
        except (ValueError, IllFormedCode, KeyError, NotTrue):
            return None

    def _wit(self, var: str, text: str, e: OrdSet):
        from .realizability import canonical_witness

        try:
            env = env_values(e)
            return canonical_witness(var, _formula(text), env, self.config.universe_rank)
        except (ValueError, IllFormedCode, KeyError):
            return None

    def _realizer_op(self, prog, st, op, a, get):
        from .realizers import (EMPTY_REALIZER, Choice, Leaf, Pair, ProgParam, deserialize,
                                serialize, MalformedSerialization)

        regs = st.regs

        def de(x):
            try:
                return deserialize(x)
            except MalformedSerialization:
                return None

        if op == "rempty":
            regs[a[0]] = serialize(EMPTY_REALIZER)
        elif op == "rleaf":
            regs[a[0]] = serialize(Leaf(get(a[1])))
        elif op == "rpair":
            x, y = de(get(a[1])), de(get(a[2]))
            st.flag = int(x is not None and y is not None)
            regs[a[0]] = serialize(Pair(x, y)) if st.flag else EMPTY
        elif op == "rchoice":
            x = de(get(a[2]))
            st.flag = int(x is not None and a[1] in (0, 1))
            regs[a[0]] = serialize(Choice(a[1], x)) if st.flag else EMPTY
        elif op in ("rfst", "rsnd"):
            x = de(get(a[1]))
            st.flag = int(isinstance(x, Pair))
            regs[a[0]] = serialize(x.first if op == "rfst" else x.second) if st.flag else EMPTY
        elif op == "rtag":
            x = de(get(a[1]))
            st.flag = int(isinstance(x, Choice))
            regs[a[0]] = OrdSet([x.index]) if st.flag else EMPTY
        elif op == "rbody":
            x = de(get(a[1]))
            st.flag = int(isinstance(x, Choice))
            regs[a[0]] = serialize(x.body) if st.flag else EMPTY
        elif op == "rprog":
            regs[a[0]] = serialize(ProgParam(prog.with_entry(a[1]), get(a[2])))
            st.flag = 1
        else:  # pragma: no cover
            raise MalformedOperand(f"unknown op {op}")

    def _code_op(self, st, op, a, get):
        """Computations on set codes and length-prefixed lists; flag 0 on bad input."""
        from .formula import FuelExhausted, NotDelta0, UnboundVariable, eval_bounded
        from .setcode import encode, tc

        regs = st.regs
        val, ok = EMPTY, 1
        try:
            if op == "isomega":
                # the code of omega is infinite, so no finite register holds it
                st.flag = 0
                return
            if op == "ccanon":
                x = get(a[0])
                st.flag = int(_well_formed(x) and encode(decode(as_code(x))).code == x)
                return
            if op == "cpair":
                val = encode(frozenset({_dec(get(a[1])), _dec(get(a[2]))})).code
            elif op == "cunion":
                val = encode(frozenset().union(*_dec(get(a[1])))).code
            elif op == "csep":
                env = env_decode(get(a[4]))
                f = _formula(a[3])
                keep = []
                for m in member_codes(as_code(get(a[1]))):
                    if eval_bounded(f, {**env, a[2]: m}):
                        keep.append(decode(m))
                val = encode(frozenset(keep)).code
            elif op == "cset":
                val = encode(frozenset(_dec(c) for c in unseq(get(a[1])))).code
            elif op == "cfun":
                pairs = [(_dec(project(e, 0)), _dec(project(e, 1))) for e in unseq(get(a[1]))]
                val = encode(frozenset(kpair(x, y) for x, y in pairs)).code
            elif op == "capp":
                f, y = _dec(get(a[1])), _dec(get(a[2]))
                hits = [v for v in _fun_values(f, y)]
                if len(hits) != 1:
                    ok = 0
                else:
                    val = encode(hits[0]).code
            elif op == "tclist":
                x = _dec(get(a[1]))
                from .setcode import hf_key

                val = seq([encode(u).code for u in sorted(tc(x) | {x}, key=hf_key)])
            elif op == "members":
                from .setcode import hf_key

                val = seq([encode(u).code for u in sorted(_dec(get(a[1])), key=hf_key)])
            elif op == "sel":
                want = set(unseq(get(a[2])))
                val = seq([e for e in unseq(get(a[1])) if project(e, 0) in want])
            elif op == "keys":
                val = seq([project(e, 0) for e in unseq(get(a[1]))])
            elif op == "at":
                items, k = unseq(get(a[1])), _small(get(a[2]))
                if k is None or k >= len(items):
                    ok = 0
                else:
                    val = items[k]
            elif op == "push":
                val = seq(list(unseq(get(a[1]))) + [get(a[2])])
        except (ValueError, IllFormedCode, UnboundVariable, NotDelta0, FuelExhausted):
            val, ok = EMPTY, 0
        st.flag = ok
        regs[a[0]] = val

    def _exec(self, p: OrdSet, ctx: OrdSet, cand: OrdSet, meter) -> int:
        from .realizers import ProgParam, try_deserialize

        r = try_deserialize(p)
        if not isinstance(r, ProgParam):
            return 0
        bit, _ = self.run(r.program, r.param, ctx, cand, meter)
        return bit

    # -- recognition inside the machine -------------------------------------
    def predict(self, prog: MacroProgram, param, ctx, meter) -> list[OrdSet]:
        """Candidates the program is built to accept, found without a candidate."""
        if not self.config.seed_predictions:
            return []
        out = []
        if prog.seed:
            st = self.start(prog, prog.seed)
            try:
                bit, val = self.resume(prog, st, param, ctx, _UNKNOWN, meter)
                if bit == 1:
                    out.append(val)
            except (_NeedsCandidate, MalformedOperand):
                pass
        st, done = self.run_prefix(prog, param, ctx, meter)
        if done is None:
            ins = st.proc.body[st.pc]
            if ins.op == "cmpcand":
                val = ins.args[0] if isinstance(ins.args[0], OrdSet) else st.regs.get(ins.args[0])
                if val is not None:
                    out.append(val)
        return list(dict.fromkeys(out))

    def find(self, p: OrdSet, ctx: OrdSet, meter) -> OrdSet | None:
        from .realizers import ProgParam, try_deserialize

        r = try_deserialize(p)
        if not isinstance(r, ProgParam):
            return None
        cands = list(dict.fromkeys(list(self.config.pool) + self.predict(r.program, r.param, ctx, meter)))
        hits = [z for z in cands if self.run(r.program, r.param, ctx, z, meter)[0] == 1]
        return hits[0] if len(hits) == 1 else None


@lru_cache(maxsize=4096)
def _formula(text: str):
    from .formula import parse_formula

    return parse_formula(text)


def _label(proc: Proc, name: str) -> int:
    for lab, idx in proc.labels:
        if lab == name:
            return idx
    raise MalformedOperand(f"no label {name!r}")


_CODE_OPS = frozenset({"cpair", "cunion", "csep", "cset", "cfun", "capp", "ccanon", "tclist", "members",
                       "isomega", "sel", "keys", "at", "push"})


def kpair(a, b) -> frozenset:
    """Kuratowski ordered pair of two hereditarily finite sets."""
    return frozenset({frozenset({a}), frozenset({a, b})})


def _fun_values(f, y):
    return [v for p in f for v in _hf_union(p) if p == kpair(y, v)]


def _hf_union(p):
    return frozenset().union(*p) if p else frozenset()


def _dec(x: OrdSet):
    if not _well_formed(x):
        raise IllFormedCode("not a well-formed code")
    return decode(as_code(x))


def _small(x: OrdSet):
    if len(x) == 1 and x.elems[0].is_finite:
        return int(x.elems[0])
    if not x:
        return 0
    return None


@lru_cache(maxsize=65536)
def _well_formed(x: OrdSet) -> bool:
    try:
        decode_all(as_code(x))
        return True
    except (IllFormedCode, ValueError):
        return False


def _codeq(x: OrdSet, y: OrdSet) -> int:
    if not (_well_formed(x) and _well_formed(y)):
        return 0
    return code_eq(as_code(x), as_code(y))


# -- public entry points -------------------------------------------------------------

def macro_run(p: MacroProgram, oracle: OrdSet = EMPTY, param: OrdSet = EMPTY, fuel: int = 1_000_000,
              *, context: OrdSet | None = None, candidate: OrdSet | None = None,
              config: VMConfig = DEFAULT_CONFIG, entry: str | None = None) -> RunResult:
    """Run a macro program; pass ``context``/``candidate`` to supply the oracle in two halves."""
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    if candidate is None:
        candidate = oracle
    vm = Machine(config)
    meter = _Meter(fuel)
    try:
        bit, out = vm.run(p, param, context, candidate, meter, entry)
    except _OutOfFuel:
        return fuel_exhausted(meter.used)
    return halted(bit, out, meter.used)


def run_candidates(p: MacroProgram, param: OrdSet, context: OrdSet | None, candidates, fuel: int,
                   config: VMConfig = DEFAULT_CONFIG) -> list[RunResult]:
    """One run per candidate sharing the candidate-independent prefix."""
    vm = Machine(config)
    meter = _Meter(fuel)
    prefix_state = None
    try:
        prefix_state, done = vm.run_prefix(p, param, context, meter)
    except _OutOfFuel:
        return [fuel_exhausted(meter.used) for _ in candidates]
    except MalformedOperand as exc:
        return [RunResult("malformed", None, EMPTY, meter.used, str(exc)) for _ in candidates]
    base = meter.used
    if done is not None:
        return [halted(done[0], done[1], base) for _ in candidates]
    out = []
    for z in candidates:
        key = (p.text, None, param, context, z, vm._ckey)
        hit = _MEMO.get(key)
        if hit is not None and hit[2] <= fuel:
            out.append(halted(hit[0], hit[1], hit[2]))
            continue
        m = _Meter(fuel - base)
        try:
            bit, res = vm.resume(p, prefix_state.copy(), param, context, z, m)
        except _OutOfFuel:
            out.append(fuel_exhausted(base + m.used))
            continue
        except MalformedOperand as exc:
            out.append(RunResult("malformed", None, EMPTY, base + m.used, str(exc)))
            continue
        _MEMO[key] = (bit, res, base + m.used)
        out.append(halted(bit, res, base + m.used))
    return out


def predict(p: MacroProgram, param: OrdSet, context: OrdSet | None, config: VMConfig = DEFAULT_CONFIG,
            fuel: int = 1_000_000) -> list[OrdSet]:
    vm = Machine(config)
    try:
        return vm.predict(p, param, context, _Meter(fuel))
    except (_OutOfFuel, MalformedOperand):
        return []
