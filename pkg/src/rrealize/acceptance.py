"""Desk-scale acceptance suites, shared by the test suite and ``selftest``.

Each criterion returns an :class:`Outcome`.  Oracles used here are written
independently of the code under test (coefficient lists for ordinals, brute
force over decoded sets for the set-theoretic claims).
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from .formula import (
    Not,
    eval_bounded,
    eval_over_universe,
    parse_formula,
    random_delta0,
)
from .ordinal import Ordinal, godel_pair, godel_unpair, omega_pow, ord_add, ord_cmp, ord_mul, ord_of
from .ordset import OrdSet, interleave, project
from .realizability import (
    CheckContext,
    NotTrue,
    Realized,
    Refuted,
    Unknown,
    canonical_delta0_realizer,
    canonical_realizer,
    check,
    probe_family,
)
from .recognizer import (
    EQ_CONSTANT,
    EQ_SECTION,
    Recognizer,
    Recognizes,
    accept_bits,
    chain_package,
    mutants,
    test_recognizer,
)
from .setcode import (
    as_code,
    decode,
    decode_all,
    derived_code,
    encode,
    hf_key,
    rank,
    tc,
    universe,
    von_neumann,
)


@dataclass
class Outcome:
    number: int
    title: str
    passed: bool
    seconds: float
    limit: float
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number:2d} {self.title}: {self.detail} ({self.seconds:.1f}s, limit {self.limit:g}s)"


@dataclass
class Corpus:
    """Every (formula, verdict) pair the suites produced; read by the non-contradiction check."""

    verdicts: dict = field(default_factory=dict)

    def record(self, f, verdict):
        self.verdicts.setdefault(f, set()).add(type(verdict).__name__)

    def realized(self):
        return [f for f, v in self.verdicts.items() if "Realized" in v]


CORPUS = Corpus()


def _timed(number, title, limit, fn) -> Outcome:
    t = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failed criterion, reported with its cause
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t
    if ok and dt > limit:
        ok, detail = False, f"{detail}; over the time limit"
    return Outcome(number, title, ok, dt, limit, detail)


def _check(r, f, ctx):
    v = check(r, f, ctx)
    CORPUS.record(f, v)
    return v


# -- 1. ordinal arithmetic against coefficient lists --------------------------------------

def _coeffs(a: Ordinal) -> tuple:
    """Coefficients (c0, c1, ...) of omega^0, omega^1, ... for ordinals below omega^omega."""
    out = {}
    for e, c in a.terms:
        out[int(e)] = c
    top = max(out, default=-1)
    return tuple(out.get(i, 0) for i in range(top + 1))


def _trim(c):
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def _lead(c):
    return len(c) - 1


def _oadd(a, b):
    if not b:
        return a
    e = _lead(b)
    out = list(b)
    if e < len(a):
        out[e] += a[e]
        out += list(a[e + 1:])
    return _trim(out)


def _omul(a, b):
    if not a or not b:
        return ()
    out = ()
    da = _lead(a)
    for e in range(len(b) - 1, -1, -1):
        c = b[e]
        if not c:
            continue
        if e > 0:
            term = [0] * (da + e) + [c]
        else:
            term = list(a)
            term[da] = a[da] * c
        out = _oadd(out, tuple(term))
    return _trim(out)


def _ocmp(a, b):
    if len(a) != len(b):
        return -1 if len(a) < len(b) else 1
    for x, y in zip(reversed(a), reversed(b)):
        if x != y:
            return -1 if x < y else 1
    return 0


def _from_coeffs(c) -> Ordinal:
    out = ord_of(0)
    for e in range(len(c) - 1, -1, -1):
        if c[e]:
            out = ord_add(out, omega_pow(e, c[e]))
    return out


def criterion_ordinals():
    vals = [_trim((c, b, a)) for a in range(5) for b in range(5) for c in range(5)]
    ords = [_from_coeffs(v) for v in vals]
    bad = 0
    for (va, oa), (vb, ob) in itertools.product(zip(vals, ords), repeat=2):
        if _coeffs(ord_add(oa, ob)) != _oadd(va, vb):
            bad += 1
        if _coeffs(ord_mul(oa, ob)) != _omul(va, vb):
            bad += 1
        if ord_cmp(oa, ob) != _ocmp(va, vb):
            bad += 1
    n = len(vals) ** 2
    return bad == 0, f"{n} pairs, {bad} disagreements"


# -- 2. pairing --------------------------------------------------------------------------------

def criterion_pairing():
    bad = 0
    pairs = [(a, b) for a in range(100) for b in range(100)]
    for a, b in pairs:
        i, j = godel_unpair(godel_pair(a, b))
        bad += (int(i), int(j)) != (a, b)
    for c in range(1000):
        bad += int(godel_pair(*godel_unpair(c))) != c
    ranked = sorted(pairs, key=lambda p: (max(p), p))
    codes = [int(godel_pair(a, b)) for a, b in ranked]
    mono = all(x < y for x, y in zip(codes, codes[1:]))
    onto = codes == list(range(len(codes)))
    return bad == 0 and mono and onto, f"{bad} roundtrip failures, monotone={mono}, onto an initial segment={onto}"


# -- 3. interleave and projections -------------------------------------------------------------

def _subset(mask: int) -> OrdSet:
    return OrdSet([i for i in range(8) if mask >> i & 1])


def criterion_interleave():
    bad = 0
    subsets = [_subset(m) for m in range(256)]
    for a in subsets:
        for b in subsets:
            x = interleave(a, b)
            bad += project(x, 0) != a or project(x, 1) != b
    rng = random.Random(3)
    for _ in range(500):
        def rand_set():
            return OrdSet({ord_add(ord_mul(ord_of(rng.randrange(5)), omega_pow(1)), ord_of(rng.randrange(8)))
                           for _ in range(rng.randrange(8))})
        a, b = rand_set(), rand_set()
        x = interleave(a, b)
        bad += project(x, 0) != a or project(x, 1) != b or interleave(project(x, 0), project(x, 1)) != x
    return bad == 0, f"{256 * 256 + 500} cases, {bad} failures"


# -- 4. set codes ------------------------------------------------------------------------------

def _rank4_samples(n: int, seed: int = 11) -> list:
    rng = random.Random(seed)
    v4 = universe(3)
    top = [x for x in v4 if rank(x) == 3]
    out = set()
    while len(out) < n:
        picks = {rng.choice(top)} | {rng.choice(v4) for _ in range(rng.randrange(6))}
        out.add(frozenset(picks))
    return sorted(out, key=hf_key)


def criterion_setcodes():
    bad = 0
    sets = list(universe(3)) + _rank4_samples(1000)
    for x in sets:
        c = encode(x)
        bad += decode(c) != x
    coherence = 0
    for x in universe(3):
        c = encode(x)
        vals = decode_all(c)
        for k in range(len(vals)):
            coherence += 1
            bad += decode(derived_code(c, k)) != vals[k]
    return bad == 0, f"{len(sets)} roundtrips, {coherence} derived codes, {bad} failures"


# -- 5. bounded evaluation against brute force ------------------------------------------------

def criterion_delta0():
    rng = random.Random(5)
    univ = universe(3)
    bad = 0
    for _ in range(500):
        f = random_delta0(rng, 3, free=("p", "q"), consts=univ)
        env = {"p": rng.choice(univ), "q": rng.choice(univ)}
        bad += eval_bounded(f, env) != eval_over_universe(f, univ, env)
    return bad == 0, f"500 formulas, {bad} disagreements"


# -- 6. truth lemma -----------------------------------------------------------------------------

def _sentences(seed: int, n: int):
    rng = random.Random(seed)
    true, false = [], []
    while len(true) < n or len(false) < n:
        f = random_delta0(rng, 3)
        (true if eval_bounded(f) else false).append(f)
    return true[:n], false[:n]


def criterion_truth_lemma():
    true, false = _sentences(7, 300)
    ctx = CheckContext(fuel=1_000_000)
    miss = sum(not isinstance(_check(canonical_delta0_realizer(f), f, ctx), Realized) for f in true)
    leaks = 0
    probes = 0
    for f in false:
        for r in probe_family(f):
            probes += 1
            leaks += not isinstance(_check(r, f, ctx), Refuted)
    return miss == 0 and leaks == 0, (f"{len(true)} true sentences ({miss} not realized), {len(false)} false "
                                      f"sentences x probes = {probes} ({leaks} not refuted)")


# -- 7. recognizers ---------------------------------------------------------------------------

def _proj_recognizer():
    from .macro import assemble_macro

    prog = assemble_macro("read c ctx\nproj p c 0\ncmpcand p\nhalt r\n", "proj-section")
    return prog


def criterion_recognizers():
    from .otm import eq_constant_micro

    pool = [encode(x).code for x in universe(3)][:12]
    bad = 0
    for c in pool:
        want = [int(c == y) for y in pool]
        bad += accept_bits(Recognizer(EQ_CONSTANT, c), pool) != want
        bad += accept_bits(Recognizer(eq_constant_micro(16), c), pool) != want
        bad += accept_bits(Recognizer(EQ_SECTION), pool, relative_to=c) != want
    proj = _proj_recognizer()
    values = [OrdSet([1]), OrdSet([0, 3]), interleave(OrdSet([2]), OrdSet([5])), OrdSet([4, 6, 9])]

    def link(kind, val, above):
        if kind == "const":
            return Recognizer(EQ_CONSTANT, val), val
        if kind == "section":
            return Recognizer(EQ_SECTION), above
        return Recognizer(proj), project(above, 0)

    chains = ambiguous = 0
    for base in values:
        for k1, k0 in itertools.product(("const", "section", "proj"), repeat=2):
            for val in values:
                r1, x1 = link(k1, val, base)
                r0, x0 = link(k0, val, x1)
                rec, z = chain_package([(r0, x0), (r1, x1)])
                verdict = test_recognizer(rec, [z] + mutants(z, 7) + values, relative_to=base)
                chains += 1
                ambiguous += type(verdict).__name__ == "Ambiguous"
                bad += not (isinstance(verdict, Recognizes) and verdict.witness == z
                            and project(z, 0) == x0)
    return bad == 0 and ambiguous == 0, (f"delta law on {len(pool)}-candidate pools, {chains} two-link chains, "
                                         f"{bad} failures, {ambiguous} ambiguous")


# -- 8. KP emission ---------------------------------------------------------------------------

SEPARATION_BODIES = ["x = {}", "{} in x", "not x = {}", "(all w in x)(w = {})", "(ex w in x)(ex v in w)(v = v)",
                     "x in p"]
REPLACEMENT_BODIES = {
    "y = x": lambda x: x,
    "y = {}": lambda x: frozenset(),
    "x in y and (all w in y)(w = x)": lambda x: frozenset([x]),
    "(all w in y)(w = {}) and {} in y": lambda x: frozenset([frozenset()]),
}


def _probes_ok(res) -> tuple[int, int]:
    """(probes run, failures) with every single-element deletion of the first witness added to the pool."""
    extra = []
    if res.witnesses:
        w = res.witnesses[0][1]
        if isinstance(w, OrdSet) and len(w) <= 64:
            extra = mutants(w, len(w) + 8)
    pool = list(res.mutation_pool) + extra
    bad = 0
    for pr in res.probes:
        v = test_recognizer(pr.recognizer, pool, pr.context)
        if pr.witness is None:
            bad += type(v).__name__ != "RejectsAll"
        else:
            bad += not (isinstance(v, Recognizes) and v.witness == pr.witness)
    return len(res.probes), bad


def kp_instances():
    """(axiom, label, thunk) triples: each thunk returns (EmissionResult, oracle_ok)."""
    from .kp import (
        AxiomInstance,
        choice_formulas,
        choice_function,
        emit_basic,
        emit_choice,
        emit_induction,
        emit_replacement,
        emit_separation,
        induction_formulas,
        replacement_formulas,
    )

    u2, u3 = universe(2), universe(3)
    out = []

    def code_of(res):
        return decode(as_code(res.witnesses[0][1]))

    pairs = list(itertools.product(u2, repeat=2)) + [(u3[5], u3[9]), (u3[15], u3[15]), (u3[15], u3[0]),
                                                     (u3[7], u3[11])]
    for a, b in pairs[:20]:
        out.append(("Extensionality", f"{to_text_set(a)}, {to_text_set(b)}",
                    lambda a=a, b=b: (emit_basic(AxiomInstance("Extensionality", (("a", a), ("b", b)))), True)))
    out.append(("Extensionality", "closed", lambda: (emit_basic(AxiomInstance("Extensionality")), True)))
    for a, b in list(itertools.product(u3[:5], repeat=2))[:20]:
        def pairing(a=a, b=b):
            res = emit_basic(AxiomInstance("Pairing", (("a", a), ("b", b))))
            return res, code_of(res) == frozenset([a, b])
        out.append(("Pairing", f"{to_text_set(a)}, {to_text_set(b)}", pairing))
    out.append(("EmptySet", "", lambda: (lambda r: (r, code_of(r) == frozenset()))(emit_basic(
        AxiomInstance("EmptySet")))))
    unions = list(u3) + _rank4_samples(4, seed=2)
    for X in unions:
        def union(X=X):
            res = emit_basic(AxiomInstance("Union", (("X", X),)))
            return res, code_of(res) == frozenset().union(*X)
        out.append(("Union", to_text_set(X), union))
    out.append(("Infinity", "", _infinity_instance))
    seps = [(b, X) for b in SEPARATION_BODIES for X in (u3[3], u3[7], u3[11], u3[15])]
    for body, X in seps[:24]:
        def sep(body=body, X=X):
            phi = parse_formula(body)
            params = {"p": u3[6]} if "p" in phi.free_vars else {}
            res = emit_separation(phi, params, X)
            want = frozenset(x for x in X if eval_over_universe(phi, u3, {**params, "x": x}))
            return res, code_of(res) == want
        out.append(("Delta0Separation", f"{body} over {to_text_set(X)}", sep))
    reps = [(b, X) for b in REPLACEMENT_BODIES for X in (u3[1], u3[3], u3[6], u3[10], u3[13])]
    for body, X in reps[:20]:
        def rep(body=body, X=X):
            phi = parse_formula(body)
            ante, _, _, _ = replacement_formulas(phi, X, {})
            res = emit_replacement(phi, {}, X, canonical_realizer(ante))
            image = frozenset(y for y in u3 for x in X if eval_over_universe(phi, u3, {"x": x, "y": y}))
            return res, code_of(res) == image and image == frozenset(REPLACEMENT_BODIES[body](x) for x in X)
        out.append(("Replacement", f"{body} over {to_text_set(X)}", rep))
    for body in ("a = a", "(all w in a)(w = w)"):
        for y in u3[:10]:
            def ind(body=body, y=y):
                phi = parse_formula(body)
                step, _, _ = induction_formulas(phi, {})
                res = emit_induction(phi, {}, y, canonical_realizer(step))
                return res, res.extra["entries"] == len(tc(frozenset([y])))
            out.append(("EpsilonInduction", f"{body} at {to_text_set(y)}", ind))
    choice_sets = [frozenset([y]) for y in u3[1:16]] + [frozenset([u3[1], u3[2]]), frozenset([u3[2], u3[5]]),
                                                        frozenset([u3[3], u3[4]]), frozenset([u3[1], u3[6]]),
                                                        frozenset([u3[2], u3[3], u3[9]])]
    for X in choice_sets:
        def ac(X=X):
            ante, _ = choice_formulas(X)
            res = emit_choice(X, canonical_realizer(ante))
            fn = choice_function(res.witnesses[0][1])
            return res, set(fn) == set(X) and all(fn[y] in y for y in X)
        out.append(("Choice", to_text_set(X), ac))
    return out


def to_text_set(x) -> str:
    from .setcode import format_hf

    return format_hf(x)


def _infinity_instance():
    from .kp import AxiomInstance, emit_basic

    res = emit_basic(AxiomInstance("Infinity"))
    omega = res.extra["symbolic_witness"]
    window = res.witnesses[0][1]
    brute = OrdSet([e for e in range(64) if (lambda i, j: i >= 1 and (j == 0 or i < j))(
        *map(int, godel_unpair(e)))])
    ok = window == brute and all(decode(omega.member_code(k)) == von_neumann(k) for k in range(6))
    return res, ok


def criterion_kp(limit: float):
    counts, failures = {}, []
    t0 = time.perf_counter()
    for axiom, label, thunk in kp_instances():
        res, oracle_ok = thunk()
        ctx = CheckContext(pool=res.mutation_pool)
        v = _check(res.realizer, res.formula, ctx)
        want = Unknown if axiom == "Infinity" else Realized
        _, bad = _probes_ok(res)
        counts[axiom] = counts.get(axiom, 0) + 1
        if not (isinstance(v, want) and oracle_ok and bad == 0):
            failures.append(f"{axiom}[{label}]: {v}, oracle={oracle_ok}, probe failures={bad}")
        if time.perf_counter() - t0 > limit:
            failures.append("stopped at the time limit")
            break
    few = {a: n for a, n in counts.items() if n < 20 and a not in ("EmptySet", "Infinity")}
    detail = ", ".join(f"{a}={n}" for a, n in counts.items())
    if few:
        failures.append(f"too few instances: {few}")
    return not failures, detail + ("; " + "; ".join(failures[:3]) if failures else "")


# -- 9. epsilon induction -------------------------------------------------------------------

def criterion_induction():
    from .kp import INDUCTION, emit_induction, induction_formulas, induction_realizer, pack_table, table_entries
    from .macro import macro_run
    from .realizers import serialize

    bodies = ["a = a", "(all w in a)(w = w)"]
    runs = corrupted = bad = 0
    for body in bodies:
        phi = parse_formula(body)
        step, _, scheme = induction_formulas(phi, {})
        premise = canonical_realizer(step)
        for y in universe(3):
            res = emit_induction(phi, {}, y, premise)
            runs += 1
            ctx = CheckContext(pool=res.mutation_pool)
            table = res.witnesses[0][1]
            entries = table_entries(table)
            if len(entries) != len(tc(frozenset([y]))):
                bad += 1
            if not isinstance(_check(res.realizer, res.formula, ctx), Realized):
                bad += 1
            context = interleave(encode(y).code, OrdSet())
            rp = serialize(premise)
            for i, (k, lt, z1, e) in enumerate(entries):
                for part in range(4):
                    row = [k, lt, z1, e]
                    row[part] = mutants(row[part], 1)[0]
                    broken = list(entries)
                    broken[i] = tuple(row)
                    r = macro_run(INDUCTION, param=rp, candidate=pack_table(broken), context=context,
                                  entry="s", fuel=1_000_000)
                    corrupted += 1
                    bad += r.accepted
        bad += not isinstance(_check(induction_realizer(), scheme, CheckContext()), Realized)
    return bad == 0, f"{runs} emissions, {corrupted} corrupted tables, {bad} failures"


# -- 10. proofs --------------------------------------------------------------------------------

A, B, C = "{} = {}", "{} in {{}}", "{{}} = {{}}"
PROOF_CORPUS = {
    "identity": f'axiom P1 phi="{A}" psi="{A} -> {A}"\naxiom P2 phi="{A}" psi="{A} -> {A}" xi="{A}"\nmp 1 2\n'
                f'axiom P1 phi="{A}" psi="{A}"\nmp 4 3\n',
    "identity-b": f'axiom P1 phi="{B}" psi="{B} -> {B}"\naxiom P2 phi="{B}" psi="{B} -> {B}" xi="{B}"\nmp 1 2\n'
                  f'axiom P1 phi="{B}" psi="{B}"\nmp 4 3\n',
    "mp": f"premise {A}\npremise {A} -> {B}\nmp 1 2\n",
    "mp-chain": f"premise {A}\npremise {A} -> {B}\nmp 1 2\npremise {B} -> {C}\nmp 3 4\n",
    "conjunction": f'premise {A}\npremise {B}\naxiom P3 phi="{A}" psi="{B}"\nmp 1 3\nmp 2 4\n',
    "projection": f'premise {A} and {B}\naxiom P4 phi="{A}" psi="{B}" side=1\nmp 1 2\n',
    "injection": f'premise {B}\naxiom P5 phi="{A}" psi="{B}" side=1\nmp 1 2\n',
    "cases": f'premise {A} or {B}\naxiom P6 phi="{A}" psi="{B}" xi="{C}"\nmp 1 2\npremise {A} -> {C}\nmp 4 3\n'
             f'premise {B} -> {C}\nmp 6 5\n',
    "syllogism": f'premise {B} -> {C}\naxiom P1 phi="{B} -> {C}" psi="{A}"\nmp 1 2\n'
                 f'axiom P2 phi="{A}" psi="{B}" xi="{C}"\nmp 3 4\npremise {A} -> {B}\nmp 6 5\n',
    "reductio": f'axiom P7 phi="{{}} in {{}}" psi="{A}"\n',
    "explosion": f'axiom P8 phi="{A}" psi="{B}"\n',
    "weakening": f'premise {C}\naxiom P1 phi="{C}" psi="{B}"\nmp 1 2\n',
    "genimp": f'axiom P1 phi="y = y" psi="{A}"\naxiom Q3 x=y\nmp 2 1\ngenimp 3 x y\n',
    "genimp-q1": 'axiom Q1 phi="x = x" x=x t=y\ngenimp 1 w y\n',
    "exelim": 'axiom Q3 x=z\naxiom P1 phi="z = z" psi="y in {{}}"\nmp 1 2\nexelim 3 x y\n',
    "exelim-q2": 'axiom Q2 phi="x in {{}}" x=x t=y\nexelim 1 w y\n',
    "open-mp": 'axiom Q3 x=y\naxiom P1 phi="y = y" psi="y in {{}}"\nmp 1 2\n',
    "leibniz": 'axiom Q4 phi="x in {{}}" x=x s=y t=y\naxiom Q3 x=y\nmp 2 1\n',
    "instance": 'axiom Q1 phi="x = x" x=x t=x\n',
    "witness": 'axiom Q2 phi="x = x" x=x t=x\n',
    "pair-then-project": f'premise {A}\npremise {C}\naxiom P3 phi="{A}" psi="{C}"\nmp 1 3\nmp 2 4\n'
                         f'axiom P4 phi="{A}" psi="{C}" side=0\nmp 5 6\n',
    "genimp-then-mp": f'axiom P1 phi="y = y" psi="{A}"\naxiom Q3 x=y\nmp 2 1\ngenimp 3 x y\npremise {A}\nmp 5 4\n',
}

SCHEMA_INSTANCES = {
    "P1": [dict(phi=A, psi=B), dict(phi=B, psi=A), dict(phi=C, psi=f"{A} -> {B}"), dict(phi="y = y", psi=A),
           dict(phi=f"{A} and {B}", psi=C)],
    "P2": [dict(phi=A, psi=B, xi=C), dict(phi=B, psi=A, xi=A), dict(phi=C, psi=C, xi=B),
           dict(phi=A, psi=A, xi=A), dict(phi=B, psi=C, xi=A)],
    "P3": [dict(phi=A, psi=B), dict(phi=B, psi=C), dict(phi=C, psi=A), dict(phi="y = y", psi=A),
           dict(phi=f"{A} or {B}", psi=B)],
    "P4": [dict(phi=A, psi=B, side=0), dict(phi=A, psi=B, side=1), dict(phi=C, psi=A, side=0),
           dict(phi=B, psi=C, side=1), dict(phi="y = y", psi=A, side=0)],
    "P5": [dict(phi=A, psi=B, side=0), dict(phi=A, psi=B, side=1), dict(phi=C, psi="{} in {}", side=0),
           dict(phi="{} in {}", psi=C, side=1), dict(phi="y = y", psi=A, side=0)],
    "P6": [dict(phi=A, psi=B, xi=C), dict(phi="{} in {}", psi=B, xi=A), dict(phi=A, psi="{} in {}", xi=B),
           dict(phi=B, psi=B, xi=B), dict(phi=C, psi=A, xi=C)],
    "P7": [dict(phi="{} in {}", psi=A), dict(phi=A, psi=B), dict(phi=B, psi="{} in {}"),
           dict(phi="{{}} in {}", psi=C), dict(phi=C, psi=C)],
    "P8": [dict(phi=A, psi=B), dict(phi=B, psi="{} in {}"), dict(phi="{} in {}", psi=A), dict(phi=C, psi=C),
           dict(phi=f"{A} and {B}", psi=A)],
    "Q1": [dict(phi="x = x", x="x", t="y"), dict(phi="x in {{}} -> x = {}", x="x", t="y"),
           dict(phi="x = x", x="x", t="x"), dict(phi="(all w in x)(w = w)", x="x", t="z"),
           dict(phi="x = {} or not x = {}", x="x", t="y")],
    "Q2": [dict(phi="x in {{}}", x="x", t="y"), dict(phi="x = x", x="x", t="y"),
           dict(phi="x = {}", x="x", t="x"), dict(phi="(ex w in x)(w = w)", x="x", t="z"),
           dict(phi="x = x and {} = {}", x="x", t="y")],
    "Q3": [dict(x="x"), dict(x="y"), dict(x="z"), dict(x="w"), dict(x="u")],
    "Q4": [dict(phi="x in {{}}", x="x", s="y", t="y"), dict(phi="x = {}", x="x", s="y", t="z"),
           dict(phi="{} in x", x="x", s="u", t="v"), dict(phi="x = x", x="x", s="y", t="y"),
           dict(phi="x in {{},{{}}}", x="x", s="y", t="z")],
}


def _premise_realizers(p):
    from .proofcalc import Premise

    out = {}
    for s in p.steps:
        if isinstance(s, Premise):
            out[s.formula] = canonical_realizer(s.formula)
    return out


def criterion_proofs():
    from .proofcalc import ExtractionEnv, check_proof, extract, instance_formula, parse_proof, realize_axiom

    bad = []
    for name, text in PROOF_CORPUS.items():
        p = parse_proof(text)
        res = check_proof(p)
        if not res:
            bad.append(f"{name}: {res}")
            continue
        ctx = CheckContext()
        r = extract(p, ExtractionEnv(_premise_realizers(p), ctx))
        v = _check(r, res.conclusion, CheckContext())
        if not isinstance(v, Realized):
            bad.append(f"{name}: {v}")
    schema_runs = 0
    for schema, rows in SCHEMA_INSTANCES.items():
        for b in rows:
            b = {k: str(v) for k, v in b.items()}
            f = instance_formula(schema, b)
            v = _check(realize_axiom(schema, b), f, CheckContext())
            schema_runs += 1
            if not isinstance(v, Realized):
                bad.append(f"{schema} {b}: {v}")
    return not bad, (f"{len(PROOF_CORPUS)} proofs, {schema_runs} schema instances"
                     + ("; " + "; ".join(bad[:3]) if bad else ""))


# -- 11. non-contradiction ---------------------------------------------------------------------

def criterion_noncontradiction():
    if not CORPUS.verdicts:
        true, false = _sentences(13, 60)
        ctx = CheckContext()
        for f in true:
            _check(canonical_delta0_realizer(f), f, ctx)
        for f in false:
            for r in probe_family(f):
                _check(r, f, ctx)
    clashes = 0
    tried = 0
    ctx = CheckContext()
    for f in CORPUS.realized():
        if f.free_vars:
            continue
        neg = Not(f)
        if "Realized" in CORPUS.verdicts.get(neg, ()):
            clashes += 1
        cands = list(probe_family(neg))
        try:
            cands.append(canonical_realizer(neg))
        except (NotTrue, ValueError):
            pass
        for r in cands:
            tried += 1
            clashes += isinstance(check(r, neg, ctx), Realized)
    return clashes == 0, f"{len(CORPUS.realized())} realized formulas, {tried} negation attempts, {clashes} clashes"


# -- 12. resource monotonicity -----------------------------------------------------------------

def monotonicity_cases():
    """50 (realizer, formula, small context, large context) cases."""
    cases = []
    true, false = _sentences(17, 20)
    for f in true[:20]:
        cases.append((canonical_delta0_realizer(f), f, CheckContext(fuel=2000), CheckContext(fuel=200_000)))
    for f in false[:15]:
        r = probe_family(f)[-1]
        cases.append((r, f, CheckContext(fuel=2000), CheckContext(fuel=200_000)))
    exists = ["(ex z)(z = {{}})", "(ex z)(z in {{},{{}}})", "(ex z)({} in z)", "(ex z)(z = z)",
              "(ex z)((all w in z)(w = {}))", "(ex z)(not z = {})", "(ex z)({{}} in z)",
              "(ex z)(z = {{{}}})", "(ex z)((ex w in z)(w = w))", "(ex z)(z = {} or z = {{}})"]
    for text in exists:
        f = parse_formula(text)
        cases.append((canonical_realizer(f), f, CheckContext(auto_seed=False), CheckContext(auto_seed=True)))
    for text in ["{} = {} -> {} in {{}}", "(all x)(x = x)", "{} in {{}} and {} = {}", "(all x in {{}})(x = {})",
                 "(all x)(x in {} -> {} = {})"]:
        f = parse_formula(text)
        cases.append((canonical_realizer(f), f, CheckContext(fuel=3), CheckContext(fuel=200_000)))
    return cases


def criterion_monotonicity():
    flips = resolved = 0
    cases = monotonicity_cases()
    for r, f, small, large in cases:
        a = _check(r, f, small)
        b = _check(r, f, large)
        if isinstance(a, (Realized, Refuted)) and type(a) is not type(b):
            flips += 1
        resolved += isinstance(a, Unknown) and not isinstance(b, Unknown)
    return flips == 0 and len(cases) >= 50, f"{len(cases)} cases, {flips} flips, {resolved} unknowns resolved"


# -- driver ---------------------------------------------------------------------------------------

CRITERIA = [
    (1, "ordinal arithmetic oracle", 10, criterion_ordinals),
    (2, "pairing bijectivity", 1, criterion_pairing),
    (3, "interleave roundtrip", 5, criterion_interleave),
    (4, "set-code roundtrip", 60, criterion_setcodes),
    (5, "bounded evaluator oracle", 60, criterion_delta0),
    (6, "truth lemma", 120, criterion_truth_lemma),
    (7, "recognizer delta law and chains", 30, criterion_recognizers),
    (8, "KP emission", 600, lambda: criterion_kp(600)),
    (9, "epsilon induction", 300, criterion_induction),
    (10, "intuitionistic closure", 300, criterion_proofs),
    (11, "non-contradiction", 120, criterion_noncontradiction),
    (12, "resource monotonicity", 120, criterion_monotonicity),
]


def run_criterion(number: int) -> Outcome:
    for n, title, limit, fn in CRITERIA:
        if n == number:
            return _timed(n, title, limit, fn)
    raise KeyError(number)


def run_all(numbers=None, echo=None) -> list[Outcome]:
    out = []
    for n, title, limit, fn in CRITERIA:
        if numbers and n not in numbers:
            continue
        o = _timed(n, title, limit, fn)
        if echo:
            echo(o.line())
        out.append(o)
    return out
