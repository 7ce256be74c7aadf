import pytest
from hypothesis import given

from rrealize.macro import (
    AssemblyError,
    assemble_macro,
    disassemble_macro,
    env_decode,
    env_encode,
    kpair,
    macro_run,
    predict,
)
from rrealize.ordset import EMPTY, OrdSet, interleave, seq, unseq
from rrealize.recognizer import EQ_CONSTANT, EQ_SECTION
from rrealize.setcode import as_code, decode, encode, parse_hf

from strategies import finite_ordsets, rank3

E = frozenset()


def run(text, **kw):
    return macro_run(assemble_macro(text), **kw)


def test_basic_examples():
    p = assemble_macro("cmporc {2}\nhalt r")
    assert sum(len(proc.body) for proc in p.procs) == 2
    assert run("cmporc {2}\nhalt r", oracle=OrdSet([2])).output_bit == 1
    assert run("cmporc {2}\nhalt r", oracle=OrdSet([3])).output_bit == 0
    r = run("l:\njmp l\n", fuel=1)
    assert (r.status, r.steps_used) == ("fuel-exhausted", 1)


def test_bounded_evaluation_on_decoded_oracle():
    text = 'read c oracle\nset e {}\nbind e e "x0" c\nd0 "(all y in x0)(y = {})" e\nhalt r\n'
    assert run(text, oracle=encode(frozenset([E])).code).output_bit == 1
    assert run(text, oracle=encode(frozenset([frozenset([E])])).code).output_bit == 0


def test_missing_operand():
    with pytest.raises(AssemblyError) as e:
        assemble_macro("halt")
    assert e.value.line == 1


@pytest.mark.parametrize("bad", ["frob r", "jmp nowhere", "read r sky", "proj a b x", ".proc\nhalt 1"])
def test_rejects_bad_text(bad):
    with pytest.raises(AssemblyError):
        assemble_macro(bad)


@pytest.mark.parametrize("prog", [EQ_CONSTANT, EQ_SECTION])
def test_roundtrip(prog):
    assert assemble_macro(disassemble_macro(prog), prog.name) == prog


def test_code_ops():
    a, b = parse_hf("{}"), parse_hf("{{}}")
    ca, cb = encode(a).code, encode(b).code
    text = ("read a oracle\nproj x a 0\nproj y a 1\ncpair c x y\nout c\nhalt 1\n")
    r = run(text, oracle=interleave(ca, cb))
    assert decode(as_code(r.output_set)) == frozenset([a, b])
    text = "read a oracle\ncunion c a\nout c\nhalt 1\n"
    x = parse_hf("{{{}}, {{}, {{}}}}")
    assert decode(as_code(run(text, oracle=encode(x).code).output_set)) == frozenset().union(*x)


def test_function_ops():
    f = frozenset([kpair(E, frozenset([E]))])
    text = "read a oracle\nproj f a 0\nproj y a 1\ncapp v f y\njz no\nout v\nhalt 1\nno:\nhalt 0\n"
    r = run(text, oracle=interleave(encode(f).code, encode(E).code))
    assert decode(as_code(r.output_set)) == frozenset([E])
    r = run(text, oracle=interleave(encode(f).code, encode(frozenset([E])).code))
    assert r.output_bit == 0


def test_list_ops():
    items = [OrdSet([1]), OrdSet([2])]
    text = f"read l oracle\nset k {{1}}\nat v l k\njz no\nout v\nhalt 1\nno:\nhalt 0\n"
    assert run(text, oracle=seq(items)).output_set == OrdSet([2])
    text = "read l oracle\nset k {5}\nat v l k\njz no\nhalt 1\nno:\nhalt 0\n"
    assert run(text, oracle=seq(items)).output_bit == 0
    text = "read l oracle\nset v {7}\npush l l v\nout l\nhalt 1\n"
    assert unseq(run(text, oracle=seq(items)).output_set) == items + [OrdSet([7])]


def test_garbage_lists_fail_softly():
    text = "read l oracle\nset k {}\nat v l k\njz no\nhalt 1\nno:\nhalt 0\n"
    r = run(text, oracle=interleave(OrdSet([10 ** 9]), EMPTY))
    assert (r.status, r.output_bit) == ("halted", 0)


def test_call_and_ret_share_registers():
    text = ".entry main\n.proc main\nset a {}\ncall f\nout a\nhalt 1\n.proc f\nset a {3}\nret\n"
    assert run(text).output_set == OrdSet([3])


def test_seed_builder_predicts():
    text = (".entry main\n.seed main build\n.proc main\nread p param\ncmpcand p\nhalt r\n"
            ".proc build\nread p param\nout p\nhalt 1\n")
    assert predict(assemble_macro(text), OrdSet([4]), None) == [OrdSet([4])]


@given(rank3, rank3)
def test_env_roundtrip(x, y):
    env = {"x": encode(x), "y": encode(y)}
    back = env_decode(env_encode(env))
    assert {k: decode(v) for k, v in back.items()} == {"x": x, "y": y}


@given(finite_ordsets(), finite_ordsets())
def test_eq_section_relative(a, b):
    r = macro_run(EQ_SECTION, context=a, candidate=b)
    assert r.output_bit == int(a == b)
