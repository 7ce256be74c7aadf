import pytest
from hypothesis import given
from hypothesis import strategies as st

from rrealize.ordinal import OMEGA, ord_of
from rrealize.ordset import EMPTY, OrdSet, interleave
from rrealize.otm import (
    ParseError,
    _move,
    assemble_micro,
    disassemble_micro,
    eq_constant_micro,
    eq_section_micro,
    initial_config,
    loop_micro,
    micro_run,
    micro_step,
    write_then_halt_micro,
)

from strategies import finite_ordsets

# cell 0 alternates 1, 0, 1, ... in states a, b; its liminf at omega is 0, a reading
# state a never sees at successor steps, so only the limit rule reaches the halt rule
TOGGLE = """
states s a b halt
start s
halt halt
s * * * * -> 1 - S S S a
a * 1 * * -> 0 - S S S b
b * * * * -> 1 - S S S a
a * 0 * * -> - 1 S S S halt
"""


def test_write_then_halt():
    p = write_then_halt_micro()
    c = initial_config(p, EMPTY, EMPTY)
    c = micro_step(p, micro_step(p, c))
    assert c.state == p.halt
    assert c.output == {ord_of(0)}


def test_head_moves():
    assert _move(ord_of(5), "R") == 6
    assert _move(OMEGA, "L") == 0
    assert _move(ord_of(0), "L") == 0
    assert _move(OMEGA + 3, "L") == OMEGA + 2
    assert _move(ord_of(4), "S") == 4


def test_eq_recognizer_examples():
    p = eq_constant_micro(8)
    r = micro_run(p, OrdSet([2]), OrdSet([2]))
    assert (r.status, r.output_bit) == ("halted", 1)
    r = micro_run(p, OrdSet([3]), OrdSet([2]))
    assert (r.status, r.output_bit) == ("halted", 0)


def test_loop_exhausts_fuel():
    r = micro_run(loop_micro(), fuel=100)
    assert r.status == "fuel-exhausted" and r.steps_used == 100


def test_limit_rule_takes_liminf():
    p = assemble_micro(TOGGLE)
    assert micro_run(p, fuel=60).status == "fuel-exhausted"
    r = micro_run(p, fuel=60, omega_jumps=1)
    assert (r.status, r.output_bit) == ("halted", 1)


def test_limit_with_unbounded_marks_is_undetermined():
    p = assemble_micro("""
        states m halt
        start m
        halt halt
        m * * * * -> 1 - R S S m
    """)
    r = micro_run(p, fuel=40, omega_jumps=1)
    assert r.status == "limit-undetermined"


def test_assembler_errors_carry_positions():
    with pytest.raises(ParseError) as e:
        assemble_micro("start a\nhalt h\na * * * * -> 1 - Q S S h\n")
    assert e.value.line == 3
    with pytest.raises(ParseError):
        assemble_micro("a * * * * -> 1 - S S S h\n")


@pytest.mark.parametrize("prog", [write_then_halt_micro(), loop_micro(), eq_constant_micro(3),
                                  eq_section_micro(2)])
def test_disassembly_roundtrip(prog):
    assert assemble_micro(disassemble_micro(prog)) == prog


@given(finite_ordsets(11), finite_ordsets(11))
def test_eq_constant_is_delta(param, oracle):
    r = micro_run(eq_constant_micro(12), oracle, param)
    assert r.output_bit == int(param == oracle)


@given(finite_ordsets(5), finite_ordsets(5))
def test_eq_section_compares_halves(a, b):
    r = micro_run(eq_section_micro(6), interleave(a, b))
    assert r.output_bit == int(a == b)


@given(st.integers(1, 30))
def test_runs_are_deterministic(fuel):
    p = assemble_micro(TOGGLE)
    assert micro_run(p, fuel=fuel) == micro_run(p, fuel=fuel)
