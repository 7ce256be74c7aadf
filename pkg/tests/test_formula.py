import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rrealize.formula import (
    And,
    Const,
    Equal,
    Exists,
    ForAll,
    ForAllIn,
    FuelExhausted,
    Member,
    NotDelta0,
    ParseError,
    UnboundVariable,
    Var,
    classify,
    eval_bounded,
    eval_bounded_steps,
    eval_over_universe,
    free_for,
    is_delta0,
    parse_formula,
    random_delta0,
    rename,
    substitute,
    to_text,
)
from rrealize.setcode import parse_hf, universe

from strategies import rank3

E = frozenset()
U2 = universe(2)


def test_parse_examples():
    assert parse_formula("(all x in X)(x = {})") == ForAllIn("x", Var("X"), Equal(Var("x"), Const(E)))
    assert parse_formula("(ex y)(y in x)") == Exists("y", Member(Var("y"), Var("x")))
    with pytest.raises(ParseError):
        parse_formula("(all x")


@pytest.mark.parametrize("bad", ["", "x in", "(all x in {{}} )(x = x) )", "x == y", "(ex 1)(1 = 1)"])
def test_parse_rejects(bad):
    with pytest.raises(ParseError):
        parse_formula(bad)


@pytest.mark.parametrize("text, expected", [
    ("(all x in X)(x = {})", "Delta0"),
    ("(all x)(ex y)((all z in y)(z in x))", "Pi2"),
    ("((ex x)(x = x)) and ((all y)(y = y))", "Unclassified"),
    ("(ex x)(ex y)(x in y)", "Sigma1"),
    ("(ex x)(all y)(ex z)(z in y)", "Sigma3"),
    ("not (ex x)(x = x)", "Unclassified"),
])
def test_classify(text, expected):
    assert str(classify(parse_formula(text))) == expected


def test_bounded_eval_examples():
    x = parse_hf("{{}, {{}}}")
    assert eval_bounded(parse_formula("(ex y in x)(y = {})"), {"x": x})
    assert not eval_bounded(parse_formula("{} in {}"))
    assert not eval_bounded(parse_formula("(all y in x)((ex z in y)(z = z))"), {"x": parse_hf("{{}}")})


def test_bounded_eval_errors():
    with pytest.raises(NotDelta0):
        eval_bounded(parse_formula("(ex x)(x = x)"))
    with pytest.raises(UnboundVariable):
        eval_bounded(parse_formula("x = {}"))
    with pytest.raises(FuelExhausted):
        eval_bounded(parse_formula("(all y in x)(all z in x)(y = z or not y = z)"),
                     {"x": universe(3)[-1]}, fuel=3)


def test_universe_eval_examples():
    assert eval_over_universe(parse_formula("(all x)(x = x)"), U2)
    assert eval_over_universe(parse_formula("(ex x)((all y in x)(y = y) and (ex z in x)(z = z))"), U2)
    assert not eval_over_universe(parse_formula("(ex x)(x in {})"), U2)


def test_free_variables_and_substitution():
    f = parse_formula("(all y in x)(y in z)")
    assert f.free_vars == {"x", "z"}
    g = substitute(f, "x", parse_hf("{{}}"))
    assert g.free_vars == {"z"}
    assert not free_for(f, "z", "y")
    assert rename(f, "z", "w").free_vars == {"x", "w"}


def test_steps_are_counted():
    val, used = eval_bounded_steps(parse_formula("(all y in x)(y = y)"), {"x": parse_hf("{{}, {{}}}")})
    assert val and used > 0


@st.composite
def bounded_formulas(draw):
    seed = draw(st.integers(0, 2 ** 32))
    return random_delta0(random.Random(seed), depth=draw(st.integers(0, 4)), free=("p", "q"))


@given(bounded_formulas(), rank3, rank3)
def test_bounded_matches_universe_oracle(f, p, q):
    assert is_delta0(f)
    env = {"p": p, "q": q}
    assert eval_bounded(f, env) == eval_over_universe(f, universe(3), env)


@given(bounded_formulas())
def test_print_parse_roundtrip(f):
    assert parse_formula(to_text(f)) == f


@given(bounded_formulas())
def test_quantifying_a_bounded_body(f):
    g = ForAll("p", ForAll("q", f))
    assert str(classify(g)) == "Pi1"
    assert str(classify(Exists("p", And(f, f)))) == "Sigma1"
