import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rrealize.formula import parse_formula
from rrealize.ordset import OrdSet
from rrealize.realizability import (
    CheckContext,
    NotTrue,
    Realized,
    Refuted,
    Unknown,
    canonical_realizer,
    check,
    combine,
    holds,
)
from rrealize.realizers import (
    Choice,
    Empty,
    Leaf,
    MalformedSerialization,
    Pair,
    ProgParam,
    deserialize,
    serialize,
)
from rrealize.recognizer import EQ_CONSTANT
from rrealize.setcode import encode, parse_hf

E = frozenset()


def f(text):
    return parse_formula(text)


def test_check_examples():
    assert isinstance(check(Empty(), f("{} = {}")), Realized)
    assert isinstance(check(Choice(0, Empty()), f("({} = {}) or ({} in {})")), Realized)
    for r in [Empty(), Pair(Empty(), Empty()), Choice(1, Empty())]:
        assert isinstance(check(r, f("{} in {}")), Refuted)


def test_wrong_disjunct_is_refuted():
    assert isinstance(check(Choice(1, Empty()), f("({} = {}) or ({} in {})")), Refuted)


def test_conjunction_needs_a_pair():
    g = f("{} = {} and {} in {{}}")
    assert isinstance(check(Pair(Empty(), Empty()), g), Realized)
    assert isinstance(check(Empty(), g), Refuted)


def test_canonical_examples():
    assert canonical_realizer(f("{} = {}")) == Empty()
    g = f("(ex y in x)(y = {})")
    env = {"x": parse_hf("{{}}")}
    r = canonical_realizer(g, env)
    assert isinstance(r, ProgParam)
    closed = f("(ex y in {{}})(y = {})")
    assert isinstance(check(r, closed), Realized)
    with pytest.raises(NotTrue):
        canonical_realizer(f("{} in {}"))


@pytest.mark.parametrize("text", [
    "{} in {{}}",
    "(all x in {{}, {{}}})(x = x)",
    "(ex x)(x = {})",
    "(all x)(x = x)",
    "{} = {} -> {} in {{}}",
    "(all x)(ex y)(y = x)",
    "not {} in {}",
])
def test_canonical_realizers_check(text):
    g = f(text)
    assert holds(g)
    assert isinstance(check(canonical_realizer(g), g), Realized)


def test_serialization_examples():
    assert deserialize(serialize(Empty())) == Empty()
    assert deserialize(serialize(Pair(Empty(), Empty()))) == Pair(Empty(), Empty())
    with pytest.raises(MalformedSerialization):
        deserialize(OrdSet([1]))


def test_combine_prefers_refutation():
    r, u = Refuted("no", ("a",)), Unknown("fuel", ())
    assert combine([Realized(), u, r]) is r
    assert combine([Realized(), u]) is u
    assert isinstance(combine([]), Realized)


def test_context_seeds_pool():
    ctx = CheckContext()
    assert encode(parse_hf("{{}}")).code in ctx.pool
    g = f("{} = {}")
    ctx.register(g, Leaf(OrdSet([3])))
    assert serialize(Leaf(OrdSet([3]))) in ctx.pool


realizers = st.recursive(
    st.builds(Empty) | st.builds(Leaf, st.frozensets(st.integers(0, 40), max_size=4).map(OrdSet)),
    lambda kids: st.builds(Pair, kids, kids) | st.builds(Choice, st.integers(0, 1), kids)
    | st.builds(ProgParam, st.just(EQ_CONSTANT), st.frozensets(st.integers(0, 9), max_size=3).map(OrdSet)),
    max_leaves=6,
)


@given(realizers)
def test_serialization_roundtrip(r):
    assert deserialize(serialize(r)) == r


@settings(max_examples=25)
@given(st.sampled_from(["{} = {}", "{} in {{}}", "(all x in {{}})(x = {})", "(ex x in {{}, {{}}})(x = {{}})"]),
       realizers)
def test_true_bounded_formulas_never_refute_their_canonical(text, _):
    g = f(text)
    assert isinstance(check(canonical_realizer(g), g), Realized)


def test_sentences_false_in_the_universe_are_refuted():
    g = f("(all x)(ex y)(x in y)")
    assert not holds(g)
    assert not isinstance(check(Empty(), g), Realized)
