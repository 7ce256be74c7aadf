import pytest
from hypothesis import given
from hypothesis import strategies as st

from rrealize.macro import assemble_macro
from rrealize.ordset import EMPTY, OrdSet, interleave, project
from rrealize.recognizer import (
    ACCEPT_ALL,
    EQ_CONSTANT,
    EQ_SECTION,
    REJECT_ALL,
    Ambiguous,
    CandidatePool,
    EmptyChain,
    Recognizer,
    Recognizes,
    RejectsAll,
    Undefined,
    Undetermined,
    accept_bits,
    chain_package,
    eq_constant,
    mutants,
    rho,
    test_recognizer as run_test,
)

from strategies import finite_ordsets

POOL = [EMPTY, OrdSet([2]), OrdSet([3])]


def test_basic_verdicts():
    assert run_test(eq_constant(OrdSet([2])), POOL) == Recognizes(OrdSet([2]))
    assert isinstance(run_test(Recognizer(REJECT_ALL), POOL), RejectsAll)
    assert isinstance(run_test(Recognizer(ACCEPT_ALL), POOL[:2]), Ambiguous)


def test_undetermined_on_fuel():
    loop = assemble_macro("l:\njmp l\n")
    assert isinstance(run_test(Recognizer(loop), POOL, fuel=10), Undetermined)


def test_rho():
    z = interleave(OrdSet([1]), OrdSet([4]))
    assert rho(eq_constant(z), POOL + [z]) == (OrdSet([1]), OrdSet([4]))
    out = rho(eq_constant(OrdSet([9])), POOL)
    assert isinstance(out, Undefined) and isinstance(out.verdict, RejectsAll)
    assert isinstance(rho(Recognizer(ACCEPT_ALL), POOL).verdict, Ambiguous)


def test_single_link_chain():
    rec, z = chain_package([(eq_constant(OrdSet([5])), OrdSet([5]))])
    assert project(z, 0) == OrdSet([5])
    assert run_test(rec, [z] + mutants(z), EMPTY) == Recognizes(z)


def test_two_link_chain():
    x, y = OrdSet([1]), OrdSet([2])
    rec, z = chain_package([(eq_constant(x), x), (eq_constant(y), y)])
    pool = [z] + mutants(z, 8)
    assert len(pool) == 9
    assert sum(accept_bits(rec, pool, EMPTY)) == 1
    assert run_test(rec, pool, EMPTY) == Recognizes(z)
    assert project(z, 0) == x


def test_chain_through_the_base():
    base = OrdSet([0, 6])
    rec, z = chain_package([(eq_constant(OrdSet([1])), OrdSet([1])), (Recognizer(EQ_SECTION), base)])
    assert run_test(rec, [z] + mutants(z), base) == Recognizes(z)
    other = OrdSet([0])
    assert accept_bits(rec, [z], other) == [0]
    # a mutant can itself be a valid chain ending at the other base
    verdict = run_test(rec, [z] + mutants(z), other)
    assert not (isinstance(verdict, Recognizes) and verdict.witness == z)


def test_empty_chain():
    with pytest.raises(EmptyChain):
        chain_package([])


def test_pool_dedupes_and_parses():
    pool = CandidatePool([EMPTY, EMPTY, OrdSet([1])])
    assert len(pool) == 2
    assert list(CandidatePool.parse(pool.dump())) == list(pool)


@given(finite_ordsets(), st.integers(1, 12))
def test_mutants_are_distinct_single_edits(z, n):
    ms = mutants(z, n)
    assert len(ms) == n and len(set(ms)) == n and z not in ms
    for m in ms:
        assert len(set(m.elems) ^ set(z.elems)) == 1


@given(st.lists(finite_ordsets(), min_size=1, max_size=8, unique=True), st.data())
def test_delta_law(pool, data):
    c = data.draw(st.sampled_from(pool))
    assert accept_bits(Recognizer(EQ_CONSTANT, c), pool) == [int(c == y) for y in pool]
    assert accept_bits(Recognizer(EQ_SECTION), pool, relative_to=c) == [int(c == y) for y in pool]
