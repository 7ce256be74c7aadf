import pytest
from hypothesis import given

from rrealize.ordinal import OMEGA, ord_of
from rrealize.ordset import (
    EMPTY,
    MAX_SEQ_LEN,
    OrdSet,
    delta,
    format_ordset,
    interleave,
    pack,
    parse_ordset,
    project,
    seq,
    unpack,
    unseq,
)

from strategies import ordsets

W = OMEGA


def test_basic_examples():
    assert interleave(EMPTY, EMPTY) == EMPTY
    assert interleave(OrdSet([W]), OrdSet([W])) == OrdSet([W, W + 1])
    assert project(OrdSet([0, 1, 2]), 1) == OrdSet([0])
    assert project(OrdSet([W, W + 1]), 1) == OrdSet([W])
    assert delta(OrdSet([2]), OrdSet([2])) == 1
    assert delta(OrdSet([2]), OrdSet([3])) == 0
    assert delta(EMPTY, EMPTY) == 1


def test_project_side_checked():
    with pytest.raises(ValueError):
        project(EMPTY, 2)


def test_parse_and_format():
    x = parse_ordset("{w*2+1, 3, 0}")
    assert x == OrdSet([0, 3, W * 2 + 1])
    assert format_ordset(x) == "{0, 3, w*2+1}"
    with pytest.raises(ValueError):
        parse_ordset("{1, 2")


def test_seq_allows_trailing_empty_items():
    items = [OrdSet([1]), EMPTY, EMPTY]
    assert unseq(seq(items)) == items


def test_seq_rejects_huge_length_prefix():
    forged = interleave(OrdSet([MAX_SEQ_LEN + 1]), EMPTY)
    with pytest.raises(ValueError):
        unseq(forged)


def test_seq_rejects_non_sequences():
    with pytest.raises(ValueError):
        unseq(OrdSet([0, 2]))
    with pytest.raises(ValueError):
        unseq(interleave(OrdSet([1]), interleave(EMPTY, OrdSet([5]))))


@given(ordsets(), ordsets())
def test_interleave_roundtrip(a, b):
    x = interleave(a, b)
    assert project(x, 0) == a
    assert project(x, 1) == b


@given(ordsets())
def test_projections_recombine(x):
    assert interleave(project(x, 0), project(x, 1)) == x


@given(ordsets(4))
def test_pack_unpack(x):
    items = [x, OrdSet([ord_of(3)]), x]
    assert unpack(pack(items), 3) == items
    assert unseq(seq(items)) == items


@given(ordsets())
def test_format_roundtrip(x):
    assert parse_ordset(format_ordset(x)) == x
