import pytest
from hypothesis import given

from rrealize.ordset import EMPTY, OrdSet
from rrealize.setcode import (
    EMPTYSET,
    IllFormedCode,
    IndexOutOfRange,
    OmegaCode,
    SetCode,
    all_enumerations,
    as_code,
    code_eq,
    decode,
    derived_code,
    encode,
    encode_with,
    format_hf,
    index_of,
    is_well_formed,
    member_codes,
    parse_code,
    parse_hf,
    rank,
    tc,
    tc_code,
    von_neumann,
)

from strategies import hf_sets

E = EMPTYSET
S = frozenset


def test_encoding_examples():
    c = encode(S([E]))
    assert (c.code, int(c.domain)) == (OrdSet([2]), 2)
    c = encode(S([S([E])]))
    assert (c.code, int(c.domain)) == (OrdSet([2, 7]), 3)
    assert encode(E).code == EMPTY
    assert decode(as_code(OrdSet([2]))) == S([E])
    assert decode(as_code(EMPTY)) == E


def test_derived_codes_of_pair():
    x = S([E, S([E])])
    c = encode(x)
    assert decode(derived_code(c, index_of(c, E))) == E
    assert decode(derived_code(c, index_of(c, S([E])))) == S([E])
    with pytest.raises(IndexOutOfRange):
        derived_code(c, 9)


def test_code_eq_across_enumerations():
    x = S([E, S([E])])
    codes = [encode_with(x, order) for order in all_enumerations(x)]
    assert len({c.code for c in codes}) > 1
    assert all(code_eq(codes[0], d) for d in codes)
    assert code_eq(encode(E), encode(S([E]))) == 0


def test_tc_code():
    x = S([S([E])])
    assert decode(tc_code(encode(x))) == S([S([E]), E])
    assert decode(tc_code(encode(E))) == E


def test_ill_formed_codes():
    with pytest.raises(IllFormedCode):
        decode(as_code(OrdSet([0])))  # index 0 inside itself
    assert not is_well_formed(SetCode(OrdSet([2]), encode(E).domain))
    # domain far larger than the code: rejected without allocating it
    with pytest.raises(IllFormedCode):
        decode(SetCode(OrdSet([2]), parse_code("domain=100000000000\n{2}").domain))


def test_parse_code_file():
    c = parse_code("# code\ndomain=3\n{2, 7}\n")
    assert decode(c) == S([S([E])])


def test_omega_code():
    om = OmegaCode()
    for k in range(6):
        assert decode(om.member_code(k)) == von_neumann(k)
    assert 2 in om and 0 not in om


def test_hf_text():
    x = parse_hf("{{}, {{}}}")
    assert x == S([E, S([E])])
    assert parse_hf(format_hf(x)) == x
    with pytest.raises(ValueError):
        parse_hf("{{}")


@given(hf_sets)
def test_roundtrip(x):
    c = encode(x)
    assert decode(c) == x
    assert int(c.domain) == len(tc(x)) + 1


@given(hf_sets)
def test_member_codes_decode_to_members(x):
    got = sorted(map(format_hf, (decode(c) for c in member_codes(encode(x)))))
    assert got == sorted(map(format_hf, x))


@given(hf_sets)
def test_rank_is_one_more_than_members(x):
    assert rank(x) == max((rank(y) + 1 for y in x), default=0)
