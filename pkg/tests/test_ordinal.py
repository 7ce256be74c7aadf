import pytest
from hypothesis import given

from rrealize.acceptance import _coeffs, _oadd, _ocmp, _omul
from rrealize.ordinal import (
    OMEGA,
    Ordinal,
    OrdinalError,
    format_ordinal,
    godel_pair,
    godel_unpair,
    omega_pow,
    ord_add,
    ord_cmp,
    ord_mul,
    ord_of,
    ord_sub,
    parse_ordinal,
)

from strategies import small_ordinals

W = OMEGA


def test_arithmetic_examples():
    assert W + 1 == parse_ordinal("w+1")
    assert 1 + W == W
    assert 2 * W == W
    assert W * 2 == W + W
    assert format_ordinal(W * 2) == "w*2"


def test_comparisons():
    assert ord_cmp(W, 5) == 1
    assert ord_cmp(W + 1, W + 1) == 0
    assert ord_cmp(W * 2, omega_pow(2)) == -1


@pytest.mark.parametrize("text,norm", [("0", "0"), ("5", "5"), ("w", "w"), ("w^2*3+w+4", "w^2*3+w+4"),
                                       ("w^(w+1)", "w^(w+1)"), ("w*2 + 3", "w*2+3"), ("w^1", "w"),
                                       ("w^0*7", "7")])
def test_parse_normalizes(text, norm):
    assert format_ordinal(parse_ordinal(text)) == norm


@pytest.mark.parametrize("bad", ["", "w^", "w*", "(w", "-1", "2^w", "w++1"])
def test_parse_rejects(bad):
    with pytest.raises((OrdinalError, ValueError)):
        parse_ordinal(bad)


def test_parse_evaluates_non_normal_sums():
    assert format_ordinal(parse_ordinal("3+w^2")) == "w^2"
    assert format_ordinal(parse_ordinal("w^2+w^2")) == "w^2*2"


def test_pairing_examples():
    assert godel_pair(0, 0) == 0
    assert godel_pair(1, 0) == 2
    assert godel_pair(2, 1) == 7
    assert godel_unpair(0) == (0, 0)
    assert godel_unpair(2) == (1, 0)
    assert godel_unpair(7) == (2, 1)


def test_pairing_enumeration_oracle():
    order = sorted(((a, b) for a in range(12) for b in range(12)), key=lambda p: (max(p), p))
    assert [int(godel_pair(a, b)) for a, b in order] == list(range(144))


def test_pairing_on_infinite_arguments():
    a, b = W, ord_of(3)
    assert godel_unpair(godel_pair(a, b)) == (a, b)
    assert godel_pair(a, b) > godel_pair(5, 5)


def test_subtraction():
    assert ord_sub(W + 3, W) == 3
    assert ord_sub(W * 2, 4) == W * 2
    with pytest.raises(OrdinalError):
        ord_sub(3, W)


def test_negative_rejected():
    with pytest.raises(OrdinalError):
        Ordinal(-1)


@given(small_ordinals(), small_ordinals())
def test_agrees_with_coefficient_oracle(a, b):
    ca, cb = _coeffs(a), _coeffs(b)
    assert _coeffs(ord_add(a, b)) == _oadd(ca, cb)
    assert _coeffs(ord_mul(a, b)) == _omul(ca, cb)
    assert ord_cmp(a, b) == _ocmp(ca, cb)


@given(small_ordinals(), small_ordinals(), small_ordinals())
def test_algebra(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a <= a + b
    if b > 0:
        assert a < a + b


@given(small_ordinals(), small_ordinals())
def test_subtraction_inverts_addition(a, b):
    assert ord_sub(a + b, a) == b


@given(small_ordinals(2, 3))
def test_format_parse_roundtrip(a):
    assert parse_ordinal(format_ordinal(a)) == a


@given(small_ordinals(1, 6), small_ordinals(1, 6))
def test_pair_roundtrip(a, b):
    assert godel_unpair(godel_pair(a, b)) == (a, b)
