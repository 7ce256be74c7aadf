import pytest
from hypothesis import given
from hypothesis import strategies as st

from rrealize.acceptance import PROOF_CORPUS, _premise_realizers
from rrealize.formula import parse_formula
from rrealize.proofcalc import (
    ExtractionEnv,
    Invalid,
    MalformedInstance,
    PremiseNotRealized,
    Proof,
    apply_rule,
    check_proof,
    extract,
    instance_formula,
    parse_proof,
    realize_axiom,
)
from rrealize.realizability import CheckContext, Realized, canonical_realizer, check
from rrealize.realizers import Empty

A, B = "{} = {}", "{} in {{}}"
IDENTITY = PROOF_CORPUS["identity"]


def f(text):
    return parse_formula(text)


def test_identity_proof_is_valid():
    res = check_proof(parse_proof(IDENTITY))
    assert res and res.conclusion == f(f"{A} -> {A}")


def test_mp_mismatch_is_invalid():
    p = parse_proof(f"premise {A}\npremise {B} -> {A}\nmp 1 2\n")
    res = check_proof(p)
    assert isinstance(res, Invalid) and res.step == 3


def test_genimp_side_condition():
    # y is free in the antecedent
    p = parse_proof("premise y = y -> y = y\ngenimp 1 x y\n")
    assert isinstance(check_proof(p), Invalid)
    ok = parse_proof(PROOF_CORPUS["genimp"])
    assert check_proof(ok).conclusion == f(f"{A} -> (all x)(x = x)")


def test_forward_references_are_invalid():
    assert isinstance(check_proof(parse_proof(f"mp 2 3\npremise {A}\n")), Invalid)


@pytest.mark.parametrize("bad", ["axiom P9 phi=x", "mp 1", "prove it", f"premise {A} and", "axiom P1 phi"])
def test_parse_errors(bad):
    with pytest.raises(MalformedInstance):
        parse_proof(bad)


@pytest.mark.parametrize("name", sorted(PROOF_CORPUS))
def test_dump_roundtrip(name):
    p = parse_proof(PROOF_CORPUS[name])
    assert Proof.parse(p.dump()) == p


def test_p1_realizer():
    b = {"phi": A, "psi": A}
    assert isinstance(check(realize_axiom("P1", b), instance_formula("P1", b)), Realized)


def test_q3_closure():
    g = instance_formula("Q3", {"x": "x"})
    assert isinstance(check(realize_axiom("Q3", {"x": "x"}), g), Realized)


@pytest.mark.parametrize("side", ["0", "1"])
def test_p4_projections(side):
    b = {"phi": A, "psi": B, "side": side}
    assert isinstance(check(realize_axiom("P4", b), instance_formula("P4", b)), Realized)


def test_mp_rule():
    disj = f"{A} or {{}} in {{}}"
    imp = f(f"{A} -> ({disj})")
    env = ExtractionEnv()
    r = apply_rule("mp", [Empty(), canonical_realizer(imp)], (), env, [f(A), imp])
    assert isinstance(check(r, f(disj)), Realized)
    with pytest.raises(PremiseNotRealized):
        apply_rule("mp", [Empty(), Empty()], (), env, [f(A), imp])


def test_extract_identity():
    r = extract(parse_proof(IDENTITY), ExtractionEnv())
    assert isinstance(check(r, f(f"{A} -> {A}")), Realized)


def test_extract_with_premises():
    p = parse_proof(PROOF_CORPUS["mp"])
    r = extract(p, ExtractionEnv(_premise_realizers(p)))
    assert isinstance(check(r, f(B)), Realized)


def test_uncovered_premise():
    with pytest.raises(PremiseNotRealized):
        extract(parse_proof(PROOF_CORPUS["mp"]), ExtractionEnv())


def test_extract_genimp():
    p = parse_proof(PROOF_CORPUS["genimp"])
    r = extract(p, ExtractionEnv())
    assert isinstance(check(r, check_proof(p).conclusion, CheckContext()), Realized)


@given(st.sampled_from([A, B, "{{}} = {{}}", "{} in {}"]), st.sampled_from([A, B, "{} in {}"]))
def test_p1_instances_match_schema(phi, psi):
    g = instance_formula("P1", {"phi": phi, "psi": psi})
    assert g == f(f"({phi}) -> (({psi}) -> ({phi}))")
