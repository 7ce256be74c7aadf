import pytest

from rrealize.acceptance import _probes_ok
from rrealize.formula import NotDelta0, eval_bounded, parse_formula
from rrealize.kp import (
    AxiomInstance,
    EmptyMember,
    MalformedInstance,
    PremiseNotRealized,
    CHOICE_BODY,
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
from rrealize.ordset import EMPTY
from rrealize.realizability import CheckContext, Realized, canonical_realizer, check
from rrealize.realizers import Empty
from rrealize.setcode import as_code, decode, encode, parse_hf

E = frozenset()
S = frozenset([E])
ES = parse_hf("{{}, {{}}}")


def witness(res):
    return decode(as_code(res.witnesses[0][1]))


def verified(res):
    ctx = CheckContext(pool=res.mutation_pool)
    assert isinstance(check(res.realizer, res.formula, ctx), Realized)
    assert _probes_ok(res)[1] == 0
    return res


def test_union():
    res = verified(emit_basic(AxiomInstance("Union", (("X", parse_hf("{{{}}, {{{}}}}")),))))
    assert witness(res) == ES


def test_pairing():
    res = verified(emit_basic(AxiomInstance("Pairing", (("a", E), ("b", S)))))
    assert witness(res) == ES


def test_empty_set():
    res = verified(emit_basic(AxiomInstance("EmptySet")))
    assert res.witnesses[0][1] == encode(E).code == EMPTY


def test_mutation_pool_has_mutants():
    res = emit_basic(AxiomInstance("Pairing", (("a", E), ("b", E))))
    assert len(res.mutation_pool) >= 8
    assert res.witnesses[0][1] in res.mutation_pool


def test_missing_set_is_malformed():
    with pytest.raises(MalformedInstance):
        emit_basic(AxiomInstance("Pairing", (("a", E),)))


def test_infinity_window():
    res = emit_basic(AxiomInstance("Infinity"))
    assert _probes_ok(res)[1] == 0
    assert "symbolic_witness" in res.extra


@pytest.mark.parametrize("body, X, want", [
    ("x = {}", ES, S),
    ("x = x", ES, ES),
    ("x in {}", ES, E),
    ("x = x", E, E),
])
def test_separation(body, X, want):
    res = verified(emit_separation(parse_formula(body), {}, X))
    assert witness(res) == want


def test_separation_needs_bounded():
    with pytest.raises(NotDelta0):
        emit_separation(parse_formula("(ex y)(y = x)"), {}, ES)
    with pytest.raises(MalformedInstance):
        emit_separation(parse_formula("x = p"), {}, ES)


@pytest.mark.parametrize("body, X, want", [("y = x", ES, ES), ("y = {}", ES, S), ("y = x", E, E)])
def test_replacement(body, X, want):
    phi = parse_formula(body)
    ante, _, _, _ = replacement_formulas(phi, X, {})
    res = verified(emit_replacement(phi, {}, X, canonical_realizer(ante)))
    assert witness(res) == want


@pytest.mark.parametrize("body, y", [("a = a", S), ("(all w in a)(w = w)", parse_hf("{{{}}}"))])
def test_induction(body, y):
    phi = parse_formula(body)
    step, _, _ = induction_formulas(phi, {})
    res = verified(emit_induction(phi, {}, y, canonical_realizer(step)))
    assert res.extra["entries"] == 2 if y == S else 3


def test_induction_rejects_a_bad_premise():
    phi = parse_formula("a = a")
    with pytest.raises(PremiseNotRealized):
        emit_induction(phi, {}, S, Empty())


def test_choice_on_a_singleton():
    X = frozenset([S])
    ante, _ = choice_formulas(X)
    res = verified(emit_choice(X, canonical_realizer(ante)))
    assert choice_function(res.witnesses[0][1]) == {S: E}


def test_choice_function_property():
    X = frozenset([S, ES])
    ante, _ = choice_formulas(X)
    res = emit_choice(X, canonical_realizer(ante))
    f = choice_function(res.witnesses[0][1])
    assert set(f) == X and all(f[y] in y for y in X)
    assert eval_bounded(CHOICE_BODY, {"X": X, "f": witness(res)})


def test_choice_errors():
    with pytest.raises(EmptyMember):
        emit_choice(frozenset([E]), Empty())
    with pytest.raises(PremiseNotRealized):
        emit_choice(frozenset([S]), Empty())
