from __future__ import annotations

import random

import pytest

from aelab.errors import GroundingError, SemanticError
from aelab.lp import (
    classify_program, grounding, is_stable_model, minimal_models, reduct,
    stable_models,
)
from aelab.syntax import Pred, Program
from aelab.textio import parse_program

from conftest import atoms_by_str, load_program, oracle_herbrand_models, oracle_stable_models
from randgen import random_program


def pa(s: str) -> Pred:
    return parse_program(s + ".").rules[0].head[0]


def test_grounding_instantiates_over_both_names():
    p = load_program("disjunctive_guess")
    g = grounding(p)
    heads = {tuple(str(a) for a in r.head) for r in g.rules if r.pos_body}
    assert heads == {("q(a)", "r(a)"), ("q(b)", "r(b)")}
    assert len(g.rules) == 4


def test_grounding_of_ground_program_is_identity():
    p = parse_program("p(a). q :- p(a), not r.")
    assert grounding(p).rules == p.rules


def test_grounding_unsafe_negation_over_two_names():
    p = load_program("two_names_negation")
    g = grounding(p)
    bodies = {str(r.neg_body[0]) for r in g.rules if r.neg_body}
    assert bodies == {"p(n1)", "p(n2)"}


def test_grounding_is_idempotent():
    rng = random.Random(5)
    for _ in range(25):
        p = random_program(rng)
        g = grounding(p)
        assert grounding(g) == g


def test_grounding_requires_names_for_variables():
    p = parse_program("q :- p(X).")
    with pytest.raises(GroundingError):
        grounding(p)


def test_reduct_keeps_unblocked_rules_and_strips_negation():
    p = grounding(load_program("disjunctive_guess"))
    m = {pa("p(a)"), pa("p(b)"), pa("q(a)"), pa("r(b)")}
    red = reduct(p, m)
    assert all(not r.neg_body for r in red.rules)
    assert len(red.rules) == 4  # no s-atom holds, nothing is deleted


def test_reduct_of_negation_free_program_is_identity():
    p = parse_program("p. q :- p.")
    assert reduct(p, frozenset()).rules == p.rules


def test_reduct_deletes_blocked_rule():
    p = parse_program("q :- not q.")
    assert reduct(p, {pa("q")}).rules == ()


def test_minimal_models_of_bare_disjunction():
    p = load_program("plain_disjunction")
    assert {frozenset(atoms_by_str(m)) for m in minimal_models(p)} == \
        {frozenset({"p"}), frozenset({"q"})}


def test_minimal_models_of_empty_program():
    assert minimal_models(Program((), load_program("plain_disjunction").signature)) \
        == (frozenset(),)


def test_minimal_models_fact_with_chain():
    # expected value computed by the independent brute-force model oracle
    p = parse_program("p. q :- p.")
    expected = [m for m in oracle_herbrand_models(p)
                if not any(m2 < m for m2 in oracle_herbrand_models(p))]
    assert set(minimal_models(p)) == set(expected) == {frozenset({pa("p"), pa("q")})}


def test_minimal_models_rejects_negation():
    with pytest.raises(SemanticError):
        minimal_models(parse_program("p :- not q."))


def test_stable_models_of_disjunctive_guess():
    p = load_program("disjunctive_guess")
    got = {frozenset(atoms_by_str(m)) for m in stable_models(p)}
    assert got == {
        frozenset({"p(a)", "p(b)", "q(a)", "r(b)"}),
        frozenset({"p(a)", "p(b)", "q(a)", "q(b)"}),
        frozenset({"p(a)", "p(b)", "q(b)", "r(a)"}),
        frozenset({"p(a)", "p(b)", "r(a)", "r(b)"}),
    }


def test_odd_negation_loop_has_no_stable_model():
    assert stable_models(parse_program("p :- not p.")) == ()


def test_stable_model_of_unary_default_program():
    p = load_program("unary_default")
    got = [atoms_by_str(m) for m in stable_models(p)]
    assert got == [{"q(a)", "p(a)", "r(a)"}]


def test_every_stable_model_passes_the_recheck():
    rng = random.Random(11)
    for _ in range(30):
        p = random_program(rng)
        for m in stable_models(p):
            assert is_stable_model(p, m)


def test_positive_programs_stable_equals_minimal():
    rng = random.Random(13)
    for _ in range(30):
        p = random_program(rng, positive=True)
        g = grounding(p)
        assert set(stable_models(p)) == set(minimal_models(g))


def test_stable_models_match_definition_oracle():
    rng = random.Random(17)
    for _ in range(40):
        p = random_program(rng)
        names = p.signature.names()
        assert set(stable_models(p)) == oracle_stable_models(p, names)


def test_grounding_and_stable_models_with_bounded_term_depth():
    p = parse_program("num(z). num(s(X)) :- num(X).")
    assert [str(t) for t in p.signature.names(1)] == ["z", "s(z)"]
    g = grounding(p, depth=1)
    assert len(g.rules) == 3  # the fact plus one instance per bounded name
    models = stable_models(p, depth=1)
    assert [sorted(map(str, m)) for m in models] == \
        [["num(s(s(z)))", "num(s(z))", "num(z)"]]


def test_classification_of_disjunctive_guess():
    p = load_program("disjunctive_guess")
    c = classify_program(p)
    assert (c.normal, c.positive, c.safe, c.dl_safe) == (False, False, True, True)


def test_classification_relative_to_theory_predicates():
    p = parse_program("q :- p(X).")
    c = classify_program(p, frozenset({"p"}))
    assert c.safe and c.weakly_dl_safe and not c.dl_safe


def test_ground_programs_are_safe():
    p = parse_program("p(a). q :- p(a).")
    c = classify_program(p)
    assert c.ground and c.safe


def test_classification_flag_implications():
    rng = random.Random(23)
    for _ in range(40):
        p = random_program(rng)
        c = classify_program(p, frozenset({"p"}))
        if c.ground:
            assert c.safe
        if c.dl_safe:
            assert c.weakly_dl_safe
        if c.weakly_dl_safe:
            assert c.safe
