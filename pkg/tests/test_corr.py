from __future__ import annotations

from aelab.corr import (
    OGA, OG, O, Full, closed_domain_check, cn_subset_at, derived_equivalences,
    equiv_at, figure1_check, grounding_invariance, probe_family, table1_check,
)
from aelab.embed import EB, EBV, EH, EHV, HP, HPV, embed_program
from aelab.foael import Bounded, StandardNames, TheoryClass, default_bounded
from aelab.syntax import Signature, Theory
from aelab.textio import render_formula

from conftest import load_program, load_theory


def test_probe_family_ground_clauses_of_width_two():
    sig = Signature((), frozenset(), frozenset({("p", 0), ("q", 0)}))
    got = [render_formula(f) for f in probe_family(sig, OG(2))]
    assert got == ["p", "q", "-p", "-q", "p | q", "p | -q", "-p | q", "-p | -q"]


def test_probe_family_atomic_level_includes_equality():
    p = load_program("disjunctive_guess")
    fam = probe_family(p.signature, OGA())
    rendered = [render_formula(f) for f in fam]
    assert len(rendered) == 9 and rendered[-1] == "a = b"


def test_probe_family_objective_level_has_templates():
    sig = Signature(("a", "b"), frozenset(), frozenset({("p", 1), ("q", 1)}))
    rendered = {render_formula(f) for f in probe_family(sig, O(1))}
    assert "forall X. p(X)" in rendered
    assert "exists X. q(X)" in rendered
    assert "forall X. p(X) -> q(X)" in rendered


def test_probe_family_full_level_adds_belief_literals():
    sig = Signature((), frozenset(), frozenset({("p", 0)}))
    rendered = {render_formula(f) for f in probe_family(sig, Full(1))}
    assert {"L p", "-L p"} <= rendered


def test_probe_levels_are_nested():
    sig = Signature(("a",), frozenset(), frozenset({("p", 1), ("q", 0)}))
    oga = set(probe_family(sig, OGA()))
    og = set(probe_family(sig, OG(2)))
    o = set(probe_family(sig, O(2)))
    full = set(probe_family(sig, Full(2)))
    assert oga <= og <= o <= full


def test_equivalence_at_atomic_level_across_variants():
    p = load_program("disjunctive_guess")
    sp = StandardNames()
    for v1, v2 in ((HPV, EBV), (HPV, EHV), (EBV, EHV)):
        v = equiv_at(embed_program(p, v1), embed_program(p, v2), OGA(),
                     "any", sp, p.signature)
        assert v.holds and v.exact


def test_equivalence_at_ground_level_for_body_and_head_belief():
    p = load_program("conditional_ab")
    v = equiv_at(embed_program(p, EB), embed_program(p, EH), OG(2),
                 "any", StandardNames(), p.signature)
    assert v.holds


def test_non_equivalence_witnessed_by_ground_clause():
    p = load_program("conditional_ab")
    v = equiv_at(embed_program(p, HP), embed_program(p, EB), OG(2),
                 "any", StandardNames(), p.signature)
    assert not v.holds
    assert v.witness is not None and v.witness["probe"] == "a | -b"


def test_equiv_is_reflexive_and_symmetric():
    p = load_program("plain_disjunction")
    t1 = embed_program(p, HPV)
    t2 = embed_program(p, EHV)
    for lvl in (OGA(), OG(2), O(2), Full(2)):
        assert equiv_at(t1, t1, lvl, "any", StandardNames(), p.signature).holds
        a = equiv_at(t1, t2, lvl, "any", StandardNames(), p.signature).holds
        b = equiv_at(t2, t1, lvl, "any", StandardNames(), p.signature).holds
        assert a == b


def test_equivalence_implication_chain_over_levels():
    cases = [
        (load_program("conditional_ab"), HP, EB),
        (load_program("plain_disjunction"), HPV, EHV),
        (load_program("fact_then_rule"), HPV, EBV),
    ]
    order = (Full(2), O(2), OG(2), OGA())
    for p, v1, v2 in cases:
        sp = default_bounded(p.signature)
        results = [equiv_at(embed_program(p, v1), embed_program(p, v2), lvl,
                            "any", sp, p.signature).holds for lvl in order]
        for finer, coarser in zip(results, results[1:]):
            assert (not finer) or coarser


def test_equivalence_implies_consequence_equality():
    p = load_program("plain_disjunction")
    t1, t2 = embed_program(p, HPV), embed_program(p, EBV)
    lvl = OG(2)
    sp = StandardNames()
    assert equiv_at(t1, t2, lvl, "any", sp, p.signature).holds
    assert cn_subset_at(t1, t2, lvl, "any", sp, p.signature).holds
    assert cn_subset_at(t2, t1, lvl, "any", sp, p.signature).holds


def test_consequence_inclusion_weakest_variant():
    p = load_program("conditional_ab")
    sp = default_bounded(p.signature)
    v = cn_subset_at(embed_program(p, EB), embed_program(p, HP), O(2),
                     "any", sp, p.signature)
    assert v.holds


def test_consequence_non_inclusion_of_introspective_negation():
    p = load_program("conditional_ba")
    sp = default_bounded(p.signature)
    v = cn_subset_at(embed_program(p, EBV), embed_program(p, HP), O(2),
                     "any", sp, p.signature)
    assert not v.holds and v.witness["probe"] == "-a"


def test_consequence_inclusion_reflexive():
    p = load_program("open_rule")
    th = embed_program(p, HP)
    assert cn_subset_at(th, th, O(2), "any", default_bounded(p.signature),
                        p.signature).holds


def test_figure_harness_on_minimal_corpus():
    corpus = [(n, load_program(n)) for n in
              ("conditional_ab", "conditional_ba", "plain_disjunction",
               "open_rule", "unsafe_universal", "fact_then_rule")]
    report = figure1_check(corpus)
    assert report["passed"], report
    for fig in report["figures"].values():
        assert not fig["required_failures"]
        assert all(ne["witnessed_by"] for ne in fig["non_edges"])


def test_figure_harness_reports_missing_witnesses():
    corpus = [("conditional_ab", load_program("conditional_ab"))]
    report = figure1_check(corpus)
    assert not report["passed"]
    missing = [ne for fig in report["figures"].values()
               for ne in fig["non_edges"] if not ne["witnessed_by"]]
    assert missing


def test_table_derivation_for_propositional_ground_cell():
    p = load_program("prop_pair")
    derived = derived_equivalences(TheoryClass.PROP, p)
    levels = {tuple(sorted(k)): lv for k, lv in derived.items()}
    assert levels[("eb", "eh")] == "full"       # ground programs collapse them
    assert levels[("eb-v", "hp-v")] == "full"
    assert levels[("eh", "eh-v")] == "full"
    assert ("eb", "hp") not in levels


def test_table_derivation_for_empty_theory():
    p = load_program("conditional_ab")
    derived = derived_equivalences(TheoryClass.EMPTY, p)
    levels = {tuple(sorted(k)): lv for k, lv in derived.items()}
    assert levels[("eb", "hp")] == "oga"
    assert levels[("eh", "hp")] == "oga"
    assert levels[("eb", "eh")] == "full"  # ground program, arbitrary theories


def test_table_check_propositional_instance():
    report = table1_check(load_theory("prop_pair"), load_program("prop_pair"),
                          "any", Bounded(2))
    assert report["theory_class"] == "prop"
    assert report["passed"], report


def test_table_check_branching_theory_instance():
    report = table1_check(load_theory("branch_theory"), load_program("branch_rules"),
                          "any", Bounded(3))
    assert report["passed"], report
    pairs = {c["pair"] for c in report["checks"]}
    assert pairs == {"eh ~ eh-v"}


def test_grounding_invariance_for_horn_safe_positive():
    t = load_theory("horn_facts")
    p = load_program("ghorn_rules")
    for v in (HP, EB, EH):
        assert grounding_invariance(v, t, p, "any", Bounded(3)).holds


def test_grounding_invariance_trivial_for_ground_programs():
    p = load_program("prop_pair")
    assert grounding_invariance(HP, Theory(()), p, "any", Bounded(1)).holds


def test_grounding_invariance_fails_with_negation_and_new_name():
    t = load_theory("dlsafe_neg")
    p = load_program("guard_chain")
    v = grounding_invariance(HP, t, p, "any", Bounded(3))
    assert not v.holds
    assert v.witness["probe"] == "qp"


def test_closed_domain_for_guarded_bodies():
    p = load_program("existential_guard")
    for v in (EB, EH):
        assert closed_domain_check(v, Theory(()), p, "any", Bounded(2)).holds


def test_open_domain_of_objective_bodies():
    p = load_program("existential_guard")
    v = closed_domain_check(HP, Theory(()), p, "any", Bounded(2))
    assert not v.holds
    assert v.witness["rule"] == "q :- p(X)."


def test_closed_domain_trivial_for_ground_programs():
    p = load_program("prop_pair")
    for v in (HP, EB, EH):
        assert closed_domain_check(v, load_theory("prop_pair"), p, "any",
                                   Bounded(2)).holds
