from __future__ import annotations

import json
import subprocess
import sys

from conftest import CORPUS


def run_cli(*args: str, env_caps: str | None = None):
    import os
    env = dict(os.environ)
    env.pop("AELAB_CAPS", None)
    if env_caps is not None:
        env["AELAB_CAPS"] = env_caps
    proc = subprocess.run([sys.executable, "-m", "aelab.cli", *args],
                          capture_output=True, text=True, env=env)
    return proc


def corpus(name: str) -> str:
    return str(CORPUS / name)


def test_stable_prints_four_models_and_exits_zero():
    proc = run_cli("stable", corpus("disjunctive_guess.lp"))
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["verdicts"]["count"] == 4
    assert ["p(a)", "p(b)", "q(a)", "r(b)"] in report["verdicts"]["stable_models"]


def test_expand_without_uniqueness_axioms_drops_default_conclusion():
    proc = run_cli("expand", "--variant", "hp", "--no-una", "--mode", "any",
                   corpus("two_names_negation.lp"))
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["expansions"] == [
        {"consistent": True, "kernel": ["p(n1)", "r(n2)"]}]
    proc_all = run_cli("expand", "--variant", "hp", "--no-una", "--mode", "all",
                       corpus("two_names_negation.lp"))
    report_all = json.loads(proc_all.stdout)
    assert report_all["expansions"][0]["kernel"] == ["p(n1)", "q", "r(n2)"]


def test_compare_reports_witness_and_exit_one():
    proc = run_cli("compare", "--level", "oga", "--variant", "hp,eb",
                   corpus("guard_chain.fot"), corpus("guard_chain.lp"))
    assert proc.returncode == 1
    report = json.loads(proc.stdout)
    assert report["verdicts"]["holds"] is False
    assert report["witnesses"][0]["probe"] == "s"


def test_embed_emits_theory_text():
    proc = run_cli("embed", "--variant", "eh-v", corpus("plain_disjunction.lp"))
    assert proc.returncode == 0
    assert proc.stdout.strip() == "p & L p | q & L q."
    from aelab.textio import parse_formula, parse_theory
    assert parse_theory(proc.stdout).formulas[0] == \
        parse_formula("(p & L p) | (q & L q)")


def test_parse_round_trip_and_error_exit_codes():
    proc = run_cli("parse", corpus("disjunctive_guess.lp"))
    assert proc.returncode == 0
    bad = CORPUS.parent / "tests" / "_bad.lp"
    bad.write_text("q :- p(X,.", encoding="utf-8")
    try:
        proc2 = run_cli("parse", str(bad))
        assert proc2.returncode == 2
        assert "expected" in proc2.stderr
    finally:
        bad.unlink()


def test_member_subcommand_consequence_field():
    proc = run_cli("member", "--variant", "hp", "--probe", "b -> a",
                   corpus("conditional_ab.lp"), "--space", "standard-names")
    report = json.loads(proc.stdout)
    assert report["verdicts"]["consequence"] is True
    proc2 = run_cli("member", "--variant", "eb", "--probe", "b -> a",
                    corpus("conditional_ab.lp"), "--space", "standard-names")
    assert json.loads(proc2.stdout)["verdicts"]["consequence"] is False


def test_invariance_and_closed_domain_exit_codes():
    ok = run_cli("invariance", "--variant", "eb",
                 "--theory", corpus("horn_facts.fot"),
                 "--program", corpus("ghorn_rules.lp"))
    assert ok.returncode == 0
    bad = run_cli("invariance", "--variant", "hp",
                  "--theory", corpus("dlsafe_neg.fot"),
                  "--program", corpus("guard_chain.lp"))
    assert bad.returncode == 1
    assert json.loads(bad.stdout)["witnesses"]

    open_domain = run_cli("closed-domain", "--variant", "hp",
                          "--program", corpus("existential_guard.lp"))
    assert open_domain.returncode == 1
    closed = run_cli("closed-domain", "--variant", "eh",
                     "--program", corpus("existential_guard.lp"))
    assert closed.returncode == 0


def test_check_table_subcommand():
    proc = run_cli("check-table1", "--theory", corpus("prop_pair.fot"),
                   "--program", corpus("prop_pair.lp"))
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["verdicts"]["theory_class"] == "prop"


def test_cap_override_exit_code():
    proc = run_cli("stable", corpus("disjunctive_guess.lp"),
                   env_caps="atoms=4")
    assert proc.returncode == 3
    proc2 = run_cli("stable", corpus("disjunctive_guess.lp"),
                    "--caps", "atoms=20", env_caps="atoms=4")
    assert proc2.returncode == 0  # flags win over the environment


def test_reports_are_deterministic():
    a = run_cli("expand", "--variant", "eb-v", corpus("disjunctive_guess.lp"))
    b = run_cli("expand", "--variant", "eb-v", corpus("disjunctive_guess.lp"))
    assert a.stdout == b.stdout
    assert json.loads(a.stdout)["timing"] is None
