from __future__ import annotations

import itertools
from pathlib import Path

import pytest

from aelab.syntax import Pred, Program, Rule
from aelab.textio import parse_program, parse_theory

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS


def load_program(name: str) -> Program:
    return parse_program((CORPUS / f"{name}.lp").read_text(encoding="utf-8"))


def load_theory(name: str):
    return parse_theory((CORPUS / f"{name}.fot").read_text(encoding="utf-8"))


def atoms_by_str(atoms) -> set[str]:
    return {str(a) for a in atoms}


# ---------------------------------------------------------------------------
# Independent brute-force oracles (set-based, no shared code with the package
# beyond the data model)

def oracle_herbrand_models(program: Program) -> list[frozenset[Pred]]:
    """All Herbrand models of a positive ground program by direct definition."""
    base = sorted({a for r in program.rules for a in r.head + r.pos_body},
                  key=str)
    models = []
    for bits in itertools.product((False, True), repeat=len(base)):
        m = frozenset(a for a, b in zip(base, bits) if b)
        ok = True
        for r in program.rules:
            if set(r.pos_body) <= m and not (set(r.head) & m):
                ok = False
                break
        if ok:
            models.append(m)
    return models


def oracle_stable_models(program: Program, names) -> set[frozenset[Pred]]:
    """Brute force straight from the definitions: ground all rules, then test
    every subset of the ground atoms against its reduct."""
    ground_rules: list[Rule] = []
    for r in program.rules:
        vs = sorted(r.variables())
        for combo in itertools.product(names, repeat=len(vs)):
            beta = dict(zip(vs, combo))
            from aelab.syntax import apply_substitution
            sub = lambda a: apply_substitution(a, beta)
            ground_rules.append(Rule(tuple(sub(a) for a in r.head),
                                     tuple(sub(a) for a in r.pos_body),
                                     tuple(sub(a) for a in r.neg_body)))
    base = sorted({a for r in ground_rules
                   for a in r.head + r.pos_body + r.neg_body}, key=str)
    out = set()
    for bits in itertools.product((False, True), repeat=len(base)):
        m = frozenset(a for a, b in zip(base, bits) if b)
        reduct = [Rule(r.head, r.pos_body, ())
                  for r in ground_rules if not (set(r.neg_body) & m)]
        if not all(not (set(r.pos_body) <= m) or (set(r.head) & m)
                   for r in reduct):
            continue
        minimal = True
        for bits2 in itertools.product((False, True), repeat=len(base)):
            m2 = frozenset(a for a, b in zip(base, bits2) if b)
            if m2 < m and all(not (set(r.pos_body) <= m2) or (set(r.head) & m2)
                              for r in reduct):
                minimal = False
                break
        if minimal:
            out.add(m)
    return out
