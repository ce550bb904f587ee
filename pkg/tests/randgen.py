"""Seeded random generators for programs, theories, and formulas."""

from __future__ import annotations

import random

from aelab.syntax import (
    And, Const, Eq, Exists, Forall, Formula, Implies, Modal, Neq, Not, Or,
    Pred, Program, Rule, Theory, Var,
)

CONSTS = ("a", "b", "c")
VARS = ("X", "Y")


def random_program(rng: random.Random, max_consts: int = 3, max_preds: int = 3,
                   max_rules: int = 4, max_ground_atoms: int = 12,
                   disjunctive: bool = True, allow_vars: bool = True,
                   positive: bool = False, force_safe: bool = False,
                   ground: bool = False) -> Program:
    """Function-free program within the documented size bounds."""
    while True:
        consts = list(CONSTS[:rng.randint(1, max_consts)])
        pool = [("p", 1), ("q", 1), ("r", 0), ("s", 1)]
        preds = pool[:rng.randint(2, max_preds)]

        def atom(allow_var: bool) -> Pred:
            sym, ar = rng.choice(preds)
            if ar == 0:
                return Pred(sym)
            if allow_var and allow_vars and not ground and rng.random() < 0.45:
                return Pred(sym, (Var(rng.choice(VARS)),))
            return Pred(sym, (Const(rng.choice(consts)),))

        rules = []
        for _ in range(rng.randint(1, max_rules)):
            head_n = 2 if disjunctive and rng.random() < 0.25 else 1
            head = tuple(atom(True) for _ in range(head_n))
            pos = tuple(atom(True) for _ in range(rng.randint(0, 2)))
            neg = () if positive else tuple(
                atom(True) for _ in range(rng.randint(0, 1)))
            rules.append(Rule(head, pos, neg))
        program = Program.of(rules, consts)
        if force_safe and not program.is_safe:
            continue
        n_atoms = sum(len(program.signature.constants) ** ar
                      for _, ar in program.signature.predicates)
        if n_atoms <= max_ground_atoms:
            return program


def random_formula(rng: random.Random, depth: int = 3, modal: bool = True,
                   vars_in_scope: tuple[str, ...] = (),
                   atomic_scopes: bool = False) -> Formula:
    """Random (possibly open) formula over a fixed small signature; with
    `atomic_scopes` belief atoms only wrap atomic formulas."""

    def term_in(scope: tuple[str, ...]):
        if scope and rng.random() < 0.5:
            return Var(rng.choice(scope))
        return Const(rng.choice(CONSTS[:2]))

    def leaf(scope: tuple[str, ...]) -> Formula:
        kind = rng.random()
        if kind < 0.6:
            sym, ar = rng.choice((("p", 1), ("q", 1), ("r", 0)))
            args = () if ar == 0 else (term_in(scope),)
            return Pred(sym, args)
        if kind < 0.8:
            return Eq(term_in(scope), term_in(scope))
        return Neq(term_in(scope), term_in(scope))

    def go(d: int, scope: tuple[str, ...]) -> Formula:
        if d <= 0 or rng.random() < 0.3:
            return leaf(scope)
        roll = rng.random()
        if roll < 0.18:
            return Not(go(d - 1, scope))
        if roll < 0.36:
            return And(go(d - 1, scope), go(d - 1, scope))
        if roll < 0.52:
            return Or(go(d - 1, scope), go(d - 1, scope))
        if roll < 0.66:
            return Implies(go(d - 1, scope), go(d - 1, scope))
        if roll < 0.78 and modal:
            inner = leaf(scope) if atomic_scopes else go(d - 1, scope)
            if atomic_scopes and isinstance(inner, Neq):
                inner = Eq(inner.lhs, inner.rhs)
            return Modal(inner)
        v = rng.choice(VARS)
        node = Forall if rng.random() < 0.5 else Exists
        return node(v, go(d - 1, scope + (v,)))

    return go(depth, vars_in_scope)


def random_sentence(rng: random.Random, depth: int = 3, modal: bool = True) -> Formula:
    from aelab.syntax import universal_closure
    return universal_closure(random_formula(rng, depth, modal))


def random_prop_theory(rng: random.Random, max_formulas: int = 3) -> Theory:
    syms = ("p0", "q0", "r0")

    def go(d: int) -> Formula:
        if d <= 0 or rng.random() < 0.4:
            return Pred(rng.choice(syms))
        roll = rng.random()
        if roll < 0.3:
            return Not(go(d - 1))
        if roll < 0.6:
            return Or(go(d - 1), go(d - 1))
        if roll < 0.8:
            return And(go(d - 1), go(d - 1))
        return Implies(go(d - 1), go(d - 1))

    return Theory(tuple(go(2) for _ in range(rng.randint(1, max_formulas))))


def random_horn_theory(rng: random.Random, max_formulas: int = 4,
                       n_consts: int = 2, ghorn: bool = False) -> Theory:
    consts = CONSTS[:n_consts]
    unary = ("p", "q", "s")

    def atom(vs: tuple[str, ...]) -> Pred:
        sym = rng.choice(unary)
        if vs and rng.random() < 0.6:
            return Pred(sym, (Var(rng.choice(vs)),))
        return Pred(sym, (Const(rng.choice(consts)),))

    out: list[Formula] = []
    for _ in range(rng.randint(1, max_formulas)):
        roll = rng.random()
        if roll < 0.4:
            out.append(Pred(rng.choice(unary), (Const(rng.choice(consts)),)))
        elif ghorn and roll < 0.55:
            out.append(Exists("Y", Pred(rng.choice(unary), (Var("Y"),))))
        else:
            body = [atom(("X",)) for _ in range(rng.randint(1, 2))]
            conj = body[0]
            for b in body[1:]:
                conj = And(conj, b)
            if ghorn and rng.random() < 0.4:
                head: Formula = Exists("Y", Pred(rng.choice(unary), (Var("Y"),)))
            else:
                head = atom(("X",))
            out.append(Forall("X", Implies(conj, head)))
    return Theory(tuple(out))


def random_fol_theory(rng: random.Random, max_formulas: int = 3) -> Theory:
    out = []
    for _ in range(rng.randint(1, max_formulas)):
        out.append(random_sentence(rng, depth=2, modal=False))
    return Theory(tuple(out))
