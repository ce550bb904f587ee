"""Classical semantics of disjunctive logic programs.

Grounding, the reduct, minimal Herbrand models, stable models and syntactic
classification.  The stable-model search is deliberately an exhaustive
candidate check over subsets of ground atoms (desk scale, oracle grade);
reflexive equalities that formally belong to every Herbrand model are kept
implicit throughout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import CapExceeded, GroundingError, SemanticError
from .syntax import (
    Caps, DEFAULT_CAPS, Pred, Program, Rule, Term, atom_key, free_vars,
    ground_atoms,
)

HerbrandInterpretation = frozenset[Pred]


def _subst_atom(a: Pred, beta: dict[str, Term]) -> Pred:
    from .syntax import apply_substitution
    out = apply_substitution(a, beta)
    assert isinstance(out, Pred)
    return out


def grounding(program: Program, depth: int = 0, caps: Caps = DEFAULT_CAPS) -> Program:
    """All ground instantiations of the rules over the program's own names."""
    # raises CapExceeded early if the atom base is too large
    ground_atoms(program.signature, depth, caps)
    names = program.signature.names(depth, caps)
    rules: list[Rule] = []
    for r in program.rules:
        vs = sorted(r.variables())
        if not vs:
            if r not in rules:
                rules.append(r)
            continue
        if not names:
            raise GroundingError(
                f"rule has variables {vs} but the signature has no names")
        for combo in itertools.product(names, repeat=len(vs)):
            beta = dict(zip(vs, combo))
            inst = Rule(
                tuple(_subst_atom(a, beta) for a in r.head),
                tuple(_subst_atom(a, beta) for a in r.pos_body),
                tuple(_subst_atom(a, beta) for a in r.neg_body),
            )
            if inst not in rules:
                rules.append(inst)
    return Program(tuple(rules), program.signature)


def reduct(ground_program: Program, interpretation: Iterable[Pred]) -> Program:
    """Delete rules whose negative body intersects the interpretation, strip
    `not` literals from the rest."""
    m = frozenset(interpretation)
    rules = []
    for r in ground_program.rules:
        if not r.is_ground:
            raise SemanticError("reduct requires a ground program")
        if any(c in m for c in r.neg_body):
            continue
        rules.append(Rule(r.head, r.pos_body, ()))
    return Program(tuple(rules), ground_program.signature)


def _head_atoms(rules: Iterable[Rule]) -> tuple[Pred, ...]:
    seen: list[Pred] = []
    for r in rules:
        for a in r.head:
            if a not in seen:
                seen.append(a)
    return tuple(sorted(seen, key=atom_key))


def _mask_of(atoms: Iterable[Pred], index: dict[Pred, int]) -> int:
    m = 0
    for a in atoms:
        if a in index:
            m |= 1 << index[a]
    return m


def _candidate_masks(n: int, caps: Caps) -> np.ndarray:
    if (1 << n) > caps.max_interpretations:
        raise CapExceeded(
            f"2^{n} candidate interpretations exceeds cap {caps.max_interpretations}")
    return np.arange(1 << n, dtype=np.int64)


def minimal_models(ground_program: Program, caps: Caps = DEFAULT_CAPS
                   ) -> tuple[HerbrandInterpretation, ...]:
    """All subset-minimal Herbrand models of a positive ground program."""
    for r in ground_program.rules:
        if not r.is_positive or not r.is_ground:
            raise SemanticError("minimal_models requires a positive ground program")
    # minimal models only ever contain head atoms; body atoms outside the
    # head set are false in every candidate, which the rule test reflects
    heads = _head_atoms(ground_program.rules)
    index = {a: i for i, a in enumerate(heads)}
    masks = _candidate_masks(len(heads), caps)
    ok = np.ones(len(masks), dtype=bool)
    for r in ground_program.rules:
        if any(a not in index for a in r.pos_body):
            continue  # body atom can never hold
        pos = _mask_of(r.pos_body, index)
        head = _mask_of(r.head, index)
        ok &= ((masks & pos) != pos) | ((masks & head) != 0)
    models = masks[ok]
    out = []
    for m in models.tolist():
        strictly_below = models[(models & m) == models]
        if len(strictly_below) == 1:  # only m itself
            out.append(m)
        elif not np.any(strictly_below != m):
            out.append(m)
    result = [frozenset(a for a in heads if m & (1 << index[a])) for m in out]
    return tuple(sorted(result, key=lambda s: sorted(map(atom_key, s))))


def is_stable_model(program: Program, candidate: Iterable[Pred],
                    depth: int = 0, caps: Caps = DEFAULT_CAPS) -> bool:
    """Re-check one candidate: is it a minimal Herbrand model of its reduct?"""
    m = frozenset(candidate)
    red = reduct(grounding(program, depth, caps), m)
    return m in set(minimal_models(red, caps))


def stable_models(program: Program, depth: int = 0, caps: Caps = DEFAULT_CAPS
                  ) -> tuple[HerbrandInterpretation, ...]:
    """All stable models, by enumerating candidate subsets of ground atoms and
    verifying each against its reduct.  Reported without reflexive equalities."""
    pg = grounding(program, depth, caps)
    heads = _head_atoms(pg.rules)
    index = {a: i for i, a in enumerate(heads)}
    masks = _candidate_masks(len(heads), caps)

    # a stable model is a minimal model of its reduct, hence a subset of heads
    ok = np.ones(len(masks), dtype=bool)
    triples = []
    for r in pg.rules:
        pos = _mask_of(r.pos_body, index)
        head = _mask_of(r.head, index)
        neg = _mask_of(r.neg_body, index)
        pos_unsat = any(a not in index for a in r.pos_body)
        triples.append((pos, head, neg, pos_unsat))
        if pos_unsat:
            continue
        ok &= ((masks & neg) != 0) | ((masks & pos) != pos) | ((masks & head) != 0)
    candidates = masks[ok]

    out = []
    for m in candidates.tolist():
        sub = masks[(masks & m) == masks]
        good = np.ones(len(sub), dtype=bool)
        for pos, head, neg, pos_unsat in triples:
            if pos_unsat or (neg & m) != 0:
                continue
            good &= ((sub & pos) != pos) | ((sub & head) != 0)
        smaller = sub[good & (sub != m)]
        if len(smaller) == 0:
            out.append(frozenset(a for a in heads if m & (1 << index[a])))
    return tuple(sorted(out, key=lambda s: sorted(map(atom_key, s))))


@dataclass(frozen=True)
class ProgramClass:
    normal: bool
    positive: bool
    safe: bool
    ground: bool
    dl_safe: bool
    weakly_dl_safe: bool


def classify_program(program: Program, theory_predicates: frozenset[str] = frozenset()
                     ) -> ProgramClass:
    """Syntactic flags; rule atoms are those whose predicate does not occur in
    the theory (`theory_predicates`)."""
    safe = program.is_safe
    dl_safe = safe
    weakly = safe
    for r in program.rules:
        rule_atom_vars: set[str] = set()
        other_vars: set[str] = set()
        for a in r.pos_body:
            if a.symbol in theory_predicates:
                other_vars |= free_vars(a)
            else:
                rule_atom_vars |= free_vars(a)
        for v in r.variables():
            if v not in rule_atom_vars:
                dl_safe = False
                if v not in other_vars:
                    weakly = weakly and v in rule_atom_vars
    return ProgramClass(
        normal=program.is_normal,
        positive=program.is_positive,
        safe=safe,
        ground=program.is_ground,
        dl_safe=dl_safe and safe,
        weakly_dl_safe=weakly and safe,
    )
