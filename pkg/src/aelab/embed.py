"""The six rule embeddings into the modal language, the default-uniqueness
and positive-introspection axiom schemas, and the theory/program combiner.

Variants: HP translates a rule body objectively, EB guards every positive
body atom with a belief atom, EH additionally asserts belief of the head.
The disjunctive variants HPv/EBv add the positive-introspection axioms; EHv
carries belief atoms inside the disjunctive head instead.  Each variant comes
with or without the default-uniqueness axioms over the program's names.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CapExceeded, ModalNotAllowed, NotNormal
from .syntax import (
    And, Caps, DEFAULT_CAPS, Eq, Forall, Formula, Implies, Modal, Neq, Not,
    Program, Rule, Signature, Theory, Var, conj, disj, ground_atoms,
    universal_closure,
)

VARIANTS = ("hp", "eb", "eh", "hp-v", "eb-v", "eh-v")


@dataclass(frozen=True)
class EmbeddingVariant:
    """One of hp/eb/eh (normal rules only) or hp-v/eb-v/eh-v, with or without
    the default-uniqueness axioms."""

    name: str
    with_una: bool = True

    def __post_init__(self) -> None:
        if self.name not in VARIANTS:
            raise ValueError(f"unknown embedding variant {self.name!r}")

    @property
    def disjunctive(self) -> bool:
        return self.name.endswith("-v")

    @property
    def base(self) -> str:
        return self.name.split("-")[0]

    @property
    def with_pia(self) -> bool:
        return self.name in ("hp-v", "eb-v")

    def label(self) -> str:
        return self.name if self.with_una else f"{self.name} (no una)"


HP = EmbeddingVariant("hp")
EB = EmbeddingVariant("eb")
EH = EmbeddingVariant("eh")
HPV = EmbeddingVariant("hp-v")
EBV = EmbeddingVariant("eb-v")
EHV = EmbeddingVariant("eh-v")


def embed_rule_body(rule: Rule, variant: EmbeddingVariant) -> Formula | None:
    """The antecedent of the embedded rule (None when the body is empty)."""
    if not variant.disjunctive and not rule.is_normal:
        raise NotNormal(f"variant {variant.name} requires a normal rule")
    parts: list[Formula] = []
    for b in rule.pos_body:
        if variant.base == "hp":
            parts.append(b)
        else:
            parts.append(And(b, Modal(b)))
    for c in rule.neg_body:
        parts.append(Not(Modal(c)))
    return conj(parts)


def embed_rule(rule: Rule, variant: EmbeddingVariant) -> Formula:
    """Universal closure of the variant's implication for one rule."""
    body = embed_rule_body(rule, variant)
    if variant.base == "eh":
        head_parts: list[Formula] = [And(h, Modal(h)) for h in rule.head]
    else:
        head_parts = list(rule.head)
    head = disj(head_parts)
    assert head is not None
    phi = head if body is None else Implies(body, head)
    return universal_closure(phi)


def una_axioms(signature: Signature, depth: int = 0, caps: Caps = DEFAULT_CAPS,
               quantified: bool = False) -> Theory:
    """Default uniqueness of names: one axiom per unordered pair of distinct
    names (equality atoms are symmetric and canonically oriented, so a single
    orientation covers the schema).  `quantified` swaps in the single
    quantified axiom instead of the instance schema."""
    if quantified:
        x, y = Var("X"), Var("Y")
        guard = conj([Modal(Eq(x, x)), Modal(Eq(y, y)), Not(Modal(Eq(x, y)))])
        assert guard is not None
        return Theory((Forall("X", Forall("Y", Implies(guard, Neq(x, y)))),))
    names = signature.names(depth, caps)
    out: list[Formula] = []
    for i, t1 in enumerate(names):
        for t2 in names[i + 1:]:
            out.append(Implies(Not(Modal(Eq(t1, t2))), Neq(t1, t2)))
    if len(out) > caps.max_ground_atoms * caps.max_ground_atoms:
        raise CapExceeded("too many name pairs")
    return Theory(tuple(out))


def pia_axioms(signature: Signature, depth: int = 0, caps: Caps = DEFAULT_CAPS,
               include_equalities: bool = False) -> Theory:
    """Positive introspection for every objective ground predicate atom of the
    signature (equality atoms only behind `include_equalities`)."""
    out: list[Formula] = []
    for a in ground_atoms(signature, depth, caps):
        if isinstance(a, Eq) and not include_equalities:
            continue
        out.append(Implies(a, Modal(a)))
    return Theory(tuple(out))


def embed_program(program: Program, variant: EmbeddingVariant, depth: int = 0,
                  caps: Caps = DEFAULT_CAPS, una_quantified: bool = False,
                  pia_equalities: bool = False) -> Theory:
    """Rule embeddings plus the variant's axiom schemas over the program's
    own signature."""
    if not variant.disjunctive and not program.is_normal:
        raise NotNormal(f"variant {variant.name} requires a normal program")
    formulas = [embed_rule(r, variant) for r in program.rules]
    th = Theory(tuple(dict.fromkeys(formulas)))
    if variant.with_pia:
        th = th.union(pia_axioms(program.signature, depth, caps, pia_equalities))
    if variant.with_una:
        th = th.union(una_axioms(program.signature, depth, caps, una_quantified))
    return th


def combine(theory: Theory, program: Program, variant: EmbeddingVariant,
            depth: int = 0, caps: Caps = DEFAULT_CAPS,
            allow_modal_theory: bool = False, una_quantified: bool = False,
            pia_equalities: bool = False) -> Theory:
    """Union of the first-order part and the embedded program over the joint
    signature; uniqueness/introspection axioms stay relative to the program's
    signature only."""
    if not allow_modal_theory and not theory.is_objective():
        raise ModalNotAllowed(
            "the first-order part of a combination must be objective")
    emb = embed_program(program, variant, depth, caps, una_quantified, pia_equalities)
    return theory.union(emb)


def joint_signature(theory: Theory, program: Program) -> Signature:
    return theory.signature().union(program.signature)
