"""Core data model: terms, formulas, rules, programs, theories, kernels.

All values are immutable after construction and safe to hash, share, and
compare structurally.  Equality atoms are kept in a canonical orientation
(lexicographically smaller term first) so that ``a = b`` and ``b = a`` are
one atom; reflexive equalities are never stored, they are implicitly true
everywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union

from .errors import CapExceeded, SemanticError


@dataclass(frozen=True)
class Caps:
    """Enumeration limits; exceeding one raises CapExceeded, never truncates."""

    max_ground_atoms: int = 20
    max_interpretations: int = 1 << 20
    max_kernels: int = 1 << 16
    max_probes: int = 2048


DEFAULT_CAPS = Caps()


# ---------------------------------------------------------------------------
# Terms

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Func:
    name: str
    args: tuple["Term", ...]

    def __str__(self) -> str:
        return f"{self.name}({', '.join(str(a) for a in self.args)})"


Term = Union[Var, Const, Func]


def term_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Const):
        return frozenset()
    return frozenset(v for a in t.args for v in term_vars(a))


def term_is_ground(t: Term) -> bool:
    return not term_vars(t)


def term_depth(t: Term) -> int:
    if isinstance(t, Func):
        return 1 + max((term_depth(a) for a in t.args), default=0)
    return 0


def subst_term(t: Term, beta: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return beta.get(t.name, t)
    if isinstance(t, Func):
        return Func(t.name, tuple(subst_term(a, beta) for a in t.args))
    return t


def _term_key(t: Term) -> tuple:
    if isinstance(t, Var):
        return (0, t.name)
    if isinstance(t, Const):
        return (1, t.name)
    return (2, t.name, tuple(_term_key(a) for a in t.args))


# ---------------------------------------------------------------------------
# Atoms and formulas

@dataclass(frozen=True)
class Pred:
    symbol: str
    args: tuple[Term, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.symbol
        return f"{self.symbol}({', '.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class Eq:
    """Equality atom, canonically oriented (smaller term first)."""

    lhs: Term
    rhs: Term

    def __post_init__(self) -> None:
        if _term_key(self.lhs) > _term_key(self.rhs):
            l, r = self.lhs, self.rhs
            object.__setattr__(self, "lhs", r)
            object.__setattr__(self, "rhs", l)

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


Atom = Union[Pred, Eq]


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    sub: "Formula"


@dataclass(frozen=True)
class Modal:
    """Belief atom L φ."""

    sub: "Formula"


# Sugar nodes, preserved for round-trip printing.

@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    sub: "Formula"


@dataclass(frozen=True)
class Neq:
    lhs: Term
    rhs: Term

    def __post_init__(self) -> None:
        if _term_key(self.lhs) > _term_key(self.rhs):
            l, r = self.lhs, self.rhs
            object.__setattr__(self, "lhs", r)
            object.__setattr__(self, "rhs", l)


Formula = Union[Pred, Eq, Not, And, Exists, Modal, Or, Implies, Forall, Neq]

_FORMULA_TYPES = (Pred, Eq, Not, And, Exists, Modal, Or, Implies, Forall, Neq)


def conj(parts: Iterable[Formula]) -> Optional[Formula]:
    """Left-nested conjunction of `parts` (prints without parentheses);
    None when empty."""
    parts = list(parts)
    if not parts:
        return None
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: Iterable[Formula]) -> Optional[Formula]:
    parts = list(parts)
    if not parts:
        return None
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def free_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Pred):
        return frozenset(v for a in phi.args for v in term_vars(a))
    if isinstance(phi, (Eq, Neq)):
        return term_vars(phi.lhs) | term_vars(phi.rhs)
    if isinstance(phi, (Not, Modal)):
        return free_vars(phi.sub)
    if isinstance(phi, (And, Or, Implies)):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (Exists, Forall)):
        return free_vars(phi.sub) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def apply_substitution(phi: Formula, beta: Mapping[str, Term]) -> Formula:
    """Syntactic replacement of free variables; bound occurrences untouched."""
    if not beta:
        return phi
    if isinstance(phi, Pred):
        return Pred(phi.symbol, tuple(subst_term(a, beta) for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(subst_term(phi.lhs, beta), subst_term(phi.rhs, beta))
    if isinstance(phi, Neq):
        return Neq(subst_term(phi.lhs, beta), subst_term(phi.rhs, beta))
    if isinstance(phi, Not):
        return Not(apply_substitution(phi.sub, beta))
    if isinstance(phi, Modal):
        return Modal(apply_substitution(phi.sub, beta))
    if isinstance(phi, And):
        return And(apply_substitution(phi.left, beta), apply_substitution(phi.right, beta))
    if isinstance(phi, Or):
        return Or(apply_substitution(phi.left, beta), apply_substitution(phi.right, beta))
    if isinstance(phi, Implies):
        return Implies(apply_substitution(phi.left, beta), apply_substitution(phi.right, beta))
    if isinstance(phi, (Exists, Forall)):
        inner = {v: t for v, t in beta.items() if v != phi.var}
        node = type(phi)
        return node(phi.var, apply_substitution(phi.sub, inner))
    raise TypeError(f"not a formula: {phi!r}")


def universal_closure(phi: Formula) -> Formula:
    """Quantify all free variables universally, in lexicographic order."""
    out = phi
    for v in sorted(free_vars(phi), reverse=True):
        out = Forall(v, out)
    return out


def desugar(phi: Formula) -> Formula:
    """Expand Or/Implies/Forall/Neq into the core connectives; idempotent."""
    if isinstance(phi, (Pred, Eq)):
        return phi
    if isinstance(phi, Neq):
        return Not(Eq(phi.lhs, phi.rhs))
    if isinstance(phi, Not):
        return Not(desugar(phi.sub))
    if isinstance(phi, Modal):
        return Modal(desugar(phi.sub))
    if isinstance(phi, And):
        return And(desugar(phi.left), desugar(phi.right))
    if isinstance(phi, Or):
        return Not(And(Not(desugar(phi.left)), Not(desugar(phi.right))))
    if isinstance(phi, Implies):
        # phi -> psi is short for (not phi) or psi
        return desugar(Or(Not(phi.left), phi.right))
    if isinstance(phi, Exists):
        return Exists(phi.var, desugar(phi.sub))
    if isinstance(phi, Forall):
        return Not(Exists(phi.var, Not(desugar(phi.sub))))
    raise TypeError(f"not a formula: {phi!r}")


def is_objective(phi: Formula) -> bool:
    if isinstance(phi, Modal):
        return False
    if isinstance(phi, (Pred, Eq, Neq)):
        return True
    if isinstance(phi, Not):
        return is_objective(phi.sub)
    if isinstance(phi, (And, Or, Implies)):
        return is_objective(phi.left) and is_objective(phi.right)
    if isinstance(phi, (Exists, Forall)):
        return is_objective(phi.sub)
    raise TypeError(f"not a formula: {phi!r}")


def is_ground(phi: Formula) -> bool:
    return not free_vars(phi)


def modal_scopes(phi: Formula) -> Iterator[Formula]:
    """Yield the scope of every belief atom in `phi` (outermost first)."""
    if isinstance(phi, Modal):
        yield phi.sub
        yield from modal_scopes(phi.sub)
    elif isinstance(phi, Not):
        yield from modal_scopes(phi.sub)
    elif isinstance(phi, (And, Or, Implies)):
        yield from modal_scopes(phi.left)
        yield from modal_scopes(phi.right)
    elif isinstance(phi, (Exists, Forall)):
        yield from modal_scopes(phi.sub)


def atoms_of(phi: Formula) -> Iterator[Atom]:
    if isinstance(phi, (Pred, Eq)):
        yield phi
    elif isinstance(phi, Neq):
        yield Eq(phi.lhs, phi.rhs)
    elif isinstance(phi, (Not, Modal)):
        yield from atoms_of(phi.sub)
    elif isinstance(phi, (And, Or, Implies)):
        yield from atoms_of(phi.left)
        yield from atoms_of(phi.right)
    elif isinstance(phi, (Exists, Forall)):
        yield from atoms_of(phi.sub)


def atom_key(a: Atom) -> tuple:
    if isinstance(a, Pred):
        return (0, a.symbol, len(a.args), tuple(_term_key(t) for t in a.args))
    return (1, _term_key(a.lhs), _term_key(a.rhs))


# ---------------------------------------------------------------------------
# Signatures

@dataclass(frozen=True)
class Signature:
    """Constants, optional proper function symbols, and predicate symbols."""

    constants: tuple[str, ...] = ()
    functions: frozenset[tuple[str, int]] = frozenset()
    predicates: frozenset[tuple[str, int]] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "constants", tuple(sorted(set(self.constants))))
        object.__setattr__(self, "functions", frozenset(self.functions))
        object.__setattr__(self, "predicates", frozenset(self.predicates))

    def union(self, other: "Signature") -> "Signature":
        return Signature(
            self.constants + other.constants,
            self.functions | other.functions,
            self.predicates | other.predicates,
        )

    def names(self, depth: int = 0, caps: Caps = DEFAULT_CAPS) -> tuple[Term, ...]:
        """All ground terms of term depth <= depth, in a deterministic order."""
        terms: list[Term] = [Const(c) for c in self.constants]
        for _ in range(depth):
            if not self.functions:
                break
            fresh: list[Term] = []
            for fname, ar in sorted(self.functions):
                for args in itertools.product(terms, repeat=ar):
                    t = Func(fname, args)
                    if t not in terms and t not in fresh:
                        fresh.append(t)
            terms = terms + fresh
            if len(terms) > caps.max_ground_atoms * 4:
                raise CapExceeded(f"name enumeration exceeded {caps.max_ground_atoms * 4} terms")
        return tuple(sorted(terms, key=_term_key))

    def pred_arity(self, symbol: str) -> int:
        for s, a in self.predicates:
            if s == symbol:
                return a
        raise KeyError(symbol)


def signature_of_formula(phi: Formula) -> Signature:
    consts: set[str] = set()
    funcs: set[tuple[str, int]] = set()
    preds: set[tuple[str, int]] = set()

    def walk_term(t: Term) -> None:
        if isinstance(t, Const):
            consts.add(t.name)
        elif isinstance(t, Func):
            funcs.add((t.name, len(t.args)))
            for a in t.args:
                walk_term(a)

    def walk(f: Formula) -> None:
        if isinstance(f, Pred):
            preds.add((f.symbol, len(f.args)))
            for a in f.args:
                walk_term(a)
        elif isinstance(f, (Eq, Neq)):
            walk_term(f.lhs)
            walk_term(f.rhs)
        elif isinstance(f, (Not, Modal)):
            walk(f.sub)
        elif isinstance(f, (And, Or, Implies)):
            walk(f.left)
            walk(f.right)
        elif isinstance(f, (Exists, Forall)):
            walk(f.sub)

    walk(phi)
    return Signature(tuple(consts), frozenset(funcs), frozenset(preds))


def ground_atoms(signature: Signature, depth: int = 0, caps: Caps = DEFAULT_CAPS) -> tuple[Atom, ...]:
    """All ground predicate atoms over the names, then all canonical nontrivial
    equalities between distinct names.  Deterministic order."""
    names = signature.names(depth, caps)
    out: list[Atom] = []
    for sym, ar in sorted(signature.predicates):
        if ar == 0:
            out.append(Pred(sym))
            continue
        if not names:
            continue
        for args in itertools.product(names, repeat=ar):
            out.append(Pred(sym, args))
        if len(out) > caps.max_ground_atoms:
            raise CapExceeded(
                f"{len(out)}+ ground atoms exceeds cap {caps.max_ground_atoms}")
    if len(out) > caps.max_ground_atoms:
        raise CapExceeded(f"{len(out)} ground atoms exceeds cap {caps.max_ground_atoms}")
    eqs = [Eq(t1, t2) for t1, t2 in itertools.combinations(names, 2)]
    return tuple(out) + tuple(sorted(eqs, key=atom_key))


# ---------------------------------------------------------------------------
# Rules and programs

@dataclass(frozen=True)
class Rule:
    head: tuple[Pred, ...]
    pos_body: tuple[Pred, ...] = ()
    neg_body: tuple[Pred, ...] = ()

    def __post_init__(self) -> None:
        if not self.head:
            raise SemanticError("rule head must be non-empty")
        for a in self.head + self.pos_body + self.neg_body:
            if not isinstance(a, Pred):
                raise SemanticError(f"rule atoms must be equality-free: {a}")

    @property
    def is_normal(self) -> bool:
        return len(self.head) == 1

    @property
    def is_positive(self) -> bool:
        return not self.neg_body

    def variables(self) -> frozenset[str]:
        out: set[str] = set()
        for a in self.head + self.pos_body + self.neg_body:
            out |= free_vars(a)
        return frozenset(out)

    @property
    def is_ground(self) -> bool:
        return not self.variables()

    @property
    def is_safe(self) -> bool:
        body_vars: set[str] = set()
        for a in self.pos_body:
            body_vars |= free_vars(a)
        return self.variables() <= body_vars


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...]
    signature: Signature

    @staticmethod
    def of(rules: Iterable[Rule], extra_constants: Iterable[str] = ()) -> "Program":
        rules = tuple(rules)
        sig = Signature(tuple(extra_constants))
        for r in rules:
            for a in r.head + r.pos_body + r.neg_body:
                sig = sig.union(signature_of_formula(a))
        return Program(rules, sig)

    @property
    def is_normal(self) -> bool:
        return all(r.is_normal for r in self.rules)

    @property
    def is_positive(self) -> bool:
        return all(r.is_positive for r in self.rules)

    @property
    def is_safe(self) -> bool:
        return all(r.is_safe for r in self.rules)

    @property
    def is_ground(self) -> bool:
        return all(r.is_ground for r in self.rules)


@dataclass(frozen=True)
class Theory:
    """A set of sentences; the belief operator is permitted."""

    formulas: tuple[Formula, ...]

    def __post_init__(self) -> None:
        for f in self.formulas:
            if free_vars(f):
                raise SemanticError(f"theory member has free variables: {sorted(free_vars(f))}")

    def signature(self) -> Signature:
        sig = Signature()
        for f in self.formulas:
            sig = sig.union(signature_of_formula(f))
        return sig

    def union(self, other: "Theory") -> "Theory":
        seen = list(self.formulas)
        for f in other.formulas:
            if f not in seen:
                seen.append(f)
        return Theory(tuple(seen))

    def is_objective(self) -> bool:
        return all(is_objective(f) for f in self.formulas)


# ---------------------------------------------------------------------------
# Belief kernels

@dataclass(frozen=True)
class BeliefKernel:
    """Objective ground-atomic fragment of a belief set.

    `atoms` holds ground predicate atoms, `equalities` canonical nontrivial
    ground equalities; reflexive equalities are implicit.  The kernel must be
    congruence-closed: merging names per `equalities` maps atoms to atoms.
    """

    atoms: frozenset[Pred] = frozenset()
    equalities: frozenset[Eq] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", frozenset(self.atoms))
        object.__setattr__(self, "equalities", frozenset(self.equalities))
        for e in self.equalities:
            if e.lhs == e.rhs:
                raise SemanticError("reflexive equalities are implicit, never stored")

    def contains(self, atom: Atom) -> bool:
        if isinstance(atom, Pred):
            return atom in self.atoms
        if atom.lhs == atom.rhs:
            return True
        return atom in self.equalities

    def sorted_atoms(self) -> tuple[Atom, ...]:
        return tuple(sorted(self.atoms, key=atom_key)) + tuple(
            sorted(self.equalities, key=atom_key))

    def key(self) -> tuple:
        return tuple(atom_key(a) for a in self.sorted_atoms())
