"""Stable expansions by guess-and-verify over belief kernels.

A kernel (the objective ground-atomic part of a belief set) determines a
stable expansion for theories whose belief atoms scope over atomic formulas.
A candidate kernel is stable exactly when it equals the set of ground atoms
entailed by the theory relative to itself; enumeration is the only safe
oracle at desk scale because the fixpoint is not monotone.

Candidate enumeration prunes in two sound ways: kernels must be closed under
the atomic congruence induced by their equalities, and any stable kernel is
contained in the positively-forcible atoms of the theory (implications can
only force their consequents, bare facts force themselves, the uniqueness
and introspection schemas force no atom).  An inconsistent expansion (kernel
= every atom, no model) is detected and reported separately.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from .errors import CapExceeded, InconsistentKernel, SemanticError
from . import foael
from .foael import (
    ExpansionMembership, KernelLookup, Mode, Space, StandardNames,
    _FrameEval, _frames, entails,
)
from . import syntax as S
from .syntax import (
    And, Atom, BeliefKernel, Caps, DEFAULT_CAPS, Eq, Exists, Forall, Formula,
    Implies, Modal, Neq, Not, Or, Pred, Signature, Term, Theory, atom_key,
    free_vars, ground_atoms, signature_of_formula,
)


@dataclass(frozen=True)
class Expansion:
    kernel: BeliefKernel
    consistent: bool
    mode: Mode
    space: Space
    theory: Theory


@dataclass(frozen=True)
class MemberVerdict:
    holds: bool
    exact: bool
    vacuous: bool = False


# ---------------------------------------------------------------------------
# Candidate kernels

def _partitions(items: Sequence[Term]) -> Iterator[tuple[tuple[Term, ...], ...]]:
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for sub in _partitions(rest):
        for i in range(len(sub)):
            yield sub[:i] + ((first,) + sub[i],) + sub[i + 1:]
        yield ((first,),) + sub


def _eqs_of_partition(blocks: Iterable[tuple[Term, ...]]) -> frozenset[Eq]:
    eqs = set()
    for block in blocks:
        for t1, t2 in itertools.combinations(block, 2):
            eqs.add(Eq(t1, t2))
    return frozenset(eqs)


def _orbit_map(atoms: Iterable[Pred], blocks: tuple[tuple[Term, ...], ...]
               ) -> dict[Pred, frozenset[Pred]]:
    rep: dict[Term, tuple[Term, ...]] = {}
    for block in blocks:
        for t in block:
            rep[t] = block
    out: dict[Pred, frozenset[Pred]] = {}
    for a in atoms:
        pools = [rep.get(t, (t,)) for t in a.args]
        orbit = frozenset(Pred(a.symbol, combo) for combo in itertools.product(*pools))
        out[a] = orbit
    return out


def candidate_kernels(signature: Signature, depth: int = 0,
                      caps: Caps = DEFAULT_CAPS, merges: bool = True
                      ) -> Iterator[BeliefKernel]:
    """All congruence-closed kernels over the signature's ground atoms; with
    `merges` false only equality-free kernels (plus the all-atom kernel)."""
    all_atoms = tuple(a for a in ground_atoms(signature, depth, caps) if isinstance(a, Pred))
    names = signature.names(depth, caps)
    emitted: set[frozenset] = set()
    count = 0
    partitions = _partitions(tuple(names)) if merges else iter(
        [tuple((t,) for t in names)])
    for blocks in partitions:
        eqs = _eqs_of_partition(blocks)
        orbit = _orbit_map(all_atoms, blocks)
        orbits = sorted({orbit[a] for a in all_atoms},
                        key=lambda o: sorted(map(atom_key, o)))
        for pick in itertools.product((False, True), repeat=len(orbits)):
            atoms = frozenset(a for o, p in zip(orbits, pick) if p for a in o)
            key = atoms | eqs
            if key in emitted:
                continue
            emitted.add(key)
            count += 1
            if count > caps.max_kernels:
                raise CapExceeded(f"kernel candidates exceed cap {caps.max_kernels}")
            yield BeliefKernel(atoms, eqs)


# ---------------------------------------------------------------------------
# Forcible-atom analysis (sound pruning of the candidate space)

@dataclass(frozen=True)
class _Forcible:
    required: frozenset[Pred]
    possible: frozenset[Pred]
    equalities_possible: bool


def _forcible(theory: Theory, atoms: Sequence[Pred]) -> _Forcible:
    """Which ground atoms the theory could ever entail.

    An atom can be forced true only through an occurrence of positive
    polarity outside belief scopes: flipping a relation row touched only
    negatively preserves modelhood, so such atoms are never entailed.
    Belief atoms are belief-set constants and force nothing directly, with
    one indirect exception: a positive belief atom with a non-ground scope
    can rule out interpretations frame by frame and thereby force names to
    merge.  Merging entails equalities, so that case is folded into the
    "equalities possible" path, which widens atom possibility to whole
    predicates and turns on merged-kernel candidates.  Ground atoms
    appearing as bare conjunctive facts are entailed relative to every
    kernel (consistently or vacuously), hence required."""
    by_pred: dict[tuple[str, int], list[Pred]] = {}
    for a in atoms:
        by_pred.setdefault((a.symbol, len(a.args)), []).append(a)
    required: set[Pred] = set()
    possible: set[Pred] = set()
    eq_possible = False

    def mark_pred(a: Pred) -> None:
        if S.is_ground(a):
            if a in by_pred.get((a.symbol, len(a.args)), ()):
                possible.add(a)
        else:
            possible.update(by_pred.get((a.symbol, len(a.args)), ()))

    def walk(f: Formula, pos: bool) -> None:
        nonlocal eq_possible
        if isinstance(f, Pred):
            if pos:
                mark_pred(f)
        elif isinstance(f, Eq):
            if pos and f.lhs != f.rhs:
                eq_possible = True
        elif isinstance(f, Neq):
            if not pos and f.lhs != f.rhs:
                eq_possible = True
        elif isinstance(f, Not):
            walk(f.sub, not pos)
        elif isinstance(f, (And, Or)):
            walk(f.left, pos)
            walk(f.right, pos)
        elif isinstance(f, Implies):
            walk(f.left, not pos)
            walk(f.right, pos)
        elif isinstance(f, (Exists, Forall)):
            walk(f.sub, pos)
        elif isinstance(f, Modal):
            if pos and free_vars(f.sub):
                eq_possible = True  # may force name merges across frames
            return

    for f in theory.formulas:
        walk(f, True)
        stripped = f
        while isinstance(stripped, Forall):
            stripped = stripped.sub
        for part in _conjuncts(stripped):
            if isinstance(part, Pred):
                if S.is_ground(part):
                    required.add(part)
                else:
                    required.update(by_pred.get((part.symbol, len(part.args)), ()))
    if eq_possible:
        # congruence may copy any possible predicate across merged names
        widened = set(possible)
        for (sym, ar), insts in by_pred.items():
            if any(a.symbol == sym and len(a.args) == ar for a in possible):
                widened.update(insts)
        possible = widened
    return _Forcible(frozenset(required), frozenset(required | possible), eq_possible)


def _conjuncts(phi: Formula) -> Iterator[Formula]:
    if isinstance(phi, And):
        yield from _conjuncts(phi.left)
        yield from _conjuncts(phi.right)
    else:
        yield phi


# ---------------------------------------------------------------------------
# The fixpoint test

class _ExpansionEngine:
    """Shared evaluators for repeated kernel checks of one theory."""

    def __init__(self, theory: Theory, mode: Mode, space: Space,
                 signature: Optional[Signature] = None, depth: int = 0,
                 caps: Caps = DEFAULT_CAPS):
        foael._check_mode(mode)
        self.theory = theory
        self.mode = mode
        self.space = space
        self.depth = depth
        self.caps = caps
        self.signature = signature if signature is not None else theory.signature()
        base = ground_atoms(self.signature, depth, caps)
        self.atoms = tuple(a for a in base if isinstance(a, Pred))
        self.equalities = tuple(a for a in base if isinstance(a, Eq))
        self.evaluators = [
            _FrameEval(self.signature, fr, depth, caps)
            for fr in _frames(self.signature, space, depth, caps)
        ]

    def ground_profile(self, kernel: BeliefKernel
                       ) -> tuple[frozenset[Pred], frozenset[Eq], bool]:
        """Entailed ground atoms/equalities w.r.t. the kernel, plus whether a
        model exists; with no model everything is vacuously entailed."""
        truth = KernelLookup(kernel).ground_truth
        ent_atoms = set(self.atoms)
        ent_eqs = set(self.equalities)
        consistent = False
        for fe in self.evaluators:
            sat = fe.sat_theory(self.theory.formulas, self.mode, truth)
            if sat is False:
                continue
            sel = None if isinstance(sat, bool) else sat
            if sel is not None and not sel.any():
                continue
            consistent = True
            for a in tuple(ent_atoms):
                vec = fe.ground_atom_vec(a)
                if isinstance(vec, bool):
                    ok = vec
                elif sel is None:
                    ok = bool(vec.all())
                else:
                    ok = bool(vec[sel].all())
                if not ok:
                    ent_atoms.discard(a)
            for e in tuple(ent_eqs):
                if not fe.ground_atom_vec(e):
                    ent_eqs.discard(e)
            if not ent_atoms and not ent_eqs:
                break
        if not consistent:
            return frozenset(self.atoms), frozenset(self.equalities), False
        return frozenset(ent_atoms), frozenset(ent_eqs), True

    def is_stable(self, kernel: BeliefKernel) -> bool:
        atoms, eqs, _ = self.ground_profile(kernel)
        return atoms == kernel.atoms and eqs == kernel.equalities

    def candidates(self) -> Iterator[BeliefKernel]:
        forcible = _forcible(self.theory, self.atoms)
        optional = tuple(a for a in self.atoms
                         if a in forcible.possible and a not in forcible.required)
        if (1 << len(optional)) > self.caps.max_kernels:
            raise CapExceeded(
                f"2^{len(optional)} kernel candidates exceed cap {self.caps.max_kernels}")
        seen: set[tuple[frozenset, frozenset]] = set()
        if forcible.equalities_possible:
            for kernel in candidate_kernels(self.signature, self.depth, self.caps):
                if forcible.required <= kernel.atoms and kernel.atoms <= forcible.possible:
                    seen.add((kernel.atoms, kernel.equalities))
                    yield kernel
        else:
            for k in range(len(optional) + 1):
                for combo in itertools.combinations(optional, k):
                    kernel = BeliefKernel(forcible.required | frozenset(combo))
                    seen.add((kernel.atoms, kernel.equalities))
                    yield kernel
        full = BeliefKernel(frozenset(self.atoms), frozenset(self.equalities))
        if (full.atoms, full.equalities) not in seen:
            yield full


def is_stable_kernel(theory: Theory, kernel: BeliefKernel, mode: Mode = "any",
                     space: Space = StandardNames(),
                     signature: Optional[Signature] = None, depth: int = 0,
                     caps: Caps = DEFAULT_CAPS) -> bool:
    """Guess-and-verify: the kernel is stable iff it equals the ground-atomic
    part entailed relative to itself."""
    eng = _ExpansionEngine(theory, mode, space, signature, depth, caps)
    return eng.is_stable(kernel)


def stable_expansions(theory: Theory, mode: Mode = "any",
                      space: Space = StandardNames(),
                      signature: Optional[Signature] = None, depth: int = 0,
                      caps: Caps = DEFAULT_CAPS) -> tuple[Expansion, ...]:
    """All stable expansions of the theory, each represented by its kernel and
    tagged with consistency; deterministic kernel order."""
    eng = _ExpansionEngine(theory, mode, space, signature, depth, caps)
    out: list[Expansion] = []
    for kernel in eng.candidates():
        atoms, eqs, consistent = eng.ground_profile(kernel)
        if atoms == kernel.atoms and eqs == kernel.equalities:
            out.append(Expansion(kernel, consistent, mode, space, theory))
    out.sort(key=lambda e: e.kernel.key())
    return tuple(out)


# ---------------------------------------------------------------------------
# Membership in one expansion

def member(theory: Theory, kernel: BeliefKernel, phi: Formula, mode: Mode = "any",
           space: Space = StandardNames(), signature: Optional[Signature] = None,
           depth: int = 0, caps: Caps = DEFAULT_CAPS) -> MemberVerdict:
    """Does the sentence belong to the expansion determined by the kernel?

    Objective sentences are decided by entailment; belief literals follow the
    stable-set laws (for consistent expansions); for mixed sentences, belief
    subformulas are resolved recursively through the expansion itself."""
    if free_vars(phi):
        raise SemanticError("membership queries take sentences")
    if signature is None:
        signature = theory.signature().union(signature_of_formula(phi))

    def consistent() -> bool:
        return foael.models_exist(theory, KernelLookup(kernel), mode, space,
                                  signature, depth, caps)

    if isinstance(phi, Modal):
        if not consistent():
            raise InconsistentKernel("belief laws need a consistent expansion")
        return member(theory, kernel, phi.sub, mode, space, signature, depth, caps)
    if isinstance(phi, Not) and isinstance(phi.sub, Modal):
        if not consistent():
            raise InconsistentKernel("belief laws need a consistent expansion")
        inner = member(theory, kernel, phi.sub.sub, mode, space, signature, depth, caps)
        return MemberVerdict(not inner.holds, inner.exact)
    if S.is_objective(phi):
        v = entails(theory, KernelLookup(kernel), phi, mode, space, signature,
                    depth, caps)
        return MemberVerdict(v.entailed, v.exact)
    oracle = ExpansionMembership(
        kernel,
        lambda psi: member(theory, kernel, psi, mode, space, signature, depth,
                           caps).holds)
    v = entails(theory, oracle, phi, mode, space, signature, depth, caps)
    return MemberVerdict(v.entailed, v.exact)


def membership_matrix(theory: Theory, expansions: Sequence[Expansion],
                      probes: Sequence[Formula], mode: Mode = "any",
                      space: Space = StandardNames(),
                      signature: Optional[Signature] = None, depth: int = 0,
                      caps: Caps = DEFAULT_CAPS) -> list[list[MemberVerdict]]:
    """Membership of every probe in every expansion, sharing one pass over
    the interpretation space: objective probe vectors are belief-independent
    and computed once per frame, kernels only re-filter the models.

    Ground belief literals reduce to kernel membership (the stable kernel is
    exactly the entailed atom set); richer modal probes fall back to the
    recursive `member`.  Probes of an inconsistent expansion all hold: the
    inconsistent belief set is the whole language."""
    if signature is None:
        signature = theory.signature()
        for p in probes:
            signature = signature.union(signature_of_formula(p))
    sn = isinstance(space, StandardNames)
    results: list[list[Optional[MemberVerdict]]] = [
        [None] * len(probes) for _ in expansions]
    goals: list[Optional[Formula]] = [None] * len(probes)
    for j, p in enumerate(probes):
        if S.is_objective(p):
            goals[j] = S.universal_closure(p)
            continue
        scope, positive = _ground_belief_literal(p)
        for i, e in enumerate(expansions):
            if not e.consistent:
                results[i][j] = MemberVerdict(True, sn)
            elif scope is not None:
                held = e.kernel.contains(scope) == positive
                results[i][j] = MemberVerdict(held, sn if held else True)
            else:
                results[i][j] = member(theory, e.kernel, p, mode, space,
                                       signature, depth, caps)
    objective = [j for j, g in enumerate(goals) if g is not None]
    holding = [{j: True for j in objective} for _ in expansions]
    if objective and expansions:
        for fr in _frames(signature, space, depth, caps):
            fe = _FrameEval(signature, fr, depth, caps)
            probe_vecs: dict[int, Union[bool, np.ndarray]] = {}
            for i, e in enumerate(expansions):
                pending = [j for j, h in holding[i].items() if h]
                if not pending:
                    continue
                truth = KernelLookup(e.kernel).ground_truth
                sat = fe.sat_theory(theory.formulas, mode, truth)
                if sat is False:
                    continue
                sel = None if isinstance(sat, bool) else sat
                if sel is not None and not sel.any():
                    continue
                for j in pending:
                    good = probe_vecs.get(j)
                    if good is None:
                        good = fe.eval(goals[j], {}, mode, _no_belief)
                        probe_vecs[j] = good
                    if good is True:
                        continue
                    if good is False:
                        ok = False
                    elif sel is None:
                        ok = bool(good.all())
                    else:
                        ok = bool(good[sel].all())
                    if not ok:
                        holding[i][j] = False
    for i in range(len(expansions)):
        for j in objective:
            held = holding[i][j]
            results[i][j] = MemberVerdict(held, sn if held else True)
    return [[v for v in row if v is not None] for row in results]


def _no_belief(phi: Formula) -> bool:
    raise AssertionError("objective probe evaluated a belief atom")


def _ground_belief_literal(phi: Formula) -> tuple[Optional[S.Atom], bool]:
    """Recognize L alpha / -L alpha for a ground atom alpha."""
    positive = True
    if isinstance(phi, Not):
        positive = False
        phi = phi.sub
    if isinstance(phi, Modal) and isinstance(phi.sub, (Pred, Eq)) \
            and S.is_ground(phi.sub):
        return phi.sub, positive
    return None, positive


def member_batch(theory: Theory, kernel: BeliefKernel, probes: Sequence[Formula],
                 mode: Mode = "any", space: Space = StandardNames(),
                 signature: Optional[Signature] = None, depth: int = 0,
                 caps: Caps = DEFAULT_CAPS,
                 consistent: Optional[bool] = None) -> list[MemberVerdict]:
    """Membership of many probes against one kernel in one space pass."""
    if consistent is None:
        consistent = foael.models_exist(theory, KernelLookup(kernel), mode,
                                        space, signature, depth, caps)
    exp = Expansion(kernel, consistent, mode, space, theory)
    return membership_matrix(theory, (exp,), probes, mode, space, signature,
                             depth, caps)[0]


def consequences(theory: Theory, probes: Sequence[Formula], mode: Mode = "any",
                 space: Space = StandardNames(),
                 signature: Optional[Signature] = None, depth: int = 0,
                 caps: Caps = DEFAULT_CAPS,
                 expansions: Optional[Sequence[Expansion]] = None
                 ) -> list[tuple[Formula, MemberVerdict]]:
    """A probe is a consequence when it belongs to every stable expansion;
    with no expansion at all every probe is vacuously true (reported so)."""
    if expansions is None:
        expansions = stable_expansions(theory, mode, space, signature, depth, caps)
    if not expansions:
        exact = isinstance(space, StandardNames)
        return [(p, MemberVerdict(True, exact, vacuous=True)) for p in probes]
    matrix = membership_matrix(theory, expansions, probes, mode, space,
                               signature, depth, caps)
    out: list[tuple[Formula, MemberVerdict]] = []
    for j, p in enumerate(probes):
        verdicts = [matrix[i][j] for i in range(len(expansions))]
        holds = all(v.holds for v in verdicts)
        exact = all(v.exact for v in verdicts)
        out.append((p, MemberVerdict(holds, exact)))
    return out
