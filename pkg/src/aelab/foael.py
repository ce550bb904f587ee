"""Model theory for first-order autoepistemic logic on finite spaces.

Interpretations are finite structures; equality is element identity.  The
belief operator is evaluated against a belief-set oracle under either the
any-name or the all-name reading of quantifying-in: a belief atom over an
assignment is resolved through the name substitutions associated with the
assignment, restricted to the free variables of its scope (substitutions
differing outside those variables produce the same instance).

Two interpretation spaces are provided: `StandardNames` (domain = names,
all distinct) and `Bounded(D)` (every structure with at most D elements, up
to the canonical labeling induced by the constant denotations).  Entailment
over `Bounded` is refutation up to the bound and is flagged inexact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence, Union

import numpy as np

from .errors import (
    AelabError, CapExceeded, ModalNotAllowed, ModalScopeTooRich, NotGHorn,
    NotNamed,
)
from . import syntax as S
from .syntax import (
    And, BeliefKernel, Caps, Const, DEFAULT_CAPS, Eq, Exists, Forall, Formula,
    Func, Implies, Modal, Neq, Not, Or, Pred, Signature, Term, Theory, Var,
    apply_substitution, free_vars, is_objective, signature_of_formula,
)

Mode = str  # "any" | "all"


def _check_mode(mode: str) -> None:
    if mode not in ("any", "all"):
        raise ValueError(f"mode must be 'any' or 'all', got {mode!r}")


# ---------------------------------------------------------------------------
# Interpretations and spaces

@dataclass(frozen=True)
class Interpretation:
    """Finite structure: domain {0..n-1}, constant/function denotations and
    predicate relations.  Equality is identity of elements."""

    domain_size: int
    const_den: tuple[tuple[str, int], ...] = ()
    func_den: tuple[tuple[str, tuple[tuple[tuple[int, ...], int], ...]], ...] = ()
    relations: tuple[tuple[tuple[str, int], frozenset[tuple[int, ...]]], ...] = ()

    def constant(self, name: str) -> int:
        for c, e in self.const_den:
            if c == name:
                return e
        raise KeyError(name)

    def function(self, name: str, args: tuple[int, ...]) -> int:
        for f, table in self.func_den:
            if f == name:
                for a, v in table:
                    if a == args:
                        return v
        raise KeyError((name, args))

    def relation(self, symbol: str, arity: int) -> frozenset[tuple[int, ...]]:
        for (s, a), rel in self.relations:
            if s == symbol and a == arity:
                return rel
        return frozenset()

    def eval_term(self, t: Term, assignment: Mapping[str, int]) -> int:
        if isinstance(t, Var):
            return assignment[t.name]
        if isinstance(t, Const):
            return self.constant(t.name)
        return self.function(t.name, tuple(self.eval_term(a, assignment) for a in t.args))

    def names_by_element(self, signature: Signature, depth: int = 0,
                         caps: Caps = DEFAULT_CAPS) -> dict[int, tuple[Term, ...]]:
        out: dict[int, list[Term]] = {}
        for t in signature.names(depth, caps):
            try:
                e = self.eval_term(t, {})
            except KeyError:
                continue
            out.setdefault(e, []).append(t)
        return {e: tuple(ts) for e, ts in out.items()}

    def signature(self) -> Signature:
        return Signature(
            tuple(c for c, _ in self.const_den),
            frozenset((f, len(table[0][0])) for f, table in self.func_den if table),
            frozenset(key for key, _ in self.relations),
        )


@dataclass(frozen=True)
class StandardNames:
    """Domain = the names themselves, all interpreted distinctly."""

    def label(self) -> str:
        return "standard-names"


@dataclass(frozen=True)
class Bounded:
    """All interpretations with domain size <= bound (canonical labeling)."""

    bound: int

    def __post_init__(self) -> None:
        if self.bound < 1:
            raise ValueError("domain bound must be >= 1")

    def label(self) -> str:
        return f"bounded({self.bound})"


Space = Union[StandardNames, Bounded]


def default_bounded(signature: Signature, depth: int = 0, margin: int = 2) -> Bounded:
    """Bound = number of names + margin; every counterexample exercised here
    needs at most one unnamed individual plus name merging."""
    return Bounded(max(1, len(signature.names(depth)) + margin))


# ---------------------------------------------------------------------------
# Belief-set oracles

class KernelLookup:
    """Resolve belief atoms by membership of the ground atom in a kernel;
    reflexive equalities count as present.  Only legal while every belief
    scope met is an objective atomic formula."""

    def __init__(self, kernel: BeliefKernel):
        self.kernel = kernel

    def ground_truth(self, phi: Formula) -> bool:
        if isinstance(phi, (Pred, Eq)):
            return self.kernel.contains(phi)
        raise ModalScopeTooRich(
            f"kernel lookup needs an atomic belief scope, got: {phi!r}")


class ExpansionMembership:
    """Resolve belief atoms by membership in the expansion determined by a
    kernel; atomic scopes short-circuit to the kernel, other sentences go
    through the supplied recursive membership test."""

    def __init__(self, kernel: BeliefKernel, membership: Callable[[Formula], bool]):
        self.kernel = kernel
        self.membership = membership

    def ground_truth(self, phi: Formula) -> bool:
        if isinstance(phi, (Pred, Eq)):
            return self.kernel.contains(phi)
        return self.membership(phi)


Oracle = Union[KernelLookup, ExpansionMembership]


def _as_oracle(oracle: Union[Oracle, BeliefKernel]) -> Oracle:
    if isinstance(oracle, BeliefKernel):
        return KernelLookup(oracle)
    return oracle


# ---------------------------------------------------------------------------
# Associated name substitutions and plain satisfaction

def associated_substitutions(w: Interpretation, assignment: Mapping[str, int],
                             variables: Iterable[str], signature: Signature,
                             depth: int = 0) -> tuple[dict[str, Term], ...]:
    """All name substitutions associated with the assignment, restricted to
    `variables`; variables whose value has no name are absent from every map."""
    names = w.names_by_element(signature, depth)
    named_vars = [v for v in sorted(variables) if assignment[v] in names]
    pools = [[(v, t) for t in names[assignment[v]]] for v in named_vars]
    return tuple(dict(combo) for combo in itertools.product(*pools))


def _modal_truth(w: Interpretation, assignment: Mapping[str, int], oracle: Oracle,
                 scope: Formula, mode: Mode, signature: Signature, depth: int) -> bool:
    fv = free_vars(scope)
    names = w.names_by_element(signature, depth)
    values = {v: assignment[v] for v in fv}
    if any(e not in names for e in values.values()):
        return False  # some substitution instance stays open
    pools = [[(v, t) for t in names[e]] for v, e in sorted(values.items())]
    results = (oracle.ground_truth(apply_substitution(scope, dict(combo)))
               for combo in itertools.product(*pools))
    return any(results) if mode == "any" else all(results)


def satisfies(w: Interpretation, assignment: Mapping[str, int],
              oracle: Union[Oracle, BeliefKernel], phi: Formula, mode: Mode = "any",
              signature: Optional[Signature] = None, depth: int = 0) -> bool:
    """The recursive satisfaction relation for one structure and assignment."""
    _check_mode(mode)
    oracle = _as_oracle(oracle)
    if signature is None:
        signature = w.signature()

    def go(f: Formula, env: Mapping[str, int]) -> bool:
        if isinstance(f, Pred):
            args = tuple(w.eval_term(t, env) for t in f.args)
            return args in w.relation(f.symbol, len(f.args))
        if isinstance(f, Eq):
            return w.eval_term(f.lhs, env) == w.eval_term(f.rhs, env)
        if isinstance(f, Neq):
            return w.eval_term(f.lhs, env) != w.eval_term(f.rhs, env)
        if isinstance(f, Not):
            return not go(f.sub, env)
        if isinstance(f, And):
            return go(f.left, env) and go(f.right, env)
        if isinstance(f, Or):
            return go(f.left, env) or go(f.right, env)
        if isinstance(f, Implies):
            return (not go(f.left, env)) or go(f.right, env)
        if isinstance(f, Exists):
            return any(go(f.sub, {**env, f.var: e}) for e in range(w.domain_size))
        if isinstance(f, Forall):
            return all(go(f.sub, {**env, f.var: e}) for e in range(w.domain_size))
        if isinstance(f, Modal):
            return _modal_truth(w, env, oracle, f.sub, mode, signature, depth)
        raise TypeError(f"not a formula: {f!r}")

    return go(phi, dict(assignment))


def holds(w: Interpretation, oracle: Union[Oracle, BeliefKernel],
          phi: Union[Formula, Theory], mode: Mode = "any",
          signature: Optional[Signature] = None, depth: int = 0) -> bool:
    """Truth under every assignment of the free variables (a sentence has
    exactly the empty assignment); theories decompose conjunctively."""
    if isinstance(phi, Theory):
        return all(holds(w, oracle, f, mode, signature, depth) for f in phi.formulas)
    fv = sorted(free_vars(phi))
    for combo in itertools.product(range(w.domain_size), repeat=len(fv)):
        if not satisfies(w, dict(zip(fv, combo)), oracle, phi, mode, signature, depth):
            return False
    return True


# ---------------------------------------------------------------------------
# Frames: the shared shape of a batch of interpretations

@dataclass(frozen=True)
class _Frame:
    m: int
    const_den: tuple[int, ...]                     # aligned with signature.constants
    func_den: tuple[tuple[tuple[int, ...], ...], ...] = ()  # per sorted function


def _canonical_denotations(k: int, m: int) -> Iterator[tuple[int, ...]]:
    """Constant denotations up to relabeling: first constant maps to 0, each
    next constant to a seen element or the next fresh one."""
    if k == 0:
        yield ()
        return

    def rec(prefix: tuple[int, ...], top: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == k:
            yield prefix
            return
        for e in range(min(top + 1, m - 1) + 1):
            yield from rec(prefix + (e,), max(top, e))

    yield from rec((), -1)


def _frames(signature: Signature, space: Space, depth: int, caps: Caps) -> list[_Frame]:
    funcs = sorted(signature.functions)
    if isinstance(space, StandardNames):
        if funcs:
            raise AelabError("standard-names enumeration requires a function-free signature")
        m = max(1, len(signature.constants))
        den = tuple(range(len(signature.constants)))
        return [_Frame(m, den)]
    frames: list[_Frame] = []
    for m in range(1, space.bound + 1):
        for den in _canonical_denotations(len(signature.constants), m):
            if not funcs:
                frames.append(_Frame(m, den))
                continue
            tables = []
            for _, ar in funcs:
                n_rows = m ** ar
                tables.append(list(itertools.product(range(m), repeat=n_rows)))
                if len(tables[-1]) > caps.max_interpretations:
                    raise CapExceeded("function denotation enumeration exceeds cap")
            for combo in itertools.product(*tables):
                frames.append(_Frame(m, den, tuple(combo)))
    return frames


class _FrameEval:
    """Vectorized satisfaction over every relation assignment of one frame.

    Relations are packed into bitmasks over "element atoms" (predicate at a
    tuple of elements); a formula evaluates to a boolean vector over all
    masks.  Belief atoms are mask-independent and evaluate to scalars, which
    lets conjunctions short-circuit cheaply.
    """

    def __init__(self, signature: Signature, frame: _Frame, depth: int, caps: Caps):
        self.signature = signature
        self.frame = frame
        self.depth = depth
        self.preds = sorted(signature.predicates)
        self.eatoms: list[tuple[str, tuple[int, ...]]] = []
        for sym, ar in self.preds:
            for elems in itertools.product(range(frame.m), repeat=ar):
                self.eatoms.append((sym, elems))
        self.bit = {ea: i for i, ea in enumerate(self.eatoms)}
        n = len(self.eatoms)
        if (1 << n) > caps.max_interpretations:
            raise CapExceeded(
                f"2^{n} interpretations in one frame exceeds cap {caps.max_interpretations}")
        self.masks = np.arange(1 << n, dtype=np.int64)
        self._cols: dict[int, np.ndarray] = {}
        self._funcs = sorted(signature.functions)
        self._obj_cache: dict[tuple, Union[bool, np.ndarray]] = {}
        # cache keys use object identity; pin the keyed formulas so a freed
        # address can never alias a later formula
        self._pinned: list[Formula] = []
        self._fv_cache: dict[int, frozenset[str]] = {}
        self._names: Optional[dict[int, tuple[Term, ...]]] = None

    # -- helpers -------------------------------------------------------------

    def col(self, bit: int) -> np.ndarray:
        c = self._cols.get(bit)
        if c is None:
            c = ((self.masks >> bit) & 1).astype(bool)
            self._cols[bit] = c
        return c

    def elem_of_term(self, t: Term, env: Mapping[str, int]) -> int:
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, Const):
            return self.frame.const_den[self.signature.constants.index(t.name)]
        fi = self._funcs.index((t.name, len(t.args)))
        args = tuple(self.elem_of_term(a, env) for a in t.args)
        row = 0
        for a in args:
            row = row * self.frame.m + a
        return self.frame.func_den[fi][row]

    def names_by_element(self) -> dict[int, tuple[Term, ...]]:
        if self._names is None:
            out: dict[int, list[Term]] = {}
            for t in self.signature.names(self.depth):
                out.setdefault(self.elem_of_term(t, {}), []).append(t)
            self._names = {e: tuple(ts) for e, ts in out.items()}
        return self._names

    def _free(self, phi: Formula) -> frozenset[str]:
        fv = self._fv_cache.get(id(phi))
        if fv is None:
            fv = free_vars(phi)
            self._fv_cache[id(phi)] = fv
            self._pinned.append(phi)
        return fv

    # -- evaluation ----------------------------------------------------------

    def eval(self, phi: Formula, env: Mapping[str, int], mode: Mode,
             modal_truth: Callable[[Formula], bool]) -> Union[bool, np.ndarray]:
        objective = is_objective(phi)
        if objective:
            key = (id(phi), tuple(sorted((v, env[v]) for v in self._free(phi))))
            hit = self._obj_cache.get(key)
            if hit is not None:
                return hit
        val = self._eval(phi, env, mode, modal_truth)
        if objective:
            self._obj_cache[key] = val
            self._pinned.append(phi)
        return val

    def _eval(self, phi: Formula, env: Mapping[str, int], mode: Mode,
              modal_truth: Callable[[Formula], bool]) -> Union[bool, np.ndarray]:
        if isinstance(phi, Pred):
            elems = tuple(self.elem_of_term(t, env) for t in phi.args)
            return self.col(self.bit[(phi.symbol, elems)])
        if isinstance(phi, Eq):
            return self.elem_of_term(phi.lhs, env) == self.elem_of_term(phi.rhs, env)
        if isinstance(phi, Neq):
            return self.elem_of_term(phi.lhs, env) != self.elem_of_term(phi.rhs, env)
        if isinstance(phi, Not):
            v = self.eval(phi.sub, env, mode, modal_truth)
            return (not v) if isinstance(v, bool) else ~v
        if isinstance(phi, (And, Or)):
            conjunctive = isinstance(phi, And)
            parts = _assoc_parts(phi)
            # belief literals are mask-independent scalars: try them first
            parts = sorted(parts, key=lambda p: 0 if _scalar_rooted(p) else 1)
            acc: Union[bool, np.ndarray] = conjunctive
            for p in parts:
                v = self.eval(p, env, mode, modal_truth)
                if isinstance(v, bool):
                    if v is not conjunctive:
                        return v
                    continue
                acc = v if isinstance(acc, bool) else (acc & v if conjunctive else acc | v)
            return acc
        if isinstance(phi, Implies):
            left = self.eval(phi.left, env, mode, modal_truth)
            if left is False:
                return True
            right = self.eval(phi.right, env, mode, modal_truth)
            if left is True:
                return right
            if right is True:
                return True
            if right is False:
                return ~left
            return ~left | right
        if isinstance(phi, (Exists, Forall)):
            universal = isinstance(phi, Forall)
            acc2: Union[bool, np.ndarray] = universal
            for e in range(self.frame.m):
                v = self.eval(phi.sub, {**env, phi.var: e}, mode, modal_truth)
                if isinstance(v, bool):
                    if v is not universal:
                        return v
                    continue
                acc2 = v if isinstance(acc2, bool) else (acc2 & v if universal else acc2 | v)
            return acc2
        if isinstance(phi, Modal):
            names = self.names_by_element()
            fv = self._free(phi.sub)
            values = {v: env[v] for v in fv}
            if any(e not in names for e in values.values()):
                return False
            pools = [[(v, t) for t in names[e]] for v, e in sorted(values.items())]
            results = (modal_truth(apply_substitution(phi.sub, dict(combo)))
                       for combo in itertools.product(*pools))
            return any(results) if mode == "any" else all(results)
        raise TypeError(f"not a formula: {phi!r}")

    def sat_theory(self, formulas: Sequence[Formula], mode: Mode,
                   modal_truth: Callable[[Formula], bool]) -> Union[bool, np.ndarray]:
        acc: Union[bool, np.ndarray] = True
        for f in formulas:
            v = self.eval(f, {}, mode, modal_truth)
            if v is False:
                return False
            if v is True:
                continue
            acc = v if isinstance(acc, bool) else acc & v
        return acc

    def ground_atom_vec(self, atom: S.Atom) -> Union[bool, np.ndarray]:
        if isinstance(atom, Pred):
            elems = tuple(self.elem_of_term(t, {}) for t in atom.args)
            return self.col(self.bit[(atom.symbol, elems)])
        return self.elem_of_term(atom.lhs, {}) == self.elem_of_term(atom.rhs, {})

    def interpretation(self, mask: int) -> Interpretation:
        rels: dict[tuple[str, int], set[tuple[int, ...]]] = {
            (sym, ar): set() for sym, ar in self.preds}
        for i, (sym, elems) in enumerate(self.eatoms):
            if mask & (1 << i):
                rels[(sym, len(elems))].add(elems)
        func_tables = []
        for fi, (fname, ar) in enumerate(self._funcs):
            rows = []
            for ri, args in enumerate(itertools.product(range(self.frame.m), repeat=ar)):
                rows.append((args, self.frame.func_den[fi][ri]))
            func_tables.append((fname, tuple(rows)))
        return Interpretation(
            domain_size=self.frame.m,
            const_den=tuple(zip(self.signature.constants, self.frame.const_den)),
            func_den=tuple(func_tables),
            relations=tuple(((sym, ar), frozenset(rel)) for (sym, ar), rel in sorted(rels.items())),
        )


def _assoc_parts(phi: Formula) -> list[Formula]:
    node = type(phi)
    out: list[Formula] = []
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, node):
            stack.append(f.right)
            stack.append(f.left)
        else:
            out.append(f)
    return out


def _scalar_rooted(phi: Formula) -> bool:
    """True when evaluation cannot touch the relations (belief or equality only);
    used purely to order conjuncts so cheap scalar parts short-circuit."""
    if isinstance(phi, (Modal, Eq, Neq)):
        return True
    if isinstance(phi, Not):
        return _scalar_rooted(phi.sub)
    return False


def enumerate_interpretations(signature: Signature, space: Space, depth: int = 0,
                              caps: Caps = DEFAULT_CAPS) -> Iterator[Interpretation]:
    """Stream every interpretation of the space (relations fully enumerated,
    constant denotations canonical for Bounded)."""
    for frame in _frames(signature, space, depth, caps):
        fe = _FrameEval(signature, frame, depth, caps)
        for mask in range(len(fe.masks)):
            yield fe.interpretation(mask)


# ---------------------------------------------------------------------------
# Entailment

@dataclass(frozen=True)
class Entailed:
    exact: bool

    @property
    def entailed(self) -> bool:
        return True


@dataclass(frozen=True)
class CountermodelFound:
    interpretation: Interpretation
    exact: bool = True

    @property
    def entailed(self) -> bool:
        return False


EntailVerdict = Union[Entailed, CountermodelFound]


def _joint_signature(theory: Theory, phi: Optional[Formula],
                     extra: Optional[Signature]) -> Signature:
    sig = theory.signature()
    if phi is not None:
        sig = sig.union(signature_of_formula(phi))
    if extra is not None:
        sig = sig.union(extra)
    return sig


def entails(theory: Theory, oracle: Union[Oracle, BeliefKernel], phi: Formula,
            mode: Mode = "any", space: Space = StandardNames(),
            signature: Optional[Signature] = None, depth: int = 0,
            caps: Caps = DEFAULT_CAPS) -> EntailVerdict:
    """Does every model of the theory (w.r.t. the belief set) satisfy `phi`?

    A countermodel verdict is definitive; an entailed verdict is exact only
    for the standard-names space, otherwise it means "no countermodel up to
    the bound"."""
    _check_mode(mode)
    oracle = _as_oracle(oracle)
    sig = _joint_signature(theory, phi, signature)
    goal = S.universal_closure(phi)
    for frame in _frames(sig, space, depth, caps):
        fe = _FrameEval(sig, frame, depth, caps)
        sat = fe.sat_theory(theory.formulas, mode, oracle.ground_truth)
        if sat is False:
            continue
        good = fe.eval(goal, {}, mode, oracle.ground_truth)
        if good is True:
            continue
        if isinstance(sat, bool):
            sat = np.ones(len(fe.masks), dtype=bool)
        bad = sat if good is False else sat & ~good
        idx = np.flatnonzero(bad)
        if len(idx):
            return CountermodelFound(fe.interpretation(int(fe.masks[idx[0]])))
    return Entailed(exact=isinstance(space, StandardNames))


def models_exist(theory: Theory, oracle: Union[Oracle, BeliefKernel],
                 mode: Mode = "any", space: Space = StandardNames(),
                 signature: Optional[Signature] = None, depth: int = 0,
                 caps: Caps = DEFAULT_CAPS) -> bool:
    oracle = _as_oracle(oracle)
    sig = _joint_signature(theory, None, signature)
    for frame in _frames(sig, space, depth, caps):
        fe = _FrameEval(sig, frame, depth, caps)
        sat = fe.sat_theory(theory.formulas, mode, oracle.ground_truth)
        if sat is True or (not isinstance(sat, bool) and sat.any()):
            return True
    return False


# ---------------------------------------------------------------------------
# Theory classification

class TheoryClass(Enum):
    EMPTY = "empty"
    PROP = "prop"
    HORN = "horn"
    GHORN = "ghorn"
    UNI = "uni"
    FOL = "fol"


_SUPERCLASSES: dict[TheoryClass, tuple[TheoryClass, ...]] = {
    TheoryClass.EMPTY: (TheoryClass.EMPTY, TheoryClass.PROP, TheoryClass.HORN,
                        TheoryClass.GHORN, TheoryClass.UNI, TheoryClass.FOL),
    TheoryClass.PROP: (TheoryClass.PROP, TheoryClass.UNI, TheoryClass.FOL),
    TheoryClass.HORN: (TheoryClass.HORN, TheoryClass.GHORN, TheoryClass.UNI,
                       TheoryClass.FOL),
    TheoryClass.GHORN: (TheoryClass.GHORN, TheoryClass.FOL),
    TheoryClass.UNI: (TheoryClass.UNI, TheoryClass.FOL),
    TheoryClass.FOL: (TheoryClass.FOL,),
}


def superclasses(cls: TheoryClass) -> tuple[TheoryClass, ...]:
    return _SUPERCLASSES[cls]


@dataclass(frozen=True)
class TheoryClassification:
    cls: TheoryClass
    notes: tuple[str, ...] = ()


def _strip(phi: Formula, node: type) -> tuple[list[str], Formula]:
    names = []
    while isinstance(phi, node):
        names.append(phi.var)
        phi = phi.sub
    return names, phi


def _conj_atoms(phi: Formula) -> Optional[list[Formula]]:
    if isinstance(phi, (Pred, Eq)):
        return [phi]
    if isinstance(phi, And):
        l = _conj_atoms(phi.left)
        r = _conj_atoms(phi.right)
        if l is not None and r is not None:
            return l + r
    return None


@dataclass(frozen=True)
class _Shape:
    prop: bool
    horn: bool
    ghorn: bool
    uni: bool
    notes: tuple[str, ...] = ()


def _formula_shape(phi: Formula) -> _Shape:
    """Fragment membership flags of one objective sentence, plus notes."""
    notes: list[str] = []
    prop = _is_prop(phi)
    uvars, core = _strip(phi, Forall)
    horn = False
    ghorn = False
    if isinstance(core, Implies) and _conj_atoms(core.left) is not None:
        evars, head = _strip(core.right, Exists)
        clean = len(set(evars)) == len(evars) and not set(evars) & set(uvars)
        if isinstance(head, (Pred, Eq)) and clean:
            ghorn = True
            horn = not evars
        elif _conj_atoms(head) is not None:
            notes.append("conjunctive-head rewrite admissible (not applied)")
    elif isinstance(core, Not) and _conj_atoms(core.sub) is not None:
        horn = ghorn = True  # headless
    elif isinstance(core, (Pred, Eq)):
        horn = ghorn = True  # fact
    else:
        evars, head = _strip(core, Exists)
        if evars and isinstance(head, (Pred, Eq)) and not set(evars) & set(uvars):
            ghorn = True
        elif evars and _conj_atoms(head) is not None:
            notes.append("conjunctive-head rewrite admissible (not applied)")
    uni = not _has_existential(S.desugar(phi), False)
    return _Shape(prop, horn, ghorn, uni, tuple(notes))


def _is_prop(phi: Formula) -> bool:
    if isinstance(phi, Pred):
        return not phi.args
    if isinstance(phi, (Eq, Neq)):
        return False
    if isinstance(phi, Not):
        return _is_prop(phi.sub)
    if isinstance(phi, (And, Or, Implies)):
        return _is_prop(phi.left) and _is_prop(phi.right)
    if isinstance(phi, (Exists, Forall, Modal)):
        return False
    raise TypeError(f"not a formula: {phi!r}")


def _has_existential(phi: Formula, negated: bool) -> bool:
    if isinstance(phi, (Pred, Eq)):
        return False
    if isinstance(phi, Not):
        return _has_existential(phi.sub, not negated)
    if isinstance(phi, And):
        return _has_existential(phi.left, negated) or _has_existential(phi.right, negated)
    if isinstance(phi, Exists):
        return (not negated) or _has_existential(phi.sub, negated)
    if isinstance(phi, Modal):
        return _has_existential(phi.sub, negated)
    raise TypeError(f"desugared formula expected: {phi!r}")


def classify_theory(theory: Theory) -> TheoryClassification:
    """Most specific syntactic class of an objective theory."""
    if not theory.is_objective():
        raise ModalNotAllowed("theory classification is defined for objective theories")
    if not theory.formulas:
        return TheoryClassification(TheoryClass.EMPTY)
    shapes = [_formula_shape(f) for f in theory.formulas]
    notes = tuple(dict.fromkeys(n for s in shapes for n in s.notes))
    if all(s.prop for s in shapes):
        return TheoryClassification(TheoryClass.PROP, notes)
    if all(s.horn for s in shapes):
        return TheoryClassification(TheoryClass.HORN, notes)
    if all(s.ghorn for s in shapes):
        return TheoryClassification(TheoryClass.GHORN, notes)
    if all(s.uni for s in shapes):
        return TheoryClassification(TheoryClass.UNI, notes)
    return TheoryClassification(TheoryClass.FOL, notes)


# ---------------------------------------------------------------------------
# Skolemization (generalized Horn -> Horn)

def skolemize(theory: Theory) -> Theory:
    """Replace existential heads by fresh constants (no leading universals) or
    fresh functions of the universal variables; equi-satisfiable output."""
    cls = classify_theory(theory).cls
    if cls not in (TheoryClass.EMPTY, TheoryClass.PROP, TheoryClass.HORN, TheoryClass.GHORN):
        raise NotGHorn(f"skolemization input must be generalized Horn, got {cls.value}")
    sig = theory.signature()
    taken = set(sig.constants) | {f for f, _ in sig.functions} | {p for p, _ in sig.predicates}
    counter = itertools.count()

    def fresh() -> str:
        while True:
            name = f"sk{next(counter)}"
            if name not in taken:
                taken.add(name)
                return name

    out: list[Formula] = []
    for f in theory.formulas:
        uvars, core = _strip(f, Forall)
        if isinstance(core, Implies):
            evars, head = _strip(core.right, Exists)
        else:
            evars, head = _strip(core, Exists)
        if not evars:
            out.append(f)
            continue
        beta: dict[str, Term] = {}
        for y in evars:
            if uvars:
                beta[y] = Func(fresh(), tuple(Var(x) for x in uvars))
            else:
                beta[y] = Const(fresh())
        new_head = apply_substitution(head, beta)
        body = Implies(core.left, new_head) if isinstance(core, Implies) else new_head
        for x in reversed(uvars):
            body = Forall(x, body)
        out.append(body)
    return Theory(tuple(out))


# ---------------------------------------------------------------------------
# Horn model intersection

def intersect_models(ws: Sequence[Interpretation], signature: Signature,
                     depth: int = 0) -> Interpretation:
    """The pointwise intersection of named models: the domain consists of the
    name-denotation tuples, predicates hold where they hold in every input."""
    if not ws:
        raise ValueError("need at least one interpretation")
    if signature.functions:
        raise AelabError("model intersection is implemented for function-free signatures")
    names = signature.names(depth)
    for w in ws:
        named = set()
        for t in names:
            named.add(w.eval_term(t, {}))
        if named != set(range(w.domain_size)):
            raise NotNamed("every individual of every input must be named")
    vectors: dict[tuple[int, ...], int] = {}
    name_vec: dict[Term, int] = {}
    for t in names:
        vec = tuple(w.eval_term(t, {}) for w in ws)
        if vec not in vectors:
            vectors[vec] = len(vectors)
        name_vec[t] = vectors[vec]
    elements = {i: vec for vec, i in vectors.items()}
    m = len(elements)
    const_den = tuple((c, name_vec[Const(c)]) for c in signature.constants)
    rels = []
    for sym, ar in sorted(signature.predicates):
        rel = set()
        for combo in itertools.product(range(m), repeat=ar):
            vecs = [elements[e] for e in combo]
            if all(tuple(v[j] for v in vecs) in ws[j].relation(sym, ar)
                   for j in range(len(ws))):
                rel.add(combo)
        rels.append(((sym, ar), frozenset(rel)))
    return Interpretation(domain_size=m, const_den=const_den, relations=tuple(rels))
