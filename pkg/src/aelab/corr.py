"""Equivalence and consequence-inclusion checkers between embedding variants,
plus the harnesses that machine-check the consequence-graph, the combination
correspondence table, grounding invariance, and closed-domain behavior.

Everything is decided by enumeration on finite probe families and finite
interpretation spaces; verdicts carry an exactness flag (bounded-space
entailment is refutation up to the bound, never a proof).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import CapExceeded
from . import embed as E
from .embed import EmbeddingVariant, combine, embed_program, embed_rule_body
from . import expand as X
from .expand import Expansion, stable_expansions
from . import foael
from .foael import (
    KernelLookup, Mode, Space, StandardNames, TheoryClass, classify_theory,
    default_bounded, superclasses,
)
from . import textio
from .syntax import (
    Caps, DEFAULT_CAPS, Exists, Forall, Formula, Implies, Modal, Not, Pred,
    Program, Signature, Theory, Var, disj, ground_atoms,
)

# ---------------------------------------------------------------------------
# Probe levels and probe families

@dataclass(frozen=True)
class OGA:
    def label(self) -> str:
        return "oga"


@dataclass(frozen=True)
class OG:
    width: int = 2

    def label(self) -> str:
        return "og"


@dataclass(frozen=True)
class O:
    width: int = 2

    def label(self) -> str:
        return "o"


@dataclass(frozen=True)
class Full:
    width: int = 2

    def label(self) -> str:
        return "full"


ProbeLevel = Union[OGA, OG, O, Full]


def parse_level(text: str, width: int = 2) -> ProbeLevel:
    return {"oga": OGA(), "og": OG(width), "o": O(width), "full": Full(width)}[text]


def probe_family(signature: Signature, level: ProbeLevel, depth: int = 0,
                 caps: Caps = DEFAULT_CAPS) -> tuple[Formula, ...]:
    """Finite surrogate for the objective-ground-atomic / objective-ground /
    objective / full formula classes."""
    atoms = ground_atoms(signature, depth, caps)
    probes: list[Formula] = list(atoms)
    if isinstance(level, OGA):
        return tuple(probes)
    width = level.width
    for k in range(1, width + 1):
        for signs in itertools.product((False, True), repeat=k):
            if k == 1 and signs == (False,):
                continue  # positive unit clauses are the atoms themselves
            for combo in itertools.combinations(atoms, k):
                lits = [Not(a) if s else a for a, s in zip(combo, signs)]
                clause = disj(lits)
                assert clause is not None
                probes.append(clause)
                if len(probes) > caps.max_probes:
                    raise CapExceeded(f"probe family exceeds cap {caps.max_probes}")
    if isinstance(level, OG):
        return tuple(probes)
    unary = sorted(sym for sym, ar in signature.predicates if ar == 1)
    x = Var("X")
    for p in unary:
        probes.append(Forall("X", Pred(p, (x,))))
        probes.append(Exists("X", Pred(p, (x,))))
    for p, q in itertools.permutations(unary, 2):
        probes.append(Forall("X", Implies(Pred(p, (x,)), Pred(q, (x,)))))
    if isinstance(level, O):
        return tuple(probes)
    for a in atoms:
        probes.append(Modal(a))
        probes.append(Not(Modal(a)))
    if len(probes) > caps.max_probes:
        raise CapExceeded(f"probe family exceeds cap {caps.max_probes}")
    return tuple(probes)


# ---------------------------------------------------------------------------
# Verdicts

@dataclass(frozen=True)
class CorrespondenceVerdict:
    holds: bool
    exact: bool
    witness: Optional[dict] = None

    def to_json(self) -> dict:
        out = {"holds": self.holds, "exact": self.exact}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _probe_vectors(theory: Theory, expansions: Sequence[Expansion],
                   probes: Sequence[Formula], mode: Mode, space: Space,
                   signature: Signature, depth: int, caps: Caps
                   ) -> list[tuple[tuple[bool, ...], bool]]:
    matrix = X.membership_matrix(theory, expansions, probes, mode, space,
                                 signature, depth, caps)
    return [(tuple(v.holds for v in row), all(v.exact for v in row))
            for row in matrix]


def equiv_at(theory1: Theory, theory2: Theory, level: ProbeLevel,
             mode: Mode = "any", space: Optional[Space] = None,
             signature: Optional[Signature] = None, depth: int = 0,
             caps: Caps = DEFAULT_CAPS,
             extra_probes: Sequence[Formula] = ()) -> CorrespondenceVerdict:
    """Bidirectional matching of stable expansions up to probe-level
    indistinguishability (a perfect matching exists iff the multisets of
    probe vectors coincide)."""
    sig = signature or theory1.signature().union(theory2.signature())
    if space is None:
        space = default_bounded(sig, depth)
    probes = probe_family(sig, level, depth, caps) + tuple(extra_probes)
    exps1 = stable_expansions(theory1, mode, space, sig, depth, caps)
    exps2 = stable_expansions(theory2, mode, space, sig, depth, caps)
    vecs1 = _probe_vectors(theory1, exps1, probes, mode, space, sig, depth, caps)
    vecs2 = _probe_vectors(theory2, exps2, probes, mode, space, sig, depth, caps)
    exact = (isinstance(space, StandardNames)
             and all(x for _, x in vecs1) and all(x for _, x in vecs2))
    c1 = Counter(v for v, _ in vecs1)
    c2 = Counter(v for v, _ in vecs2)
    if c1 == c2:
        return CorrespondenceVerdict(True, exact)
    # deterministic witness: first unmatched expansion, plus a probe that
    # separates it from the first expansion on the other side (if any)
    witness: dict = {}
    for side, exps, vecs, own, other in (("left", exps1, vecs1, c1, c2),
                                         ("right", exps2, vecs2, c2, c1)):
        for e, (v, _) in zip(exps, vecs):
            if other[v] < own[v]:
                witness = {"side": side,
                           "kernel": textio.render(e.kernel),
                           "consistent": e.consistent}
                opposite = vecs2 if side == "left" else vecs1
                if opposite:
                    ov = opposite[0][0]
                    for i, p in enumerate(probes):
                        if v[i] != ov[i]:
                            witness["probe"] = textio.render_formula(p)
                            break
                else:
                    witness["probe"] = "(no expansion on the other side)"
                break
        if witness:
            break
    return CorrespondenceVerdict(False, exact, witness)


def cn_profile(theory: Theory, probes: Sequence[Formula], mode: Mode,
               space: Space, signature: Signature, depth: int, caps: Caps,
               expansions: Optional[Sequence[Expansion]] = None
               ) -> tuple[tuple[bool, ...], bool]:
    """Consequence bits: probe belongs to every stable expansion (vacuously
    true when there is none)."""
    verdicts = X.consequences(theory, probes, mode, space, signature, depth,
                              caps, expansions)
    return tuple(v.holds for _, v in verdicts), all(v.exact for _, v in verdicts)


def cn_subset_at(theory1: Theory, theory2: Theory, level: ProbeLevel,
                 mode: Mode = "any", space: Optional[Space] = None,
                 signature: Optional[Signature] = None, depth: int = 0,
                 caps: Caps = DEFAULT_CAPS,
                 extra_probes: Sequence[Formula] = ()) -> CorrespondenceVerdict:
    """Inclusion of autoepistemic consequences restricted to the probes."""
    sig = signature or theory1.signature().union(theory2.signature())
    if space is None:
        space = default_bounded(sig, depth)
    probes = probe_family(sig, level, depth, caps) + tuple(extra_probes)
    bits1, exact1 = cn_profile(theory1, probes, mode, space, sig, depth, caps)
    bits2, exact2 = cn_profile(theory2, probes, mode, space, sig, depth, caps)
    exact = exact1 and exact2
    for p, b1, b2 in zip(probes, bits1, bits2):
        if b1 and not b2:
            return CorrespondenceVerdict(
                False, exact, {"probe": textio.render_formula(p)})
    return CorrespondenceVerdict(True, exact)


# ---------------------------------------------------------------------------
# Consequence-graph harness

_SOLID_O: tuple[tuple[str, str], ...] = (
    ("eb", "eh"), ("eb", "hp"), ("eb", "eb-v"),
    ("hp", "hp-v"), ("eb-v", "hp-v"),
    ("eh", "eh-v"), ("eh-v", "eh"),
)
_DASHED_O: tuple[tuple[str, str], ...] = (("eh", "eb"), ("eh-v", "eb-v"))

_GROUPS_OG: tuple[tuple[str, ...], ...] = (("eb", "eh", "eh-v"), ("eb-v", "hp-v"), ("hp",))
_CROSS_OG: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (2, 1))


def _og_arcs() -> tuple[tuple[str, str], ...]:
    arcs: list[tuple[str, str]] = []
    for grp in _GROUPS_OG:
        for a, b in itertools.permutations(grp, 2):
            arcs.append((a, b))
    for gi, gj in _CROSS_OG:
        for a in _GROUPS_OG[gi]:
            for b in _GROUPS_OG[gj]:
                arcs.append((a, b))
    return tuple(arcs)


def _reach(arcs: Iterable[tuple[str, str]], nodes: Sequence[str]) -> set[tuple[str, str]]:
    closure = {(a, b) for a, b in arcs if a in nodes and b in nodes}
    closure |= {(n, n) for n in nodes}
    changed = True
    while changed:
        changed = False
        for a, b in tuple(closure):
            for c, d in tuple(closure):
                if b == c and (a, d) not in closure:
                    closure.add((a, d))
                    changed = True
    return closure


def _variants_for(program: Program) -> tuple[EmbeddingVariant, ...]:
    if program.is_normal:
        return (E.HP, E.EB, E.EH, E.HPV, E.EBV, E.EHV)
    return (E.HPV, E.EBV, E.EHV)


def figure1_check(corpus: Sequence[tuple[str, Program]], mode: Mode = "any",
                  space: Optional[Space] = None, width: int = 2, depth: int = 0,
                  caps: Caps = DEFAULT_CAPS) -> dict:
    """Check the consequence-inclusion graph on a program corpus.

    For every ordered variant pair and program: inclusions implied by solid
    arcs (dashed arcs too when the program is safe) must hold; every pair not
    implied by solid arcs must be refuted by at least one corpus program on
    which it was not required."""
    figures = {
        "objective": (_SOLID_O, _DASHED_O, O(width)),
        "objective-ground": (_og_arcs(), (), OG(width)),
    }
    report: dict = {"passed": True, "figures": {}}
    prepared = []
    for name, program in corpus:
        variants = _variants_for(program)
        sig = program.signature
        sp = space or default_bounded(sig, depth)
        bundle = {}
        for v in variants:
            th = embed_program(program, v, depth, caps)
            exps = stable_expansions(th, mode, sp, sig, depth, caps)
            bundle[v.name] = (th, exps)
        prepared.append((name, program, sig, sp, bundle))
    for figname, (solid, dashed, level) in figures.items():
        fig: dict = {"required_failures": [], "non_edges": [], "programs": {}}
        inclusion_results: dict[tuple[str, str], list[tuple[str, bool, bool]]] = {}
        for name, program, sig, sp, bundle in prepared:
            names = list(bundle)
            probes = probe_family(sig, level, depth, caps)
            profiles = {
                vname: cn_profile(th, probes, mode, sp, sig, depth, caps, exps)
                for vname, (th, exps) in bundle.items()
            }
            solid_reach = _reach(solid, names)
            any_reach = _reach(tuple(solid) + tuple(dashed), names)
            prog_rows = []
            for a, b in itertools.permutations(names, 2):
                required = (a, b) in solid_reach or (
                    program.is_safe and (a, b) in any_reach)
                bits_a, _ = profiles[a]
                bits_b, _ = profiles[b]
                included = all((not x) or y for x, y in zip(bits_a, bits_b))
                prog_rows.append({"pair": f"{a} <= {b}", "required": required,
                                  "included": included})
                inclusion_results.setdefault((a, b), []).append(
                    (name, required, included))
                if required and not included:
                    wit = next(textio.render_formula(p)
                               for p, x, y in zip(probes, bits_a, bits_b)
                               if x and not y)
                    fig["required_failures"].append(
                        {"program": name, "pair": f"{a} <= {b}", "probe": wit})
                    report["passed"] = False
            fig["programs"][name] = prog_rows
        all_nodes = ("hp", "eb", "eh", "hp-v", "eb-v", "eh-v")
        solid_reach_all = _reach(solid, all_nodes)
        for a, b in itertools.permutations(all_nodes, 2):
            if (a, b) in solid_reach_all:
                continue
            witnesses = [nm for nm, required, included
                         in inclusion_results.get((a, b), ())
                         if not required and not included]
            fig["non_edges"].append({"pair": f"{a} <= {b}",
                                     "witnessed_by": witnesses})
            if not witnesses:
                report["passed"] = False
        report["figures"][figname] = fig
    return report


# ---------------------------------------------------------------------------
# Combination-correspondence harness

_LEVELS = ("oga", "og", "full")  # coarse to fine

# most general correspondences between combinations, per (theory class,
# program class); normal-variant entries apply only to normal programs
_TABLE: dict[tuple[TheoryClass, str], tuple[tuple[str, str, str], ...]] = {
    (TheoryClass.FOL, "lp"): (("eh", "eh-v", "full"),),
    (TheoryClass.FOL, "glp"): (("eb", "eh", "full"), ("hp-v", "eb-v", "full")),
    (TheoryClass.GHORN, "glp"): (("hp", "eh", "oga"), ("hp-v", "eh-v", "oga")),
    (TheoryClass.PROP, "lp"): (("hp-v", "eb-v", "og"), ("eb", "eh", "og")),
    (TheoryClass.PROP, "slp"): (("eb", "eh", "full"),),
    (TheoryClass.EMPTY, "lp"): (("hp", "eb", "oga"), ("hp", "eh", "oga"),
                                ("hp-v", "eh-v", "oga")),
}


def _program_tags(program: Program) -> tuple[str, ...]:
    tags = ["lp"]
    if program.is_safe:
        tags.append("slp")
    if program.is_ground:
        tags.append("glp")
    return tuple(tags)


def derived_equivalences(theory_cls: TheoryClass, program: Program
                         ) -> dict[frozenset[str], str]:
    """Table entries applicable to the instance, closed under the trivial
    inferences (level weakening, symmetry, transitivity)."""
    normal = program.is_normal
    base: dict[frozenset[str], str] = {}
    for (cls, tag), entries in _TABLE.items():
        if cls not in superclasses(theory_cls) or tag not in _program_tags(program):
            continue
        for v1, v2, level in entries:
            if not normal and (not v1.endswith("-v") or not v2.endswith("-v")):
                continue
            key = frozenset((v1, v2))
            old = base.get(key)
            if old is None or _LEVELS.index(level) > _LEVELS.index(old):
                base[key] = level
    out: dict[frozenset[str], str] = {}
    for i, level in reversed(list(enumerate(_LEVELS))):
        # connected components of edges at >= this level
        edges = [tuple(k) for k, lv in base.items() if _LEVELS.index(lv) >= i]
        nodes = {n for e in edges for n in e}
        comp: dict[str, str] = {n: n for n in nodes}

        def find(n: str) -> str:
            while comp[n] != n:
                comp[n] = comp[comp[n]]
                n = comp[n]
            return n

        for a, b in edges:
            comp[find(a)] = find(b)
        for a, b in itertools.combinations(sorted(nodes), 2):
            if find(a) == find(b):
                key = frozenset((a, b))
                if key not in out:
                    out[key] = _LEVELS[i]
    return out


def table1_check(theory: Theory, program: Program, mode: Mode = "any",
                 space: Optional[Space] = None, width: int = 2, depth: int = 0,
                 caps: Caps = DEFAULT_CAPS) -> dict:
    """Check every correspondence the table derives for the instance's cell.

    Unsubscripted equivalence is approximated by the full probe family and
    labelled probe-limited."""
    cls = classify_theory(theory)
    derived = derived_equivalences(cls.cls, program)
    sig = theory.signature().union(program.signature)
    sp = space or default_bounded(sig, depth)
    checks = []
    passed = True
    for key, level in sorted(derived.items(), key=lambda kv: sorted(kv[0])):
        v1, v2 = sorted(key)
        t1 = combine(theory, program, EmbeddingVariant(v1), depth, caps)
        t2 = combine(theory, program, EmbeddingVariant(v2), depth, caps)
        lv = parse_level(level, width)
        verdict = equiv_at(t1, t2, lv, mode, sp, sig, depth, caps)
        entry = {"pair": f"{v1} ~ {v2}", "level": level,
                 "probe_limited": level == "full",
                 **verdict.to_json()}
        checks.append(entry)
        passed = passed and verdict.holds
    return {
        "theory_class": cls.cls.value,
        "classification_notes": list(cls.notes),
        "program_tags": list(_program_tags(program)) + (
            ["normal"] if program.is_normal else []),
        "checks": checks,
        "passed": passed,
    }


# ---------------------------------------------------------------------------
# Grounding invariance and closed domains

def grounding_invariance(variant: EmbeddingVariant, theory: Theory,
                         program: Program, mode: Mode = "any",
                         space: Optional[Space] = None, depth: int = 0,
                         caps: Caps = DEFAULT_CAPS) -> CorrespondenceVerdict:
    """Do the combination and the combination of the grounded program agree
    on ground atoms?"""
    from . import lp
    c1 = combine(theory, program, variant, depth, caps)
    c2 = combine(theory, lp.grounding(program, depth, caps), variant, depth, caps)
    sig = theory.signature().union(program.signature)
    return equiv_at(c1, c2, OGA(), mode, space, sig, depth, caps)


def closed_domain_check(variant: EmbeddingVariant, theory: Theory,
                        program: Program, mode: Mode = "any",
                        space: Optional[Space] = None, depth: int = 0,
                        caps: Caps = DEFAULT_CAPS) -> CorrespondenceVerdict:
    """Rule bodies may only fire under assignments mapping every rule variable
    to a named individual, in every model of every stable expansion."""
    comb = combine(theory, program, variant, depth, caps)
    sig = theory.signature().union(program.signature)
    sp = space or default_bounded(sig, depth)
    exps = stable_expansions(comb, mode, sp, sig, depth, caps)
    exact = isinstance(sp, StandardNames)
    for e in exps:
        truth = KernelLookup(e.kernel).ground_truth
        for fr in foael._frames(sig, sp, depth, caps):
            fe = foael._FrameEval(sig, fr, depth, caps)
            sat = fe.sat_theory(comb.formulas, mode, truth)
            if sat is False:
                continue
            names = fe.names_by_element()
            for ri, rule in enumerate(program.rules):
                vs = sorted(rule.variables())
                if not vs:
                    continue
                body = embed_rule_body(rule, variant)
                for combo in itertools.product(range(fr.m), repeat=len(vs)):
                    if all(e_ in names for e_ in combo):
                        continue
                    env = dict(zip(vs, combo))
                    fired = True if body is None else fe.eval(body, env, mode, truth)
                    if fired is False:
                        continue
                    if fired is True:
                        bad = sat
                    else:
                        bad = fired if sat is True else (sat & fired)
                    if bad is True or bad.any():
                        mask = 0 if bad is True else int(fe.masks[np.flatnonzero(bad)[0]])
                        w = fe.interpretation(mask)
                        witness = {
                            "kernel": textio.render(e.kernel),
                            "rule": textio.render_rule(rule),
                            "assignment": {v: int(el) for v, el in env.items()},
                            "domain_size": fr.m,
                            "interpretation": _interp_summary(w),
                        }
                        return CorrespondenceVerdict(False, exact, witness)
    return CorrespondenceVerdict(True, exact)


def _interp_summary(w: foael.Interpretation) -> dict:
    return {
        "domain_size": w.domain_size,
        "constants": {c: e for c, e in w.const_den},
        "relations": {
            f"{sym}/{ar}": sorted(sorted(t) for t in rel) if ar > 1
            else sorted(t[0] for t in rel) if ar == 1 else [1]
            for (sym, ar), rel in w.relations if rel
        },
    }
