"""Command-line front end: parsing, grounding, stable models, embeddings,
expansions, membership queries, and the correspondence harnesses.

Every subcommand except `embed` (which emits theory text) prints a single
JSON report with the fields config/inputs/expansions/verdicts/witnesses/
exactness/timing.  Exit codes: 0 all checks hold, 1 a check failed (witness
in the report), 2 usage or parse error, 3 an enumeration cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import corr, embed, expand, foael, lp, textio
from .errors import AelabError, CapExceeded, ParseError, SemanticError
from .syntax import BeliefKernel, Caps, DEFAULT_CAPS, Program, Theory
from .textio import parse_formula, parse_program, parse_theory, render


def _parse_caps(text: str, base: Caps) -> Caps:
    values = {
        "atoms": base.max_ground_atoms,
        "interps": base.max_interpretations,
        "kernels": base.max_kernels,
        "probes": base.max_probes,
    }
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, _, val = part.partition("=")
        if key not in values or not val.isdigit():
            raise SemanticError(
                f"caps take key=value pairs over {sorted(values)}, got {part!r}")
        values[key] = int(val)
    return Caps(values["atoms"], values["interps"], values["kernels"], values["probes"])


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=("any", "all"), default="any",
                   help="belief-atom reading for quantified scopes")
    p.add_argument("--space", default="auto",
                   help="standard-names | bounded:D | auto (names + 2)")
    p.add_argument("--depth", type=int, default=0,
                   help="term depth bound when proper function symbols exist")
    p.add_argument("--caps", default=None,
                   help="override enumeration caps, e.g. atoms=20,interps=1048576")
    p.add_argument("--probe-width", type=int, default=2, dest="width",
                   help="maximum clause width of ground probe families")
    p.add_argument("--show-trivial-equalities", action="store_true",
                   help="re-add reflexive equalities in rendered atom sets")
    p.add_argument("--una-quantified", action="store_true",
                   help="use the single quantified uniqueness axiom")
    p.add_argument("--pia-equalities", action="store_true",
                   help="introspection axioms also range over ground equalities")
    p.add_argument("--timing", action="store_true",
                   help="include wall-clock timing in the report")


def _resolve_caps(args: argparse.Namespace) -> Caps:
    caps = DEFAULT_CAPS
    env = os.environ.get("AELAB_CAPS")
    if env:
        caps = _parse_caps(env, caps)
    if args.caps:
        caps = _parse_caps(args.caps, caps)
    return caps


def _resolve_space(args: argparse.Namespace, signature) -> foael.Space:
    text = args.space
    if text == "standard-names":
        return foael.StandardNames()
    if text in ("auto", "bounded"):
        return foael.default_bounded(signature, args.depth)
    if text.startswith("bounded:") and text.split(":", 1)[1].isdigit():
        return foael.Bounded(int(text.split(":", 1)[1]))
    raise SemanticError(f"unknown space {text!r}")


def _load_inputs(paths: Sequence[str]) -> tuple[Optional[Theory], Optional[Program], dict]:
    theory: Optional[Theory] = None
    program: Optional[Program] = None
    texts: dict = {}
    for p in paths:
        text = Path(p).read_text(encoding="utf-8")
        if p.endswith(".lp"):
            if program is not None:
                raise SemanticError("at most one program file")
            program = parse_program(text)
            texts["program"] = p
        elif p.endswith(".fot"):
            if theory is not None:
                raise SemanticError("at most one theory file")
            theory = parse_theory(text)
            texts["theory"] = p
        else:
            raise SemanticError(f"unknown input extension: {p} (.lp or .fot)")
    return theory, program, texts


def _kernel_strings(kernel: BeliefKernel, signature, depth: int,
                    show_trivial: bool) -> list[str]:
    out = [textio.render_formula(a) for a in kernel.sorted_atoms()]
    if show_trivial:
        for t in signature.names(depth):
            out.append(f"{textio.render_term(t)} = {textio.render_term(t)}")
    return out


def _variant(args: argparse.Namespace) -> embed.EmbeddingVariant:
    return embed.EmbeddingVariant(args.variant, with_una=not args.no_una)


def _report(args: argparse.Namespace, started: float, **fields) -> dict:
    config = {
        "mode": args.mode,
        "space": args.space,
        "depth": args.depth,
        "probe_width": args.width,
        "show_trivial_equalities": args.show_trivial_equalities,
        "una_quantified": args.una_quantified,
        "pia_equalities": args.pia_equalities,
    }
    report = {"config": config, "inputs": fields.pop("inputs", {}),
              "expansions": fields.pop("expansions", []),
              "verdicts": fields.pop("verdicts", {}),
              "witnesses": fields.pop("witnesses", []),
              "exactness": fields.pop("exactness", None),
              "timing": {"seconds": round(time.monotonic() - started, 3)}
              if args.timing else None}
    report.update(fields)
    return report


def _emit(report: dict) -> None:
    json.dump(report, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _expansion_rows(exps, signature, depth, show_trivial) -> list[dict]:
    return [{
        "kernel": _kernel_strings(e.kernel, signature, depth, show_trivial),
        "consistent": e.consistent,
    } for e in exps]


def _combination(theory: Optional[Theory], program: Optional[Program],
                 variant: embed.EmbeddingVariant, args, caps) -> tuple[Theory, object]:
    if program is None:
        if theory is None:
            raise SemanticError("need a program or a theory")
        return theory, theory.signature()
    base = theory if theory is not None else Theory(())
    sig = base.signature().union(program.signature)
    comb = embed.combine(base, program, variant, args.depth, caps,
                         una_quantified=args.una_quantified,
                         pia_equalities=args.pia_equalities)
    return comb, sig


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="aelab",
        description="embed rule programs into autoepistemic logic and check "
                    "correspondence claims by exhaustive enumeration")
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name: str, **kw) -> argparse.ArgumentParser:
        p = sub.add_parser(name, **kw)
        _add_common(p)
        return p

    p = cmd("parse", help="parse inputs and print their canonical text")
    p.add_argument("files", nargs="+")

    p = cmd("ground", help="ground a program over its own names")
    p.add_argument("files", nargs=1)

    p = cmd("stable", help="stable models of a program")
    p.add_argument("files", nargs=1)

    p = cmd("embed", help="emit the embedding of a program as theory text")
    p.add_argument("--variant", required=True, choices=embed.VARIANTS)
    p.add_argument("--no-una", action="store_true")
    p.add_argument("files", nargs=1)

    p = cmd("expand", help="stable expansions of an embedding or combination")
    p.add_argument("--variant", default="hp", choices=embed.VARIANTS)
    p.add_argument("--no-una", action="store_true")
    p.add_argument("files", nargs="+")

    p = cmd("member", help="membership of a probe in every stable expansion")
    p.add_argument("--variant", default="hp", choices=embed.VARIANTS)
    p.add_argument("--no-una", action="store_true")
    p.add_argument("--probe", required=True,
                   help="probe formula, inline text or a file path")
    p.add_argument("files", nargs="+")

    p = cmd("compare", help="probe-level equivalence of two embeddings")
    p.add_argument("--level", default="oga", choices=("oga", "og", "o", "full"))
    p.add_argument("--variant", required=True,
                   help="comma-separated pair, e.g. hp,eb")
    p.add_argument("--no-una", action="store_true")
    p.add_argument("files", nargs="+")

    p = cmd("check-figure1", help="consequence-inclusion graph over a corpus")
    p.add_argument("--corpus", required=True)

    p = cmd("check-table1", help="combination correspondences for one instance")
    p.add_argument("--theory", required=True)
    p.add_argument("--program", required=True)

    p = cmd("invariance", help="grounding invariance of a combination")
    p.add_argument("--variant", required=True, choices=embed.VARIANTS)
    p.add_argument("--no-una", action="store_true")
    p.add_argument("--theory", default=None)
    p.add_argument("--program", required=True)

    p = cmd("closed-domain", help="closed-domain behavior of a combination")
    p.add_argument("--variant", required=True, choices=embed.VARIANTS)
    p.add_argument("--no-una", action="store_true")
    p.add_argument("--theory", default=None)
    p.add_argument("--program", required=True)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    started = time.monotonic()
    try:
        return _dispatch(args, started)
    except (ParseError, SemanticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 3
    except AelabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args: argparse.Namespace, started: float) -> int:
    caps = _resolve_caps(args)

    if args.command == "parse":
        theory, program, texts = _load_inputs(args.files)
        verdicts = {}
        if program is not None:
            verdicts["program"] = render(program)
        if theory is not None:
            verdicts["theory"] = render(theory)
        _emit(_report(args, started, inputs=texts, verdicts=verdicts,
                      exactness="exact"))
        return 0

    if args.command == "ground":
        _, program, texts = _load_inputs(args.files)
        if program is None:
            raise SemanticError("ground needs a .lp input")
        grounded = lp.grounding(program, args.depth, caps)
        _emit(_report(args, started, inputs=texts,
                      verdicts={"grounding": render(grounded)},
                      exactness="exact"))
        return 0

    if args.command == "stable":
        _, program, texts = _load_inputs(args.files)
        if program is None:
            raise SemanticError("stable needs a .lp input")
        models = lp.stable_models(program, args.depth, caps)
        rows = []
        for m in models:
            kernel = BeliefKernel(frozenset(m))
            rows.append(_kernel_strings(kernel, program.signature, args.depth,
                                        args.show_trivial_equalities))
        _emit(_report(args, started, inputs=texts,
                      verdicts={"stable_models": rows, "count": len(rows)},
                      exactness="exact"))
        return 0

    if args.command == "embed":
        _, program, _ = _load_inputs(args.files)
        if program is None:
            raise SemanticError("embed needs a .lp input")
        th = embed.embed_program(program, _variant(args), args.depth, caps,
                                 args.una_quantified, args.pia_equalities)
        sys.stdout.write(render(th))
        return 0

    if args.command == "expand":
        theory, program, texts = _load_inputs(args.files)
        comb, sig = _combination(theory, program, _variant(args), args, caps)
        space = _resolve_space(args, sig)
        exps = expand.stable_expansions(comb, args.mode, space, sig, args.depth, caps)
        _emit(_report(args, started, inputs=texts,
                      expansions=_expansion_rows(exps, sig, args.depth,
                                                 args.show_trivial_equalities),
                      verdicts={"count": len(exps)},
                      exactness=space.label()))
        return 0

    if args.command == "member":
        theory, program, texts = _load_inputs(args.files)
        comb, sig = _combination(theory, program, _variant(args), args, caps)
        space = _resolve_space(args, sig)
        probe_text = args.probe
        if Path(probe_text).is_file():
            probe_text = Path(probe_text).read_text(encoding="utf-8")
        probe = parse_formula(probe_text)
        exps = expand.stable_expansions(comb, args.mode, space, sig, args.depth, caps)
        matrix = expand.membership_matrix(comb, exps, (probe,), args.mode,
                                          space, sig, args.depth, caps)
        rows = []
        for e, row in zip(exps, matrix):
            rows.append({"kernel": _kernel_strings(e.kernel, sig, args.depth,
                                                   args.show_trivial_equalities),
                         "consistent": e.consistent,
                         "member": row[0].holds, "exact": row[0].exact})
        cn = all(r["member"] for r in rows) if rows else True
        _emit(_report(args, started, inputs=texts,
                      verdicts={"probe": textio.render_formula(probe),
                                "per_expansion": rows,
                                "consequence": cn,
                                "vacuous": not rows},
                      exactness=space.label()))
        return 0

    if args.command == "compare":
        names = args.variant.split(",")
        if len(names) != 2:
            raise SemanticError("--variant takes a pair like hp,eb")
        theory, program, texts = _load_inputs(args.files)
        v1 = embed.EmbeddingVariant(names[0], with_una=not args.no_una)
        v2 = embed.EmbeddingVariant(names[1], with_una=not args.no_una)
        t1, sig = _combination(theory, program, v1, args, caps)
        t2, _ = _combination(theory, program, v2, args, caps)
        space = _resolve_space(args, sig)
        verdict = corr.equiv_at(t1, t2, corr.parse_level(args.level, args.width),
                                args.mode, space, sig, args.depth, caps)
        _emit(_report(args, started, inputs=texts,
                      verdicts={"level": args.level, "pair": args.variant,
                                "holds": verdict.holds},
                      witnesses=[verdict.witness] if verdict.witness else [],
                      exactness="exact" if verdict.exact else space.label()))
        return 0 if verdict.holds else 1

    if args.command == "check-figure1":
        corpus_dir = Path(args.corpus)
        programs = []
        for path in sorted(corpus_dir.glob("*.lp")):
            programs.append((path.stem, parse_program(path.read_text(encoding="utf-8"))))
        space = None if args.space == "auto" else _resolve_space(args, None)
        report = corr.figure1_check(programs, args.mode, space, args.width,
                                    args.depth, caps)
        _emit(_report(args, started, inputs={"corpus": str(corpus_dir)},
                      verdicts=report,
                      exactness="per-program bounded spaces"))
        return 0 if report["passed"] else 1

    if args.command == "check-table1":
        theory = parse_theory(Path(args.theory).read_text(encoding="utf-8"))
        program = parse_program(Path(args.program).read_text(encoding="utf-8"))
        sig = theory.signature().union(program.signature)
        space = _resolve_space(args, sig)
        report = corr.table1_check(theory, program, args.mode, space,
                                   args.width, args.depth, caps)
        _emit(_report(args, started,
                      inputs={"theory": args.theory, "program": args.program},
                      verdicts=report, exactness=space.label()))
        return 0 if report["passed"] else 1

    if args.command in ("invariance", "closed-domain"):
        theory = (parse_theory(Path(args.theory).read_text(encoding="utf-8"))
                  if args.theory else Theory(()))
        program = parse_program(Path(args.program).read_text(encoding="utf-8"))
        sig = theory.signature().union(program.signature)
        space = _resolve_space(args, sig)
        fn = (corr.grounding_invariance if args.command == "invariance"
              else corr.closed_domain_check)
        verdict = fn(_variant(args), theory, program, args.mode, space,
                     args.depth, caps)
        _emit(_report(args, started,
                      inputs={"theory": args.theory, "program": args.program},
                      verdicts={"holds": verdict.holds},
                      witnesses=[verdict.witness] if verdict.witness else [],
                      exactness="exact" if verdict.exact else space.label()))
        return 0 if verdict.holds else 1

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
