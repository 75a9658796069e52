"""Command-line front end.

Exit status: 0 when the answer is positive (holds, accepted, found), 1 when
it is negative (fails, rejected, exhausted), 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import contextlib
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional, Sequence, TextIO

from . import indices as ix
from .calculus import ScriptError, check_proof, parse_script, soundness_fuzz
from .concepts import ConceptFlavor, enumerate_concepts
from .core import DegreeError, FuzzyContext, Sort, SortError, degree, format_degree
from .io import (
    FormatError,
    dumps,
    lattice_to_dot,
    lattice_to_json,
    load_context,
    load_model,
    model_to_json,
)
from .semantics import Evaluator, ValuationError, consequence, countermodel_world
from .search import bounded_sat
from .syntax import FragmentError, ParseError, parse, parse_index, translate_rho

SEED_ENV = "WMLFCA_SEED"


def default_seed() -> int:
    try:
        return int(os.environ.get(SEED_ENV, "0"))
    except ValueError:
        return 0


@dataclass
class RunConfig:
    """Everything a command needs, recorded verbatim in its report."""

    command: str
    seed: int = 0
    output_format: str = "text"
    threshold: Optional[str] = None
    flavor: Optional[str] = None
    max_g: Optional[int] = None
    max_m: Optional[int] = None
    trials: Optional[int] = None
    inputs: dict[str, Any] = field(default_factory=dict)


@dataclass
class Outcome:
    ok: bool
    report: dict
    text: str


class UsageError(Exception):
    pass


def _sort(text: str) -> Sort:
    try:
        return Sort.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _crisp_text(items: Sequence[str]) -> str:
    return "{" + ", ".join(items) + "}"


# --------------------------------------------------------------------------
# commands


def cmd_concepts(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    ctx = load_context(args.context)
    if not isinstance(ctx, FuzzyContext):
        raise UsageError("concept lattices need a single-relation context")
    flavor = ConceptFlavor.parse(args.flavor)
    c = degree(args.cut)
    cfg.flavor, cfg.threshold = flavor.value, format_degree(c)
    lattice = enumerate_concepts(ctx, flavor, c)
    report = lattice_to_json(lattice)
    if args.dot:
        return Outcome(True, report, lattice_to_dot(lattice).rstrip("\n"))
    lines = [f"{len(lattice)} {flavor.value.replace('_', '-')} concept(s) at c = {format_degree(c)}"]
    for k, concept in enumerate(lattice.concepts):
        lines.append(f"  c{k}: ({_crisp_text(concept.extent.sorted())}, {_crisp_text(concept.intent.sorted())})")
    return Outcome(True, report, "\n".join(lines))


def cmd_check(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    model = load_model(args.model)
    sort = _sort(args.sort)
    phi = parse(args.formula, expected_sort=sort)
    ev = Evaluator(model)
    members = ev.truth_set(phi).members.sorted()
    if args.world is not None:
        holds = ev.satisfies(args.world, phi)
        scope = f"at {args.world}"
    else:
        holds = len(members) == model.context.size(sort)
        scope = "at every world"
    report = {"formula": str(phi), "sort": sort.value, "world": args.world,
              "holds": holds, "truth_set": members}
    text = f"{phi} {'holds' if holds else 'fails'} {scope}; truth set {_crisp_text(members)}"
    return Outcome(holds, report, text)


def cmd_consequence(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    models = [load_model(p) for p in args.model]
    sort = _sort(args.sort)
    gamma = [parse(g, expected_sort=sort) for g in args.gamma or []]
    phi = parse(args.formula, expected_sort=sort)
    holds = consequence(models, sort, gamma, phi)
    witness = None
    if not holds:
        for k, m in enumerate(models):
            w = countermodel_world(m, sort, gamma, phi)
            if w is not None:
                witness = {"model": args.model[k], "world": w}
                break
    report = {"gamma": [str(g) for g in gamma], "formula": str(phi), "sort": sort.value,
              "models": list(args.model), "holds": holds, "counterexample": witness}
    text = f"consequence {'holds' if holds else 'fails'} over {len(models)} model(s)"
    if witness:
        text += f"; fails at {witness['world']} in {witness['model']}"
    return Outcome(holds, report, text)


def cmd_prove(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    script = parse_script(Path(args.script).read_text())
    premises = [parse(p, declarations=script.declarations) for p in args.premise] if args.premise else None
    verdict = check_proof(script, premises, args.system)
    report = {"system": verdict.system, "accepted": verdict.accepted,
              "conclusion": str(verdict.conclusion) if verdict.conclusion is not None else None,
              "lines": [{"line": v.number, "ok": v.ok, "message": v.message,
                         "depends_on_hypotheses": v.depends_on_hypotheses} for v in verdict.lines]}
    head = f"{'accepted' if verdict.accepted else 'rejected'} in {verdict.system}"
    lines = [head] + [f"  {e}" for e in verdict.errors]
    if verdict.accepted:
        lines.append(f"  proves: {verdict.conclusion}")
    return Outcome(verdict.accepted, report, "\n".join(lines))


def cmd_translate(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    phi = parse(args.formula)
    out = translate_rho(phi, args.dir)
    report = {"direction": args.dir, "input": str(phi), "output": str(out), "sort": out.sort.value}
    return Outcome(True, report, str(out))


def cmd_sat(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    sort = _sort(args.sort)
    gamma = [parse(f, expected_sort=sort) for f in args.formula]
    cfg.max_g, cfg.max_m = args.max_g, args.max_m
    result = bounded_sat(gamma, sort, args.max_g, args.max_m)
    report: dict[str, Any] = {"status": result.status, "candidates": result.candidates,
                              "degrees": [format_degree(d) for d in sorted(result.degrees.degrees)],
                              "via_translation": result.translated}
    if result.found:
        report["world"] = result.world
        report["model"] = model_to_json(result.model)
        text = f"found: world {result.world} of a {len(result.model.context.objects)}x" \
               f"{len(result.model.context.attributes)} model"
    else:
        text = (f"exhausted: no model with at most {args.max_g} objects and {args.max_m} attributes "
                f"({result.candidates} candidates); this is not a proof of unsatisfiability")
    return Outcome(result.found, report, text)


def cmd_fuzz(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    cfg.trials = args.trials
    rep = soundness_fuzz(args.trials, args.max_domain, args.schema or None, seed=cfg.seed)
    report = {"trials": rep.trials, "instances": rep.instances, "ug_nec_checks": rep.ug_nec_checks,
              "ug_suff_checks": rep.ug_suff_checks, "per_schema": dict(rep.per_schema),
              "counterexamples": [{"schema": c.schema, "formula": str(c.formula), "world": c.world,
                                   "witness": model_to_json(c.minimized)} for c in rep.counterexamples[:10]],
              "sound": rep.sound}
    text = (f"{rep.trials} trial(s), {rep.instances} instance(s), "
            f"{len(rep.counterexamples)} counterexample(s)")
    for c in rep.counterexamples[:3]:
        text += f"\n  {c.describe()}"
    return Outcome(rep.sound, report, text)


def cmd_za_eq(args: argparse.Namespace, cfg: RunConfig) -> Outcome:
    i, j = parse_index(args.left), parse_index(args.right)
    rep = ix.za_report(i, j)
    primary = rep.demorgan if args.algebra == "demorgan" else rep.kleene
    report = {"left": ix.format_index(i), "right": ix.format_index(j), "equal": primary,
              "kleene": rep.kleene, "demorgan": rep.demorgan, "checks_disagree": rep.disagree}
    text = f"{ix.format_index(i)} {'=' if primary else '!='} {ix.format_index(j)}"
    if rep.disagree:
        text += f" (kleene: {rep.kleene}, demorgan: {rep.demorgan})"
    return Outcome(primary, report, text)


COMMANDS: dict[str, Callable[[argparse.Namespace, RunConfig], Outcome]] = {
    "concepts": cmd_concepts, "check": cmd_check, "consequence": cmd_consequence, "prove": cmd_prove,
    "translate": cmd_translate, "sat": cmd_sat, "fuzz": cmd_fuzz, "za-eq": cmd_za_eq,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wmlfca", description="Weighted modal logic over fuzzy formal contexts.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", dest="output_format")
    common.add_argument("--seed", type=int, default=None, help=f"random seed (default: ${SEED_ENV} or 0)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("concepts", parents=[common], help="list the cut concepts of a context")
    p.add_argument("context")
    p.add_argument("--flavor", default="formal", help="formal, oo or po")
    p.add_argument("--cut", required=True, help="threshold c")
    p.add_argument("--dot", action="store_true", help="emit the Hasse diagram in DOT")

    p = sub.add_parser("check", parents=[common], help="model-check a formula")
    p.add_argument("--model", required=True)
    p.add_argument("--sort", required=True, choices=("o", "p"))
    p.add_argument("--world", help="omit to check every world of the sort")
    p.add_argument("--formula", required=True)

    p = sub.add_parser("consequence", parents=[common], help="local consequence over listed models")
    p.add_argument("--model", required=True, action="append")
    p.add_argument("--sort", required=True, choices=("o", "p"))
    p.add_argument("--gamma", action="append", help="assumption (repeatable)")
    p.add_argument("--formula", required=True)

    p = sub.add_parser("prove", parents=[common], help="check a proof script")
    p.add_argument("--script", required=True)
    p.add_argument("--system", default="2WML")
    p.add_argument("--premise", action="append", help="allowed premise formula (repeatable)")

    p = sub.add_parser("translate", parents=[common], help="swap necessity and sufficiency")
    p.add_argument("--dir", required=True, choices=("suff2nec", "nec2suff"))
    p.add_argument("formula")

    p = sub.add_parser("sat", parents=[common], help="bounded model search")
    p.add_argument("--max-g", type=int, default=2)
    p.add_argument("--max-m", type=int, default=2)
    p.add_argument("--sort", default="o", choices=("o", "p"))
    p.add_argument("formula", nargs="+")

    p = sub.add_parser("fuzz", parents=[common], help="randomized soundness check of the axioms")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--max-domain", type=int, default=4)
    p.add_argument("--schema", action="append", help="restrict to a schema (repeatable)")

    p = sub.add_parser("za-eq", parents=[common], help="equality of index terms")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--algebra", choices=("kleene", "demorgan"), default="kleene")
    return parser


def main(argv: Optional[Sequence[str]] = None, stdout: TextIO = sys.stdout, stderr: TextIO = sys.stderr) -> int:
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    seed = args.seed if args.seed is not None else default_seed()
    cfg = RunConfig(command=args.command, seed=seed, output_format=args.output_format,
                    inputs={k: v for k, v in vars(args).items()
                            if k not in ("command", "seed", "output_format")})
    try:
        outcome = COMMANDS[args.command](args, cfg)
    except (ParseError, ScriptError, FormatError, DegreeError, SortError, FragmentError, UsageError,
            ValuationError, KeyError, ValueError, OSError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"wmlfca {args.command}: error: {message}", file=stderr)
        return 2
    if args.output_format == "json":
        payload = {"config": asdict(cfg), "result": outcome.report,
                   "status": "positive" if outcome.ok else "negative"}
        stdout.write(dumps(payload))
    else:
        stdout.write(outcome.text + "\n")
    return 0 if outcome.ok else 1


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
