"""Command-line surface: check, elaborate, solve, and a small REPL.

Exit codes: 0 on success, 1 on semantic errors (type errors, unresolved
presuppositions, empty solution sets), 2 on syntax or usage errors.  Reports
go to stdout, errors to stderr; `--json` output is byte-stable across runs.
"""

from __future__ import annotations

import argparse
import json
import sys

from .derivations import CheckConfig, to_json_dict
from .elaborate import elaborate_all
from .evaluator import EvalError
from .frontend import (
    ParseError,
    UnknownWord,
    interpret,
    parse_context_text,
    parse_discourse,
    parse_signature_text,
    parse_term,
)
from .lexicon import base_signature
from .solver import solve
from .syntax import Context, format_term
from .typecheck import TypeCheckError, UnresolvedPresupposition, check_context, check_signature, infer_all


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="presup",
        description="Type-check, solve and elaborate presuppositions in a small dependent type theory.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, context: bool = True) -> None:
        p.add_argument("--signature", metavar="FILE", help="extend the base signature from FILE")
        if context:
            p.add_argument("--context", metavar="FILE", help="load local hypotheses from FILE")
        p.add_argument("--json", action="store_true", help="structured output")
        p.add_argument("--depth", type=int, default=None, help="witness search depth")
        p.add_argument("--max-solutions", type=int, default=None, help="witnesses per presupposition")
        p.add_argument("--step-budget", type=int, default=None, help="reduction step budget")

    check = sub.add_parser("check", help="type-check a term, printing each derived type")
    common(check)
    check.add_argument("term", metavar="TERM", help="a term, or @FILE to read one")

    elab = sub.add_parser("elaborate", help="replace presuppositions by their witnesses")
    common(elab)
    elab.add_argument("--discourse", action="store_true", help="treat the input as controlled English")
    elab.add_argument("--max", type=int, default=None, help="print at most N results")
    elab.add_argument("input", metavar="INPUT", help="a term or discourse, or @FILE")

    solve_cmd = sub.add_parser("solve", help="list witnesses for a goal type")
    common(solve_cmd)
    solve_cmd.add_argument("goal", metavar="GOALTYPE", help="the goal type, or @FILE")

    repl = sub.add_parser("repl", help="interactive loop")
    common(repl)
    return parser


def _config(args) -> CheckConfig:
    cfg = CheckConfig()
    updates = {}
    if args.depth is not None:
        updates["solver_depth"] = args.depth
    if args.max_solutions is not None:
        updates["max_solutions_per_require"] = args.max_solutions
    if args.step_budget is not None:
        updates["step_budget"] = args.step_budget
    if updates:
        cfg = CheckConfig(
            solver_depth=updates.get("solver_depth", cfg.solver_depth),
            max_solutions_per_require=updates.get(
                "max_solutions_per_require", cfg.max_solutions_per_require
            ),
            max_total_derivations=cfg.max_total_derivations,
            step_budget=updates.get("step_budget", cfg.step_budget),
        )
    return cfg


def _load_environment(args, cfg: CheckConfig):
    sig = base_signature()
    if args.signature:
        with open(args.signature, encoding="utf-8") as handle:
            sig = parse_signature_text(handle.read(), sig)
    check_signature(sig, cfg)
    ctx = Context()
    if getattr(args, "context", None):
        with open(args.context, encoding="utf-8") as handle:
            ctx = parse_context_text(handle.read(), sig)
    check_context(sig, ctx, cfg)
    return sig, ctx


def _read_input(value: str) -> str:
    if value.startswith("@"):
        with open(value[1:], encoding="utf-8") as handle:
            return handle.read().strip()
    return value


def _print_json(payload, out) -> None:
    out.write(json.dumps(payload, sort_keys=True, indent=2))
    out.write("\n")


def _report_semantic_error(error: Exception, err) -> int:
    if isinstance(error, UnresolvedPresupposition):
        err.write(f"error: unresolved presupposition: {format_term(error.goal)}\n")
        if error.ctx.entries:
            hypotheses = "; ".join(
                f"{name} : {format_term(t)}" for name, t in error.ctx.entries
            )
            err.write(f"context: {hypotheses}\n")
        else:
            err.write("context: <empty>\n")
    else:
        err.write(f"error: {error}\n")
    return 1


def cmd_check(args, out, err) -> int:
    cfg = _config(args)
    sig, ctx = _load_environment(args, cfg)
    term = parse_term(_read_input(args.term), sig.names)
    derivations = infer_all(sig, ctx, term, cfg)
    if args.json:
        _print_json([to_json_dict(d) for d in derivations], out)
        return 0
    groups: list = []
    for derivation in derivations:
        rendered = format_term(derivation.conclusion.classifier)
        for group in groups:
            if group[0] == rendered:
                group[1] += 1
                break
        else:
            groups.append([rendered, 1])
    for rendered, count in groups:
        plural = "derivation" if count == 1 else "derivations"
        out.write(f"{rendered}, {count} {plural}\n")
    return 0


def cmd_elaborate(args, out, err) -> int:
    cfg = _config(args)
    sig, ctx = _load_environment(args, cfg)
    text = _read_input(args.input)
    if args.discourse:
        term = interpret(parse_discourse(text))
    else:
        term = parse_term(text, sig.names)
    results = elaborate_all(sig, ctx, term, cfg)
    if args.max is not None:
        results = results[: args.max]
    if args.json:
        payload = [
            {"term": format_term(t), "type": format_term(ty)} for t, ty in results
        ]
        _print_json(payload, out)
        return 0
    for elaborated, classifier in results:
        out.write(f"{format_term(elaborated)} : {format_term(classifier)}\n")
    return 0


def _validated_goal(sig, ctx, text: str, cfg: CheckConfig):
    """Parse a solver goal and insist it is a type under sig and ctx."""
    from .evaluator import normalize
    from .syntax import Universe

    goal = parse_term(text, sig.names)
    derivations = infer_all(sig, ctx, goal, cfg)
    classifiers = [normalize(d.conclusion.classifier, cfg.step_budget) for d in derivations]
    if not any(isinstance(c, Universe) for c in classifiers):
        raise TypeCheckError(f"{format_term(goal)} is not a type")
    return goal


def cmd_solve(args, out, err) -> int:
    cfg = _config(args)
    sig, ctx = _load_environment(args, cfg)
    goal = _validated_goal(sig, ctx, _read_input(args.goal), cfg)
    solutions = solve(sig, ctx, goal, cfg)
    if args.json:
        payload = [
            {
                "witness": format_term(s.witness),
                "type": format_term(s.derivation.conclusion.classifier),
            }
            for s in solutions
        ]
        _print_json(payload, out)
        return 0 if solutions else 1
    if not solutions:
        err.write("no solutions\n")
        return 1
    for solution in solutions:
        rendered = format_term(solution.derivation.conclusion.classifier)
        out.write(f"{format_term(solution.witness)} : {rendered}\n")
    return 0


def cmd_repl(args, out, err, instream) -> int:
    cfg = _config(args)
    sig, ctx = _load_environment(args, cfg)
    out.write("commands: :check :elab :solve :discourse :ctx add NAME : TYPE :quit\n")
    while True:
        out.write("> ")
        out.flush()
        line = instream.readline()
        if not line:
            return 0
        line = line.strip()
        if not line:
            continue
        if line == ":quit":
            return 0
        try:
            ctx = _repl_dispatch(line, sig, ctx, cfg, out)
        except (ParseError, UnknownWord, TypeCheckError, EvalError) as error:
            _report_semantic_error(error, out)
        except OSError as error:
            out.write(f"error: {error}\n")


def _repl_dispatch(line: str, sig, ctx, cfg, out):
    command, _, rest = line.partition(" ")
    rest = rest.strip()
    if command == ":check":
        derivations = infer_all(sig, ctx, parse_term(rest, sig.names), cfg)
        for derivation in derivations:
            out.write(f"{format_term(derivation.conclusion.classifier)}\n")
    elif command == ":elab":
        results = elaborate_all(sig, ctx, parse_term(rest, sig.names), cfg)
        for elaborated, classifier in results:
            out.write(f"{format_term(elaborated)} : {format_term(classifier)}\n")
    elif command == ":solve":
        solutions = solve(sig, ctx, _validated_goal(sig, ctx, rest, cfg), cfg)
        if not solutions:
            out.write("no solutions\n")
        for solution in solutions:
            rendered = format_term(solution.derivation.conclusion.classifier)
            out.write(f"{format_term(solution.witness)} : {rendered}\n")
    elif command == ":discourse":
        meaning = interpret(parse_discourse(rest))
        out.write(f"meaning: {format_term(meaning)}\n")
        for elaborated, classifier in elaborate_all(sig, ctx, meaning, cfg):
            out.write(f"{format_term(elaborated)} : {format_term(classifier)}\n")
    elif command == ":ctx":
        if rest.startswith("add "):
            name, entry_type = _parse_ctx_add(rest[4:], sig)
            extended = ctx.extend(name, entry_type)
            check_context(sig, extended, cfg)
            out.write(f"added {name} : {format_term(entry_type)}\n")
            return extended
        if not rest:
            for name, entry_type in ctx.entries:
                out.write(f"{name} : {format_term(entry_type)}\n")
        else:
            out.write("usage: :ctx [add NAME : TYPE]\n")
    else:
        out.write(f"unknown command: {command}\n")
    return ctx


def _parse_ctx_add(rest: str, sig):
    import re

    match = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_']*)\s*:\s*(.+)", rest.strip())
    if match is None:
        raise ParseError(0, "'NAME : TYPE'")
    return match.group(1), parse_term(match.group(2), sig.names)


def main(argv=None, out=None, err=None, instream=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    instream = instream if instream is not None else sys.stdin
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "check":
            code = cmd_check(args, out, err)
        elif args.command == "elaborate":
            code = cmd_elaborate(args, out, err)
        elif args.command == "solve":
            code = cmd_solve(args, out, err)
        else:
            code = cmd_repl(args, out, err, instream)
        return code
    except (ParseError, UnknownWord) as error:
        err.write(f"syntax error: {error}\n")
        return 2
    except (TypeCheckError, EvalError) as error:
        return _report_semantic_error(error, err)
    except OSError as error:
        err.write(f"error: {error}\n")
        return 1


def entry_point() -> None:
    sys.exit(main())
