"""Command-line front door.

Subcommands: check, query, extend, confirm, example. Exit codes are a
stable contract: 0 success, 1 infeasible constraints, 2 input error,
3 resource cap exceeded, 4 conditioning on a zero-probability sentence.
All output is deterministic given the input bytes and flags.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import induct, scenarios
from .belief import Belief
from .errors import (
    CapExceededError,
    InfeasibleError,
    KbSyntaxError,
    PlogError,
    UndefinedConditionalError,
)
from .extend import (
    EntailmentOracle,
    ExtensionDiagnostic,
    check_eligible,
    check_subadditive,
    extend_feasible,
    is_hierarchical,
)
from .maxent import project
from .parser import parse_formula_text, parse_program
from .worlds import WorldSpace, world_cap_from_env

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_INPUT_ERROR = 2
EXIT_CAP_EXCEEDED = 3
EXIT_UNDEFINED_CONDITIONAL = 4


def _load_program(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise KbSyntaxError(f"cannot read {path}: {exc.strerror}", 0, 0) from exc
    return parse_program(text)


def _space(program) -> WorldSpace:
    return WorldSpace(program.vocabulary, cap=world_cap_from_env())


def _prior(program, space: WorldSpace, prior_path: str | None) -> Belief:
    if prior_path is None:
        return Belief.uniform(space)
    with open(prior_path, encoding="utf-8") as fh:
        return Belief.from_text(fh.read(), space)


def cmd_check(args) -> int:
    if args.tolerance is not None and args.tolerance <= 0:
        print("error: --tolerance must be positive", file=sys.stderr)
        return EXIT_INPUT_ERROR
    program = _load_program(args.kb)
    space = _space(program)
    oracle = EntailmentOracle(space)
    constraints = program.constraints

    if args.dump_cnf:
        os.makedirs(args.dump_cnf, exist_ok=True)
        from .logic import ground, is_ground
        from .sat import to_cnf
        for i, c in enumerate(constraints, start=1):
            g = c.sentence if is_ground(c.sentence) else ground(c.sentence, program.vocabulary)
            path = os.path.join(args.dump_cnf, f"constraint-{i}.cnf")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(to_cnf(g, program.vocabulary).to_dimacs())
            print(f"wrote {path}")

    eligible = check_eligible(constraints, oracle)
    for violation in eligible:
        print(violation)
    if not eligible:
        print("ELIG: ok")

    subadditive = check_subadditive(constraints, oracle)
    for violation in subadditive.violations:
        print(violation)
    if subadditive.warning:
        print(f"SUBADD: note: {subadditive.warning}")
    if not subadditive.violations:
        print("SUBADD: ok")

    hierarchy = is_hierarchical(constraints, oracle)
    if hierarchy.hierarchical:
        print(f"HIER: yes, depth {hierarchy.depth}")
    else:
        offenders = [f"({i},{j})={label}" for (i, j), label in sorted(hierarchy.relations.items())
                     if label in ("none", "multiple")]
        print(f"HIER: no ({'; '.join(offenders) if offenders else 'no constraints'})")

    if args.tolerance is not None:
        feasibility = extend_feasible(constraints, space, tolerance=args.tolerance)
    else:
        feasibility = extend_feasible(constraints, space)
    if feasibility.feasible:
        print("LP: feasible")
        return EXIT_OK
    core = feasibility.infeasible_subsystem or ()
    labels = ", ".join(f"{i}:{constraints.entries[i - 1].describe()}" for i in core)
    print(f"LP-INFEASIBLE: irreducible subsystem {{{labels}}}")
    return EXIT_INFEASIBLE


def cmd_query(args) -> int:
    program = _load_program(args.kb)
    space = _space(program)
    prior = _prior(program, space, args.prior)
    projection = project(prior, program.constraints)
    belief = projection.belief
    query = parse_formula_text(args.formula, program.vocabulary, program.sentences)
    if args.given is not None:
        given = parse_formula_text(args.given, program.vocabulary, program.sentences)
        value = belief.cond(query, given)
    else:
        value = belief.prob(query)
    print(f"{value:.12f}")
    return EXIT_OK


def cmd_extend(args) -> int:
    program = _load_program(args.kb)
    space = _space(program)
    prior = _prior(program, space, args.prior)
    feasibility = extend_feasible(program.constraints, space)
    if not feasibility.feasible:
        oracle = EntailmentOracle(space)
        diagnostic = ExtensionDiagnostic(
            feasibility=feasibility,
            eligible_violations=check_eligible(program.constraints, oracle),
            subadditive_report=check_subadditive(program.constraints, oracle),
            constraints=program.constraints,
        )
        for line in diagnostic.lines():
            print(line)
        return EXIT_INFEASIBLE
    projection = project(prior, program.constraints)
    if args.report:
        for line in projection.report_lines():
            print(line)
    text = projection.belief.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_confirm(args) -> int:
    prior = induct.parse_mixture_spec(args.mixture)
    rows = induct.convergence_table(prior, args.n)
    csv_text = induct.csv_text(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(csv_text)
    if args.plot:
        from .report import plot_convergence
        plot_convergence(rows, args.plot, title=prior.describe())
        print(f"wrote {args.plot}")
    return EXIT_OK


def cmd_example(args) -> int:
    runner = scenarios.EXAMPLES.get(args.name)
    if runner is None:
        known = ", ".join(sorted(scenarios.EXAMPLES))
        print(f"unknown example {args.name!r} (known: {known})", file=sys.stderr)
        return EXIT_INPUT_ERROR
    run = runner()
    print(f"== {run.name} ==")
    for line in run.lines:
        print(line)
    if args.outdir:
        os.makedirs(args.outdir, exist_ok=True)
        if run.table is not None:
            csv_path = os.path.join(args.outdir, f"{run.name}.csv")
            with open(csv_path, "w", encoding="utf-8", newline="") as fh:
                induct.write_csv(run.table, fh)
            print(f"wrote {csv_path}")
            from .report import plot_convergence
            png_path = os.path.join(args.outdir, f"{run.name}.png")
            plot_convergence(run.table, png_path, title=run.name)
            print(f"wrote {png_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plog",
        description="Assign, check, extend and query probabilities on logical "
                    "sentences over finite grounded vocabularies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run coherence diagnostics and the feasibility test")
    p_check.add_argument("kb", help="knowledge base file (.plog)")
    p_check.set_defaults(func=cmd_check)

    p_query = sub.add_parser("query", help="probability of a formula under the extended belief")
    p_query.add_argument("kb")
    p_query.add_argument("formula")
    p_query.add_argument("--given", help="condition on this formula")
    p_query.add_argument("--prior", help="belief file overriding the uniform prior")
    p_query.set_defaults(func=cmd_query)

    p_extend = sub.add_parser("extend", help="write the minimum-relative-entropy extension")
    p_extend.add_argument("kb")
    p_extend.add_argument("--prior", help="belief file overriding the uniform prior")
    p_extend.add_argument("--report", action="store_true", help="print the projection report")
    p_extend.add_argument("--out", help="write the belief table here instead of stdout")
    p_extend.set_defaults(func=cmd_extend)

    p_confirm = sub.add_parser("confirm", help="confirmation curves for a sequence prior")
    p_confirm.add_argument("--mixture", required=True,
                           help="e.g. 'alltrue:0.5,iid:0.5@0.5'")
    p_confirm.add_argument("--n", type=int, required=True, help="largest prefix length")
    p_confirm.add_argument("--out", help="write CSV here instead of stdout")
    p_confirm.add_argument("--plot", help="also render the curves to this PNG")
    p_confirm.set_defaults(func=cmd_confirm)

    p_example = sub.add_parser("example", help="run a canned scenario")
    p_example.add_argument("name", help="monty-hall | ravens | naive-ravens")
    p_example.add_argument("--outdir", help="write CSV and figure files here")
    p_example.set_defaults(func=cmd_example)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except KbSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP_EXCEEDED
    except UndefinedConditionalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED_CONDITIONAL
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except PlogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
