"""Command-line entry point.

Machine-readable output (TSV or JSON) goes to stdout, diagnostics to stderr.
Exit codes: 0 success, 1 domain error (parse/validate/score), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import cnl, corpus, logic, scoring
from .experiment import ExperimentService, ServiceError, load_experiment
from .render import DEFAULT_CONFIG, RenderConfigError, render
from .world import (FormatError, WorldLookupError, dump_lexicon, dump_ontograph,
                    load_lexicon, load_ontograph, validate)

_DOMAIN_ERRORS = (FormatError, cnl.ParseError, logic.VocabularyError, logic.AnswerKeyError,
                  scoring.ConsistencyError, RenderConfigError, WorldLookupError,
                  ServiceError, OSError, ValueError)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ontographs",
                                     description="Mini-world toolkit: validate, parse, "
                                                 "evaluate, render, score, serve.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an ontograph file against the model invariants")
    p.add_argument("ontograph", help="ontograph JSON file")

    p = sub.add_parser("parse", help="parse one sentence")
    p.add_argument("sentence")
    p.add_argument("--lexicon", required=True, help="lexicon JSON file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--ast", action="store_true", help="print the AST as JSON (default)")
    mode.add_argument("--fol", action="store_true", help="print the first-order formula")

    p = sub.add_parser("eval", help="evaluate statements against an ontograph")
    p.add_argument("ontograph")
    p.add_argument("statements", help="statement JSON file")
    p.add_argument("--lexicon", required=True)

    p = sub.add_parser("keygen", help="write the mechanical answer key for statements")
    p.add_argument("ontograph")
    p.add_argument("statements")
    p.add_argument("--lexicon", required=True)
    p.add_argument("-o", "--out", help="output file (default: stdout)")

    p = sub.add_parser("render", help="render an ontograph to SVG")
    p.add_argument("ontograph")
    p.add_argument("-o", "--out", help="output file (default: stdout)")

    p = sub.add_parser("fixtures", help="write the built-in fixture corpus as an experiment directory")
    p.add_argument("-o", "--out", required=True, help="output directory")

    p = sub.add_parser("score", help="score a response log against an answer key")
    p.add_argument("--key", required=True, help="answer key JSON file")
    p.add_argument("--responses", required=True, help="newline-delimited response log")
    p.add_argument("--exclude", default="", help="comma-separated statement ids to disregard")
    p.add_argument("--json", action="store_true", help="JSON report instead of the text table")
    p.add_argument("--two-sided", action="store_true", help="two-sided sign test")

    p = sub.add_parser("serve", help="run the experiment service")
    p.add_argument("--experiment-dir", required=True)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--time-limit", type=float, default=None,
                   help="override the manifest's per-stage limit (seconds)")
    p.add_argument("--grace-seconds", type=float, default=2.0)
    p.add_argument("--results-token", default=None,
                   help="token for the results endpoint (default: generated and printed)")
    p.add_argument("--ui-dir", default=None, help="static directory to serve at /ui")

    return parser


def _cmd_validate(args) -> int:
    world = load_ontograph(args.ontograph)
    problems = validate(world)
    for v in problems:
        print(f"{v.code}\t{v.subject}\t{v.message}")
    return 1 if problems else 0


def _cmd_parse(args) -> int:
    lexicon = load_lexicon(args.lexicon)
    ast = cnl.parse_text(args.sentence, lexicon)
    if args.fol:
        print(logic.formula_text(logic.to_formula(ast, lexicon)))
    else:
        print(json.dumps(cnl.ast_to_dict(ast), indent=2))
    return 0


def _cmd_eval(args) -> int:
    world = load_ontograph(args.ontograph)
    lexicon = load_lexicon(args.lexicon)
    statements = cnl.load_statements(args.statements)
    key = logic.generate_answer_key(world, statements, lexicon)
    for sid, truth in key.entries:
        print(f"{sid}\t{'true' if truth else 'false'}")
    return 0


def _cmd_keygen(args) -> int:
    world = load_ontograph(args.ontograph)
    lexicon = load_lexicon(args.lexicon)
    statements = cnl.load_statements(args.statements)
    key = logic.generate_answer_key(world, statements, lexicon)
    text = logic.answer_key_to_json(key)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_render(args) -> int:
    world = load_ontograph(args.ontograph)
    problems = validate(world)
    if problems:
        raise FormatError(f"ontograph {world.id!r} is invalid: {problems[0].code} "
                          f"at {problems[0].subject}")
    svg = render(world, DEFAULT_CONFIG)
    if args.out:
        Path(args.out).write_text(svg, encoding="utf-8")
    else:
        sys.stdout.write(svg)
    return 0


def write_fixture_dir(out_dir: Path) -> None:
    """Emit the fixture corpus as a ready-to-serve experiment directory."""
    out_dir.mkdir(parents=True, exist_ok=True)
    stages = []
    for series in corpus.fixtures():
        sub = out_dir / series.family.lower()
        sub.mkdir(exist_ok=True)
        dump_ontograph(series.world, sub / "ontograph.json")
        cnl.dump_statements(list(series.statements), sub / "statements.json")
        logic.dump_answer_key(series.key, sub / "key.json")
        stages.append({"ontograph": f"{series.family.lower()}/ontograph.json",
                       "statements": f"{series.family.lower()}/statements.json"})
    dump_lexicon(corpus.standard_lexicon(), out_dir / "lexicon.json")
    manifest = {
        "id": "fixtures",
        "stages": stages,
        "lexicon": "lexicon.json",
        "time_limit_seconds": 300,
        "exclude": sorted(corpus.EXCLUDED_SPECIAL_CASES),
    }
    (out_dir / "experiment.json").write_text(json.dumps(manifest, indent=2) + "\n",
                                             encoding="utf-8")


def _cmd_fixtures(args) -> int:
    write_fixture_dir(Path(args.out))
    print(f"fixture experiment written to {args.out}", file=sys.stderr)
    return 0


def _cmd_score(args) -> int:
    key = logic.load_answer_key(args.key)
    responses = scoring.read_response_log(args.responses)
    exclude = frozenset(s.strip() for s in args.exclude.split(",") if s.strip())
    report = scoring.score(responses, key, exclude, two_sided=args.two_sided)
    if args.json:
        print(json.dumps(scoring.report_to_dict(report), indent=2))
    else:
        sys.stdout.write(scoring.report_table(report))
    return 0


def _cmd_serve(args) -> int:
    import secrets

    import uvicorn

    from .api import create_app

    experiment = load_experiment(args.experiment_dir, time_limit_override=args.time_limit)
    service = ExperimentService(experiment, args.experiment_dir,
                                grace_seconds=args.grace_seconds)
    token = args.results_token or secrets.token_urlsafe(12)
    if not args.results_token:
        print(f"results token: {token}", file=sys.stderr)
    app = create_app(service, results_token=token, ui_dir=args.ui_dir)
    print(f"serving experiment {experiment.id!r} "
          f"({len(experiment.stages)} stages) on {args.host}:{args.port}", file=sys.stderr)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "parse": _cmd_parse,
    "eval": _cmd_eval,
    "keygen": _cmd_keygen,
    "render": _cmd_render,
    "fixtures": _cmd_fixtures,
    "score": _cmd_score,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
