"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 unreadable or malformed input,
3 validation failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .compiler import compile_kb
from .errors import KBSyntaxError, ValidationError
from .evaluation import evaluate, render_text, report_line, summarize, summary_line
from .formats import load_kb, parse_dataset, parse_questionnaire, parse_roster, serialize_kb
from .voting import common_schema, suggest_ensemble

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INVALID = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> bytes:
    return Path(path).read_bytes()


def _load_kbs(paths: Sequence[str]):
    kbs = []
    for path in paths:
        kbs.extend(load_kb(_read(path), filename=path))
    common_schema(kbs)
    return kbs


def _pairs(mapping) -> str:
    return ",".join(f"{c}={n}" for c, n in mapping.items()) or "-"


def cmd_build_kb(args, out) -> int:
    qs = [parse_questionnaire(_read(p), filename=p) for p in args.questionnaire]
    kbs = compile_kb(qs)
    Path(args.out).write_text(serialize_kb(kbs), encoding="utf-8")
    return EXIT_OK


def cmd_suggest(args, out) -> int:
    kbs = _load_kbs(args.kb)
    schema = kbs[0].schema
    mode = "lenient" if args.lenient else "strict"
    roster = parse_roster(_read(args.volunteers), schema, mode, filename=args.volunteers)
    for w in roster.warnings:
        print(f"warning: {w}", file=sys.stderr)
    for profile in roster.profiles:
        result = suggest_ensemble(kbs, profile)
        out.write(f"{profile.name}\t{result.winner}\t{_pairs(result.tally)}\n")
        if args.per_expert:
            for s in result.per_expert:
                tied = "+".join(s.tied_with) or "-"
                out.write(
                    f"{profile.name}\texpert={s.expert_id}\t{s.chosen}\t"
                    f"{_pairs(s.course_scores)}\ttied={tied}\n"
                )
    return EXIT_OK


def cmd_evaluate(args, out) -> int:
    if args.figure and Path(args.figure).suffix.lower() not in (".png", ".pdf", ".svg"):
        raise UsageError(f"--figure: unsupported file type {args.figure!r}")
    kbs = _load_kbs(args.kb)
    schema = kbs[0].schema
    reports = []
    for path in args.dataset:
        data = parse_dataset(_read(path), schema, filename=path)
        reports.append((Path(path).stem, evaluate(kbs, data)))
    summary = summarize(reports) if args.summary else None
    if args.text:
        out.write(render_text(reports, summary))
    else:
        for label, report in reports:
            out.write(report_line(label, report) + "\n")
        if summary is not None:
            out.write(summary_line(summary) + "\n")
    if args.figure:
        from .plotting import save_accuracy_figure

        save_accuracy_figure(args.figure, reports, summary)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="course-advisor", description="Rule-based lecturer/course advisor.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build-kb", help="compile questionnaires into a KB file")
    p.add_argument("--questionnaire", nargs="+", required=True, metavar="FILE")
    p.add_argument("--out", required=True, metavar="FILE")
    p.set_defaults(func=cmd_build_kb)

    p = sub.add_parser("suggest", help="recommend a course per volunteer")
    p.add_argument("--kb", nargs="+", required=True, metavar="FILE",
                   help="KB or questionnaire files; more than one expert means voting")
    p.add_argument("--volunteers", required=True, metavar="FILE")
    p.add_argument("--per-expert", action="store_true", help="also print each expert's scores")
    p.add_argument("--lenient", action="store_true", help="drop unknown labels/courses with a warning")
    p.set_defaults(func=cmd_suggest)

    p = sub.add_parser("evaluate", help="accuracy over labeled datasets")
    p.add_argument("--kb", nargs="+", required=True, metavar="FILE")
    p.add_argument("--dataset", nargs="+", required=True, metavar="FILE")
    p.add_argument("--summary", action="store_true", help="append the unweighted mean")
    p.add_argument("--text", action="store_true", help="aligned table instead of tab-separated lines")
    p.add_argument("--figure", metavar="FILE", help="also write an accuracy bar chart (png/pdf/svg)")
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except KBSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
