"""Command-line entry point.

Subcommands::

    xreval predict        --catalog OPS --model MODES [--bind A=500] [--repeat 5]
    xreval compare        --catalog OPS --model MODES --bind A=0
    xreval sweep          --catalog OPS --model MODES --param A --from 0 --to 3000 --step 100
    xreval survey-score   --input responses.csv
    xreval survey-analyze --input responses.csv --measure tlx:physical
    xreval report         --catalog OPS --model MODES [--input responses.csv] [--bind A=0]

Exit status: 0 success, 1 validation or domain error, 2 I/O or format error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import __version__, report
from .dsl import parse_catalog, parse_modes
from .errors import MalformedCsv, ParseError, XrEvalError
from .predictor import compare, predict_all, sweep
from .stats import MEASURES, compare_modes
from .survey import ingest_csv, score_all, scored_csv

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


def parse_bindings(items: Sequence[str] | None) -> dict[str, int]:
    out: dict[str, int] = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        name, value = name.strip(), value.strip()
        if not sep or not name:
            raise CliError(f"--bind expects NAME=INT, got {item!r}")
        if not value.isdigit():
            raise CliError(f"--bind {name}: value must be a non-negative integer (ms), "
                           f"got {value!r}")
        out[name] = int(value)
    return out


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except FileNotFoundError:
        raise CliError(f"{path}: no such file", EXIT_IO) from None
    except IsADirectoryError:
        raise CliError(f"{path}: is a directory", EXIT_IO) from None
    except PermissionError:
        raise CliError(f"{path}: permission denied", EXIT_IO) from None
    except UnicodeDecodeError as exc:
        raise CliError(f"{path}: not valid UTF-8 ({exc.reason} at byte {exc.start})",
                       EXIT_IO) from None
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}", EXIT_IO) from None


def _load_models(args):
    catalog = parse_catalog(_read_text(args.catalog), path=args.catalog)
    return catalog, parse_modes(_read_text(args.model), catalog, path=args.model)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"{out}: cannot write ({exc.strerror})", EXIT_IO) from None


def _format(args, default: str, allowed: Sequence[str]) -> str:
    fmt = args.format or default
    if fmt not in allowed:
        raise CliError(f"{args.command} does not support --format {fmt} "
                       f"(choose {', '.join(allowed)})", EXIT_IO)
    return fmt


def _unbound(preds, bindings) -> list[str]:
    return sorted({p for pred in preds for p in pred.total.coeffs if p not in bindings})


def cmd_predict(args) -> int:
    fmt = _format(args, "markdown", ("markdown", "json", "csv"))
    bindings = parse_bindings(args.bind)
    catalog, models = _load_models(args)
    preds = predict_all(models, catalog, args.repeat)
    if fmt == "json":
        text = report.dump_json(report.report_json(preds, bindings=bindings))
    elif fmt == "csv":
        text = report.predictions_csv(preds, bindings)
    else:
        text = report.report_markdown(preds, bindings=bindings)
    _emit(text, args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    fmt = _format(args, "markdown", ("markdown", "json", "csv"))
    bindings = parse_bindings(args.bind)
    catalog, models = _load_models(args)
    ranking = compare(models, catalog, bindings, args.repeat)
    if fmt == "json":
        preds = predict_all(models, catalog, args.repeat)
        text = report.dump_json(report.report_json(preds, ranking, bindings=bindings))
    elif fmt == "csv":
        text = report.ranking_csv(ranking)
    else:
        text = report.report_markdown(ranking=ranking)
    _emit(text, args.out)
    return EXIT_OK


def _sweep_args(args, required: bool):
    given = [args.param is not None, args.start is not None, args.stop is not None,
             args.step is not None]
    if not any(given) and not required:
        return None
    if not all(given):
        raise CliError("sweep needs --param, --from, --to and --step together")
    return args.param, args.start, args.stop, args.step


def cmd_sweep(args) -> int:
    fmt = _format(args, "markdown", ("markdown", "json", "csv"))
    param, start, stop, step = _sweep_args(args, required=True)
    bindings = parse_bindings(args.bind)
    catalog, models = _load_models(args)
    result = sweep(models, catalog, param, start, stop, step, bindings, args.repeat)
    if fmt == "json":
        preds = predict_all(models, catalog, args.repeat)
        text = report.dump_json(report.report_json(preds, sweep=result, bindings=bindings))
    elif fmt == "csv":
        text = report.sweep_csv(result)
    else:
        text = report.report_markdown(sweep=result)
    _emit(text, args.out)
    return EXIT_OK


def _ingest(path: str):
    text = _read_text(path)
    try:
        result = ingest_csv(text)
    except MalformedCsv as exc:
        raise CliError(f"{path}: {exc}", EXIT_IO) from None
    for problem in result.problems:
        print(f"{path}: warning: {problem}", file=sys.stderr)
    return result


def cmd_survey_score(args) -> int:
    fmt = _format(args, "csv", ("csv", "json", "markdown"))
    result = _ingest(args.input)
    scored = score_all(result.responses)
    if fmt == "csv":
        text = scored_csv(scored, result.has_weights)
    elif fmt == "json":
        text = report.scored_json(scored)
    else:
        text = report.scored_markdown(scored)
    _emit(text, args.out)
    if not scored:
        print(f"{args.input}: error: no rows could be scored", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def _analyze(args, path: str):
    result = _ingest(path)
    comparison = compare_modes(score_all(result.responses), args.measure, args.alpha)
    for w in comparison.warnings:
        print(f"{path}: warning: {w}", file=sys.stderr)
    return comparison


def cmd_survey_analyze(args) -> int:
    fmt = _format(args, "markdown", ("markdown", "json"))
    comparison = _analyze(args, args.input)
    if fmt == "json":
        text = report.dump_json(report.report_json(survey=comparison))
    else:
        text = report.report_markdown(survey=comparison)
    _emit(text, args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    fmt = _format(args, "markdown", ("markdown", "json"))
    bindings = parse_bindings(args.bind)
    sweep_spec = _sweep_args(args, required=False)
    catalog, models = _load_models(args)
    preds = predict_all(models, catalog, args.repeat)
    unbound = _unbound(preds, bindings)
    ranking = None if unbound else compare(models, catalog, bindings, args.repeat)
    swept = None
    if sweep_spec is not None:
        swept = sweep(models, catalog, *sweep_spec, bindings=bindings, repeat=args.repeat)
    comparison = _analyze(args, args.input) if args.input else None
    if fmt == "json":
        text = report.dump_json(report.report_json(preds, ranking, swept, comparison, bindings))
    else:
        text = report.report_markdown(preds, ranking, swept, comparison, bindings, unbound)
    _emit(text, args.out)
    return EXIT_OK


def _alpha(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"alpha must be in (0, 1), got {value}")
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _measure(text: str) -> str:
    if text not in MEASURES:
        raise argparse.ArgumentTypeError(f"unknown measure {text!r} "
                                         f"(choose {', '.join(MEASURES)})")
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xreval", description="GOMS time prediction and survey analysis for XR modes.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(p, formats):
        p.add_argument("--format", choices=formats, default=None,
                       help="output format (default: %s)" % formats[0])
        p.add_argument("--out", metavar="PATH", help="write here instead of standard output")

    def model_flags(p, required=True):
        p.add_argument("--catalog", required=required, metavar="PATH",
                       help="operator catalog (.gomsops)")
        p.add_argument("--model", required=required, metavar="PATH",
                       help="mode definitions (.gomsmodel)")
        p.add_argument("--bind", action="append", metavar="NAME=INT",
                       help="parameter value in ms (repeatable)")
        p.add_argument("--repeat", type=_positive, default=1,
                       help="repetitions of each mode (default 1)")

    def sweep_flags(p, required):
        p.add_argument("--param", required=required, metavar="NAME")
        p.add_argument("--from", dest="start", type=int, required=required, metavar="INT")
        p.add_argument("--to", dest="stop", type=int, required=required, metavar="INT")
        p.add_argument("--step", type=int, required=required, metavar="INT")

    def survey_flags(p, required=True):
        p.add_argument("--input", required=required, metavar="PATH", help="survey CSV")
        p.add_argument("--measure", type=_measure, default="sus",
                       help="sus | tlx_raw | tlx_weighted | tlx:SUBSCALE (default sus)")
        p.add_argument("--alpha", type=_alpha, default=0.05, help="significance level")

    p = sub.add_parser("predict", help="predict execution time per mode")
    model_flags(p)
    common(p, ["markdown", "json", "csv"])
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("compare", help="rank modes by predicted time")
    model_flags(p)
    common(p, ["markdown", "json", "csv"])
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="sweep one parameter and report crossovers")
    model_flags(p)
    sweep_flags(p, required=True)
    common(p, ["markdown", "json", "csv"])
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("survey-score", help="score SUS and NASA-TLX responses")
    p.add_argument("--input", required=True, metavar="PATH", help="survey CSV")
    common(p, ["csv", "json", "markdown"])
    p.set_defaults(func=cmd_survey_score)

    p = sub.add_parser("survey-analyze", help="compare modes on one survey measure")
    survey_flags(p)
    common(p, ["markdown", "json"])
    p.set_defaults(func=cmd_survey_analyze)

    p = sub.add_parser("report", help="predictions plus optional survey analysis")
    model_flags(p)
    sweep_flags(p, required=False)
    survey_flags(p, required=False)
    common(p, ["markdown", "json"])
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"xreval: error: {exc}", file=sys.stderr)
        return exc.code
    except ParseError as exc:
        for err in exc.errors:
            print(f"xreval: error: {err.describe()}", file=sys.stderr)
        return EXIT_INVALID
    except (XrEvalError, ValueError) as exc:
        print(f"xreval: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
