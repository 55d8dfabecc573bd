"""JSON, Markdown and CSV rendering of predictions, rankings, sweeps and survey analyses.

Output is a pure function of its inputs: keys and rows come out in a fixed
order and numbers use fixed formatting, so equal inputs give byte-identical
documents.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Sequence

from . import __version__
from .catalog import OperatorCategory
from .predictor import Affine, CrossoverReport, Crossover, Prediction, Ranking, format_affine
from .stats import ModeComparison, TestResult
from .survey import ScoredResponse, format_score

# Totals as printed alongside the original operator tables for the three
# box-stacking modes. They are shown for reference only.
PUBLISHED_TOTALS = {
    "Eye-gaze & Pinch": "4631",
    "Eye-gaze & Voice": "5217",
    "Drag & Drop": "6963 + A",
}

DISCREPANCY_FOOTNOTE = (
    "Published totals are reproduced as printed in the original study. They do not "
    "equal the sums of the published operator durations under the published operator "
    "lists: Eye-gaze & Pinch is printed as both 3885 ms and 4631 ms but its operators "
    "sum to 4731 ms; Eye-gaze & Voice is printed as 5217 ms against a sum of 5933 ms; "
    "Drag & Drop is printed as 6963 + A ms against a sum of 7809 + A ms. No single "
    "corrected operator value reconciles all three, so every computed figure in this "
    "report is the exact operator sum. The ranking of the three modes is the same "
    "under both sets of totals."
)


# -- JSON -----------------------------------------------------------------

def _affine_json(a: Affine) -> dict:
    return {"constant_ms": a.constant_ms, "params": dict(a.coeffs)}


def prediction_json(p: Prediction, bindings=None) -> dict:
    total = None
    if bindings is not None and all(k in bindings for k in p.total.coeffs):
        total = p.bind(bindings)
    return {
        "mode": p.mode,
        "operator_count": p.operator_count,
        "repeat": p.repeat,
        "expression": format_affine(p.total),
        "constant_ms": p.constant_ms,
        "params": dict(p.total.coeffs),
        "lower_bound_ms": p.lower_bound,
        "total_ms": total,
        "published_total": PUBLISHED_TOTALS.get(p.mode) if p.repeat == 1 else None,
        "per_category": {cat.value: _affine_json(p.per_category[cat])
                         for cat in OperatorCategory},
        "per_operator": [{"symbol": c.symbol, "count": c.count, **_affine_json(c.subtotal)}
                         for c in p.per_operator],
    }


def ranking_json(r: Ranking) -> dict:
    return {
        "bindings": dict(r.bindings),
        "ordered": [{"rank": i, "mode": m, "total_ms": t}
                    for i, (m, t) in enumerate(r.ordered, start=1)],
    }


def _fraction_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _crossover_json(c: Crossover) -> dict:
    lo, hi = c.bracket
    return {"mode_a": c.mode_a, "mode_b": c.mode_b, "value": _fraction_text(c.value),
            "numerator": c.value.numerator, "denominator": c.value.denominator,
            "bracket": [lo, hi], "in_range": c.in_range}


def sweep_json(s: CrossoverReport) -> dict:
    return {
        "parameter": s.parameter, "from": s.start, "to": s.stop, "step": s.step,
        "lines": [{"mode": m, **_affine_json(a)} for m, a in s.lines],
        "crossovers": [_crossover_json(c) for c in s.crossovers],
        "out_of_range": [_crossover_json(c) for c in s.out_of_range],
        "points": [{"value": pt.value, "totals": dict(pt.totals)} for pt in s.points],
    }


def _test_json(t: TestResult) -> dict:
    return {"test": t.test, "statistic": t.statistic, "p_value": t.p_value,
            "method": t.method, "n_effective": t.n_effective, "df": t.df,
            "notes": t.notes, "details": dict(t.details)}


def survey_json(c: ModeComparison) -> dict:
    return {
        "measure": c.measure,
        "n": c.n,
        "modes": list(c.matrix.modes),
        "dropped": list(c.dropped),
        "warnings": list(c.warnings),
        "descriptives": [{"mode": d.mode, "n": d.n, "mean": d.mean, "median": d.median,
                          "sd": d.sd, "min": d.min, "max": d.max} for d in c.descriptives],
        "friedman": _test_json(c.friedman),
        "pairwise": {
            "alpha": c.pairwise.alpha,
            "correction": c.pairwise.correction,
            "omnibus_significant": c.pairwise.omnibus_significant,
            "note": c.pairwise.note,
            "comparisons": [{"mode_a": pc.mode_a, "mode_b": pc.mode_b,
                             "test": _test_json(pc.result), "p_adjusted": pc.p_adjusted,
                             "significant": pc.significant}
                            for pc in c.pairwise.comparisons],
        },
    }


def report_json(predictions: Sequence[Prediction] = (), ranking: Ranking | None = None,
                sweep: CrossoverReport | None = None, survey: ModeComparison | None = None,
                bindings=None) -> dict:
    return {
        "tool_version": __version__,
        "predictions": [prediction_json(p, bindings) for p in predictions],
        "ranking": ranking_json(ranking) if ranking is not None else None,
        "sweep": sweep_json(sweep) if sweep is not None else None,
        "survey": survey_json(survey) if survey is not None else None,
    }


def dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# -- Markdown -------------------------------------------------------------

def _md_cell(text) -> str:
    return str(text).replace("|", "\\|")


def _table(header: Sequence[str], rows: Sequence[Sequence]) -> list[str]:
    lines = ["| " + " | ".join(_md_cell(h) for h in header) + " |",
             "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(_md_cell(c) for c in row) + " |" for row in rows]
    return lines


def _fmt(x: float | None, places: int = 2) -> str:
    return "n/a" if x is None else format_score(Fraction(x), places)


def _p(x: float | None) -> str:
    return "n/a" if x is None else format_score(Fraction(x), 4)


def predictions_markdown(preds: Sequence[Prediction], bindings=None) -> list[str]:
    show_published = any(p.mode in PUBLISHED_TOTALS and p.repeat == 1 for p in preds)
    header = ["Mode", "Operators", "Predicted time (ms)", "Lower bound (ms)"]
    if bindings:
        header.append("Resolved (ms)")
    if show_published:
        header.append("Published total (ms) [^published]")
    rows = []
    for p in preds:
        expr = format_affine(p.total)
        if p.total.coeffs:
            expr += f" (lower bound {p.lower_bound})"
        row = [p.mode, p.operator_count, expr, p.lower_bound]
        if bindings:
            ok = all(k in bindings for k in p.total.coeffs)
            row.append(p.bind(bindings) if ok else "unbound")
        if show_published:
            row.append(PUBLISHED_TOTALS.get(p.mode, "") if p.repeat == 1 else "")
        rows.append(row)
    out = ["## Predicted task execution time", ""]
    if preds and preds[0].repeat != 1:
        out += [f"Each mode repeated {preds[0].repeat} times.", ""]
    out += _table(header, rows)
    out += ["", "### Breakdown by operator category", ""]
    cats = list(OperatorCategory)
    out += _table(["Mode"] + [c.label for c in cats],
                  [[p.mode] + [format_affine(p.per_category[c]) for c in cats] for p in preds])
    out += ["", "### Breakdown by operator", ""]
    for p in preds:
        out += [f"**{_md_cell(p.mode)}**", ""]
        out += _table(["Operator", "Count", "Subtotal (ms)"],
                      [[c.symbol, c.count, format_affine(c.subtotal)] for c in p.per_operator])
        out.append("")
    if show_published:
        out += [f"[^published]: {DISCREPANCY_FOOTNOTE}", ""]
    return out


def ranking_markdown(r: Ranking) -> list[str]:
    binds = ", ".join(f"{k} = {v} ms" for k, v in r.bindings.items()) or "none"
    out = ["## Ranking (fastest first)", "", f"Parameter bindings: {binds}.", ""]
    out += _table(["Rank", "Mode", "Total (ms)"],
                  [[i, m, t] for i, (m, t) in enumerate(r.ordered, start=1)])
    out.append("")
    return out


def _crossover_rows(items: Sequence[Crossover]) -> list[list]:
    return [[c.mode_a, c.mode_b, _fraction_text(c.value), f"{c.bracket[0]}..{c.bracket[1]}"]
            for c in items]


def sweep_markdown(s: CrossoverReport) -> list[str]:
    out = [f"## Sweep of {s.parameter} from {s.start} to {s.stop} ms (step {s.step})", ""]
    if s.crossovers:
        out += _table(["Mode", "Mode", f"Crossover {s.parameter} (ms)", "Bracket"],
                      _crossover_rows(s.crossovers))
    else:
        out.append("No crossovers inside the swept range.")
    if s.out_of_range:
        out += ["", "Crossovers outside the swept range:", ""]
        out += _table(["Mode", "Mode", f"Crossover {s.parameter} (ms)", "Bracket"],
                      _crossover_rows(s.out_of_range))
    names = [m for m, _ in s.lines]
    out += ["", "### Totals per step (ms)", ""]
    out += _table([s.parameter] + names,
                  [[pt.value] + [t for _, t in pt.totals] for pt in s.points])
    out.append("")
    return out


def _test_line(t: TestResult) -> str:
    if not t.applicable:
        return f"not applicable ({t.notes})"
    df = f", df = {t.df}" if t.df is not None else ""
    note = f"; {t.notes}" if t.notes else ""
    return f"statistic = {_fmt(t.statistic, 4)}{df}, p = {_p(t.p_value)} ({t.method}{note})"


def survey_markdown(c: ModeComparison) -> list[str]:
    out = [f"## Survey analysis: {c.measure}", "",
           f"Complete participants: {c.n}; modes: {len(c.matrix.modes)}.", ""]
    if c.dropped:
        out += [f"Dropped (incomplete): {', '.join(c.dropped)}.", ""]
    out += _table(["Mode", "n", "Mean", "Median", "SD", "Min", "Max"],
                  [[d.mode, d.n, _fmt(d.mean), _fmt(d.median), _fmt(d.sd), _fmt(d.min),
                    _fmt(d.max)] for d in c.descriptives])
    out += ["", f"Friedman test: {_test_line(c.friedman)}.", "",
            f"### Pairwise Wilcoxon signed-rank (Bonferroni, alpha = {c.pairwise.alpha})", ""]
    if c.pairwise.note:
        out += [f"Note: {c.pairwise.note}.", ""]
    rows = []
    for pc in c.pairwise.comparisons:
        t = pc.result
        rows.append([pc.mode_a, pc.mode_b, _fmt(t.statistic, 1) if t.applicable else "n/a",
                     t.n_effective, t.method, _p(t.p_value), _p(pc.p_adjusted),
                     "yes" if pc.significant else "no"])
    out += _table(["Mode A", "Mode B", "W", "n", "Method", "p", "p (adj.)", "Significant"],
                  rows)
    out.append("")
    for w in c.warnings:
        out.append(f"- warning: {w}")
    if c.warnings:
        out.append("")
    return out


def report_markdown(predictions: Sequence[Prediction] = (), ranking: Ranking | None = None,
                    sweep: CrossoverReport | None = None, survey: ModeComparison | None = None,
                    bindings=None, unbound: Sequence[str] = ()) -> str:
    out = ["# XR interaction mode evaluation", "", f"xreval {__version__}", ""]
    if predictions:
        out += predictions_markdown(predictions, bindings)
    if ranking is not None:
        out += ranking_markdown(ranking)
    elif unbound:
        out += ["## Ranking (fastest first)", "",
                f"Not computed: unbound parameter(s) {', '.join(unbound)}; "
                "pass --bind NAME=MS.", ""]
    if sweep is not None:
        out += sweep_markdown(sweep)
    if survey is not None:
        out += survey_markdown(survey)
    while out and out[-1] == "":
        out.pop()
    return "\n".join(out) + "\n"


# -- CSV ------------------------------------------------------------------

def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def predictions_csv(preds: Sequence[Prediction], bindings=None) -> str:
    rows = []
    for p in preds:
        total = ""
        if bindings is not None and all(k in bindings for k in p.total.coeffs):
            total = p.bind(bindings)
        params = ";".join(f"{k}={v}" for k, v in p.total.coeffs.items())
        rows.append([p.mode, p.operator_count, p.constant_ms, params, p.lower_bound, total])
    return _csv(["mode", "operator_count", "constant_ms", "params", "lower_bound_ms",
                 "total_ms"], rows)


def ranking_csv(r: Ranking) -> str:
    return _csv(["rank", "mode", "total_ms"],
                [[i, m, t] for i, (m, t) in enumerate(r.ordered, start=1)])


def sweep_csv(s: CrossoverReport) -> str:
    names = [m for m, _ in s.lines]
    return _csv([s.parameter] + names,
                [[pt.value] + [t for _, t in pt.totals] for pt in s.points])


def scored_markdown(scored: Sequence[ScoredResponse]) -> str:
    weighted = any(s.tlx_weighted is not None for s in scored)
    header = ["Participant", "Mode", "SUS", "TLX (raw)"] + (["TLX (weighted)"] if weighted else [])
    rows = []
    for s in scored:
        row = [s.participant_id, s.mode, format_score(s.sus_score), format_score(s.tlx_raw)]
        if weighted:
            row.append("" if s.tlx_weighted is None else format_score(s.tlx_weighted))
        rows.append(row)
    return "\n".join(["# Scored survey responses", ""] + _table(header, rows)) + "\n"


def scored_json(scored: Sequence[ScoredResponse]) -> str:
    return dump_json({"tool_version": __version__, "scores": [
        {"participant_id": s.participant_id, "mode": s.mode,
         "sus_score": format_score(s.sus_score), "tlx_raw": format_score(s.tlx_raw),
         "tlx_weighted": None if s.tlx_weighted is None else format_score(s.tlx_weighted)}
        for s in scored]})
