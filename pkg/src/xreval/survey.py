"""SUS and NASA-TLX scoring, plus CSV ingestion of per-mode responses.

Scores are exact fractions; ``format_score`` renders them at two decimals,
rounding halves up.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (ItemOutOfRange, MalformedCsv, SurveyError, WeightsDontSumTo15,
                     WrongItemCount)

SUS_ITEMS = 10
TLX_SUBSCALES = ("mental", "physical", "temporal", "performance", "effort", "frustration")
TLX_WEIGHT_TOTAL = 15  # pairwise comparisons among six subscales

SUS_COLUMNS = tuple(f"sus_{i}" for i in range(1, SUS_ITEMS + 1))
TLX_COLUMNS = tuple(f"tlx_{s}" for s in TLX_SUBSCALES)
TLXW_COLUMNS = tuple(f"tlxw_{s}" for s in TLX_SUBSCALES)
BASE_COLUMNS = ("participant_id", "mode") + SUS_COLUMNS + TLX_COLUMNS


def format_score(value, places: int = 2) -> str:
    """Render an exact value with ``places`` decimals, halves rounded away from zero."""
    frac = Fraction(value)
    scale = 10 ** places
    mag = abs(frac) * scale
    q = int(mag + Fraction(1, 2))  # floor(x + 1/2) for x >= 0
    sign = "-" if frac < 0 and q else ""
    whole, part = divmod(q, scale)
    return f"{sign}{whole}.{part:0{places}d}" if places else f"{sign}{whole}"


def _check_items(items: Sequence[int], expected: int, lo: int, hi: int, label: str) -> list[int]:
    items = list(items)
    if len(items) != expected:
        raise WrongItemCount(f"{label} needs exactly {expected} items, got {len(items)}")
    for i, v in enumerate(items, start=1):
        if isinstance(v, bool) or not isinstance(v, int):
            raise ItemOutOfRange(f"{label} item {i} must be an integer, got {v!r}")
        if not lo <= v <= hi:
            raise ItemOutOfRange(f"{label} item {i} = {v} out of range [{lo},{hi}]")
    return items


def score_sus(items: Sequence[int]) -> Fraction:
    """Standard SUS score in [0, 100].

    Odd-numbered items are positively worded and contribute ``item - 1``;
    even-numbered items contribute ``5 - item``. The sum (0..40) is scaled
    by 2.5.
    """
    items = _check_items(items, SUS_ITEMS, 1, 5, "SUS")
    raw = sum((v - 1) if i % 2 == 0 else (5 - v) for i, v in enumerate(items))
    return Fraction(raw * 5, 2)


def score_tlx_raw(ratings: Sequence[int]) -> Fraction:
    ratings = _check_items(ratings, len(TLX_SUBSCALES), 0, 100, "TLX")
    return Fraction(sum(ratings), len(ratings))


def score_tlx_weighted(ratings: Sequence[int], weights: Sequence[int]) -> Fraction:
    ratings = _check_items(ratings, len(TLX_SUBSCALES), 0, 100, "TLX")
    weights = _check_items(weights, len(TLX_SUBSCALES), 0, 5, "TLX weight")
    if sum(weights) != TLX_WEIGHT_TOTAL:
        raise WeightsDontSumTo15(
            f"TLX weights must sum to {TLX_WEIGHT_TOTAL}, got {sum(weights)}")
    return Fraction(sum(w * r for w, r in zip(weights, ratings)), TLX_WEIGHT_TOTAL)


@dataclass(frozen=True)
class SurveyResponse:
    participant_id: str
    mode: str
    sus: tuple[int, ...]
    tlx: Mapping[str, int]
    tlx_weights: Mapping[str, int] | None = None

    def tlx_ratings(self) -> list[int]:
        return [self.tlx[s] for s in TLX_SUBSCALES]

    def tlx_weight_values(self) -> list[int] | None:
        if self.tlx_weights is None:
            return None
        return [self.tlx_weights[s] for s in TLX_SUBSCALES]


@dataclass(frozen=True)
class ScoredResponse:
    participant_id: str
    mode: str
    sus_score: Fraction
    tlx_raw: Fraction
    tlx_weighted: Fraction | None = None
    tlx: Mapping[str, int] = field(default_factory=dict)


def score_response(resp: SurveyResponse) -> ScoredResponse:
    try:
        sus = score_sus(resp.sus)
        raw = score_tlx_raw(resp.tlx_ratings())
        weights = resp.tlx_weight_values()
        weighted = None if weights is None else score_tlx_weighted(resp.tlx_ratings(), weights)
    except SurveyError as exc:
        raise type(exc)(f"participant {resp.participant_id!r}, mode {resp.mode!r}: {exc}") from exc
    return ScoredResponse(resp.participant_id, resp.mode, sus, raw, weighted, dict(resp.tlx))


def score_all(responses: Sequence[SurveyResponse]) -> list[ScoredResponse]:
    return [score_response(r) for r in responses]


@dataclass(frozen=True)
class RowProblem:
    row: int
    column: str | None
    message: str

    def __str__(self):
        return self.message


@dataclass
class IngestResult:
    responses: list[SurveyResponse]
    problems: list[RowProblem]
    has_weights: bool


def _cell_int(raw: str, column: str, lo: int, hi: int, row: int,
              problems: list[RowProblem]) -> int | None:
    text = raw.strip()
    try:
        value = int(text)
    except ValueError:
        problems.append(RowProblem(row, column,
                                   f"{column} is not an integer ({text!r}) at row {row}"))
        return None
    if not lo <= value <= hi:
        problems.append(RowProblem(row, column,
                                   f"{column} out of range [{lo},{hi}] at row {row}"))
        return None
    return value


def ingest_csv(source: str) -> IngestResult:
    """Parse survey CSV text into responses.

    Structural problems (no header, missing or partial column groups) raise
    MalformedCsv. Bad rows are reported in ``problems`` and left out; row
    numbers count the header as row 1.
    """
    if source.startswith("\ufeff"):
        source = source[1:]
    reader = csv.reader(io.StringIO(source, newline=""))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise MalformedCsv("empty CSV: missing header row") from None
    except csv.Error as exc:
        raise MalformedCsv(f"unreadable CSV header: {exc}") from None

    missing = [c for c in BASE_COLUMNS if c not in header]
    if missing:
        raise MalformedCsv(f"missing required column(s): {', '.join(missing)}")
    present_w = [c for c in TLXW_COLUMNS if c in header]
    if present_w and len(present_w) != len(TLXW_COLUMNS):
        absent = [c for c in TLXW_COLUMNS if c not in header]
        raise MalformedCsv(
            f"weight columns must be all present or all absent; missing {', '.join(absent)}")
    has_weights = bool(present_w)
    dupes = sorted({h for h in header if header.count(h) > 1})
    if dupes:
        raise MalformedCsv(f"duplicate column(s): {', '.join(dupes)}")
    idx = {name: i for i, name in enumerate(header)}

    responses: list[SurveyResponse] = []
    problems: list[RowProblem] = []
    seen: set[tuple[str, str]] = set()
    row = 1
    while True:
        try:
            cells = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            raise MalformedCsv(f"CSV syntax error near row {row + 1}: {exc}") from None
        row += 1
        if not any(c.strip() for c in cells):
            continue
        if len(cells) != len(header):
            problems.append(RowProblem(
                row, None, f"expected {len(header)} fields, got {len(cells)} at row {row}"))
            continue
        row_problems: list[RowProblem] = []
        pid = cells[idx["participant_id"]].strip()
        mode = cells[idx["mode"]].strip()
        if not pid:
            row_problems.append(RowProblem(row, "participant_id",
                                           f"participant_id is empty at row {row}"))
        if not mode:
            row_problems.append(RowProblem(row, "mode", f"mode is empty at row {row}"))
        sus = [_cell_int(cells[idx[c]], c, 1, 5, row, row_problems) for c in SUS_COLUMNS]
        tlx = [_cell_int(cells[idx[c]], c, 0, 100, row, row_problems) for c in TLX_COLUMNS]
        weights = None
        if has_weights:
            weights = [_cell_int(cells[idx[c]], c, 0, 5, row, row_problems)
                       for c in TLXW_COLUMNS]
            if None not in weights and sum(weights) != TLX_WEIGHT_TOTAL:
                row_problems.append(RowProblem(
                    row, "tlxw_*",
                    f"TLX weights sum to {sum(weights)}, expected {TLX_WEIGHT_TOTAL} at row {row}"))
        if not row_problems and (pid, mode) in seen:
            row_problems.append(RowProblem(
                row, "mode", f"duplicate response for participant {pid!r}, mode {mode!r} "
                             f"at row {row}"))
        if row_problems:
            problems.extend(row_problems)
            continue
        seen.add((pid, mode))
        responses.append(SurveyResponse(
            pid, mode, tuple(sus), dict(zip(TLX_SUBSCALES, tlx)),
            dict(zip(TLX_SUBSCALES, weights)) if weights is not None else None,
        ))
    return IngestResult(responses, problems, has_weights)


def scored_csv(scored: Sequence[ScoredResponse], weighted: bool | None = None) -> str:
    if weighted is None:
        weighted = bool(scored) and all(s.tlx_weighted is not None for s in scored)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["participant_id", "mode", "sus_score", "tlx_raw"]
    if weighted:
        header.append("tlx_weighted")
    writer.writerow(header)
    for s in scored:
        row = [s.participant_id, s.mode, format_score(s.sus_score), format_score(s.tlx_raw)]
        if weighted:
            row.append("" if s.tlx_weighted is None else format_score(s.tlx_weighted))
        writer.writerow(row)
    return buf.getvalue()
