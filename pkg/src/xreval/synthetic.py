"""Seeded generator for synthetic survey CSVs (demo and load tests only)."""

from __future__ import annotations

import csv
import io
import random

from .survey import BASE_COLUMNS, TLX_SUBSCALES, TLXW_COLUMNS

DEFAULT_MODES = ("Eye-gaze & Pinch", "Eye-gaze & Voice", "Drag & Drop")


def _weights(rng: random.Random) -> list[int]:
    # tally of 15 random pairwise choices, so each weight is in [0, 5]
    wins = [0] * len(TLX_SUBSCALES)
    for i in range(len(TLX_SUBSCALES)):
        for j in range(i + 1, len(TLX_SUBSCALES)):
            wins[rng.choice((i, j))] += 1
    return wins


def synthetic_survey_csv(participants: int = 118, modes=DEFAULT_MODES, seed: int = 0,
                         weights: bool = False, shift=None) -> str:
    """Return CSV text for ``participants`` x ``modes`` made-up responses.

    ``shift`` optionally maps a mode to a bias (in Likert steps) toward a
    better SUS and lower TLX, so demo analyses have something to detect.
    """
    rng = random.Random(seed)
    shift = shift or {}
    header = list(BASE_COLUMNS) + (list(TLXW_COLUMNS) if weights else [])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for p in range(1, participants + 1):
        pid = f"synthetic-{p:03d}"
        base = rng.gauss(0, 0.5)
        for mode in modes:
            bias = base + shift.get(mode, 0.0)
            sus = []
            for item in range(10):
                lean = bias if item % 2 == 0 else -bias
                sus.append(min(5, max(1, round(3 + lean + rng.gauss(0, 0.9)))))
            tlx = [min(100, max(0, round(50 - 12 * bias + rng.gauss(0, 18))))
                   for _ in TLX_SUBSCALES]
            row = [pid, mode] + sus + tlx
            if weights:
                row += _weights(rng)
            w.writerow(row)
    return buf.getvalue()
