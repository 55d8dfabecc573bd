"""Nonparametric comparison of related samples (k modes rated by the same people).

The battery is Friedman's rank test across all modes, then pairwise Wilcoxon
signed-rank tests with a Bonferroni adjustment. Ranks and test statistics are
computed with exact fractions. Small samples get exact p-values from the full
permutation distribution. Larger ones use the chi-square or normal
approximation.
"""

from __future__ import annotations

import math
import statistics
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Mapping, Sequence

from .errors import InsufficientData
from .survey import TLX_SUBSCALES, ScoredResponse

EXACT = "exact"
APPROXIMATE = "approximate"
NOT_APPLICABLE = "not_applicable"

WILCOXON_EXACT_MAX_N = 20
FRIEDMAN_EXACT_MAX_N = 6
FRIEDMAN_EXACT_MAX_K = 3

_EPS = 1e-15
_MAX_ITER = 500


# -- chi-square tail -------------------------------------------------------

def _lower_series(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) by its power series."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _upper_continued_fraction(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x), modified Lentz evaluation."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def gammaincc(a: float, x: float) -> float:
    """Regularized upper incomplete gamma function Q(a, x)."""
    if a <= 0:
        raise ValueError(f"shape must be positive, got {a}")
    if x <= 0:
        return 1.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _lower_series(a, x))
    return min(1.0, _upper_continued_fraction(a, x))


def chi2_sf(x: float, df: int) -> float:
    """P(X > x) for X ~ chi-square with ``df`` degrees of freedom."""
    if df < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {df}")
    return gammaincc(df / 2.0, x / 2.0)


def normal_sf_two_sided(z: float) -> float:
    return math.erfc(abs(z) / math.sqrt(2.0))


# -- ranks ----------------------------------------------------------------

def midranks(values: Sequence) -> list[Fraction]:
    """Ranks 1..n ascending; tied values share the mean of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks: list[Fraction] = [Fraction(0)] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = Fraction(i + j + 2, 2)
        for pos in range(i, j + 1):
            ranks[order[pos]] = rank
        i = j + 1
    return ranks


def tie_sizes(values: Sequence) -> list[int]:
    counts: dict = defaultdict(int)
    for v in values:
        counts[v] += 1
    return [t for t in counts.values() if t > 1]


# -- data -----------------------------------------------------------------

@dataclass(frozen=True)
class BlockMatrix:
    """Complete-block layout: one row per participant, one column per mode."""

    participants: tuple[str, ...]
    modes: tuple[str, ...]
    values: tuple[tuple, ...]

    def __post_init__(self):
        object.__setattr__(self, "participants", tuple(self.participants))
        object.__setattr__(self, "modes", tuple(self.modes))
        object.__setattr__(self, "values", tuple(tuple(r) for r in self.values))
        n, k = len(self.participants), len(self.modes)
        if n < 2 or k < 2:
            raise InsufficientData(f"need at least 2 participants and 2 modes, got {n}x{k}")
        if len(self.values) != n:
            raise ValueError(f"expected {n} rows, got {len(self.values)}")
        for label, row in zip(self.participants, self.values):
            if len(row) != k:
                raise ValueError(f"row {label!r} has {len(row)} values, expected {k}")
            for v in row:
                if v is None or (isinstance(v, float) and math.isnan(v)):
                    raise ValueError(f"row {label!r} has a missing value")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], modes: Sequence[str] | None = None):
        k = len(rows[0]) if rows else 0
        modes = modes or tuple(f"m{j + 1}" for j in range(k))
        return cls(tuple(f"p{i + 1}" for i in range(len(rows))), tuple(modes), rows)

    @property
    def n(self) -> int:
        return len(self.participants)

    @property
    def k(self) -> int:
        return len(self.modes)

    def column(self, j: int) -> list:
        return [row[j] for row in self.values]


@dataclass(frozen=True)
class TestResult:
    test: str
    statistic: float | None
    p_value: float | None
    method: str
    n_effective: int
    notes: str = ""
    df: int | None = None
    details: Mapping[str, float] = field(default_factory=dict)

    __test__ = False  # not a pytest class

    @property
    def applicable(self) -> bool:
        return self.method != NOT_APPLICABLE


@dataclass(frozen=True)
class Summary:
    mode: str
    n: int
    mean: float
    median: float
    sd: float
    min: float
    max: float


def descriptives(matrix: BlockMatrix) -> list[Summary]:
    out = []
    for j, mode in enumerate(matrix.modes):
        col = [Fraction(v) for v in matrix.column(j)]
        mean = sum(col, Fraction(0)) / len(col)
        var = sum(((v - mean) ** 2 for v in col), Fraction(0)) / (len(col) - 1)
        out.append(Summary(mode, len(col), float(mean), float(statistics.median(col)),
                           math.sqrt(var), float(min(col)), float(max(col))))
    return out


# -- Friedman -------------------------------------------------------------

def _friedman_from_rank_sums(rank_sums: Sequence[Fraction], n: int, k: int,
                             correction: Fraction) -> Fraction:
    ss = sum((r * r for r in rank_sums), Fraction(0))
    chi = Fraction(12, n * k * (k + 1)) * ss - 3 * n * (k + 1)
    return chi / correction


def _friedman_tie_correction(rows: Sequence[Sequence], n: int, k: int) -> Fraction:
    ties = sum(t ** 3 - t for row in rows for t in tie_sizes(row))
    return 1 - Fraction(ties, n * (k ** 3 - k))


def friedman_statistic(rows: Sequence[Sequence]) -> Fraction | None:
    """Tie-corrected Friedman chi-square; None when every row is fully tied."""
    n, k = len(rows), len(rows[0])
    correction = _friedman_tie_correction(rows, n, k)
    if correction == 0:
        return None
    ranks = [midranks(row) for row in rows]
    sums = [sum((r[j] for r in ranks), Fraction(0)) for j in range(k)]
    return _friedman_from_rank_sums(sums, n, k, correction)


def _friedman_exact_count(ranks: list[list[Fraction]], k: int, observed: Fraction,
                          correction: Fraction) -> tuple[int, int]:
    # distribution of the column rank-sum vector when each row's ranks are
    # permuted independently; all k! orderings per row weigh equally
    dist: dict[tuple, int] = {tuple([Fraction(0)] * k): 1}
    for row in ranks:
        row_perms: dict[tuple, int] = defaultdict(int)
        for perm in permutations(row):
            row_perms[perm] += 1
        nxt: dict[tuple, int] = defaultdict(int)
        for state, count in dist.items():
            for perm, mult in row_perms.items():
                nxt[tuple(s + p for s, p in zip(state, perm))] += count * mult
        dist = nxt
    n = len(ranks)
    hits = sum(count for state, count in dist.items()
               if _friedman_from_rank_sums(state, n, k, correction) >= observed)
    return hits, math.factorial(k) ** n


def friedman(matrix: BlockMatrix, method: str = "auto") -> TestResult:
    """Friedman test across the k columns of ``matrix``.

    ``method="auto"`` enumerates the exact permutation distribution when
    n <= 6 and k <= 3 and uses chi-square with k-1 df otherwise.
    """
    n, k = matrix.n, matrix.k
    rows = [[Fraction(v) for v in row] for row in matrix.values]
    correction = _friedman_tie_correction(rows, n, k)
    if correction == 0:
        return TestResult("friedman", None, None, NOT_APPLICABLE, n,
                          "every participant gave all modes the same value", k - 1)
    ranks = [midranks(row) for row in rows]
    sums = [sum((r[j] for r in ranks), Fraction(0)) for j in range(k)]
    stat = _friedman_from_rank_sums(sums, n, k, correction)
    tied = correction != 1
    notes = "mid-ranks and tie correction applied" if tied else ""
    details = {f"rank_sum[{m}]": float(s) for m, s in zip(matrix.modes, sums)}

    if method == "auto":
        method = EXACT if n <= FRIEDMAN_EXACT_MAX_N and k <= FRIEDMAN_EXACT_MAX_K else APPROXIMATE
    if method == EXACT:
        hits, total = _friedman_exact_count(ranks, k, stat, correction)
        p = hits / total
    elif method == APPROXIMATE:
        p = chi2_sf(float(stat), k - 1)
    else:
        raise ValueError(f"unknown method {method!r}")
    return TestResult("friedman", float(stat), min(1.0, max(0.0, p)), method, n,
                      notes, k - 1, details)


# -- Wilcoxon signed-rank -------------------------------------------------

def _subset_sum_counts(weights: Sequence[int]) -> list[int]:
    """counts[s] = number of subsets of ``weights`` summing to s."""
    counts = [1] + [0] * sum(weights)
    top = 0
    for w in weights:
        top += w
        for s in range(top, w - 1, -1):
            counts[s] += counts[s - w]
    return counts


def wilcoxon_signed_rank(x: Sequence, y: Sequence, method: str = "auto") -> TestResult:
    """Two-sided Wilcoxon signed-rank test on paired samples.

    Zero differences are dropped. The statistic is W = min(W+, W-). With
    ``method="auto"`` the p-value is exact for up to 20 nonzero differences:
    twice the probability, over all equally likely sign patterns, that W+ is
    at most the observed W (capped at 1). Beyond that a normal approximation
    with continuity and tie correction is used.
    """
    if len(x) != len(y):
        raise ValueError(f"paired samples differ in length: {len(x)} vs {len(y)}")
    if not x:
        raise InsufficientData("need at least one pair")
    diffs = [Fraction(a) - Fraction(b) for a, b in zip(x, y)]
    diffs = [d for d in diffs if d != 0]
    n = len(diffs)
    if n == 0:
        return TestResult("wilcoxon", None, None, NOT_APPLICABLE, 0,
                          "all paired differences are zero")
    ranks = midranks([abs(d) for d in diffs])
    w_plus = sum((r for r, d in zip(ranks, diffs) if d > 0), Fraction(0))
    w_minus = sum((r for r, d in zip(ranks, diffs) if d < 0), Fraction(0))
    w = min(w_plus, w_minus)
    ties = tie_sizes([abs(d) for d in diffs])
    notes = "mid-ranks applied to tied |differences|" if ties else ""
    details = {"w_plus": float(w_plus), "w_minus": float(w_minus)}

    if method == "auto":
        method = EXACT if n <= WILCOXON_EXACT_MAX_N else APPROXIMATE
    if method == EXACT:
        doubled = [int(2 * r) for r in ranks]  # mid-ranks are multiples of 1/2
        counts = _subset_sum_counts(doubled)
        hits = sum(counts[: int(2 * w) + 1])
        p = min(1.0, 2 * hits / 2 ** n)
    elif method == APPROXIMATE:
        mean = Fraction(n * (n + 1), 4)
        var = Fraction(n * (n + 1) * (2 * n + 1), 24) - Fraction(sum(t ** 3 - t for t in ties), 48)
        if var <= 0:
            p = 1.0
        else:
            z = max(0.0, float(abs(w - mean)) - 0.5) / math.sqrt(var)
            p = min(1.0, normal_sf_two_sided(z))
    else:
        raise ValueError(f"unknown method {method!r}")
    return TestResult("wilcoxon", float(w), p, method, n, notes, None, details)


# -- multiple comparisons -------------------------------------------------

def bonferroni(p_values: Sequence[float], alpha: float = 0.05) -> list[tuple[float, bool]]:
    """Adjusted p = min(1, m*p) with m = len(p_values); significant iff p_adj < alpha."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    m = len(p_values)
    out = []
    for p in p_values:
        if not 0 <= p <= 1:
            raise ValueError(f"p-value out of [0, 1]: {p}")
        adj = min(1.0, m * p)
        out.append((adj, adj < alpha))
    return out


@dataclass(frozen=True)
class PairwiseComparison:
    mode_a: str
    mode_b: str
    result: TestResult
    p_adjusted: float | None
    significant: bool


@dataclass(frozen=True)
class PairwiseReport:
    comparisons: tuple[PairwiseComparison, ...]
    alpha: float
    correction: str = "bonferroni"
    omnibus_significant: bool | None = None

    @property
    def note(self) -> str:
        if self.omnibus_significant is False:
            return "omnibus not significant"
        if self.omnibus_significant is None:
            return "omnibus not applicable"
        return ""


def pairwise_wilcoxon(matrix: BlockMatrix, alpha: float = 0.05,
                      omnibus: TestResult | None = None) -> PairwiseReport:
    pairs = list(combinations(range(matrix.k), 2))
    results = [wilcoxon_signed_rank(matrix.column(i), matrix.column(j)) for i, j in pairs]
    m = len(pairs)
    comparisons = []
    for (i, j), res in zip(pairs, results):
        if res.applicable:
            # m counts every pair, including ones that were not testable
            adj = min(1.0, m * res.p_value)
            sig = adj < alpha
        else:
            adj, sig = None, False
        comparisons.append(PairwiseComparison(matrix.modes[i], matrix.modes[j], res, adj, sig))
    omnibus_sig = None
    if omnibus is not None and omnibus.applicable:
        omnibus_sig = omnibus.p_value < alpha
    return PairwiseReport(tuple(comparisons), alpha, "bonferroni", omnibus_sig)


# -- survey pipeline ------------------------------------------------------

MEASURES = ("sus", "tlx_raw", "tlx_weighted") + tuple(f"tlx:{s}" for s in TLX_SUBSCALES)


def measure_value(score: ScoredResponse, measure: str) -> Fraction | None:
    if measure == "sus":
        return score.sus_score
    if measure == "tlx_raw":
        return score.tlx_raw
    if measure == "tlx_weighted":
        return score.tlx_weighted
    if measure.startswith("tlx:"):
        sub = measure[4:]
        if sub not in TLX_SUBSCALES:
            raise ValueError(f"unknown TLX subscale {sub!r}; expected one of "
                             f"{', '.join(TLX_SUBSCALES)}")
        return Fraction(score.tlx[sub]) if sub in score.tlx else None
    raise ValueError(f"unknown measure {measure!r}; expected one of {', '.join(MEASURES)}")


@dataclass(frozen=True)
class ModeComparison:
    measure: str
    matrix: BlockMatrix
    descriptives: tuple[Summary, ...]
    friedman: TestResult
    pairwise: PairwiseReport
    dropped: tuple[str, ...]
    warnings: tuple[str, ...]

    @property
    def n(self) -> int:
        return self.matrix.n


def build_matrix(scores: Sequence[ScoredResponse], measure: str,
                 modes: Sequence[str] | None = None) -> tuple[BlockMatrix, list[str], list[str]]:
    """Arrange scores into complete blocks; return (matrix, dropped ids, warnings)."""
    warnings: list[str] = []
    if modes is None:
        modes = list(dict.fromkeys(s.mode for s in scores))
    modes = list(modes)
    by_pid: dict[str, dict[str, Fraction]] = {}
    for s in scores:
        value = measure_value(s, measure)
        if value is None:
            warnings.append(f"participant {s.participant_id!r}, mode {s.mode!r}: "
                            f"no {measure} value")
            continue
        cell = by_pid.setdefault(s.participant_id, {})
        if s.mode in cell:
            raise ValueError(f"duplicate score for participant {s.participant_id!r}, "
                             f"mode {s.mode!r}")
        cell[s.mode] = value
    kept, dropped = [], []
    for pid, cells in by_pid.items():
        missing = [m for m in modes if m not in cells]
        if missing:
            dropped.append(pid)
            warnings.append(f"participant {pid!r} dropped: missing mode(s) "
                            f"{', '.join(map(repr, missing))}")
        else:
            kept.append(pid)
    if len(kept) < 2 or len(modes) < 2:
        raise InsufficientData(
            f"{measure}: need at least 2 complete participants and 2 modes, "
            f"got {len(kept)} participant(s) and {len(modes)} mode(s)")
    matrix = BlockMatrix(tuple(kept), tuple(modes),
                         tuple(tuple(by_pid[p][m] for m in modes) for p in kept))
    return matrix, dropped, warnings


def compare_modes(scores: Sequence[ScoredResponse], measure: str = "sus",
                  alpha: float = 0.05, modes: Sequence[str] | None = None) -> ModeComparison:
    """Descriptives, Friedman omnibus, and Bonferroni-adjusted pairwise Wilcoxon tests.

    The pairwise section is always produced; when the omnibus test is not
    significant the report says so.
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    matrix, dropped, warnings = build_matrix(scores, measure, modes)
    omnibus = friedman(matrix)
    return ModeComparison(measure, matrix, tuple(descriptives(matrix)), omnibus,
                          pairwise_wilcoxon(matrix, alpha, omnibus), tuple(dropped),
                          tuple(warnings))
