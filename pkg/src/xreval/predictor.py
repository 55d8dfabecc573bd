"""Additive execution-time prediction for GOMS modes.

Every total is an affine expression ``constant + sum(coeff * parameter)`` in
integer milliseconds, so predictions stay exact while a parameter such as
accuracy adjustment is still unknown.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .catalog import Catalog, Fixed, OperatorCategory
from .errors import NegativeDuration, UnboundParameter
from .model import Mode, ModelSet


def _clean(coeffs: Mapping[str, int]) -> dict[str, int]:
    return {k: coeffs[k] for k in sorted(coeffs) if coeffs[k]}


@dataclass(frozen=True)
class Affine:
    constant_ms: int = 0
    coeffs: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _clean(self.coeffs))

    def __add__(self, other: Affine) -> Affine:
        merged = dict(self.coeffs)
        for k, v in other.coeffs.items():
            merged[k] = merged.get(k, 0) + v
        return Affine(self.constant_ms + other.constant_ms, merged)

    def scale(self, k: int) -> Affine:
        return Affine(self.constant_ms * k, {p: c * k for p, c in self.coeffs.items()})

    @property
    def parameters(self) -> tuple[str, ...]:
        return tuple(self.coeffs)

    def bind(self, bindings: Mapping[str, int]) -> int:
        total = self.constant_ms
        for name, coeff in self.coeffs.items():
            if name not in bindings:
                raise UnboundParameter(name)
            total += coeff * _check_binding(name, bindings[name])
        return total

    def __str__(self):
        return format_affine(self)


def format_affine(expr: Affine) -> str:
    parts = [str(expr.constant_ms)] if expr.constant_ms or not expr.coeffs else []
    for name, coeff in expr.coeffs.items():
        parts.append(name if coeff == 1 else f"{coeff}*{name}")
    return " + ".join(parts)


def _check_binding(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"binding for {name} must be an integer number of ms, got {value!r}")
    if value < 0:
        raise NegativeDuration(f"binding for {name} must be >= 0 ms, got {value}")
    return value


@dataclass(frozen=True)
class OperatorContribution:
    symbol: str
    count: int
    subtotal: Affine


@dataclass(frozen=True)
class Prediction:
    mode: str
    repeat: int
    operator_count: int
    total: Affine
    per_operator: tuple[OperatorContribution, ...]
    per_category: Mapping[OperatorCategory, Affine]

    @property
    def constant_ms(self) -> int:
        return self.total.constant_ms

    @property
    def param_coeffs(self) -> dict[str, int]:
        return dict(self.total.coeffs)

    @property
    def lower_bound(self) -> int:
        """Total with every parameter at zero."""
        return self.total.constant_ms

    def bind(self, bindings: Mapping[str, int]) -> int:
        return self.total.bind(bindings)

    def scaled(self, k: int) -> Prediction:
        return Prediction(
            self.mode, self.repeat * k, self.operator_count * k, self.total.scale(k),
            tuple(OperatorContribution(c.symbol, c.count * k, c.subtotal.scale(k))
                  for c in self.per_operator),
            {cat: a.scale(k) for cat, a in self.per_category.items()},
        )


def predict(mode: Mode, catalog: Catalog, repeat: int = 1) -> Prediction:
    """Sum operator times over ``mode``, ``repeat`` times over."""
    if isinstance(repeat, bool) or not isinstance(repeat, int) or repeat < 1:
        raise ValueError(f"repeat must be a positive integer, got {repeat!r}")
    per_operator = []
    per_category = {cat: Affine() for cat in OperatorCategory}
    total = Affine()
    for term in mode.terms:
        op = catalog.lookup(term.symbol)
        n = term.count * repeat
        if isinstance(op.duration, Fixed):
            sub = Affine(op.duration.ms * n)
        else:
            sub = Affine(0, {op.duration.name: n})
        per_operator.append(OperatorContribution(op.symbol, n, sub))
        per_category[op.category] = per_category[op.category] + sub
        total = total + sub
    return Prediction(mode.name, repeat, mode.operator_count * repeat, total,
                      tuple(per_operator), per_category)


def bind(prediction: Prediction, bindings: Mapping[str, int]) -> int:
    return prediction.bind(bindings)


def predict_all(models: ModelSet, catalog: Catalog, repeat: int = 1) -> list[Prediction]:
    return [predict(m, catalog, repeat) for m in models]


@dataclass(frozen=True)
class Ranking:
    ordered: tuple[tuple[str, int], ...]
    bindings: Mapping[str, int]

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.ordered]


def compare(models: ModelSet, catalog: Catalog, bindings: Mapping[str, int] | None = None,
            repeat: int = 1) -> Ranking:
    """Rank modes by resolved total, fastest first; ties keep declaration order."""
    bindings = dict(bindings or {})
    totals = [(p.mode, p.bind(bindings)) for p in predict_all(models, catalog, repeat)]
    ordered = sorted(totals, key=lambda item: item[1])
    used = {k: bindings[k] for k in sorted(bindings)}
    return Ranking(tuple(ordered), used)


@dataclass(frozen=True)
class Crossover:
    mode_a: str
    mode_b: str
    value: Fraction
    in_range: bool

    @property
    def bracket(self) -> tuple[int, int]:
        return math.floor(self.value), math.ceil(self.value)


@dataclass(frozen=True)
class SweepPoint:
    value: int
    totals: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class CrossoverReport:
    parameter: str
    start: int
    stop: int
    step: int
    crossovers: tuple[Crossover, ...]
    out_of_range: tuple[Crossover, ...]
    points: tuple[SweepPoint, ...]
    lines: tuple[tuple[str, Affine], ...]


def sweep(models: ModelSet, catalog: Catalog, parameter: str, start: int, stop: int,
          step: int, bindings: Mapping[str, int] | None = None,
          repeat: int = 1) -> CrossoverReport:
    """Evaluate every mode over ``parameter`` in [start, stop] and find crossovers.

    Each mode's total reduces to ``c + a*x`` in the swept parameter once the
    other parameters are bound. Two modes cross at ``x = (c_j - c_i) / (a_i - a_j)``
    when their slopes differ; that value is kept as an exact fraction. The grid
    is start, start+step, ... up to and not beyond ``stop``, so a step wider
    than the range yields the single point ``start``.
    """
    for name, value in (("from", start), ("to", stop), ("step", step)):
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"{name} must be an integer, got {value!r}")
    if start < 0:
        raise NegativeDuration(f"sweep start must be >= 0 ms, got {start}")
    if start > stop:
        raise ValueError(f"sweep start {start} is greater than stop {stop}")
    if step < 1:
        raise ValueError(f"sweep step must be >= 1, got {step}")
    fixed = {k: v for k, v in (bindings or {}).items() if k != parameter}

    lines = []
    for pred in predict_all(models, catalog, repeat):
        slope = pred.total.coeffs.get(parameter, 0)
        rest = Affine(pred.total.constant_ms,
                      {k: v for k, v in pred.total.coeffs.items() if k != parameter})
        lines.append((pred.mode, Affine(rest.bind(fixed), {parameter: slope})))

    inside, outside = [], []
    for (name_i, li), (name_j, lj) in combinations(lines, 2):
        a_i, a_j = li.coeffs.get(parameter, 0), lj.coeffs.get(parameter, 0)
        if a_i == a_j:
            continue
        x = Fraction(lj.constant_ms - li.constant_ms, a_i - a_j)
        hit = start <= x <= stop
        (inside if hit else outside).append(Crossover(name_i, name_j, x, hit))

    points = tuple(
        SweepPoint(x, tuple((name, line.bind({parameter: x})) for name, line in lines))
        for x in range(start, stop + 1, step)
    )
    return CrossoverReport(parameter, start, stop, step, tuple(inside), tuple(outside),
                           points, tuple(lines))
