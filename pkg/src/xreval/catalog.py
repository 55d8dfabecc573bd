"""GOMS operator definitions and catalogs.

A catalog is an immutable, ordered set of operators. Durations are whole
milliseconds, or a named parameter when the time is task dependent and
left symbolic.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Union

from .errors import DuplicateSymbol, NegativeDuration, UnknownOperator

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def is_identifier(text: str) -> bool:
    return bool(IDENT_RE.match(text))


class OperatorCategory(enum.Enum):
    PERCEPTUAL = "perceptual"
    COGNITIVE = "cognitive"
    MOTOR = "motor"
    GENERAL = "general"

    @property
    def label(self) -> str:
        return self.value.capitalize()


@dataclass(frozen=True)
class Fixed:
    ms: int

    def __post_init__(self):
        if isinstance(self.ms, bool) or not isinstance(self.ms, int):
            raise TypeError(f"duration must be an integer number of ms, got {self.ms!r}")
        if self.ms < 0:
            raise NegativeDuration(f"duration must be >= 0 ms, got {self.ms}")

    def __str__(self):
        return f"{self.ms}ms"


@dataclass(frozen=True)
class Parameter:
    name: str

    def __post_init__(self):
        if not is_identifier(self.name):
            raise ValueError(f"invalid parameter name {self.name!r}")

    def __str__(self):
        return self.name


Duration = Union[Fixed, Parameter]


def _single_line(text: str, what: str) -> None:
    if "\n" in text or "\r" in text:
        raise ValueError(f"{what} must be a single line: {text!r}")


@dataclass(frozen=True)
class OperatorDef:
    symbol: str
    display_name: str
    category: OperatorCategory
    duration: Duration
    source: str = ""

    def __post_init__(self):
        if not is_identifier(self.symbol):
            raise ValueError(f"invalid operator symbol {self.symbol!r}")
        if not isinstance(self.category, OperatorCategory):
            raise TypeError(f"category must be an OperatorCategory, got {self.category!r}")
        if not isinstance(self.duration, (Fixed, Parameter)):
            raise TypeError(f"duration must be Fixed or Parameter, got {self.duration!r}")
        _single_line(self.display_name, "display name")
        _single_line(self.source, "source")


@dataclass(frozen=True)
class Catalog:
    operators: tuple[OperatorDef, ...] = ()

    def __post_init__(self):
        ops = tuple(self.operators)
        object.__setattr__(self, "operators", ops)
        seen = set()
        for op in ops:
            if op.symbol in seen:
                raise DuplicateSymbol(op.symbol)
            seen.add(op.symbol)

    def __iter__(self) -> Iterator[OperatorDef]:
        return iter(self.operators)

    def __len__(self) -> int:
        return len(self.operators)

    def __contains__(self, symbol: object) -> bool:
        return any(op.symbol == symbol for op in self.operators)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(op.symbol for op in self.operators)

    def lookup(self, symbol: str) -> OperatorDef:
        for op in self.operators:
            if op.symbol == symbol:
                return op
        raise UnknownOperator(symbol)

    def override(self, symbol: str, duration: Duration) -> Catalog:
        return override_operator(self, symbol, duration)

    def added(self, ops: Iterable[OperatorDef]) -> Catalog:
        return Catalog(self.operators + tuple(ops))


def lookup(catalog: Catalog, symbol: str) -> OperatorDef:
    return catalog.lookup(symbol)


def override_operator(catalog: Catalog, symbol: str, duration: Duration) -> Catalog:
    """Return a copy of ``catalog`` with one operator's duration replaced."""
    if isinstance(duration, int) and not isinstance(duration, bool):
        duration = Fixed(duration)
    catalog.lookup(symbol)
    return Catalog(tuple(
        replace(op, duration=duration) if op.symbol == symbol else op
        for op in catalog.operators
    ))


_P, _C, _M, _G = (OperatorCategory.PERCEPTUAL, OperatorCategory.COGNITIVE,
                  OperatorCategory.MOTOR, OperatorCategory.GENERAL)

# symbol, name, category, ms (None = symbolic), citation
_BUILTIN = (
    ("S", "Scanning", _P, 13, "Potter, Wyble, Hagmann & McCourt 2014"),
    ("P_e", "Pointing with Eye", _P, 230, "Sethawong & Sethawong 2019"),
    ("M", "Mentally Prepare", _C, 1350, "Erazo & Pino 2015"),
    ("Pa", "Pause before the Speech", _C, 700, "Jaffe, Beebe, Feldstein, Crown & Jasnow 1970"),
    ("Pr", "Hand Preparation", _M, 452, "Erazo & Pino 2015"),
    ("P_h", "Pointing with Hand", _M, 1046, "Erazo & Pino 2015"),
    ("G_H", "Grab with Hand", _M, 586, "Erazo & Pino 2015"),
    ("G_V", "Grab with Voice Command", _M, 130, "Jaffe, Beebe, Feldstein, Crown & Jasnow 1970"),
    ("R_V", "Release with Voice Command", _M, 130, "Jaffe, Beebe, Feldstein, Crown & Jasnow 1970"),
    ("MV", "Move with Hand", _M, 700, "Tonn-Eichstaedt 2006"),
    ("R_H", "Release with Hand", _M, 520, "Erazo & Pino 2015"),
    ("A", "Adjusting the Accuracy", _M, None, "task dependent; no published value"),
    ("Re", "Hand Retraction", _M, 746, "Erazo & Pino 2015"),
    ("W", "System Waiting Time", _G, 550, "measured system response time (HoloLens 2)"),
)


def builtin_catalog() -> Catalog:
    """Operators for the XR box-stacking task (eye-gaze, voice and hand input).

    ``A`` (adjusting accuracy) has no literature value and stays symbolic.
    """
    return Catalog(tuple(
        OperatorDef(sym, name, cat, Parameter(sym) if ms is None else Fixed(ms), src)
        for sym, name, cat, ms, src in _BUILTIN
    ))
