"""Interaction modes as flat, ordered operator sequences."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .catalog import is_identifier


@dataclass(frozen=True)
class OperatorTerm:
    count: int
    symbol: str

    def __post_init__(self):
        if isinstance(self.count, bool) or not isinstance(self.count, int) or self.count < 1:
            raise ValueError(f"term count must be a positive integer, got {self.count!r}")
        if not is_identifier(self.symbol):
            raise ValueError(f"invalid operator symbol {self.symbol!r}")


@dataclass(frozen=True)
class Mode:
    name: str
    terms: tuple[OperatorTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.name:
            raise ValueError("mode name must be non-empty")
        if "\n" in self.name or "\r" in self.name:
            raise ValueError(f"mode name must be a single line: {self.name!r}")
        if not self.terms:
            raise ValueError(f"mode {self.name!r} has no terms")

    @property
    def operator_count(self) -> int:
        return sum(t.count for t in self.terms)

    def symbols(self) -> list[str]:
        return [t.symbol for t in self.terms]


def operator_count(mode: Mode) -> int:
    return mode.operator_count


@dataclass(frozen=True)
class ModelSet:
    modes: tuple[Mode, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        names = [m.name for m in self.modes]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise ValueError(f"duplicate mode name(s): {', '.join(map(repr, dupes))}")

    def __iter__(self) -> Iterator[Mode]:
        return iter(self.modes)

    def __len__(self) -> int:
        return len(self.modes)

    def __getitem__(self, name: str) -> Mode:
        for m in self.modes:
            if m.name == name:
                return m
        raise KeyError(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(m.name for m in self.modes)
