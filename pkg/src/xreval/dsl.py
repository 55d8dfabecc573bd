"""Reader and writer for ``.gomsops`` catalogs and ``.gomsmodel`` mode files.

Catalog line::

    operator S "Scanning" category=perceptual duration=13ms source="Potter 2014"
    operator A "Adjusting" category=motor duration=param source="n/a"
    operator B "Other" category=motor duration=param:A source="n/a"

Mode line::

    mode "Eye-gaze & Pinch": S + 2*M + Pr + 2*P_e + G_H + R_H

Blank lines and ``#`` comments are ignored. Each line is parsed on its own;
a bad line is recorded and parsing resumes on the next one, so a single run
reports every error in the file.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .catalog import Catalog, Fixed, OperatorCategory, OperatorDef, Parameter
from .errors import (LocatedDuplicateSymbol, LocatedUnknownOperator, ParseError,
                     UnknownOperator)
from .model import Mode, ModelSet, OperatorTerm

CATALOG_SUFFIX = ".gomsops"
MODEL_SUFFIX = ".gomsmodel"

_PUNCT = {":", "+", "*", "=", "-"}


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, UINT, STRING, or the punctuation character itself
    text: str  # raw source text
    value: object
    column: int  # 1-based


def _tokenize(line: str, lineno: int) -> list[Token]:
    tokens: list[Token] = []
    i, n = 0, len(line)
    while i < n:
        ch = line[i]
        if ch in " \t\f\v":
            i += 1
        elif ch == "#":
            break
        elif ch.isascii() and ch.isalpha():
            j = i + 1
            while j < n and line[j].isascii() and (line[j].isalnum() or line[j] == "_"):
                j += 1
            tokens.append(Token("IDENT", line[i:j], line[i:j], i + 1))
            i = j
        elif ch.isascii() and ch.isdigit():
            j = i + 1
            while j < n and line[j].isascii() and line[j].isdigit():
                j += 1
            tokens.append(Token("UINT", line[i:j], int(line[i:j]), i + 1))
            i = j
        elif ch == '"':
            j = i + 1
            chars = []
            while True:
                if j >= n:
                    raise ParseError(lineno, i + 1, "unterminated string", line[i:])
                c = line[j]
                if c == "\\":
                    if j + 1 < n and line[j + 1] in '"\\':
                        chars.append(line[j + 1])
                        j += 2
                        continue
                    raise ParseError(lineno, j + 1, "invalid escape in string", line[j:j + 2])
                if c == '"':
                    break
                chars.append(c)
                j += 1
            tokens.append(Token("STRING", line[i:j + 1], "".join(chars), i + 1))
            i = j + 1
        elif ch in _PUNCT:
            tokens.append(Token(ch, ch, ch, i + 1))
            i += 1
        else:
            raise ParseError(lineno, i + 1, f"unexpected character {ch!r}", ch)
    return tokens


class _LineParser:
    """Recursive-descent parser over the tokens of one line."""

    def __init__(self, line: str, lineno: int):
        self.line = line
        self.lineno = lineno
        self.tokens = _tokenize(line, lineno)
        self.pos = 0

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        if tok is None:
            tok = self.peek()
        if tok is None:
            # past the end: point at the last token on the line
            tok = self.tokens[-1]
            message = f"{message}, found end of line"
        return ParseError(self.lineno, tok.column, message, tok.text)

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            found = f", found {tok.text!r}" if tok is not None else ""
            raise self.error(f"expected {what or kind}{found}", tok)
        self.pos += 1
        return tok

    def expect_word(self, word: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != "IDENT" or tok.value != word:
            found = f", found {tok.text!r}" if tok is not None else ""
            raise self.error(f"expected '{word}'{found}", tok)
        self.pos += 1
        return tok

    def accept(self, kind: str) -> Token | None:
        tok = self.peek()
        if tok is not None and tok.kind == kind:
            self.pos += 1
            return tok
        return None

    def end(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise self.error(f"unexpected {tok.text!r} after end of declaration", tok)

    # operator <IDENT> <STRING> category=<CAT> duration=(<UINT>ms | param[:<IDENT>]) source=<STRING>
    def operator_decl(self) -> tuple[OperatorDef, Token]:
        self.expect_word("operator")
        sym = self.expect("IDENT", "operator symbol")
        name = self.expect("STRING", "quoted display name")

        self.expect_word("category")
        self.expect("=", "'='")
        cat_tok = self.expect("IDENT", "category")
        try:
            category = OperatorCategory(cat_tok.value)
        except ValueError:
            raise self.error(
                f"unknown category {cat_tok.text!r} "
                "(expected perceptual, cognitive, motor or general)", cat_tok) from None

        self.expect_word("duration")
        self.expect("=", "'='")
        duration = self.duration(sym.value)

        self.expect_word("source")
        self.expect("=", "'='")
        source = self.expect("STRING", "quoted source")
        self.end()
        return OperatorDef(sym.value, name.value, category, duration, source.value), sym

    def duration(self, symbol: str):
        tok = self.peek()
        if tok is not None and tok.kind == "-":
            self.pos += 1
            num = self.accept("UINT")
            if num is not None:
                raise self.error(f"negative duration -{num.text}ms", tok)
            raise self.error("expected duration", tok)
        if tok is not None and tok.kind == "UINT":
            self.pos += 1
            unit = self.peek()
            if unit is None or unit.kind != "IDENT" or unit.value != "ms":
                raise self.error("expected 'ms' after duration value", unit)
            self.pos += 1
            return Fixed(tok.value)
        if tok is not None and tok.kind == "IDENT" and tok.value == "param":
            self.pos += 1
            if self.accept(":"):
                return Parameter(self.expect("IDENT", "parameter name").value)
            return Parameter(symbol)
        raise self.error("expected duration (<integer>ms or param[:NAME])", tok)

    # mode <STRING> : <term> ( "+" <term> )*
    def mode_decl(self) -> tuple[str, Token, list[tuple[OperatorTerm, Token]]]:
        self.expect_word("mode")
        name = self.expect("STRING", "quoted mode name")
        if not name.value:
            raise self.error("mode name must not be empty", name)
        self.expect(":", "':'")
        terms = [self.term()]
        while self.accept("+"):
            terms.append(self.term())
        self.end()
        return name.value, name, terms

    # [<UINT> "*"] <IDENT>
    def term(self) -> tuple[OperatorTerm, Token]:
        count = 1
        num = self.accept("UINT")
        if num is not None:
            if num.value < 1:
                raise self.error("term count must be at least 1", num)
            self.expect("*", "'*' after count")
            count = num.value
        sym = self.expect("IDENT", "operator symbol")
        return OperatorTerm(count, sym.value), sym


def _split_lines(source: str) -> list[str]:
    # only LF and CRLF end a line; str.splitlines() would also split on form feeds
    lines = source.split("\n")
    return [ln[:-1] if ln.endswith("\r") else ln for ln in lines]


def _is_blank(line: str) -> bool:
    stripped = line.strip()
    return not stripped or stripped.startswith("#")


def _run(source: str, path: str | None,
         handle: Callable[[_LineParser, int], None]) -> list[ParseError]:
    errors: list[ParseError] = []
    for lineno, line in enumerate(_split_lines(source), start=1):
        if _is_blank(line):
            continue
        try:
            handle(_LineParser(line, lineno), lineno)
        except ParseError as exc:
            errors.append(exc)
    for exc in errors:
        _attach_path(exc, path)
    return errors


def _attach_path(exc: ParseError, path: str | None) -> None:
    if path is not None:
        exc.path = path
        exc.args = (exc.describe(),)


def _raise_all(errors: list[ParseError]) -> None:
    if errors:
        first = errors[0]
        first.errors = list(errors)
        raise first


def parse_catalog(source: str, path: str | None = None) -> Catalog:
    """Parse catalog text. Raises the first ParseError; ``.errors`` holds all."""
    ops: list[OperatorDef] = []
    seen: set[str] = set()

    def handle(p: _LineParser, lineno: int) -> None:
        first = p.peek()
        if first is not None and first.kind == "IDENT" and first.value == "mode":
            raise p.error("mode declaration in a catalog file", first)
        op, sym_tok = p.operator_decl()
        if op.symbol in seen:
            raise LocatedDuplicateSymbol(op.symbol, lineno, sym_tok.column, sym_tok.text)
        seen.add(op.symbol)
        ops.append(op)

    _raise_all(_run(source, path, handle))
    return Catalog(tuple(ops))


def parse_modes(source: str, catalog: Catalog, path: str | None = None) -> ModelSet:
    """Parse mode definitions, resolving every operator against ``catalog``."""
    modes: list[Mode] = []
    seen: set[str] = set()
    known = set(catalog.symbols)

    def handle(p: _LineParser, lineno: int) -> None:
        first = p.peek()
        if first is not None and first.kind == "IDENT" and first.value == "operator":
            raise p.error("operator declaration in a model file", first)
        name, name_tok, terms = p.mode_decl()
        if name in seen:
            raise ParseError(lineno, name_tok.column, f"duplicate mode name {name!r}",
                             name_tok.text)
        for term, tok in terms:
            if term.symbol not in known:
                raise LocatedUnknownOperator(term.symbol, lineno, tok.column, tok.text)
        seen.add(name)
        modes.append(Mode(name, tuple(t for t, _ in terms)))

    _raise_all(_run(source, path, handle))
    return ModelSet(tuple(modes))


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def format_duration(op: OperatorDef) -> str:
    d = op.duration
    if isinstance(d, Fixed):
        return f"{d.ms}ms"
    return "param" if d.name == op.symbol else f"param:{d.name}"


def serialize_catalog(catalog: Catalog) -> str:
    return "".join(
        f"operator {op.symbol} {_quote(op.display_name)} category={op.category.value} "
        f"duration={format_duration(op)} source={_quote(op.source)}\n"
        for op in catalog
    )


def format_terms(terms) -> str:
    return " + ".join(t.symbol if t.count == 1 else f"{t.count}*{t.symbol}" for t in terms)


def serialize_modes(models: ModelSet) -> str:
    return "".join(f"mode {_quote(m.name)}: {format_terms(m.terms)}\n" for m in models)


def load_catalog(path) -> Catalog:
    with open(path, encoding="utf-8") as fh:
        return parse_catalog(fh.read(), path=str(path))


def load_modes(path, catalog: Catalog) -> ModelSet:
    with open(path, encoding="utf-8") as fh:
        return parse_modes(fh.read(), catalog, path=str(path))


__all__ = [
    "CATALOG_SUFFIX", "MODEL_SUFFIX", "ParseError", "UnknownOperator",
    "parse_catalog", "parse_modes", "serialize_catalog", "serialize_modes",
    "load_catalog", "load_modes", "format_terms",
]
