import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xreval import (Catalog, DuplicateSymbol, Fixed, Mode, ModelSet, OperatorCategory,
                    OperatorDef, OperatorTerm, Parameter, ParseError, UnknownOperator,
                    builtin_catalog, parse_catalog, parse_modes, serialize_catalog,
                    serialize_modes)

BOXSTACK_MODES = """\
mode "Eye-gaze & Pinch": S + 2*M + Pr + 2*P_e + G_H + R_H
mode "Eye-gaze & Voice": S + 2*M + 2*P_e + 2*Pa + G_V + 2*W + R_V
mode "Drag & Drop": S + 2*M + Pr + 2*P_h + G_H + MV + A + R_H + Re
"""


def test_parse_single_fixed_operator():
    cat = parse_catalog('operator S "Scanning" category=perceptual duration=13ms '
                        'source="Potter 2014"')
    assert len(cat) == 1
    op = cat.lookup("S")
    assert (op.display_name, op.category, op.duration, op.source) == (
        "Scanning", OperatorCategory.PERCEPTUAL, Fixed(13), "Potter 2014")


def test_parse_param_operator():
    cat = parse_catalog('operator A "Adjusting the Accuracy" category=motor duration=param '
                        'source="n/a"\n'
                        'operator B "Other" category=motor duration=param:A source=""\n')
    assert cat.lookup("A").duration == Parameter("A")
    assert cat.lookup("B").duration == Parameter("A")


def test_duplicate_symbol_reported_on_second_line():
    line = 'operator S "x" category=perceptual duration=13ms source="a"'
    with pytest.raises(DuplicateSymbol) as exc:
        parse_catalog(f"{line}\n{line}\n")
    assert isinstance(exc.value, ParseError)
    assert (exc.value.line, exc.value.column) == (2, 10)
    assert exc.value.offending_text == "S"


def test_mode_operator_counts(catalog):
    models = parse_modes(BOXSTACK_MODES, catalog)
    assert [m.operator_count for m in models] == [8, 11, 11]
    assert models["Eye-gaze & Voice"].symbols() == ["S", "M", "P_e", "Pa", "G_V", "W", "R_V"]


def test_unknown_operator_in_mode(catalog):
    with pytest.raises(UnknownOperator) as exc:
        parse_modes('mode "Bad": S + 2*QQ', catalog)
    assert exc.value.symbol == "QQ"
    assert (exc.value.line, exc.value.column) == (1, 19)


def test_comments_whitespace_crlf_and_trailing_newline(catalog):
    text = ('# header\r\n\r\n  mode   "m"  :S+ 2 *  M   # trailing comment\r\n'
            'mode "n": 3*W')
    models = parse_modes(text, catalog)
    assert models.modes == (Mode("m", (OperatorTerm(1, "S"), OperatorTerm(2, "M"))),
                            Mode("n", (OperatorTerm(3, "W"),)))
    assert parse_modes(text + "\n", catalog) == models


def test_string_escapes_round_trip():
    op = OperatorDef("X", 'say "hi" \\ bye', OperatorCategory.GENERAL, Fixed(0), 'a"b')
    cat = Catalog((op,))
    assert parse_catalog(serialize_catalog(cat)) == cat


def test_serialize_formatting():
    ms = ModelSet((Mode("m", (OperatorTerm(2, "M"),)),))
    assert serialize_modes(ms) == 'mode "m": 2*M\n'
    ms = ModelSet((Mode("m", (OperatorTerm(1, "S"), OperatorTerm(3, "P_e"))),))
    assert serialize_modes(ms) == 'mode "m": S + 3*P_e\n'


def test_builtin_round_trip(catalog, models):
    assert parse_catalog(serialize_catalog(builtin_catalog())) == builtin_catalog()
    assert catalog == builtin_catalog()
    assert parse_modes(serialize_modes(models), catalog) == models


# (source, expected line, expected column, offending text, message fragment)
MALFORMED_CATALOGS = [
    ('operator S "x" category=perceptual duration=-5ms source="a"', 1, 45, "-", "negative"),
    ('operator S "x" category=visual duration=5ms source="a"', 1, 25, "visual", "category"),
    ('operator 9S "x" category=motor duration=5ms source="a"', 1, 10, "9", "symbol"),
    ('operator S "x category=motor duration=5ms source="a"', 1, 52, '"', "unterminated"),
    ('operator S "x" category=motor duration=5s source="a"', 1, 41, "s", "ms"),
    ('\n# c\noperator S "x" category=motor duration=5ms', 3, 41, "ms", "end of line"),
    ('operator S "x" category=motor duration=5ms source="a" extra', 1, 55, "extra", "unexpected"),
    ('operator S "x" category=motor duration=param:5 source="a"', 1, 46, "5", "parameter"),
    ('operator S "x" category=motor duration=5ms source="a\\q"', 1, 53, "\\q", "escape"),
    ('operator S "x" category=motor duration=5ms source="a', 1, 51, '"a', "unterminated"),
    ('mode "m": S', 1, 1, "mode", "catalog"),
    ('operator S "x" category=motor duration=5ms source="a" @', 1, 55, "@", "character"),
]


@pytest.mark.parametrize("source,line,col,text,fragment", MALFORMED_CATALOGS)
def test_malformed_catalog_positions(source, line, col, text, fragment):
    with pytest.raises(ParseError) as exc:
        parse_catalog(source)
    err = exc.value
    assert (err.line, err.column, err.offending_text) == (line, col, text), err
    assert fragment in err.message
    src_line = source.split("\n")[err.line - 1]
    assert src_line[err.column - 1:].startswith(err.offending_text)


MALFORMED_MODES = [
    ('mode "m" S', 1, 10, "S", "':'"),
    ('mode "m": S +', 1, 13, "+", "end of line"),
    ('mode "m": 0*S', 1, 11, "0", "at least 1"),
    ('mode "m": 2 M', 1, 13, "M", "'*'"),
    ('mode "": S', 1, 6, '""', "empty"),
    ('mode m: S', 1, 6, "m", "quoted"),
    ('mode "m": S\nmode "m": M', 2, 6, '"m"', "duplicate"),
    ('mode "m": S + 2*Q', 1, 17, "Q", "unknown operator"),
    ('  operator S "x" category=motor duration=5ms source="a"', 1, 3, "operator", "model file"),
    ('mode "m": S S', 1, 13, "S", "unexpected"),
]


@pytest.mark.parametrize("source,line,col,text,fragment", MALFORMED_MODES)
def test_malformed_mode_positions(catalog, source, line, col, text, fragment):
    with pytest.raises(ParseError) as exc:
        parse_modes(source, catalog)
    err = exc.value
    assert (err.line, err.column, err.offending_text) == (line, col, text), err
    assert fragment in err.message
    src_line = source.split("\n")[err.line - 1]
    assert src_line[err.column - 1:].startswith(err.offending_text)


def test_all_errors_reported_and_good_lines_kept_going(catalog):
    text = 'mode "a": S\nmode "b": QQ\nmode "c" S\nmode "d": 2*M\nmode "e": ZZ + R\n'
    with pytest.raises(ParseError) as exc:
        parse_modes(text, catalog)
    assert [e.line for e in exc.value.errors] == [2, 3, 5]
    assert exc.value.errors[0] is exc.value


def test_path_included_in_message(catalog):
    with pytest.raises(ParseError) as exc:
        parse_modes('mode "x": Q', catalog, path="demo.gomsmodel")
    assert str(exc.value).startswith("demo.gomsmodel:1:11:")


# -- property: round trip over generated values ---------------------------

idents = st.from_regex(r"[A-Za-z][A-Za-z0-9_]{0,6}", fullmatch=True)
texts = st.text(st.characters(blacklist_categories=("Cs",), blacklist_characters="\r\n"),
                max_size=12)
durations = st.one_of(st.integers(0, 10 ** 6).map(Fixed), idents.map(Parameter))


@st.composite
def catalogs(draw):
    syms = draw(st.lists(idents, min_size=1, max_size=8, unique=True))
    return Catalog(tuple(
        OperatorDef(s, draw(texts), draw(st.sampled_from(list(OperatorCategory))),
                    draw(durations), draw(texts))
        for s in syms))


@st.composite
def catalog_and_models(draw):
    cat = draw(catalogs())
    names = draw(st.lists(texts.filter(bool), min_size=0, max_size=4, unique=True))
    modes = []
    for name in names:
        terms = draw(st.lists(
            st.builds(OperatorTerm, st.integers(1, 9), st.sampled_from(cat.symbols)),
            min_size=1, max_size=6))
        modes.append(Mode(name, tuple(terms)))
    return cat, ModelSet(tuple(modes))


@settings(max_examples=200, deadline=None)
@given(catalog_and_models())
def test_round_trip_property(pair):
    cat, models = pair
    cat2 = parse_catalog(serialize_catalog(cat))
    assert cat2 == cat
    assert parse_modes(serialize_modes(models), cat2) == models


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet='ab S M2*+:="\\#\n-_mode operator', max_size=60))
def test_error_positions_inside_source(catalog, source):
    for parse in (parse_catalog, lambda s: parse_modes(s, catalog)):
        try:
            parse(source)
        except ParseError as exc:
            lines = source.split("\n")
            for err in exc.errors:
                assert 1 <= err.line <= len(lines)
                line = lines[err.line - 1]
                assert 1 <= err.column <= len(line)
                assert err.offending_text
                assert line[err.column - 1:].startswith(err.offending_text)
