import pytest

from xreval import (Catalog, DuplicateSymbol, Fixed, NegativeDuration, OperatorCategory,
                    OperatorDef, Parameter, UnknownOperator, builtin_catalog, lookup,
                    override_operator)

# (symbol, category, ms or None for symbolic) as listed for the box-stacking task
EXPECTED = [
    ("S", "perceptual", 13), ("P_e", "perceptual", 230), ("M", "cognitive", 1350),
    ("Pa", "cognitive", 700), ("Pr", "motor", 452), ("P_h", "motor", 1046),
    ("G_H", "motor", 586), ("G_V", "motor", 130), ("R_V", "motor", 130),
    ("MV", "motor", 700), ("R_H", "motor", 520), ("A", "motor", None),
    ("Re", "motor", 746), ("W", "general", 550),
]


def test_builtin_catalog_contents():
    cat = builtin_catalog()
    assert len(cat) == 14
    for symbol, category, ms in EXPECTED:
        op = cat.lookup(symbol)
        assert op.category is OperatorCategory(category)
        assert op.duration == (Parameter(symbol) if ms is None else Fixed(ms))
        assert op.source


@pytest.mark.parametrize("symbol,expected", [
    ("S", Fixed(13)), ("W", Fixed(550)), ("A", Parameter("A")), ("G_V", Fixed(130)),
])
def test_lookup_known(symbol, expected):
    assert lookup(builtin_catalog(), symbol).duration == expected


@pytest.mark.parametrize("cat,symbol", [(builtin_catalog(), "Q"), (Catalog(), "S")])
def test_lookup_unknown(cat, symbol):
    with pytest.raises(UnknownOperator) as exc:
        lookup(cat, symbol)
    assert exc.value.symbol == symbol


def test_builtin_is_deterministic():
    assert builtin_catalog() == builtin_catalog()


def test_categories_are_exactly_four():
    assert {c.value for c in OperatorCategory} == {"perceptual", "cognitive", "motor", "general"}


def test_duplicate_symbols_rejected():
    op = OperatorDef("S", "x", OperatorCategory.PERCEPTUAL, Fixed(1))
    with pytest.raises(DuplicateSymbol):
        Catalog((op, op))
    with pytest.raises(DuplicateSymbol):
        builtin_catalog().added([op])


def test_override_replaces_only_target():
    base = builtin_catalog()
    new = override_operator(base, "M", Fixed(1200))
    assert new.lookup("M").duration == Fixed(1200)
    assert base.lookup("M").duration == Fixed(1350)
    for old_op, new_op in zip(base, new):
        if old_op.symbol != "M":
            assert old_op == new_op
    assert new.symbols == base.symbols


def test_override_parameter_to_fixed_zero():
    assert override_operator(builtin_catalog(), "A", Fixed(0)).lookup("A").duration == Fixed(0)


def test_override_errors():
    with pytest.raises(UnknownOperator):
        override_operator(builtin_catalog(), "Z", Fixed(5))
    with pytest.raises(NegativeDuration):
        override_operator(builtin_catalog(), "M", Fixed(-1))
    with pytest.raises(NegativeDuration):
        override_operator(builtin_catalog(), "M", -5)


@pytest.mark.parametrize("bad", ["", "1S", "_x", "a-b", "é"])
def test_invalid_identifiers(bad):
    with pytest.raises(ValueError):
        OperatorDef(bad, "x", OperatorCategory.MOTOR, Fixed(1))
    with pytest.raises(ValueError):
        Parameter(bad)
