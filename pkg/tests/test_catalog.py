from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from assocalg.algebra import AlgebraTable, check_associativity
from assocalg.automorphisms import check_well_formed
from assocalg.catalog import (anomalous_cells, catalog_key, find_entry, load_catalog,
                              parse_family, parse_pattern, parse_table, pattern_to_subspace,
                              serialize, serialize_family, serialize_table)
from assocalg.catalog.formats import parse_families
from assocalg.errors import ParseError
from assocalg.linalg import Subspace, mat_to_vec
from assocalg.scalars import ALPHA, RationalFunction

CATALOG = load_catalog()
BY_NAME = {e.name: e for e in CATALOG}


# -- tables ----------------------------------------------------------------------------

def test_parse_examples():
    a = parse_table("algebra As_2^1 dim 2\ne1*e1 = e2\n")
    assert a.gamma[0][0] == (0, 1)
    assert a.nonzero == ((0, 0, 1, 1),)
    z = parse_table("algebra Z dim 3")
    assert z.dim == 3 and not z.nonzero
    p = parse_table("algebra P dim 2\ne1*e1 = e1 + alpha*e2\n")
    assert p.gamma[0][0][0] == 1
    assert str(p.gamma[0][0][1]) == "alpha"
    assert p.is_parametric


def test_whitespace_and_comments():
    text = "# header comment\nalgebra  W  dim 2\n  e1 * e1=  3/2*e2   # trailing\n\n"
    a = parse_table(text)
    assert a.gamma[0][0][1] == Fraction(3, 2)


MALFORMED = [
    ("algebra A dim 2\ne3*e1 = e1\n", 2, 2),
    ("algebra A dim 2\ne1*e1 = e5\n", 2, 9),
    ("algebra A dim 2\ne1*e1 = e2\ne1*e1 = e1\n", 3, 1),
    ("algebra A dim 2\ne1*e1 = 1/0*e2\n", 2, 10),
    ("algebra A dim 2\ne1*e1 = (1*e2\n", 2, None),
    ("algebra A dim 2\ne1 e1 = e2\n", 2, 1),
    ("algebra A dim x\n", 1, None),
    ("", None, None),
]


@pytest.mark.parametrize("text,line,col", MALFORMED)
def test_malformed_tables_raise_positioned_errors(text, line, col):
    with pytest.raises(ParseError) as err:
        parse_table(text, "bad.alg")
    if line is not None:
        assert err.value.line == line
        assert f"line {line}" in str(err.value)
    if col is not None:
        assert err.value.col == col


def test_zero_row_shorthand():
    p = parse_pattern("pattern P dim 2\nrow: d11, 0\nrow: 0\n")
    assert p.entries[1] == (0, 0)


def test_malformed_pattern_and_family():
    with pytest.raises(ParseError) as err:
        parse_pattern("pattern P dim 2\nrow: d11, 0\nrow: 0, d11, 0\n")
    assert err.value.line == 3
    with pytest.raises(ParseError):
        parse_pattern("pattern P dim 2\nrow: d11^2, 0\nrow: 0, 0\n")
    with pytest.raises(ParseError):
        parse_pattern("pattern P dim 2\nrow: 1, 0\nrow: 0, 0\n")
    with pytest.raises(ParseError) as err:
        parse_family("family F dim 2\nrow: a11, 0\nrow: 0, a11 +\n")
    assert err.value.line == 3


def test_serialize_examples():
    assert serialize_table(AlgebraTable.zero(3).renamed("Z")) == "algebra Z dim 3\n"
    text = serialize(BY_NAME["As_4^4"])
    assert "e2*e1 = -1*e3" in text


@st.composite
def canonical_tables(draw):
    n = draw(st.integers(1, 4))
    coeff = st.fractions(min_value=-9, max_value=9, max_denominator=6).filter(lambda c: c != 0)
    prods = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if draw(st.booleans()):
                ks = draw(st.sets(st.integers(1, n), min_size=1, max_size=n))
                prods[(i, j)] = {k: draw(coeff) for k in ks}
    return AlgebraTable.from_products(n, prods, f"R{n}")


@settings(max_examples=200, deadline=None)
@given(canonical_tables())
def test_round_trip(a):
    text = serialize_table(a)
    b = parse_table(text)
    assert b == a
    assert serialize_table(b) == text


def test_round_trip_alpha():
    a = parse_table("algebra P dim 2\ne1*e1 = e1 + (alpha - 1)/2*e2\n")
    b = parse_table(serialize_table(a))
    assert b == a


def test_family_round_trip():
    for entry in CATALOG:
        for fam in entry.expected_aut or ():
            if fam.unverifiable:
                continue
            again = parse_families(serialize_family(fam))
            assert len(again) == 1
            assert again[0].entries == fam.entries
            assert again[0].nonvanishing == fam.nonvanishing


# -- patterns --------------------------------------------------------------------------

def test_pattern_examples():
    p = parse_pattern("pattern As_2^1 dim 2\nrow: d11, 0\nrow: d21, 2*d11\n")
    assert pattern_to_subspace(p) == Subspace.span(
        [mat_to_vec(((1, 0), (0, 2))), mat_to_vec(((0, 0), (1, 0)))], 4)
    assert pattern_to_subspace(BY_NAME["As_3^1"].expected_der).dim == 4
    zero = parse_pattern("pattern Z dim 2\nrow: 0, 0\nrow: 0, 0\n")
    assert pattern_to_subspace(zero).dim == 0


def test_pattern_namespaces_differ():
    a = BY_NAME["As_2^1"].expected_der
    b = BY_NAME["As_3^1"].expected_der
    assert a.ring.namespace != b.ring.namespace


def test_anomalous_cells():
    flagged = {e.name for e in CATALOG if e.expected_der and anomalous_cells(e.expected_der)}
    assert "As_4^40" in flagged
    assert "As_2^1" not in flagged
    p = parse_pattern("pattern Q dim 2\nrow: d11, d21\nrow: 0, d11\n")
    assert anomalous_cells(p) == [(1, 2, "d21")]


# -- catalog ---------------------------------------------------------------------------

def test_catalog_counts():
    assert len(CATALOG) == 5 + 12 + 46
    assert sorted(e.name for e in CATALOG if e.table) == sorted(
        ["As_2^1", "As_3^1", "As_3^8", "As_4^2", "As_4^4"])
    assert all(e.expected_der is not None for e in CATALOG)
    names = [e.name for e in CATALOG]
    assert len(set(names)) == len(names)
    assert names == sorted(names, key=catalog_key)


def test_catalog_entry_examples():
    e = BY_NAME["As_3^8"]
    assert e.table is not None
    assert pattern_to_subspace(e.expected_der).dim == 3
    assert len(e.expected_aut) == 1
    assert BY_NAME["As_4^37"].expected_aut is None
    e = BY_NAME["As_2^3"]
    assert e.table is None
    assert pattern_to_subspace(e.expected_der) == Subspace.span([mat_to_vec(((0, 0), (0, 1)))], 4)
    assert BY_NAME["As_4^16"].expected_aut[0].unverifiable == "radical entries"
    assert find_entry(CATALOG, "As_9^9") is None


def test_shipped_tables_associative():
    for e in CATALOG:
        if e.table is not None:
            assert check_associativity(e.table) == [], e.name


def test_shipped_patterns_and_families_well_formed():
    for e in CATALOG:
        pattern_to_subspace(e.expected_der)
        for fam in e.expected_aut or ():
            if fam.unverifiable:
                assert fam.raw_rows
            else:
                check_well_formed(fam)


def test_alpha_entries_use_generic_parameter():
    with_alpha = [e.name for e in CATALOG if ALPHA in e.expected_der.ring.names]
    assert with_alpha


def test_extra_catalog_merge(tmp_path):
    (tmp_path / "mine.alg").write_text("algebra As_2^3 dim 2\ne2*e2 = e2\ne2*e1 = e1\n")
    (tmp_path / "new.alg").write_text("algebra Custom dim 1\ne1*e1 = e1\n")
    (tmp_path / "ignored.txt").write_text("not a catalog file")
    cat = load_catalog(tmp_path)
    by = {e.name: e for e in cat}
    assert by["As_2^3"].table is not None
    assert "mine.alg" in by["As_2^3"].provenance
    assert by["As_2^3"].expected_der is not None
    assert cat[-1].name == "Custom"
    assert len(cat) == len(CATALOG) + 1


def test_entry_symbols_are_rational_functions_free_of_parameters():
    p = BY_NAME["As_3^1"].expected_der
    values = {s: 1 for s in p.symbols}
    m = p.specialize(values)
    assert all(not isinstance(x, RationalFunction) or x.is_constant() for r in m for x in r)
