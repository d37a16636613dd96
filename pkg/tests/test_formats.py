from fractions import Fraction

import pytest
from hypothesis import given

from conftest import weighted_relations
from mvdlab import ClassicRelation, InputError, Kind, WeightedRelation, build_sigma_n, statement
from mvdlab.formats import (
    format_relation,
    format_zemvd_set,
    parse_relation,
    parse_statement,
    parse_statement_set,
    parse_zemvd_set,
)


def test_parse_statement_examples():
    s = parse_statement("A,B ->> C | D")
    assert (s.lhs, s.first, s.second) == ({"A", "B"}, {"C"}, {"D"})
    assert parse_statement("_ ->> A | B").lhs == frozenset()
    assert parse_statement("A ->> B | C", Kind.CI).kind is Kind.CI


@pytest.mark.parametrize("text, token", [
    ("A ->> A | B", "A"),
    ("A ->> B", None),
    ("A -> B | C", None),
    ("A ->> B | C | D", None),
    ("A ->>  | C", ""),
    ("A,A ->> B | C", "A"),
    ("A# ->> B | C", "A#"),
])
def test_parse_statement_errors(text, token):
    with pytest.raises(InputError) as info:
        parse_statement(text)
    if token is not None:
        assert info.value.token == token


def test_disjointness_error_names_the_overlap():
    with pytest.raises(InputError, match="not disjoint"):
        parse_statement("A ->> A | B")


def test_parse_relation_weighted_and_constant():
    text = "A,B,#weight\n# comment\n0,0,3/4\n0,1,2\n"
    r = parse_relation(text)
    assert r == WeightedRelation(["A", "B"], {(0, 0): Fraction(3, 4), (0, 1): 2})
    c = parse_relation("B,A\n1,0\n1,1\n")
    assert c == WeightedRelation.constant(ClassicRelation(["B", "A"], [(1, 0), (1, 1)]))


@pytest.mark.parametrize("text, line, token", [
    ("A,#weight\n0,0\n", 2, "0"),
    ("A,#weight\n0,1.5\n", 2, "1.5"),
    ("A,#weight\n0,1/0\n", 2, "1/0"),
    ("A,B\n0\n", 2, "0"),
    ("A\n0\n0\n", 3, "0"),
    ("A,A\n0,0\n", 1, "A"),
    ("", 1, None),
])
def test_parse_relation_errors(text, line, token):
    with pytest.raises(InputError) as info:
        parse_relation(text, "r.rel")
    assert info.value.source == "r.rel"
    assert info.value.line == line
    assert info.value.token == token


def test_empty_schema_relation():
    r = parse_relation("#weight\n5/2\n")
    assert r.schema == () and r.weight(()) == Fraction(5, 2)
    assert parse_relation(format_relation(r)) == r


def test_format_is_canonical():
    r = WeightedRelation(["B", "A"], {(10, 1): 1, (2, 1): Fraction(1, 3), (2, 0): 5})
    assert format_relation(r) == "A,B,#weight\n0,2,5\n1,2,1/3\n1,10,1\n"
    c = ClassicRelation(["A"], [(1,), (0,)])
    assert format_relation(c) == "A\n0\n1\n"


@given(weighted_relations(positive=False))
def test_round_trip(phi):
    assert parse_relation(format_relation(phi)) == phi


def test_zemvd_file_round_trip_and_validation():
    sigma = build_sigma_n(4).zemvd()
    assert parse_zemvd_set(format_zemvd_set(sigma)) == sigma
    with pytest.raises(InputError, match="declared Z"):
        parse_zemvd_set("Z: Z\nA ->> B | W\n")
    with pytest.raises(InputError, match="missing"):
        parse_zemvd_set("A ->> B | Z\n")
    with pytest.raises(InputError, match="come first"):
        parse_zemvd_set("A ->> B | Z\nZ: Z\n")


def test_statement_set_without_z():
    got = parse_statement_set("# general\nA ->> B | C\n_ ->> A | D\n")
    assert got == (statement("A", "B", "C"), statement("_", "A", "D"))
