from __future__ import annotations

from fractions import Fraction

import pytest

from bdk2.fields import INF, FunctionField, ParseError, RationalField, field_from_name, primitive_root

F5 = FunctionField(5)
QQ = RationalField()


def place(field, text):
    return field.parse_place(text)


def test_valuations():
    t = F5.gen()
    assert F5.valuation(t, place(F5, "t")) == 1
    assert F5.valuation(t, INF) == -1
    assert QQ.valuation(QQ.from_int(12), place(QQ, "p:2")) == 2


def test_residues():
    assert str(F5.residue(F5.from_int(3), place(F5, "t"))) == "3"
    assert str(F5.residue(F5.parse("(t+1)/(t+2)"), place(F5, "t"))) == "3"
    assert str(QQ.residue(Fraction(7, 5), place(QQ, "p:3"))) == "2"


def test_places_of():
    got = [(str(pl), e) for pl, e in F5.places_of(F5.parse("t^2/(t+1)"))]
    assert got == [("t", 2), ("t+1", -1), ("inf", -1)]
    assert F5.places_of(F5.one()) == []
    assert QQ.places_of(QQ.one()) == []
    assert [(str(pl), e) for pl, e in QQ.places_of(QQ.from_int(-6))] == [("p:2", 1), ("p:3", 1)]


def test_degree_sum_is_zero():
    for text in ("t^3+t+1", "(t^2+2)/(t+4)^3", "3*t"):
        assert sum(e * pl.degree for pl, e in F5.places_of(F5.parse(text))) == 0


def test_residue_field_of_degree_two_place():
    pl = place(F5, "t^2+2")
    rf = F5.residue_field(pl)
    assert rf.size == 25
    assert rf.generator.order() == 24
    assert len(list(rf.elements())) == 24


def test_unicode_minus_and_formatting():
    assert F5.parse("t−2") == F5.parse("t+3")
    assert F5.format(F5.parse("t-2")) == "t+3"
    assert QQ.parse("−3/4") == Fraction(-3, 4)


@pytest.mark.parametrize(
    "field, text, token",
    [(F5, "t^^2", "^"), (F5, "t+", None), (QQ, "t", "t"), (F5, "1/0", None)],
)
def test_parse_errors(field, text, token):
    with pytest.raises((ParseError, ZeroDivisionError)) as info:
        field.parse(text)
    if token is not None and isinstance(info.value, ParseError):
        assert info.value.token == token


def test_bad_places():
    with pytest.raises(ParseError):
        F5.parse_place("t^2+1")  # reducible
    with pytest.raises(ParseError):
        QQ.parse_place("p:9")


def test_field_names():
    assert field_from_name("F7t").p == 7
    assert isinstance(field_from_name("Q"), RationalField)
    with pytest.raises(ParseError):
        field_from_name("R")


def test_primitive_root():
    for p in (3, 5, 7, 11, 13):
        g = primitive_root(p)
        assert len({pow(g, k, p) for k in range(p - 1)}) == p - 1
