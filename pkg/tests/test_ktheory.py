from __future__ import annotations

import random
from fractions import Fraction

import pytest

from bdk2.fields import INF, FunctionField, RationalField
from bdk2.ktheory import (
    K2Coordinates,
    SymbolExpression,
    hilbert2,
    is_integral,
    is_trivial,
    k2_coordinates,
    k2_equal,
    lift_residues,
    reciprocity_check,
    tame_symbol,
)

F5 = FunctionField(5)
QQ = RationalField()
t = F5.gen()


def sym(field, u, v, e=1):
    return SymbolExpression.symbol(field, u, v, e)


def coords(expr):
    return {str(p): str(r) for p, r in k2_coordinates(expr).coords}


def oracle(field, u, v, place):
    """(-1)^{ab} times the residue of u^b / v^a, straight from the definition."""
    a, b = field.valuation(u, place), field.valuation(v, place)
    r = field.residue(u ** b / v ** a, place)
    return -r if (a * b) % 2 else r


def test_tame_symbol_examples():
    at_t = F5.parse_place("t")
    assert str(tame_symbol(F5, F5.from_int(2), t ** 3, at_t)) == "3"
    assert str(tame_symbol(F5, t + 1, t + 2, at_t)) == "1"
    assert str(tame_symbol(F5, t, t, at_t)) == "4"


def test_tame_symbol_matches_definition():
    rng = random.Random(21)
    places = [F5.parse_place(s) for s in ("t", "t+1", "t^2+2", "inf")]
    for _ in range(150):
        u, v = F5.random_element(rng, 3), F5.random_element(rng, 3)
        for pl in places:
            assert tame_symbol(F5, u, v, pl) == oracle(F5, u, v, pl)


def test_worked_instance():
    assert coords(sym(F5, t, t - 2)) == {"t": "2", "t+3": "2", "inf": "4"}
    assert reciprocity_check(F5, t, t - 2)
    assert coords(SymbolExpression.identity(F5)) == {}


def test_is_trivial_examples():
    rng = random.Random(5)
    for _ in range(30):
        a = F5.random_element(rng, 3)
        b = F5.random_element(rng, 3)
        assert is_trivial(sym(F5, a, -a))
        assert is_trivial(sym(F5, a, b) * sym(F5, b, a))
        if a != F5.one():
            assert is_trivial(sym(F5, a, 1 - a))
    assert not is_trivial(sym(F5, t, F5.from_int(3)))


def test_bilinearity():
    rng = random.Random(9)
    for _ in range(60):
        u1, u2, v = (F5.random_element(rng, 3) for _ in range(3))
        assert k2_equal(sym(F5, u1 * u2, v), sym(F5, u1, v) * sym(F5, u2, v))
        assert k2_equal(sym(F5, v, u1 * u2), sym(F5, v, u1) * sym(F5, v, u2))


def test_is_integral_examples():
    s = sym(F5, t, F5.from_int(3))
    assert not is_integral(s, {INF})
    assert is_integral(s, {INF, F5.parse_place("t")})
    assert is_integral(sym(F5, F5.from_int(2), F5.from_int(3)), {INF})


def test_lift_residues_examples():
    at_t, at_t1 = F5.parse_place("t"), F5.parse_place("t+1")
    rf = F5.residue_field(at_t)
    assert lift_residues(F5, {}, {INF}).terms == ()
    expr = lift_residues(F5, {at_t: rf(2)}, {INF})
    assert str(expr) == "{t, 3}"
    target = {at_t: rf(2), at_t1: F5.residue_field(at_t1)(4)}
    got = k2_coordinates(lift_residues(F5, target, {INF})).restricted(lambda p: p.kind == "finite")
    assert got.as_dict() == target


def test_lift_residues_rejects_targets_in_s():
    at_t = F5.parse_place("t")
    with pytest.raises(ValueError):
        lift_residues(F5, {at_t: F5.residue_field(at_t)(2)}, {INF, at_t})
    with pytest.raises(ValueError):
        lift_residues(F5, {}, set())


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_weil_reciprocity(p):
    F = FunctionField(p)
    rng = random.Random(p)
    for _ in range(60):
        assert reciprocity_check(F, F.random_element(rng, 4), F.random_element(rng, 4))


def test_hilbert_reciprocity():
    rng = random.Random(2)
    for _ in range(80):
        assert reciprocity_check(QQ, QQ.random_element(rng, 40), QQ.random_element(rng, 40))


def test_hilbert2_table():
    # classical values: (2,3)_2 = -1, (-1,-1)_2 = -1, (3,5)_2 = 1, (5, 2)_2 = -1
    assert hilbert2(Fraction(2), Fraction(3)) == -1
    assert hilbert2(Fraction(-1), Fraction(-1)) == -1
    assert hilbert2(Fraction(3), Fraction(5)) == 1
    assert hilbert2(Fraction(5), Fraction(2)) == -1


def test_rational_coordinates_carry_signs():
    c = k2_coordinates(sym(QQ, Fraction(-1), Fraction(-1)))
    assert c.signReal == -1 and c.sign2 == -1
    assert not c.is_trivial()
    assert K2Coordinates().is_trivial()
