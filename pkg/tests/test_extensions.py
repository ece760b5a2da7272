from __future__ import annotations

import random
from itertools import product

import pytest

from bdk2.extensions import (
    FieldUnits,
    IntegersAdditive,
    MonomialCochain,
    MonomialCocycleExtension,
    Mu2,
    baer_sum,
    canonical_exponent,
    cochains_equal,
    commutator,
    inverse,
    is_isomorphic,
    multiply,
    pullback,
    pushout,
    split,
    valuation_hom,
)
from bdk2.fields import FunctionField, RationalField
from bdk2.lattice import Lattice, LatticeMap

F5 = FunctionField(5)
QQ = RationalField()
t = F5.gen()
U5 = FieldUnits(F5)
MINUS = F5.from_int(-1)
GRID = list(product(range(-4, 5), repeat=1))


def D(c, rank=1, field=F5, base=None):
    mat = c if isinstance(c, tuple) else ((c,),)
    return MonomialCocycleExtension(rank, FieldUnits(field), ((field.from_int(-1) if base is None else base, mat),))


def grid(rank, r=3):
    return list(product(range(-r, r + 1), repeat=rank))


def splits_on_grid(E, phi, r=4):
    """(y, a) -> a * phi(y) is a homomorphism E -> A on grid points (a = 1)."""
    c = E.coeff
    for y1 in grid(E.rank, r):
        for y2 in grid(E.rank, r):
            y12, a = multiply(E, (y1, c.identity()), (y2, c.identity()))
            if not c.eq(c.mul(a, phi(y12)), c.mul(phi(y1), phi(y2))):
                return False
    return True


def test_group_law_examples():
    u, v = t + 1, t + 2
    split_E = MonomialCocycleExtension.split_extension(1, U5)
    assert multiply(split_E, ((1,), u), ((2,), v)) == ((3,), u * v)
    assert multiply(D(1), ((1,), u), ((1,), v)) == ((2,), -(u * v))
    assert multiply(D(2), ((1,), u), ((1,), v)) == ((2,), u * v)


def test_associativity():
    rng = random.Random(1)
    E = D(((1, 2), (0, 1)), rank=2, base=t + 1)
    for _ in range(50):
        xs = [(tuple(rng.randint(-3, 3) for _ in range(2)), F5.random_element(rng, 2)) for _ in range(3)]
        a, b, c = xs
        assert multiply(E, multiply(E, a, b), c) == multiply(E, a, multiply(E, b, c))


def test_commutators():
    E = D(((1, 3), (0, 2)), rank=2)
    for y in grid(2, 2):
        assert commutator(E, y, y) == F5.one()
    # (-1)^{c_01 - c_10} on the basis pair
    assert commutator(E, (1, 0), (0, 1)) == MINUS
    split_E = MonomialCocycleExtension.split_extension(2, U5)
    assert commutator(split_E, (1, 2), (3, -1)) == F5.one()


def test_baer_sum_examples():
    E = D(((1, 1), (0, 3)), rank=2, base=t)
    assert is_isomorphic(baer_sum(E, MonomialCocycleExtension.split_extension(2, U5)), E).splits
    assert split(baer_sum(E, inverse(E))).splits
    for c1, c2 in [(1, 2), (3, -1)]:
        lhs = baer_sum(D(c1), D(c2))
        for y1, y2 in product(GRID, GRID):
            assert commutator(lhs, y1, y2) == commutator(D(c1 + c2), y1, y2)


def test_pushout_along_valuation():
    at_t = F5.parse_place("t")
    val = valuation_hom(F5, at_t)
    B = ((1, 2), (0, 1))
    E = MonomialCocycleExtension(2, U5, ((t, B),))
    pushed = pushout(E, val)
    assert pushed.coeff == IntegersAdditive()
    assert pushed.terms == ((1, B),)
    assert pushout(D(((1, 1), (0, 1)), rank=2), val).is_trivial_cocycle()


def test_pullback_examples():
    E = D(3)
    idm = LatticeMap(Lattice(1), Lattice(1), ((1,),))
    assert pullback(E, idm) == E
    double = LatticeMap(Lattice(1), Lattice(1), ((2,),))
    assert pullback(D(1), double).is_trivial_cocycle()
    zero = LatticeMap(Lattice(1), Lattice(1), ((0,),))
    assert pullback(E, zero).is_trivial_cocycle()


@pytest.mark.parametrize("c", [-3, -1, 1, 2, 5])
def test_split_rank_one(c):
    E = D(c)
    res = split(E)
    assert res.splits
    assert splits_on_grid(E, res.cochain, 5)
    # q(m) = c m(m-1)/2 up to the even part
    for m in range(-5, 6):
        assert res.cochain((m,)) == MINUS ** ((c * m * (m - 1) // 2) % 2)


def test_split_of_split_is_zero():
    res = split(MonomialCocycleExtension.split_extension(3, U5))
    assert res.splits and res.cochain.is_trivial()


def test_split_obstruction_witness():
    res = split(D(((0, 1), (0, 0)), rank=2))
    assert not res.splits
    assert res.witness == (0, 1)


def test_split_random_symmetric_forms():
    rng = random.Random(4)
    for coeff, bases in [
        (U5, [MINUS, t, t + 1, F5.from_int(2)]),
        (FieldUnits(QQ), [QQ.from_int(-1), QQ.from_int(6), QQ.parse("-3/4")]),
        (IntegersAdditive(), [1, -2, 3]),
        (Mu2(), [-1]),
    ]:
        for _ in range(12):
            n = rng.randint(1, 3)
            terms = []
            for _ in range(rng.randint(1, 3)):
                s = [[0] * n for _ in range(n)]
                for i in range(n):
                    for j in range(i, n):
                        s[i][j] = s[j][i] = rng.randint(-3, 3)
                terms.append((rng.choice(bases), tuple(map(tuple, s))))
            E = MonomialCocycleExtension(n, coeff, tuple(terms))
            res = split(E)
            assert res.splits
            assert splits_on_grid(E, res.cochain, 2 if n < 3 else 1)


def test_is_isomorphic_gives_map():
    E1 = D(((1, 0), (2, 1)), rank=2, base=t)
    E2 = D(((3, 0), (2, -1)), rank=2, base=t)
    res = is_isomorphic(E1, E2)
    assert res.splits
    phi = res.cochain
    for a, b in product(grid(2, 2), repeat=2):
        ua, ub = F5.from_int(2), t + 3
        left = multiply(E2, (a, ua * phi(a)), (b, ub * phi(b)))
        y, w = multiply(E1, (a, ua), (b, ub))
        assert left == (y, w * phi(y))


def test_cochain_pullback_and_equality():
    phi = MonomialCochain(2, U5, ((t, ((1, 1), (1, 0)), (1, 0)),))
    m = LatticeMap(Lattice(1), Lattice(2), ((2,), (1,)))
    pb = phi.pullback(m)
    for k in range(-4, 5):
        assert pb((k,)) == phi((2 * k, k))
    assert cochains_equal(phi * phi.inverse(), MonomialCochain.zero(2, U5))


def test_canonical_exponent():
    assert [canonical_exponent(((1,),), (m,)) for m in range(4)] == [0, 0, 1, 3]


def test_coefficient_parsing():
    assert U5.parse("t+1") == t + 1
    assert Mu2().parse("-1") == -1
    with pytest.raises(ValueError):
        Mu2().parse("2")
