from __future__ import annotations

import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from bdk2.poly import Poly, factor, gcd, invmod, is_irreducible, parse_poly, xgcd

T = sympy.Symbol("t")


def to_sympy(f: Poly) -> sympy.Poly:
    return sympy.Poly(list(reversed(f.coeffs)) or [0], T, modulus=f.p)


def polys(p: int, max_deg: int = 6):
    return st.lists(st.integers(0, p - 1), min_size=1, max_size=max_deg + 1).map(lambda cs: Poly(p, cs))


def test_parse_and_print():
    f = parse_poly(5, "t^2+3*t+1")
    assert f.coeffs == (1, 3, 1)
    assert str(f) == "t^2+3*t+1"
    assert parse_poly(5, "(t+1)^2") == parse_poly(5, "t^2+2*t+1")


def test_parse_rejects_fraction():
    with pytest.raises(ValueError):
        parse_poly(5, "1/t")


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_factor_matches_sympy(p):
    rng = random.Random(p)
    for _ in range(40):
        f = Poly(p, [rng.randrange(p) for _ in range(rng.randint(2, 9))])
        if f.is_zero():
            continue
        lc, facs = factor(f)
        _, ref = to_sympy(f).factor_list()
        mine = sorted((tuple(int(c) % p for c in to_sympy(g).all_coeffs()), m) for g, m in facs)
        theirs = sorted((tuple(int(c) % p for c in g.monic().all_coeffs()), m) for g, m in ref if g.degree() > 0)
        assert mine == theirs
        assert lc == f.lc


@given(polys(5), polys(5))
@settings(max_examples=60, deadline=None)
def test_xgcd_bezout(a, b):
    g, s, t = xgcd(a, b)
    assert s * a + t * b == g
    assert g == gcd(a, b)


@pytest.mark.parametrize("modulus", ["t^2+2", "t+3", "2*t+1", "t"])
def test_invmod(modulus):
    m = parse_poly(5, modulus)
    rng = random.Random(modulus)
    for _ in range(30):
        a = Poly(5, [rng.randrange(5) for _ in range(4)])
        if (a % m).is_zero():
            with pytest.raises(ZeroDivisionError):
                invmod(a, m)
        else:
            assert (a * invmod(a, m)) % m == Poly.const(5, 1)


def test_irreducibility():
    assert is_irreducible(parse_poly(5, "t^2+2"))
    assert not is_irreducible(parse_poly(5, "t^2+1"))  # 2 is a square root of -1 mod 5
    assert not is_irreducible(Poly.const(5, 3))
