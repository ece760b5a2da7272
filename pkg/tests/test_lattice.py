from __future__ import annotations

import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from bdk2.lattice import (
    BilinearIncarnation,
    Lattice,
    LatticeMap,
    QuadraticForm,
    Z,
    extend_hom,
    extend_hom_bruteforce,
    identity,
    is_weyl_invariant,
    matmul,
    smith_normal_form,
    weyl_invariant_homs,
    weyl_reflection,
)
from bdk2.presets import PRESET_NAMES, all_presets, preset

matrices = st.integers(1, 4).flatmap(
    lambda n: st.integers(1, 4).flatmap(
        lambda m: st.lists(st.lists(st.integers(-6, 6), min_size=m, max_size=m), min_size=n, max_size=n)
    )
)


def det(a) -> int:
    return int(sympy.Matrix(a).det())


def diag(d):
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


@given(matrices)
@settings(max_examples=120, deadline=None)
def test_snf_identity_and_divisibility(m):
    u, d, v = smith_normal_form(m)
    assert matmul(matmul(u, m), v) == tuple(tuple(r) for r in d)
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    ds = diag(d)
    for i, row in enumerate(d):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    nz = [x for x in ds if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@given(matrices)
@settings(max_examples=60, deadline=None)
def test_snf_matches_sympy(m):
    _, d, _ = smith_normal_form(m)
    ref = sympy_snf(sympy.Matrix(m), domain=sympy.ZZ)
    assert [abs(x) for x in diag(d)] == [abs(int(ref[i, i])) for i in range(min(ref.shape))]


def test_snf_examples():
    assert smith_normal_form(((1, 0), (0, 1))) == (identity(2), identity(2), identity(2))
    _, d, _ = smith_normal_form(((2, 0), (0, 3)))
    assert diag(d) == [1, 6]
    u, d, v = smith_normal_form(((0, 0), (0, 0)))
    assert d == ((0, 0), (0, 0)) and u == identity(2) and v == identity(2)


def lmap(n, m, rows):
    return LatticeMap(Lattice(m, "Ysc"), Lattice(n, "Y"), tuple(tuple(r) for r in rows))


def test_extend_hom_examples():
    one = lmap(1, 1, [[1]])
    res = extend_hom(one, LatticeMap(one.source, Z, ((5,),)))
    assert res.solution.matrix == ((5,),)
    two = lmap(1, 1, [[2]])
    res = extend_hom(two, LatticeMap(two.source, Z, ((1,),)))
    assert not res.solvable
    assert res.describe_obstruction() == "2·h = 1"
    assert extend_hom_bruteforce(two, LatticeMap(two.source, Z, ((1,),))) == []
    res = extend_hom(two, LatticeMap(two.source, Z, ((4,),)))
    assert res.solution.matrix == ((2,),)


def test_extend_hom_against_bruteforce():
    rng = random.Random(11)
    for _ in range(150):
        n = rng.randint(1, 2)
        m = rng.randint(1, n)
        while True:
            rows = [[rng.randint(-3, 3) for _ in range(m)] for _ in range(n)]
            p = lmap(n, m, rows)
            if p.is_injective():
                break
        psi = LatticeMap(p.source, Z, (tuple(rng.randint(-4, 4) for _ in range(m)),))
        res = extend_hom(p, psi)
        brute = extend_hom_bruteforce(p, psi, 8)
        if res.solvable:
            h = res.solution.matrix
            assert matmul(h, p.matrix) == psi.matrix
            for k in res.kernel:
                assert matmul((k,), p.matrix) == ((0,) * m,)
            assert len(res.kernel) == n - m
        else:
            assert brute == []


def test_extend_hom_rejects_non_injective():
    with pytest.raises(ValueError):
        extend_hom(lmap(1, 1, [[0]]), LatticeMap(Lattice(1), Z, ((1,),)))


def test_weyl_reflections():
    assert weyl_reflection(preset("SL2"), 0).matrix == ((-1,),)
    assert weyl_reflection(preset("GL2"), 0).matrix == ((0, 1), (1, 0))


def test_weyl_invariance_examples():
    for c in (-2, 1, 5):
        assert is_weyl_invariant(QuadraticForm(1, {(0, 0): c}), preset("SL2"))
    gl2 = preset("GL2")
    assert is_weyl_invariant(QuadraticForm(2, {(0, 0): 1, (1, 1): 1}), gl2)
    assert not is_weyl_invariant(QuadraticForm(2, {(0, 0): 1}), gl2)


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_presets_are_root_data(name):
    rd = preset(name)
    assert rd.reflections_preserve_coroots()
    assert rd.coroot_inclusion().is_injective()
    for i in range(rd.semisimple_rank):
        assert rd.cartan_matrix()[i][i] == 2


def test_no_invariant_characters_on_coroot_lattice():
    # Y_SC is spanned by coroots, and every coroot is negated by its own reflection
    for name in ("SL2", "PGL2", "SL3", "Sp4", "GL3", "Gm^2"):
        assert weyl_invariant_homs(preset(name)) == ()


def test_quadratic_form_polarization():
    C = BilinearIncarnation(2, ((1, 2), (0, 3)))
    q = QuadraticForm(2, {(0, 0): 1, (0, 1): 2, (1, 1): 3})
    rng = random.Random(3)
    for _ in range(50):
        y = (rng.randint(-5, 5), rng.randint(-5, 5))
        z = (rng.randint(-5, 5), rng.randint(-5, 5))
        assert q(y) == C(y, y)
        assert q.bilinear(y, z) == q(tuple(a + b for a, b in zip(y, z))) - q(y) - q(z)


def test_root_datum_validation():
    from bdk2.lattice import RootDatum

    with pytest.raises(ValueError):
        RootDatum(1, ((1,),), ((1,),))  # pairing 1, not 2
    assert len(all_presets()) == len(PRESET_NAMES)
