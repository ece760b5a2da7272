from __future__ import annotations

import random

import pytest

from bdk2 import bd
from bdk2.extensions import FieldUnits, IntegersAdditive, MonomialCocycleExtension
from bdk2.fields import INF, FunctionField, RationalField
from bdk2.lattice import BilinearIncarnation, QuadraticForm
from bdk2.presets import preset
from bdk2.residue_functors import (
    bd_automorphism_val,
    decide_integral_model,
    delta_Q,
    ez_of_residual,
    ez_of_residual_for,
    is_witness,
    kernel_category_check,
    natural_iso_check,
    residual_automorphism,
    residual_extension,
    residual_trivializations,
    val_bd,
    val_functor,
)

F5 = FunctionField(5)
QQ = RationalField()
t = F5.gen()
AT_T = F5.parse_place("t")


def C(*rows):
    return BilinearIncarnation(len(rows), tuple(rows))


def test_val_functor():
    B = ((1, 2), (0, 1))
    E = MonomialCocycleExtension(2, FieldUnits(F5), ((t, B),))
    pushed = val_functor(E, AT_T)
    assert pushed.coeff == IntegersAdditive() and pushed.terms == ((1, B),)
    assert val_functor(bd.second_invariant(C((1, 3), (0, 2)), F5), AT_T).is_trivial_cocycle()


def test_delta_Q_is_zero():
    for q in (QuadraticForm(1, {(0, 0): 3}), QuadraticForm(2, {(0, 0): 1, (0, 1): 1, (1, 1): 2})):
        assert delta_Q(q, F5, AT_T).is_trivial()
        assert delta_Q(q, QQ, QQ.parse_place("p:3")).is_trivial()


@pytest.mark.parametrize("place", ["t", "t+1", "t^2+2", "inf"])
def test_residual_extension_splits(place):
    pl = F5.parse_place(place)
    assert residual_extension(C((0, 0), (0, 0)), pl, F5).is_split
    rng = random.Random(place)
    for _ in range(5):
        M = tuple(tuple(rng.randint(-3, 3) for _ in range(2)) for _ in range(2))
        res = residual_extension(BilinearIncarnation(2, M), pl, F5)
        assert res.is_split and res.splitting.is_trivial()


def test_residual_extension_over_q():
    res = residual_extension(C((1,)), QQ.parse_place("p:7"), QQ)
    assert res.is_split
    with pytest.raises(ValueError):
        residual_extension(C((1,)), QQ.parse_place("real"), QQ)


def test_residual_automorphism():
    assert residual_automorphism((1, 2), t + 1, AT_T, F5).is_identity()
    aut = residual_automorphism((1, 0), t ** 2, AT_T, F5)
    assert aut(((1, 3), 5)) == ((1, 3), 7)


def test_bd_automorphism_val_matches():
    assert bd_automorphism_val((1,), F5.one(), AT_T, F5).is_identity()
    rng = random.Random(14)
    for _ in range(40):
        n = rng.randint(1, 3)
        x = tuple(rng.randint(-3, 3) for _ in range(n))
        s = F5.random_element(rng, 3) * t ** rng.randint(-3, 3)
        for pl in (AT_T, INF):
            assert bd_automorphism_val(x, s, pl, F5) == residual_automorphism(x, s, pl, F5)


def test_natural_iso_examples():
    assert natural_iso_check(C((1,)), [((1,), t)], F5, AT_T)
    assert natural_iso_check(C((1,)), [], F5, AT_T)
    # the C vs C0 case with (C - C0)(y, y) = 0
    assert natural_iso_check(C((0, 1), (0, 0)), [((1, 1), t)], F5, AT_T, C0=C((0, 0), (1, 0)))


def test_ez_of_residual_is_split():
    ez = ez_of_residual(preset("GL2"), C((1, 0), (0, 1)), AT_T, F5)
    assert ez.Yprime.is_trivial_cocycle() and ez.psi.is_trivial()
    assert ez.is_consistent()


def test_val_bd_examples():
    T = bd.third_invariant_solve(preset("SL2"), C((1,)), F5)
    ez = val_bd(T, AT_T)
    assert ez.psi.is_trivial() and ez.Yprime.is_trivial_cocycle()
    P = bd.twist_phi(bd.third_invariant_solve(preset("PGL2"), C((1,)), F5), t, (1,))
    assert val_bd(P, AT_T).psi_linear() == (1,)
    # all phi bases are units at t+1, so val kills them
    assert val_bd(P, F5.parse_place("t+1")).psi_linear() == (0,)


@pytest.mark.parametrize("c", [-2, 1, 3])
def test_sl2_model_unique(c):
    T = bd.third_invariant_solve(preset("SL2"), C((c,)), F5)
    rep = decide_integral_model(T, AT_T)
    assert rep.exists and rep.torsor_rank == 0
    assert is_witness(T, AT_T, rep.witness)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_torus_models_form_torsor(n):
    T = bd.zero_triple(preset(f"Gm^{n}"), F5)
    rep = decide_integral_model(T, AT_T)
    assert rep.exists and rep.torsor_rank == n


def test_pgl2_odd_defect_is_obstructed():
    P = bd.twist_phi(bd.third_invariant_solve(preset("PGL2"), C((1,)), F5), t, (1,))
    rep = decide_integral_model(P, AT_T)
    assert not rep.exists
    assert rep.obstruction["equations"] == ["2·h = 1"]
    assert rep.torsion == (2,)
    even = bd.twist_phi(bd.third_invariant_solve(preset("PGL2"), C((1,)), F5), t, (2,))
    assert decide_integral_model(even, AT_T).exists


def test_kernel_category():
    P = bd.twist_phi(bd.third_invariant_solve(preset("PGL2"), C((1,)), F5), t, (1,))
    assert kernel_category_check(P, AT_T)
    assert residual_trivializations(ez_of_residual_for(P, AT_T), 3) == set()
    T = bd.third_invariant_solve(preset("SL2"), C((1,)), F5)
    assert len(residual_trivializations(ez_of_residual_for(T, AT_T), 3)) == 1
    G = bd.zero_triple(preset("Gm^1"), F5)
    assert kernel_category_check(G, AT_T)
    assert len(residual_trivializations(ez_of_residual_for(G, AT_T), 3)) == 7
