import dataclasses

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import grid_100, helmholtz_closed_forms
from vekua.bicomplex import Bicomplex
from vekua.errors import ConditionSViolation, DegeneratePair, NotPseudoanalytic
from vekua.fields import BicomplexField, ScalarField, Segment
from vekua.pseudoanalytic import (FormalPower, GeneratingPair, PowerTable, adjoint_pair,
                                  build_sequence_condition_s, characteristic_coefficients,
                                  condition_s_preset, fg_derivative, fg_integral, formal_power,
                                  second_kind_residual, taylor_coefficients, vekua_residual)

EXPY = ScalarField.from_expr("exp(y)")
ONE = ScalarField.from_expr("1")
pt = st.floats(-0.9, 0.9)


def eq(q, sc, vec, tol=1e-12):
    return np.all(np.abs(q.sc - sc) <= tol) and np.all(np.abs(q.vec - vec) <= tol)


def test_characteristic_coefficients():
    cc = characteristic_coefficients(GeneratingPair.main(EXPY), (0, 0))
    assert eq(cc.a, 0, 0) and eq(cc.b, 0, 0.5)
    cc = characteristic_coefficients(GeneratingPair.main(ONE), (0.3, 0.1))
    assert all(eq(c, 0, 0) for c in (cc.a, cc.b, cc.A, cc.B))
    F = BicomplexField.from_exprs("exp(x)")
    with pytest.raises(DegeneratePair):
        characteristic_coefficients(GeneratingPair(F, F), (0, 0))


@given(pt, pt)
def test_adjoint_of_main_pair(x, y):
    adj = adjoint_pair(GeneratingPair.main(EXPY))
    f = np.exp(y)
    assert eq(adj.F(x, y), 0, -f) and eq(adj.G(x, y), 1 / f, 0)
    back = adjoint_pair(adj)
    assert eq(back.F(x, y), f, 0) and eq(back.G(x, y), 0, 1 / f)


def test_adjoint_of_trivial_pair():
    adj = adjoint_pair(GeneratingPair.main(ONE))
    assert eq(adj.F(0.2, 0.3), 0, -1) and eq(adj.G(0.2, 0.3), 1, 0)


@given(pt, pt)
def test_fg_derivative(x, y):
    pair = GeneratingPair.main(EXPY)
    assert eq(fg_derivative(pair.F, pair, (x, y)), 0, 0)
    assert eq(fg_derivative(pair.G, pair, (x, y)), 0, 0)
    z2 = BicomplexField.from_exprs("x^2-y^2", "2*x*y")
    assert eq(fg_derivative(z2, GeneratingPair.main(ONE), (x, y)), 2 * x, 2 * y)


def test_fg_integral():
    pair = GeneratingPair.main(ONE)
    assert eq(fg_integral(BicomplexField.from_exprs("0"), pair, Segment((0, 0), (0.3, 0.4))), 0, 0)
    assert eq(fg_integral(BicomplexField.from_exprs("1"), pair, Segment((0, 0), (0.3, 0.4))), 0.3, 0.4)


def test_fg_integral_recovers_first_power(helmholtz_seq):
    pair = helmholtz_seq.pair(0)
    Z1 = FormalPower(helmholtz_seq, 1).field
    Z0_next = FormalPower(helmholtz_seq, 0, m=1).field  # derivative of Z1 is Z0 of the successor
    got = fg_integral(Z0_next, pair, Segment((0, 0), (0.4, -0.3)))
    ref = Z1(0.4, -0.3)
    assert eq(got, ref.sc, ref.vec, 1e-10)


def test_condition_s_examples():
    grid = ([0.5, 0.7, 1.0], [0.3, 0.2, 0.9])
    seq = build_sequence_condition_s(condition_s_preset("cartesian_y", "exp(rho)"), grid)
    assert eq(seq.phi(0.1, 0.2), 0.5, 0)
    build_sequence_condition_s(condition_s_preset("radial"), grid)
    build_sequence_condition_s(condition_s_preset("parabolic"), grid)
    wrong = dataclasses.replace(condition_s_preset("parabolic"), s="1/rho")
    with pytest.raises(ConditionSViolation):
        build_sequence_condition_s(wrong, grid)


def test_helmholtz_closed_forms(helmholtz_seq):
    x, y = grid_100()
    table = PowerTable(helmholtz_seq, (0, 0), 2, x, y)
    ref = helmholtz_closed_forms(x, y)
    for n in range(3):
        for s, seed in enumerate("1k"):
            v = table.values[n][s]
            sc, vec = ref[(n, seed)]
            scale = np.maximum(1, np.abs(sc) + np.abs(vec))
            assert np.max(np.abs(v.sc - sc) / scale) < 1e-10
            assert np.max(np.abs(v.vec - vec) / scale) < 1e-10


def test_classical_powers(classical_seq):
    x, y = grid_100()
    table = PowerTable(classical_seq, (0, 0), 5, x, y)
    z = x + 1j * y
    for n in range(6):
        v = table.values[n][0]
        # (x + k y)^n has the same components as (x + i y)^n
        assert np.max(np.abs(v.sc - (z ** n).real)) < 1e-12
        assert np.max(np.abs(v.vec - (z ** n).imag)) < 1e-12


def test_formal_power_with_bicomplex_coefficient(helmholtz_seq):
    a = Bicomplex(2 - 1j, 0.5j)
    v = formal_power(helmholtz_seq, 0, 1, a, (0, 0), (np.array([0.3]), np.array([-0.2])))
    r = helmholtz_closed_forms(0.3, -0.2)
    sc = a.sc * r[(1, "1")][0] + a.vec * r[(1, "k")][0]
    vec = a.sc * r[(1, "1")][1] + a.vec * r[(1, "k")][1]
    assert eq(v, sc, vec, 1e-11)


def test_vekua_residual_examples():
    f = EXPY
    for W in (BicomplexField.from_components(f), BicomplexField.from_components(0, f.reciprocal())):
        assert eq(vekua_residual(W, f, (0.3, -0.4)), 0, 0, 1e-14)
    assert eq(vekua_residual(BicomplexField.from_exprs("x", "-y"), ONE, (0.1, 0.2)), 1, 0)


def test_second_kind_examples(helmholtz_seq):
    for n in range(3):
        W = FormalPower(helmholtz_seq, n).field
        assert eq(second_kind_residual(W, EXPY, (0.3, -0.2)), 0, 0, 1e-7)
    assert eq(second_kind_residual(BicomplexField.from_exprs("0"), EXPY, (0.3, 0.1)), 0, 0)
    analytic = BicomplexField.from_exprs("x^2-y^2", "2*x*y")
    assert eq(second_kind_residual(analytic, ONE, (0.3, 0.1)), 0, 0)


def test_taylor_coefficients(helmholtz_seq):
    W = FormalPower(helmholtz_seq, 2).field
    a = taylor_coefficients(W, helmholtz_seq, (0, 0), 2)
    for got, ref in zip(a, (0, 0, 1)):
        assert eq(got, ref, 0, 1e-7)
    zero = taylor_coefficients(BicomplexField.from_exprs("0"), helmholtz_seq, (0, 0), 3)
    assert all(eq(c, 0, 0) for c in zero)
    F0 = taylor_coefficients(helmholtz_seq.base.F, helmholtz_seq, (0, 0), 2)
    assert eq(F0[0], 1, 0) and eq(F0[1], 0, 0) and eq(F0[2], 0, 0)


def test_taylor_rejects_non_solution(helmholtz_seq):
    with pytest.raises(NotPseudoanalytic):
        taylor_coefficients(BicomplexField.from_exprs("x", "-y"), helmholtz_seq, (0, 0), 2)
