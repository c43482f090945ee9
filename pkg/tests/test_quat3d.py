import numpy as np
import pytest
from hypothesis import given, strategies as st

from vekua.errors import CompatibilityError
from vekua.fields import ScalarField
from vekua.quat3d import (I, J, K, ComplexQuaternion, QuaternionField3D, antigradient_3d, dirac_D,
                          dirac_field, dirac_plus_residual, dirac_to_schr, divpgradq_residual_3d,
                          factorization_residual_3d, qmul, quartet, schr_to_dirac,
                          second_kind_residual_3d, vekua3d_residual)
from vekua.transforms import manufactured_coefficients

S3 = lambda e: ScalarField.from_expr(e, None, 3)
F = S3("exp(z3)")
ONE = S3("1")
c = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)
pt = st.floats(-1, 1)


def comps(q):
    return np.array([complex(np.asarray(v).ravel()[0]) for v in q.components])


def close(q, ref, tol=1e-12):
    return np.max(np.abs(comps(q) - np.asarray(ref, dtype=complex))) <= tol


def test_multiplication_table():
    assert close(qmul(I, J), [0, 0, 0, 1]) and close(qmul(J, I), [0, 0, 0, -1])
    assert close(qmul(J, K), [0, 1, 0, 0]) and close(qmul(K, K), [-1, 0, 0, 0])


@given(c, c, c)
def test_vector_square(a, b, d):
    Q = ComplexQuaternion.vector(a, b, d)
    assert close(qmul(Q, Q), [-(a * a + b * b + d * d), 0, 0, 0], 1e-10)


@given(st.lists(c, min_size=12, max_size=12))
def test_associative(v):
    a, b, d = (ComplexQuaternion(*v[i:i + 4]) for i in (0, 4, 8))
    assert np.allclose(comps(qmul(qmul(a, b), d)), comps(qmul(a, qmul(b, d))), atol=1e-9)


def test_dirac_examples():
    assert close(dirac_D(S3("x"), (0.1, 0.2, 0.3)), [0, 1, 0, 0])
    assert close(dirac_D(QuaternionField3D.vector("x", "y", "z3"), (0.1, 0.2, 0.3)), [-3, 0, 0, 0])
    DD = dirac_field(dirac_field(S3("x^2")))
    assert close(DD(0.3, 0.1, -0.2), [-2, 0, 0, 0])


@given(pt, pt, pt)
def test_dirac_squared_is_minus_laplacian(x, y, z):
    u = S3("sin(x)*exp(y)*z3 + x^2*y*z3^3")
    DD = dirac_field(dirac_field(u))(x, y, z)
    assert close(DD, [-u.laplacian()(x, y, z), 0, 0, 0], 1e-12)


@given(pt, pt, pt)
def test_antigradient_recovers_potential(x, y, z):
    u = "sin(x)*y*z3"
    G = QuaternionField3D.vector(*(S3(u).derivative(a) for a in range(3)))
    assert abs(antigradient_3d(G, (0, 0, 0), (x, y, z)) - np.sin(x) * y * z) < 1e-12
    assert abs(antigradient_3d(QuaternionField3D.vector("2*x", "0", "0"), (0, 0, 0), (x, y, z)) - x * x) < 1e-12


def test_antigradient_rejects_curl():
    with pytest.raises(CompatibilityError):
        antigradient_3d(QuaternionField3D.vector("-y", "x", "0"), (0, 0, 0), (0.5, 0.5, 0.5))


def test_factorization_examples():
    assert close(factorization_residual_3d(S3("x^2 - y^2 + z3"), ONE, S3("0"), (0.2, 0.3, 0.4)), [0] * 4)
    assert close(factorization_residual_3d(S3("x^2*y"), F, S3("1"), (0.2, 0.3, 0.4)), [0] * 4, 1e-9)
    assert close(factorization_residual_3d(F, F, S3("1"), (0.2, 0.3, 0.4)), [0] * 4, 1e-12)


def test_schr_to_dirac_examples():
    pts = (np.array([0.1, -0.3]), np.array([0.2, 0.5]), np.array([0.4, -0.6]))
    Fq = schr_to_dirac(F, F)
    assert close(Fq(0.1, 0.2, 0.3), [0] * 4)
    Fq = schr_to_dirac(S3("exp(x)"), F, S3("1"), pts)
    assert np.max(np.abs(comps(Fq(0.1, 0.2, 0.3)))) > 0.1
    assert close(dirac_plus_residual(Fq, F, (0.1, 0.2, 0.3)), [0] * 4, 1e-8)
    assert close(schr_to_dirac(S3("x"), ONE)(0.3, 0.1, 0.2), [0, 1, 0, 0])


def test_dirac_to_schr_examples():
    zero = QuaternionField3D.vector("0", "0", "0")
    g = dirac_to_schr(zero, F, (0, 0, 0), C=2.0)
    assert abs(g(0.3, 0.2, 0.5) - 2 * np.exp(0.5)) < 1e-14
    g = dirac_to_schr(QuaternionField3D.vector("1", "0", "0"), ONE, (0, 0, 0))
    assert abs(g(0.3, 0.2, 0.5) - 0.3) < 1e-14


def test_round_trip():
    g = S3("exp(x)")
    back = dirac_to_schr(schr_to_dirac(g, F), F, (0, 0, 0), C=1.0)
    x, y, z = np.random.default_rng(0).uniform(-1, 1, (3, 20))
    assert np.max(np.abs(back(x, y, z) - g(x, y, z))) < 1e-8


@given(pt, pt, pt)
def test_divpgradq(x, y, z):
    assert close(divpgradq_residual_3d(S3("x^3*y + z3"), "1", "0", "1", (x, y, z)), [0] * 4, 1e-12)
    coeffs = manufactured_coefficients("exp(x)", "exp(z3)", ndim=3)
    assert close(divpgradq_residual_3d(S3("x^2*y - 2*z3^3 + 1"), coeffs, None, None, (x, y, z)), [0] * 4, 1e-9)
    assert close(divpgradq_residual_3d(coeffs.u0, coeffs, None, None, (x, y, z)), [0] * 4, 1e-9)


def test_vekua3d_examples():
    for W in quartet(F):
        assert close(vekua3d_residual(W, F, (0.2, -0.1, 0.3)), [0] * 4, 1e-14)
        main, div, rot = vekua3d_residual(W, F, (0.2, -0.1, 0.3), system=True)
        assert abs(div) < 1e-14 and close(rot, [0] * 4, 1e-14)
    assert close(vekua3d_residual(S3("x"), ONE, (0.2, 0.1, 0.3)), [0, 1, 0, 0])


def test_second_kind_on_quartet():
    f, i_f, j_f, k_f = quartet(F)
    W = f * 2 + i_f - j_f * 3 + k_f * 0.5
    w = QuaternionField3D(lambda c, o: _to_second_kind(W._func(c, o), F._func(c, o)))
    assert close(second_kind_residual_3d(w, F, (0.2, -0.4, 0.1)), [0] * 4, 1e-8)


def _to_second_kind(Wq, fj):
    return ComplexQuaternion(Wq.q0 / fj, Wq.q1 * fj, Wq.q2 * fj, Wq.q3 * fj)


def test_lifted_planar_powers_solve_3d_equation(helmholtz_seq):
    from vekua.pseudoanalytic import FormalPower
    from vekua.suites import lift_planar
    f3 = S3("exp(y)")
    for n in range(3):
        W = lift_planar(FormalPower(helmholtz_seq, n).field)
        assert close(vekua3d_residual(W, f3, (0.3, -0.2, 0.7)), [0] * 4, 1e-9)
