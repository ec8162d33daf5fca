import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import ellipj

from tadpole_nls import DomainError, agm, complete_K, jacobi
from tadpole_nls.elliptic import (
    INV_SQRT2, period_T_cn, period_T_dn, phi_sech, phi_sech_prime, scaled_argument, sech,
    u_cn, u_cn0, u_cn_prime, u_dn, u_dn_prime,
)

from oracles import K_quad, jacobi_ode

moduli = st.floats(0.0, 1.0)
args = st.floats(-200.0, 200.0)


def test_agm_known_value():
    # Gauss's constant
    assert agm(1.0, np.sqrt(2.0)) == pytest.approx(1.1981402347355922, rel=1e-15)


@pytest.mark.parametrize("k", [0.0, 0.1, 0.5, INV_SQRT2, 0.9, 0.99])
def test_K_against_quadrature(k):
    assert complete_K(k) == pytest.approx(K_quad(k), rel=1e-13)


def test_K_limits():
    assert complete_K(0.0) == pytest.approx(np.pi / 2, rel=1e-15)
    with pytest.raises(DomainError):
        complete_K(1.0)
    # K ~ log(4/kc) as kc -> 0, supplied directly so 1 - k is not quantized
    kc = 1e-20
    assert complete_K(1.0, kc) == pytest.approx(np.log(4 / kc), rel=1e-15)


@pytest.mark.parametrize("k", [0.3, INV_SQRT2, 0.95])
def test_jacobi_against_ode(k):
    z = np.linspace(0.0, 12.0, 61)
    ref = jacobi_ode(z, k)
    got = np.array(jacobi(z, k))
    assert np.max(np.abs(got - ref)) < 1e-11


@given(args, st.floats(0.0, 0.999))
@settings(max_examples=300, deadline=None)
def test_jacobi_against_scipy(z, k):
    sn, cn, dn, _ = ellipj(z, k * k)
    got = jacobi(z, k)
    assert np.allclose(got, (sn, cn, dn), atol=1e-9 * max(1, abs(z)))


@given(args, moduli)
@settings(max_examples=500, deadline=None)
def test_identities(z, k):
    sn, cn, dn = jacobi(z, k)
    assert abs(sn * sn + cn * cn - 1) < 1e-13
    assert abs(dn * dn + k * k * sn * sn - 1) < 1e-13


@given(args, st.floats(0.0, 0.999))
@settings(max_examples=300, deadline=None)
def test_parity_and_half_period(z, k):
    K = complete_K(k)
    sn, cn, dn = jacobi(z, k)
    snm, cnm, dnm = jacobi(-z, k)
    assert (snm, cnm, dnm) == pytest.approx((-sn, cn, dn), abs=1e-13)
    sh, ch, dh = jacobi(z + 2 * K, k)
    tol = 1e-12 * max(1.0, abs(z) + 2 * K)
    assert abs(sh + sn) < tol and abs(ch + cn) < tol and abs(dh - dn) < tol


def test_degenerate_moduli():
    z = np.linspace(-3, 3, 13)
    sn, cn, dn = jacobi(z, 0.0)
    assert np.allclose(sn, np.sin(z), atol=1e-16) and np.all(dn == 1)
    sn, cn, dn = jacobi(z, 1.0)
    assert np.allclose(sn, np.tanh(z), atol=1e-16) and np.allclose(cn, 1 / np.cosh(z))


def test_complementary_modulus_near_one():
    kc = 1e-10
    k = np.sqrt(1 - kc * kc)
    z = 3.0
    sn, cn, dn = jacobi(z, k, kc)
    # k -> 1 expansion: dn = sech z + kc^2/4 (sinh z cosh z - z) tanh z sech z
    s = 1 / np.cosh(z)
    assert dn == pytest.approx(s, rel=1e-12)


def test_domain_errors():
    with pytest.raises(DomainError):
        jacobi(1.0, 1.5)
    with pytest.raises(DomainError):
        jacobi(np.nan, 0.5)
    with pytest.raises(DomainError):
        u_dn(0.0, 1.0, 0.5)
    with pytest.raises(DomainError):
        u_cn(0.0, 1.0, 0.9)  # omega > 0 needs k < 1/sqrt2
    with pytest.raises(DomainError):
        period_T_dn(-1.0, 1.0)


def test_scaled_argument_is_exact_product():
    from fractions import Fraction
    x, shift, beta = 2.718281828459045, 0.3, 1.7320508075688772
    hi, lo = scaled_argument(x, shift, beta)
    exact = (Fraction(x) - Fraction(shift)) * Fraction(beta)
    assert abs(Fraction(hi) + Fraction(lo) - exact) < Fraction(1, 10 ** 30)


def test_sech_overflow_free():
    assert sech(1000.0) == 0.0 and sech(0.0) == 1.0


@pytest.mark.parametrize("omega,k", [(2.0, 0.4), (-2.0, 0.8)])
def test_cn_period(omega, k):
    T = period_T_cn(omega, k)
    x = np.linspace(-1, 1, 11)
    assert np.allclose(u_cn(x + T, omega, k), u_cn(x, omega, k), atol=1e-12)
    assert np.allclose(u_cn(x + T / 2, omega, k), -u_cn(x, omega, k), atol=1e-12)


def test_dn_period():
    T = period_T_dn(-1.0, 0.9)
    x = np.linspace(-1, 1, 11)
    assert np.allclose(u_dn(x + T, -1.0, 0.9), u_dn(x, -1.0, 0.9), atol=1e-12)


@pytest.mark.parametrize("f,df", [
    (lambda x: u_cn(x, -1.3, 0.8, shift=0.2), lambda x: u_cn_prime(x, -1.3, 0.8, shift=0.2)),
    (lambda x: u_dn(x, -0.7, 0.95), lambda x: u_dn_prime(x, -0.7, 0.95)),
    (lambda y: phi_sech(y, -2.0, 0.5), lambda y: phi_sech_prime(y, -2.0, 0.5)),
])
def test_derivatives_match_central_differences(f, df):
    x = np.linspace(-2, 2, 41)
    h = 1e-5
    fd = (f(x + h) - f(x - h)) / (2 * h)
    assert np.max(np.abs(fd - df(x))) < 1e-8


def test_sech_soliton_is_exact():
    y = np.linspace(0, 5, 21)
    assert np.allclose(phi_sech(y, -1.0), np.sqrt(2) / np.cosh(y), rtol=1e-14)


def test_cn0_profile_is_limit():
    L, n = np.pi, 1
    x = np.linspace(-L, L, 51)
    g = 2 * n * complete_K(INV_SQRT2) / L
    assert np.allclose(u_cn0(x, L, n), g * ellipj(g * x, 0.5)[1], atol=1e-13)
