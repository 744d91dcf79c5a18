import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate
from scipy.special import binom, eval_genlaguerre, eval_jacobi

from polykernel.closedform import (JacobiParams, LaguerreParams, MobiusMap, bailey_identity_check,
                                   bergman_kernel, bergman_kernel_binomial_variant,
                                   bergman_product_kernel, covariance_residual, fock_kernel,
                                   fock_product_kernel, gbinom, jacobi_eval, jacobi_norm,
                                   laguerre, laguerre_eval, laguerre_explicit,
                                   laguerre_shift_check, mobius_apply, mobius_derivative)
from polykernel.errors import DomainError, ParameterError
from polykernel.kernelseries import KernelParams, R_kernel, TruncationPolicy
from polykernel.measures import bergman, fock


def disc_points(radius):
    return st.builds(lambda r, t: cmath.rect(r, t), st.floats(0, radius), st.floats(0, 2 * math.pi))


# -- binomials and Jacobi ----------------------------------------------------


def test_gbinom_matches_integer_binomial():
    for a in range(8):
        for b in range(a + 1):
            assert gbinom(a, b) == math.comb(a, b)


def test_gbinom_real_upper_index():
    assert gbinom(2.5, 1) == pytest.approx(2.5)
    assert gbinom(0.5, 2) == pytest.approx(-0.125)
    assert gbinom(4.5, 0.5) == pytest.approx(float(binom(4.5, 0.5)))


def test_jacobi_examples():
    for a, b in [(0, 0), (1.5, 0.5), (3, 2)]:
        assert jacobi_eval(JacobiParams(a, b, 0), 0.3) == pytest.approx(1.0)
    xs = np.linspace(0, 1, 5)
    np.testing.assert_allclose(jacobi_eval(JacobiParams(1, 0, 1), xs), 2 - 3 * xs, rtol=1e-14)


@pytest.mark.parametrize("a,b", [(0, 0), (0.5, 2), (2, 0.5), (3, 4)])
@pytest.mark.parametrize("n", [1, 2, 5, 8])
def test_jacobi_against_scipy(a, b, n):
    xs = np.linspace(0, 1, 11)
    p = JacobiParams(a, b, n)
    # the power series alternates in sign, so its evaluation at -x sums |terms|
    size = jacobi_eval(p, -xs)
    err = np.abs(jacobi_eval(p, xs) - eval_jacobi(n, a, b, 1 - 2 * xs))
    assert np.all(err <= 1e-14 * size)


def test_jacobi_norm_examples():
    assert jacobi_norm(0, 0, 0) == pytest.approx(1.0)
    assert jacobi_norm(0, 0, 1) == pytest.approx(1 / 3)
    assert jacobi_norm(1, 2, 1) == pytest.approx(1 / 12)


@pytest.mark.parametrize("a,d", [(0, 0), (1, 2), (0.5, 3), (2.5, 0)])
@pytest.mark.parametrize("n", [0, 1, 2, 4])
def test_jacobi_norm_by_quadrature(a, d, n):
    f = lambda x: eval_jacobi(n, a, d, 2 * x - 1) ** 2 * x**d * (1 - x) ** a
    ref = integrate.quad(f, 0, 1, limit=200)[0]
    assert jacobi_norm(a, d, n) == pytest.approx(ref, rel=1e-10)


def test_jacobi_params_validated():
    with pytest.raises(ParameterError):
        JacobiParams(-1, 0, 1)
    with pytest.raises(ParameterError):
        JacobiParams(0, 0, -1)


# -- Laguerre ----------------------------------------------------------------


def test_laguerre_examples():
    assert laguerre_eval(LaguerreParams(3.5, 0), 2.0) == 1.0
    assert laguerre_eval(LaguerreParams(1, 1), 0.0) == 2.0
    assert laguerre_eval(LaguerreParams(0, 2), 1.0) == pytest.approx(-0.5)
    assert laguerre_explicit(2, 0, 1.0) == pytest.approx(-0.5)


@pytest.mark.parametrize("n", range(9))
@pytest.mark.parametrize("beta", [0.0, 0.5, 1.0, 3.5])
def test_laguerre_recurrence_vs_explicit(n, beta):
    xs = np.linspace(0, 6, 13)
    np.testing.assert_allclose(laguerre(n, beta, xs), laguerre_explicit(n, beta, xs),
                               rtol=1e-10, atol=1e-10)
    np.testing.assert_allclose(laguerre(n, beta, xs), eval_genlaguerre(n, beta, xs),
                               rtol=1e-11, atol=1e-11)


def test_laguerre_params_validated():
    with pytest.raises(ParameterError):
        LaguerreParams(-1.5, 2)


def test_bailey_examples():
    assert bailey_identity_check(0.7, 0, 0.3, 2.0) == 0.0
    assert bailey_identity_check(0.0, 1, 1.0, 1.0) <= 1e-13
    assert laguerre_shift_check(0.5, 2, 1.3, 0.0, kind=1) == 0.0


@given(beta=st.floats(0, 4), n=st.integers(0, 6), x=st.floats(0, 5), y=st.floats(0, 5))
def test_bailey_residual_small(beta, n, x, y):
    scale = 1 + abs(float(laguerre(n, beta, x) * laguerre(n, beta, y)))
    assert bailey_identity_check(beta, n, x, y) <= 1e-9 * scale * (1 + x + y) ** n


@given(beta=st.floats(0, 3), n=st.integers(0, 5), x=st.floats(0, 4), y=st.floats(0, 2))
def test_laguerre_shift_identities(beta, n, x, y):
    scale = (1 + x + y) ** n * 10
    assert laguerre_shift_check(beta, n, x, y, kind=1) <= 1e-10 * scale
    assert laguerre_shift_check(beta, n, x, y, kind=2) <= 1e-9 * scale


def test_shift_check_rejects_unknown_kind():
    with pytest.raises(ValueError):
        laguerre_shift_check(0, 1, 0.1, 0.1, kind=3)


# -- Mobius maps -------------------------------------------------------------


def test_mobius_examples():
    m = MobiusMap(0.3 - 0.2j)
    assert abs(mobius_apply(m, 0.3 - 0.2j)) == 0
    ident = MobiusMap(0)
    assert mobius_apply(ident, 0.4j) == 0.4j
    assert mobius_derivative(ident, 0.4j) == 1
    half = MobiusMap(0.5)
    assert mobius_apply(half, 0) == -0.5
    assert mobius_derivative(half, 0) == pytest.approx(0.75)


@given(w=disc_points(0.95), z=disc_points(0.95))
def test_mobius_inverse(w, z):
    m = MobiusMap(w)
    assert abs(m.inverse()(m(z)) - z) <= 1e-9
    assert abs(m.sqrt_derivative(z) ** 2 - m.derivative(z)) <= 1e-9 * abs(m.derivative(z))


def test_mobius_centre_validated():
    with pytest.raises(ParameterError):
        MobiusMap(1.0)


# -- Bergman kernel ----------------------------------------------------------


def test_bergman_examples():
    z, w = 0.3 + 0.4j, -0.5 + 0.1j
    assert bergman_kernel(0, 1, z, w) == pytest.approx(1 / (1 - z * np.conj(w)) ** 2)
    assert bergman_kernel(0, 2, 0, 0) == pytest.approx(4.0, rel=1e-15)
    assert bergman_kernel(1, 1, 0.5, 0.5) == pytest.approx(2 / 0.75**3, rel=1e-14)
    # monomial series oracle: sum |z|^(2m) / B(m+1, alpha+1)
    ref = sum(0.25**m / math.exp(math.lgamma(m + 1) + math.lgamma(2) - math.lgamma(m + 3))
              for m in range(200))
    assert bergman_kernel(1, 1, 0.5, 0.5) == pytest.approx(ref, rel=1e-13)


def test_bergman_domain():
    with pytest.raises(DomainError):
        bergman_kernel(0, 1, 1.0, 0)
    with pytest.raises(DomainError):
        bergman_kernel(0, 2, 0, 1.2j)
    with pytest.raises(ParameterError):
        bergman_kernel(-1, 1, 0, 0)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 2.0])
@pytest.mark.parametrize("q", [1, 2, 3])
def test_bergman_diagonal_at_origin_is_q_times_alpha_plus_q(alpha, q):
    assert bergman_kernel(alpha, q, 0, 0).real == pytest.approx(q * (alpha + q), rel=1e-13)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 2.0])
@pytest.mark.parametrize("q", [1, 2, 3])
def test_bergman_closed_form_matches_series(alpha, q):
    p = KernelParams(bergman(alpha), q, TruncationPolicy(rel_tol=1e-16))
    rng = np.random.default_rng(11)
    z = 0.6 * np.sqrt(rng.uniform(size=8)) * np.exp(2j * np.pi * rng.uniform(size=8))
    w = 0.6 * np.sqrt(rng.uniform(size=8)) * np.exp(2j * np.pi * rng.uniform(size=8))
    np.testing.assert_allclose(bergman_kernel(alpha, q, z, w), R_kernel(p, z, w), rtol=1e-11)


def test_binomial_variant_differs_by_binomial():
    z, w = 0.2 + 0.1j, -0.3j
    for alpha, q in [(0, 3), (1, 2), (2.5, 3)]:
        ratio = bergman_kernel_binomial_variant(alpha, q, z, w) / bergman_kernel(alpha, q, z, w)
        assert ratio == pytest.approx(gbinom(alpha + q - 1, alpha), rel=1e-14)
    assert bergman_kernel_binomial_variant(0, 3, z, w) == pytest.approx(bergman_kernel(0, 3, z, w))


@given(alpha=st.floats(0, 3), q=st.integers(1, 4), z=disc_points(0.9), w=disc_points(0.9))
def test_bergman_hermitian(alpha, q, z, w):
    a, b = bergman_kernel(alpha, q, z, w), bergman_kernel(alpha, q, w, z)
    assert abs(a - np.conj(b)) <= 1e-12 * abs(a) + 1e-300
    assert bergman_kernel(alpha, q, z, z).real > 0


# -- covariance --------------------------------------------------------------


def test_covariance_examples():
    assert covariance_residual(1.3, 2, MobiusMap(0), 0.3j, -0.2) == 0.0
    rng = np.random.default_rng(5)
    for _ in range(5):
        z, xi, w = (complex(*rng.uniform(-0.6, 0.6, 2)) for _ in range(3))
        assert covariance_residual(0, 1, MobiusMap(w), z, xi) <= 1e-12
    assert covariance_residual(0, 2, MobiusMap(0.3), 0.1, -0.2j) <= 1e-10


@given(alpha=st.sampled_from([0.0, 0.5, 1.0, 2.0]), q=st.integers(1, 3),
       w=disc_points(0.7), z=disc_points(0.7), xi=disc_points(0.7))
def test_covariance_property(alpha, q, w, z, xi):
    assert covariance_residual(alpha, q, MobiusMap(w), z, xi) <= 1e-10


def test_series_kernel_is_covariant_too():
    def series_kernel(alpha, q, z, w):
        return R_kernel(KernelParams(bergman(alpha), q, TruncationPolicy(rel_tol=1e-16)), z, w)

    assert covariance_residual(1, 2, MobiusMap(0.2 + 0.3j), 0.1 - 0.2j, 0.3,
                               kernel=series_kernel) <= 1e-10


# -- Fock kernel -------------------------------------------------------------


def test_fock_examples():
    z, w = 0.7 - 1.1j, 0.2 + 0.5j
    assert fock_kernel(0, 1, z, w) == pytest.approx(np.exp(z * np.conj(w)))
    assert fock_kernel(0, 2, z, w) == pytest.approx(np.exp(z * np.conj(w)) * (2 - abs(z - w) ** 2))
    for alpha, q in [(0, 1), (0.5, 2), (2.5, 3)]:
        assert fock_kernel(alpha, q, z, z) == pytest.approx(
            math.exp(abs(z) ** 2) * gbinom(q + alpha, q - 1), rel=1e-13)


@pytest.mark.parametrize("q", [1, 2, 3])
def test_fock_alpha0_matches_series(q):
    p = KernelParams(fock(0), q, TruncationPolicy(rel_tol=1e-16))
    rng = np.random.default_rng(2)
    z = 2 * np.sqrt(rng.uniform(size=8)) * np.exp(2j * np.pi * rng.uniform(size=8))
    w = 2 * np.sqrt(rng.uniform(size=8)) * np.exp(2j * np.pi * rng.uniform(size=8))
    closed = fock_kernel(0, q, z, w)
    series = R_kernel(p, z, w)
    scale = np.sqrt(fock_kernel(0, q, z, z).real * fock_kernel(0, q, w, w).real)
    assert np.max(np.abs(closed - series) / scale) <= 1e-12


def test_fock_alpha_nonzero_differs_from_series():
    # the Laguerre closed form is not the kernel of the weighted space when alpha != 0
    p = KernelParams(fock(1.0), 1)
    assert abs(fock_kernel(1.0, 1, 1.0, 1.0) - R_kernel(p, 1.0, 1.0)) > 0.1


def test_product_kernels():
    z, w = (0.1 + 0.2j, -0.3), (0.4j, 0.2 - 0.1j)
    assert bergman_product_kernel(0.5, 2, z, w) == pytest.approx(
        bergman_kernel(0.5, 2, z[0], w[0]) * bergman_kernel(0.5, 2, z[1], w[1]), rel=1e-14)
    assert fock_product_kernel(0, 2, z, w) == pytest.approx(
        fock_kernel(0, 2, z[0], w[0]) * fock_kernel(0, 2, z[1], w[1]), rel=1e-14)
