import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from openxxz.errors import KernelWindowError, PoleError
from openxxz.params import BulkParams, DerivedBoundary
from openxxz.smatrix import (KernelPoint, _k0_factors, _k1_factors, density, density_hat,
                             diagonal_limit_trend, hole_energy, hole_energy_quadrature,
                             hole_momentum, k0_gamma, k0_integral, k1_full, k1_gamma,
                             k1_gamma_unregularized, k1_integral, k1_zero_closed_form, k2_over_k1,
                             kernel_a_hat, kernel_b_hat, kernel_eps_hat, kernel_eps_hat_ratio,
                             renormalized_eigenvalue_ratio)
from openxxz.special import log_gamma_complex


def test_kernel_limits_at_zero(bulk):
    nu = bulk.nu
    assert kernel_a_hat(1, 0.0, bulk) == pytest.approx((nu - 1) / nu)
    assert kernel_b_hat(1, 0.0, bulk) == pytest.approx(-1 / nu)
    assert kernel_eps_hat(0.0) == 0.5


def test_kernels_stable_at_large_omega(bulk):
    w = np.array([50.0, 500.0, 5000.0])
    for value in (kernel_a_hat(1, w, bulk), kernel_b_hat(1, w, bulk), kernel_eps_hat(w)):
        assert np.all(np.isfinite(value))
    assert kernel_a_hat(1, 50.0, bulk) == pytest.approx(math.exp(-25), rel=1e-12)


def test_kernel_windows(bulk):
    with pytest.raises(KernelWindowError):
        kernel_a_hat(2 * bulk.nu, 1.0, bulk)
    with pytest.raises(KernelWindowError):
        kernel_b_hat(bulk.nu, 1.0, bulk)


@pytest.mark.parametrize("nu", [2.5, 3.0, 3.7, 5.0])
def test_energy_kernel_identity(nu):
    bulk = BulkParams(nu)
    w = np.linspace(-40, 40, 1001)
    closed = 1 / (2 * np.cosh(w / 2))
    assert np.max(np.abs(kernel_eps_hat_ratio(w, bulk) - closed)) < 1e-14
    assert np.max(np.abs(kernel_eps_hat(w) - closed)) < 1e-15


def test_kernel_point_record(bulk):
    point = KernelPoint.evaluate(0.7, bulk)
    assert set(point.a_hat) == {1, 2}
    assert point.eps_hat == pytest.approx(1 / (2 * math.cosh(0.35)))


@pytest.mark.parametrize("lam", [0.0, 0.3, 1.0, 2.5])
def test_hole_energy_quadrature_matches_closed_form(lam):
    value, err = hole_energy_quadrature(lam)
    assert abs(value - 1 / (2 * math.cosh(math.pi * lam))) < 1e-12
    assert err < 1e-12


def test_hole_energy_even_and_momentum():
    lam = np.linspace(-3, 3, 31)
    assert np.allclose(hole_energy(lam), hole_energy(-lam), atol=0)
    assert hole_momentum(0.0) == pytest.approx(math.pi / 2)
    assert hole_momentum(20.0) - hole_momentum(-20.0) == pytest.approx(math.pi)
    h = 1e-5
    deriv = (hole_momentum(0.4 + h) - hole_momentum(0.4 - h)) / (2 * h)
    assert deriv == pytest.approx(2 * math.pi * hole_energy(0.4), rel=1e-8)


def test_density_hat_large_n_limit(bulk, derived):
    w = np.linspace(0, 10, 21)
    assert np.allclose(density_hat(w, 0.4, 10 ** 12, derived, bulk), 2 * kernel_eps_hat(w), atol=1e-11)


def test_density_hat_at_zero_frequency(bulk, derived):
    nu, n = bulk.nu, 51
    pp, pm = derived.p_plus, derived.p_minus
    # term by term limits sinh(a w)/sinh(b w) -> a/b
    a = lambda k: (nu - k) / nu  # noqa: E731
    a2 = a(2)
    boundary = a(1) + a2 - 1 / nu - a(2 * pm + 1) - a(2 * pp + 1)
    expected = 1 + boundary / (n * (1 + a2)) + a2 / (1 + a2) * 2 / n
    assert float(density_hat(0.0, 0.3, n, derived, bulk)) == pytest.approx(expected, rel=1e-14)
    no_hole = 1 + boundary / (n * (1 + a2))
    assert float(density_hat(0.0, None, n, derived, bulk)) == pytest.approx(no_hole, rel=1e-14)


def test_density_window_error(bulk):
    with pytest.raises(KernelWindowError):
        density_hat(0.5, None, 11, DerivedBoundary.from_pm(-0.8, 1.3), bulk)


def test_density_bulk_term_integrates_to_hole_energy(bulk, derived):
    # without 1/N terms the density is twice the hole energy
    assert density(0.3, None, 10 ** 12, derived, bulk) == pytest.approx(2 * hole_energy(0.3), abs=1e-10)


def test_k0_basic_properties(bulk):
    assert k0_integral(0.0, bulk).value == 1
    assert k0_gamma(0.0, bulk).value == pytest.approx(1, abs=1e-13)
    for lam in (0.3, 1.1, 2.0):
        k = k0_integral(lam, bulk).value
        assert abs(abs(k) - 1) < 1e-12
        assert abs(k * k0_integral(-lam, bulk).value - 1) < 1e-12


def test_k0_reference_value():
    k = k0_integral(1.3, BulkParams(3.0)).value
    assert abs(k - (0.39894290083363 + 0.91697576951327j)) < 1e-12


@pytest.mark.parametrize("nu", [2.5, 3.7])
@pytest.mark.parametrize("x", [0.3, 1.2])
def test_k1_representations_agree(nu, x):
    bulk = BulkParams(nu)
    for lam in (0.0, 0.5, 1.75):
        a = k1_integral(lam, x, 0.6 - 0.2j, bulk)
        b = k1_gamma(lam, x, 0.6 - 0.2j, bulk)
        assert abs(a.value - b.value) < 1e-10
        assert abs(a.value - b.value) <= a.err_estimate + b.err_estimate + 1e-14


def test_k1_reference_value():
    k = k1_integral(0.5, 0.3, 1.0, BulkParams(3.0)).value
    assert abs(k - (-1.30851420393247 + 2.02308892418140j)) < 1e-12


def test_k1_zero_closed_form(bulk):
    for x in (0.3, 0.7, 1.2):
        ref = k1_zero_closed_form(x, 0.4 + 0.9j, bulk)
        assert abs(k1_integral(0.0, x, 0.4 + 0.9j, bulk).value - ref) < 1e-12 * abs(ref)
        assert abs(k1_gamma(0.0, x, 0.4 + 0.9j, bulk).value - ref) < 1e-12 * abs(ref)


def test_k1_pole_and_window(bulk):
    # cosh prefactor vanishes where (nu - 2x)/(2(nu - 1)) = 1/2, i.e. x = 1/2
    with pytest.raises(PoleError):
        k1_integral(0.0, 0.5, 1.0, bulk)
    with pytest.raises(PoleError):
        k1_zero_closed_form(0.5, 1.0, bulk)
    with pytest.raises(KernelWindowError):
        k1_integral(0.3, bulk.nu, 1.0, bulk)


def test_literal_k1_product_diverges(bulk):
    partial = k1_gamma_unregularized(0.6, 0.3, 1.0, bulk, n_max=4000)
    mags = np.abs(partial)
    # the unbalanced partial products collapse toward zero instead of converging
    assert mags[-1] < 1e-6 * mags[10]
    assert np.all(np.diff(mags[50:]) <= 0)


def test_product_terms_approach_one(bulk):
    for offsets, signs, scale in (_k0_factors(0.8, bulk), _k1_factors(0.8, 0.7, bulk)):
        n = 1000
        log_term = sum(s * log_gamma_complex(scale * n + b) for s, b in zip(signs, offsets))
        assert abs(cmath.exp(log_term) - 1) < 1e-5


def test_k1_full_methods_agree_and_cancel_kappa(bulk, derived):
    for lam in (0.0, 0.25, 1.5):
        a = k1_full(lam, derived, 0.3, bulk, "integral")
        b = k1_full(lam, derived, 0.3, bulk, "gamma_product")
        assert abs(a.value - b.value) < 1e-10
    assert k1_full(0.0, derived, 0.3, bulk).value == 1
    assert k1_full(0.7, derived, 0.3, bulk).value == k1_full(0.7, derived, 5.0 - 1j, bulk).value
    with pytest.raises(ValueError):
        k1_full(0.3, derived, 0.3, bulk, "closed_form")


def test_k1_full_composes_from_parts(bulk, derived):
    # assemble the product with the explicit cosh prefactors and compare
    lam, kappa = 0.9, 0.5 + 0.5j
    nu = bulk.nu
    scale = math.pi / (nu - 1)
    pref = -2j * kappa / math.pi ** 2
    for p in (derived.p_plus, derived.p_minus):
        pref *= cmath.cosh(scale * (lam - 0.5j * (nu - 2 * p)))
    direct = (pref * k0_integral(lam, bulk).value * k1_integral(lam, derived.p_plus, kappa, bulk).value
              * k1_integral(lam, derived.p_minus, kappa, bulk).value)
    assert abs(direct - k1_full(lam, derived, kappa, bulk).value) < 1e-12


def test_ratio_properties(bulk, derived):
    assert k2_over_k1(0.0, derived, bulk) == pytest.approx(1, abs=1e-15)
    for lam in np.linspace(-2, 2, 17):
        assert abs(abs(k2_over_k1(lam, derived, bulk)) - 1) < 1e-12


@settings(max_examples=40, deadline=None)
@given(lam=st.floats(-3, 3), pp=st.floats(0.05, 2.5), pm=st.floats(0.05, 2.5))
def test_ratio_matches_renormalized_eigenvalues(lam, pp, pm):
    bulk = BulkParams(3.7)
    d = DerivedBoundary.from_pm(pp, pm)
    try:
        ratio = k2_over_k1(lam, d, bulk)
    except PoleError:
        return
    assert abs(ratio - renormalized_eigenvalue_ratio(lam, d, bulk)) < 1e-10 * max(1.0, abs(ratio))


def test_ratio_pole_reported():
    bulk = BulkParams(3.0)
    # denominator cosh(pi/2 (0 - i(3 - 2p)/2)) vanishes for p = 1/2
    with pytest.raises(PoleError, match="lambda_tilde"):
        k2_over_k1(0.0, DerivedBoundary.from_pm(0.5, 1.0), bulk)


def test_diagonal_limit_trend_is_monotone(bulk):
    trend = diagonal_limit_trend(0.7, 0.8, bulk)
    mods = [t.modulus for t in trend]
    assert trend[0].modulus == pytest.approx(1.0, abs=1e-12)
    assert all(b <= a + 1e-12 for a, b in zip(mods, mods[1:]))
    assert abs(mods[-1] - mods[-2]) < 1e-3
