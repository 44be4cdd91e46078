"""Thermodynamic-limit quantities: kernels, hole density, and boundary amplitudes.

Fourier convention: ``f(lam) = (1/2 pi) int dw exp(-i w lam) f_hat(w)``.
For even ``f_hat`` this is ``(1/pi) int_0^inf cos(w lam) f_hat(w) dw``.

Amplitudes come in two independent representations: exponentials of
half-line integrals (evaluated by :func:`quad_semi_infinite`) and infinite
products of Gamma ratios (evaluated by :func:`log_gamma_product`).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import KernelWindowError, PoleError
from .params import BulkParams, DerivedBoundary, check_kernel_window
from .quadrature import quad_semi_infinite
from .special import log_gamma_complex, log_gamma_product, raw_log_gamma_product

Method = Literal["integral", "gamma_product", "closed_form"]
DEFAULT_TOL = 1e-13
DEFAULT_NMAX = 200
POLE_TOL = 1e-13


@dataclass(frozen=True)
class Amplitude:
    value: complex
    method: Method
    trunc_param: float
    err_estimate: float


# -- kernels ------------------------------------------------------------------


def _sinh_ratio(a: float, b: float, omega):
    """``sinh(a w) / sinh(b w)`` for ``b > 0``, stable for large ``|w|``, limit ``a/b`` at 0."""
    w = np.abs(np.asarray(omega, dtype=float))  # the ratio is even in w
    with np.errstate(invalid="ignore", divide="ignore"):
        sa = math.copysign(1.0, a) if a != 0 else 0.0
        aa = abs(a)
        ratio = sa * np.exp((aa - b) * w) * (-np.expm1(-2 * aa * w)) / (-np.expm1(-2 * b * w))
    out = np.where(w == 0, a / b, ratio)
    return out if out.ndim else float(out)


def kernel_a_hat(n: float, omega, bulk: BulkParams):
    """``sinh[(nu - n) w/2] / sinh(nu w/2)`` for ``0 < n < 2 nu``."""
    if not 0 < n < 2 * bulk.nu:
        raise KernelWindowError(f"a_hat index n={n} outside (0, 2 nu) = (0, {2 * bulk.nu})")
    return _sinh_ratio((bulk.nu - n) / 2, bulk.nu / 2, omega)


def kernel_b_hat(n: float, omega, bulk: BulkParams):
    """``-sinh(n w/2) / sinh(nu w/2)`` for ``0 < n < nu``."""
    if not 0 < n < bulk.nu:
        raise KernelWindowError(f"b_hat index n={n} outside (0, nu) = (0, {bulk.nu})")
    return -_sinh_ratio(n / 2, bulk.nu / 2, omega)


def kernel_eps_hat(omega, bulk: BulkParams | None = None):
    """Hole energy kernel ``1 / (2 cosh(w/2))``; independent of ``nu``."""
    w = np.abs(np.asarray(omega, dtype=float))
    out = np.exp(-w / 2) / (1 + np.exp(-w))
    return out if out.ndim else float(out)


def kernel_eps_hat_ratio(omega, bulk: BulkParams):
    """``a_1 / (1 + a_2)``, the defining form of the hole energy kernel."""
    return kernel_a_hat(1, omega, bulk) / (1 + kernel_a_hat(2, omega, bulk))


@dataclass(frozen=True)
class KernelPoint:
    omega: float
    a_hat: dict
    b_hat: dict
    eps_hat: float

    @classmethod
    def evaluate(cls, omega: float, bulk: BulkParams, a_indices: Sequence[float] = (1, 2),
                 b_indices: Sequence[float] = (1,)) -> "KernelPoint":
        return cls(omega,
                   {n: kernel_a_hat(n, omega, bulk) for n in a_indices},
                   {n: kernel_b_hat(n, omega, bulk) for n in b_indices},
                   kernel_eps_hat(omega))


# -- hole energy, momentum, density --------------------------------------------


def hole_energy(lambda_tilde):
    """Closed form ``1 / (2 cosh(pi lam))`` of the inverse transform of the energy kernel."""
    lam = np.abs(np.asarray(lambda_tilde, dtype=float))
    out = np.exp(-math.pi * lam) / (1 + np.exp(-2 * math.pi * lam))
    return out if out.ndim else float(out)


def hole_energy_quadrature(lambda_tilde: float, tol: float = 1e-13) -> tuple[float, float]:
    """Inverse transform of the energy kernel by direct quadrature."""
    value, err = quad_semi_infinite(
        lambda w: math.cos(w * lambda_tilde) * kernel_eps_hat(w), decay_rate=0.5, tol=tol)
    return value / math.pi, err / math.pi


def hole_momentum(lambda_tilde):
    """``2 arctan(exp(pi lam))``: antiderivative of ``2 pi eps`` with value ``pi/2`` at 0."""
    out = 2 * np.arctan(np.exp(math.pi * np.asarray(lambda_tilde, dtype=float)))
    return out if out.ndim else float(out)


def density_hat(omega, lambda_tilde: float | None, n_sites: int, derived: DerivedBoundary,
                bulk: BulkParams):
    """Fourier transform of the one-hole root density including ``1/N`` terms.

    ``lambda_tilde=None`` (or infinite) drops the hole term, which describes
    a vacancy pushed past the last root.
    """
    check_kernel_window(derived.p_plus, derived.p_minus, bulk)
    pp, pm = complex(derived.p_plus).real, complex(derived.p_minus).real
    a2 = kernel_a_hat(2, omega, bulk)
    boundary = (kernel_a_hat(1, omega, bulk) + a2 + kernel_b_hat(1, omega, bulk)
                - kernel_a_hat(2 * pm + 1, omega, bulk) - kernel_a_hat(2 * pp + 1, omega, bulk))
    out = 2 * kernel_eps_hat(omega) + boundary / (n_sites * (1 + a2))
    if lambda_tilde is not None and math.isfinite(lambda_tilde):
        out = out + a2 / (1 + a2) * 2 * np.cos(np.asarray(omega) * lambda_tilde) / n_sites
    return out


def density(lam: float, lambda_tilde: float | None, n_sites: int, derived: DerivedBoundary,
            bulk: BulkParams, tol: float = 1e-12) -> float:
    """Inverse transform of :func:`density_hat` at rapidity ``lam``."""
    # slowest kernel decay: a_n falls like exp(-n w/2), eps_hat like exp(-w/2)
    pp, pm = complex(derived.p_plus).real, complex(derived.p_minus).real
    rates = [0.5, 1.0, bulk.nu / 2 - 0.5, bulk.nu - 1]
    for p in (pp, pm):
        n = 2 * p + 1
        rates.append(min(n, 2 * bulk.nu - n) / 2)
    value, _ = quad_semi_infinite(
        lambda w: math.cos(w * lam) * float(density_hat(w, lambda_tilde, n_sites, derived, bulk)),
        decay_rate=min(rates), tol=tol)
    return value / math.pi


# -- integrands ---------------------------------------------------------------


def _k0_integrand(omega: float, lambda_tilde: float, bulk: BulkParams) -> float:
    nu = bulk.nu
    return (math.sin(2 * omega * lambda_tilde) / omega
            * _sinh_ratio(1.5, 2.0, omega) * _sinh_ratio((nu - 2) / 2, (nu - 1) / 2, omega))


def _k1_integrand(omega: float, lambda_tilde: float, x: float, bulk: BulkParams) -> float:
    nu = bulk.nu
    beta = nu - 2 * x - 1
    # sinh(beta w) / (2 sinh((nu-1) w) cosh w) = ratio(beta, nu-1) / (2 cosh w)
    sech = 2 * math.exp(-omega) / (1 + math.exp(-2 * omega))
    return (math.sin(2 * omega * lambda_tilde) / omega
            * _sinh_ratio(beta, nu - 1, omega) * sech / 2)


def k1_decay_rate(x: float, bulk: BulkParams) -> float:
    return bulk.nu - abs(bulk.nu - 2 * x - 1)


def _check_x(x: float, bulk: BulkParams) -> None:
    if not -0.5 < x < bulk.nu - 0.5:
        raise KernelWindowError(f"x={x} outside (-1/2, nu - 1/2) = (-0.5, {bulk.nu - 0.5})")


def _k1_prefactor_cosh(lambda_tilde: float, x: complex, bulk: BulkParams) -> complex:
    nu = bulk.nu
    val = cmath.cosh(math.pi / (nu - 1) * (lambda_tilde - 0.5j * (nu - 2 * x)))
    if abs(val) < POLE_TOL:
        raise PoleError(f"cosh prefactor vanishes at lambda_tilde={lambda_tilde}, x={x}, nu={nu}")
    return val


# -- integral representation --------------------------------------------------


def k0_exponent_integral(lambda_tilde: float, bulk: BulkParams, tol: float = DEFAULT_TOL):
    return quad_semi_infinite(lambda w: _k0_integrand(w, lambda_tilde, bulk), 1.0, tol)


def k1_exponent_integral(lambda_tilde: float, x: float, bulk: BulkParams, tol: float = DEFAULT_TOL):
    _check_x(x, bulk)
    return quad_semi_infinite(lambda w: _k1_integrand(w, lambda_tilde, x, bulk),
                              k1_decay_rate(x, bulk), tol)


def k0_integral(lambda_tilde: float, bulk: BulkParams, tol: float = DEFAULT_TOL) -> Amplitude:
    """``exp{2 int dw/w sinh(2 i w lam) f(w)}``; the exponent is ``2 i`` times a real integral."""
    integral, err = k0_exponent_integral(lambda_tilde, bulk, tol)
    value = cmath.exp(2j * integral)
    return Amplitude(value, "integral", tol, 2 * err * abs(value))


def k1_integral(lambda_tilde: float, x: float, kappa: complex, bulk: BulkParams,
                tol: float = DEFAULT_TOL) -> Amplitude:
    integral, err = k1_exponent_integral(lambda_tilde, x, bulk, tol)
    pref = math.pi * (-2j * complex(kappa)) ** -0.5 / _k1_prefactor_cosh(lambda_tilde, x, bulk)
    value = pref * cmath.exp(-2j * integral)
    return Amplitude(value, "integral", tol, 2 * err * abs(value))


# -- Gamma-product representation ----------------------------------------------


def _k0_factors(lambda_tilde: float, bulk: BulkParams):
    a = 1 / (bulk.nu - 1)
    u = 2j * a * lambda_tilde
    offsets = [-u + 3 * a + 1, -u + a, u + 1, u + 4 * a,
               u + 3 * a + 1, u + a, -u + 1, -u + 4 * a]
    return offsets, [1, 1, 1, 1, -1, -1, -1, -1], 4 * a


def _k1_factors(lambda_tilde: float, x: complex, bulk: BulkParams):
    """Balanced factors of the exponential part of ``k_1``.

    Expanding ``1/cosh w`` geometrically and integrating term by term gives
    ratios of Gamma functions at step ``2/(nu-1)``; the ``1/cosh`` prefactor
    is ``Gamma(1/2 + w)Gamma(1/2 - w)/pi`` and is kept separate.
    """
    big = bulk.nu - 1
    c = (bulk.nu - 2 * x) / 2
    il = 1j * lambda_tilde
    offsets = [0.5 + (2 - c - il) / big, 0.5 + (1 - c + il) / big,
               0.5 + (c - il) / big, 0.5 + (1 + c + il) / big,
               0.5 + (1 - c - il) / big, 0.5 + (2 - c + il) / big,
               0.5 + (1 + c - il) / big, 0.5 + (c + il) / big]
    return offsets, [1, 1, 1, 1, -1, -1, -1, -1], 2 / big


def _k1_literal_factors(lambda_tilde: float, x: float, bulk: BulkParams):
    a = 1 / (bulk.nu - 1)
    c = (bulk.nu - 2 * x) / 2
    il = 1j * lambda_tilde
    offsets = [a * (-il - c) + 0.5, a * (-il + c) + 0.5,
               a * (il + 1 - c) + 0.5, a * (il + 1 + c) + 0.5,
               a * (il + 2 - c) + 0.5, a * (il + 2 + c) + 0.5,
               a * (-il + 1 - c) + 0.5, a * (-il + 1 + c) + 0.5]
    return offsets, [1, 1, 1, 1, -1, -1, -1, -1], 2 * a


def k0_gamma(lambda_tilde: float, bulk: BulkParams, n_max: int = DEFAULT_NMAX) -> Amplitude:
    offsets, signs, scale = _k0_factors(lambda_tilde, bulk)
    prod = log_gamma_product(offsets, signs, scale, n_max)
    value = cmath.exp(prod.value)
    return Amplitude(value, "gamma_product", n_max, prod.err * abs(value))


def k1_exponential_gamma(lambda_tilde: float, x: complex, bulk: BulkParams,
                         n_max: int = DEFAULT_NMAX) -> tuple[complex, float]:
    """Exponential factor of ``k_1`` (the part that equals 1 at ``lambda_tilde = 0``)."""
    offsets, signs, scale = _k1_factors(lambda_tilde, x, bulk)
    prod = log_gamma_product(offsets, signs, scale, n_max)
    value = cmath.exp(prod.value)
    return value, prod.err * abs(value)


def k1_gamma(lambda_tilde: float, x: float, kappa: complex, bulk: BulkParams,
             n_max: int = DEFAULT_NMAX) -> Amplitude:
    _check_x(x, bulk)
    _k1_prefactor_cosh(lambda_tilde, x, bulk)
    w = (1j * lambda_tilde + (bulk.nu - 2 * x) / 2) / (bulk.nu - 1)
    pref = cmath.sqrt(1j / (2 * complex(kappa))) * cmath.exp(
        log_gamma_complex(0.5 + w) + log_gamma_complex(0.5 - w))
    expo, err = k1_exponential_gamma(lambda_tilde, x, bulk, n_max)
    return Amplitude(pref * expo, "gamma_product", n_max, err * abs(pref))


def k1_gamma_unregularized(lambda_tilde: float, x: float, kappa: complex, bulk: BulkParams,
                           n_max: int = DEFAULT_NMAX) -> np.ndarray:
    """Partial products of the unbalanced Gamma-ratio form, kept to exhibit its divergence."""
    offsets, signs, scale = _k1_literal_factors(lambda_tilde, x, bulk)
    partial = raw_log_gamma_product(offsets, signs, scale, n_max)
    return cmath.sqrt(1j / (2 * complex(kappa))) * np.exp(partial)


# -- composite amplitudes ------------------------------------------------------


def k1_full(lambda_tilde: float, derived: DerivedBoundary, kappa: complex, bulk: BulkParams,
            method: Method = "integral", tol: float = DEFAULT_TOL,
            n_max: int = DEFAULT_NMAX) -> Amplitude:
    """First reflection eigenvalue ``k_0 E(p+) E(p-)``.

    The explicit cosh factors cancel the ``k_1`` denominators and
    ``(-2 i kappa)^(-1/2)`` squares to ``1/(-2 i kappa)``, so only the
    exponential parts remain and ``kappa`` drops out; it is accepted for
    interface symmetry.
    """
    pp, pm = complex(derived.p_plus).real, complex(derived.p_minus).real
    for p in (pp, pm):
        _check_x(p, bulk)
    if method == "integral":
        k0 = k0_integral(lambda_tilde, bulk, tol)
        parts, errs = [k0.value], [k0.err_estimate / max(abs(k0.value), 1e-300)]
        for p in (pp, pm):
            integral, err = k1_exponent_integral(lambda_tilde, p, bulk, tol)
            parts.append(cmath.exp(-2j * integral))
            errs.append(2 * err)
        trunc = tol
    elif method == "gamma_product":
        k0 = k0_gamma(lambda_tilde, bulk, n_max)
        parts, errs = [k0.value], [k0.err_estimate / max(abs(k0.value), 1e-300)]
        for p in (pp, pm):
            value, err = k1_exponential_gamma(lambda_tilde, p, bulk, n_max)
            parts.append(value)
            errs.append(err / max(abs(value), 1e-300))
        trunc = n_max
    else:
        raise ValueError(f"unknown method {method!r}")
    value = parts[0] * parts[1] * parts[2]
    return Amplitude(value, method, trunc, abs(value) * sum(errs))


def k1_zero_closed_form(x: float, kappa: complex, bulk: BulkParams) -> complex:
    """``k_1(0, x) = pi (-2 i kappa)^(-1/2) / cos[pi (nu - 2x) / (2 (nu - 1))]``."""
    den = math.cos(math.pi * (bulk.nu - 2 * x) / (2 * (bulk.nu - 1)))
    if abs(den) < POLE_TOL:
        raise PoleError(f"k_1(0, x) has a pole at x={x}")
    return math.pi * (-2j * complex(kappa)) ** -0.5 / den


def k2_over_k1(lambda_tilde: float, derived: DerivedBoundary, bulk: BulkParams) -> complex:
    """Ratio of the two reflection eigenvalues: a product of two cosh ratios."""
    scale = math.pi / (bulk.nu - 1)
    out = 1 + 0j
    for p in (complex(derived.p_plus), complex(derived.p_minus)):
        shift = 0.5j * (bulk.nu - 2 * p)
        den = cmath.cosh(scale * (lambda_tilde - shift))
        if abs(den) < POLE_TOL:
            raise PoleError(f"k2/k1 denominator vanishes at lambda_tilde={lambda_tilde}, p={p}")
        out *= cmath.cosh(scale * (lambda_tilde + shift)) / den
    return out


def renormalized_eigenvalue_ratio(lambda_tilde: float, derived: DerivedBoundary,
                                  bulk: BulkParams) -> complex:
    """Ratio ``eps_1/eps_2`` of the bare K-matrix eigenvalues at renormalized parameters.

    Uses ``mu -> pi/(nu - 1)`` and ``p -> nu - 1/2 - p``; compared with
    :func:`k2_over_k1` as a diagnostic.
    """
    mu_r = math.pi / (bulk.nu - 1)
    out = 1 + 0j
    for p in (complex(derived.p_plus), complex(derived.p_minus)):
        pr = bulk.nu - 0.5 - p
        out *= cmath.sinh(mu_r * (lambda_tilde + 1j * pr)) / cmath.sinh(mu_r * (lambda_tilde - 1j * pr))
    return out


@dataclass(frozen=True)
class TrendPoint:
    imag_shift: float
    modulus: float


def diagonal_limit_trend(lambda_tilde: float, x0: float, bulk: BulkParams,
                         shifts: Sequence[float] = (0.0, 1.0, 2.0, 4.0, 8.0, 16.0),
                         n_max: int = DEFAULT_NMAX) -> list[TrendPoint]:
    """Modulus of the exponential ``k_1`` factor along ``x = x0 + i y``.

    Sending ``kappa -> 0`` pushes one of ``p+-`` off to imaginary infinity;
    the modulus of that factor is tracked against ``y``.
    """
    return [TrendPoint(y, abs(k1_exponential_gamma(lambda_tilde, x0 + 1j * y, bulk, n_max)[0]))
            for y in shifts]
