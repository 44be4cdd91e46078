"""Bulk and boundary parameters and the maps between their parametrizations.

Three boundary descriptions appear throughout the package:

* bare ``(xi, kappa, theta)``: the entries of the reflection matrix,
* derived ``(p_plus, p_minus)`` with the auxiliary ``beta_gamma_sum`` and
  ``zeta``, which is what the Bethe equations and amplitudes consume,
* Ghoshal-Zamolodchikov ``(eta, vartheta, xi', k)`` with renormalized
  anisotropy ``pi/(nu - 1)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import BranchCutError, KernelWindowError, PoleError

#: Relative distance from the real segment [-1, 1] below which an inverse
#: cosh argument is flagged as sitting on the branch cut.
BRANCH_TOL = 1e-12


@dataclass(frozen=True)
class BulkParams:
    """Anisotropy of the critical chain, parametrized by ``nu`` (``mu = pi/nu``)."""

    nu: float

    def __post_init__(self):
        if not math.isfinite(self.nu) or self.nu <= 2.0:
            raise ValueError(f"nu must be a finite number > 2, got {self.nu!r}")

    @property
    def mu(self) -> float:
        return math.pi / self.nu

    @property
    def q(self) -> complex:
        return cmath.exp(1j * self.mu)

    @property
    def mu_renormalized(self) -> float:
        return math.pi / (self.nu - 1.0)


@dataclass(frozen=True)
class BoundaryParams:
    xi: complex
    kappa: complex
    theta: float = 0.0

    def __post_init__(self):
        if self.kappa == 0:
            raise ValueError("kappa must be nonzero")


@dataclass(frozen=True)
class DerivedBoundary:
    p_plus: complex
    p_minus: complex
    beta_gamma_sum: complex
    zeta: complex
    branch_ambiguous: bool = field(default=False, compare=False)

    @classmethod
    def from_pm(cls, p_plus: complex, p_minus: complex) -> "DerivedBoundary":
        return cls(p_plus, p_minus, p_plus + p_minus, p_plus - p_minus)

    def dual(self) -> "DerivedBoundary":
        """Parameters of the second reference state, ``p -> -p``."""
        return DerivedBoundary(-self.p_plus, -self.p_minus,
                               -self.beta_gamma_sum, -self.zeta,
                               self.branch_ambiguous)

    @property
    def is_real(self) -> bool:
        return abs(complex(self.p_plus).imag) == 0 and abs(complex(self.p_minus).imag) == 0


@dataclass(frozen=True)
class GZParams:
    lambda_gz: float
    eta: complex
    vartheta: complex
    xi_prime: complex
    k_gz: complex
    constraint_residuals: tuple[complex, complex] = (0j, 0j)


def _on_cut(w: complex) -> bool:
    return abs(w.imag) <= BRANCH_TOL * max(1.0, abs(w)) and -1.0 <= w.real <= 1.0


def derive_pm_from_bare(bnd: BoundaryParams, bulk: BulkParams,
                        strict: bool = False) -> DerivedBoundary:
    """Invert ``e^{-+i mu xi}/(2 kappa) = i cosh(i mu {beta+gamma, zeta})``.

    Both inverse cosh evaluations use the principal branch. When either
    argument lies on the real segment [-1, 1] the sign of the result is not
    fixed by the principal branch alone; the returned parameters are still
    valid but carry ``branch_ambiguous=True``; with ``strict=True`` a
    :class:`BranchCutError` is raised instead.
    """
    mu = bulk.mu
    xi, kappa = complex(bnd.xi), complex(bnd.kappa)
    w_sum = cmath.exp(-1j * mu * xi) / (2j * kappa)
    w_zeta = cmath.exp(1j * mu * xi) / (2j * kappa)
    ambiguous = _on_cut(w_sum) or _on_cut(w_zeta)
    if strict and ambiguous:
        raise BranchCutError(f"inverse cosh arguments {w_sum}, {w_zeta} lie on [-1, 1]")
    s = cmath.acosh(w_sum) / (1j * mu)
    z = cmath.acosh(w_zeta) / (1j * mu)
    return DerivedBoundary(
        p_plus=(s + z) / 2,
        p_minus=(s - z) / 2,
        beta_gamma_sum=s,
        zeta=z,
        branch_ambiguous=ambiguous,
    )


def derive_bare_from_pm(p_plus: complex, p_minus: complex, bulk: BulkParams,
                        theta: float = 0.0) -> BoundaryParams:
    """Bare ``(xi, kappa)`` reproducing ``(p_plus, p_minus)``.

    Dividing the two defining relations gives ``e^{2 i mu xi}`` directly, and
    ``kappa`` then follows from either one; the result is invariant under
    ``p_plus <-> p_minus`` and under a global sign flip. ``Re xi`` lies in
    ``(-nu/2, nu/2]``.
    """
    mu = bulk.mu
    s = complex(p_plus) + complex(p_minus)
    z = complex(p_plus) - complex(p_minus)
    cs, cz = cmath.cos(mu * s), cmath.cos(mu * z)
    if abs(cs) < 1e-14 or abs(cz) < 1e-14:
        raise PoleError(
            "kappa diverges: cos(mu (p+ +- p-)) = 0 "
            f"(cos sum={cs:.3e}, cos diff={cz:.3e})")
    xi = cmath.log(cz / cs) / (2j * mu)
    # a negative ratio sits on the log cut; pin Re xi to +nu/2 so the choice
    # does not depend on the sign of a roundoff-level imaginary part
    if abs(xi.real + bulk.nu / 2) < 1e-12 * bulk.nu:
        xi += bulk.nu
    kappa = cmath.exp(1j * mu * xi) / (2j * cz)
    return BoundaryParams(xi=xi, kappa=kappa, theta=theta)


def barecon_residuals(derived: DerivedBoundary, bnd: BoundaryParams,
                      bulk: BulkParams) -> tuple[float, float]:
    """Absolute residuals of the two constraints among bare and derived parameters."""
    mu = bulk.mu
    cp = cmath.cosh(1j * mu * derived.p_plus)
    cm = cmath.cosh(1j * mu * derived.p_minus)
    kappa = complex(bnd.kappa)
    r1 = cmath.cosh(1j * mu * bnd.xi) / (2j * kappa) - cp * cm
    r2 = cp ** 2 + cm ** 2 - 1 + 1 / (4 * kappa ** 2)
    return abs(r1), abs(r2)


def param_residuals(derived: DerivedBoundary, bnd: BoundaryParams,
                    bulk: BulkParams) -> tuple[float, float]:
    """Residuals of the defining relations for ``beta_gamma_sum`` and ``zeta``."""
    mu = bulk.mu
    kappa = complex(bnd.kappa)
    r1 = cmath.exp(-1j * mu * bnd.xi) / (2 * kappa) - 1j * cmath.cosh(1j * mu * derived.beta_gamma_sum)
    r2 = cmath.exp(1j * mu * bnd.xi) / (2 * kappa) - 1j * cmath.cosh(1j * mu * derived.zeta)
    return abs(r1), abs(r2)


def map_to_gz(bulk: BulkParams, derived: DerivedBoundary, bnd: BoundaryParams) -> GZParams:
    """Identify chain parameters with sine-Gordon boundary parameters.

    The two sine-Gordon constraints are evaluated on the mapped values and
    stored as diagnostics; they are not expected to vanish identically.
    """
    nu = bulk.nu
    vartheta = 1j * math.pi * (nu - 2 * derived.p_plus) / (2 * (nu - 1))
    eta = math.pi * (nu - 2 * derived.p_minus) / (2 * (nu - 1))
    xi_prime = math.pi * (nu - 2 * complex(bnd.xi)) / (2 * (nu - 1))
    k = -2j * complex(bnd.kappa)
    c1 = cmath.cos(eta) * cmath.cosh(vartheta) + cmath.cos(xi_prime) / k
    c2 = cmath.cos(eta) ** 2 + cmath.cosh(vartheta) ** 2 - 1 - 1 / k ** 2
    return GZParams(1.0 / (nu - 1), eta, vartheta, xi_prime, k, (c1, c2))


def gz_to_chain(gz: GZParams, bulk: BulkParams) -> tuple[complex, complex, complex, complex]:
    """Invert :func:`map_to_gz`, returning ``(p_plus, p_minus, xi, kappa)``."""
    nu = bulk.nu
    scale = 2 * (nu - 1) / math.pi
    p_plus = (nu - gz.vartheta * scale / 1j) / 2
    p_minus = (nu - gz.eta * scale) / 2
    xi = (nu - gz.xi_prime * scale) / 2
    kappa = gz.k_gz / -2j
    return p_plus, p_minus, xi, kappa


def kernel_window_ok(n: float, upper: float) -> bool:
    return 0.0 < n < upper


def check_kernel_window(p_plus: complex, p_minus: complex, bulk: BulkParams) -> None:
    """Require real ``p`` with ``0 < 2p + 1 < 2 nu``."""
    for name, p in (("p_plus", p_plus), ("p_minus", p_minus)):
        p = complex(p)
        if p.imag != 0:
            raise KernelWindowError(f"{name}={p} is complex; real values required")
        if not kernel_window_ok(2 * p.real + 1, 2 * bulk.nu):
            raise KernelWindowError(
                f"{name}={p.real} outside the kernel window (-1/2, nu - 1/2) = "
                f"(-0.5, {bulk.nu - 0.5}): kernel index 2p+1 must satisfy 0 < n < 2 nu")


__all__ = [
    "BulkParams", "BoundaryParams", "DerivedBoundary", "GZParams",
    "derive_pm_from_bare", "derive_bare_from_pm", "map_to_gz", "gz_to_chain",
    "barecon_residuals", "param_residuals", "check_kernel_window",
]
