import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from openxxz.errors import BranchCutError, KernelWindowError, PoleError
from openxxz.params import (BoundaryParams, BulkParams, DerivedBoundary, barecon_residuals,
                            check_kernel_window, derive_bare_from_pm, derive_pm_from_bare,
                            gz_to_chain, map_to_gz, param_residuals)


def test_bulk_requires_nu_above_two():
    with pytest.raises(ValueError):
        BulkParams(2.0)
    with pytest.raises(ValueError):
        BulkParams(float("nan"))
    assert BulkParams(4.0).mu == pytest.approx(math.pi / 4)
    assert BulkParams(4.0).mu_renormalized == pytest.approx(math.pi / 3)


def test_kappa_must_be_nonzero():
    with pytest.raises(ValueError):
        BoundaryParams(0.3, 0.0)


def test_bare_from_pm_satisfies_defining_relations(bulk):
    bnd = derive_bare_from_pm(0.8, 1.3, bulk)
    derived = DerivedBoundary.from_pm(0.8, 1.3)
    assert max(param_residuals(derived, bnd, bulk)) < 1e-13
    assert max(barecon_residuals(derived, bnd, bulk)) < 1e-13


def test_bare_from_pm_invariant_under_swap_and_sign(bulk):
    ref = derive_bare_from_pm(0.8, 1.3, bulk)
    for pp, pm in ((1.3, 0.8), (-0.8, -1.3), (-1.3, -0.8)):
        other = derive_bare_from_pm(pp, pm, bulk)
        assert abs(other.xi - ref.xi) < 1e-13
        assert abs(other.kappa - ref.kappa) < 1e-13


def test_dual_flips_signs():
    d = DerivedBoundary.from_pm(0.8, 1.3).dual()
    assert (d.p_plus, d.p_minus, d.beta_gamma_sum, d.zeta) == (-0.8, -1.3, -2.1, pytest.approx(0.5))


def test_real_p_marks_branch_ambiguity(bulk, boundary):
    d = derive_pm_from_bare(boundary, bulk)
    assert d.branch_ambiguous
    with pytest.raises(BranchCutError):
        derive_pm_from_bare(boundary, bulk, strict=True)


def test_generic_complex_boundary_is_unambiguous(bulk):
    d = derive_pm_from_bare(BoundaryParams(0.3 + 0.2j, 0.7 - 0.4j), bulk, strict=True)
    assert not d.branch_ambiguous
    assert max(param_residuals(d, BoundaryParams(0.3 + 0.2j, 0.7 - 0.4j), bulk)) < 1e-13


def test_kappa_pole_reported(bulk):
    # cos(mu (p+ + p-)) = 0 at p+ + p- = nu/2
    with pytest.raises(PoleError):
        derive_bare_from_pm(1.0, bulk.nu / 2 - 1.0, bulk)


@settings(max_examples=60, deadline=None)
@given(xr=st.floats(-1.5, 1.5), xi_im=st.floats(-1, 1),
       kr=st.floats(-2, 2), ki=st.floats(-2, 2))
def test_round_trip_property(xr, xi_im, kr, ki):
    bulk = BulkParams(3.7)
    if abs(complex(kr, ki)) < 0.05:
        return
    bnd = BoundaryParams(complex(xr, xi_im), complex(kr, ki))
    d = derive_pm_from_bare(bnd, bulk)
    back = derive_bare_from_pm(d.p_plus, d.p_minus, bulk)
    scale = 1 + abs(bnd.kappa)
    assert abs(back.xi - bnd.xi) < 1e-10
    assert abs(back.kappa - bnd.kappa) < 1e-10 * scale
    r1, r2 = barecon_residuals(d, bnd, bulk)
    assert r1 < 1e-10 * scale and r2 < 1e-10 * (1 + abs(1 / bnd.kappa) ** 2)


def test_gz_map_inverts(bulk, boundary, derived):
    gz = map_to_gz(bulk, derived, boundary)
    assert gz.lambda_gz == pytest.approx(1 / (bulk.nu - 1))
    pp, pm, xi, kappa = gz_to_chain(gz, bulk)
    assert abs(pp - derived.p_plus) < 1e-13
    assert abs(pm - derived.p_minus) < 1e-13
    assert abs(xi - boundary.xi) < 1e-13
    assert abs(kappa - boundary.kappa) < 1e-13
    assert all(np.isfinite(abs(r)) for r in gz.constraint_residuals)


def test_kernel_window(bulk):
    check_kernel_window(0.8, 1.3, bulk)
    with pytest.raises(KernelWindowError, match="window"):
        check_kernel_window(-0.6, 1.3, bulk)
    with pytest.raises(KernelWindowError, match="window"):
        check_kernel_window(0.8, bulk.nu - 0.4, bulk)
    with pytest.raises(KernelWindowError, match="complex"):
        check_kernel_window(0.8 + 0.1j, 1.3, bulk)


def test_param_residual_formula_matches_cosh(bulk):
    d = DerivedBoundary.from_pm(0.4, 0.9)
    bnd = derive_bare_from_pm(0.4, 0.9, bulk)
    lhs = cmath.exp(-1j * bulk.mu * bnd.xi) / (2 * bnd.kappa)
    assert abs(lhs - 1j * cmath.cosh(1j * bulk.mu * d.beta_gamma_sum)) < 1e-13
