import cmath
from functools import reduce

import numpy as np
import pytest

from openxxz import algebra
from openxxz.algebra import (IDENTITY2, PERMUTATION, SIGMA_Z, DiagonalBoundary, SpinChainSpec,
                             build_hamiltonian, build_k_minus, build_r_matrix,
                             build_transfer_matrix, check_reflection, check_yang_baxter,
                             commutator_norm, diagonalize, embed_site_operator,
                             k_eigenvalues_closed_form, match_multisets)
from openxxz.errors import DimensionError
from openxxz.params import BoundaryParams, BulkParams


def _full_transfer(lam, n_sites, bulk, bnd):
    """Transfer matrix with the auxiliary space as an explicit tensor factor."""
    r4 = build_r_matrix(lam, bulk).reshape(2, 2, 2, 2)
    dim = 2 ** n_sites
    units = [[np.outer(np.eye(2)[a], np.eye(2)[b]) for b in range(2)] for a in range(2)]

    def site_op(op, n):
        return reduce(np.kron, [op if k == n else IDENTITY2 for k in range(1, n_sites + 1)])

    def r_aux_site(n):
        return sum(np.kron(units[a][b], site_op(r4[a, :, b, :], n)) for a in range(2) for b in range(2))

    def r_site_aux(n):
        return sum(np.kron(units[a][b], site_op(r4[:, a, :, b], n)) for a in range(2) for b in range(2))

    mono = reduce(np.matmul, [r_aux_site(n) for n in range(n_sites, 0, -1)])
    mono_hat = reduce(np.matmul, [r_site_aux(n) for n in range(1, n_sites + 1)])
    k_full = np.kron(build_k_minus(lam, bulk, bnd), np.eye(dim))
    x = mono @ k_full @ mono_hat
    q = bulk.q
    return q * x[:dim, :dim] + x[dim:, dim:] / q


def test_r_matrix_entries(bulk):
    lam = 0.3 + 0.1j
    r = build_r_matrix(lam, bulk)
    mu = bulk.mu
    assert r[0, 0] == pytest.approx(cmath.sinh(mu * (lam + 1j)))
    assert r[1, 1] == pytest.approx(cmath.sinh(mu * lam))
    assert r[1, 2] == pytest.approx(cmath.sinh(1j * mu) * cmath.exp(mu * lam))
    assert r[2, 1] == pytest.approx(cmath.sinh(1j * mu) * cmath.exp(-mu * lam))


def test_r_at_zero_is_permutation(bulk):
    r0 = build_r_matrix(0.0, bulk)
    assert np.allclose(r0, cmath.sinh(1j * bulk.mu) * PERMUTATION, atol=1e-15)


def test_k_at_zero_is_scalar(bulk, boundary):
    k0 = build_k_minus(0.0, bulk, boundary)
    assert np.allclose(k0, k0[0, 0] * IDENTITY2, atol=1e-15)


def test_yang_baxter_spin_reading(bulk, rng):
    for a, b in rng.uniform(-1, 1, (20, 2)) + 1j * rng.uniform(-1, 1, (20, 2)):
        assert check_yang_baxter(a, b, bulk) < 1e-13


def test_yang_baxter_pauli_reading_fails(bulk):
    assert check_yang_baxter(0.3 + 0.1j, -0.2 + 0.4j, bulk, reading="pauli") > 1e-3


def test_reflection_equation_generic_and_theta(bulk, rng):
    for theta in (0.0, 0.37):
        bnd = BoundaryParams(0.4 + 0.1j, 0.7 - 0.2j, theta)
        for a, b in rng.uniform(-1, 1, (10, 2)) + 1j * rng.uniform(-1, 1, (10, 2)):
            assert check_reflection(a, b, bulk, bnd) < 1e-13


def test_reflection_detects_wrong_k(bulk):
    def broken(lam):
        k = build_k_minus(lam, bulk, BoundaryParams(0.4, 0.7))
        k[0, 0] *= 1.5  # rescaling an off-diagonal entry would only shift theta
        return k

    assert check_reflection(0.3, -0.2 + 0.1j, bulk, None, k_builder=broken) > 1e-6


@pytest.mark.parametrize("n_sites", [1, 2, 3, 4])
def test_transfer_matches_full_tensor_oracle(bulk, boundary, n_sites):
    lam = 0.37 - 0.21j
    fast = build_transfer_matrix(lam, SpinChainSpec(n_sites, bulk, boundary))
    slow = _full_transfer(lam, n_sites, bulk, boundary)
    assert np.max(np.abs(fast - slow)) / np.max(np.abs(slow)) < 1e-13


@pytest.mark.parametrize("n_sites", [2, 3, 4, 5, 6])
def test_transfer_matrices_commute(bulk, boundary, n_sites):
    spec = SpinChainSpec(n_sites, bulk, boundary)
    t1 = build_transfer_matrix(0.3 + 0.2j, spec)
    t2 = build_transfer_matrix(-0.45 + 0.05j, spec)
    assert commutator_norm(t1, t2) < 1e-12


@pytest.mark.parametrize("n_sites", [2, 3, 4])
def test_hamiltonian_commutes_with_transfer(bulk, boundary, n_sites):
    spec = SpinChainSpec(n_sites, bulk, boundary)
    assert commutator_norm(build_hamiltonian(spec), build_transfer_matrix(0.21 - 0.3j, spec)) < 1e-12


def test_theta_keeps_commutation(bulk):
    spec = SpinChainSpec(3, bulk, BoundaryParams(0.4 + 0.1j, 0.7 - 0.2j, 0.3))
    t1 = build_transfer_matrix(0.3, spec)
    assert commutator_norm(t1, build_transfer_matrix(-0.5, spec)) < 1e-12
    assert commutator_norm(build_hamiltonian(spec), t1) < 1e-12


def test_diagonal_boundary_conserves_magnetization(bulk):
    n = 3
    t = build_transfer_matrix(0.3 + 0.1j, SpinChainSpec(n, bulk, DiagonalBoundary(0.4 + 0.2j)))
    sz_total = sum(embed_site_operator(SIGMA_Z, k, n) for k in range(1, n + 1))
    assert commutator_norm(t, sz_total) < 1e-13
    generic = build_transfer_matrix(0.3 + 0.1j, SpinChainSpec(n, bulk, BoundaryParams(0.4 + 0.2j, 0.5)))
    assert commutator_norm(generic, sz_total) > 1e-6


def test_hamiltonian_local_terms(bulk):
    # with a diagonal boundary the two-site chain conserves total S^z
    spec = SpinChainSpec(2, bulk, DiagonalBoundary(0.4 + 0.2j))
    h = build_hamiltonian(spec)
    assert h.shape == (4, 4)
    assert abs(h[0, 1]) < 1e-15 and abs(h[0, 2]) < 1e-15


def test_k_eigenvalues_closed_form(bulk, boundary, derived):
    lam = 0.23 + 0.4j
    eps1, eps2 = k_eigenvalues_closed_form(lam, bulk, derived, boundary.kappa)
    numeric = np.linalg.eigvals(build_k_minus(lam, bulk, boundary))
    assert match_multisets(numeric, [eps1, eps2]) < 1e-12 * max(abs(eps1), abs(eps2))


def test_embed_site_operator_order():
    op = np.array([[1, 2], [3, 4]], dtype=complex)
    full = embed_site_operator(op, 1, 2)
    assert np.allclose(full, np.kron(op, IDENTITY2))


def test_dimension_cap(monkeypatch, bulk, boundary):
    monkeypatch.setenv("BB_MAX_DIM", "8")
    with pytest.raises(DimensionError, match="BB_MAX_DIM"):
        SpinChainSpec(4, bulk, boundary)
    monkeypatch.setenv("BB_MAX_DIM", "nonsense")
    with pytest.raises(DimensionError):
        algebra.max_dim()


def test_diagonalize_rejects_bad_input():
    with pytest.raises(ValueError):
        diagonalize(np.ones((2, 3)))
    with pytest.raises(ValueError):
        diagonalize(np.array([[np.nan, 0], [0, 1]]))


def test_match_multisets_size_mismatch():
    assert match_multisets([1, 2], [1]) == float("inf")
    assert match_multisets([1, 2, 2], [2, 1, 2]) == 0.0
