"""Dense matrix constructions for the open XXZ chain and brute-force algebra checks.

Tensor-order convention: site 1 is the leftmost tensor factor, and it is the
site coupled to the non-diagonal boundary ``K^-``. For two-site objects the
first factor is the "row" space of the 2x2 block layout, so
``R[(a, i), (b, j)]`` pairs auxiliary indices ``a, b`` with quantum indices
``i, j``.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
Nothing here assumes Hermiticity: with complex boundary parameters the
Hamiltonian and transfer matrix are non-normal.
"""
from __future__ import annotations

import cmath
import os
from dataclasses import dataclass
from functools import reduce
from typing import Literal

import numpy as np

from .errors import ConvergenceError, DimensionError
from .params import BoundaryParams, BulkParams, DerivedBoundary

DEFAULT_MAX_DIM = 1024  # 2**10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)

#: Two-site permutation operator.
PERMUTATION = np.eye(4, dtype=complex)[[0, 2, 1, 3]]


def max_dim() -> int:
    """Dense-matrix dimension cap, overridable through ``BB_MAX_DIM``."""
    raw = os.environ.get("BB_MAX_DIM")
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError as exc:
        raise DimensionError(f"BB_MAX_DIM must be an integer, got {raw!r}") from exc
    if value < 2:
        raise DimensionError(f"BB_MAX_DIM must be >= 2, got {value}")
    return value


def _check_sites(n_sites: int) -> None:
    if n_sites < 1:
        raise ValueError(f"n_sites must be positive, got {n_sites}")
    if 2 ** n_sites > max_dim():
        raise DimensionError(
            f"2^{n_sites} = {2 ** n_sites} exceeds the dense cap {max_dim()} (BB_MAX_DIM)")


@dataclass(frozen=True)
class SpinChainSpec:
    n_sites: int
    bulk: BulkParams
    boundary: BoundaryParams

    def __post_init__(self):
        _check_sites(self.n_sites)


def max_norm(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def normalized_residual(lhs: np.ndarray, rhs: np.ndarray, *factors: np.ndarray) -> float:
    """``max|lhs - rhs|`` divided by the product of the factors' max-norms."""
    scale = 1.0
    for f in factors:
        scale *= max_norm(f)
    if scale == 0.0:
        return max_norm(lhs - rhs)
    return max_norm(lhs - rhs) / scale


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    return normalized_residual(a @ b, b @ a, a, b)


def build_r_matrix(lam: complex, bulk: BulkParams,
                   reading: Literal["spin", "pauli"] = "spin") -> np.ndarray:
    """Six-vertex R-matrix on two spin-1/2 spaces.

    ``reading="spin"`` evaluates the diagonal blocks with ``sigma^z/2``
    (eigenvalues +-1/2), which gives a Yang-Baxter solution. ``"pauli"``
    uses eigenvalues +-1 and exists only as a negative control.
    """
    mu = bulk.mu
    s = {"spin": 0.5, "pauli": 1.0}[reading]
    up = cmath.sinh(mu * (lam + 0.5j + 1j * s))
    down = cmath.sinh(mu * (lam + 0.5j - 1j * s))
    hop = cmath.sinh(1j * mu)
    r = np.zeros((4, 4), dtype=complex)
    r[0, 0] = up
    r[1, 1] = down
    r[2, 2] = down
    r[3, 3] = up
    r[1, 2] = hop * cmath.exp(mu * lam)   # block (1,2) carries sigma^-
    r[2, 1] = hop * cmath.exp(-mu * lam)  # block (2,1) carries sigma^+
    return r


def build_k_minus(lam: complex, bulk: BulkParams, bnd: BoundaryParams) -> np.ndarray:
    """Generic reflection matrix ``K^-(lambda)``.

    ``bnd`` may be a :class:`DiagonalBoundary` to reach ``kappa = 0``.
    """
    mu = bulk.mu
    q = bulk.q
    xi, kappa, theta = complex(bnd.xi), complex(bnd.kappa), float(bnd.theta)
    off = cmath.sinh(2 * mu * lam)
    return np.array([
        [cmath.sinh(mu * (-lam + 1j * xi)) * cmath.exp(mu * lam), kappa * q ** theta * off],
        [kappa * q ** (-theta) * off, cmath.sinh(mu * (lam + 1j * xi)) * cmath.exp(-mu * lam)],
    ], dtype=complex)


@dataclass(frozen=True)
class DiagonalBoundary:
    """Boundary data with ``kappa = 0``; duck-types :class:`BoundaryParams`."""

    xi: complex
    kappa: complex = 0j
    theta: float = 0.0


def _three_space(r: np.ndarray, pair: tuple[int, int]) -> np.ndarray:
    """Embed a two-site operator into spaces ``pair`` of a three-site space."""
    i2 = IDENTITY2
    if pair == (0, 1):
        return np.kron(r, i2)
    if pair == (1, 2):
        return np.kron(i2, r)
    if pair == (0, 2):
        p23 = np.kron(i2, PERMUTATION)
        return p23 @ np.kron(r, i2) @ p23
    raise ValueError(pair)


def check_yang_baxter(lambda1: complex, lambda2: complex, bulk: BulkParams,
                      reading: Literal["spin", "pauli"] = "spin", r_builder=None) -> float:
    build = r_builder or (lambda lam: build_r_matrix(lam, bulk, reading))
    r12 = _three_space(build(lambda1 - lambda2), (0, 1))
    r13 = _three_space(build(lambda1), (0, 2))
    r23 = _three_space(build(lambda2), (1, 2))
    return normalized_residual(r12 @ r13 @ r23, r23 @ r13 @ r12, r12, r13, r23)


def check_reflection(lambda1: complex, lambda2: complex, bulk: BulkParams,
                     bnd: BoundaryParams, k_builder=None) -> float:
    """Normalized residual of the reflection equation for ``K^-``."""
    k_of = k_builder or (lambda lam: build_k_minus(lam, bulk, bnd))
    k1 = np.kron(k_of(lambda1), IDENTITY2)
    k2 = np.kron(IDENTITY2, k_of(lambda2))

    def r12(lam):
        return build_r_matrix(lam, bulk)

    def r21(lam):
        return PERMUTATION @ build_r_matrix(lam, bulk) @ PERMUTATION

    lhs = r12(lambda1 - lambda2) @ k1 @ r21(lambda1 + lambda2) @ k2
    rhs = k2 @ r12(lambda1 + lambda2) @ k1 @ r21(lambda1 - lambda2)
    return normalized_residual(lhs, rhs, r12(lambda1 - lambda2), k1, r21(lambda1 + lambda2), k2)


def embed_site_operator(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """``I x ... x op x ... x I`` with ``op`` at 1-based position ``site``."""
    if not 1 <= site <= n_sites:
        raise ValueError(f"site {site} outside 1..{n_sites}")
    _check_sites(n_sites)
    factors = [IDENTITY2] * n_sites
    factors[site - 1] = np.asarray(op, dtype=complex)
    return reduce(np.kron, factors)


def _apply_site_right(x: np.ndarray, op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """``x @ embed_site_operator(op, site, n_sites)`` without forming the embedding."""
    dim = x.shape[0]
    left = 2 ** (site - 1)
    right = 2 ** (n_sites - site)
    y = x.reshape(dim, left, 2, right)
    y = np.einsum("alir,ij->aljr", y, op)
    return y.reshape(dim, dim)


def _r_blocks(r: np.ndarray, aux_first: bool) -> list[list[np.ndarray]]:
    """Auxiliary-space 2x2 blocks of an R-matrix as 2x2 quantum operators.

    ``aux_first=True`` treats the first tensor factor of ``r`` as auxiliary
    (``R_{0n}``); otherwise the second factor is auxiliary (``R_{n0}``).
    """
    r4 = r.reshape(2, 2, 2, 2)  # (i, j, k, l): row (i j), column (k l)
    if aux_first:
        return [[r4[a, :, b, :] for b in range(2)] for a in range(2)]
    return [[r4[:, a, :, b] for b in range(2)] for a in range(2)]


def _block_times_site(blocks, site_blocks, site: int, n_sites: int):
    out = [[None, None], [None, None]]
    for a in range(2):
        for c in range(2):
            out[a][c] = (_apply_site_right(blocks[a][0], site_blocks[0][c], site, n_sites)
                         + _apply_site_right(blocks[a][1], site_blocks[1][c], site, n_sites))
    return out


def build_transfer_matrix(lam: complex, spec: SpinChainSpec, k_minus: np.ndarray | None = None) -> np.ndarray:
    """Open-chain transfer matrix ``tr_0 {M K^+ T K^- T^}`` with ``K^+ = I``.

    ``T = R_{0N} ... R_{01}`` and ``T^ = R_{10} ... R_{N0}``; the four
    auxiliary blocks of the double-row monodromy are tracked as
    ``2^N x 2^N`` operators.
    """
    n = spec.n_sites
    _check_sites(n)
    bulk = spec.bulk
    dim = 2 ** n
    r = build_r_matrix(lam, bulk)
    row = _r_blocks(r, aux_first=True)
    col = _r_blocks(r, aux_first=False)
    eye = np.eye(dim, dtype=complex)
    zero = np.zeros((dim, dim), dtype=complex)
    blocks = [[eye, zero], [zero, eye.copy()]]
    for site in range(n, 0, -1):
        blocks = _block_times_site(blocks, row, site, n)
    k = build_k_minus(lam, bulk, spec.boundary) if k_minus is None else k_minus
    blocks = [[blocks[a][0] * k[0, c] + blocks[a][1] * k[1, c] for c in range(2)] for a in range(2)]
    for site in range(1, n + 1):
        blocks = _block_times_site(blocks, col, site, n)
    q = bulk.q
    return q * blocks[0][0] + blocks[1][1] / q


def build_hamiltonian(spec: SpinChainSpec) -> np.ndarray:
    n = spec.n_sites
    if n < 2:
        raise ValueError(f"Hamiltonian needs N >= 2, got {n}")
    mu = spec.bulk.mu
    xi = complex(spec.boundary.xi)
    kappa = complex(spec.boundary.kappa)
    theta = float(spec.boundary.theta)
    ch, sh = cmath.cosh(1j * mu), cmath.sinh(1j * mu)

    def site(op, i):
        return embed_site_operator(op, i, n)

    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for i in range(1, n):
        h -= 0.25 * (site(SIGMA_X, i) @ site(SIGMA_X, i + 1)
                     + site(SIGMA_Y, i) @ site(SIGMA_Y, i + 1)
                     + ch * site(SIGMA_Z, i) @ site(SIGMA_Z, i + 1))
    h -= (n / 4) * ch * np.eye(2 ** n)
    h -= (sh / 4) * site(SIGMA_Z, n)
    sxi = cmath.sinh(1j * mu * xi)
    h += sh * cmath.cosh(1j * mu * xi) / (4 * sxi) * site(SIGMA_Z, 1)
    h -= kappa * sh / (2 * sxi) * (cmath.cosh(1j * mu * theta) * site(SIGMA_X, 1)
                                   + 1j * cmath.sinh(1j * mu * theta) * site(SIGMA_Y, 1))
    return h


def diagonalize(m: np.ndarray) -> np.ndarray:
    """All eigenvalues of a general complex matrix."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"square matrix required, got shape {m.shape}")
    if m.shape[0] > max_dim():
        raise DimensionError(f"dimension {m.shape[0]} exceeds cap {max_dim()}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    try:
        return np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        cond = np.linalg.cond(m)
        raise ConvergenceError(
            f"eigenvalue iteration failed (dim={m.shape[0]}, cond={cond:.3e}, "
            f"max|m|={max_norm(m):.3e})") from exc


def k_eigenvalues_closed_form(lam: complex, bulk: BulkParams, derived: DerivedBoundary,
                              kappa: complex) -> tuple[complex, complex]:
    mu = bulk.mu
    pp, pm = complex(derived.p_plus), complex(derived.p_minus)
    eps1 = -2j * kappa * cmath.sinh(mu * (lam + 1j * pp)) * cmath.sinh(mu * (lam + 1j * pm))
    eps2 = -2j * kappa * cmath.sinh(mu * (lam - 1j * pp)) * cmath.sinh(mu * (lam - 1j * pm))
    return eps1, eps2


def match_multisets(a, b) -> float:
    """Largest distance in a greedy nearest-neighbour pairing of two equal-size multisets."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.size != b.size:
        return float("inf")
    used = np.zeros(b.size, dtype=bool)
    worst = 0.0
    for x in a[np.argsort(-np.abs(a))]:
        d = np.abs(b - x)
        d[used] = np.inf
        j = int(np.argmin(d))
        used[j] = True
        worst = max(worst, float(d[j]))
    return worst
