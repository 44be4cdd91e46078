"""Boundary nonlocal charge built from quantum-group coproducts."""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import reduce
from math import comb

import numpy as np

from .algebra import SIGMA_MINUS, SIGMA_PLUS, _check_sites
from .params import BoundaryParams, BulkParams


@dataclass(frozen=True)
class CoproductGenerators:
    n_sites: int
    K_op: np.ndarray
    E_op: np.ndarray
    F_op: np.ndarray


def build_coproducts(n_sites: int, bulk: BulkParams) -> CoproductGenerators:
    """N-fold coproducts of ``K, E, F`` in the spin-1/2 representation.

    ``K -> q^{sigma_z/2}``, ``E -> sigma^+``, ``F -> sigma^-``; ``E`` and ``F``
    carry ``K^-1`` on the sites to their left and ``K`` to their right.
    """
    _check_sites(n_sites)
    half = cmath.exp(0.5j * bulk.mu)
    k1 = np.diag([half, 1 / half]).astype(complex)
    k1_inv = np.diag([1 / half, half]).astype(complex)

    def spread(op):
        return sum(reduce(np.kron, [k1_inv] * n + [op] + [k1] * (n_sites - n - 1))
                   for n in range(n_sites))

    k_op = reduce(np.kron, [k1] * n_sites)
    return CoproductGenerators(n_sites, k_op, spread(SIGMA_PLUS), spread(SIGMA_MINUS))


def build_q_charge(n_sites: int, bulk: BulkParams, bnd: BoundaryParams) -> np.ndarray:
    """Nonlocal charge ``q^{-1/2+theta} K E + q^{1/2-theta} K F - c K^2``."""
    gens = build_coproducts(n_sites, bulk)
    mu = bulk.mu
    k = gens.K_op
    c = cmath.exp(-1j * mu * complex(bnd.xi)) / (2 * complex(bnd.kappa) * cmath.sinh(1j * mu))
    return (cmath.exp(1j * mu * (-0.5 + bnd.theta)) * k @ gens.E_op
            + cmath.exp(1j * mu * (0.5 - bnd.theta)) * k @ gens.F_op
            - c * k @ k)


@dataclass(frozen=True)
class ChargeLevel:
    spin: float
    m_roots: int
    eigenvalue: complex
    multiplicity: int


def predicted_q_spectrum(n_sites: int, beta_gamma_sum: complex, bulk: BulkParams) -> list[ChargeLevel]:
    """Closed-form eigenvalues of the charge, one level per ``S^z``-type label ``s``.

    The level with label ``s`` corresponds to ``M = N/2 - s`` Bethe roots and
    has multiplicity ``C(N, M)``, the dimension of the fixed-magnetization
    sector. This is the count the dense eigensolver confirms.
    """
    mu = bulk.mu
    pref = -1j / cmath.sinh(1j * mu)
    levels = []
    for m in range(n_sites + 1):
        s = n_sites / 2 - m
        levels.append(ChargeLevel(s, m, pref * cmath.cosh(1j * mu * (complex(beta_gamma_sum) - 2 * s)),
                                  comb(n_sites, m)))
    return levels


def expand_levels(levels: list[ChargeLevel]) -> np.ndarray:
    return np.array([lv.eigenvalue for lv in levels for _ in range(lv.multiplicity)], dtype=complex)
