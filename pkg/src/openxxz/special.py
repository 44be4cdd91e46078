"""Complex log-Gamma and truncated infinite products of Gamma ratios."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import bernoulli, binom, loggamma, zeta

from .errors import PoleError

POLE_TOL = 1e-13
EPS = np.finfo(float).eps


def log_gamma_complex(z):
    """Principal branch of ``log Gamma(z)``; raises at non-positive integers."""
    arr = np.asarray(z, dtype=complex)
    near_int = np.abs(arr - np.round(arr.real))
    if np.any((arr.real < 0.5) & (near_int < POLE_TOL)):
        bad = arr[(arr.real < 0.5) & (near_int < POLE_TOL)]
        raise PoleError(f"log Gamma has a pole at z={bad.ravel()[0]}")
    out = loggamma(arr)
    return out if out.ndim else complex(out)


def bernoulli_polynomial(k: int, x):
    """``B_k(x)`` from the Bernoulli numbers."""
    b = bernoulli(k)
    x = np.asarray(x, dtype=complex)
    return sum(binom(k, j) * b[j] * x ** (k - j) for j in range(k + 1))


def _fsum_complex(values) -> complex:
    """Correctly rounded sum, so exactly paired factors cancel to zero."""
    v = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(v.real), math.fsum(v.imag))


@dataclass(frozen=True)
class LogProduct:
    value: complex
    tail: complex
    err: float
    n_max: int


def log_gamma_product(offsets: Sequence[complex], signs: Sequence[int], scale: float,
                      n_max: int = 200, tail_order: int = 12) -> LogProduct:
    """``sum_{n>=0} sum_j s_j log Gamma(scale n + b_j)`` for balanced factors.

    The first ``n_max`` terms are summed directly. The remainder uses the
    large-argument Stirling series, whose ``k``-th coefficient is
    ``(-1)^k sum_j s_j B_k(b_j) / (k (k-1) scale^(k-1))`` times
    ``n^(1-k)``; summing over ``n >= n_max`` gives Hurwitz zeta values.
    Requires ``sum s_j = 0`` and ``sum s_j b_j = 0`` and the quadratic moment
    to vanish too, so that the per-term log decays as ``1/n^2``.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    b = np.asarray(offsets, dtype=complex)
    s = np.asarray(signs, dtype=float)
    moments = [abs(np.sum(s * b ** k)) for k in range(3)]
    scale_ref = 1 + np.max(np.abs(b)) ** 2
    if max(moments) > 1e-12 * scale_ref:
        raise ValueError(f"Gamma factors are not balanced (moments {moments}); product diverges")
    n = np.arange(n_max)[:, None]
    terms = s * log_gamma_complex(scale * n + b[None, :])
    head = _fsum_complex(terms)
    tail = 0j
    last = 0.0
    for k in range(3, tail_order + 1):
        coeff = (-1) ** k * _fsum_complex(s * bernoulli_polynomial(k, b)) / (k * (k - 1) * scale ** (k - 1))
        term = coeff * zeta(k - 1, n_max)
        tail += term
        last = abs(term)
    roundoff = EPS * float(np.abs(terms).sum())
    return LogProduct(head + tail, tail, last + roundoff, n_max)


def raw_log_gamma_product(offsets: Sequence[complex], signs: Sequence[int], scale: float,
                          n_max: int) -> np.ndarray:
    """Partial sums of the log product for ``n < n_max`` without any tail model."""
    b = np.asarray(offsets, dtype=complex)
    s = np.asarray(signs, dtype=float)
    n = np.arange(n_max)[:, None]
    return np.cumsum((s * log_gamma_complex(scale * n + b[None, :])).sum(axis=1))
