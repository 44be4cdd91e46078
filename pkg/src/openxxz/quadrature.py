"""Quadrature on the half line for exponentially decaying integrands."""
from __future__ import annotations

import math
import warnings
from typing import Callable

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import QuadratureError

MARGIN = 5.0
MAX_CUTOFF = 2000.0


def cutoff_for(decay_rate: float, tol: float, margin: float = MARGIN) -> float:
    """Truncation point ``T = (ln(1/tol) + margin) / rate``."""
    if decay_rate <= 0:
        raise QuadratureError(f"decay rate must be positive, got {decay_rate}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    return (math.log(1 / tol) + margin) / decay_rate


EPSREL_FLOOR = 50 * np.finfo(float).eps


def _quad_real(f, a, b, epsabs):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, err = quad(f, a, b, epsabs=epsabs, epsrel=EPSREL_FLOOR, limit=200)
    for w in caught:
        # hitting the roundoff floor is fine; anything else means no convergence
        if "roundoff" not in str(w.message):
            raise QuadratureError(f"panel [{a:.3g}, {b:.3g}] did not converge: {w.message}")
    return value, err


def tail_bound(integrand, cutoff: float, decay_rate: float, samples: int = 64) -> float:
    """Bound on ``int_T^inf |f|`` from the envelope of ``f`` on ``[T, T + 1]``.

    Sampling a unit window rather than one point keeps oscillating
    integrands from hiding their envelope at a zero crossing.
    """
    window = np.linspace(cutoff, cutoff + 1.0, samples)
    peak = max(abs(complex(integrand(w))) for w in window)
    return peak * math.exp(decay_rate) / decay_rate


def quad_semi_infinite(integrand: Callable[[float], complex], decay_rate: float,
                       tol: float = 1e-13, panel_width: float = 2.0,
                       complex_valued: bool = False) -> tuple[complex | float, float]:
    """Integrate ``integrand`` over ``(0, infinity)``.

    ``|integrand(w)|`` is assumed to fall off like ``exp(-decay_rate w)``.
    The range is cut at ``T`` from :func:`cutoff_for`; the discarded tail is
    bounded by :func:`tail_bound` and must stay below ``tol/2``, otherwise
    ``T`` is doubled. Panels of fixed width go to adaptive Gauss-Kronrod
    separately for real and imaginary parts, so ``w = 0`` itself is never
    evaluated. Returns ``(value, err)`` with ``err`` the sum of the panel
    error estimates and the tail bound. Set ``complex_valued`` to integrate
    the imaginary part as well.
    """
    cutoff = cutoff_for(decay_rate, tol)
    while True:
        tail = tail_bound(integrand, cutoff, decay_rate)
        if not math.isfinite(tail):
            raise QuadratureError(f"integrand not finite at cutoff {cutoff:.3g}")
        if tail < tol / 2:
            break
        cutoff *= 2
        if cutoff > MAX_CUTOFF:
            raise QuadratureError(
                f"tail bound {tail:.3e} exceeds tol/2 = {tol / 2:.3e} even at cutoff {cutoff:.3g}")
    n_panels = max(1, math.ceil(cutoff / panel_width))
    edges = np.linspace(0.0, cutoff, n_panels + 1)
    per_panel = tol / (4 * n_panels)
    total, err = 0j, tail
    for a, b in zip(edges[:-1], edges[1:]):
        re, re_err = _quad_real(lambda w: complex(integrand(w)).real, a, b, per_panel)
        total += re
        err += re_err
        if complex_valued:
            im, im_err = _quad_real(lambda w: complex(integrand(w)).imag, a, b, per_panel)
            total += 1j * im
            err += im_err
    return (total if complex_valued else total.real), err
