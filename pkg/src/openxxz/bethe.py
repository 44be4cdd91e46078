"""Bethe ansatz equations: evaluation, solvers, and transfer-matrix eigenvalues.

Roots are stored in the symmetric variable in which the Bethe equations are
invariant under ``lambda_j -> -lambda_j`` and periodic under
``lambda_j -> lambda_j + i nu``. In that variable the transfer-matrix
eigenvalue is built from ``lambda_j - i/2`` (see :func:`lambda_from_roots`).
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ConvergenceError, PoleError
from .params import BulkParams, DerivedBoundary, check_kernel_window

ROOT_SHIFT = -0.5j
DUPLICATE_TOL = 1e-8
MAX_NEWTON = 200


@dataclass(frozen=True)
class QuantumNumbers:
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    def __len__(self):
        return len(self.values)

    @classmethod
    def consecutive(cls, m: int, start: int = 1) -> "QuantumNumbers":
        return cls(tuple(range(start, start + m)))


@dataclass
class BetheRoots:
    n_sites: int
    roots: np.ndarray
    derived: DerivedBoundary
    bulk: BulkParams
    quantum_numbers: QuantumNumbers | None = None
    converged: bool = False
    residual: float = field(default=float("nan"))

    def __post_init__(self):
        self.roots = np.asarray(self.roots, dtype=complex).ravel()

    @property
    def m_roots(self) -> int:
        return int(self.roots.size)

    def negated(self) -> "BetheRoots":
        return BetheRoots(self.n_sites, -self.roots, self.derived, self.bulk,
                          self.quantum_numbers, self.converged, self.residual)

    def to_record(self) -> dict:
        return {
            "nu": self.bulk.nu,
            "N": self.n_sites,
            "M": self.m_roots,
            "p_plus": _complex_record(self.derived.p_plus),
            "p_minus": _complex_record(self.derived.p_minus),
            "quantum_numbers": list(self.quantum_numbers.values) if self.quantum_numbers else None,
            "roots": [{"re": float(r.real), "im": float(r.imag)} for r in self.roots],
            "residual": float(self.residual),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "BetheRoots":
        bulk = BulkParams(float(rec["nu"]))
        derived = DerivedBoundary.from_pm(_complex_from(rec["p_plus"]), _complex_from(rec["p_minus"]))
        roots = np.array([complex(r["re"], r["im"]) for r in rec["roots"]], dtype=complex)
        qn = QuantumNumbers(rec["quantum_numbers"]) if rec.get("quantum_numbers") is not None else None
        state = cls(int(rec["N"]), roots, derived, bulk, qn)
        if roots.size != int(rec["M"]):
            raise ValueError(f"M={rec['M']} but {roots.size} roots given")
        state.residual = bae_residual(state)
        return state

    def to_json(self) -> str:
        return json.dumps(self.to_record(), sort_keys=True)


def _complex_record(z) -> float | dict:
    z = complex(z)
    if z.imag == 0:
        return z.real
    return {"re": z.real, "im": z.imag}


def _complex_from(v) -> complex:
    if isinstance(v, dict):
        return complex(v["re"], v["im"])
    return complex(v)


@dataclass(frozen=True)
class HoleState:
    sea: BetheRoots
    hole_rapidity: float

    def __post_init__(self):
        gaps = np.abs(self.sea.roots.real - self.hole_rapidity)
        if gaps.size and gaps.min() < DUPLICATE_TOL:
            raise ValueError(f"hole rapidity {self.hole_rapidity} coincides with a sea root")


# -- elementary functions ---------------------------------------------------


def e_fn(n: float, lam, bulk: BulkParams):
    """``sinh[mu(lam + i n/2)] / sinh[mu(lam - i n/2)]``."""
    mu = bulk.mu
    lam = np.asarray(lam, dtype=complex)
    den = np.sinh(mu * (lam - 0.5j * n))
    if np.any(np.abs(den) < 1e-300):
        raise PoleError(f"e_{n} has a pole at lambda={lam}")
    out = np.sinh(mu * (lam + 0.5j * n)) / den
    return out if out.ndim else complex(out)


def g_fn(n: float, lam, bulk: BulkParams):
    """``cosh[mu(lam + i n/2)] / cosh[mu(lam - i n/2)]``."""
    mu = bulk.mu
    lam = np.asarray(lam, dtype=complex)
    den = np.cosh(mu * (lam - 0.5j * n))
    if np.any(np.abs(den) < 1e-300):
        raise PoleError(f"g_{n} has a pole at lambda={lam}")
    out = np.cosh(mu * (lam + 0.5j * n)) / den
    return out if out.ndim else complex(out)


def _dlog_e(n, lam, mu):
    return mu * (1 / np.tanh(mu * (lam + 0.5j * n)) - 1 / np.tanh(mu * (lam - 0.5j * n)))


def _dlog_g(n, lam, mu):
    return mu * (np.tanh(mu * (lam + 0.5j * n)) - np.tanh(mu * (lam - 0.5j * n)))


def q_fn(n: float, lam, bulk: BulkParams):
    """Continuous real branch of ``pi + i log e_n(lam)`` for real ``lam``.

    The branch is odd in ``lam`` with ``q_n(0) = 0`` and satisfies
    ``e_n(lam) = -exp(-i q_n(lam))`` exactly. Requires ``0 < n < 2 nu``.
    """
    if not 0 < n < 2 * bulk.nu:
        raise ValueError(f"q_n needs 0 < n < 2 nu, got n={n}, nu={bulk.nu}")
    mu = bulk.mu
    lam = np.asarray(lam, dtype=float)
    return 2 * np.arctan(np.tanh(mu * lam) / math.tan(n * mu / 2))


def r_fn(n: float, lam, bulk: BulkParams):
    """Continuous real branch of ``i log g_n(lam)``; odd, requires ``0 < n < nu``."""
    if not 0 < n < bulk.nu:
        raise ValueError(f"r_n needs 0 < n < nu, got n={n}, nu={bulk.nu}")
    mu = bulk.mu
    lam = np.asarray(lam, dtype=float)
    return -2 * np.arctan(math.tan(n * mu / 2) * np.tanh(mu * lam))


def _dq(n, lam, mu):
    c = 1 / math.tan(n * mu / 2)
    # 2 c mu / (cosh^2 + c^2 sinh^2), divided through by cosh^2 to avoid overflow
    t = np.tanh(mu * np.asarray(lam, dtype=float))
    return 2 * c * mu * (1 - t * t) / (1 + c * c * t * t)


def _dr(n, lam, mu):
    c = math.tan(n * mu / 2)
    t = np.tanh(mu * np.asarray(lam, dtype=float))
    return -2 * c * mu * (1 - t * t) / (1 + c * c * t * t)


# -- residuals and counting function -----------------------------------------


def _bae_sides(roots: np.ndarray, n_sites: int, derived: DerivedBoundary, bulk: BulkParams):
    pp, pm = complex(derived.p_plus), complex(derived.p_minus)
    lam = roots[:, None]
    lhs = (g_fn(1, roots, bulk) * e_fn(1, roots, bulk) ** (2 * n_sites + 1)
           / (e_fn(2 * pm + 1, roots, bulk) * e_fn(2 * pp + 1, roots, bulk)))
    rhs = -np.prod(e_fn(2, lam - roots[None, :], bulk) * e_fn(2, lam + roots[None, :], bulk), axis=1)
    return np.atleast_1d(lhs), np.atleast_1d(rhs)


def bae_residual_vector(roots, n_sites: int, derived: DerivedBoundary, bulk: BulkParams) -> np.ndarray:
    roots = np.asarray(roots, dtype=complex).ravel()
    if roots.size == 0:
        return np.zeros(0, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        lhs, rhs = _bae_sides(roots, n_sites, derived, bulk)
        out = lhs / rhs - 1
    if not np.all(np.isfinite(out)):
        raise PoleError("Bethe equations evaluated at a pole")
    return out


def bae_residual(state: BetheRoots) -> float:
    """``max_i |LHS_i / RHS_i - 1|``; zero for the empty root set."""
    if state.m_roots == 0:
        return 0.0
    return float(np.max(np.abs(bae_residual_vector(state.roots, state.n_sites, state.derived, state.bulk))))


def _bae_log_jacobian(roots, n_sites, derived, bulk):
    """Jacobian of ``log LHS_i - log RHS_i`` with respect to the roots."""
    mu = bulk.mu
    pp, pm = complex(derived.p_plus), complex(derived.p_minus)
    diag = (_dlog_g(1, roots, mu) + (2 * n_sites + 1) * _dlog_e(1, roots, mu)
            - _dlog_e(2 * pm + 1, roots, mu) - _dlog_e(2 * pp + 1, roots, mu))
    diff = roots[:, None] - roots[None, :]
    summ = roots[:, None] + roots[None, :]
    m = roots.size
    eye = np.eye(m, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        d_diff = np.where(eye, 0, _dlog_e(2, diff, mu))
        d_sum = _dlog_e(2, summ, mu)
    # d/d lam_i of sum_j [log e2(l_i - l_j) + log e2(l_i + l_j)]
    row = d_diff.sum(axis=1) + d_sum.sum(axis=1) + np.diag(d_sum)
    jac = -(-d_diff + d_sum)
    jac[eye] = 0
    jac = jac.astype(complex)
    jac[eye] = diag - row
    return jac


def _check_real_pm(derived: DerivedBoundary):
    for name, p in (("p_plus", derived.p_plus), ("p_minus", derived.p_minus)):
        if complex(p).imag != 0:
            raise ValueError(f"{name}={p} is complex; the real counting function needs real p")


def counting_function(lam, state: BetheRoots):
    """Counting function ``h(lam)`` of a real root configuration."""
    _check_real_pm(state.derived)
    bulk, n = state.bulk, state.n_sites
    pp, pm = complex(state.derived.p_plus).real, complex(state.derived.p_minus).real
    roots = state.roots.real
    lam = np.asarray(lam, dtype=float)
    x = lam[..., None]
    total = ((2 * n + 1) * q_fn(1, lam, bulk) + r_fn(1, lam, bulk)
             - q_fn(2 * pp + 1, lam, bulk) - q_fn(2 * pm + 1, lam, bulk)
             - (q_fn(2, x - roots, bulk) + q_fn(2, x + roots, bulk)).sum(axis=-1))
    out = total / (2 * math.pi)
    return out if out.ndim else float(out)


def counting_derivative(lam, state: BetheRoots):
    """``dh/dlam`` at fixed roots."""
    _check_real_pm(state.derived)
    bulk, n = state.bulk, state.n_sites
    mu = bulk.mu
    pp, pm = complex(state.derived.p_plus).real, complex(state.derived.p_minus).real
    roots = state.roots.real
    lam = np.asarray(lam, dtype=float)
    x = lam[..., None]
    total = ((2 * n + 1) * _dq(1, lam, mu) + _dr(1, lam, mu)
             - _dq(2 * pp + 1, lam, mu) - _dq(2 * pm + 1, lam, mu)
             - (_dq(2, x - roots, mu) + _dq(2, x + roots, mu)).sum(axis=-1))
    out = total / (2 * math.pi)
    return out if out.ndim else float(out)


def counting_limit(n_sites: int, m_roots: int, derived: DerivedBoundary, bulk: BulkParams) -> float:
    """``h(+infinity)`` for ``m_roots`` finite real roots."""
    mu = bulk.mu
    pp, pm = complex(derived.p_plus).real, complex(derived.p_minus).real
    total = ((2 * n_sites + 1) * (math.pi - mu) - mu
             - (math.pi - mu * (2 * pp + 1)) - (math.pi - mu * (2 * pm + 1))
             - 2 * m_roots * (math.pi - 2 * mu))
    return total / (2 * math.pi)


# -- logarithmic solver -------------------------------------------------------


def _seed_roots(qn: np.ndarray, h_inf: float) -> np.ndarray:
    # invert the leading-order counting function 2N/pi (arctan e^{pi l} - pi/4)
    frac = qn / (max(h_inf, qn.max()) + 0.5)
    return np.log(np.tan(math.pi / 4 + math.pi / 4 * frac)) / math.pi


def solve_log_form(n_sites: int, qn: QuantumNumbers | Sequence[int], derived: DerivedBoundary,
                   bulk: BulkParams, seed: Sequence[float] | None = None,
                   tol: float = 1e-12, max_iter: int = MAX_NEWTON) -> BetheRoots:
    """Solve ``h(lam_i) = I_i`` for real positive roots by damped Newton iteration."""
    check_kernel_window(derived.p_plus, derived.p_minus, bulk)
    if not isinstance(qn, QuantumNumbers):
        qn = QuantumNumbers(tuple(qn))
    target = np.asarray(qn.values, dtype=float)
    m = target.size
    if m == 0:
        return BetheRoots(n_sites, np.zeros(0), derived, bulk, qn, True, 0.0)
    if np.any(target <= 0) or np.any(np.diff(target) <= 0):
        raise ValueError("quantum numbers must be positive and strictly increasing")
    h_inf = counting_limit(n_sites, m, derived, bulk)
    lam = (np.asarray(seed, dtype=float) if seed is not None else _seed_roots(target, h_inf)).copy()
    if lam.size != m:
        raise ValueError(f"seed has {lam.size} entries, expected {m}")
    mu = bulk.mu

    def system(x):
        st = BetheRoots(n_sites, x, derived, bulk)
        return counting_function(x, st) - target

    f = system(lam)
    norm = np.max(np.abs(f))
    for it in range(max_iter):
        st = BetheRoots(n_sites, lam, derived, bulk)
        diff = lam[:, None] - lam[None, :]
        summ = lam[:, None] + lam[None, :]
        jac = -(-_dq(2, diff, mu) + _dq(2, summ, mu)) / (2 * math.pi)
        diag = counting_derivative(lam, st) + (_dq(2, 0.0, mu) - _dq(2, 2 * lam, mu)) / (2 * math.pi)
        np.fill_diagonal(jac, diag)
        try:
            step = np.linalg.solve(jac, f)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"singular Jacobian at iteration {it}") from exc
        t = 1.0
        while True:
            trial = lam - t * step
            trial_f = system(trial)
            trial_norm = np.max(np.abs(trial_f))
            if np.all(np.isfinite(trial_f)) and (trial_norm < norm or trial_norm < 1e-13):
                break
            t *= 0.5
            if t < 1e-10:
                raise ConvergenceError(f"line search failed at iteration {it} (|F|={norm:.3e})")
        lam, f, norm = trial, trial_f, trial_norm
        if np.max(np.abs(t * step)) < tol and norm < 1e-10:
            break
    else:
        raise ConvergenceError(f"no convergence after {max_iter} iterations (|F|={norm:.3e})")
    order = np.argsort(lam)
    if np.any(lam <= 0) or np.any(np.diff(lam[order]) < DUPLICATE_TOL):
        raise ConvergenceError("root collision or non-positive root in the converged sea")
    state = BetheRoots(n_sites, lam, derived, bulk, qn, True)
    state.residual = bae_residual(state)
    return state


def find_vacancies(state: BetheRoots) -> list[float]:
    """Rapidities of unoccupied integer levels of ``h`` on ``(0, infinity)``."""
    from scipy.optimize import brentq

    h_inf = counting_limit(state.n_sites, state.m_roots, state.derived, state.bulk)
    occupied = set(state.quantum_numbers.values) if state.quantum_numbers else set()
    holes = []
    for level in range(1, int(math.floor(h_inf - 1e-12)) + 1):
        if level in occupied:
            continue
        hi = 1.0
        while counting_function(hi, state) < level:
            hi *= 2
            if hi > 1e4:
                break
        holes.append(brentq(lambda x: counting_function(x, state) - level, 0.0, hi, xtol=1e-14))
    return holes


# -- multiplicative solver for small chains ------------------------------------


def canonical_roots(roots: Iterable[complex], nu: float) -> np.ndarray:
    """Representative of a root set modulo permutations, ``lam -> -lam`` and ``lam -> lam + i nu``."""
    out = []
    for r in np.asarray(list(roots), dtype=complex):
        im = (r.imag + nu / 2) % nu - nu / 2
        if abs(im + nu / 2) < 1e-9:
            im = nu / 2
        r = complex(r.real, im)
        if r.real < -1e-10 or (abs(r.real) <= 1e-10 and r.imag < 0):
            r = -r
            im = (r.imag + nu / 2) % nu - nu / 2
            if abs(im + nu / 2) < 1e-9:
                im = nu / 2
            r = complex(r.real, im)
        out.append(complex(r.real + 0.0, r.imag + 0.0))
    out = np.array(out, dtype=complex)
    return out[np.lexsort((out.imag.round(8), out.real.round(8)))]


def is_degenerate(roots: np.ndarray, nu: float, tol: float = 1e-6) -> bool:
    """True if a root sits at a fixed point of ``lam -> -lam`` or two roots collide."""
    mu = math.pi / nu

    def vanishes(z):
        # sinh(mu z) = 0  <=>  z in i nu Z; cosh(mu z) = 0 <=> z in i nu (Z + 1/2)
        return abs(np.sinh(mu * z)) < tol

    for i, r in enumerate(roots):
        if vanishes(r) or abs(np.cosh(mu * r)) < tol:
            return True
        for s in roots[i + 1:]:
            if vanishes(r - s) or vanishes(r + s):
                return True
    return False


def _newton_multiplicative(x0, n_sites, derived, bulk, max_iter=MAX_NEWTON):
    x = np.asarray(x0, dtype=complex).copy()
    if x.size == 0:
        return x
    for _ in range(max_iter):
        try:
            f = bae_residual_vector(x, n_sites, derived, bulk)
        except PoleError:
            return None
        if np.max(np.abs(f)) < 1e-14:
            return x
        with np.errstate(all="ignore"):
            jac = (1 + f)[:, None] * _bae_log_jacobian(x, n_sites, derived, bulk)
        if not np.all(np.isfinite(jac)):
            return None
        try:
            step = np.linalg.solve(jac, f)
        except np.linalg.LinAlgError:
            return None
        x = x - step
        if np.max(np.abs(x.real)) > 50:
            return None
    try:
        ok = np.max(np.abs(bae_residual_vector(x, n_sites, derived, bulk))) < 1e-10
    except PoleError:
        return None
    return x if ok else None


def solve_all_small(n_sites: int, m_roots: int, derived: DerivedBoundary, bulk: BulkParams,
                    n_starts: int = 800, seed: int = 0, max_real: float = 6.0,
                    tol: float = 1e-8) -> list[BetheRoots]:
    """Multi-start complex Newton on the multiplicative equations for ``N <= 3``.

    Solutions are deduplicated modulo permutation, sign and the ``i nu``
    period; configurations with roots at the symmetric points ``0`` or
    ``i nu/2``, colliding roots, or roots escaping past ``|Re lam| > max_real``
    are discarded.
    """
    if n_sites > 3:
        raise ValueError(f"brute-force regime is N <= 3, got N={n_sites}")
    if not 0 <= m_roots <= n_sites:
        raise ValueError(f"M={m_roots} outside 0..{n_sites}")
    if m_roots == 0:
        return [BetheRoots(n_sites, np.zeros(0), derived, bulk, None, True, 0.0)]
    nu = bulk.nu
    rng = np.random.default_rng(seed)
    found: dict[tuple, BetheRoots] = {}
    for _ in range(n_starts):
        x0 = rng.uniform(-2.0, 2.0, m_roots) + 1j * rng.uniform(-nu / 2, nu / 2, m_roots)
        x = _newton_multiplicative(x0, n_sites, derived, bulk)
        if x is None or np.max(np.abs(x.real)) > max_real or is_degenerate(x, nu):
            continue
        canon = canonical_roots(x, nu)
        key = tuple(np.round(canon, 7))
        if key in found:
            continue
        state = BetheRoots(n_sites, canon, derived, bulk, None, True)
        state.residual = bae_residual(state)
        if state.residual <= tol:
            found[key] = state
    return [found[k] for k in sorted(found, key=lambda k: [(z.real, z.imag) for z in k])]


# -- transfer-matrix eigenvalue ----------------------------------------------


def boundary_coefficients(lam: complex, derived: DerivedBoundary, kappa: complex,
                          bulk: BulkParams) -> tuple[complex, complex, complex, complex]:
    """``(K1+, K1-, K4+, K4-)`` for trivial left and generic right boundary."""
    mu = bulk.mu
    sh = cmath.sinh
    pp, pm = complex(derived.p_plus), complex(derived.p_minus)
    k1m = -2j * kappa * cmath.exp(mu * lam) * sh(mu * (lam - 1j * pm)) * sh(mu * (lam - 1j * pp))
    k4m = (-2j * kappa * cmath.exp(mu * lam) * sh(mu * (lam + 1j * pm + 1j))
           * sh(mu * (lam + 1j * pp + 1j)) * sh(2 * mu * lam) / sh(1j * mu))
    k1p = cmath.exp(-mu * lam) * sh(2 * mu * (lam + 1j)) / sh(mu * (2 * lam + 1j))
    k4p = cmath.exp(-mu * lam) * sh(1j * mu) / sh(mu * (2 * lam + 1j))
    return k1p, k1m, k4p, k4m


def lambda_from_roots(lam: complex, state: BetheRoots, kappa: complex,
                      normalization: complex = 1.0, pole_tol: float = 1e-12) -> complex:
    """Transfer-matrix eigenvalue ``Lambda(lam)`` of a Bethe state.

    Roots enter shifted by ``-i/2`` from the symmetric variable used by the
    Bethe equations.
    """
    mu = state.bulk.mu
    sh = np.sinh
    n = state.n_sites
    k1p, k1m, k4p, k4m = boundary_coefficients(lam, state.derived, kappa, state.bulk)
    a = k1p * k1m * cmath.sinh(mu * (lam + 1j)) ** (2 * n)
    b = k4p * k4m * cmath.sinh(mu * lam) ** (2 * n)
    if state.m_roots:
        v = state.roots + ROOT_SHIFT
        den = sh(mu * (lam + v + 1j)) * sh(mu * (lam - v))
        if np.min(np.abs(den)) < pole_tol:
            raise PoleError(f"lambda={lam} is at a pole of the dressing factors")
        a *= np.prod(sh(mu * (lam + v)) * sh(mu * (lam - v - 1j)) / den)
        b *= np.prod(sh(mu * (lam + v + 2j)) * sh(mu * (lam - v + 1j)) / den)
    return complex(normalization * (a + b))


# -- comparison with the dense transfer matrix ---------------------------------

DEFAULT_PROBE_POINTS = (0.37 + 0.11j, -0.2 + 0.3j, 0.55 - 0.07j, 0.13 + 0.41j, -0.44 - 0.23j)


@dataclass
class SpectrumComparison:
    """Bethe states matched against joint transfer-matrix eigenvectors."""

    n_sites: int
    dimension: int
    states: list[BetheRoots]
    state_errors: list[float]
    matched_columns: list[int]
    coverage: float

    @property
    def soundness_error(self) -> float:
        return max(self.state_errors, default=0.0)


def joint_transfer_spectrum(n_sites: int, bnd, bulk: BulkParams,
                            points: Sequence[complex] = DEFAULT_PROBE_POINTS) -> np.ndarray:
    """Eigenvalues of ``t(lam)`` at each probe point, one row per common eigenvector.

    Eigenvectors come from a generic linear combination of the transfer
    matrices; since they commute, ``V^-1 t V`` is diagonal for each point.
    """
    from .algebra import SpinChainSpec, build_transfer_matrix

    spec = SpinChainSpec(n_sites, bulk, bnd)
    mats = [build_transfer_matrix(lam, spec) for lam in points]
    weights = np.exp(1j * np.arange(1, len(mats) + 1) * 0.731)
    combo = sum(w * m for w, m in zip(weights, mats))
    _, vecs = np.linalg.eig(combo)
    inv = np.linalg.inv(vecs)
    return np.array([np.diag(inv @ m @ vecs) for m in mats]).T


def compare_with_transfer(n_sites: int, bnd, bulk: BulkParams,
                          derived_sets: Sequence[DerivedBoundary],
                          points: Sequence[complex] = DEFAULT_PROBE_POINTS,
                          match_tol: float = 1e-8, seed: int = 0,
                          m_values: Sequence[int] | None = None) -> SpectrumComparison:
    """Solve all Bethe states for each reference set and match them to the spectrum."""
    table = joint_transfer_spectrum(n_sites, bnd, bulk, points)
    states, errors, matched = [], [], set()
    columns = []
    for derived in derived_sets:
        for m in (range(n_sites + 1) if m_values is None else m_values):
            for state in solve_all_small(n_sites, m, derived, bulk, seed=seed):
                vals = np.array([lambda_from_roots(lam, state, bnd.kappa) for lam in points])
                rel = np.max(np.abs(table - vals[None, :]), axis=1) / np.max(np.abs(vals))
                best = int(np.argmin(rel))
                states.append(state)
                errors.append(float(rel[best]))
                columns.append(best)
                if rel[best] <= match_tol:
                    matched.add(best)
    return SpectrumComparison(n_sites, table.shape[0], states, errors, columns,
                              len(matched) / table.shape[0])
