"""Command-line entry point: verification suites, amplitude sweeps, and reports.

Exit status is 0 when every pass/fail check passes, 1 when any fails and 2 on
configuration errors. Diagnostics never change the exit status.
"""
from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path
from typing import Callable

import numpy as np

from . import algebra, bethe, charge, params, smatrix
from .config import RunConfig, build_config, load_config_file
from .errors import ConfigError, KernelWindowError, OpenXXZError
from .report import Report, dumps, write_report, write_rows

DEFAULT_SITES = {"verify-algebra": 6, "spectrum": 2, "charge": 4, "density": 201, "amplitude": None,
                 "map-params": None}
HAMILTONIAN_MAX_SITES = 4
CLOSED_FORM_TOL = 1e-10
AMPLITUDE_COLUMNS = ["lambda_tilde", "nu", "p_plus", "p_minus", "re", "im", "method", "err"]


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def _random_points(rng: np.random.Generator, count: int) -> np.ndarray:
    return rng.uniform(-1, 1, count) + 1j * rng.uniform(-1, 1, count)


# -- suites -------------------------------------------------------------------


def cmd_verify_algebra(cfg: RunConfig) -> Report:
    """Yang-Baxter, reflection, regularity and commutation checks."""
    bulk = cfg.bulk
    bnd, _ = cfg.boundary()
    n_max = cfg.n_sites or DEFAULT_SITES["verify-algebra"]
    rng = np.random.default_rng(cfg.seed)
    report = Report("verify-algebra", cfg.as_record())

    with _Timer() as t:
        pairs = list(zip(_random_points(rng, cfg.n_points), _random_points(rng, cfg.n_points)))
        ybe = max(algebra.check_yang_baxter(a, b, bulk) for a, b in pairs)
    report.threshold_check("yang_baxter_max_residual", ybe, cfg.algebra_tol, t.elapsed)

    with _Timer() as t:
        pairs = list(zip(_random_points(rng, cfg.n_points), _random_points(rng, cfg.n_points)))
        refl = max(algebra.check_reflection(a, b, bulk, bnd) for a, b in pairs)
    report.threshold_check("reflection_max_residual", refl, cfg.algebra_tol, t.elapsed)

    with _Timer() as t:
        r0 = algebra.build_r_matrix(0.0, bulk)
        hop = complex(np.sinh(1j * bulk.mu))
        r_reg = algebra.normalized_residual(r0, hop * algebra.PERMUTATION, r0)
        k0 = algebra.build_k_minus(0.0, bulk, bnd)
        k_reg = algebra.normalized_residual(k0, k0[0, 0] * algebra.IDENTITY2, k0)
    report.threshold_check("r_matrix_regularity", r_reg, cfg.algebra_tol, t.elapsed)
    report.threshold_check("k_matrix_at_zero_scalar", k_reg, cfg.algebra_tol)

    for n in range(2, n_max + 1):
        spec = algebra.SpinChainSpec(n, bulk, bnd)
        with _Timer() as t:
            a, b = _random_points(rng, 2)
            comm = algebra.commutator_norm(algebra.build_transfer_matrix(a, spec),
                                           algebra.build_transfer_matrix(b, spec))
        report.threshold_check(f"transfer_commutator_N{n}", comm, cfg.commutator_tol, t.elapsed)
    for n in range(2, min(n_max, HAMILTONIAN_MAX_SITES) + 1):
        spec = algebra.SpinChainSpec(n, bulk, bnd)
        with _Timer() as t:
            lam = _random_points(rng, 1)[0]
            comm = algebra.commutator_norm(algebra.build_hamiltonian(spec),
                                           algebra.build_transfer_matrix(lam, spec))
        report.threshold_check(f"hamiltonian_transfer_commutator_N{n}", comm, cfg.commutator_tol,
                               t.elapsed)

    a, b = _random_points(rng, 2)
    report.diagnostic("yang_baxter_residual_pauli_reading",
                      algebra.check_yang_baxter(a, b, bulk, reading="pauli"))
    return report


def cmd_spectrum(cfg: RunConfig) -> tuple[Report, list[dict]]:
    """Bethe states against the dense transfer-matrix spectrum."""
    bulk = cfg.bulk
    bnd, derived = cfg.boundary()
    n = cfg.n_sites or DEFAULT_SITES["spectrum"]
    if n > 3:
        raise ConfigError(f"spectrum brute-force solver handles N <= 3, got N={n}")
    if cfg.m_roots is not None and not 0 <= cfg.m_roots <= n:
        raise ConfigError(f"m_roots={cfg.m_roots} outside 0..{n}")
    m_values = [cfg.m_roots] if cfg.m_roots is not None else list(range(n + 1))
    report = Report("spectrum", cfg.as_record())

    with _Timer() as t:
        comp = bethe.compare_with_transfer(n, bnd, bulk, [derived, derived.dual()],
                                           match_tol=cfg.bae_tol, seed=cfg.seed, m_values=m_values)
    report.threshold_check("soundness_max_relative_error", comp.soundness_error, cfg.bae_tol, t.elapsed,
                           detail=f"{len(comp.states)} Bethe states at {len(bethe.DEFAULT_PROBE_POINTS)}"
                                  " spectral points")
    report.diagnostic("coverage_fraction", comp.coverage,
                      detail=f"{comp.dimension} eigenvectors; reference sets p and -p")
    residuals = [s.residual for s in comp.states]
    report.diagnostic("max_bae_residual", max(residuals, default=0.0))
    report.diagnostic("state_count", len(comp.states))
    vacuum = bethe.BetheRoots(n, np.zeros(0), derived, bulk)
    table = bethe.joint_transfer_spectrum(n, bnd, bulk)
    vals = np.array([bethe.lambda_from_roots(lam, vacuum, bnd.kappa) for lam in bethe.DEFAULT_PROBE_POINTS])
    best = int(np.argmin(np.max(np.abs(table - vals), axis=1)))
    report.diagnostic("vacuum_normalization_ratio", complex(table[best, 0] / vals[0]))
    return report, [s.to_record() for s in comp.states]


def _amplitude_row(lam, cfg, derived, value, method, err):
    return {"lambda_tilde": float(lam), "nu": cfg.nu,
            "p_plus": float(complex(derived.p_plus).real), "p_minus": float(complex(derived.p_minus).real),
            "re": float(value.real), "im": float(value.imag), "method": method, "err": float(err)}


def cmd_amplitude(cfg: RunConfig) -> tuple[Report, dict[str, list[dict]]]:
    """Both representations of the reflection amplitudes over the rapidity grid."""
    bulk = cfg.bulk
    bnd, derived = cfg.boundary()
    if not derived.is_real:
        raise ConfigError("amplitudes need real p_plus, p_minus")
    pp, pm = complex(derived.p_plus).real, complex(derived.p_minus).real
    try:
        params.check_kernel_window(pp, pm, bulk)
    except KernelWindowError as exc:
        raise ConfigError(str(exc)) from exc
    kappa = complex(bnd.kappa)
    report = Report("amplitude", cfg.as_record())
    rows: dict[str, list[dict]] = {"k0": [], "k1_p_plus": [], "k1_p_minus": [], "k1_full": [],
                                   "k2_over_k1": []}
    diffs = {key: 0.0 for key in ("k0", "k1_p_plus", "k1_p_minus", "k1_full")}
    bounded, total = 0, 0
    unimodular_k0, unimodular_ratio, ratio_vs_eigen = 0.0, 0.0, 0.0
    with _Timer() as t:
        for lam in cfg.grid.points():
            pairs = {
                "k0": (smatrix.k0_integral(lam, bulk), smatrix.k0_gamma(lam, bulk)),
                "k1_p_plus": (smatrix.k1_integral(lam, pp, kappa, bulk),
                              smatrix.k1_gamma(lam, pp, kappa, bulk)),
                "k1_p_minus": (smatrix.k1_integral(lam, pm, kappa, bulk),
                               smatrix.k1_gamma(lam, pm, kappa, bulk)),
                "k1_full": (smatrix.k1_full(lam, derived, kappa, bulk, "integral"),
                            smatrix.k1_full(lam, derived, kappa, bulk, "gamma_product")),
            }
            for key, (a, b) in pairs.items():
                gap = abs(a.value - b.value)
                diffs[key] = max(diffs[key], gap)
                total += 1
                bounded += gap <= a.err_estimate + b.err_estimate
                for amp in (a, b):
                    rows[key].append(_amplitude_row(lam, cfg, derived, amp.value, amp.method,
                                                    amp.err_estimate))
            ratio = smatrix.k2_over_k1(lam, derived, bulk)
            rows["k2_over_k1"].append(_amplitude_row(lam, cfg, derived, ratio, "closed_form", 0.0))
            unimodular_k0 = max(unimodular_k0, abs(abs(pairs["k0"][0].value) - 1))
            unimodular_ratio = max(unimodular_ratio, abs(abs(ratio) - 1))
            ratio_vs_eigen = max(ratio_vs_eigen,
                                 abs(ratio - smatrix.renormalized_eigenvalue_ratio(lam, derived, bulk)))
    for key, gap in diffs.items():
        report.threshold_check(f"{key}_cross_method_max", gap, cfg.amp_tol,
                               t.elapsed if key == "k0" else 0.0)
    report.threshold_check("k0_unimodular_max_deviation", unimodular_k0, CLOSED_FORM_TOL)
    report.threshold_check("k2_over_k1_unimodular_max_deviation", unimodular_ratio, CLOSED_FORM_TOL)
    report.threshold_check("k0_at_zero", abs(smatrix.k0_integral(0.0, bulk).value - 1), CLOSED_FORM_TOL)
    report.threshold_check("k2_over_k1_at_zero", abs(smatrix.k2_over_k1(0.0, derived, bulk) - 1),
                           CLOSED_FORM_TOL)
    for name, x in (("p_plus", pp), ("p_minus", pm)):
        closed = smatrix.k1_zero_closed_form(x, kappa, bulk)
        worst = max(abs(smatrix.k1_integral(0.0, x, kappa, bulk).value - closed),
                    abs(smatrix.k1_gamma(0.0, x, kappa, bulk).value - closed)) / abs(closed)
        report.threshold_check(f"k1_at_zero_closed_form_{name}", worst, CLOSED_FORM_TOL)
    report.diagnostic("error_estimate_coverage", bounded / total,
                      detail="fraction of grid points where estimates bound the cross-method gap")
    report.diagnostic("k2_over_k1_vs_renormalized_eigenvalue_ratio", ratio_vs_eigen)
    trend = smatrix.diagonal_limit_trend(1.0, pp, bulk)
    moduli = [p.modulus for p in trend]
    monotone = all(b <= a + 1e-12 for a, b in zip(moduli, moduli[1:])) or \
        all(b >= a - 1e-12 for a, b in zip(moduli, moduli[1:]))
    report.diagnostic("diagonal_limit_trend_moduli", moduli,
                      detail=f"x = p_plus + i y, y = {[p.imag_shift for p in trend]}; monotone={monotone}")
    return report, rows


def cmd_charge(cfg: RunConfig) -> Report:
    """Nonlocal charge spectrum against the closed-form levels."""
    bulk = cfg.bulk
    bnd, derived = cfg.boundary()
    n_max = cfg.n_sites or DEFAULT_SITES["charge"]
    report = Report("charge", cfg.as_record())
    for n in range(1, n_max + 1):
        with _Timer() as t:
            q = charge.build_q_charge(n, bulk, bnd)
            levels = charge.predicted_q_spectrum(n, derived.beta_gamma_sum, bulk)
            gap = algebra.match_multisets(algebra.diagonalize(q), charge.expand_levels(levels))
        report.threshold_check(f"q_spectrum_match_N{n}", gap, cfg.charge_tol, t.elapsed)
        if n == 1:
            report.diagnostic("q_levels_N1", [lv.eigenvalue for lv in levels],
                              detail="spin label s = +1/2, -1/2")
        if n >= 2:
            spec = algebra.SpinChainSpec(n, bulk, bnd)
            lam = 0.31 + 0.17j
            report.diagnostic(f"q_transfer_commutator_N{n}",
                              algebra.commutator_norm(q, algebra.build_transfer_matrix(lam, spec)))
            if n <= HAMILTONIAN_MAX_SITES:
                report.diagnostic(f"q_hamiltonian_commutator_N{n}",
                                  algebra.commutator_norm(q, algebra.build_hamiltonian(spec)))
    return report


def density_discrepancy(n_sites: int, derived, bulk, window: float = 1.0) -> tuple[float, int]:
    """Sup-norm relative gap between the empirical and predicted root densities.

    The ground-state sea is ``I = 1..floor(N/2)``; the empirical density at the
    midpoint of neighbouring roots is ``1 / (N * spacing)``. Returns the gap
    and the number of window points.
    """
    m = n_sites // 2
    sea = bethe.solve_log_form(n_sites, bethe.QuantumNumbers.consecutive(m), derived, bulk)
    roots = np.sort(sea.roots.real)
    mids = (roots[1:] + roots[:-1]) / 2
    empirical = 1 / (n_sites * np.diff(roots))
    inside = mids <= window
    predicted = np.array([smatrix.density(x, None, n_sites, derived, bulk) for x in mids[inside]])
    return float(np.max(np.abs(empirical[inside] / predicted - 1))), int(inside.sum())


def cmd_density(cfg: RunConfig) -> Report:
    """Large-N ground-state sea against the Fourier-space density."""
    bulk = cfg.bulk
    _, derived = cfg.boundary()
    try:
        params.check_kernel_window(derived.p_plus, derived.p_minus, bulk)
    except KernelWindowError as exc:
        raise ConfigError(str(exc)) from exc
    n = cfg.n_sites or DEFAULT_SITES["density"]
    smaller = (n + 1) // 2
    if smaller % 2 == 0:
        smaller += 1
    report = Report("density", cfg.as_record())
    with _Timer() as t:
        gap, count = density_discrepancy(n, derived, bulk)
    report.threshold_check(f"density_sup_relative_gap_N{n}", gap, cfg.density_tol, t.elapsed,
                           detail=f"{count} midpoints with |lambda| <= 1")
    with _Timer() as t:
        gap_small, _ = density_discrepancy(smaller, derived, bulk)
    report.diagnostic(f"density_sup_relative_gap_N{smaller}", gap_small, t.elapsed)
    report.threshold_check("density_gap_decreases_with_N", gap - gap_small, 0.0,
                           detail=f"gap(N={n}) - gap(N={smaller})")
    return report


def cmd_map_params(cfg: RunConfig) -> Report:
    """Bare/derived round trips, the constraint identities, and the sine-Gordon map."""
    bulk = cfg.bulk
    bnd, derived = cfg.boundary()
    report = Report("map-params", cfg.as_record())
    rng = np.random.default_rng(cfg.seed)
    worst_trip, worst_identity = 0.0, 0.0
    with _Timer() as t:
        for _ in range(cfg.n_points):
            sample = params.BoundaryParams(complex(rng.uniform(-1.5, 1.5), rng.uniform(-1, 1)),
                                           complex(rng.normal(), rng.normal()))
            d = params.derive_pm_from_bare(sample, bulk)
            back = params.derive_bare_from_pm(d.p_plus, d.p_minus, bulk)
            worst_trip = max(worst_trip, abs(back.xi - sample.xi), abs(back.kappa - sample.kappa))
            worst_identity = max(worst_identity, *params.barecon_residuals(d, sample, bulk),
                                 *params.param_residuals(d, sample, bulk))
    report.threshold_check("round_trip_max_error", worst_trip, cfg.algebra_tol, t.elapsed)
    report.threshold_check("constraint_identities_max_residual", worst_identity, cfg.algebra_tol)
    report.threshold_check("config_constraint_residual",
                           max(*params.barecon_residuals(derived, bnd, bulk)), cfg.algebra_tol)
    report.diagnostic("xi", complex(bnd.xi))
    report.diagnostic("kappa", complex(bnd.kappa))
    report.diagnostic("p_plus", complex(derived.p_plus))
    report.diagnostic("p_minus", complex(derived.p_minus))
    report.diagnostic("branch_ambiguous", bool(derived.branch_ambiguous))
    gz = params.map_to_gz(bulk, derived, bnd)
    report.diagnostic("gz_parameters", {"lambda": gz.lambda_gz, "eta": gz.eta, "vartheta": gz.vartheta,
                                        "xi_prime": gz.xi_prime, "k": gz.k_gz})
    report.diagnostic("gz_constraint_residuals", [abs(r) for r in gz.constraint_residuals])
    return report


# -- argument handling ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="openxxz",
        description="Open XXZ chain with a generic boundary: verification suites and amplitude sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("verify-algebra", "Yang-Baxter, reflection and commutation checks"),
                       ("spectrum", "Bethe states against transfer-matrix diagonalization"),
                       ("amplitude", "boundary reflection amplitudes on a rapidity grid"),
                       ("charge", "nonlocal charge spectrum"),
                       ("density", "large-N root density against its Fourier form"),
                       ("map-params", "parameter maps and constraint identities")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="key = value file; command-line flags take precedence")
        p.add_argument("--nu", type=float)
        p.add_argument("--p-plus", type=float)
        p.add_argument("--p-minus", type=float)
        p.add_argument("--xi-re", type=float)
        p.add_argument("--xi-im", type=float)
        p.add_argument("--kappa-re", type=float)
        p.add_argument("--kappa-im", type=float)
        p.add_argument("--theta", type=float)
        p.add_argument("--n-sites", type=int)
        p.add_argument("--m-roots", type=int)
        p.add_argument("--grid", help="rapidity grid 'min:max:step'")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="output directory for report and data files")
        p.add_argument("--format", choices=["json", "csv"])
    return parser


_FLAG_KEYS = ("nu", "p_plus", "p_minus", "xi_re", "xi_im", "kappa_re", "kappa_im", "theta", "n_sites",
              "m_roots", "grid", "seed", "out", "format")


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = load_config_file(args.config) if args.config else {}
    for key in _FLAG_KEYS:
        value = getattr(args, key)
        if value is not None:
            values[key] = value
    return build_config(values)


def _emit(report: Report, cfg: RunConfig, data: dict[str, list[dict]] | None = None,
          roots: list[dict] | None = None) -> None:
    for line in report.summary_lines():
        print(line)
    if cfg.out is None:
        return
    out = Path(cfg.out)
    print(f"report: {write_report(report, out)}")
    ext = "csv" if cfg.format == "csv" else "jsonl"
    for name, rows in (data or {}).items():
        print(f"data: {write_rows(rows, AMPLITUDE_COLUMNS, out / f'{name}.{ext}', cfg.format)}")
    if roots is not None:
        path = out / "bethe_states.json"
        path.write_text(dumps(roots) + "\n")
        print(f"data: {path}")


COMMANDS: dict[str, Callable] = {
    "verify-algebra": cmd_verify_algebra,
    "spectrum": cmd_spectrum,
    "amplitude": cmd_amplitude,
    "charge": cmd_charge,
    "density": cmd_density,
    "map-params": cmd_map_params,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        result = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (OpenXXZError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.command == "amplitude":
        report, rows = result
        _emit(report, cfg, data=rows)
    elif args.command == "spectrum":
        report, states = result
        _emit(report, cfg, roots=states)
    else:
        report = result
        _emit(report, cfg)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
