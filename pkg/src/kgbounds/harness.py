"""Reproduction harness: worked-example tables and coupling sweeps.

The two reproductions are desk-scale experiments:

* example 2: the 2 x 2 well over couplings tau in {0, 1, 1.7} and
  perturbation strengths eta in {0.001, 0.1, 0.3} at the shift
  mu = -tau/2.  The tabulated deviations correspond to deepening the
  well (coupling tau -> tau + eta); the respective bounds are
  eta / (1 - tau/2).
* example 1: the oscillator ladder, comparing discretized eigenvalues
  against the closed form and the first-order sensitivity against the
  certified bound.

The sweep utility tracks eigenvalue trajectories as the potential is
scaled and bisects for the critical coupling where the two inner
eigenvalues collide and leave the real axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bounds import PerturbationSpec, kappa_general, verify_bounds
from .core import ModelSpec, assemble_system, spectral_norm, sqrt_spd
from .exceptions import ValidationError
from .models import (
    exact_harmonic_eigs,
    harmonic_model,
    harmonic_sensitivity,
    HarmonicParams,
    square_well_model,
    SQUARE_WELL_U_SQUARED,
)
from .spectral import eigen_spectrum, pencil_residual

__all__ = [
    "EXAMPLE2_TAUS",
    "EXAMPLE2_ETAS",
    "Example2Result",
    "example2_tables",
    "render_example2_report",
    "Example1Row",
    "Example1Result",
    "example1_table",
    "render_example1_report",
    "SweepResult",
    "sweep_potential",
]

EXAMPLE2_TAUS = (0.0, 1.0, 1.7)
EXAMPLE2_ETAS = (0.001, 0.1, 0.3)


# ---------------------------------------------------------------------------
# example 2: the 2 x 2 well


@dataclass(frozen=True)
class Example2Result:
    """True-deviation and bound tables plus the contraction diagnostics."""

    taus: tuple
    etas: tuple
    true_distances: np.ndarray  # shape (len(taus), len(etas))
    bounds: np.ndarray
    norm_v_u_inv: float         # ||V U^(-1)|| / tau
    norm_v_u2_inv: float        # ||V (U^2)^(-1)|| / tau
    reports: tuple = field(repr=False, default=())


def example2_tables(taus=EXAMPLE2_TAUS, etas=EXAMPLE2_ETAS) -> Example2Result:
    """Reproduce the well tables: max shifted relative deviations and bounds.

    For each (tau, eta) the well is deepened, V' = V - diag(eta, 0), the
    shift is mu = -tau/2, and the tabulated entry is
    max_k |lam'_k - lam_k| / |lam_k + tau/2| over ascending pairing.  The
    bound entry is eta / (1 - tau/2).
    """
    true_table = np.zeros((len(taus), len(etas)))
    bound_table = np.zeros_like(true_table)
    reports = []
    for i, tau in enumerate(taus):
        spec = square_well_model(tau)
        for j, eta in enumerate(etas):
            pert = PerturbationSpec(delta_v=np.diag([-float(eta), 0.0]))
            report = verify_bounds(spec, pert, shift=-tau / 2.0)
            true_table[i, j] = report.max_deviation
            bound_table[i, j] = kappa_general(eta, tau / 2.0)
            reports.append(report)

    base = square_well_model(1.0)
    u_inv = np.linalg.inv(sqrt_spd(SQUARE_WELL_U_SQUARED))
    norm_v_u_inv = spectral_norm(base.v @ u_inv)
    norm_v_u2_inv = spectral_norm(base.v @ np.linalg.inv(SQUARE_WELL_U_SQUARED))
    return Example2Result(
        taus=tuple(taus),
        etas=tuple(etas),
        true_distances=true_table,
        bounds=bound_table,
        norm_v_u_inv=norm_v_u_inv,
        norm_v_u2_inv=norm_v_u2_inv,
        reports=tuple(reports),
    )


def _table_lines(title, taus, etas, table):
    lines = [title, "        " + "  ".join(f"eta={e:<10g}" for e in etas)]
    for i, tau in enumerate(taus):
        cells = "  ".join(f"{table[i, j]:.4e}    " for j in range(len(etas)))
        lines.append(f"t = {tau:<4g}{cells.rstrip()}")
    return lines


def render_example2_report(result: Example2Result) -> str:
    """Human-readable report with both tables and the diagnostics notes."""
    lines = ["== square well: true maximal relative distances =="]
    lines += _table_lines(
        "max_k |lam'_k - lam_k| / |lam_k + tau/2|  (V' = V - diag(eta, 0))",
        result.taus,
        result.etas,
        result.true_distances,
    )
    lines.append("")
    lines.append("== respective bounds eta / (1 - tau/2) ==")
    lines += _table_lines(
        "entries with value >= 1 are tabulated but not applicable as bounds",
        result.taus,
        result.etas,
        result.bounds,
    )
    lines.append("")
    lines.append("== contraction diagnostics ==")
    lines.append(
        f"||V U^-1|| / tau     = {result.norm_v_u_inv:.5f}  (analytic sqrt(2/3) = {np.sqrt(2/3):.5f})"
    )
    lines.append(
        f"||V (U^2)^-1|| / tau = {result.norm_v_u2_inv:.5f}  (analytic sqrt(5)/3 = {np.sqrt(5)/3:.5f})"
    )
    lines.append(
        "note: the rounded reference value 0.745 matches ||V (U^2)^-1|| / tau, "
        "not ||V U^-1|| / tau = 0.81650; both are reported above."
    )
    lines.append(
        "note: the reference text lists couplings {0, 1, 1.8} while its tables "
        "use t = 1.7; these tables use 1.7."
    )
    lines.append(
        "note: the reference prints dV = diag(eta, 0), but its tabulated "
        "deviations correspond to the deepened well V - diag(eta, 0) "
        "(coupling tau + eta); that sign is used here."
    )
    lines.append(
        "note: at shift -tau/2 the contraction equals tau/2 exactly; the row "
        "t = 1.7, eta = 0.3 perturbs onto the defective coupling tau + eta = 2."
    )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# example 1: the oscillator ladder


@dataclass(frozen=True)
class Example1Row:
    alpha: float
    beta: float
    mode: int
    mu_plus: float
    mu_minus: float
    exact_plus: float
    exact_minus: float
    error_plus: float
    error_minus: float


@dataclass(frozen=True)
class Example1Result:
    rows: tuple
    grid_points: int
    half_width: float
    contraction: dict          # (alpha, beta) -> b = ||V U^(-1)||
    sensitivity_alpha: float
    sensitivity_eps: float
    fd_ratio_exact: float      # finite difference on the closed form
    fd_ratio_discrete: float   # finite difference on the discretized model
    predicted_ratio: float     # -(3/2) alpha / (1 - alpha^2)
    bound: float               # eps / (1 - alpha)
    comparison_factor: float   # (3/2) alpha / (1 + alpha)


def _discrete_extremes(alpha, beta, grid_points, half_width, modes):
    spec = harmonic_model(
        HarmonicParams(
            alpha=alpha, beta=beta, grid_points=grid_points, half_width=half_width
        )
    )
    system = assemble_system(spec, 0.0)
    report = eigen_spectrum(system)
    pos = report.positive_ordered
    neg = report.negative_ordered
    return spec, system, [(float(pos[m]), float(neg[m])) for m in modes]


def example1_table(
    alphas=(0.0, 0.3, 0.6),
    betas=(0.0, 1.0),
    modes=(0, 1, 2),
    grid_points=1000,
    half_width=12.0,
    sensitivity_alpha=0.5,
    sensitivity_eps=1e-4,
) -> Example1Result:
    """Discretized oscillator eigenvalues against the closed form.

    Also compares the first-order sensitivity of the lowest positive
    eigenvalue under alpha -> alpha + eps: the finite difference on the
    closed form, the finite difference on the discretized model, the
    predicted logarithmic derivative, and the certified bound
    eps / (1 - alpha).
    """
    rows = []
    contraction = {}
    for alpha in alphas:
        for beta in betas:
            spec, system, pairs = _discrete_extremes(
                alpha, beta, grid_points, half_width, modes
            )
            contraction[(alpha, beta)] = system.contraction
            for mode, (mu_p, mu_m) in zip(modes, pairs):
                ex_p, ex_m = exact_harmonic_eigs(alpha, beta, mode)
                rows.append(
                    Example1Row(
                        alpha=alpha,
                        beta=beta,
                        mode=mode,
                        mu_plus=mu_p,
                        mu_minus=mu_m,
                        exact_plus=ex_p,
                        exact_minus=ex_m,
                        error_plus=abs(mu_p - ex_p),
                        error_minus=abs(mu_m - ex_m),
                    )
                )

    a0, eps = sensitivity_alpha, sensitivity_eps
    mu0 = exact_harmonic_eigs(a0, 0.0, 0)[0]
    mu1 = exact_harmonic_eigs(a0 + eps, 0.0, 0)[0]
    fd_exact = (mu1 - mu0) / (mu0 * eps)
    _, _, pairs0 = _discrete_extremes(a0, 0.0, grid_points, half_width, (0,))
    _, _, pairs1 = _discrete_extremes(a0 + eps, 0.0, grid_points, half_width, (0,))
    fd_disc = (pairs1[0][0] - pairs0[0][0]) / (pairs0[0][0] * eps)

    return Example1Result(
        rows=tuple(rows),
        grid_points=grid_points,
        half_width=half_width,
        contraction=contraction,
        sensitivity_alpha=a0,
        sensitivity_eps=eps,
        fd_ratio_exact=fd_exact,
        fd_ratio_discrete=fd_disc,
        predicted_ratio=harmonic_sensitivity(a0),
        bound=eps / (1.0 - a0),
        comparison_factor=1.5 * a0 / (1.0 + a0),
    )


def render_example1_report(result: Example1Result) -> str:
    lines = [
        "== oscillator ladder: discretized vs closed-form eigenvalues ==",
        f"grid: N = {result.grid_points}, L = {result.half_width:g}",
        "alpha  beta  n   mu_n^+ (disc)  mu_n^+ (exact)  |err+|     "
        "mu_n^- (disc)   mu_n^- (exact)  |err-|",
    ]
    for r in result.rows:
        lines.append(
            f"{r.alpha:<5g} {r.beta:<4g} {r.mode}   {r.mu_plus:+.6f}      "
            f"{r.exact_plus:+.6f}       {r.error_plus:.2e}   "
            f"{r.mu_minus:+.6f}       {r.exact_minus:+.6f}      {r.error_minus:.2e}"
        )
    lines.append("")
    lines.append("contraction b = ||V U^-1|| per (alpha, beta):")
    for (alpha, beta), b in sorted(result.contraction.items()):
        lines.append(f"  alpha = {alpha:<4g} beta = {beta:<4g} b = {b:.6f}")
    lines.append("")
    a0, eps = result.sensitivity_alpha, result.sensitivity_eps
    lines.append(
        f"== first-order sensitivity at alpha = {a0:g}, eps = {eps:g} =="
    )
    lines.append(
        f"relative change / eps: closed form {result.fd_ratio_exact:+.6f}, "
        f"discretized {result.fd_ratio_discrete:+.6f}, "
        f"predicted -(3/2) a/(1-a^2) = {result.predicted_ratio:+.6f}"
    )
    lines.append(
        f"certified bound eps/(1-alpha) = {result.bound:.4e} vs true relative "
        f"change {abs(result.fd_ratio_exact) * eps:.4e}; the bound is larger by "
        f"the factor (3/2) a/(1+a) = {result.comparison_factor:.4f}"
    )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# coupling sweep


@dataclass(frozen=True)
class SweepResult:
    """Eigenvalue trajectories as the potential is scaled.

    ``eigenvalues[k]`` holds the spectrum (complex) at ``parameters[k]``;
    ``critical_value`` is the bisected coupling where the spectrum stops
    being real, or None when it stays real over the whole range.
    """

    parameters: np.ndarray
    eigenvalues: np.ndarray          # shape (steps, 2n), complex
    is_real: np.ndarray              # bool per row
    defect_flags: np.ndarray         # bool per row
    residual_max: np.ndarray         # max pencil residual per row
    critical_value: float | None


def sweep_potential(
    base: ModelSpec, lo: float, hi: float, steps: int, shift: float = 0.0
) -> SweepResult:
    """Scan t in [lo, hi]: spectrum of the model with potential t * V.

    The critical coupling is located by bisection (to 1e-6) on the
    reality of the spectrum within the first bracket where it flips.
    """
    if steps < 2:
        raise ValidationError(f"steps must be >= 2, got {steps}")
    if not lo < hi:
        raise ValidationError(f"sweep range ({lo}, {hi}) is empty")

    params = np.linspace(lo, hi, steps)

    def solve(t):
        spec = ModelSpec(base.u_squared, t * base.v, label=base.label)
        report = eigen_spectrum(assemble_system(spec, shift))
        resid = max(
            pencil_residual(spec, lam) for lam in np.atleast_1d(report.eigenvalues)
        )
        return spec, report, resid

    rows = []
    real_flags = []
    defect_flags = []
    residuals = []
    for t in params:
        _, report, resid = solve(t)
        lam = np.asarray(report.eigenvalues, dtype=complex)
        rows.append(np.sort_complex(lam))
        real_flags.append(report.is_real_spectrum)
        defect_flags.append(report.defective)
        residuals.append(resid)

    critical = None
    flips = [
        k
        for k in range(len(params) - 1)
        if real_flags[k] and not real_flags[k + 1]
    ]
    if flips:
        t_lo, t_hi = float(params[flips[0]]), float(params[flips[0] + 1])
        while t_hi - t_lo > 1e-6:
            mid = 0.5 * (t_lo + t_hi)
            _, report, _ = solve(mid)
            if report.is_real_spectrum:
                t_lo = mid
            else:
                t_hi = mid
        critical = 0.5 * (t_lo + t_hi)

    return SweepResult(
        parameters=params,
        eigenvalues=np.array(rows),
        is_real=np.array(real_flags),
        defect_flags=np.array(defect_flags),
        residual_max=np.array(residuals),
        critical_value=critical,
    )
