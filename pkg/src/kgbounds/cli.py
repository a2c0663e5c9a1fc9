"""Command line front end: kg spectrum | bounds | verify | sweep | reproduce.

Exit codes: 0 success, 2 parse failure (bad arguments or model file),
3 validation failure (structurally bad matrix data), 4 solver failure.
CSV output is UTF-8 with LF line endings and full-precision reals, so a
fixed configuration and seed reproduce byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import harness
from .bounds import (
    PerturbationSpec,
    delta_gram,
    gap_bound,
    gap_inclusion,
    improved_inclusion,
    norm_bound_interval,
    perturbation_constants,
    verify_bounds,
)
from .core import ModelSpec, assemble_system, optimize_shift, spectral_norm
from .exceptions import KGError, ParseError, ValidationError
from .models import (
    HarmonicParams,
    harmonic_model,
    load_model,
    random_perturbation,
    square_well_model,
)
from .spectral import central_gap, eigen_spectrum, pencil_residual, sign_operator

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_SOLVER = 4

#: an emitted eigenvalue fails the run when its pencil residual exceeds
#: RESIDUAL_GATE * (||U^2|| + ||V||^2 + |lam|^2)
RESIDUAL_GATE = 1e-6


def _fmt(x) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class RunConfig:
    """Resolved command configuration: one model source, one shift policy."""

    command: str
    spec: ModelSpec | None
    tau: float | None
    shift: float
    eta: float | None
    seed: int
    out: str | None
    fmt: str
    sweep_range: tuple | None
    steps: int
    which: str | None
    grid_points: int
    half_width: float


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--model", help="model file (JSON)")
    p.add_argument("--tau", type=float, help="square well coupling")
    p.add_argument("--alpha", type=float, help="oscillator field strength")
    p.add_argument("--beta", type=float, default=0.0, help="oscillator mass offset")
    p.add_argument("--grid-points", type=int, default=1000)
    p.add_argument("--half-width", type=float, default=12.0)
    p.add_argument("--shift", type=float, default=None, help="explicit shift mu")
    p.add_argument(
        "--optimize-shift",
        action="store_true",
        help="pick the shift minimizing the contraction",
    )
    p.add_argument(
        "--paper-shift",
        action="store_true",
        help="use mu = -tau/2 (square well models only)",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path; stdout when omitted")
    p.add_argument("--format", dest="fmt", choices=["csv", "report"], default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kg",
        description="Spectra and relative eigenvalue perturbation bounds "
        "for block Hamiltonians built from (U^2, V).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="classified eigenvalues of one model")
    _add_common(p)

    p = sub.add_parser("bounds", help="perturbation constants and gap intervals")
    _add_common(p)
    p.add_argument(
        "--eta",
        type=float,
        required=True,
        help="perturbation strength: diag(-eta, 0) for the square well, a "
        "seeded random symmetric perturbation of that scale otherwise",
    )

    p = sub.add_parser("verify", help="true deviations against every bound")
    _add_common(p)
    p.add_argument("--eta", type=float, required=True, help="as for bounds")

    p = sub.add_parser("sweep", help="eigenvalue trajectories under t * V")
    _add_common(p)
    p.add_argument("--sweep-range", required=True, help="range as a:b")
    p.add_argument("--steps", type=int, default=101)

    p = sub.add_parser("reproduce", help="regenerate the worked-example reports")
    p.add_argument("which", choices=["example1", "example2"])
    p.add_argument("--grid-points", type=int, default=1000)
    p.add_argument("--half-width", type=float, default=12.0)
    p.add_argument("--out", default=".", help="output directory")
    return parser


def _resolve_model(args) -> tuple:
    sources = [args.model is not None, args.tau is not None, args.alpha is not None]
    if sum(sources) != 1:
        raise ParseError(
            "exactly one model source is required: --model, --tau or --alpha"
        )
    if args.model is not None:
        return load_model(args.model), None
    if args.tau is not None:
        return square_well_model(args.tau), args.tau
    params = HarmonicParams(
        alpha=args.alpha,
        beta=args.beta,
        grid_points=args.grid_points,
        half_width=args.half_width,
    )
    return harmonic_model(params), None


def _resolve_shift(args, spec: ModelSpec, tau) -> float:
    chosen = [
        args.shift is not None,
        bool(args.optimize_shift),
        bool(args.paper_shift),
    ]
    if sum(chosen) > 1:
        raise ParseError("choose at most one of --shift, --optimize-shift, --paper-shift")
    if args.shift is not None:
        return args.shift
    if args.optimize_shift:
        return optimize_shift(spec)[0]
    if args.paper_shift:
        if tau is None:
            raise ValidationError("--paper-shift requires a square well model (--tau)")
        return -tau / 2.0
    return 0.0


def _resolve_config(args) -> RunConfig:
    if args.command == "reproduce":
        return RunConfig(
            command="reproduce",
            spec=None,
            tau=None,
            shift=0.0,
            eta=None,
            seed=0,
            out=args.out,
            fmt="report",
            sweep_range=None,
            steps=0,
            which=args.which,
            grid_points=args.grid_points,
            half_width=args.half_width,
        )
    spec, tau = _resolve_model(args)
    shift = _resolve_shift(args, spec, tau)
    sweep_range = None
    if getattr(args, "sweep_range", None) is not None:
        try:
            lo, hi = args.sweep_range.split(":")
            sweep_range = (float(lo), float(hi))
        except ValueError as exc:
            raise ParseError(
                f"--sweep-range must look like a:b, got {args.sweep_range!r}"
            ) from exc
    return RunConfig(
        command=args.command,
        spec=spec,
        tau=tau,
        shift=shift,
        eta=getattr(args, "eta", None),
        seed=args.seed,
        out=args.out,
        fmt=args.fmt,
        sweep_range=sweep_range,
        steps=getattr(args, "steps", 0),
        which=None,
        grid_points=args.grid_points,
        half_width=args.half_width,
    )


def _perturbation(config: RunConfig) -> PerturbationSpec:
    if config.tau is not None:
        # deepened-well convention: the perturbed coupling is tau + eta
        return PerturbationSpec(delta_v=np.diag([-config.eta, 0.0]))
    return random_perturbation(config.spec.order, config.eta, config.seed)


def _write_text(out, text: str):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _pencil_scale(spec: ModelSpec, lam) -> float:
    return (
        spectral_norm(spec.u_squared)
        + spectral_norm(spec.v) ** 2
        + abs(complex(lam)) ** 2
    )


def cmd_spectrum(config: RunConfig) -> int:
    system = assemble_system(config.spec, config.shift)
    report = eigen_spectrum(system)
    rows = []
    gate_failed = False
    for k, lam in enumerate(np.atleast_1d(report.eigenvalues)):
        resid = pencil_residual(config.spec, lam)
        if resid > RESIDUAL_GATE * _pencil_scale(config.spec, lam):
            gate_failed = True
        rows.append(
            [
                k,
                _fmt(np.real(lam)),
                _fmt(np.imag(lam)),
                report.sign_types[k],
                _fmt(resid),
            ]
        )
    text = _csv_text(
        ["index", "eigenvalue_re", "eigenvalue_im", "sign_type", "pencil_residual"],
        rows,
    )
    _write_text(config.out, text)
    if gate_failed:
        print("solver failure: a pencil residual exceeded the gate", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def _bounds_payload(config: RunConfig):
    system = assemble_system(config.spec, config.shift)
    pert = _perturbation(config)
    bundle = perturbation_constants(system, pert)
    alpha = gap_bound(system)
    report = eigen_spectrum(system)
    gap = central_gap(report, config.shift)
    mu = config.shift

    shifted_gap = (gap[0] - mu, gap[1] - mu)
    km, kp = bundle.best_pair()
    kappa = max(abs(km), abs(kp))
    plain = improved = None
    if kappa < 1.0 and not np.isinf(shifted_gap).any():
        inc = gap_inclusion(shifted_gap, kappa)
        plain = (inc.predicted[0] + mu, inc.predicted[1] + mu)
    if km > -1.0 and shifted_gap[0] < 0.0 < shifted_gap[1]:
        lo, hi = improved_inclusion(shifted_gap, km, kp)
        improved = (lo + mu, hi + mu)
    s_norm = spectral_norm(delta_gram(system, pert))
    uniform_raw = norm_bound_interval(gap, s_norm, sign_operator(system).norm_j1)
    uniform = uniform_raw if uniform_raw[0] < uniform_raw[1] else None
    return system, bundle, alpha, gap, plain, improved, uniform, s_norm


def cmd_bounds(config: RunConfig) -> int:
    system, bundle, alpha, gap, plain, improved, uniform, s_norm = _bounds_payload(
        config
    )

    def pair_str(pair):
        if pair is None:
            return ("", "")
        return (_fmt(pair[0]), _fmt(pair[1]))

    if config.fmt == "csv":
        rows = [
            ["contraction_b", _fmt(bundle.b), ""],
            ["c_norm", _fmt(bundle.c), ""],
            ["gap_alpha", _fmt(alpha), ""],
            ["central_gap", *pair_str(gap)],
            ["kappa_general", _fmt(bundle.kappa_general), bundle.valid["kappa_general"]],
            ["kappa_sum", _fmt(bundle.kappa_sum), bundle.valid["kappa_sum"]],
            [
                "kappa_norm_product",
                _fmt(bundle.kappa_norm_product),
                bundle.valid["kappa_norm_product"],
            ],
        ]
        if bundle.kappa_relative is not None:
            rows.append(
                ["kappa_relative", _fmt(bundle.kappa_relative), bundle.valid["kappa_relative"]]
            )
        if bundle.kappa_disjoint is not None:
            rows.append(
                ["kappa_disjoint", _fmt(bundle.kappa_disjoint), bundle.valid["kappa_disjoint"]]
            )
        if bundle.kappa_signed is not None:
            rows.append(
                ["kappa_signed_minus", _fmt(bundle.kappa_signed[0]), bundle.valid["kappa_signed"]]
            )
            rows.append(
                ["kappa_signed_plus", _fmt(bundle.kappa_signed[1]), bundle.valid["kappa_signed"]]
            )
        if bundle.kappa_exact is not None:
            rows.append(
                ["kappa_exact_minus", _fmt(bundle.kappa_exact[0]), bundle.valid["kappa_exact"]]
            )
            rows.append(
                ["kappa_exact_plus", _fmt(bundle.kappa_exact[1]), bundle.valid["kappa_exact"]]
            )
        if bundle.kappa0_hat is not None:
            rows.append(["kappa0_hat", _fmt(bundle.kappa0_hat), True])
            rows.append(["kappa_prime_hat", _fmt(bundle.kappa_prime_hat), True])
        rows.append(["interval_plain", *pair_str(plain)])
        rows.append(["interval_improved", *pair_str(improved)])
        rows.append(["interval_uniform", *pair_str(uniform)])
        rows.append(["perturbation_norm", _fmt(s_norm), ""])
        text = _csv_text(["key", "value", "extra"], rows)
    else:
        lines = [
            f"model: {config.spec.label or '(explicit matrices)'}",
            f"shift mu = {config.shift:.17g}",
            f"contraction b = {bundle.b:.6f}, c = ||dV U^-1|| = {bundle.c:.6f}",
            f"guaranteed gap half-width alpha = {alpha:.6f}",
            f"central gap of H: ({gap[0]:.6f}, {gap[1]:.6f})",
            "",
            "relative perturbation constants (value, applicable):",
            f"  kappa_general      {bundle.kappa_general: .6e}  {bundle.valid['kappa_general']}",
            f"  kappa_sum          {bundle.kappa_sum: .6e}  {bundle.valid['kappa_sum']}",
            f"  kappa_norm_product {bundle.kappa_norm_product: .6e}  {bundle.valid['kappa_norm_product']}",
        ]
        if bundle.kappa_relative is not None:
            lines.append(
                f"  kappa_relative     {bundle.kappa_relative: .6e}  {bundle.valid['kappa_relative']}"
            )
        if bundle.kappa_disjoint is not None:
            lines.append(
                f"  kappa_disjoint     {bundle.kappa_disjoint: .6e}  {bundle.valid['kappa_disjoint']}"
            )
        if bundle.kappa_signed is not None:
            lines.append(
                f"  kappa_signed       ({bundle.kappa_signed[0]: .6e}, {bundle.kappa_signed[1]: .6e})  {bundle.valid['kappa_signed']}"
            )
        if bundle.kappa_exact is not None:
            lines.append(
                f"  kappa_exact        ({bundle.kappa_exact[0]: .6e}, {bundle.kappa_exact[1]: .6e})  {bundle.valid['kappa_exact']}"
            )
        if bundle.kappa0_hat is not None:
            lines.append(
                f"  rescaled           kappa0_hat = {bundle.kappa0_hat: .6e}, kappa_prime_hat = {bundle.kappa_prime_hat: .6e}"
            )
        lines += [
            "",
            "intervals certified free of perturbed spectrum:",
            f"  plain:    {plain}",
            f"  improved: {improved}",
            f"  uniform:  {uniform}   (perturbation norm {s_norm:.6e})",
        ]
        text = "\n".join(lines) + "\n"
    _write_text(config.out, text)
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    pert = _perturbation(config)
    report = verify_bounds(config.spec, pert, config.shift)
    rows = []
    gate_failed = False
    spec_p = config.spec.perturbed(pert.delta_v)
    for k, (lam, lam_p, dev) in enumerate(
        zip(report.eigenvalues, report.eigenvalues_perturbed, report.deviations)
    ):
        resid = max(
            pencil_residual(config.spec, lam), pencil_residual(spec_p, lam_p)
        )
        if resid > RESIDUAL_GATE * _pencil_scale(config.spec, lam):
            gate_failed = True
        rows.append(
            ["eigenpair", k, _fmt(lam), _fmt(lam_p), _fmt(dev), "", "", ""]
        )
    rows.append(
        [
            "summary",
            "max_relative_deviation",
            "",
            "",
            _fmt(report.max_deviation),
            "",
            "",
            "",
        ]
    )
    for check in report.checks:
        value = (
            f"{_fmt(check.value[0])};{_fmt(check.value[1])}"
            if isinstance(check.value, tuple)
            else _fmt(check.value)
        )
        rows.append(
            ["bound", check.name, "", "", "", value, check.applicable, check.passed]
        )
    text = _csv_text(
        [
            "row_type",
            "key",
            "eigenvalue",
            "eigenvalue_perturbed",
            "deviation",
            "bound",
            "applicable",
            "passed",
        ],
        rows,
    )
    _write_text(config.out, text)
    if gate_failed:
        print("solver failure: a pencil residual exceeded the gate", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def cmd_sweep(config: RunConfig) -> int:
    lo, hi = config.sweep_range
    result = harness.sweep_potential(
        config.spec, lo, hi, config.steps, shift=config.shift
    )
    two_n = result.eigenvalues.shape[1]
    header = ["row_type", "parameter", "is_real", "defective", "residual_max"]
    for k in range(two_n):
        header += [f"eig{k}_re", f"eig{k}_im"]
    rows = []
    gate_failed = False
    for i, t in enumerate(result.parameters):
        if result.residual_max[i] > RESIDUAL_GATE * (
            spectral_norm(config.spec.u_squared)
            + (abs(t) * spectral_norm(config.spec.v)) ** 2
            + float(np.abs(result.eigenvalues[i]).max()) ** 2
        ):
            gate_failed = True
        row = [
            "point",
            _fmt(t),
            result.is_real[i],
            result.defect_flags[i],
            _fmt(result.residual_max[i]),
        ]
        for lam in result.eigenvalues[i]:
            row += [_fmt(lam.real), _fmt(lam.imag)]
        rows.append(row)
    critical = "" if result.critical_value is None else _fmt(result.critical_value)
    rows.append(["critical", critical, "", "", ""] + [""] * (2 * two_n))
    _write_text(config.out, _csv_text(header, rows))
    if gate_failed:
        print("solver failure: a pencil residual exceeded the gate", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def cmd_reproduce(config: RunConfig) -> int:
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if config.which == "example2":
        result = harness.example2_tables()
        rows_true, rows_bound = [], []
        for i, tau in enumerate(result.taus):
            for j, eta in enumerate(result.etas):
                rows_true.append(
                    [_fmt(tau), _fmt(eta), _fmt(result.true_distances[i, j])]
                )
                rows_bound.append([_fmt(tau), _fmt(eta), _fmt(result.bounds[i, j])])
        (out_dir / "example2_true_distances.csv").write_text(
            _csv_text(["tau", "eta", "max_relative_distance"], rows_true),
            encoding="utf-8",
        )
        (out_dir / "example2_bounds.csv").write_text(
            _csv_text(["tau", "eta", "bound"], rows_bound), encoding="utf-8"
        )
        text = harness.render_example2_report(result)
        (out_dir / "example2_report.txt").write_text(text, encoding="utf-8")
        sys.stdout.write(text)
        return EXIT_OK

    result = harness.example1_table(
        grid_points=config.grid_points, half_width=config.half_width
    )
    rows = [
        [
            _fmt(r.alpha),
            _fmt(r.beta),
            r.mode,
            _fmt(r.mu_plus),
            _fmt(r.exact_plus),
            _fmt(r.error_plus),
            _fmt(r.mu_minus),
            _fmt(r.exact_minus),
            _fmt(r.error_minus),
        ]
        for r in result.rows
    ]
    (out_dir / "example1_table.csv").write_text(
        _csv_text(
            [
                "alpha",
                "beta",
                "mode",
                "mu_plus_discrete",
                "mu_plus_exact",
                "error_plus",
                "mu_minus_discrete",
                "mu_minus_exact",
                "error_minus",
            ],
            rows,
        ),
        encoding="utf-8",
    )
    text = harness.render_example1_report(result)
    (out_dir / "example1_report.txt").write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_OK


_DISPATCH = {
    "spectrum": cmd_spectrum,
    "bounds": cmd_bounds,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "reproduce": cmd_reproduce,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _resolve_config(args)
        return _DISPATCH[config.command](config)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (KGError, np.linalg.LinAlgError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
