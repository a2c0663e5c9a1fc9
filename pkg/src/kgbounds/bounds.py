"""Relative eigenvalue perturbation constants and spectral-gap inclusions.

A potential change V -> V + dV perturbs the quadratic form g of the
shifted system by dg, and every constant kappa with |dg| <= kappa * g
controls the relative eigenvalue motion two-sidedly:

    -kappa <= (lam'_k - lam_k) / lam_k <= kappa

for the eigenvalues (in the shifted frame) paired by the order
convention: positive ones increasing, negative ones decreasing.  This
module evaluates every such constant that the block structure offers,

    kappa_general   = c / (1 - b)         c = ||dV U^(-1)||
    kappa_sum       = c + b
    kappa_relative  = nu * b / (1 - b)    ||dV psi|| <= nu ||V psi||
    kappa_disjoint  = c / sqrt(1 - b^2)   when the mixed product vanishes
    kappa_signed    = asymmetric pair when V*dV is semidefinite

together with the exact extremes (kappa_minus, kappa_plus) of dg/g from
the generalized symmetric-definite eigenproblem (the brute-force oracle
for all the formulas above), the multiplicative rescaling that turns an
asymmetric pair into the always-admissible constant

    kappa0_hat = (kappa_plus + kappa_minus) / 2
    kappa_prime_hat = (kappa_plus - kappa_minus) / (2 + kappa_plus + kappa_minus)

the gap inclusion intervals, the uniform norm-bound interval through
||J1||, and a verification harness that compares every predicted bound
against exactly computed spectra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from .core import (
    KleinGordonSystem,
    ModelSpec,
    assemble_system,
    check_symmetric,
    spectral_norm,
    symmetrize,
    _spd_eig,
)
from .exceptions import (
    ContractionNotLessThanOne,
    KappaMinusNotAboveMinusOne,
    KappaOutOfRange,
    NotPositiveDefinite,
    ValidationError,
)
from .spectral import SpectrumReport, eigen_spectrum

__all__ = [
    "PerturbationSpec",
    "KappaBundle",
    "KappaCheck",
    "GapInclusion",
    "BlockStructure",
    "VerificationReport",
    "analyze_perturbation",
    "delta_gram",
    "gap_bound",
    "perturbation_constants",
    "exact_kappa_pm",
    "rescale_kappa",
    "gap_inclusion",
    "improved_inclusion",
    "norm_bound_interval",
    "block_structure_analysis",
    "eigenvalue_interval_bounds",
    "verify_bounds",
    "kappa_general",
    "kappa_sum",
    "kappa_relative",
    "kappa_disjoint",
    "kappa_signed_pair",
    "t_norm_bound",
    "interval_is_empty",
]

#: semidefiniteness slack for the sign-condition test, scaled by ||A|| ||dA||
SIGN_TOL = 1e-10

#: a symmetric matrix counts as invertible when min |eig| > INV_RTOL * ||m||
INV_RTOL = 1e-12


# ---------------------------------------------------------------------------
# scalar formulas


def kappa_general(c: float, b: float) -> float:
    """c / (1 - b), the constant from measuring dg against the free form."""
    if b >= 1.0:
        raise ContractionNotLessThanOne(f"contraction b = {b} is not < 1")
    return c / (1.0 - b)


def kappa_sum(c: float, b: float) -> float:
    """c + b, the coarser constant from re-running the spectrality argument."""
    return c + b


def kappa_relative(nu: float, b: float) -> float:
    """nu * b / (1 - b) when the perturbation is measured by V itself."""
    if b >= 1.0:
        raise ContractionNotLessThanOne(f"contraction b = {b} is not < 1")
    return nu * b / (1.0 - b)


def kappa_disjoint(c: float, b: float) -> float:
    """c / sqrt(1 - b^2), valid when the mixed product V*dV vanishes."""
    if b >= 1.0:
        raise ContractionNotLessThanOne(f"contraction b = {b} is not < 1")
    return c / math.sqrt(1.0 - b * b)


def kappa_signed_pair(c: float, b: float, direction: str = "negative"):
    """The asymmetric pair for a semidefinite mixed product V*dV.

    direction 'negative' (V*dV <= 0): (-c / sqrt(1-b^2), c / (1-b));
    direction 'positive' mirrors it to (-c / (1-b), c / sqrt(1-b^2)).
    """
    if b >= 1.0:
        raise ContractionNotLessThanOne(f"contraction b = {b} is not < 1")
    tight = c / math.sqrt(1.0 - b * b)
    loose = c / (1.0 - b)
    if direction == "negative":
        return -tight, loose
    if direction == "positive":
        return -loose, tight
    raise ValueError(f"direction must be 'negative' or 'positive', got {direction!r}")


def t_norm_bound(a: float, w: float) -> float:
    """Largest eigenvalue of the arrow matrix [[a*I, B^T], [B, 0]], ||B|| = w.

    Equals (a + sqrt(a^2 + 4 w^2)) / 2; evaluated at a = 2 b ||dA|| / (1-b^2)
    with w = ||dA|| / sqrt(1-b^2) it reproduces ||dA|| / (1-b) exactly.
    """
    return 0.5 * (a + math.sqrt(a * a + 4.0 * w * w))


def interval_is_empty(interval) -> bool:
    """True when the endpoints of an open interval cross or coincide."""
    lo, hi = interval
    return not lo < hi


# ---------------------------------------------------------------------------
# perturbation records


@dataclass(frozen=True)
class PerturbationSpec:
    """A symmetric potential perturbation and its measured constants.

    ``c`` is ||dV U^(-1)||; ``nu`` the smallest factor with
    ||dV psi|| <= nu ||V psi|| (absent when V is singular); ``disjoint``
    whether the symmetrized product dV V + V dV vanishes; ``signed``
    'negative' / 'positive' when dA^T A + A^T dA is semidefinite of that
    sign.  Constructors that lack the matrices to measure against leave
    the corresponding fields None; analyze_perturbation fills them in.
    """

    delta_v: np.ndarray
    c: float | None = None
    nu: float | None = None
    disjoint: bool | None = None
    signed: str | None = None

    def __post_init__(self):
        dv = check_symmetric(self.delta_v, "delta_v")
        dv.setflags(write=False)
        object.__setattr__(self, "delta_v", dv)


def _symmetric_inverse(v):
    """Inverse of a symmetric matrix, or None when numerically singular."""
    w, p = np.linalg.eigh(v)
    scale = np.abs(w).max(initial=0.0)
    if scale == 0.0 or np.abs(w).min() <= INV_RTOL * scale:
        return None
    return (p / w) @ p.T


def _mixed_product_sign(a_matrix, delta_a):
    """Classify dA^T A + A^T dA: ('negative'|'positive'|None, is_zero)."""
    mixed = symmetrize(delta_a.T @ a_matrix + a_matrix.T @ delta_a)
    tol = SIGN_TOL * max(spectral_norm(a_matrix) * spectral_norm(delta_a), 1e-300)
    eigs = np.linalg.eigvalsh(mixed)
    is_zero = bool(np.abs(eigs).max(initial=0.0) <= tol)
    if eigs[-1] <= tol:
        return "negative", is_zero
    if eigs[0] >= -tol:
        return "positive", is_zero
    return None, is_zero


def analyze_perturbation(system: KleinGordonSystem, pert) -> PerturbationSpec:
    """Measure a perturbation against an assembled system.

    Accepts a PerturbationSpec or a raw symmetric matrix and returns a
    fully populated record: c from the system's U^(-1), nu from V when V
    is invertible, and the disjoint / sign classification from the
    mixed product with A = (V - mu) U^(-1).
    """
    if not isinstance(pert, PerturbationSpec):
        pert = PerturbationSpec(delta_v=pert)
    dv = pert.delta_v
    if dv.shape[0] != system.n:
        raise ValidationError(
            f"delta_v has order {dv.shape[0]}, system has order {system.n}"
        )
    c = spectral_norm(dv @ system.u_inv_sqrt)
    v_inv = _symmetric_inverse(system.spec.v)
    nu = spectral_norm(dv @ v_inv) if v_inv is not None else None
    delta_a = dv @ system.u_inv_sqrt
    signed, is_zero = _mixed_product_sign(system.a_matrix, delta_a)
    return replace(pert, c=c, nu=nu, disjoint=is_zero, signed=signed)


def delta_gram(system: KleinGordonSystem, pert) -> np.ndarray:
    """The gram-matrix increment dG produced by the potential change.

    dG = [[0, U^(-1/2) dV U^(1/2)], [U^(1/2) dV U^(-1/2), 0]]; equals the
    difference of the assembled grams and is independent of the shift.
    """
    dv = pert.delta_v if isinstance(pert, PerturbationSpec) else np.asarray(pert)
    w, p = _spd_eig(system.u_sqrt, "u_sqrt")
    quarter = np.sqrt(w)
    u_half = (p * quarter) @ p.T
    u_half_inv = (p / quarter) @ p.T
    x = u_half @ dv @ u_half_inv
    n = system.n
    dg = np.zeros((2 * n, 2 * n))
    dg[:n, n:] = x.T
    dg[n:, :n] = x
    return symmetrize(dg)


# ---------------------------------------------------------------------------
# constants bundle


@dataclass(frozen=True)
class KappaBundle:
    """Every applicable relative perturbation constant for one (system, dV).

    ``valid`` flags each entry: the hypothesis holds and the value is
    below one where the statement needs it.  ``kappa_norm_product`` is
    kappa_general evaluated with the coarser measurement
    c <= ||dV|| * ||U^(-1)||, the variant used in the worked-example
    tables.  ``kappa_exact`` are the extreme eigenvalues of dg relative
    to g, the sharpest possible pair.
    """

    b: float
    c: float
    kappa_general: float
    kappa_sum: float
    kappa_norm_product: float
    kappa_relative: float | None
    kappa_disjoint: float | None
    kappa_signed: tuple | None
    kappa_exact: tuple | None
    kappa0_hat: float | None
    kappa_prime_hat: float | None
    valid: dict = field(default_factory=dict)

    def best_pair(self):
        """The sharpest available (kappa_minus, kappa_plus) pair."""
        if self.kappa_exact is not None:
            return self.kappa_exact
        if self.kappa_signed is not None:
            return self.kappa_signed
        k = self.kappa_general
        return (-k, k)


def gap_bound(system: KleinGordonSystem) -> float:
    """Half-width alpha = (1 - b) * min eig U of the guaranteed central gap.

    No eigenvalue of H lies in (mu - alpha, mu + alpha) when b < 1.
    """
    if system.contraction >= 1.0:
        raise ContractionNotLessThanOne(
            f"contraction b = {system.contraction} is not < 1"
        )
    return (1.0 - system.contraction) * system.u_min()


def exact_kappa_pm(g, delta_g):
    """Extreme eigenvalues of the pencil dG x = lam G x (G positive definite).

    Equivalently the extreme eigenvalues of G^(-1/2) dG G^(-1/2): the
    exact range of dg(psi,psi) / g(psi,psi), hence the brute-force oracle
    every closed-form constant must dominate.
    """
    g = check_symmetric(g, "g")
    delta_g = check_symmetric(delta_g, "delta_g")
    if g.shape != delta_g.shape:
        raise ValidationError(
            f"g has order {g.shape[0]} but delta_g has order {delta_g.shape[0]}"
        )
    _spd_eig(g, "g")
    w = scipy.linalg.eigh(delta_g, g, eigvals_only=True)
    return float(w[0]), float(w[-1])


def rescale_kappa(kappa_minus: float, kappa_plus: float):
    """Optimal multiplicative shift for an asymmetric pair.

    Returns (kappa0_hat, kappa_prime_hat) with
    kappa0_hat = (kappa_plus + kappa_minus) / 2 and
    kappa_prime_hat = (kappa_plus - kappa_minus) / (2 + kappa_plus + kappa_minus);
    kappa_prime_hat < 1 whenever kappa_minus > -1, with no condition on
    kappa_plus.
    """
    if kappa_minus > kappa_plus:
        raise ValueError(
            f"kappa_minus = {kappa_minus} exceeds kappa_plus = {kappa_plus}"
        )
    if kappa_minus <= -1.0:
        raise KappaMinusNotAboveMinusOne(
            f"kappa_minus = {kappa_minus} must exceed -1 for the rescaled form "
            "to stay positive definite"
        )
    kappa0 = 0.5 * (kappa_plus + kappa_minus)
    kappa_prime = (kappa_plus - kappa_minus) / (2.0 + kappa_plus + kappa_minus)
    return kappa0, kappa_prime


# ---------------------------------------------------------------------------
# gap inclusions


@dataclass(frozen=True)
class GapInclusion:
    """A spectral gap of H and the intervals certified to stay inside rho(H')."""

    original: tuple
    predicted: tuple
    case_tag: str  # 'positive-gap' | 'straddling' | 'negative-gap'
    improved: tuple | None = None
    uniform: tuple | None = None


def gap_inclusion(gap, kappa: float) -> GapInclusion:
    """Shrink a spectral gap of H to the part certified free for H'.

    Cases by the gap position: (lo > 0) -> ((1+k) lo, (1-k) hi);
    straddling -> ((1-k) lo, (1-k) hi); (hi < 0) -> ((1-k) lo, (1+k) hi).
    A crossed (empty) interval is returned as computed.
    """
    lo, hi = float(gap[0]), float(gap[1])
    if not 0.0 <= kappa < 1.0:
        raise KappaOutOfRange(f"kappa = {kappa} must lie in [0, 1)")
    if not lo < hi:
        raise ValidationError(f"gap ({lo}, {hi}) is empty")
    if lo >= 0.0:
        tag = "positive-gap"
        predicted = ((1.0 + kappa) * lo, (1.0 - kappa) * hi)
    elif hi <= 0.0:
        tag = "negative-gap"
        predicted = ((1.0 - kappa) * lo, (1.0 + kappa) * hi)
    else:
        tag = "straddling"
        predicted = ((1.0 - kappa) * lo, (1.0 - kappa) * hi)
    return GapInclusion(original=(lo, hi), predicted=predicted, case_tag=tag)


def improved_inclusion(gap, kappa_minus: float, kappa_plus: float):
    """Gap inclusion for a straddling gap through the multiplicative shift.

    Both endpoints scale by (1 + kappa0_hat)(1 - kappa_prime_hat)
    = 1 + kappa_minus: the gap interval certified for H' is
    ((1 + kappa_minus) lo, (1 + kappa_minus) hi).  Contains the plain
    gap_inclusion interval with kappa = max(|kappa_minus|, kappa_plus)
    whenever the pair is asymmetric.
    """
    lo, hi = float(gap[0]), float(gap[1])
    if not (lo < 0.0 < hi):
        raise ValidationError(
            f"improved inclusion needs a gap straddling zero, got ({lo}, {hi})"
        )
    kappa0, kappa_prime = rescale_kappa(kappa_minus, kappa_plus)
    factor = (1.0 + kappa0) * (1.0 - kappa_prime)
    return factor * lo, factor * hi


def norm_bound_interval(gap, a: float, norm_j1: float):
    """Uniform inclusion for a norm-bounded perturbation ||S|| <= a.

    Returns (lo + a ||J1||, hi - a ||J1||): each endpoint moves inward by
    the same absolute amount regardless of how far the gap sits from
    zero.  Crossed endpoints mean the certified interval is empty.
    """
    if a < 0.0:
        raise ValidationError(f"perturbation norm a = {a} must be >= 0")
    lo, hi = float(gap[0]), float(gap[1])
    return lo + a * norm_j1, hi - a * norm_j1


# ---------------------------------------------------------------------------
# block structure


@dataclass(frozen=True)
class BlockStructure:
    """Constants from the block Cholesky factorization of [[I, A^T], [A, I]].

    a_minus / a_plus bound the (1,1) block of the congruence-transformed
    perturbation, norm_b is ||dA (I - A^T A)^(-1/2)|| and norm_b_bound its
    closed-form majorant ||dA|| / sqrt(1 - b^2).  kappa_minus / kappa_plus
    are the certified form-quotient extremes built from the actual norms.
    """

    a_minus: float
    a_plus: float
    norm_b: float
    norm_b_bound: float
    kappa_minus: float
    kappa_plus: float

    def t_bound(self, a: float, w: float | None = None) -> float:
        """Arrow-matrix norm estimate (a + sqrt(a^2 + 4 w^2)) / 2.

        Defaults to the conservative w = norm_b_bound, under which
        a = 2 b ||dA|| / (1 - b^2) reproduces ||dA|| / (1 - b).
        """
        return t_norm_bound(a, self.norm_b_bound if w is None else w)


def block_structure_analysis(a_matrix, delta_a) -> BlockStructure:
    """Extreme bounds on dg/g exploiting the off-diagonal block structure.

    Forms M11 = -(I - A^T A)^(-1/2) (dA^T A + A^T dA) (I - A^T A)^(-1/2)
    and B = dA (I - A^T A)^(-1/2); the certified form-quotient range is
    [(a_minus - sqrt(a_minus^2 + 4||B||^2))/2,
     (a_plus + sqrt(a_plus^2 + 4||B||^2))/2].
    """
    a_matrix = np.asarray(a_matrix, dtype=float)
    delta_a = np.asarray(delta_a, dtype=float)
    b = spectral_norm(a_matrix)
    if b >= 1.0:
        raise ContractionNotLessThanOne(f"||A|| = {b} is not < 1")
    s = symmetrize(np.eye(a_matrix.shape[0]) - a_matrix.T @ a_matrix)
    w, p = np.linalg.eigh(s)
    inv_root = (p / np.sqrt(w)) @ p.T
    mixed = symmetrize(delta_a.T @ a_matrix + a_matrix.T @ delta_a)
    m11 = symmetrize(-inv_root @ mixed @ inv_root)
    eigs = np.linalg.eigvalsh(m11)
    a_minus, a_plus = float(eigs[0]), float(eigs[-1])
    norm_b = spectral_norm(delta_a @ inv_root)
    c = spectral_norm(delta_a)
    return BlockStructure(
        a_minus=a_minus,
        a_plus=a_plus,
        norm_b=norm_b,
        norm_b_bound=c / math.sqrt(1.0 - b * b),
        kappa_minus=0.5 * (a_minus - math.sqrt(a_minus**2 + 4.0 * norm_b**2)),
        kappa_plus=0.5 * (a_plus + math.sqrt(a_plus**2 + 4.0 * norm_b**2)),
    )


# ---------------------------------------------------------------------------
# the bundle


def perturbation_constants(
    system: KleinGordonSystem, pert, exact: bool = True
) -> KappaBundle:
    """Evaluate every applicable constant for one system and perturbation.

    The validity flag of each entry records whether its hypothesis holds
    and, where the statement needs it, whether the value is below one;
    invalid entries keep their value for tabulation.  ``exact=False``
    skips the generalized eigenproblem (the only dense 2n-sized solve).
    """
    b = system.contraction
    if b >= 1.0:
        raise ContractionNotLessThanOne(f"contraction b = {b} is not < 1")
    pert = analyze_perturbation(system, pert)
    c = pert.c

    k_gen = kappa_general(c, b)
    k_sum = kappa_sum(c, b)
    c_loose = spectral_norm(pert.delta_v) * spectral_norm(system.u_inv_sqrt)
    k_prod = kappa_general(c_loose, b)
    k_rel = kappa_relative(pert.nu, b) if pert.nu is not None else None

    structural_ok = b * b + c * c < 1.0
    k_dis = kappa_disjoint(c, b) if (pert.disjoint and structural_ok) else None
    k_sgn = (
        kappa_signed_pair(c, b, pert.signed)
        if (pert.signed is not None and structural_ok)
        else None
    )

    k_exact = None
    if exact:
        k_exact = exact_kappa_pm(system.gram_shifted(), delta_gram(system, pert))

    bundle_pair = k_exact if k_exact is not None else (k_sgn or (-k_gen, k_gen))
    if bundle_pair[0] > -1.0:
        k0_hat, kp_hat = rescale_kappa(*bundle_pair)
    else:
        k0_hat, kp_hat = None, None

    valid = {
        "kappa_general": k_gen < 1.0,
        "kappa_sum": k_sum < 1.0,
        "kappa_norm_product": k_prod < 1.0,
        "kappa_relative": k_rel is not None and system.shift == 0.0 and k_rel < 1.0,
        "kappa_disjoint": k_dis is not None,
        "kappa_signed": k_sgn is not None and k_sgn[0] > -1.0,
        "kappa_exact": k_exact is not None and k_exact[0] > -1.0,
        "kappa_hats": k0_hat is not None,
    }
    return KappaBundle(
        b=b,
        c=c,
        kappa_general=k_gen,
        kappa_sum=k_sum,
        kappa_norm_product=k_prod,
        kappa_relative=k_rel,
        kappa_disjoint=k_dis,
        kappa_signed=k_sgn,
        kappa_exact=k_exact,
        kappa0_hat=k0_hat,
        kappa_prime_hat=kp_hat,
        valid=valid,
    )


# ---------------------------------------------------------------------------
# per-eigenvalue intervals and verification


def eigenvalue_interval_bounds(report: SpectrumReport, kappa: float):
    """Two-sided interval for each eigenvalue under |dg| <= kappa g.

    Works in the shifted frame: for s = lam - mu the perturbed partner
    stays within mu + [s (1-kappa), s (1+kappa)] (endpoints ordered per
    the sign of s).  Returns an (2n, 2) array of (lo, hi) rows aligned
    with report.eigenvalues.
    """
    if not 0.0 <= kappa < 1.0:
        raise KappaOutOfRange(f"kappa = {kappa} must lie in [0, 1)")
    lam = np.real(report.eigenvalues)
    s = lam - report.shift
    left = report.shift + s * (1.0 - kappa)
    right = report.shift + s * (1.0 + kappa)
    return np.stack([np.minimum(left, right), np.maximum(left, right)], axis=1)


@dataclass(frozen=True)
class KappaCheck:
    """One predicted bound compared against the true deviations."""

    name: str
    value: object  # float or (kappa_minus, kappa_plus)
    applicable: bool
    passed: bool


@dataclass(frozen=True)
class VerificationReport:
    """True relative eigenvalue deviations against every predicted bound.

    Deviations are measured in the shifted frame,
    |lam'_k - lam_k| / |lam_k - mu|, with eigenvalues of both systems
    paired in ascending order (identical to the order convention whenever
    both spectra put the same count on each side of the shift).
    """

    shift: float
    eigenvalues: np.ndarray
    eigenvalues_perturbed: np.ndarray
    deviations: np.ndarray
    signed_deviations: np.ndarray
    max_deviation: float
    bundle: KappaBundle
    checks: tuple
    real_spectrum: bool
    real_spectrum_perturbed: bool
    side_counts_match: bool


#: slack used only to keep pass/fail flags stable at exact equality
_CHECK_SLACK = 1e-12


def _pair_check(name, pair, applicable, signed_devs):
    lo, hi = pair
    ok = bool(
        np.all(signed_devs >= lo - _CHECK_SLACK)
        and np.all(signed_devs <= hi + _CHECK_SLACK)
    )
    return KappaCheck(name=name, value=(lo, hi), applicable=applicable, passed=ok)


def verify_bounds(spec: ModelSpec, pert, shift: float = 0.0) -> VerificationReport:
    """Compare predicted bounds against the exactly computed spectra.

    Assembles the system and its perturbation at the same shift, solves
    both spectra (general eigensolver with real parts when the
    contraction passes one), pairs eigenvalues in ascending order and
    evaluates each constant of the bundle as a pass/fail check.
    """
    if not isinstance(pert, PerturbationSpec):
        pert = PerturbationSpec(delta_v=pert)
    system = assemble_system(spec, shift)
    system_p = assemble_system(spec.perturbed(pert.delta_v), shift)
    rep = eigen_spectrum(system)
    rep_p = eigen_spectrum(system_p)

    lam = np.sort(np.real(rep.eigenvalues))
    lam_p = np.sort(np.real(rep_p.eigenvalues))
    side_match = int(np.sum(lam < shift)) == int(np.sum(lam_p < shift))

    denom = lam - shift
    with np.errstate(divide="ignore", invalid="ignore"):
        signed = (lam_p - lam) / denom
    # an eigenvalue sitting exactly at the shift: zero deviation if it
    # stayed, infinite relative deviation if it moved
    stuck = np.where(lam_p == lam, 0.0, np.inf)
    signed = np.where(denom != 0.0, signed, stuck)
    devs = np.abs(signed)
    max_dev = float(devs.max(initial=0.0))

    bundle = perturbation_constants(system, pert)
    checks = []
    for name in ("kappa_general", "kappa_sum", "kappa_norm_product"):
        value = getattr(bundle, name)
        checks.append(
            KappaCheck(
                name=name,
                value=value,
                applicable=bundle.valid[name],
                passed=bool(max_dev <= value + _CHECK_SLACK),
            )
        )
    for name in ("kappa_relative", "kappa_disjoint"):
        value = getattr(bundle, name)
        if value is not None:
            checks.append(
                KappaCheck(
                    name=name,
                    value=value,
                    applicable=bundle.valid[name],
                    passed=bool(max_dev <= value + _CHECK_SLACK),
                )
            )
    if bundle.kappa_signed is not None:
        checks.append(
            _pair_check(
                "kappa_signed", bundle.kappa_signed, bundle.valid["kappa_signed"], signed
            )
        )
    if bundle.kappa_exact is not None:
        checks.append(
            _pair_check(
                "kappa_exact", bundle.kappa_exact, bundle.valid["kappa_exact"], signed
            )
        )

    return VerificationReport(
        shift=float(shift),
        eigenvalues=lam,
        eigenvalues_perturbed=lam_p,
        deviations=devs,
        signed_deviations=signed,
        max_deviation=max_dev,
        bundle=bundle,
        checks=tuple(checks),
        real_spectrum=rep.is_real_spectrum,
        real_spectrum_perturbed=rep_p.is_real_spectrum,
        side_counts_match=side_match,
    )
