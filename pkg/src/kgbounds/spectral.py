"""Spectra of H = JG via selfadjoint similarity, sign operators, gaps.

When the contraction b = ||(V - mu) U^(-1)|| is safely below one the
shifted form G - mu*J is positive definite and, with W its principal
square root, H - mu*I is similar to the symmetric matrix M = W J W:

    W (H - mu*I) W^(-1) = M.

So the spectrum is real and computed by one symmetric eigensolve; the
eigenvectors are W^(-1) Q for the eigenvectors Q of M.  Near and beyond
b = 1 the square root degenerates, so a general dense eigensolver on H
takes over and non-real pairs are flagged instead of hidden.

The same route yields the sign operator J1 = sign(H - mu*I) =
W^(-1) sign(M) W, whose norm measures how far the similarity is from an
isometry (1 <= ||J1|| <= 1/(1-b)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    KleinGordonSystem,
    ModelSpec,
    apply_j,
    spectral_norm,
    symmetrize,
    _spd_eig,
)
from .exceptions import (
    EmptySpectrum,
    NonRealSpectrum,
    NotPositiveDefinite,
    ZeroInSpectrum,
)

__all__ = [
    "SpectrumReport",
    "SignOperator",
    "DefectWitness",
    "eigen_spectrum",
    "similarity_eigensolve",
    "sign_operator",
    "central_gap",
    "relative_distance",
    "pencil_residual",
    "defect_check",
]

#: the similarity route is used only while contraction < 1 - PATH_MARGIN
PATH_MARGIN = 0.02

#: |imag| above REAL_RTOL * ||H|| marks the spectrum as non-real
REAL_RTOL = 1e-8

#: eigenvalues within MULT_RTOL * ||H|| form one multiplicity cluster
MULT_RTOL = 1e-8

#: |(Jx, x)| / ||x||^2 below this marks an eigenvector as neutral
NEUTRAL_TOL = 1e-6


@dataclass(frozen=True)
class SpectrumReport:
    """Classified spectrum of one assembled system.

    ``eigenvalues`` is sorted ascending (by real part when non-real) and
    aligned column-wise with ``eigenvectors`` (unit 2-norm columns).
    ``sign_types`` holds 'positive' / 'negative' / 'neutral' per the sign
    of (Jx, x).  ``positive_ordered`` / ``negative_ordered`` list the
    eigenvalues right/left of the shift, ordered away from it.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)
    sign_types: tuple
    positive_ordered: np.ndarray
    negative_ordered: np.ndarray
    central_gap: tuple
    defective: bool
    residual_max: float
    is_real_spectrum: bool
    shift: float
    solver_path: str  # 'similarity' or 'direct'


@dataclass(frozen=True)
class SignOperator:
    """J1 = sign(H - mu*I) and its spectral norm."""

    j1: np.ndarray
    norm_j1: float


@dataclass(frozen=True)
class DefectWitness:
    """An eigenvalue flagged as defective and the offending eigenvector."""

    eigenvalue: complex
    vector: np.ndarray = field(repr=False)
    reason: str


def _ham_scale(h) -> float:
    """Spectral norm of H, or a cheap upper estimate for large orders."""
    h = np.asarray(h)
    if h.shape[0] <= 256:
        return float(np.linalg.norm(h, 2))
    one = np.abs(h).sum(axis=0).max()
    inf = np.abs(h).sum(axis=1).max()
    return float(np.sqrt(one * inf))


def _shifted_root(gram, shift: float):
    """Eigen-factorized W = (G - shift*J)^(1/2); returns (W, W^(-1))."""
    g = np.asarray(gram, dtype=float).copy()
    n = g.shape[0] // 2
    idx = np.arange(n)
    g[idx, idx + n] -= shift
    g[idx + n, idx] -= shift
    w, p = _spd_eig(g, "gram - shift*J")
    root = np.sqrt(w)
    return symmetrize((p * root) @ p.T), symmetrize((p / root) @ p.T)


def similarity_eigensolve(gram, shift: float = 0.0):
    """Eigenpairs of J G from the symmetric matrix W J W, W = (G-shift*J)^(1/2).

    Returns (eigenvalues ascending, eigenvectors as unit columns).  Raises
    NotPositiveDefinite when G - shift*J is not positive definite.
    """
    big_w, big_w_inv = _shifted_root(gram, shift)
    m = symmetrize(big_w @ apply_j(big_w))
    lam, q = np.linalg.eigh(m)
    vecs = big_w_inv @ q
    vecs /= np.linalg.norm(vecs, axis=0)
    return lam + shift, vecs


def _classify(eigenvalues, eigenvectors, shift):
    signs = []
    for k in range(eigenvectors.shape[1]):
        x = eigenvectors[:, k]
        s = np.real(np.vdot(x, apply_j(x))) / np.real(np.vdot(x, x))
        if s > NEUTRAL_TOL:
            signs.append("positive")
        elif s < -NEUTRAL_TOL:
            signs.append("negative")
        else:
            signs.append("neutral")
    re = np.real(eigenvalues)
    pos = np.sort(re[re > shift])
    neg = np.sort(re[re < shift])[::-1]
    lo = float(neg[0]) if neg.size else -np.inf
    hi = float(pos[0]) if pos.size else np.inf
    return tuple(signs), pos, neg, (lo, hi)


def _cluster_defects(eigenvalues, hamiltonian, scale):
    """Witnesses for repeated eigenvalues with too few eigenvectors."""
    tol = MULT_RTOL * scale
    order = np.argsort(np.real(eigenvalues))
    lam = np.asarray(eigenvalues)[order]
    witnesses = []
    start = 0
    for k in range(1, lam.size + 1):
        if k < lam.size and abs(lam[k] - lam[k - 1]) <= tol:
            continue
        cluster = lam[start:k]
        start = k
        if cluster.size < 2:
            continue
        center = cluster.mean()
        shifted = hamiltonian - center * np.eye(hamiltonian.shape[0])
        sv = np.linalg.svd(shifted, compute_uv=False)
        geometric = int(np.sum(sv < tol))
        if geometric < cluster.size:
            null_vec = np.linalg.svd(shifted)[2][-1].conj()
            witnesses.append(
                DefectWitness(complex(center), null_vec, "multiplicity-defect")
            )
    return witnesses


def _neutral_defects(eigenvalues, eigenvectors, sign_types):
    witnesses = []
    for k, tag in enumerate(sign_types):
        if tag == "neutral":
            witnesses.append(
                DefectWitness(
                    complex(eigenvalues[k]), eigenvectors[:, k], "neutral-eigenvector"
                )
            )
    return witnesses


def eigen_spectrum(system: KleinGordonSystem) -> SpectrumReport:
    """Compute and classify the spectrum of the assembled Hamiltonian.

    Uses the selfadjoint similarity while contraction < 1 - PATH_MARGIN
    (so the spectrum is certified real); otherwise falls back to a dense
    general eigensolver on H and flags non-real pairs.
    """
    h = system.hamiltonian
    mu = system.shift
    path = "similarity"
    is_real = True
    if system.contraction < 1.0 - PATH_MARGIN:
        try:
            lam, vecs = similarity_eigensolve(system.gram, mu)
        except NotPositiveDefinite:
            path = "direct"
    else:
        path = "direct"
    if path == "direct":
        lam_c, vecs = np.linalg.eig(h)
        order = np.lexsort((lam_c.imag, lam_c.real))
        lam_c = lam_c[order]
        vecs = vecs[:, order]
        vecs /= np.linalg.norm(vecs, axis=0)
        is_real = bool(np.abs(lam_c.imag).max(initial=0.0) <= REAL_RTOL * _ham_scale(h))
        lam = lam_c.real if is_real else lam_c

    signs, pos, neg, gap = _classify(lam, vecs, mu)

    resid = h @ vecs - vecs * lam
    residual_max = float(np.linalg.norm(resid, axis=0).max())

    defective = bool(_neutral_defects(lam, vecs, signs))
    # the similarity route certifies a symmetric-similar, hence
    # semisimple, operator; multiplicity defects can only arise on the
    # direct path
    if not defective and is_real and path == "direct":
        scale = _ham_scale(h)
        lam_sorted = np.sort(np.real(lam))
        if np.any(np.diff(lam_sorted) <= MULT_RTOL * scale):
            defective = bool(_cluster_defects(lam, h, scale))

    return SpectrumReport(
        eigenvalues=lam,
        eigenvectors=vecs,
        sign_types=signs,
        positive_ordered=pos,
        negative_ordered=neg,
        central_gap=gap,
        defective=defective,
        residual_max=residual_max,
        is_real_spectrum=is_real,
        shift=mu,
        solver_path=path,
    )


def sign_operator(system: KleinGordonSystem) -> SignOperator:
    """J1 = sign(H - mu*I) computed spectrally through the similarity.

    J1 = W^(-1) sign(W J W) W; requires G - mu*J positive definite, which
    holds whenever the contraction is below one.
    """
    big_w, big_w_inv = _shifted_root(system.gram, system.shift)
    m = symmetrize(big_w @ apply_j(big_w))
    lam, q = np.linalg.eigh(m)
    sign_m = (q * np.sign(lam)) @ q.T
    j1 = big_w_inv @ sign_m @ big_w
    return SignOperator(j1=j1, norm_j1=spectral_norm(j1))


def central_gap(report: SpectrumReport, shift: float):
    """The open interval around the shift free of spectrum.

    Returns (largest eigenvalue < shift, smallest eigenvalue > shift),
    with -inf/+inf on an empty side.  Eigenvalues exactly at the shift
    belong to neither side.  Requires a real spectrum.
    """
    if not report.is_real_spectrum:
        raise NonRealSpectrum(
            "central gap is undefined: the computed spectrum has non-real pairs"
        )
    lam = np.real(report.eigenvalues)
    below = lam[lam < shift]
    above = lam[lam > shift]
    lo = float(below.max()) if below.size else -np.inf
    hi = float(above.min()) if above.size else np.inf
    return lo, hi


def relative_distance(lam: float, spectrum) -> float:
    """inf over the spectrum of |(s - lam) / s|."""
    s = np.atleast_1d(np.asarray(spectrum, dtype=float))
    if s.size == 0:
        raise EmptySpectrum("relative distance against an empty spectrum")
    if np.any(s == 0.0):
        raise ZeroInSpectrum("relative distance undefined when 0 is in the spectrum")
    return float(np.min(np.abs((s - lam) / s)))


def pencil_residual(spec: ModelSpec, lam) -> float:
    """Smallest singular value of (lam*I - V)^2 - U^2.

    Vanishes exactly at the eigenvalues of H, so this is an independent
    cross-check on any eigensolver output; accepts complex lam.
    """
    n = spec.order
    shifted = complex(lam) * np.eye(n) - spec.v
    q = shifted @ shifted - spec.u_squared
    return float(np.linalg.svd(q, compute_uv=False)[-1])


def defect_check(system: KleinGordonSystem, report: SpectrumReport):
    """Flag defective or near-defective eigenvalues.

    An eigenvalue is flagged when its eigenvector is J-neutral
    (|(Jx, x)| / ||x||^2 < NEUTRAL_TOL) or when a repeated eigenvalue has
    geometric multiplicity below its cluster size.  Returns
    (flag, witness) with the offending eigenvalue and vector, or
    (False, None).
    """
    witnesses = _neutral_defects(
        report.eigenvalues, report.eigenvectors, report.sign_types
    )
    if not witnesses:
        scale = _ham_scale(system.hamiltonian)
        witnesses = _cluster_defects(report.eigenvalues, system.hamiltonian, scale)
    if witnesses:
        return True, witnesses[0]
    return False, None
