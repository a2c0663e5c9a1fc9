"""Assembly of block Hamiltonians H = JG from matrix data (U^2, V).

The model data is a positive definite ``u_squared`` and a symmetric
potential ``v`` of the same order n.  From these we build the 2n x 2n
blocks

    H  = [[U^(1/2) V U^(-1/2), U], [U, U^(-1/2) V U^(1/2)]]
    J  = [[0, I], [I, 0]]
    G  = J H    (symmetric)
    H0 = [[0, U], [U, 0]]       with |H0| = diag(U, U)

together with the contraction data A = (V - mu) U^(-1) and
b = ||A||, which governs whether H - mu*I is similar to a selfadjoint
operator (b < 1 suffices).  For b < 1 the shifted quadratic form admits
the congruence

    G - mu*J = diag(U,U)^(1/2) [[I, A^T], [A, I]] diag(U,U)^(1/2).

Everything here is dense and desk-scale; all outputs are plain numpy
arrays inside frozen dataclasses and all functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionMismatch, NotPositiveDefinite, ValidationError

__all__ = [
    "ModelSpec",
    "KleinGordonSystem",
    "sqrt_spd",
    "assemble_system",
    "assemble_free",
    "operator_a",
    "contraction_bound",
    "optimize_shift",
    "j_matrix",
    "apply_j",
    "spectral_norm",
    "symmetrize",
]

#: relative symmetry slack: |a_ij - a_ji| <= SYMMETRY_RTOL * (1 + max|a|)
SYMMETRY_RTOL = 1e-12

#: a matrix counts as positive definite when min eig > PD_RTOL * ||m||
PD_RTOL = 1e-12


def spectral_norm(a) -> float:
    """Largest singular value of a dense matrix."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def symmetrize(a):
    """Average a matrix with its transpose to suppress rounding drift."""
    a = np.asarray(a, dtype=float)
    return 0.5 * (a + a.T)


def _as_square(a, name: str):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"{name} must be a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} contains non-finite entries")
    return a


def check_symmetric(a, name: str = "matrix"):
    """Validate approximate symmetry and return the symmetrized copy."""
    a = _as_square(a, name)
    scale = 1.0 + (np.abs(a).max() if a.size else 0.0)
    drift = np.abs(a - a.T).max() if a.size else 0.0
    if drift > SYMMETRY_RTOL * scale:
        raise ValidationError(
            f"{name} is not symmetric: max |a_ij - a_ji| = {drift:.3e} "
            f"exceeds {SYMMETRY_RTOL * scale:.3e}"
        )
    return symmetrize(a)


def j_matrix(n: int):
    """The block swap symmetry [[0, I], [I, 0]] of order 2n."""
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = np.eye(n)
    j[n:, :n] = np.eye(n)
    return j


def apply_j(x):
    """Apply the block swap to a vector or to the rows of a matrix.

    Equivalent to j_matrix(n) @ x without forming the product.
    """
    x = np.asarray(x)
    n = x.shape[0] // 2
    return np.concatenate([x[n:], x[:n]], axis=0)


def _spd_eig(m, name: str = "matrix"):
    """Eigendecomposition of a symmetric positive definite matrix.

    Raises NotPositiveDefinite when the smallest eigenvalue does not
    clear PD_RTOL * ||m||.
    """
    m = check_symmetric(m, name)
    w, p = np.linalg.eigh(m)
    norm = max(abs(w[0]), abs(w[-1]))
    if w[0] <= PD_RTOL * norm or w[0] <= 0.0:
        raise NotPositiveDefinite(
            f"{name} is not positive definite: min eigenvalue {w[0]:.3e} "
            f"(tolerance {PD_RTOL * norm:.3e})"
        )
    return w, p


def sqrt_spd(m, name: str = "matrix"):
    """Principal square root of a symmetric positive definite matrix.

    Computed from the full symmetric eigendecomposition; the result R is
    symmetric positive definite with R @ R = m to working accuracy.
    """
    w, p = _spd_eig(m, name)
    return symmetrize((p * np.sqrt(w)) @ p.T)


@dataclass(frozen=True)
class ModelSpec:
    """The model pair (U^2, V) as dense symmetric matrices.

    ``u_squared`` must be positive definite and of the same order as the
    symmetric potential ``v``.  Instances are immutable; the stored arrays
    are defensive read-only copies.
    """

    u_squared: np.ndarray
    v: np.ndarray
    label: str = ""

    def __post_init__(self):
        u2 = check_symmetric(self.u_squared, "u_squared")
        v = check_symmetric(self.v, "v")
        if u2.shape != v.shape:
            raise DimensionMismatch(
                f"u_squared has order {u2.shape[0]} but v has order {v.shape[0]}"
            )
        _spd_eig(u2, "u_squared")
        u2.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u_squared", u2)
        object.__setattr__(self, "v", v)

    @property
    def order(self) -> int:
        return self.u_squared.shape[0]

    def perturbed(self, delta_v) -> "ModelSpec":
        """A new spec with the potential replaced by v + delta_v."""
        delta_v = check_symmetric(delta_v, "delta_v")
        if delta_v.shape != self.v.shape:
            raise DimensionMismatch(
                f"delta_v has order {delta_v.shape[0]}, expected {self.order}"
            )
        label = f"{self.label}+perturbation" if self.label else ""
        return ModelSpec(self.u_squared, self.v + delta_v, label)


@dataclass(frozen=True)
class KleinGordonSystem:
    """Assembled 2n x 2n block operators for one model and shift.

    Fields
    ------
    n : block order (matrices are 2n x 2n)
    shift : the real spectral shift mu
    u_sqrt, u_inv_sqrt : principal square root of u_squared and its inverse
    hamiltonian : H
    gram : G = J H, symmetrized
    free_hamiltonian : H0 = [[0, U], [U, 0]]
    a_matrix : A = (V - mu) U^(-1)
    contraction : b = ||A||
    spec : the source model (kept for perturbation bookkeeping)
    """

    n: int
    shift: float
    u_sqrt: np.ndarray
    u_inv_sqrt: np.ndarray
    hamiltonian: np.ndarray
    gram: np.ndarray
    free_hamiltonian: np.ndarray
    a_matrix: np.ndarray
    contraction: float
    spec: ModelSpec = field(repr=False)

    def j(self):
        """The block swap symmetry matching this system's order."""
        return j_matrix(self.n)

    def gram_shifted(self):
        """G - mu*J, the positive definite form when contraction < 1."""
        g = self.gram.copy()
        n = self.n
        g[:n, n:] -= self.shift * np.eye(n)
        g[n:, :n] -= self.shift * np.eye(n)
        return g

    def u_min(self) -> float:
        """Smallest eigenvalue of U = sqrt(U^2)."""
        return float(np.linalg.eigvalsh(self.u_sqrt)[0])


def _u_powers(spec: ModelSpec):
    """U^(1/2), U^(-1/2), U, U^(-1) from one eigendecomposition of U^2."""
    w, p = _spd_eig(spec.u_squared, "u_squared")
    root = np.sqrt(w)          # eigenvalues of U
    quarter = np.sqrt(root)
    u = symmetrize((p * root) @ p.T)
    u_inv = symmetrize((p / root) @ p.T)
    u_half = symmetrize((p * quarter) @ p.T)
    u_half_inv = symmetrize((p / quarter) @ p.T)
    return u, u_inv, u_half, u_half_inv


def operator_a(spec: ModelSpec, shift: float = 0.0):
    """A = (V - shift*I) U^(-1) with U the principal root of u_squared."""
    _, u_inv, _, _ = _u_powers(spec)
    return (spec.v - shift * np.eye(spec.order)) @ u_inv


def contraction_bound(spec: ModelSpec, shift: float = 0.0) -> float:
    """b = ||(V - shift*I) U^(-1)||; may be >= 1, the caller decides."""
    return spectral_norm(operator_a(spec, shift))


def assemble_system(spec: ModelSpec, shift: float = 0.0) -> KleinGordonSystem:
    """Build the block operators H, G, H0 and the contraction data.

    The assembled gram matrix is explicitly symmetrized; J @ H equals G
    entrywise up to rounding.
    """
    u, u_inv, u_half, u_half_inv = _u_powers(spec)
    n = spec.order
    x = u_half @ spec.v @ u_half_inv          # U^(1/2) V U^(-1/2)
    hamiltonian = np.block([[x, u], [u, x.T]])
    gram = symmetrize(np.block([[u, x.T], [x, u]]))
    free = np.block([[np.zeros((n, n)), u], [u, np.zeros((n, n))]])
    a = (spec.v - shift * np.eye(n)) @ u_inv
    return KleinGordonSystem(
        n=n,
        shift=float(shift),
        u_sqrt=u,
        u_inv_sqrt=u_inv,
        hamiltonian=hamiltonian,
        gram=gram,
        free_hamiltonian=free,
        a_matrix=a,
        contraction=spectral_norm(a),
        spec=spec,
    )


def assemble_free(spec: ModelSpec):
    """The free Hamiltonian H0 = [[0, U], [U, 0]] and diag(U, U) = |H0|."""
    u, _, _, _ = _u_powers(spec)
    n = spec.order
    zero = np.zeros((n, n))
    free = np.block([[zero, u], [u, zero]])
    u_block = np.block([[u, zero], [zero, u]])
    return free, u_block


def optimize_shift(spec: ModelSpec, tol: float = 1e-10):
    """Minimize mu -> ||(V - mu) U^(-1)|| by ternary search.

    The objective is the norm of an affine matrix function of mu, hence
    convex, so a bracketed ternary search converges.  The bracket is
    [min eig V - ||U||, max eig V + ||U||].  Returns (shift, contraction).
    """
    u, u_inv, _, _ = _u_powers(spec)
    v_u_inv = spec.v @ u_inv
    u_norm = spectral_norm(u)
    v_eigs = np.linalg.eigvalsh(spec.v)

    def b_of(mu):
        return spectral_norm(v_u_inv - mu * u_inv)

    lo = float(v_eigs[0]) - u_norm
    hi = float(v_eigs[-1]) + u_norm
    while hi - lo > tol:
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if b_of(m1) <= b_of(m2):
            hi = m2
        else:
            lo = m1
    mu = 0.5 * (lo + hi)
    return mu, b_of(mu)
