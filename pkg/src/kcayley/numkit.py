"""Dense complex linear-algebra kernel.

Everything downstream works with plain complex ``numpy`` arrays; this module
supplies the eigendecompositions, matrix functions, polar phases and
tolerance-profiled structural predicates those constructions rely on.
Matrices stay small (a few hundred rows at most), so all routines use full
dense factorizations.
"""

from __future__ import annotations

import dataclasses
import os

import numpy as np
import scipy.linalg

from .errors import ConditioningError, SingularityError, StructuralError

__all__ = [
    "ToleranceProfile",
    "DEFAULT_TOL",
    "tolerance_from_env",
    "as_matrix",
    "norm",
    "dagger",
    "HermitianEig",
    "eig_hermitian",
    "mat_func_hermitian",
    "polar_phase",
    "svd",
    "kernel_dim",
    "range_basis",
    "PredicateResult",
    "is_unitary",
    "is_hermitian",
    "is_projection",
]


@dataclasses.dataclass(frozen=True)
class ToleranceProfile:
    """Numerical tolerances used by every predicate in the toolkit.

    eq_tol      absolute entrywise comparison tolerance,
    rank_tol    relative singular-value cutoff for range/rank decisions,
    kernel_tol  absolute singular-value cutoff for kernel counting.

    Defaults are chosen for dimensions up to ~512 in double precision.
    """

    eq_tol: float = 1e-9
    rank_tol: float = 1e-10
    kernel_tol: float = 1e-8

    def __post_init__(self):
        for name in ("eq_tol", "rank_tol", "kernel_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_TOL = ToleranceProfile()


def tolerance_from_env(default: ToleranceProfile = DEFAULT_TOL) -> ToleranceProfile:
    """Build a profile honouring the KCAYLEY_TOL override.

    The override sets eq_tol; rank_tol and kernel_tol scale with the same
    ratios as the defaults (1/10 and x10).
    """
    raw = os.environ.get("KCAYLEY_TOL")
    if not raw:
        return default
    eq = float(raw)
    return ToleranceProfile(eq_tol=eq, rank_tol=eq / 10.0, kernel_tol=eq * 10.0)


def as_matrix(m, square: bool = False) -> np.ndarray:
    """Coerce to a 2d complex array, rejecting NaN/Inf entries."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise StructuralError(f"expected a matrix, got array of ndim {arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise StructuralError("matrix contains non-finite entries")
    if square and arr.shape[0] != arr.shape[1]:
        raise StructuralError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def norm(m) -> float:
    """Operator (spectral) norm."""
    arr = np.asarray(m, dtype=complex)
    if arr.size == 0:
        return 0.0
    return float(np.linalg.norm(arr, 2))


def dagger(m) -> np.ndarray:
    return np.asarray(m).conj().T


@dataclasses.dataclass(frozen=True)
class HermitianEig:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # unitary, columns are eigenvectors

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _require_hermitian(m: np.ndarray, tol: ToleranceProfile, who: str) -> np.ndarray:
    res = norm(m - dagger(m))
    scale = max(1.0, norm(m))
    if res > tol.eq_tol * scale:
        raise StructuralError(f"{who}: input is not Hermitian", residual=res)
    return (m + dagger(m)) / 2.0


def eig_hermitian(m, tol: ToleranceProfile = DEFAULT_TOL) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix with reconstruction guarantee."""
    arr = as_matrix(m, square=True)
    arr = _require_hermitian(arr, tol, "eig_hermitian")
    w, v = np.linalg.eigh(arr)
    out = HermitianEig(eigenvalues=w, eigenvectors=v)
    res = norm(out.reconstruct() - arr)
    if res > 1e-10 * max(1.0, norm(arr)):
        raise ConditioningError("eig_hermitian: reconstruction failed", residual=res)
    return out


def mat_func_hermitian(m, f, singularities=(), tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Apply a real scalar function to a Hermitian matrix via spectral calculus.

    ``singularities`` is an optional list of points where f is undefined;
    an eigenvalue within kernel_tol of one raises SingularityError.
    """
    dec = eig_hermitian(m, tol)
    w = dec.eigenvalues
    for s in singularities:
        bad = np.abs(w - s) < tol.kernel_tol
        if np.any(bad):
            raise SingularityError(
                "eigenvalue at a declared singularity of f",
                eigenvalue=float(w[bad][0]), singularity=float(s),
            )
    fw = np.array([f(x) for x in w], dtype=complex)
    v = dec.eigenvectors
    return (v * fw) @ v.conj().T


def polar_phase(m, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Unitary phase factor of an invertible matrix (M = phase * |M|)."""
    arr = as_matrix(m, square=True)
    w, s, zh = np.linalg.svd(arr)
    if s[0] == 0.0 or s[-1] <= tol.rank_tol * s[0]:
        raise ConditioningError(
            "polar_phase: matrix is numerically singular",
            smallest_sv=float(s[-1]), largest_sv=float(s[0]),
        )
    return w @ zh


def svd(m):
    """Thin wrapper so callers stay inside the toolkit namespace."""
    return np.linalg.svd(as_matrix(m))


def kernel_dim(m, tol: ToleranceProfile = DEFAULT_TOL) -> int:
    """Number of singular values below kernel_tol * ||M|| (|| . || or 1 if zero)."""
    arr = as_matrix(m)
    s = np.linalg.svd(arr, compute_uv=False)
    scale = s[0] if s.size and s[0] > 0 else 1.0
    return int(np.sum(s < tol.kernel_tol * scale))


def range_basis(m, tol: ToleranceProfile = DEFAULT_TOL):
    """Orthonormal basis Q of the numerical range of M plus the projector QQ*.

    Returns (Q, P, rank). rank uses the rank_tol relative cutoff.
    """
    arr = as_matrix(m)
    w, s, _ = np.linalg.svd(arr)
    if s.size == 0 or s[0] == 0.0:
        q = w[:, :0]
    else:
        # absolute floor guards against promoting machine noise to rank
        cutoff = max(tol.rank_tol * s[0], 1e-13)
        r = int(np.sum(s > cutoff))
        q = w[:, :r]
    p = q @ q.conj().T
    return q, p, q.shape[1]


@dataclasses.dataclass(frozen=True)
class PredicateResult:
    """Boolean predicate outcome together with the residual that decided it."""

    passed: bool
    residual: float
    tolerance: float

    def __bool__(self):
        return self.passed


def _predicate(res: float, scale: float, tol: ToleranceProfile) -> PredicateResult:
    thr = tol.eq_tol * max(1.0, scale)
    return PredicateResult(passed=res <= thr, residual=res, tolerance=thr)


def is_unitary(m, tol: ToleranceProfile = DEFAULT_TOL) -> PredicateResult:
    arr = as_matrix(m, square=True)
    res = norm(arr @ dagger(arr) - np.eye(arr.shape[0]))
    return _predicate(res, norm(arr), tol)


def is_hermitian(m, tol: ToleranceProfile = DEFAULT_TOL) -> PredicateResult:
    arr = as_matrix(m, square=True)
    res = norm(arr - dagger(arr))
    return _predicate(res, norm(arr), tol)


def is_projection(m, tol: ToleranceProfile = DEFAULT_TOL) -> PredicateResult:
    arr = as_matrix(m, square=True)
    res = max(norm(arr @ arr - arr), norm(arr - dagger(arr)))
    return _predicate(res, norm(arr), tol)


def expm_skew(m) -> np.ndarray:
    """exp of a skew-Hermitian matrix (unitary result)."""
    arr = as_matrix(m, square=True)
    return scipy.linalg.expm(arr)
