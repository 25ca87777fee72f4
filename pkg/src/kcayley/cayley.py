"""Cayley transforms at matrix scale.

Four transforms are provided: the ungraded forward/inverse pair exchanging
Hermitian matrices and unitaries, and the graded pair exchanging odd Hermitian
matrices anti-commuting with a base-point OSU e with OSUs.  The skew-adjoint
variant used for trivially graded algebras is included as well.

Domains of the inverse transforms are realized as SVD range projectors with a
relative rank cutoff; the compressed operators use the Moore-Penrose
pseudo-inverse, which is exact in finite dimensions.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from . import numkit
from .errors import PreconditionError, StructuralError
from .graded import Osu, assert_osu, check_osu
from .numkit import DEFAULT_TOL, ToleranceProfile, as_matrix, dagger, norm

__all__ = [
    "RestrictedOperator",
    "cayley",
    "cayley_inv",
    "graded_cayley",
    "graded_cayley_inv",
    "skew_cayley",
    "skew_cayley_inv",
]


@dataclasses.dataclass(frozen=True)
class RestrictedOperator:
    """An operator compressed to a numerically-closed submodule.

    ``projector`` is the Hermitian projection onto the submodule of the
    ambient space, ``basis`` an orthonormal column basis of it, ``compressed``
    the operator written in that basis (rank x rank), and ``ambient`` the
    same operator padded back into the ambient space (P op P).
    """

    projector: np.ndarray
    basis: np.ndarray
    compressed: np.ndarray
    ambient: np.ndarray
    empty: bool

    @property
    def rank(self) -> int:
        return self.basis.shape[1]


def _restricted(domain_matrix, operator_on_range, tol: ToleranceProfile,
                hermitize: bool = True) -> RestrictedOperator:
    q, p, rank = numkit.range_basis(domain_matrix, tol)
    if rank == 0:
        n = domain_matrix.shape[0]
        return RestrictedOperator(projector=np.zeros((n, n), dtype=complex),
                                  basis=q, compressed=np.zeros((0, 0), dtype=complex),
                                  ambient=np.zeros((n, n), dtype=complex), empty=True)
    comp = q.conj().T @ operator_on_range @ q
    if hermitize:
        res = norm(comp - dagger(comp))
        if res > DEFAULT_TOL.eq_tol * max(1.0, norm(comp)) * 100:
            raise StructuralError("restricted operator failed to be Hermitian on its range",
                                  residual=res)  # pragma: no cover
        comp = (comp + dagger(comp)) / 2.0
    return RestrictedOperator(projector=p, basis=q, compressed=comp,
                              ambient=q @ comp @ q.conj().T, empty=False)


def cayley(t, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """(T + i)(T - i)^{-1} for Hermitian T; always unitary."""
    mat = as_matrix(t, square=True)
    if not numkit.is_hermitian(mat, tol):
        raise StructuralError("cayley: input is not Hermitian",
                              residual=norm(mat - dagger(mat)))
    n = mat.shape[0]
    eye = np.eye(n)
    v = np.linalg.solve((mat - 1j * eye).T, (mat + 1j * eye).T).T
    return v


def cayley_inv(v, tol: ToleranceProfile = DEFAULT_TOL) -> RestrictedOperator:
    """i(V + 1)(V - 1)^{-1} compressed to the range of V - 1, for unitary V.

    V = 1 gives a legal empty restricted operator (zero-dimensional domain).
    """
    mat = as_matrix(v, square=True)
    if not numkit.is_unitary(mat, tol):
        raise StructuralError("cayley_inv: input is not unitary")
    n = mat.shape[0]
    diff = mat - np.eye(n)
    pinv = np.linalg.pinv(diff, rcond=tol.rank_tol)
    op = 1j * (mat + np.eye(n)) @ pinv
    return _restricted(diff, op, tol)


def graded_cayley(t, e: Osu, tol: ToleranceProfile = DEFAULT_TOL) -> Osu:
    """e(T + e)(T - e)^{-1} for odd Hermitian T anti-commuting with the OSU e.

    The output passes the full OSU axiom check, and satisfies the exact
    identity C_e(T) - e = 2 (T - e)^{-1}.
    """
    mat = as_matrix(t, square=True)
    if mat.shape[0] != e.dim:
        raise PreconditionError("graded_cayley: shape mismatch with base point")
    scale = max(1.0, norm(mat))
    herm = norm(mat - dagger(mat))
    if herm > tol.eq_tol * scale:
        raise StructuralError("graded_cayley: T is not Hermitian", residual=herm)
    odd = norm(e.grading.gamma @ mat @ e.grading.gamma + mat)
    if odd > tol.eq_tol * scale:
        raise StructuralError("graded_cayley: T is not odd", residual=odd)
    anti = norm(mat @ e.u + e.u @ mat)
    if anti > tol.eq_tol * scale:
        raise PreconditionError(
            "graded_cayley: T does not anti-commute with e; "
            "apply perturbation_average first", residual=anti)
    if e.real_structure is not None:
        real = norm(e.real_structure.apply(mat) - mat)
        if real > tol.eq_tol * scale:
            raise PreconditionError("graded_cayley: T is not real-compatible", residual=real)
    # (T - e)^2 = 1 + T^2, so T - e is always invertible
    u = e.u @ np.linalg.solve((mat - e.u).T, (mat + e.u).T).T
    u = (u + dagger(u)) / 2.0
    return assert_osu(u, e.grading, e.real_structure, tol, who="graded_cayley")


def graded_cayley_inv(u: Osu, e: Osu, tol: ToleranceProfile = DEFAULT_TOL) -> RestrictedOperator:
    """e(U + e)(U - e)^{-1} compressed to the range of U - e, for OSUs U, e.

    On that range the result is Hermitian, odd and anti-commutes with the
    compression of e; U = -e gives the zero operator on the full space and
    U = e the empty restricted operator.
    """
    for name, osu in (("U", u), ("e", e)):
        diag = check_osu(osu.u, osu.grading, osu.real_structure, tol)
        if not diag.passed:
            raise StructuralError(f"graded_cayley_inv: {name} fails the OSU axioms",
                                  residual=diag.worst)
    if u.dim != e.dim:
        raise PreconditionError("graded_cayley_inv: dimension mismatch")
    diff = u.u - e.u
    pinv = np.linalg.pinv(diff, rcond=tol.rank_tol)
    op = e.u @ (u.u + e.u) @ pinv
    return _restricted(diff, op, tol)


def skew_cayley(t_plus, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """(T+ + 1)(T+ - 1)^{-1} for skew-Hermitian T+; always unitary."""
    mat = as_matrix(t_plus, square=True)
    res = norm(mat + dagger(mat))
    if res > tol.eq_tol * max(1.0, norm(mat)):
        raise StructuralError("skew_cayley: input is not skew-Hermitian", residual=res)
    n = mat.shape[0]
    eye = np.eye(n)
    return np.linalg.solve((mat - eye).T, (mat + eye).T).T


def skew_cayley_inv(u, tol: ToleranceProfile = DEFAULT_TOL) -> RestrictedOperator:
    """(U + 1)(U - 1)^{-1} compressed to the range of U - 1; skew-Hermitian there."""
    mat = as_matrix(u, square=True)
    if not numkit.is_unitary(mat, tol):
        raise StructuralError("skew_cayley_inv: input is not unitary")
    n = mat.shape[0]
    diff = mat - np.eye(n)
    pinv = np.linalg.pinv(diff, rcond=tol.rank_tol)
    op = (mat + np.eye(n)) @ pinv
    q, p, rank = numkit.range_basis(diff, tol)
    if rank == 0:
        return RestrictedOperator(projector=np.zeros((n, n), dtype=complex), basis=q,
                                  compressed=np.zeros((0, 0), dtype=complex),
                                  ambient=np.zeros((n, n), dtype=complex), empty=True)
    comp = q.conj().T @ op @ q
    res = norm(comp + dagger(comp))
    if res > 100 * DEFAULT_TOL.eq_tol * max(1.0, norm(comp)):
        raise StructuralError("skew_cayley_inv: compression failed to be skew",
                              residual=res)  # pragma: no cover
    comp = (comp - dagger(comp)) / 2.0
    return RestrictedOperator(projector=p, basis=q, compressed=comp,
                              ambient=q @ comp @ q.conj().T, empty=False)
