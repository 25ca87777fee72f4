"""Van Daele class representatives and the cycle-level maps between them and
finite Kasparov cycles.

A class is a formal difference [x] - [y] of OSU representative lists; group
bookkeeping is representative-list normalization with explicit base-point
padding, never abstract group elements.  Homotopy equivalence of OSUs is not
decided in general: comparisons are certified only through computable
invariants or explicitly exhibited paths.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from . import numkit
from .cayley import graded_cayley, graded_cayley_inv
from .errors import CompositionError, ParityError, PreconditionError, StructuralError
from .clifford import PAULI_1, PAULI_3
from .graded import (Grading, Osu, RealStructure, assert_osu, check_osu,
                     direct_sum, perturbation_average)
from .kasparov import FiniteKasparovCycle, make_cycle
from .numkit import DEFAULT_TOL, ToleranceProfile, as_matrix, dagger, norm

__all__ = [
    "DkClass",
    "STABILIZATION_CAP",
    "dk_from_unitary",
    "ubiquitous_iso",
    "excision_conjugate",
    "psi_e",
    "psi_e_inv",
    "phi_e",
    "standard_osu_Z",
    "dk_to_kk",
    "kk_to_dk",
    "degenerate_osu_path",
    "ClassComparison",
    "compare_classes",
]

# padding by base points stops here; saturation is reported, not silent
STABILIZATION_CAP = 64


@dataclasses.dataclass(frozen=True)
class DkClass:
    """Formal difference [x_1 + x_2 + ...] - [y_1 + y_2 + ...] of OSUs."""

    x_reps: tuple
    y_reps: tuple
    base_point: Osu | None = None
    diagnostics: dict = dataclasses.field(default_factory=dict, compare=False)

    def __post_init__(self):
        dx = sum(o.dim for o in self.x_reps)
        dy = sum(o.dim for o in self.y_reps)
        if dx != dy:
            raise CompositionError(
                f"class violates the dimension-kernel condition: d(x)={dx}, d(y)={dy}")

    @property
    def dim(self) -> int:
        return sum(o.dim for o in self.x_reps)

    def x_sum(self, tol: ToleranceProfile = DEFAULT_TOL) -> Osu:
        return self.x_reps[0] if len(self.x_reps) == 1 else direct_sum(self.x_reps, tol)

    def y_sum(self, tol: ToleranceProfile = DEFAULT_TOL) -> Osu:
        return self.y_reps[0] if len(self.y_reps) == 1 else direct_sum(self.y_reps, tol)

    def pad(self, copies: int = 1) -> "DkClass":
        """Stabilize by padding both sides with the base point."""
        if self.base_point is None:
            raise PreconditionError("padding requires a base point")
        if self.dim + copies * self.base_point.dim > STABILIZATION_CAP:
            raise PreconditionError(
                "stabilization cap saturated", cap=STABILIZATION_CAP)
        pads = (self.base_point,) * copies
        return DkClass(x_reps=self.x_reps + pads, y_reps=self.y_reps + pads,
                       base_point=self.base_point)


def dk_from_unitary(u, tol: ToleranceProfile = DEFAULT_TOL) -> DkClass:
    """Class of a plain unitary over a trivially graded algebra.

    Uses the off-diagonal doubling [offdiag(u*, u)] - [sigma_1-type], the
    standard identification of K_1 inside van Daele K-theory.
    """
    mat = as_matrix(u, square=True)
    if not numkit.is_unitary(mat, tol):
        raise StructuralError("dk_from_unitary: input is not unitary")
    n = mat.shape[0]
    grading = Grading.from_operator(np.kron(PAULI_3, np.eye(n)))
    x = np.block([[np.zeros((n, n)), dagger(mat)], [mat, np.zeros((n, n))]])
    y = np.kron(PAULI_1, np.eye(n))
    return DkClass(
        x_reps=(assert_osu(x, grading, tol=tol, who="dk_from_unitary"),),
        y_reps=(assert_osu(y, grading, tol=tol, who="dk_from_unitary"),),
        base_point=assert_osu(y, grading, tol=tol, who="dk_from_unitary"),
    )


def ubiquitous_iso(c: DkClass, tol: ToleranceProfile = DEFAULT_TOL) -> DkClass:
    """[x] - [y]  ->  [diag(x, y)] - [antidiag(1, 1)] over the doubled space.

    The doubled space carries the graded-tensor grading Gamma (x) sigma_3 of
    the Clifford doubling, and the entrywise real structure when present.
    """
    x, y = c.x_sum(tol), c.y_sum(tol)
    if x.dim != y.dim:
        raise CompositionError("ubiquitous_iso needs equal-dimension representatives")
    n = x.dim
    # block layout puts the Clifford C^2 factor outermost
    grading = Grading.from_operator(np.kron(PAULI_3, x.grading.gamma))
    rs = None
    if x.real_structure is not None and y.real_structure is not None:
        rs = RealStructure(s=np.kron(np.eye(2), x.real_structure.s),
                           sign=x.real_structure.sign)
    zeros = np.zeros((n, n))
    big_x = np.block([[x.u, zeros], [zeros, y.u]])
    big_y = np.block([[zeros, np.eye(n)], [np.eye(n), zeros]])
    return DkClass(
        x_reps=(assert_osu(big_x, grading, rs, tol, who="ubiquitous_iso"),),
        y_reps=(assert_osu(big_y, grading, rs, tol, who="ubiquitous_iso"),),
        base_point=assert_osu(big_y, grading, rs, tol, who="ubiquitous_iso"),
    )


def excision_conjugate(x: Osu, y: Osu, tol: ToleranceProfile = DEFAULT_TOL):
    """The rotation trick of the excision proof on the doubled representative.

    Returns (w, w diag(x,y) w*, base) where w = (1 - embed(y (x)^ sigma_1))/sqrt(2)
    is the even unitary built from y and base = embed(1 (x)^ sigma_1) is the
    reference OSU Gamma (x) sigma_1.  The conjugate differs from base only
    where x differs from y.
    """
    if x.dim != y.dim:
        raise CompositionError("excision_conjugate needs equal dimensions")
    n = x.dim
    gamma = y.grading.gamma
    # embed(y (x)^ sigma_1) in the block layout; squares to -1, so w is unitary
    k = np.kron(PAULI_1, y.u @ gamma)
    w = (np.eye(2 * n) - k) / np.sqrt(2.0)
    if not numkit.is_unitary(w, tol):
        raise StructuralError("excision rotation failed to be unitary")  # pragma: no cover
    zeros = np.zeros((n, n))
    big = np.block([[x.u, zeros], [zeros, y.u]])
    base = np.kron(PAULI_1, gamma)
    return w, w @ big @ dagger(w), base


def psi_e(a, cliff: np.ndarray, e: Osu, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """The base-point isomorphism A (x)^ Cl_{1,1} -> M_2(A) on a (x)^ cliff.

    ``cliff`` is a 2x2 matrix in the standard Cl_{1,1} representation
    (generators sigma_1 and -i sigma_2, grading sigma_3) and must be
    homogeneous; ``a`` is homogeneous in A.  Defining values:
    1 (x)^ sigma_1 -> antidiag(e, e),  1 (x)^ i sigma_2 -> [[0, e], [-e, 0]],
    x (x)^ 1 -> diag(x, (-1)^{|x|} e x e).
    """
    diag = check_osu(e.u, e.grading, e.real_structure, tol)
    if not diag.passed:
        raise StructuralError("psi_e: base point fails the OSU axioms", residual=diag.worst)
    amat = as_matrix(a, square=True)
    cmat = as_matrix(cliff, square=True)
    if cmat.shape != (2, 2):
        raise CompositionError("psi_e: Clifford part must be 2x2")
    # decompose cliff = alpha 1 + beta sigma_3 (even) + mu sigma_1 + nu (i sigma_2) (odd)
    alpha = (cmat[0, 0] + cmat[1, 1]) / 2.0
    beta = (cmat[0, 0] - cmat[1, 1]) / 2.0
    mu = (cmat[0, 1] + cmat[1, 0]) / 2.0
    nu = (cmat[0, 1] - cmat[1, 0]) / 2.0
    even_w = abs(alpha) + abs(beta)
    odd_w = abs(mu) + abs(nu)
    if even_w > tol.eq_tol and odd_w > tol.eq_tol:
        raise ParityError("psi_e: Clifford part is not homogeneous",
                          residual=min(even_w, odd_w))
    eu = e.u
    n = e.dim
    gamma = e.grading.gamma
    zero = np.zeros((n, n))
    # (-1)^{|a|} a extends linearly to Gamma a Gamma
    img_a = np.block([[amat, zero], [zero, eu @ gamma @ amat @ gamma @ eu]])
    one = np.block([[np.eye(n), zero], [zero, np.eye(n)]])
    img_s1 = np.block([[zero, eu], [eu, zero]])
    img_is2 = np.block([[zero, eu], [-eu, zero]])
    img_s3 = -img_s1 @ img_is2  # sigma_3 = -(sigma_1)(i sigma_2)
    cliff_img = alpha * one + beta * img_s3 + mu * img_s1 + nu * img_is2
    return img_a @ cliff_img


def psi_e_inv(m, e: Osu, tol: ToleranceProfile = DEFAULT_TOL):
    """Invert psi_e on a doubled matrix; returns the four coefficient blocks
    (a_1, a_s3, a_s1, a_is2) with m = sum psi_e(a_c (x)^ c)."""
    mat = as_matrix(m, square=True)
    n = e.dim
    if mat.shape != (2 * n, 2 * n):
        raise CompositionError("psi_e_inv: shape mismatch with base point")
    m11, m12 = mat[:n, :n], mat[:n, n:]
    m21, m22 = mat[n:, :n], mat[n:, n:]
    eu = e.u
    # psi_e(a (x)^ 1) + psi_e(b (x)^ s3) = diag(a + b, p(a - b)) with p = (-1)^|.| e . e
    # psi_e(c (x)^ s1) + psi_e(d (x)^ is2): offdiag((c + d) e-ish, ...)
    # invert blockwise using e^2 = 1:
    # upper-left = a + b ; lower-right = e (a' - b') e with parity signs folded in.
    # Work parity-sector by parity-sector.
    def split(mat_, par):
        ev, od = (mat_ + e.grading.gamma @ mat_ @ e.grading.gamma) / 2, \
                 (mat_ - e.grading.gamma @ mat_ @ e.grading.gamma) / 2
        return ev if par == 0 else od

    out = {}
    # diagonal sectors: m11 = a + b, m22 = sum_par (-1)^par e (a - b)_par e
    back22 = sum(((-1.0) ** par) * split(eu @ m22 @ eu, par) for par in (0, 1))
    out["1"] = (m11 + back22) / 2.0
    out["s3"] = (m11 - back22) / 2.0
    # off-diagonal: m12 = (c + d) pre-multiplied shape a e: m12 = (c + d) e*? from
    # psi_e(c (x)^ s1) = diag(c, (-1)^|c| e c e) antidiag(e, e) = [[0, c e], [(-1)^|c| e c, 0]]
    # psi_e(d (x)^ is2) likewise with [[0, d e], [-(-1)^|d| e d, 0]]
    c_plus_d = m12 @ eu
    signed = sum(((-1.0) ** par) * split(eu @ m21, par) for par in (0, 1))
    # signed = c - d
    out["s1"] = (c_plus_d + signed) / 2.0
    out["is2"] = (c_plus_d - signed) / 2.0
    return out


def phi_e(c: DkClass, tol: ToleranceProfile = DEFAULT_TOL) -> DkClass:
    """Base-pointed form: [x] - [y]  ->  [diag(x, -e y e)] relative to e + (-e)."""
    if c.base_point is None:
        raise PreconditionError("phi_e requires a base point")
    e = c.base_point
    x, y = c.x_sum(tol), c.y_sum(tol)
    if x.dim != e.dim or y.dim != e.dim:
        raise CompositionError("phi_e: representative and base-point dimensions differ")
    n = e.dim
    zeros = np.zeros((n, n))
    grading = Grading.from_operator(
        np.block([[x.grading.gamma, zeros], [zeros, y.grading.gamma]]))
    rs = None
    if x.real_structure is not None:
        rs = RealStructure(s=np.block([[x.real_structure.s, zeros],
                                       [zeros, y.real_structure.s]]),
                           sign=x.real_structure.sign)
    big = np.block([[x.u, zeros], [zeros, -e.u @ y.u @ e.u]])
    new_base = np.block([[e.u, zeros], [zeros, -e.u]])
    base_osu = assert_osu(new_base, grading, rs, tol, who="phi_e")
    return DkClass(x_reps=(assert_osu(big, grading, rs, tol, who="phi_e"),),
                   y_reps=(base_osu,), base_point=base_osu)


def standard_osu_Z(n: int, tol: ToleranceProfile = DEFAULT_TOL) -> Osu:
    """The standard OSU Id_n (x) sigma_1 with grading Id_n (x) sigma_3."""
    if n < 1:
        raise PreconditionError("standard_osu_Z needs n >= 1")
    grading = Grading.from_operator(np.kron(np.eye(n), PAULI_3))
    rs = RealStructure.conjugation(2 * n)
    return assert_osu(np.kron(np.eye(n), PAULI_1), grading, rs, tol, who="standard_osu_Z")


def dk_to_kk(c: DkClass, tol: ToleranceProfile = DEFAULT_TOL) -> FiniteKasparovCycle:
    """[V] - [W]  ->  the cycle (W, range(V - W), Ci_W(V)).

    The module is the range projector of V - W, the operator the graded
    inverse Cayley transform of V relative to W, and the left Clifford
    generator the compression of W.  V = W gives the (legal) empty cycle;
    anti-commuting V, W give a degenerate cycle with operator V.
    """
    v, w = c.x_sum(tol), c.y_sum(tol)
    if v.dim != w.dim:
        raise CompositionError("dk_to_kk needs equal-dimension representatives")
    rest = graded_cayley_inv(v, w, tol)
    scale = max(1.0, norm(v.u))
    degenerate = rest.empty or (
        norm(v.u @ w.u + w.u @ v.u) <= tol.eq_tol * scale
        and rest.rank == v.dim)
    return make_cycle(left_gens_ambient=(w.u,), projector=rest.projector,
                      op_ambient=rest.ambient, grading=v.grading,
                      real_structure=v.real_structure, degenerate=degenerate,
                      tol=tol, diagnostics={"module_rank": rest.rank})


def kk_to_dk(cycle: FiniteKasparovCycle, tol: ToleranceProfile = DEFAULT_TOL) -> DkClass:
    """(e, X, T)  ->  [C_e(T)] - [e], after normalizing the cycle.

    Normalization: the left generator must square to one on the module
    (otherwise the cycle restricts to the support of e^2, the rest being
    degenerate) and the operator is averaged to anti-commute with e.
    Reports the compactness surrogate ||2 (T - e)^{-1}|| with the class.
    """
    if not cycle.left_gens:
        raise PreconditionError("kk_to_dk needs a left Clifford generator")
    if cycle.empty:
        raise PreconditionError("kk_to_dk: empty module has no representative")
    e_mat = cycle.left_gens[0]
    m = cycle.module_dim
    esq = e_mat @ e_mat
    if norm(esq - np.eye(m)) > tol.eq_tol * max(1.0, norm(esq)):
        # restrict to the support of e^2 (a projection by cycle axioms)
        q, _, rank = numkit.range_basis(esq, tol)
        if rank == 0:
            raise StructuralError("left generator vanishes; nothing to normalize")
        e_mat = q.conj().T @ e_mat @ q
        t_mat = q.conj().T @ cycle.op @ q
        gamma = Grading.from_operator(q.conj().T @ cycle.grading.gamma @ q, tol)
        rs = None
    else:
        t_mat = cycle.op
        gamma = cycle.grading
        rs = cycle.real_structure
    e_osu = assert_osu(e_mat, gamma, rs, tol, who="kk_to_dk base point")
    t_mat = perturbation_average(t_mat, e_osu)
    x = graded_cayley(t_mat, e_osu, tol)
    # compactness surrogate: x - e = 2 (T - e)^{-1}, reported not asserted
    diff = x.u - e_osu.u
    return DkClass(x_reps=(x,), y_reps=(e_osu,), base_point=e_osu,
                   diagnostics={"resolvent_norm": norm(diff),
                                "resolvent_identity_residual": norm(
                                    diff @ (t_mat - e_osu.u) - 2.0 * np.eye(e_osu.dim))})


def degenerate_osu_path(t, e: Osu, steps: int = 32, tol: ToleranceProfile = DEFAULT_TOL):
    """The homotopy V(s) = e(T + s e)(T - s e)^{-1} joining e to C_e(T).

    Valid exactly when T is invertible (a degenerate cycle); every grid point
    is an OSU, which the caller should confirm via check_osu.
    """
    mat = as_matrix(t, square=True)
    smallest = float(np.min(np.abs(np.linalg.eigvalsh((mat + dagger(mat)) / 2))))
    if smallest <= tol.kernel_tol:
        raise PreconditionError("degenerate path needs an invertible operator",
                                smallest_eigenvalue=smallest)
    out = []
    for s in np.linspace(0.0, 1.0, steps):
        v = e.u @ np.linalg.solve((mat - s * e.u).T, (mat + s * e.u).T).T
        v = (v + dagger(v)) / 2.0
        out.append((s, v))
    return out


@dataclasses.dataclass(frozen=True)
class ClassComparison:
    verdict: str  # "equal-by-path" | "equal-by-invariants" | "unknown"
    detail: str


def compare_classes(c1: DkClass, c2: DkClass, invariant=None,
                    tol: ToleranceProfile = DEFAULT_TOL) -> ClassComparison:
    """Certified comparison of two classes.

    Tries, in order: identical representatives (constant path), an explicit
    rotation path (anti-commuting representatives), then equality of a
    caller-supplied computable invariant.  Anything else is "unknown" --
    homotopy of OSUs is a pi_0 problem the toolkit does not decide.
    """
    try:
        x1, y1 = c1.x_sum(tol), c1.y_sum(tol)
        x2, y2 = c2.x_sum(tol), c2.y_sum(tol)
        if x1.dim == x2.dim and y1.dim == y2.dim:
            if (norm(x1.u - x2.u) <= tol.eq_tol * max(1.0, norm(x1.u))
                    and norm(y1.u - y2.u) <= tol.eq_tol * max(1.0, norm(y1.u))):
                return ClassComparison("equal-by-path", "identical representatives")
            anti1 = norm(x1.u @ x2.u + x2.u @ x1.u)
            anti2 = norm(y1.u @ y2.u + y2.u @ y1.u)
            if max(anti1, anti2) <= tol.eq_tol * max(1.0, norm(x1.u)):
                return ClassComparison(
                    "equal-by-path", "representatives anti-commute pairwise; "
                    "rotation paths exist")
    except CompositionError:
        pass
    if invariant is not None:
        i1, i2 = invariant(c1), invariant(c2)
        if i1 == i2:
            return ClassComparison("equal-by-invariants", f"invariant value {i1}")
        return ClassComparison("unknown", f"invariants differ: {i1} vs {i2}")
    return ClassComparison("unknown", "no path exhibited and no invariant supplied")
