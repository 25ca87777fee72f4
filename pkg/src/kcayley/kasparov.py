"""Finite Kasparov cycles, graph projections, and bulk-invariant
constructions for gapped Hamiltonians.

A finite Kasparov cycle is the matrix-scale stand-in for an unbounded
Kasparov module: a submodule projector inside an ambient space, an odd
Hermitian operator compressed to it, left Clifford generators, a grading and
an optional real structure.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from . import numkit
from .errors import (GaplessError, ParityError, PreconditionError,
                     StructuralError)
from .graded import Grading, Osu, RealStructure, assert_osu
from .numkit import (DEFAULT_TOL, ToleranceProfile, as_matrix, dagger,
                     eig_hermitian, norm)

__all__ = [
    "FiniteKasparovCycle",
    "Insulator",
    "SymmetryData",
    "flatten",
    "graph_projection",
    "bott_projector",
    "detect_symmetry_class",
    "chiral_reduction",
    "bulk_class",
    "BulkClass",
]


@dataclasses.dataclass(frozen=True)
class FiniteKasparovCycle:
    """Matrix model of an unbounded Kasparov cycle.

    ``module_projector`` is a Hermitian projection in the ambient space,
    ``basis`` an orthonormal column basis of its range, ``op`` the compressed
    operator in that basis and ``left_gens`` the compressed Clifford
    generators acting on the module (empty for complex left algebra C).
    """

    left_gens: tuple
    module_projector: np.ndarray
    basis: np.ndarray
    op: np.ndarray
    grading: Grading
    real_structure: RealStructure | None = None
    degenerate: bool = False
    diagnostics: dict = dataclasses.field(default_factory=dict)

    @property
    def module_dim(self) -> int:
        return self.basis.shape[1]

    @property
    def empty(self) -> bool:
        return self.module_dim == 0

    def validate(self, tol: ToleranceProfile = DEFAULT_TOL) -> dict:
        """Residuals of the cycle axioms on the module."""
        out = {}
        if self.empty:
            return out
        out["op_hermitian"] = norm(self.op - dagger(self.op))
        gamma = self.grading.gamma
        out["op_odd"] = norm(gamma @ self.op @ gamma + self.op)
        for j, g in enumerate(self.left_gens):
            out[f"gen{j}_anticommute"] = norm(g @ self.op + self.op @ g)
        return out


def _module_grading(basis: np.ndarray, ambient_grading: Grading,
                    tol: ToleranceProfile) -> Grading:
    comp = basis.conj().T @ ambient_grading.gamma @ basis
    return Grading.from_operator(comp, tol)


def _module_real(basis: np.ndarray, ambient: RealStructure | None,
                 tol: ToleranceProfile) -> RealStructure | None:
    if ambient is None:
        return None
    # S maps the module to itself when the data is real-compatible
    comp = basis.conj().T @ ambient.s @ basis.conj()
    try:
        return RealStructure.from_unitary(comp, tol)
    except StructuralError:
        return None


def make_cycle(left_gens_ambient, projector, op_ambient, grading: Grading,
               real_structure: RealStructure | None = None,
               degenerate: bool = False, tol: ToleranceProfile = DEFAULT_TOL,
               diagnostics: dict | None = None) -> FiniteKasparovCycle:
    """Compress ambient data to the module and validate the cycle axioms."""
    q, p, rank = numkit.range_basis(projector, tol)
    if rank == 0:
        n = projector.shape[0]
        return FiniteKasparovCycle(left_gens=(), module_projector=np.zeros((n, n), complex),
                                   basis=q, op=np.zeros((0, 0), complex),
                                   grading=Grading.trivial_on(0),
                                   real_structure=None, degenerate=True,
                                   diagnostics=diagnostics or {})
    op = q.conj().T @ as_matrix(op_ambient) @ q
    op = (op + dagger(op)) / 2.0
    gens = tuple(q.conj().T @ as_matrix(g) @ q for g in left_gens_ambient)
    cyc = FiniteKasparovCycle(
        left_gens=gens, module_projector=p, basis=q, op=op,
        grading=_module_grading(q, grading, tol),
        real_structure=_module_real(q, real_structure, tol),
        degenerate=degenerate, diagnostics=diagnostics or {})
    res = cyc.validate(tol)
    worst = max(res.values()) if res else 0.0
    if worst > 100 * tol.eq_tol * max(1.0, norm(op)):
        raise StructuralError("cycle axioms violated after compression", residual=worst)
    return cyc


@dataclasses.dataclass(frozen=True)
class SymmetryData:
    """Declared symmetries of a Hamiltonian, verified on construction."""

    real_structure: RealStructure | None = None
    grading: Grading | None = None
    trs: bool = False
    phs: bool = False
    chiral: bool = False

    def verify(self, h, tol: ToleranceProfile = DEFAULT_TOL) -> dict:
        """Residuals of every declared flag against h; raises on violation."""
        arr = as_matrix(h, square=True)
        scale = max(1.0, norm(arr))
        out = {}
        if self.trs or self.phs:
            if self.real_structure is None:
                raise PreconditionError("TRS/PHS flags need a real structure")
            img = self.real_structure.apply(arr)
            if self.trs:
                out["trs"] = norm(img - arr)
            if self.phs:
                out["phs"] = norm(img + arr)
        if self.chiral:
            if self.grading is None:
                raise PreconditionError("chiral flag needs a grading")
            g = self.grading.gamma
            out["chiral"] = norm(g @ arr @ g + arr)
        bad = {k: v for k, v in out.items() if v > tol.eq_tol * scale}
        if bad:
            raise StructuralError(f"declared symmetry flags fail: {sorted(bad)}",
                                  residual=max(bad.values()))
        return out


@dataclasses.dataclass(frozen=True)
class Insulator:
    """A gapped Hermitian matrix with its flattening h |h|^{-1} cached."""

    h: np.ndarray
    gap: float
    flattened: np.ndarray
    symmetry: SymmetryData

    @property
    def dim(self) -> int:
        return self.h.shape[0]


def flatten(h, symmetry: SymmetryData | None = None, gap_hint: float | None = None,
            tol: ToleranceProfile = DEFAULT_TOL) -> Insulator:
    """Spectrally flatten a gapped Hermitian matrix to h |h|^{-1}.

    The gap is measured, never trusted: ``gap_hint`` only cross-checks.
    Declared symmetry flags of h are re-verified and inherited.
    """
    arr = as_matrix(h, square=True)
    dec = eig_hermitian(arr, tol)
    gap = float(np.min(np.abs(dec.eigenvalues)))
    if gap <= tol.kernel_tol:
        raise GaplessError("flatten: no spectral gap at zero",
                           nearest_eigenvalue=gap)
    if gap_hint is not None and gap_hint > gap * (1 + 1e-6):
        raise PreconditionError("flatten: measured gap smaller than the hint",
                                measured=gap, hint=gap_hint)
    flat = (dec.eigenvectors * np.sign(dec.eigenvalues)) @ dec.eigenvectors.conj().T
    flat = (flat + dagger(flat)) / 2.0
    sym = symmetry or SymmetryData()
    sym.verify(arr, tol)
    sym.verify(flat, tol)
    return Insulator(h=arr, gap=gap, flattened=flat, symmetry=sym)


def graph_projection(t, grading: Grading, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Graph projection of the upper corner of an odd Hermitian operator.

    In a basis ordered by the grading the operator is off-diagonal with corner
    T+ : X+ -> X-, and the output is the 2x2 block projection
    [[ (1+T+*T+)^-1, (1+T+*T+)^-1 T+* ], [ T+ (1+T+*T+)^-1, T+ (1+T+*T+)^-1 T+* ]]
    written back in the ambient basis.
    """
    arr = as_matrix(t, square=True)
    from .graded import parity_decompose
    even_part, _ = parity_decompose(arr, grading)
    if norm(even_part) > tol.eq_tol * max(1.0, norm(arr)):
        raise ParityError("graph_projection: operator must be odd",
                          residual=norm(even_part))
    wplus, _, rp = numkit.range_basis(grading.plus_projector(), tol)
    wminus, _, rm = numkit.range_basis(grading.minus_projector(), tol)
    t_plus = wminus.conj().T @ arr @ wplus  # X+ -> X-
    inv = np.linalg.inv(np.eye(rp) + dagger(t_plus) @ t_plus)
    blocks = np.block([
        [inv, inv @ dagger(t_plus)],
        [t_plus @ inv, t_plus @ inv @ dagger(t_plus)],
    ])
    w = np.hstack([wplus, wminus])
    proj = w @ blocks @ w.conj().T
    res = numkit.is_projection(proj, tol).residual
    if res > 100 * tol.eq_tol:
        raise StructuralError("graph projection failed idempotency", residual=res)  # pragma: no cover
    return proj


def bott_projector(x: float, y: float) -> np.ndarray:
    """The rank-one plane projector p_B(x, y)."""
    denom = 1.0 + x * x + y * y
    return np.array([[1.0, x - 1j * y], [x + 1j * y, x * x + y * y]], dtype=complex) / denom


_CLASS_TABLE = {
    # (trs, phs, chiral) -> (label, invariant target)
    (False, False, False): ("A", "K_0 via Fermi projection / K_1 via unitary loops"),
    (False, False, True): ("AIII", "K_1 of the even corner"),
    (True, False, False): ("TRS", "KO_0 class of the Fermi projection"),
    (False, True, False): ("PHS", "KO_2 via h-bar (x) (1,-1) against a skew base point"),
    (True, False, True): ("TRS+chiral", "KO_1 via the skew Cayley transform"),
    (False, True, True): ("PHS+chiral", "KO_3-type class via the quaternionic corner"),
    (True, True, True): ("TRS+PHS+chiral", "KO-classes of the real chiral corner"),
}


def detect_symmetry_class(h, symmetry: SymmetryData,
                          tol: ToleranceProfile = DEFAULT_TOL) -> tuple[str, str]:
    """Verify the declared flags of h and return (class label, target group)."""
    symmetry.verify(h, tol)
    key = (symmetry.trs, symmetry.phs, symmetry.chiral)
    if key not in _CLASS_TABLE:
        raise PreconditionError(f"unsupported symmetry flag combination {key}")
    return _CLASS_TABLE[key]


def chiral_reduction(ins: Insulator, e: Osu, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """The even-corner unitary u_h = Pi+ e h-bar Pi+ of a chiral insulator.

    Returned in an orthonormal basis of the even subspace; unitary there.
    """
    if not ins.symmetry.chiral or ins.symmetry.grading is None:
        raise PreconditionError("chiral_reduction needs the chiral flag and a grading")
    grading = ins.symmetry.grading
    wplus, _, _ = numkit.range_basis(grading.plus_projector(), tol)
    u = wplus.conj().T @ e.u @ ins.flattened @ wplus
    res = numkit.is_unitary(u, tol).residual
    if res > 100 * tol.eq_tol:
        raise StructuralError("chiral reduction is not unitary on the even corner",
                              residual=res)
    return u


@dataclasses.dataclass(frozen=True)
class BulkClass:
    """Bulk invariant data for one insulator: the van Daele representative,
    its Kasparov cycle, and class-specific extras (Fermi projector, corner
    unitary)."""

    label: str
    target: str
    dk_class: "object"
    cycle: FiniteKasparovCycle | None
    fermi_projector: np.ndarray | None = None
    corner_unitary: np.ndarray | None = None
    base_point: Osu | None = None


def _cl1_rep():
    """Cl_1 generator rho = sigma_1 with grading sigma_3 on C^2."""
    from .clifford import PAULI_1, PAULI_3
    return PAULI_1, Grading.from_operator(PAULI_3)


def bulk_class(ins: Insulator, e: Osu | None = None, base_skew=None,
               tol: ToleranceProfile = DEFAULT_TOL) -> BulkClass:
    """Construct the bulk class of an insulator per its symmetry class.

    Class A / TRS: [h-bar (x) rho] - [1 (x) rho], routed through the
    inverse-Cayley cycle map; the Fermi projector (1 - h-bar)/2 is attached.
    AIII (chiral): the corner unitary u_h and its inverse-Cayley cycle.
    PHS: [h-bar (x) (1,-1)] - [iJ (x) (1,-1)] with a skew real base point J;
    representatives are certified (axioms and reality) but no Z2 number is
    evaluated.
    """
    from . import vandaele
    from .clifford import PAULI_1, PAULI_2, PAULI_3

    label, target = detect_symmetry_class(ins.h, ins.symmetry, tol)
    hbar = ins.flattened
    n = ins.dim

    if ins.symmetry.chiral:
        if e is None:
            raise PreconditionError("chiral bulk class needs the model OSU e")
        u_h = chiral_reduction(ins, e, tol)
        dk = vandaele.dk_from_unitary(u_h, tol)
        cyc = vandaele.dk_to_kk(dk, tol)
        return BulkClass(label=label, target=target, dk_class=dk, cycle=cyc,
                         corner_unitary=u_h, base_point=e)

    if ins.symmetry.phs:
        # Cl_{0,1} as C + C: (1,-1) -> sigma_3, flip grading Ad_{sigma_1},
        # real structure (a, b) -> (conj b, conj a).
        if base_skew is None:
            hbar = np.kron(hbar, np.eye(2))  # doubled model for the default J
            j = np.kron(np.eye(n), -1j * PAULI_2)
            rs_a = ins.symmetry.real_structure
            rs_a = RealStructure(s=np.kron(rs_a.s, np.eye(2)), sign=rs_a.sign)
        else:
            j = as_matrix(base_skew, square=True)
            rs_a = ins.symmetry.real_structure
            res = max(norm(j + dagger(j)), norm(j @ j + np.eye(j.shape[0])),
                      norm(rs_a.apply(j) - j))
            if res > tol.eq_tol * max(1.0, norm(j)):
                raise PreconditionError("base_skew must be real, skew-adjoint, square -1",
                                        residual=res)
        grading = Grading.from_operator(np.kron(np.eye(hbar.shape[0]), PAULI_1))
        rs = RealStructure(s=np.kron(rs_a.s, PAULI_1), sign=rs_a.sign)
        x = assert_osu(np.kron(hbar, PAULI_3), grading, rs, tol, who="bulk_class[PHS]")
        y = assert_osu(np.kron(1j * j, PAULI_3), grading, rs, tol, who="bulk_class[PHS]")
        dk = vandaele.DkClass(x_reps=(x,), y_reps=(y,))
        cyc = vandaele.dk_to_kk(dk, tol)
        return BulkClass(label=label, target=target, dk_class=dk, cycle=cyc,
                         base_point=y)

    # class A or TRS-only: h-bar (x) rho against 1 (x) rho
    rho, g1 = _cl1_rep()
    grading = Grading.from_operator(np.kron(np.eye(n), PAULI_3))
    rs = None
    if ins.symmetry.trs:
        rs_a = ins.symmetry.real_structure
        rs = RealStructure(s=np.kron(rs_a.s, np.eye(2)), sign=rs_a.sign)
    x = assert_osu(np.kron(hbar, rho), grading, rs, tol, who="bulk_class[A]")
    y = assert_osu(np.kron(np.eye(n), rho), grading, rs, tol, who="bulk_class[A]")
    dk = vandaele.DkClass(x_reps=(x,), y_reps=(y,))
    cyc = vandaele.dk_to_kk(dk, tol)
    fermi = (np.eye(n) - hbar) / 2.0
    return BulkClass(label=label, target=target, dk_class=dk, cycle=cyc,
                     fermi_projector=fermi, base_point=y)
