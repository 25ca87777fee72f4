"""Matrix representations of the Clifford algebras Cl_{p,q}, graded tensor
products realized by the grading-twist embedding, and the isomorphism that
pulls an inner grading out into an ordinary Clifford tensor factor.

Generator conventions
---------------------
All generators are odd for the stored grading.  The construction is the
recursive Pauli one: two new generators sigma_1 (x) 1 and sigma_2 (x) 1 are
prepended and existing generators are padded with a sigma_3 factor.  The
(1,1) algebra is pinned to generators sigma_1 and -i sigma_2 with grading
sigma_3 and entrywise-conjugation real structure.
"""

from __future__ import annotations

import dataclasses
import itertools

import numpy as np

from .errors import CapacityError, ParityError, PreconditionError
from .graded import Grading, RealStructure, parity_decompose, parity_of
from .numkit import DEFAULT_TOL, ToleranceProfile, as_matrix, norm

__all__ = [
    "PAULI_1",
    "PAULI_2",
    "PAULI_3",
    "CliffordAlgebra",
    "build_clifford",
    "orientation_element",
    "graded_tensor",
    "graded_tensor_grading",
    "eta",
]

PAULI_1 = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_3 = np.array([[1, 0], [0, -1]], dtype=complex)

_MAX_GENERATORS = 12


@dataclasses.dataclass(frozen=True)
class CliffordAlgebra:
    """Cl_{p,q} represented on a graded matrix space.

    e_gens are Hermitian with square +1, f_gens anti-Hermitian with square -1;
    all are odd, pairwise graded-anti-commute, and are fixed by the real
    structure.  ``dim`` is the algebra dimension 2^(p+q); the representation
    space is ``matrix_size`` dimensional.
    """

    p: int
    q: int
    dim: int
    e_gens: tuple
    f_gens: tuple
    grading: Grading
    real_structure: RealStructure

    @property
    def matrix_size(self) -> int:
        return self.grading.dim

    @property
    def generators(self) -> tuple:
        return self.e_gens + self.f_gens


def _hermitian_strings(n: int):
    """n pairwise-anticommuting Hermitian square-one matrices, all odd for the
    returned grading.  Returned as (list of Pauli-letter tuples, grading tuple)."""
    if n == 0:
        return [], ()
    if n <= 2:
        return [("s1",), ("s2",)][:n], ("s3",)
    sub, sub_gamma = _hermitian_strings(n - 2)
    gens = [("s1",) + ("id",) * len(sub_gamma), ("s2",) + ("id",) * len(sub_gamma)]
    gens += [("s3",) + g for g in sub]
    return gens, ("s3",) + sub_gamma


_LETTER = {"id": np.eye(2, dtype=complex), "s1": PAULI_1, "s2": PAULI_2, "s3": PAULI_3}
_REAL_LETTER = {"id": np.eye(2, dtype=complex), "s1": PAULI_1,
                "s2": -1j * PAULI_2, "s3": PAULI_3}
# conjugation flips the sign of exactly the s2 letter
_IMAGINARY = {"id": False, "s1": False, "s2": True, "s3": False}


def _string_matrix(letters, table=_LETTER) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for letter in letters:
        out = np.kron(out, table[letter])
    return out


def _strings_commute(a, b) -> bool:
    # Pauli strings commute iff they anticommute at an even number of slots.
    anti = 0
    for x, y in zip(a, b):
        if x != "id" and y != "id" and x != y:
            anti += 1
    return anti % 2 == 0


def _real_structure_string(gen_letters, want_commute, n_slots):
    """Find a real Pauli string S (letters from id/s1/-is2/s3) implementing the
    required commutation pattern with the generator strings."""
    for cand in itertools.product(("id", "s1", "s2", "s3"), repeat=n_slots):
        ok = True
        for g, want in zip(gen_letters, want_commute):
            if _strings_commute(cand, g) != want:
                ok = False
                break
        if ok:
            mat = _string_matrix(cand, _REAL_LETTER)
            sign = 1 if cand.count("s2") % 2 == 0 else -1
            return RealStructure(s=mat, sign=sign)
    raise PreconditionError("no Pauli-string real structure found")  # pragma: no cover


def build_clifford(p: int, q: int, tol: ToleranceProfile = DEFAULT_TOL) -> CliffordAlgebra:
    """Construct Cl_{p,q} on its graded Pauli representation."""
    if p < 0 or q < 0:
        raise PreconditionError("p and q must be non-negative")
    n = p + q
    if n > _MAX_GENERATORS:
        raise CapacityError(f"p+q={n} exceeds the generator cap {_MAX_GENERATORS}")
    strings, gamma_letters = _hermitian_strings(n)
    gamma = Grading.from_operator(_string_matrix(gamma_letters)) if n else Grading.trivial_on(1)

    e_strings = strings[:p]
    f_strings = strings[p:]
    e_gens = tuple(_string_matrix(s) for s in e_strings)
    f_gens = tuple(-1j * _string_matrix(s) for s in f_strings)

    if n == 0:
        rs = RealStructure.conjugation(1)
    else:
        # reality: conj flips imaginary strings; S must compensate so that
        # e^r = e and f^r = f (f = -i g makes the pattern flip for f's).
        want = []
        for s in e_strings:
            imag = sum(_IMAGINARY[x] for x in s) % 2 == 1
            want.append(not imag)
        for s in f_strings:
            imag = sum(_IMAGINARY[x] for x in s) % 2 == 1
            want.append(imag)
        rs = _real_structure_string(e_strings + f_strings, want, len(gamma_letters))

    alg = CliffordAlgebra(p=p, q=q, dim=2 ** n, e_gens=e_gens, f_gens=f_gens,
                          grading=gamma, real_structure=rs)
    _verify_relations(alg, tol)
    return alg


def _verify_relations(alg: CliffordAlgebra, tol: ToleranceProfile):
    eye = np.eye(alg.matrix_size)
    gens = list(alg.e_gens) + list(alg.f_gens)
    signs = [1.0] * alg.p + [-1.0] * alg.q
    worst = 0.0
    for i, (g, s) in enumerate(zip(gens, signs)):
        worst = max(worst, norm(g @ g - s * eye))
        worst = max(worst, norm(alg.grading.gamma @ g @ alg.grading.gamma + g))
        worst = max(worst, norm(alg.real_structure.apply(g) - g))
        for h in gens[i + 1:]:
            worst = max(worst, norm(g @ h + h @ g))
    if worst > tol.eq_tol:
        raise PreconditionError("Clifford relations violated", residual=worst)  # pragma: no cover


def orientation_element(alg: CliffordAlgebra) -> np.ndarray:
    """Ordered product e_1 ... e_p f_1 ... f_q of all generators."""
    if alg.p + alg.q == 0:
        raise PreconditionError("orientation element of the scalar algebra is undefined")
    out = np.eye(alg.matrix_size, dtype=complex)
    for g in alg.generators:
        out = out @ g
    return out


def graded_tensor(a, grading_a: Grading, b, grading_b: Grading,
                  decompose: bool = False, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """Embed a (x)^ b into the ordinary tensor product via the grading twist.

    For b homogeneous the embedding is a . Gamma_a^{|b|} (x) b, which is
    multiplicative with the Koszul sign.  Non-homogeneous b is handled by
    parity decomposition when ``decompose`` is set, otherwise it is an error.
    """
    a = as_matrix(a, square=True)
    b = as_matrix(b, square=True)
    try:
        pb = parity_of(b, grading_b, tol)
    except ParityError:
        if not decompose:
            raise
        b_even, b_odd = parity_decompose(b, grading_b)
        return (graded_tensor(a, grading_a, b_even, grading_b, tol=tol)
                + graded_tensor(a, grading_a, b_odd, grading_b, tol=tol))
    if not decompose:
        parity_of(a, grading_a, tol)  # enforce homogeneity of a as documented
    twist = grading_a.gamma if pb else np.eye(grading_a.dim)
    return np.kron(a @ twist, b)


def graded_tensor_grading(grading_a: Grading, grading_b: Grading) -> Grading:
    """Grading operator of the embedded graded tensor product."""
    return grading_a.tensor(grading_b)


def eta(b, k: int, grading: Grading, rho: np.ndarray = PAULI_1,
        tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """The isomorphism pulling an inner grading out of a Clifford factor.

    Maps the graded-tensor element b (x)^ rho^k (grading Ad_Gamma on the left
    factor) to b Gamma^k (x) rho^(k+|b|) in the ordinary tensor product with
    the left factor now trivially graded.  b must be homogeneous.
    """
    if k not in (0, 1):
        raise PreconditionError("k must be 0 or 1 (rho squares to one)")
    mat = as_matrix(b, square=True)
    pb = parity_of(mat, grading, tol)
    rho = as_matrix(rho, square=True)
    left = mat @ (grading.gamma if k else np.eye(grading.dim))
    power = (k + pb) % 2
    right = rho if power else np.eye(rho.shape[0], dtype=complex)
    return np.kron(left, right)


def graded_product_pair(b1, k1: int, b2, k2: int, grading: Grading,
                        tol: ToleranceProfile = DEFAULT_TOL):
    """Product of b1 (x)^ rho^{k1} and b2 (x)^ rho^{k2} as an abstract pair.

    Returns (b, k) with the Koszul sign folded into b; used to exercise the
    multiplicativity of :func:`eta` on basis elements.
    """
    p2 = parity_of(as_matrix(b2), grading, tol)
    sign = (-1) ** (k1 * p2)
    return sign * (as_matrix(b1) @ as_matrix(b2)), (k1 + k2) % 2
