"""Z2-graded matrix algebra: gradings, real structures and odd self-adjoint
unitaries (OSUs) with centralized axiom checking.

Every constructor in the toolkit that claims to produce an OSU routes its
output through :func:`check_osu`; silent drift of the OSU axioms would
invalidate every downstream class, so failures raise immediately.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from . import numkit
from .errors import CompositionError, ParityError, StructuralError
from .numkit import DEFAULT_TOL, ToleranceProfile, as_matrix, dagger, norm

__all__ = [
    "Grading",
    "RealStructure",
    "Osu",
    "OsuDiagnostics",
    "parity_decompose",
    "parity_of",
    "graded_commutator",
    "check_osu",
    "assert_osu",
    "direct_sum",
    "perturbation_average",
    "osu_rotation_path",
]


@dataclasses.dataclass(frozen=True)
class Grading:
    """A grading operator: Hermitian unitary with +-1 spectrum."""

    gamma: np.ndarray
    trivial: bool = False

    @classmethod
    def from_operator(cls, gamma, tol: ToleranceProfile = DEFAULT_TOL) -> "Grading":
        g = as_matrix(gamma, square=True)
        res = max(norm(g @ g - np.eye(g.shape[0])), norm(g - dagger(g)))
        if res > tol.eq_tol * max(1.0, norm(g)):
            raise StructuralError("grading operator is not a Hermitian unitary", residual=res)
        trivial = norm(g - np.eye(g.shape[0])) <= tol.eq_tol
        return cls(gamma=g, trivial=trivial)

    @classmethod
    def trivial_on(cls, n: int) -> "Grading":
        return cls(gamma=np.eye(n, dtype=complex), trivial=True)

    @property
    def dim(self) -> int:
        return self.gamma.shape[0]

    def plus_projector(self) -> np.ndarray:
        return (np.eye(self.dim) + self.gamma) / 2.0

    def minus_projector(self) -> np.ndarray:
        return (np.eye(self.dim) - self.gamma) / 2.0

    def tensor(self, other: "Grading") -> "Grading":
        return Grading(
            gamma=np.kron(self.gamma, other.gamma),
            trivial=self.trivial and other.trivial,
        )


@dataclasses.dataclass(frozen=True)
class RealStructure:
    """Antiunitary involution a -> S conj(a) S*, with S conj(S) = sign * 1."""

    s: np.ndarray
    sign: int = 1

    @classmethod
    def from_unitary(cls, s, tol: ToleranceProfile = DEFAULT_TOL) -> "RealStructure":
        mat = as_matrix(s, square=True)
        if not numkit.is_unitary(mat, tol):
            raise StructuralError("real structure implementer is not unitary")
        prod = mat @ mat.conj()
        n = mat.shape[0]
        if norm(prod - np.eye(n)) <= tol.eq_tol:
            sign = 1
        elif norm(prod + np.eye(n)) <= tol.eq_tol:
            sign = -1
        else:
            raise StructuralError(
                "S conj(S) is not +-1; the induced map is not involutive",
                residual=min(norm(prod - np.eye(n)), norm(prod + np.eye(n))),
            )
        return cls(s=mat, sign=sign)

    @classmethod
    def conjugation(cls, n: int) -> "RealStructure":
        """Plain entrywise complex conjugation."""
        return cls(s=np.eye(n, dtype=complex), sign=1)

    @property
    def dim(self) -> int:
        return self.s.shape[0]

    def apply(self, m) -> np.ndarray:
        arr = as_matrix(m)
        return self.s @ arr.conj() @ dagger(self.s)

    def tensor(self, other: "RealStructure") -> "RealStructure":
        return RealStructure(s=np.kron(self.s, other.s), sign=self.sign * other.sign)


def parity_decompose(m, grading: Grading):
    """Split M into (even, odd) parts: even = (M + G M G)/2."""
    arr = as_matrix(m, square=True)
    if arr.shape[0] != grading.dim:
        raise CompositionError(f"shape {arr.shape} does not match grading dim {grading.dim}")
    g = grading.gamma
    conj = g @ arr @ g
    return (arr + conj) / 2.0, (arr - conj) / 2.0


def parity_of(m, grading: Grading, tol: ToleranceProfile = DEFAULT_TOL) -> int:
    """Return 0 (even) or 1 (odd); raise ParityError if not homogeneous."""
    even, odd = parity_decompose(m, grading)
    scale = max(1.0, norm(m))
    ne, no = norm(even), norm(odd)
    if no <= tol.eq_tol * scale:
        return 0
    if ne <= tol.eq_tol * scale:
        return 1
    raise ParityError("operator is not homogeneous", residual=min(ne, no) / scale)


def graded_commutator(s, t, grading: Grading, tol: ToleranceProfile = DEFAULT_TOL) -> np.ndarray:
    """[S,T]_± = ST - (-1)^{|S||T|} TS for homogeneous S, T."""
    a, b = as_matrix(s), as_matrix(t)
    sign = (-1) ** (parity_of(a, grading, tol) * parity_of(b, grading, tol))
    return a @ b - sign * (b @ a)


@dataclasses.dataclass(frozen=True)
class OsuDiagnostics:
    """Residuals of the OSU axioms; passes iff all are below tolerance."""

    hermitian: float
    unitary: float
    square_one: float
    odd: float
    real: float | None
    tolerance: float

    @property
    def passed(self) -> bool:
        vals = [self.hermitian, self.unitary, self.square_one, self.odd]
        if self.real is not None:
            vals.append(self.real)
        return max(vals) <= self.tolerance

    @property
    def worst(self) -> float:
        vals = [self.hermitian, self.unitary, self.square_one, self.odd]
        if self.real is not None:
            vals.append(self.real)
        return max(vals)

    def __bool__(self):
        return self.passed


def check_osu(u, grading: Grading, real_structure: RealStructure | None = None,
              tol: ToleranceProfile = DEFAULT_TOL) -> OsuDiagnostics:
    """Report residuals for the OSU axioms U=U*=U^{-1}, GUG=-U and U^r=U."""
    arr = as_matrix(u, square=True)
    n = arr.shape[0]
    eye = np.eye(n)
    g = grading.gamma
    real = None
    if real_structure is not None:
        real = norm(real_structure.apply(arr) - arr)
    return OsuDiagnostics(
        hermitian=norm(arr - dagger(arr)),
        unitary=norm(arr @ dagger(arr) - eye),
        square_one=norm(arr @ arr - eye),
        odd=norm(g @ arr @ g + arr),
        real=real,
        tolerance=tol.eq_tol * max(1.0, norm(arr)),
    )


@dataclasses.dataclass(frozen=True)
class Osu:
    """An odd self-adjoint unitary together with its grading and optional
    real structure.  Construct through :func:`assert_osu`."""

    u: np.ndarray
    grading: Grading
    real_structure: RealStructure | None = None

    @property
    def dim(self) -> int:
        return self.u.shape[0]


def assert_osu(u, grading: Grading, real_structure: RealStructure | None = None,
               tol: ToleranceProfile = DEFAULT_TOL, who: str = "assert_osu") -> Osu:
    diag = check_osu(u, grading, real_structure, tol)
    if not diag.passed:
        raise StructuralError(f"{who}: OSU axioms violated", residual=diag.worst)
    return Osu(u=as_matrix(u, square=True), grading=grading, real_structure=real_structure)


def direct_sum(osus, tol: ToleranceProfile = DEFAULT_TOL) -> Osu:
    """Block-diagonal sum of OSUs with block-diagonal grading/real structure."""
    osus = list(osus)
    if not osus:
        raise CompositionError("direct_sum of an empty sequence")
    has_real = [o.real_structure is not None for o in osus]
    if any(has_real) and not all(has_real):
        raise CompositionError("cannot direct-sum OSUs with and without real structures")
    import scipy.linalg as sla

    u = sla.block_diag(*[o.u for o in osus])
    gamma = Grading(
        gamma=sla.block_diag(*[o.grading.gamma for o in osus]),
        trivial=all(o.grading.trivial for o in osus),
    )
    rs = None
    if all(has_real):
        sign = {o.real_structure.sign for o in osus}
        if len(sign) != 1:
            raise CompositionError("cannot direct-sum real structures of different sign")
        rs = RealStructure(s=sla.block_diag(*[o.real_structure.s for o in osus]),
                           sign=sign.pop())
    return assert_osu(u, gamma, rs, tol, who="direct_sum")


def perturbation_average(t, e: Osu) -> np.ndarray:
    """(T - eTe)/2: the part of T anti-commuting with the OSU e."""
    arr = as_matrix(t, square=True)
    if arr.shape[0] != e.dim:
        raise CompositionError("perturbation_average: shape mismatch")
    return (arr - e.u @ arr @ e.u) / 2.0


def osu_rotation_path(e: Osu, u: Osu, steps: int = 32):
    """The path cos(t) e + sin(t) U of OSUs joining two anti-commuting OSUs.

    Yields (t, matrix) on a grid over [0, pi/2]; each point is an OSU
    precisely because e and U anti-commute.
    """
    if norm(e.u @ u.u + u.u @ e.u) > DEFAULT_TOL.eq_tol * max(1.0, norm(e.u) * norm(u.u)):
        raise CompositionError("osu_rotation_path requires anti-commuting OSUs")
    for t in np.linspace(0.0, np.pi / 2, steps):
        yield t, np.cos(t) * e.u + np.sin(t) * u.u
