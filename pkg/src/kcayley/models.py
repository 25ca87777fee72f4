"""Benchmark models: the discretized circle spectral triple, the real-line
generator loop, the Bott plane sampler, the one-sided cot-potential operator,
and SSH / Kitaev tight-binding chains with half-space truncations.

Bloch convention: a plane wave psi_n = e^{ikn} v diagonalizes the hopping
matrix sum_m h_m e^{-imk}, where h_m is the block H[cell n+m, cell n].  The
SSH model is wired so that |t2| > |t1| is the topological phase with winding
+1 in the toolkit orientation (winding(e^{ik}) = +1), which then equals the
signed chiral zero-mode count at the left edge of the truncated chain.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .clifford import PAULI_1, PAULI_3
from .errors import PreconditionError, StructuralError
from .graded import Grading, RealStructure
from .kasparov import SymmetryData
from .numkit import DEFAULT_TOL, as_matrix, dagger, norm

__all__ = [
    "CircleTriple",
    "circle_spectral_triple",
    "cot_product_operator",
    "real_line_generator",
    "bott_plane",
    "TightBindingModel",
    "ssh_model",
    "kitaev_chain",
    "bloch",
    "HalfSpaceModel",
    "halfspace",
]


@dataclasses.dataclass(frozen=True)
class CircleTriple:
    """Fourier truncation of the circle spectral triple.

    d is diag(-N..N); u the cyclic shift representing multiplication by
    e^{-i theta}.  The wrap of the shift sits at ``seam`` (the column of the
    top Fourier mode): identities like u d u* = d + 1 are exact away from it.
    """

    d: np.ndarray
    u: np.ndarray
    n: int
    seam: int

    @property
    def size(self) -> int:
        return 2 * self.n + 1


def circle_spectral_triple(n: int) -> CircleTriple:
    """Momentum-space truncation at |k| <= n of (C(S^1), L^2(S^1), -i d/dtheta)."""
    if n < 4:
        raise PreconditionError("circle_spectral_triple needs n >= 4")
    size = 2 * n + 1
    d = np.diag(np.arange(-n, n + 1).astype(complex))
    u = np.zeros((size, size), dtype=complex)
    for p in range(size):
        u[(p - 1) % size, p] = 1.0
    # the cyclic wrap sits at the top Fourier mode (last index)
    return CircleTriple(d=d, u=u, n=n, seam=size - 1)


@dataclasses.dataclass(frozen=True)
class CotOperator:
    """One-sided (Dirichlet at theta = 0 == 2 pi) discretization of the
    product operator d/dtheta - cot(theta/2) on the circle.

    d_plus is the rectangular (m-1) x m interior stencil.  Its null space is
    exactly one-dimensional (full row rank: no singular value decays), spanned
    by a vector converging to ``candidate`` = sin^2(theta/2); the adjoint map
    d_plus^T therefore has trivial kernel, the cokernel statement matching
    that sin^{-2}(theta/2) is not square-summable.  ``square`` folds the
    Dirichlet phantom node into a square operator whose smallest singular
    value decays under refinement while the second stays bounded: exactly one
    decaying singular value, the index content.
    """

    d_plus: np.ndarray
    candidate: np.ndarray
    thetas: np.ndarray
    square: np.ndarray

    @property
    def adjoint_side(self) -> np.ndarray:
        return self.d_plus.T


def cot_product_operator(n_grid: int) -> CotOperator:
    """Build the cot-potential product operator on an n_grid-point circle."""
    if n_grid < 64:
        raise PreconditionError("cot_product_operator needs n_grid >= 64")
    m = n_grid
    h = 2 * np.pi / m
    thetas = h * np.arange(1, m + 1)  # interior points, Dirichlet at 0 == 2 pi

    def stencil(r):
        # difference between nodes r and r+1 with the potential at the midpoint
        theta_next = thetas[r + 1] if r + 1 < m else 2 * np.pi
        mid = (thetas[r] + theta_next) / 2.0
        return (-1.0 / h - 0.5 / np.tan(mid / 2.0),
                1.0 / h - 0.5 / np.tan(mid / 2.0))

    d_plus = np.zeros((m - 1, m))
    square = np.zeros((m, m))
    for r in range(m - 1):
        a, b = stencil(r)
        d_plus[r, r], d_plus[r, r + 1] = a, b
        square[r, r], square[r, r + 1] = a, b
    # last row couples to the phantom node theta = 2 pi with value zero
    a, _ = stencil(m - 1)
    square[m - 1, m - 1] = a
    candidate = np.sin(thetas / 2.0) ** 2
    return CotOperator(d_plus=d_plus, candidate=candidate, thetas=thetas,
                       square=square)


def real_line_generator(n: int, cutoff: float = None):
    """Sample loop of the K_1(C_0(R)) generator u(x) = -e^{-2i arctan(x)}.

    Sampling is uniform in arctan(x), which compactifies the line; the loop
    closes at u = 1.  Returns (xs, samples) with 1x1 unitary samples; feed the
    samples to the winding oracle or take pointwise inverse Cayley transforms
    (which recover multiplication by x).
    """
    if n < 8:
        raise PreconditionError("real_line_generator needs n >= 8")
    # cutoff trims the compactified parameter away from the poles of tan
    span = np.pi / 2 if cutoff is None else np.arctan(cutoff)
    ss = np.linspace(-span, span, n, endpoint=True)
    xs = np.tan(ss)
    samples = [np.array([[-np.exp(-2j * np.arctan(x))]]) for x in xs]
    return xs, samples


def bott_plane(grid: int, extent: float = 2.0):
    """Grid sampler over [-extent, extent]^2 feeding the plane projector checks.

    Yields (x, y, t_op) with t_op the odd operator offdiag(x - iy, x + iy)
    whose graph projection is the plane projector at (x, y).
    """
    if grid < 2:
        raise PreconditionError("bott_plane needs grid >= 2")
    axis = np.linspace(-extent, extent, grid)
    for x in axis:
        for y in axis:
            yield float(x), float(y), np.array([[0.0, x - 1j * y],
                                                [x + 1j * y, 0.0]], dtype=complex)


@dataclasses.dataclass(frozen=True)
class TightBindingModel:
    """Translation-invariant 1d tight-binding model given by hopping blocks.

    ``hoppings`` maps integer offsets m >= 0 to the block H[cell n+m, cell n];
    negative offsets are implied by Hermiticity.
    """

    cell_dim: int
    hoppings: dict
    symmetry: SymmetryData
    name: str

    def __post_init__(self):
        for m, block in self.hoppings.items():
            b = as_matrix(block)
            if b.shape != (self.cell_dim, self.cell_dim):
                raise StructuralError(f"hopping block {m} has shape {b.shape}")

    @property
    def max_range(self) -> int:
        return max(self.hoppings) if self.hoppings else 0


def bloch(model: TightBindingModel, k: float) -> np.ndarray:
    """Bloch matrix sum_m h_m e^{-imk} (plane-wave convention, Hermitian)."""
    h = np.zeros((model.cell_dim, model.cell_dim), dtype=complex)
    for m, block in model.hoppings.items():
        b = as_matrix(block)
        if m == 0:
            h += b
        else:
            h += b * np.exp(-1j * m * k) + dagger(b) * np.exp(1j * m * k)
    return h


def ssh_model(t1: float, t2: float) -> TightBindingModel:
    """Su-Schrieffer-Heeger chain: intra-cell hopping t1, inter-cell t2.

    Cell basis (A, B); the chiral grading is diag(+1, -1) per cell.  The gap
    closes exactly when |t1| = |t2|; |t2| > |t1| is the topological phase.
    """
    h0 = t1 * PAULI_1
    h1 = np.array([[0.0, t2], [0.0, 0.0]], dtype=complex)  # couples A_{n+1} <- B_n
    gamma = Grading.from_operator(PAULI_3)
    sym = SymmetryData(grading=gamma, chiral=True)
    return TightBindingModel(cell_dim=2, hoppings={0: h0, 1: h1},
                             symmetry=sym, name="ssh")


def kitaev_chain(mu: float, t: float, delta: float) -> TightBindingModel:
    """Kitaev superconducting chain in per-site Nambu form (c, c^dagger).

    Blocks: onsite -mu sigma_3 and nearest-neighbour [[-t, delta], [-delta, t]].
    Carries the particle-hole real structure S = sigma_1 per cell with
    h^r = -h (class D); topological for |mu| < 2|t| (delta != 0).
    """
    h0 = -mu * PAULI_3
    h1 = np.array([[-t, delta], [-delta, t]], dtype=complex)
    rs = RealStructure(s=PAULI_1, sign=1)
    sym = SymmetryData(real_structure=rs, phs=True)
    return TightBindingModel(cell_dim=2, hoppings={0: h0, 1: h1},
                             symmetry=sym, name="kitaev")


@dataclasses.dataclass(frozen=True)
class HalfSpaceModel:
    """Toeplitz compression of a bulk model onto L cells with open ends.

    ``ideal_mask`` marks matrix entries within ``width`` cells of either edge:
    the finite surrogate of the boundary ideal.  Outside the mask the
    compression agrees with the translation-invariant bulk matrix exactly.
    """

    model: TightBindingModel
    halfspace: np.ndarray
    ideal_mask: np.ndarray
    cells: int
    width: int

    @property
    def dim(self) -> int:
        return self.halfspace.shape[0]

    def cell_positions(self) -> np.ndarray:
        """Cell index of every matrix row (for localization diagnostics)."""
        return np.repeat(np.arange(self.cells), self.model.cell_dim)

    def symmetry_on_halfspace(self) -> SymmetryData:
        """The model's symmetry data inflated to the truncated chain."""
        sym = self.model.symmetry
        grading = None
        if sym.grading is not None:
            grading = Grading.from_operator(np.kron(np.eye(self.cells), sym.grading.gamma))
        rs = None
        if sym.real_structure is not None:
            rs = RealStructure(s=np.kron(np.eye(self.cells), sym.real_structure.s),
                               sign=sym.real_structure.sign)
        return SymmetryData(real_structure=rs, grading=grading,
                            trs=sym.trs, phs=sym.phs, chiral=sym.chiral)


def halfspace(model: TightBindingModel, cells: int, width: int = None) -> HalfSpaceModel:
    """Open-boundary truncation of ``model`` to ``cells`` unit cells."""
    if cells < 8:
        raise PreconditionError("halfspace needs at least 8 cells")
    d = model.cell_dim
    n = cells * d
    h = np.zeros((n, n), dtype=complex)
    for m, block in model.hoppings.items():
        b = as_matrix(block)
        for i in range(cells):
            if m == 0:
                h[i * d:(i + 1) * d, i * d:(i + 1) * d] = b
            elif i + m < cells:
                h[(i + m) * d:(i + m + 1) * d, i * d:(i + 1) * d] = b
                h[i * d:(i + 1) * d, (i + m) * d:(i + m + 1) * d] = dagger(b)
    w = max(1, cells // 4) if width is None else width
    pos = np.repeat(np.arange(cells), d)
    near_edge = (pos < w) | (pos >= cells - w)
    mask = near_edge[:, None] | near_edge[None, :]
    res = norm(h - dagger(h))
    if res > DEFAULT_TOL.eq_tol * max(1.0, norm(h)):
        raise StructuralError("half-space compression is not Hermitian", residual=res)
    return HalfSpaceModel(model=model, halfspace=h, ideal_mask=mask,
                          cells=cells, width=w)


def bulk_circulant(model: TightBindingModel, cells: int) -> np.ndarray:
    """Periodic (circulant) bulk matrix on the same space as the half-space
    truncation; used as the translation-invariant reference for leakage."""
    d = model.cell_dim
    n = cells * d
    h = np.zeros((n, n), dtype=complex)
    for m, block in model.hoppings.items():
        b = as_matrix(block)
        for i in range(cells):
            j = (i + m) % cells
            if m == 0:
                h[i * d:(i + 1) * d, i * d:(i + 1) * d] += b
            else:
                h[j * d:(j + 1) * d, i * d:(i + 1) * d] += b
                h[i * d:(i + 1) * d, j * d:(j + 1) * d] += dagger(b)
    return h


def bulk_gap(model: TightBindingModel, k_samples: int = 128):
    """Minimum |eigenvalue| of the Bloch matrix over a k-grid, with argmin k."""
    ks = np.linspace(0.0, 2 * np.pi, k_samples, endpoint=False)
    best = (np.inf, 0.0)
    for k in ks:
        w = np.linalg.eigvalsh(bloch(model, k))
        g = float(np.min(np.abs(w)))
        if g < best[0]:
            best = (g, float(k))
    return best
