"""Numerical invariant oracles: winding numbers of unitary loops, spectral
flow of Hermitian paths, truncated index pairings, and the unbounded product
representative with its positivity and approximate-unit checks.

Finite-truncation surrogates
----------------------------
A square matrix has index zero, so both index methods must separate genuine
(interior) kernel content from truncation artifacts pinned at the spectral
edge.  The separation is by localization of the relevant vectors in the
eigenbasis of the Dirac-type operator: truncation artifacts concentrate on
the top Fourier modes, genuine kernel vectors do not.  Spectral flow is the
authoritative oracle; the kernel method always cross-validates against it.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from . import numkit
from .cayley import cayley_inv
from .errors import (InconsistencyError, PreconditionError, RefinementError,
                     StructuralError)
from .kasparov import FiniteKasparovCycle, make_cycle
from .graded import Grading
from .numkit import DEFAULT_TOL, ToleranceProfile, as_matrix, dagger, norm

__all__ = [
    "UnitaryLoop",
    "HermitianPath",
    "winding_number",
    "spectral_flow",
    "index_pairing",
    "IndexReport",
    "kasparov_product_rep",
    "ProductReport",
    "approx_unit_check",
]

# spectral-edge band (per side) treated as truncation territory; a quarter
# per side means a vector is an artifact when most of it lives in the outer
# half of the spectrum-ordered slots
_EDGE_FRACTION = 0.25
_EXACT_ZERO = 1e-12


@dataclasses.dataclass(frozen=True)
class UnitaryLoop:
    """Unitary samples over a closed, sorted angle grid covering [0, 2 pi)."""

    samples: tuple
    grid: np.ndarray

    @classmethod
    def from_samples(cls, samples, grid=None, tol: ToleranceProfile = DEFAULT_TOL):
        mats = tuple(as_matrix(s, square=True) for s in samples)
        if len(mats) < 3:
            raise PreconditionError("a loop needs at least 3 samples")
        for j, m in enumerate(mats):
            pred = numkit.is_unitary(m, tol)
            if not pred:
                raise StructuralError(f"loop sample {j} is not unitary",
                                      residual=pred.residual)
        if grid is None:
            grid = np.linspace(0.0, 2 * np.pi, len(mats), endpoint=False)
        grid = np.asarray(grid, dtype=float)
        if np.any(np.diff(grid) <= 0):
            raise PreconditionError("loop grid must be strictly increasing")
        return cls(samples=mats, grid=grid)

    def __len__(self):
        return len(self.samples)


@dataclasses.dataclass(frozen=True)
class HermitianPath:
    """Hermitian samples over a sorted grid in [0, 1]."""

    samples: tuple
    grid: np.ndarray

    @classmethod
    def from_samples(cls, samples, grid=None, tol: ToleranceProfile = DEFAULT_TOL):
        mats = tuple(as_matrix(s, square=True) for s in samples)
        if len(mats) < 2:
            raise PreconditionError("a path needs at least 2 samples")
        for j, m in enumerate(mats):
            pred = numkit.is_hermitian(m, tol)
            if not pred:
                raise StructuralError(f"path sample {j} is not Hermitian",
                                      residual=pred.residual)
        if grid is None:
            grid = np.linspace(0.0, 1.0, len(mats))
        return cls(samples=mats, grid=np.asarray(grid, dtype=float))

    @classmethod
    def linear(cls, h0, h1, steps: int = 65, tol: ToleranceProfile = DEFAULT_TOL):
        a, b = as_matrix(h0, square=True), as_matrix(h1, square=True)
        ts = np.linspace(0.0, 1.0, steps)
        return cls.from_samples([(1 - t) * a + t * b for t in ts], ts, tol)

    def __len__(self):
        return len(self.samples)


def winding_number(loop: UnitaryLoop, tol: ToleranceProfile = DEFAULT_TOL) -> int:
    """Degree of the determinant phase of a unitary loop.

    Orientation: counterclockwise parameter increase, so winding(e^{ik}) = +1.
    Consecutive det-phase increments must stay below pi (step guard), else a
    refinement error names the offending interval.
    """
    dets = np.array([np.linalg.det(s) for s in loop.samples])
    total = 0.0
    m = len(dets)
    for j in range(m):
        inc = np.angle(dets[(j + 1) % m] * np.conj(dets[j]))
        if abs(inc) > np.pi - 1e-9:
            raise RefinementError("det-phase step of at least pi",
                                  interval=j, increment=float(inc))
        total += inc
    w = total / (2 * np.pi)
    if abs(w - round(w)) > 1e-6:
        raise RefinementError("accumulated phase is not an integer multiple of 2 pi",
                              winding=float(w))
    return int(round(w))


def _nonneg_count(w: np.ndarray) -> int:
    # chi_{[0, inf)} convention: exact zeros count as non-negative
    return int(np.sum(w >= -_EXACT_ZERO))


def spectral_flow(path: HermitianPath, tol: ToleranceProfile = DEFAULT_TOL) -> int:
    """Signed count of eigenvalue crossings of zero along a Hermitian path.

    Endpoint eigenvalues inside (exact-zero, kernel_tol) are numerically
    ambiguous and raise the degenerate-endpoint error; exact zeros follow the
    non-negative spectral projection convention (they count as already
    crossed, matching Index(PuP - (1-P)) with P = chi_{[0,inf)}).
    A step in which more than one eigenvalue sits within the step's spectral
    motion of zero is an unresolved crossing and demands refinement.
    """
    spectra = [np.linalg.eigvalsh(s) for s in path.samples]
    scale = max(1.0, max(float(np.max(np.abs(w))) for w in spectra))
    for which, w in ((0, spectra[0]), (-1, spectra[-1])):
        small = np.abs(w)
        fuzzy = (small > _EXACT_ZERO * scale) & (small < tol.kernel_tol * scale)
        if np.any(fuzzy):
            raise PreconditionError(
                "degenerate endpoint: eigenvalue ambiguously close to zero",
                endpoint=("start" if which == 0 else "end"),
                eigenvalue=float(w[np.argmin(small)]))
    flow = 0
    for j in range(len(spectra) - 1):
        wa, wb = spectra[j], spectra[j + 1]
        motion = float(np.max(np.abs(wb - wa)))
        candidates = max(int(np.sum(np.abs(wa) < motion)),
                         int(np.sum(np.abs(wb) < motion)))
        crossings = _nonneg_count(wb) - _nonneg_count(wa)
        if candidates >= 2 and candidates > abs(crossings):
            # several eigenvalues inside one step's motion window but the
            # net count does not explain them: a swap through zero may hide
            raise RefinementError(
                "unresolved crossing: several eigenvalues inside one step's motion",
                step=j, candidates=candidates)
        flow += crossings
    return flow


def _edge_weight(vec_ambient: np.ndarray, order: np.ndarray, n: int) -> float:
    """Weight of a vector on the spectral-edge coordinate band."""
    band = max(1, int(np.ceil(_EDGE_FRACTION * n)))
    idx = np.argsort(order)
    lo, hi = idx[:band], idx[-band:]
    w = np.abs(vec_ambient) ** 2
    return float(np.sum(w[lo]) + np.sum(w[hi]))


def _stable_kernel_count(mat: np.ndarray, locator, tol: ToleranceProfile):
    """Count near-kernel singular directions that are not truncation artifacts.

    ``locator(right_vec, left_vec)`` returns (right_edge_weight,
    left_edge_weight); the right vectors witness ker(mat), the left vectors
    ker(mat*).  Counting is repeated at two thresholds as a stability check.
    """
    import scipy.linalg
    # gesvd: accurate singular vectors also for strongly non-normal input
    u, s, vh = scipy.linalg.svd(mat, lapack_driver="gesvd")
    scale = s[0] if s.size and s[0] > 0 else 1.0
    counts = []
    for thr in (1e-6, 1e-8):
        k_right = k_left = 0
        for i in range(len(s) - 1, -1, -1):
            if s[i] > thr * scale:
                break
            right_w, left_w = locator(vh[i].conj(), u[:, i])
            if right_w < 0.5:
                k_right += 1
            if left_w < 0.5:
                k_left += 1
        counts.append((k_right, k_left))
    if counts[0] != counts[1]:
        raise InconsistencyError("kernel count unstable across thresholds",
                                 counts=counts)
    return counts[0]


@dataclasses.dataclass(frozen=True)
class IndexReport:
    value: int
    methods: dict
    agree: bool


def _restricted_pair(u: np.ndarray, d: np.ndarray, tol: ToleranceProfile):
    """Compress Ci(u) and D to the module range(u - 1); also return the basis
    and the D-eigen coordinate used for edge localization."""
    rest = cayley_inv(u, tol)
    if rest.empty:
        return None
    q = rest.basis
    dt = q.conj().T @ d @ q
    dt = (dt + dagger(dt)) / 2.0
    return rest.compressed, dt, q


def index_pairing(u, d, method: str = "both", steps: int = 64,
                  tol: ToleranceProfile = DEFAULT_TOL) -> IndexReport:
    """Index pairing of a unitary with a Dirac-type Hermitian matrix.

    Method "sf": spectral flow of the linear path D -> u D u*, with crossings
    whose eigenvectors concentrate on the spectral edge of D discarded as
    truncation artifacts (the finite model wraps flow around the cutoff).

    Method "kernel": stable kernel count of the compressed product corner
    Ci(u) + i D~ on the module range(u - 1), minus the same count for its
    adjoint; near-null directions pinned at the spectral edge are artifacts.

    Both methods must agree when "both" is requested.
    """
    umat = as_matrix(u, square=True)
    dmat = as_matrix(d, square=True)
    if not numkit.is_unitary(umat, tol):
        raise StructuralError("index_pairing: u is not unitary")
    if not numkit.is_hermitian(dmat, tol):
        raise StructuralError("index_pairing: D is not Hermitian")
    methods = {}
    if method in ("sf", "both"):
        methods["sf"] = _sf_method(umat, dmat, steps, tol)
    if method in ("kernel", "both"):
        methods["kernel"] = _kernel_method(umat, dmat, tol)
    vals = set(methods.values())
    if len(vals) > 1:
        raise InconsistencyError("index methods disagree (grid too coarse?)",
                                 **methods)
    value = vals.pop()
    return IndexReport(value=value, methods=methods, agree=True)


def _sf_method(u: np.ndarray, d: np.ndarray, steps: int, tol: ToleranceProfile) -> int:
    target = u @ d @ dagger(u)
    # per-step spectral motion stays well below the typical curve spacing
    steps = max(steps, int(np.ceil(8.0 * max(1.0, norm(target - d)))))
    ts = np.linspace(0.0, 1.0, steps)
    n = d.shape[0]
    flow = 0
    prev_w, prev_v = np.linalg.eigh(d)
    basis = prev_v
    coord = np.arange(n)
    for j in range(1, len(ts)):
        h = (1 - ts[j]) * d + ts[j] * target
        w, v = np.linalg.eigh(h)
        crossings = _nonneg_count(w) - _nonneg_count(prev_w)
        if crossings:
            # attribute each unit of flow to the eigenvector nearest zero and
            # drop it if that vector lives on the truncation edge of D
            sign = 1 if crossings > 0 else -1
            # vectors near zero after (for +) or before (for -) the step
            w_ref, v_ref = (w, v) if sign > 0 else (prev_w, prev_v)
            near = np.argsort(np.abs(w_ref))[: abs(crossings)]
            for idx in near:
                vec = dagger(basis) @ v_ref[:, idx]
                if _edge_weight(vec, coord, n) < 0.5:
                    flow += sign
        prev_w, prev_v = w, v
    return flow


def _kernel_method(u: np.ndarray, d: np.ndarray, tol: ToleranceProfile) -> int:
    pair = _restricted_pair(u, d, tol)
    if pair is None:
        return 0
    ci, dt, q = pair
    corner = ci + 1j * dt
    # localization coordinate: the ambient D-eigenbasis (the compressed
    # operator's own eigenvectors delocalize and hide edge concentration)
    _, dv = np.linalg.eigh(d)
    n = d.shape[0]

    def locate(right_vec, left_vec):
        r = dagger(dv) @ (q @ right_vec)
        l = dagger(dv) @ (q @ left_vec)
        return (_edge_weight(r, np.arange(n), n),
                _edge_weight(l, np.arange(n), n))

    k_right, k_left = _stable_kernel_count(corner, locate, tol)
    return k_right - k_left


@dataclasses.dataclass(frozen=True)
class ProductReport:
    cycle: FiniteKasparovCycle
    corner: np.ndarray
    positivity_margin: float
    identity_residual: float
    commutator_norm: float
    corner_index: int


def kasparov_product_rep(u, d, tol: ToleranceProfile = DEFAULT_TOL) -> ProductReport:
    """Unbounded representative of the product of a unitary against a Dirac
    matrix: the doubled-module cycle with operator offdiag(Ci(u) - iD~,
    Ci(u) + iD~) on range(u - 1).

    Requires ||[D, u]|| < 2 (rescale D otherwise).  The positivity margin is
    the smallest eigenvalue of the proof's quadratic form {S, F} + 2 on the
    module, where S is the off-diagonal Ci(u) matrix and F the product
    operator; the raw anti-commutator is only semibounded by -2.  The closed
    form {S, F} + 2 = 2 (u-1)^{-1} (4 -+ [u,D] u*) (u*-1)^{-1}, which is
    manifestly positive under the commutator bound, is verified as a residual.
    """
    umat = as_matrix(u, square=True)
    dmat = as_matrix(d, square=True)
    comm = umat @ dmat - dmat @ umat
    cnorm = norm(comm)
    if cnorm >= 2.0:
        raise PreconditionError(
            "||[D, u]|| must be < 2; rescale D", commutator_norm=cnorm)
    pair = _restricted_pair(umat, dmat, tol)
    n = umat.shape[0]
    if pair is None:
        raise PreconditionError("u = 1: the product module is zero-dimensional")
    ci, dt, q = pair
    m = ci.shape[0]
    zero = np.zeros((m, m))
    f = np.block([[zero, ci - 1j * dt], [ci + 1j * dt, zero]])
    s = np.block([[zero, ci], [ci, zero]])
    anti = s @ f + f @ s
    shifted = anti + 2.0 * np.eye(2 * m)
    margin = float(np.min(np.linalg.eigvalsh(shifted)))
    # closed form of the proof, block by block
    pinv = np.linalg.pinv(umat - np.eye(n), rcond=tol.rank_tol)
    pinv_star = dagger(pinv)
    bracket_minus = 4.0 * np.eye(n) - comm @ dagger(umat)
    bracket_plus = 4.0 * np.eye(n) + comm @ dagger(umat)
    top = q.conj().T @ (2.0 * pinv @ bracket_minus @ pinv_star) @ q
    bot = q.conj().T @ (2.0 * pinv @ bracket_plus @ pinv_star) @ q
    shifted_blocks = anti + 2.0 * np.eye(2 * m)
    residual = max(norm(shifted_blocks[:m, :m] - top),
                   norm(shifted_blocks[m:, m:] - bot),
                   norm(shifted_blocks[:m, m:]), norm(shifted_blocks[m:, :m]))

    # assemble the doubled cycle: grading swaps the two module copies' parity
    proj = np.kron(np.eye(2), q @ q.conj().T)
    op_amb = np.kron(np.array([[0, 1], [0, 0]]), q @ (ci - 1j * dt) @ q.conj().T) + \
        np.kron(np.array([[0, 0], [1, 0]]), q @ (ci + 1j * dt) @ q.conj().T)
    grading = Grading.from_operator(np.kron(np.diag([1.0, -1.0]), np.eye(n)))
    cycle = make_cycle(left_gens_ambient=(), projector=proj, op_ambient=op_amb,
                       grading=grading, tol=tol,
                       diagnostics={"module_rank": 2 * m})
    return ProductReport(cycle=cycle, corner=ci + 1j * dt,
                         positivity_margin=margin,
                         identity_residual=residual, commutator_norm=cnorm,
                         corner_index=_kernel_method(umat, dmat, tol))


def approx_unit_check(n_values=(1, 2, 4, 8, 16), grid: int = 512,
                      test_vectors=None):
    """Decay report for the circle approximate unit v_n = rho (rho + 1/n)^{-1},
    rho(z) = 2 - z - conj(z).

    Evaluates the closed-form commutator expression [D, v_n](1 - conj(z)) as a
    multiplication operator on theta-grid functions and reports its norm
    applied to each test vector.  For each vector the report must be
    eventually decreasing in n (strong convergence to zero).
    """
    thetas = np.linspace(0.0, 2 * np.pi, grid, endpoint=False) + np.pi / grid
    if test_vectors is None:
        test_vectors = {
            "constant": np.ones(grid),
            "smooth": np.exp(1j * thetas) + 0.5 * np.exp(-2j * thetas),
            "away-from-zero": np.where(
                (thetas > np.pi / 2) & (thetas < 3 * np.pi / 2),
                np.sin(thetas - np.pi / 2) ** 2, 0.0),
        }
    rho = 2.0 - 2.0 * np.cos(thetas)
    report = {name: [] for name in test_vectors}
    for n in n_values:
        v_n = rho / (rho + 1.0 / n)
        one_minus = 1.0 - v_n
        bracket = (np.sin(thetas) / (1.0 - np.cos(thetas) + 1.0 / (2.0 * n))
                   - 1.0 / np.tan(thetas / 2.0))
        expr = (2.0 * one_minus * bracket * np.exp(1j * thetas / 2.0)
                * np.sin(thetas / 2.0)
                + 2.0 * one_minus * np.exp(1j * thetas / 2.0) * np.cos(thetas / 2.0))
        h = 2 * np.pi / grid
        for name, vec in test_vectors.items():
            val = float(np.sqrt(np.sum(np.abs(expr * vec) ** 2) * h))
            report[name].append(val)
    return {"n_values": tuple(n_values), "norms": report}
