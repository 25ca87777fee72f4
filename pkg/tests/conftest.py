import numpy as np
import pytest

from kcayley.clifford import PAULI_1, PAULI_3
from kcayley.graded import Grading, assert_osu


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def random_hermitian(rng, n, scale=1.0):
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (m + m.conj().T) / 2.0


def random_unitary(rng, n):
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(m)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def standard_grading(n_cells):
    """diag(+1, -1) repeated: the sigma_3 pattern on 2*n_cells dimensions."""
    return Grading.from_operator(np.kron(np.eye(n_cells), PAULI_3))


def random_odd_hermitian(rng, grading, scale=1.0):
    """Random Hermitian matrix that is odd for the given grading."""
    n = grading.dim
    m = random_hermitian(rng, n, scale)
    g = grading.gamma
    return (m - g @ m @ g) / 2.0


def random_admissible_pair(rng, n_cells):
    """A base-point OSU e and an odd Hermitian T anti-commuting with it.

    Uses e = 1 (x) sigma_1 on C^{n_cells} (x) C^2; admissible T are exactly
    S (x) sigma_2 + A (x) sigma_3-free combinations; we draw T odd Hermitian
    and project onto the e-anti-commuting part, which stays odd Hermitian.
    """
    grading = standard_grading(n_cells)
    e = assert_osu(np.kron(np.eye(n_cells), PAULI_1), grading)
    t = random_odd_hermitian(rng, grading)
    t = (t - e.u @ t @ e.u) / 2.0
    return t, e
