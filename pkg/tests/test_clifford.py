import itertools

import numpy as np
import pytest

from kcayley.clifford import (PAULI_1, PAULI_2, PAULI_3, build_clifford, eta,
                              graded_product_pair, graded_tensor,
                              orientation_element)
from kcayley.errors import CapacityError, ParityError, PreconditionError
from kcayley.graded import Grading, parity_of
from kcayley.numkit import norm

from conftest import random_hermitian, random_unitary, standard_grading


def test_cl11_pinned_convention():
    alg = build_clifford(1, 1)
    assert np.allclose(alg.e_gens[0], PAULI_1)
    assert np.allclose(alg.f_gens[0], -1j * PAULI_2)
    assert np.allclose(alg.grading.gamma, PAULI_3)
    # entrywise-conjugation real structure
    assert np.allclose(alg.real_structure.s, np.eye(2))
    assert alg.real_structure.sign == 1


def test_cl00_scalar():
    alg = build_clifford(0, 0)
    assert alg.generators == ()
    assert alg.dim == 1


def test_cl20_exhaustive():
    alg = build_clifford(2, 0)
    e1, e2 = alg.e_gens
    eye = np.eye(alg.matrix_size)
    assert norm(e1 @ e1 - eye) < 1e-12
    assert norm(e2 @ e2 - eye) < 1e-12
    assert norm(e1 @ e2 + e2 @ e1) < 1e-12
    g = alg.grading.gamma
    for gen in (e1, e2):
        assert norm(g @ gen @ g + gen) < 1e-12
        assert norm(alg.real_structure.apply(gen) - gen) < 1e-12


def test_cl02_is_quaternionic():
    alg = build_clifford(0, 2)
    assert alg.real_structure.sign == -1


@pytest.mark.parametrize("p,q", [(p, q) for p in range(4) for q in range(4)
                                 if 0 < p + q <= 6])
def test_generator_relations_all_small(p, q):
    alg = build_clifford(p, q)
    eye = np.eye(alg.matrix_size)
    gens = list(alg.e_gens) + list(alg.f_gens)
    signs = [1.0] * p + [-1.0] * q
    for i, (g, s) in enumerate(zip(gens, signs)):
        assert norm(g @ g - s * eye) < 1e-12
        assert norm(g - s * g.conj().T) < 1e-12  # Hermitian / anti-Hermitian
        assert norm(alg.grading.gamma @ g @ alg.grading.gamma + g) < 1e-12
        assert norm(alg.real_structure.apply(g) - g) < 1e-12
        for h in gens[i + 1:]:
            assert norm(g @ h + h @ g) < 1e-12


def test_capacity_guard():
    with pytest.raises(CapacityError):
        build_clifford(7, 6)


def test_orientation_small_cases():
    cl10 = build_clifford(1, 0)
    assert np.allclose(orientation_element(cl10), cl10.e_gens[0])
    cl11 = build_clifford(1, 1)
    # direct product: [[0,1],[1,0]] @ [[0,-1],[1,0]] = diag(1, -1)
    assert np.allclose(orientation_element(cl11), PAULI_3)
    cl12 = build_clifford(1, 2)
    expected = cl12.e_gens[0] @ cl12.f_gens[0] @ cl12.f_gens[1]
    assert np.allclose(orientation_element(cl12), expected)


def test_orientation_empty_raises():
    with pytest.raises(PreconditionError):
        orientation_element(build_clifford(0, 0))


def test_graded_tensor_even_right_is_plain():
    g = Grading.from_operator(PAULI_3)
    a = PAULI_1  # odd
    b = PAULI_3  # even
    assert np.allclose(graded_tensor(a, g, b, g), np.kron(a, b))


def test_graded_tensor_square_of_odd_pair():
    # (x (x)^ rho)^2 = -x^2 (x) 1 for odd x and odd rho with rho^2 = 1
    g = Grading.from_operator(PAULI_3)
    x = PAULI_1
    emb = graded_tensor(x, g, PAULI_1, g)
    assert np.allclose(emb @ emb, -np.kron(x @ x, np.eye(2)))


def test_graded_tensor_koszul_multiplicativity(rng):
    g_a = standard_grading(2)
    g_b = Grading.from_operator(PAULI_3)
    basis_a = {0: np.kron(random_hermitian(rng, 2), np.eye(2)),
               1: np.kron(random_hermitian(rng, 2), PAULI_1)}
    basis_b = {0: np.eye(2, dtype=complex), 1: PAULI_1}
    for pa, pb, pc, pd in itertools.product((0, 1), repeat=4):
        for _ in range(13):
            a = basis_a[pa] * rng.standard_normal()
            b = basis_b[pb] * rng.standard_normal()
            c = basis_a[pc] * rng.standard_normal()
            d = basis_b[pd] * rng.standard_normal()
            lhs = graded_tensor(a, g_a, b, g_b) @ graded_tensor(c, g_a, d, g_b)
            sign = (-1.0) ** (pb * pc)
            rhs = sign * graded_tensor(a @ c, g_a, b @ d, g_b, decompose=True)
            assert norm(lhs - rhs) < 1e-10


def test_graded_tensor_parity_error():
    g = Grading.from_operator(PAULI_3)
    with pytest.raises(ParityError):
        graded_tensor(PAULI_1, g, PAULI_1 + PAULI_3, g)
    # decompose flag handles it
    out = graded_tensor(PAULI_1, g, PAULI_1 + PAULI_3, g, decompose=True)
    expected = (graded_tensor(PAULI_1, g, PAULI_1, g)
                + graded_tensor(PAULI_1, g, PAULI_3, g))
    assert np.allclose(out, expected)


def test_eta_paper_value():
    # eta(1 (x)^ rho) = Gamma (x) rho for an inner grading Gamma
    g = standard_grading(2)
    out = eta(np.eye(4), 1, g)
    assert np.allclose(out, np.kron(g.gamma, PAULI_1))


def test_eta_multiplicative_on_basis():
    g = Grading.from_operator(PAULI_3)
    eij = [np.zeros((2, 2), dtype=complex) for _ in range(4)]
    basis = []
    for i in range(2):
        for j in range(2):
            m = np.zeros((2, 2), dtype=complex)
            m[i, j] = 1.0
            basis.append(m)
    for b1, b2 in itertools.product(basis, repeat=2):
        for k1, k2 in itertools.product((0, 1), repeat=2):
            prod_b, prod_k = graded_product_pair(b1, k1, b2, k2, g)
            lhs = eta(b1, k1, g) @ eta(b2, k2, g)
            rhs_parts = []
            # prod_b may be non-homogeneous only if b1, b2 were mixed; matrix
            # units are homogeneous so the product stays homogeneous (or zero)
            if norm(prod_b) < 1e-14:
                rhs = np.zeros_like(lhs)
            else:
                rhs = eta(prod_b, prod_k, g)
            assert norm(lhs - rhs) < 1e-10


def test_eta_intertwines_parity():
    g = Grading.from_operator(PAULI_3)
    src_g = np.kron(g.gamma, PAULI_3)   # grading of the embedded graded tensor
    tgt_g = np.kron(np.eye(2), PAULI_3)  # grading of the ordinary tensor
    for b, k in [(PAULI_1, 0), (PAULI_1, 1), (PAULI_3, 0), (PAULI_3, 1)]:
        before = eta(-(g.gamma @ b @ g.gamma) if k else g.gamma @ b @ g.gamma, k, g)
        # source parity flip of b (x)^ rho^k is Ad of the total grading
        flipped = eta(b, k, g)
        lhs = tgt_g @ flipped @ tgt_g
        sign = (-1.0) ** ((parity_of(b, g) + k) % 2)
        assert norm(lhs - sign * flipped) < 1e-12


def test_class_invariance_under_generator_conjugation(rng):
    # invariants of downstream constructions must not depend on the generator
    # realization: conjugating all generators by a random even unitary gives
    # an equally valid algebra (checked here at the relations level)
    alg = build_clifford(2, 1)
    n = alg.matrix_size
    block = random_unitary(rng, n // 2)
    zeros = np.zeros((n // 2, n // 2))
    # grading is diag-pattern; build an even unitary in that pattern
    idx_p = np.where(np.isclose(np.diag(alg.grading.gamma).real, 1.0))[0]
    idx_m = np.where(np.isclose(np.diag(alg.grading.gamma).real, -1.0))[0]
    u = np.eye(n, dtype=complex)
    up = random_unitary(rng, len(idx_p))
    um = random_unitary(rng, len(idx_m))
    u[np.ix_(idx_p, idx_p)] = up
    u[np.ix_(idx_m, idx_m)] = um
    eye = np.eye(n)
    gens = [u @ g @ u.conj().T for g in alg.generators]
    signs = [1.0] * alg.p + [-1.0] * alg.q
    for i, (g, s) in enumerate(zip(gens, signs)):
        assert norm(g @ g - s * eye) < 1e-10
        assert norm(alg.grading.gamma @ g @ alg.grading.gamma + g) < 1e-10
        for h in gens[i + 1:]:
            assert norm(g @ h + h @ g) < 1e-10
