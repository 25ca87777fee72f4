import numpy as np
import pytest

from kcayley.clifford import PAULI_1, PAULI_2, PAULI_3
from kcayley.errors import CompositionError, ParityError, StructuralError
from kcayley.graded import (Grading, RealStructure, assert_osu, check_osu,
                            direct_sum, graded_commutator, osu_rotation_path,
                            parity_decompose, parity_of, perturbation_average)
from kcayley.numkit import norm

from conftest import random_hermitian, standard_grading, random_admissible_pair

G2 = Grading.from_operator(PAULI_3)


def test_parity_decompose_pauli():
    even, odd = parity_decompose(PAULI_1, G2)
    assert np.allclose(even, 0) and np.allclose(odd, PAULI_1)
    even, odd = parity_decompose(PAULI_3, G2)
    assert np.allclose(even, PAULI_3) and np.allclose(odd, 0)


def test_parity_decompose_recombines(rng):
    g = standard_grading(2)
    m = random_hermitian(rng, 4)
    even, odd = parity_decompose(m, g)
    assert np.allclose(even + odd, m)
    assert norm(g.gamma @ even @ g.gamma - even) < 1e-14
    assert norm(g.gamma @ odd @ g.gamma + odd) < 1e-14


def test_parity_of_mixed_raises(rng):
    with pytest.raises(ParityError):
        parity_of(PAULI_1 + PAULI_3, G2)


def test_graded_commutator_odd_odd():
    # anti-commuting odd OSUs: [e, f]_pm = ef + fe = 0
    assert np.allclose(graded_commutator(PAULI_1, PAULI_2, G2), 0)


def test_graded_commutator_even_any(rng):
    g = standard_grading(2)
    even = np.kron(random_hermitian(rng, 2), np.eye(2))
    odd = np.kron(random_hermitian(rng, 2), PAULI_1)
    plain = even @ odd - odd @ even
    assert np.allclose(graded_commutator(even, odd, g), plain)


def test_graded_commutator_gamma_odd(rng):
    g = standard_grading(3)
    odd = np.kron(random_hermitian(rng, 3), PAULI_2)
    out = graded_commutator(g.gamma, odd, g)
    assert np.allclose(out, 2 * g.gamma @ odd)


def test_check_osu_pass_and_fail():
    rs = RealStructure.conjugation(2)
    assert check_osu(PAULI_1, G2, rs).passed
    diag = check_osu(PAULI_3, G2)
    assert not diag.passed and diag.odd > 1.0


def test_assert_osu_raises():
    with pytest.raises(StructuralError):
        assert_osu(PAULI_3, G2)


def test_real_structure_functoriality(rng):
    rs = RealStructure.from_unitary(np.kron(PAULI_1, np.eye(2)))
    for _ in range(10):
        a = random_hermitian(rng, 4)
        b = random_hermitian(rng, 4)
        assert norm(rs.apply(a @ b) - rs.apply(a) @ rs.apply(b)) < 1e-12
        assert norm(rs.apply(rs.apply(a)) - a) < 1e-12
        assert norm(rs.apply(a).conj().T - rs.apply(a.conj().T)) < 1e-12


def test_real_structure_sign_detection():
    assert RealStructure.from_unitary(np.eye(3)).sign == 1
    assert RealStructure.from_unitary(-1j * PAULI_2).sign == -1


def test_direct_sum_osu():
    e = assert_osu(PAULI_1, G2)
    minus = assert_osu(-PAULI_1, G2)
    total = direct_sum([e, minus])
    assert check_osu(total.u, total.grading).passed
    assert total.dim == 4


def test_direct_sum_associative_up_to_blocks(rng):
    g = G2
    a = assert_osu(PAULI_1, g)
    b = assert_osu(PAULI_2, g)
    c = assert_osu(-PAULI_2, g)
    left = direct_sum([direct_sum([a, b]), c])
    right = direct_sum([a, direct_sum([b, c])])
    assert np.allclose(left.u, right.u)


def test_direct_sum_incompatible():
    e = assert_osu(PAULI_1, G2, RealStructure.conjugation(2))
    f = assert_osu(PAULI_1, G2)
    with pytest.raises(CompositionError):
        direct_sum([e, f])


def test_perturbation_average_idempotent(rng):
    t, e = random_admissible_pair(rng, 3)
    assert np.allclose(perturbation_average(t, e), t)


def test_perturbation_average_anticommutes(rng):
    g = standard_grading(3)
    e = assert_osu(np.kron(np.eye(3), PAULI_1), g)
    m = random_hermitian(rng, 6)
    # inject an even, e-commuting part; averaging must strip it
    m = m + np.kron(random_hermitian(rng, 3), np.eye(2))
    avg = perturbation_average(m, e)
    assert norm(e.u @ avg + avg @ e.u) < 1e-12


def test_rotation_path_of_anticommuting_osus():
    g = G2
    e = assert_osu(PAULI_1, g)
    u = assert_osu(PAULI_2, g)
    for _, point in osu_rotation_path(e, u, steps=32):
        assert check_osu(point, g).passed


def test_rotation_path_requires_anticommuting():
    g = G2
    e = assert_osu(PAULI_1, g)
    with pytest.raises(CompositionError):
        list(osu_rotation_path(e, e))
