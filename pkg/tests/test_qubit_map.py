import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qcpipe.fermion import FermionOperator
from qcpipe.pauli import PauliOperator
from qcpipe.qubit_map import (
    ENCODINGS,
    EncodingMatrix,
    bk_matrix,
    bravyi_kitaev_encode,
    encode,
    gf2_inverse,
    hamiltonian_to_qubits,
    jordan_wigner,
    parity_encode,
)
from qcpipe.simulator import realize, spectrum

c = lambda j: FermionOperator.ladder(j, False)  # noqa: E731
cd = lambda j: FermionOperator.ladder(j, True)  # noqa: E731


def sign_rule_creation(n, j):
    """c^dag_j from the occupation-number sign rule (-1)^{sum_{k<j} f_k}."""
    m = np.zeros((1 << n, 1 << n))
    for f in range(1 << n):
        if not (f >> j) & 1:
            m[f | (1 << j), f] = (-1) ** bin(f & ((1 << j) - 1)).count("1")
    return m


def basis_change(enc: EncodingMatrix):
    perm = enc.permutation()
    P = np.zeros((len(perm), len(perm)))
    P[perm, np.arange(len(perm))] = 1
    return P


def test_jw_single_mode():
    op = jordan_wigner(cd(0), 1)
    assert op.isclose(PauliOperator.from_labels([("X", 0.5), ("Y", -0.5j)]))
    n = jordan_wigner(cd(0) * c(0), 1)
    assert n.isclose(PauliOperator.from_labels([("I", 0.5), ("Z", -0.5)]))


def test_jw_z_string_below():
    op = jordan_wigner(c(2), 4)
    assert op.isclose(PauliOperator.from_labels([("IXZZ", 0.5), ("IYZZ", 0.5j)]))


@pytest.mark.parametrize("j", range(4))
def test_jw_matches_sign_rule(j):
    np.testing.assert_array_equal(realize(jordan_wigner(cd(j), 4)), sign_rule_creation(4, j))


def test_parity_bits():
    enc = EncodingMatrix.named("parity", 3)
    np.testing.assert_array_equal(enc.encode_bits([1, 0, 1]), [1, 1, 0])
    np.testing.assert_array_equal(enc.encode_bits([0, 0, 0]), [0, 0, 0])
    np.testing.assert_array_equal(enc.decode_bits([1, 1, 0]), [1, 0, 1])


def test_bk_small_matrices():
    np.testing.assert_array_equal(bk_matrix(1), [[1]])
    np.testing.assert_array_equal(bk_matrix(2), [[1, 0], [1, 1]])
    b4 = np.array([[1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [1, 1, 1, 1]])
    np.testing.assert_array_equal(bk_matrix(4), b4)
    np.testing.assert_array_equal(EncodingMatrix.named("bk", 4).encode_bits([1, 1, 0, 0]), [1, 0, 0, 0])


def test_bk_truncation():
    big = bk_matrix(8)
    for n in (3, 5, 6, 7):
        np.testing.assert_array_equal(bk_matrix(n), big[:n, :n])


@pytest.mark.parametrize("n", range(1, 10))
@pytest.mark.parametrize("name", ENCODINGS)
def test_encoding_matrix_invertible(name, n):
    b = EncodingMatrix.named(name, n).beta
    assert np.all(np.triu(b, 1) == 0)
    np.testing.assert_array_equal((b.astype(int) @ gf2_inverse(b).astype(int)) % 2, np.eye(n, dtype=int))


def test_singular_matrix():
    with pytest.raises(ValueError):
        gf2_inverse(np.array([[1, 1], [1, 1]]))


@pytest.mark.parametrize("name", ["parity", "bk"])
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_conjugation_by_basis_change(name, n):
    enc = EncodingMatrix.named(name, n)
    P = basis_change(enc)
    for j in range(n):
        expected = P @ realize(jordan_wigner(cd(j), n)) @ P.T
        np.testing.assert_allclose(realize(encode(cd(j), n, name)), expected, atol=1e-15)


@pytest.mark.parametrize("name", ENCODINGS)
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_anticommutation(name, n):
    mats = [realize(encode(c(j), n, name)) for j in range(n)]
    eye = np.eye(1 << n)
    for i, j in itertools.product(range(n), repeat=2):
        a, b = mats[i], mats[j]
        bd = b.conj().T
        assert np.abs(a @ bd + bd @ a - (i == j) * eye).max() < 1e-14
        assert np.abs(a @ b + b @ a).max() < 1e-14


def test_identity_operator():
    q = hamiltonian_to_qubits(FermionOperator.identity(-0.3), "bk", 4)
    assert q.n_terms == 1 and q.operator.coefficient("IIII") == -0.3


def test_h2_jw_ground(h2, h2_fci):
    q = hamiltonian_to_qubits(h2.hamiltonian, "jw", 4)
    assert q.operator.n_qubits == 4 and q.max_weight == 4
    assert spectrum(q.operator)[0] == pytest.approx(h2_fci.ground_energy, abs=1e-10)


def test_h2_spectral_equivalence(h2):
    spectra = [spectrum(hamiltonian_to_qubits(h2.hamiltonian, e, 4).operator) for e in ENCODINGS]
    for a, b in itertools.combinations(spectra, 2):
        np.testing.assert_allclose(a, b, atol=1e-10, rtol=0)


def test_non_hermitian_rejected():
    with pytest.raises(ValueError):
        hamiltonian_to_qubits(cd(0) * c(1), "jw", 2)


def test_jw_number_sector(h4):
    H = realize(h4.qubit_hamiltonian("jw"))
    N = realize(PauliOperator.from_labels([("I" * 8, 4.0)] + [("I" * (7 - k) + "Z" + "I" * k, -0.5) for k in range(8)]))
    assert np.abs(H @ N - N @ H).max() < 1e-10


def test_encoding_wrappers_agree(rng):
    op = cd(1) * c(0) + 0.3 * cd(2) * cd(0) * c(2) * c(1)
    assert parity_encode(op, 3).isclose(encode(op, 3, "parity"))
    assert bravyi_kitaev_encode(op, 3).isclose(encode(op, 3, EncodingMatrix.named("bk", 3)))


def test_mode_range_checked():
    with pytest.raises(ValueError):
        jordan_wigner(c(4), 4)
    with pytest.raises(ValueError):
        EncodingMatrix.named("xyz", 3)


hermitian_ops = st.lists(
    st.tuples(st.lists(st.tuples(st.integers(0, 3), st.booleans()), max_size=4), st.floats(-1, 1)), min_size=1, max_size=5
).map(lambda items: sum((FermionOperator.term(t, v) for t, v in items), FermionOperator())).map(lambda a: a + a.adjoint())


@given(hermitian_ops)
def test_spectral_equivalence_random(op):
    spectra = [spectrum(encode(op, 4, e).real_part()) for e in ENCODINGS]
    for s in spectra[1:]:
        np.testing.assert_allclose(s, spectra[0], atol=1e-10, rtol=0)
