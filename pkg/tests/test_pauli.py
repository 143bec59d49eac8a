import numpy as np
import pytest
from hypothesis import given, strategies as st

from qcpipe.pauli import PauliOperator, PauliString, pauli_multiply
from qcpipe.simulator import realize

LETTERS = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]), "Y": np.array([[0, -1j], [1j, 0]]), "Z": np.diag([1, -1])}


def dense(label):
    """Kronecker product with the last letter acting on qubit 0."""
    m = np.ones((1, 1))
    for ch in label:
        m = np.kron(m, LETTERS[ch])
    return m


labels = st.integers(1, 5).flatmap(lambda n: st.tuples(st.text("IXYZ", min_size=n, max_size=n), st.text("IXYZ", min_size=n, max_size=n)))


def test_single_qubit_products():
    X, Y = PauliString.from_label("X"), PauliString.from_label("Y")
    assert pauli_multiply(X, X) == (1, PauliString.from_label("I"))
    assert pauli_multiply(X, Y) == (1j, PauliString.from_label("Z"))
    assert pauli_multiply(Y, X) == (-1j, PauliString.from_label("Z"))


def test_length_mismatch():
    with pytest.raises(ValueError):
        pauli_multiply(PauliString.from_label("XX"), PauliString.from_label("X"))


@given(labels)
def test_product_matches_dense(pair):
    a, b = map(PauliString.from_label, pair)
    phase, c = pauli_multiply(a, b)
    np.testing.assert_allclose(phase * dense(c.label), dense(a.label) @ dense(b.label), atol=1e-15)
    back_phase, back = pauli_multiply(c, b)
    assert back == a and phase * back_phase == 1
    assert a.commutes(b) == np.allclose(dense(a.label) @ dense(b.label), dense(b.label) @ dense(a.label))


@given(st.text("IXYZ", min_size=1, max_size=6))
def test_label_roundtrip(label):
    ps = PauliString.from_label(label)
    assert ps.label == label
    assert ps.weight == sum(ch != "I" for ch in label)
    np.testing.assert_allclose(realize(PauliOperator.from_labels([(label, 1.0)])), dense(label), atol=0)


def test_qubit_zero_is_rightmost():
    ps = PauliString.single(3, 0, "Z")
    assert ps.label == "IIZ"
    assert ps.x == 0 and ps.z == 1


coef = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)
ops = st.lists(st.tuples(st.text("IXYZ", min_size=3, max_size=3), coef), min_size=1, max_size=6).map(PauliOperator.from_labels)


@given(ops, ops, coef)
def test_operator_algebra_dense(a, b, s):
    np.testing.assert_allclose(realize(a * b), realize(a) @ realize(b), atol=1e-12)
    np.testing.assert_allclose(realize(a + s * b), realize(a) + s * realize(b), atol=1e-12)
    np.testing.assert_allclose(realize(a.adjoint()), realize(a).conj().T, atol=1e-12)


@given(ops, ops, coef)
def test_simplify_idempotent_and_linear(a, b, s):
    assert a.simplify().simplify() == a.simplify()
    assert (a + s * b).simplify().isclose(a.simplify() + s * b.simplify(), atol=1e-11)


def test_coefficient_pruning():
    op = PauliOperator.from_labels([("XI", 1e-13), ("ZZ", 1.0)]).simplify()
    assert len(op) == 1 and op.coefficient("ZZ") == 1.0
    assert op.coefficient("XX") == 0


def test_text_format():
    op = PauliOperator.from_labels([("ZYIX", 0.25), ("XZYI", 0.5)])
    text = op.to_text()
    assert text.splitlines() == ["(0.5,0.0) XZYI", "(0.25,0.0) ZYIX"]
    assert PauliOperator.from_text(text).isclose(op)
    assert PauliOperator.from_text("(0.5,0) XZYI\n").coefficient("XZYI") == 0.5


def test_real_part_guards(caplog):
    op = PauliOperator.from_labels([("Z", 1.0 + 1e-13j)])
    with caplog.at_level("WARNING"):
        assert op.real_part().coefficient("Z") == 1.0
    assert "imaginary" in caplog.text
    with pytest.raises(ValueError):
        PauliOperator.from_labels([("Z", 1.0 + 1e-9j)]).real_part()


def test_mixed_sizes_rejected():
    with pytest.raises(ValueError):
        PauliOperator.identity(2) + PauliOperator.identity(3)
