"""Dense statevector simulation of Pauli-sum Hamiltonians.

States are complex numpy arrays of length ``2^M`` with qubit 0 as the least
significant bit of the basis index. Functions that act on states also accept
a 2-D array whose columns are states, which is how full unitaries are built.
Inputs are never modified.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliOperator, PauliString

MAX_QUBITS = 14
_IPOW = np.array([1, 1j, -1, -1j])


class SimulatorCapError(ValueError):
    pass


def _check_cap(n: int, cap: int = MAX_QUBITS):
    if n > cap:
        raise SimulatorCapError(f"{n} qubits exceeds dense simulation cap of {cap}")


def _popcount_parity(arr):
    return (np.bitwise_count(arr) & 1).astype(np.int8)


def _indices(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def _string_phase(n, x, z, idx=None):
    """Diagonal factor ``i^|x&z| (-1)^|b&z|`` over basis indices ``b``."""
    idx = _indices(n) if idx is None else idx
    return _IPOW[(x & z).bit_count() % 4] * (1 - 2 * _popcount_parity(idx & z))


def basis_state(n: int, index: int) -> np.ndarray:
    psi = np.zeros(1 << n, dtype=complex)
    psi[index] = 1.0
    return psi


def random_state(n: int, rng) -> np.ndarray:
    psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return psi / np.linalg.norm(psi)


def n_qubits_of(psi) -> int:
    dim = psi.shape[0]
    n = dim.bit_length() - 1
    if 1 << n != dim:
        raise ValueError(f"state dimension {dim} is not a power of two")
    return n


@dataclass
class CompiledOperator:
    """Pauli sum regrouped by x-mask: ``H psi = sum_x  P_x (d_x * psi)``."""

    n_qubits: int
    groups: list  # (x mask, diagonal vector)

    def apply(self, psi):
        idx = _indices(self.n_qubits)
        out = np.zeros_like(psi, dtype=complex)
        for x, diag in self.groups:
            v = diag * psi if psi.ndim == 1 else diag[:, None] * psi
            out[idx ^ x] += v
        return out


def compile_operator(op: PauliOperator) -> CompiledOperator:
    n = op.n_qubits
    _check_cap(n)
    idx = _indices(n)
    groups: dict[int, np.ndarray] = {}
    for (x, z), c in op.items_xz():
        d = c * _string_phase(n, x, z, idx)
        if x in groups:
            groups[x] = groups[x] + d
        else:
            groups[x] = d
    return CompiledOperator(n, sorted(groups.items(), key=lambda kv: kv[0]))


def _compiled(op):
    return op if isinstance(op, CompiledOperator) else compile_operator(op)


def realize(op: PauliOperator, cap: int = MAX_QUBITS) -> np.ndarray:
    """Dense ``2^M x 2^M`` matrix of a Pauli sum, built string by string."""
    n = op.n_qubits
    _check_cap(n, cap)
    idx = _indices(n)
    mat = np.zeros((1 << n, 1 << n), dtype=complex)
    for x, diag in compile_operator(op).groups:
        mat[idx ^ x, idx] += diag
    return mat


def apply_operator(op, psi):
    return _compiled(op).apply(psi)


def apply_pauli(psi, string: PauliString):
    n = string.n
    idx = _indices(n)
    ph = _string_phase(n, string.x, string.z, idx)
    out = np.empty_like(psi, dtype=complex)
    out[idx ^ string.x] = ph * psi if psi.ndim == 1 else ph[:, None] * psi
    return out


def apply_pauli_rotation(psi, string: PauliString, theta: float):
    """``exp(-i theta P / 2) psi``."""
    return np.cos(theta / 2) * psi - 1j * np.sin(theta / 2) * apply_pauli(psi, string)


def expectation(op, psi, atol: float = 1e-10) -> float:
    """``<psi|H|psi>`` term group by term group, without a dense matrix."""
    if isinstance(op, PauliOperator) and not op.is_hermitian(atol=1e-12):
        raise ValueError("expectation requires a Hermitian operator")
    comp = _compiled(op)
    if psi.shape[0] != 1 << comp.n_qubits:
        raise ValueError("state dimension does not match operator")
    val = np.vdot(psi, comp.apply(psi))
    if abs(val.imag) > atol:
        raise ValueError(f"expectation has imaginary part {val.imag:.2e}")
    return float(val.real)


def pauli_expectations(op: PauliOperator, psi):
    """Per-string expectations ``<psi|P_k|psi>`` (real for Pauli strings)."""
    n = op.n_qubits
    idx = _indices(n)
    out = []
    for (x, z), c in op.items_xz():
        ph = _string_phase(n, x, z, idx)
        val = np.vdot(psi[idx ^ x], ph * psi)
        out.append(((x, z), c, float(val.real)))
    return out


def _fix_phase(v):
    k = np.argmax(np.abs(v))
    return v * (abs(v[k]) / v[k])


def ground_state(op: PauliOperator):
    """Lowest eigenpair of the dense realization; largest amplitude made real positive."""
    w, V = np.linalg.eigh(realize(op))
    return float(w[0]), _fix_phase(V[:, 0])


def spectrum(op: PauliOperator) -> np.ndarray:
    return np.linalg.eigvalsh(realize(op))


def _parse_method(method):
    if method == "exact":
        return "exact", None
    if isinstance(method, tuple) and method[0] == "trotter":
        return "trotter", int(method[1])
    if isinstance(method, str) and method.startswith("trotter"):
        return "trotter", int(method.split(":")[1])
    raise ValueError(f"unknown evolution method {method!r}; use 'exact' or ('trotter', n)")


def trotter_step_order(op: PauliOperator):
    """Terms in the fixed lexicographic label order used for Trotter products."""
    return op.sorted_terms()


def evolve(psi, op: PauliOperator, t: float, method="exact"):
    """``exp(-i H t) psi`` exactly or by first-order Trotter product.

    ``method`` is ``"exact"`` or ``("trotter", n_steps)``; ``"trotter:n"`` is
    also accepted. Trotter steps apply ``exp(-i a_k P_k t / n)`` for each term
    in lexicographic label order.
    """
    kind, n_steps = _parse_method(method)
    if not op.is_hermitian():
        raise ValueError("evolution requires a Hermitian operator")
    _check_cap(op.n_qubits)
    if kind == "exact":
        w, V = np.linalg.eigh(realize(op))
        coeffs = V.conj().T @ psi
        phase = np.exp(-1j * w * t)
        return V @ (phase * coeffs if psi.ndim == 1 else phase[:, None] * coeffs)
    if n_steps < 1:
        raise ValueError("Trotter step count must be positive")
    order = trotter_step_order(op)
    dt = t / n_steps
    out = np.array(psi, dtype=complex)
    for _ in range(n_steps):
        for ps, c in order:
            if ps.is_identity():
                out = out * np.exp(-1j * c.real * dt)
            else:
                out = apply_pauli_rotation(out, ps, 2.0 * c.real * dt)
    return out


def evolution_unitary(op: PauliOperator, t: float, method="exact") -> np.ndarray:
    return evolve(np.eye(1 << op.n_qubits, dtype=complex), op, t, method)


def save_state(path, psi) -> None:
    import json

    with open(path, "w") as fh:
        json.dump([[float(a.real), float(a.imag)] for a in psi], fh)
