"""Fermion-to-qubit encodings defined by a binary basis-change matrix.

An encoding is an invertible GF(2) matrix ``beta`` with qubit bits
``q = beta f (mod 2)`` for occupation bits ``f``. Jordan-Wigner is the
identity, parity the lower-triangular all-ones matrix, Bravyi-Kitaev the
recursive block matrix.

For any such matrix the ladder operator on mode ``j`` has a closed Pauli
image. Flipping ``f_j`` flips the qubits in column ``j`` of ``beta``; the
occupation ``f_j`` and the sign parity ``sum_{k<j} f_k`` are linear functions
of ``q`` given by rows of ``beta^-1``. Hence ::

    c_j     = X_U Z_P (I - Z_F) / 2
    c^dag_j = X_U Z_P (I + Z_F) / 2

with ``U`` = column ``j`` of ``beta``, ``F`` = row ``j`` of ``beta^-1`` and
``P`` = the sum of rows ``k < j`` of ``beta^-1``. The resulting matrices are
exactly the Jordan-Wigner matrices conjugated by the permutation
``|f> -> |beta f>``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .fermion import FermionOperator
from .pauli import PauliOperator

log = logging.getLogger(__name__)

ENCODINGS = ("jw", "parity", "bk")


def gf2_inverse(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.uint8) % 2
    n = m.shape[0]
    aug = np.concatenate([m, np.eye(n, dtype=np.uint8)], axis=1)
    for col in range(n):
        pivots = np.nonzero(aug[col:, col])[0]
        if len(pivots) == 0:
            raise ValueError("matrix is singular over GF(2)")
        piv = col + pivots[0]
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        for row in range(n):
            if row != col and aug[row, col]:
                aug[row] ^= aug[col]
    return aug[:, n:]


def bk_matrix(n: int) -> np.ndarray:
    """Bravyi-Kitaev matrix of order ``n``.

    Built recursively on powers of two, ``beta_{2m} = [[beta_m, 0], [A, beta_m]]``
    with ``A`` an ``m x m`` block whose last row is all ones, then truncated to
    the leading ``n x n`` block.
    """
    if n < 1:
        raise ValueError("need at least one mode")
    beta = np.ones((1, 1), dtype=np.uint8)
    while beta.shape[0] < n:
        m = beta.shape[0]
        A = np.zeros((m, m), dtype=np.uint8)
        A[-1, :] = 1
        beta = np.block([[beta, np.zeros((m, m), dtype=np.uint8)], [A, beta]])
    return beta[:n, :n].copy()


def parity_matrix(n: int) -> np.ndarray:
    return np.tril(np.ones((n, n), dtype=np.uint8))


def jw_matrix(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.uint8)


def _mask(bits) -> int:
    return int(sum(1 << k for k, b in enumerate(bits) if b))


@dataclass(frozen=True)
class EncodingMatrix:
    beta: np.ndarray

    @classmethod
    def named(cls, name: str, n: int) -> "EncodingMatrix":
        builders = {"jw": jw_matrix, "parity": parity_matrix, "bk": bk_matrix}
        try:
            return cls(builders[name](n))
        except KeyError:
            raise ValueError(f"unknown encoding {name!r}; choose from {ENCODINGS}") from None

    @property
    def n(self) -> int:
        return self.beta.shape[0]

    @cached_property
    def inverse(self) -> np.ndarray:
        return gf2_inverse(self.beta)

    def encode_bits(self, f) -> np.ndarray:
        return (self.beta.astype(int) @ np.asarray(f, dtype=int)) % 2

    def decode_bits(self, q) -> np.ndarray:
        return (self.inverse.astype(int) @ np.asarray(q, dtype=int)) % 2

    def encode_int(self, occupation: int) -> int:
        f = [(occupation >> k) & 1 for k in range(self.n)]
        return _mask(self.encode_bits(f))

    def permutation(self) -> np.ndarray:
        """``perm[f] = q`` over all ``2^n`` basis indices."""
        return np.array([self.encode_int(f) for f in range(1 << self.n)], dtype=np.int64)

    @cached_property
    def _ladder_masks(self):
        inv = self.inverse.astype(int)
        out = []
        for j in range(self.n):
            u = _mask(self.beta[:, j])
            f = _mask(inv[j])
            p = _mask(inv[:j].sum(axis=0) % 2) if j else 0
            out.append((u, p, f))
        return out

    def ladder(self, j: int, dagger: bool) -> PauliOperator:
        """Pauli image of ``c_j`` or ``c^dag_j``."""
        u, p, f = self._ladder_masks[j]
        s = 0.5 if dagger else -0.5
        # X_U Z_P as a symplectic string carries i^{|U&P|} relative to the plain product
        base = PauliOperator(self.n, {(u, p): (-1j) ** (u & p).bit_count()})
        proj = PauliOperator(self.n, {(0, 0): 0.5, (0, f): s})
        return base * proj


def encode(op: FermionOperator, n_modes: int, encoding="jw") -> PauliOperator:
    """Map a fermionic operator to qubits under the given encoding."""
    enc = encoding if isinstance(encoding, EncodingMatrix) else EncodingMatrix.named(encoding, n_modes)
    if enc.n != n_modes:
        raise ValueError("encoding size does not match mode count")
    if op.max_mode() >= n_modes:
        raise ValueError(f"operator acts on mode {op.max_mode()} >= {n_modes}")
    cache = {}
    acc = {}
    for key, coeff in op:
        img = PauliOperator.identity(n_modes, coeff)
        for mode, dagger in key:
            if (mode, dagger) not in cache:
                cache[mode, dagger] = enc.ladder(mode, bool(dagger))
            img = img * cache[mode, dagger]
        for k, v in img.items_xz():
            acc[k] = acc.get(k, 0.0) + v
    return PauliOperator(n_modes, acc).simplify()


def jordan_wigner(op: FermionOperator, n_modes: int) -> PauliOperator:
    return encode(op, n_modes, "jw")


def parity_encode(op: FermionOperator, n_modes: int) -> PauliOperator:
    return encode(op, n_modes, "parity")


def bravyi_kitaev_encode(op: FermionOperator, n_modes: int) -> PauliOperator:
    return encode(op, n_modes, "bk")


@dataclass(frozen=True)
class QubitHamiltonian:
    operator: PauliOperator
    encoding: str
    n_terms: int
    max_weight: int


def hamiltonian_to_qubits(h: FermionOperator, encoding: str, n_modes: int, check_hermitian: bool = True):
    if check_hermitian and not h.is_hermitian(atol=1e-10):
        raise ValueError("fermionic Hamiltonian is not Hermitian")
    q = encode(h, n_modes, encoding).real_part().simplify()
    return QubitHamiltonian(q, encoding, len(q), q.max_weight())
