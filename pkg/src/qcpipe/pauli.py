"""Pauli strings in symplectic (x, z) bitmask form, and sparse Pauli sums.

Qubit ``k`` is bit ``k`` of both masks. A string with masks ``(x, z)`` is
``i^popcount(x & z) X^x Z^z``, so ``x = z = 1`` on a qubit gives ``Y``.
Text labels are written with qubit 0 rightmost, matching kets
``|q_{M-1} ... q_0>``; e.g. ``"XZYI"`` has ``I`` on qubit 0 and ``X`` on
qubit 3.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from numbers import Number

import numpy as np

log = logging.getLogger(__name__)

PRUNE = 1e-12
_PHASES = (1, 1j, -1, -1j)


@dataclass(frozen=True, order=True)
class PauliString:
    n: int
    x: int = 0
    z: int = 0

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        x = z = 0
        for k, ch in enumerate(reversed(label.upper())):
            if ch in "XY":
                x |= 1 << k
            if ch in "ZY":
                z |= 1 << k
            if ch not in "IXYZ":
                raise ValueError(f"bad Pauli letter {ch!r}")
        return cls(len(label), x, z)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        label = ["I"] * n
        label[n - 1 - qubit] = letter
        return cls.from_label("".join(label))

    @property
    def label(self) -> str:
        out = []
        for k in range(self.n):
            xb, zb = (self.x >> k) & 1, (self.z >> k) & 1
            out.append("IXZY"[xb + 2 * zb])
        return "".join(reversed(out))

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def commutes(self, other: "PauliString") -> bool:
        return ((self.x & other.z).bit_count() + (self.z & other.x).bit_count()) % 2 == 0

    def __str__(self):
        return self.label


def _mul_xz(x1, z1, x2, z2):
    x3, z3 = x1 ^ x2, z1 ^ z2
    e = (x1 & z1).bit_count() + (x2 & z2).bit_count() + 2 * (z1 & x2).bit_count() - (x3 & z3).bit_count()
    return _PHASES[e % 4], x3, z3


def pauli_multiply(a: PauliString, b: PauliString):
    """Return ``(phase, c)`` with ``a @ b = phase * c``; phase is one of 1, i, -1, -i."""
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} vs {b.n}")
    phase, x, z = _mul_xz(a.x, a.z, b.x, b.z)
    return phase, PauliString(a.n, x, z)


class PauliOperator:
    """Immutable weighted sum of Pauli strings on a fixed number of qubits.

    Internally keyed by ``(x, z)`` mask pairs.
    """

    __slots__ = ("n_qubits", "_terms")

    def __init__(self, n_qubits: int, terms=None):
        self.n_qubits = int(n_qubits)
        acc = defaultdict(complex)
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for key, c in items:
                if isinstance(key, PauliString):
                    if key.n != self.n_qubits:
                        raise ValueError("Pauli string length does not match operator")
                    key = (key.x, key.z)
                elif isinstance(key, str):
                    ps = PauliString.from_label(key)
                    key = (ps.x, ps.z)
                acc[key] += c
        self._terms = {k: v for k, v in acc.items() if v != 0}

    @classmethod
    def identity(cls, n_qubits: int, coeff=1.0):
        return cls(n_qubits, {(0, 0): coeff})

    @classmethod
    def from_labels(cls, pairs):
        pairs = list(pairs)
        n = len(pairs[0][0])
        return cls(n, [(lab, c) for lab, c in pairs])

    @property
    def terms(self) -> dict:
        return {PauliString(self.n_qubits, x, z): v for (x, z), v in self._terms.items()}

    def items_xz(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def coefficient(self, label: str) -> complex:
        ps = PauliString.from_label(label)
        return self._terms.get((ps.x, ps.z), 0.0)

    def _check(self, other):
        if other.n_qubits != self.n_qubits:
            raise ValueError("qubit count mismatch")

    def __add__(self, other):
        if isinstance(other, Number):
            other = PauliOperator.identity(self.n_qubits, other)
        self._check(other)
        out = defaultdict(complex, self._terms)
        for k, v in other._terms.items():
            out[k] += v
        return PauliOperator(self.n_qubits, out)

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Number):
            return PauliOperator(self.n_qubits, {k: v * other for k, v in self._terms.items()})
        self._check(other)
        out = defaultdict(complex)
        for (x1, z1), c1 in self._terms.items():
            for (x2, z2), c2 in other._terms.items():
                ph, x3, z3 = _mul_xz(x1, z1, x2, z2)
                out[x3, z3] += ph * c1 * c2
        return PauliOperator(self.n_qubits, out)

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self * other
        return NotImplemented

    def adjoint(self):
        return PauliOperator(self.n_qubits, {k: np.conj(v) for k, v in self._terms.items()})

    def simplify(self, tol: float = PRUNE):
        return PauliOperator(self.n_qubits, {k: v for k, v in self._terms.items() if abs(v) > tol})

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return all(abs(v.imag) <= atol for v in self._terms.values())

    def real_part(self, warn_above: float = 1e-14, fail_above: float = PRUNE):
        """Drop imaginary residue from a Hermitian sum."""
        worst = max((abs(v.imag) for v in self._terms.values()), default=0.0)
        if worst > fail_above:
            raise ValueError(f"operator is not Hermitian (imaginary residue {worst:.2e})")
        if worst > warn_above:
            log.warning("discarding imaginary residue up to %.2e", worst)
        return PauliOperator(self.n_qubits, {k: complex(v.real) for k, v in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self._terms == other._terms

    __hash__ = None

    def isclose(self, other, atol: float = 1e-12) -> bool:
        self._check(other)
        diff = (self - other)._terms
        return all(abs(v) <= atol for v in diff.values())

    def max_weight(self) -> int:
        return max(((x | z).bit_count() for x, z in self._terms), default=0)

    def sorted_terms(self):
        """Terms as ``(PauliString, coeff)`` in lexicographic label order."""
        items = [(PauliString(self.n_qubits, x, z), v) for (x, z), v in self._terms.items()]
        return sorted(items, key=lambda kv: kv[0].label)

    def to_text(self) -> str:
        return "".join(f"({v.real!r},{v.imag!r}) {ps.label}\n" for ps, v in self.sorted_terms())

    @classmethod
    def from_text(cls, text: str):
        pairs = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            coeff, label = line.rsplit(None, 1)
            re_, im = coeff.strip("()").split(",")
            pairs.append((label, complex(float(re_), float(im))))
        return cls.from_labels(pairs)

    def __repr__(self):
        return f"PauliOperator(n_qubits={self.n_qubits}, {len(self)} terms)"
