"""Sparse fermionic operators: weighted sums of ladder-operator products.

A term is a tuple of ``(mode, dagger)`` pairs read left to right, so
``((3, 1), (0, 0))`` is ``c^dag_3 c_0``. Occupation bitstrings put mode ``k``
at bit ``k``; a ladder operator on mode ``j`` picks up the sign
``(-1)^(number of occupied modes below j)``.
"""
from __future__ import annotations

import re
from collections import defaultdict
from numbers import Number

import numpy as np

PRUNE = 1e-12
MAX_DENSE_MODES = 14


def _parse_term(s: str):
    ops = []
    for tok in s.split():
        if tok.endswith("^"):
            ops.append((int(tok[:-1]), 1))
        else:
            ops.append((int(tok), 0))
    return tuple(ops)


class FermionOperator:
    """Immutable mapping from ladder sequences to complex coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        acc = defaultdict(complex)
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for key, coeff in items:
                acc[tuple((int(m), int(d)) for m, d in key)] += coeff
        self._terms = {k: v for k, v in acc.items() if v != 0}

    # construction helpers
    @classmethod
    def identity(cls, coeff=1.0):
        return cls({(): coeff})

    @classmethod
    def ladder(cls, mode: int, dagger: bool):
        return cls({((mode, int(dagger)),): 1.0})

    @classmethod
    def term(cls, ops, coeff=1.0):
        return cls({tuple(ops): coeff})

    @classmethod
    def number(cls, n_modes: int):
        return cls({((k, 1), (k, 0)): 1.0 for k in range(n_modes)})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def max_mode(self) -> int:
        return max((m for k in self._terms for m, _ in k), default=-1)

    # algebra
    def __add__(self, other):
        if isinstance(other, Number):
            other = FermionOperator.identity(other)
        out = defaultdict(complex, self._terms)
        for k, v in other._terms.items():
            out[k] += v
        return FermionOperator(out)

    __radd__ = __add__

    def __neg__(self):
        return FermionOperator({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return FermionOperator({k: v * other for k, v in self._terms.items()})
        out = defaultdict(complex)
        for k1, v1 in self._terms.items():
            for k2, v2 in other._terms.items():
                out[k1 + k2] += v1 * v2
        return FermionOperator(out)

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self * other
        return NotImplemented

    def __truediv__(self, x):
        return self * (1.0 / x)

    def __pow__(self, n: int):
        out = FermionOperator.identity()
        for _ in range(n):
            out = out * self
        return out

    def adjoint(self):
        return FermionOperator(
            {tuple((m, 1 - d) for m, d in reversed(k)): np.conj(v) for k, v in self._terms.items()}
        )

    def simplify(self, tol: float = PRUNE):
        return FermionOperator({k: v for k, v in self._terms.items() if abs(v) > tol})

    def __eq__(self, other):
        if not isinstance(other, FermionOperator):
            return NotImplemented
        return self._terms == other._terms

    def isclose(self, other, atol: float = 1e-12) -> bool:
        diff = (normal_order(self) - normal_order(other))._terms
        return all(abs(v) <= atol for v in diff.values())

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return self.isclose(self.adjoint(), atol)

    def __repr__(self):
        return f"FermionOperator({len(self)} terms)"

    # serialization
    def to_text(self) -> str:
        lines = []
        for key in sorted(self._terms, key=lambda k: (len(k), k)):
            v = self._terms[key]
            ops = " ".join(f"{m}^" if d else f"{m}" for m, d in key)
            lines.append(f"({v.real!r},{v.imag!r}) : {ops}".rstrip())
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str):
        terms = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            coeff, _, ops = line.partition(":")
            m = re.fullmatch(r"\(\s*([^,]+)\s*,\s*([^)]+)\s*\)", coeff.strip())
            value = complex(float(m.group(1)), float(m.group(2))) if m else complex(coeff.strip())
            terms.append((_parse_term(ops), value))
        return cls(terms)

    # dense realization over occupation-number states
    def to_matrix(self, n_modes: int | None = None) -> np.ndarray:
        n = self.max_mode() + 1 if n_modes is None else n_modes
        if n > MAX_DENSE_MODES:
            raise ValueError(f"dense realization capped at {MAX_DENSE_MODES} modes")
        dim = 1 << n
        mat = np.zeros((dim, dim), dtype=complex)
        cols = np.arange(dim, dtype=np.int64)
        for key, coeff in self._terms.items():
            rows, sign, ok = apply_sequence(key, cols)
            np.add.at(mat, (rows[ok], cols[ok]), coeff * sign[ok])
        return mat


def apply_sequence(key, bits):
    """Act with a ladder sequence on occupation bitstrings (vectorized).

    Returns ``(new_bits, sign, alive)``; entries with ``alive == False`` were
    annihilated.
    """
    b = np.array(bits, dtype=np.int64, copy=True)
    sign = np.ones(b.shape, dtype=float)
    alive = np.ones(b.shape, dtype=bool)
    for mode, dagger in reversed(key):
        mask = np.int64(1) << mode
        occupied = (b & mask) != 0
        alive &= occupied != bool(dagger)
        below = np.bitwise_count(b & (mask - 1)).astype(np.int64)
        sign *= 1.0 - 2.0 * (below & 1)
        b ^= mask
    return b, sign, alive


def apply_sequence_to_det(key, det: int):
    """Scalar version of :func:`apply_sequence`; ``None`` if annihilated."""
    sign = 1
    for mode, dagger in reversed(key):
        mask = 1 << mode
        if bool(det & mask) == bool(dagger):
            return None
        if (det & (mask - 1)).bit_count() & 1:
            sign = -sign
        det ^= mask
    return sign, det


def _normal_order_term(key, coeff, out):
    stack = [(list(key), coeff)]
    while stack:
        ops, c = stack.pop()
        n = len(ops)
        done = True
        for i in range(n - 1):
            (m1, d1), (m2, d2) = ops[i], ops[i + 1]
            if d1 == d2:
                if m1 == m2:
                    done = True
                    ops = None
                    break
                if m1 < m2:
                    ops[i], ops[i + 1] = ops[i + 1], ops[i]
                    c = -c
                    done = False
                    break
            elif d1 == 0 and d2 == 1:
                swapped = ops[:i] + [ops[i + 1], ops[i]] + ops[i + 2:]
                stack.append((swapped, -c))
                if m1 == m2:
                    stack.append((ops[:i] + ops[i + 2:], c))
                ops = None
                done = True
                break
        if ops is None:
            continue
        if done:
            out[tuple(ops)] += c
        else:
            stack.append((ops, c))


def normal_order(op: FermionOperator) -> FermionOperator:
    """Canonical form: creators left of annihilators, each group by descending mode."""
    out = defaultdict(complex)
    for key, coeff in op:
        _normal_order_term(key, coeff, out)
    return FermionOperator(out).simplify(0.0)


def commutator(a: FermionOperator, b: FermionOperator) -> FermionOperator:
    return normal_order(a * b - b * a)
