"""Determinant-space configuration interaction by direct operator action.

Determinants are occupation bitstrings over spin orbitals (mode ``k`` at bit
``k``). The reference is the lowest ``N_e`` spin orbitals. Matrix elements
come from acting with the fermionic Hamiltonian on each determinant, so the
only physics input is the :class:`~qcpipe.fermion.FermionOperator`.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .fermion import FermionOperator, apply_sequence, apply_sequence_to_det


@dataclass(frozen=True)
class CiSpace:
    n_modes: int
    n_electrons: int
    max_rank: int
    dets: tuple[int, ...]

    @property
    def reference(self) -> int:
        return (1 << self.n_electrons) - 1

    def __len__(self):
        return len(self.dets)

    def label(self, det: int) -> str:
        return format(det, f"0{self.n_modes}b")


def excitation_rank(det: int, reference: int) -> int:
    return (det & ~reference).bit_count()


def _sz2(det: int) -> int:
    alpha = (det & 0x5555555555555555).bit_count()
    beta = (det & 0xAAAAAAAAAAAAAAAA).bit_count()
    return alpha - beta


def enumerate_space(n_modes: int, n_electrons: int, max_rank: int | None = None, sz=None) -> CiSpace:
    """All determinants within ``max_rank`` excitations of the reference.

    ``max_rank=None`` means full CI. ``sz`` filters on the spin projection
    (interleaved alpha/beta ordering), e.g. ``sz=0`` for singlets.
    Ordering: reference first, then ascending excitation rank, then bitstring value.
    """
    if not 0 < n_electrons <= n_modes:
        raise ValueError(f"invalid sector: {n_electrons} electrons in {n_modes} modes")
    J = n_electrons if max_rank is None else max_rank
    if not 1 <= J <= n_electrons:
        raise ValueError(f"excitation rank must lie in [1, {n_electrons}]")
    ref = (1 << n_electrons) - 1
    dets = []
    for occ in combinations(range(n_modes), n_electrons):
        det = sum(1 << k for k in occ)
        if excitation_rank(det, ref) > J:
            continue
        if sz is not None and _sz2(det) != round(2 * sz):
            continue
        dets.append(det)
    if not dets:
        raise ValueError("empty CI space for the requested sector")
    dets.sort(key=lambda d: (excitation_rank(d, ref), d))
    return CiSpace(n_modes, n_electrons, J, tuple(dets))


def apply_fermion_op(op: FermionOperator, det: int):
    """Signed action on one determinant: list of ``(coefficient, det)``, merged."""
    acc: dict[int, complex] = {}
    for key, coeff in op:
        res = apply_sequence_to_det(key, det)
        if res is None:
            continue
        sign, new = res
        acc[new] = acc.get(new, 0.0) + sign * coeff
    return [(c, d) for d, c in acc.items() if c != 0]


def ci_matrix(h: FermionOperator, space: CiSpace, e_nuc: float = 0.0) -> np.ndarray:
    dets = np.array(space.dets, dtype=np.int64)
    order = np.argsort(dets)
    sorted_dets = dets[order]
    n = len(dets)
    H = np.zeros((n, n), dtype=complex)
    cols = np.arange(n)
    for key, coeff in h:
        new, sign, alive = apply_sequence(key, dets)
        pos = np.searchsorted(sorted_dets, new)
        pos = np.minimum(pos, n - 1)
        inside = alive & (sorted_dets[pos] == new)
        rows = order[pos[inside]]
        np.add.at(H, (rows, cols[inside]), coeff * sign[inside])
    H += e_nuc * np.eye(n)
    return H


@dataclass
class CiResult:
    energies: np.ndarray
    vectors: np.ndarray  # columns are eigenvectors over space.dets
    space: CiSpace

    @property
    def ground_energy(self) -> float:
        return float(self.energies[0])

    @property
    def ground_vector(self) -> np.ndarray:
        return self.vectors[:, 0]

    def coefficient(self, det: int, state: int = 0):
        return self.vectors[self.space.dets.index(det), state]

    def to_dict(self, n_states: int | None = 1) -> dict:
        k = len(self.energies) if n_states is None else min(n_states, len(self.energies))
        return {
            "energies": self.energies.tolist(),
            "n_determinants": len(self.space),
            "max_rank": self.space.max_rank,
            "states": [
                {self.space.label(d): float(self.vectors[i, s].real) for i, d in enumerate(self.space.dets)}
                for s in range(k)
            ],
        }


def ci_solve(h: FermionOperator, space: CiSpace, e_nuc: float = 0.0) -> CiResult:
    """Diagonalize ``h`` in ``space``; ``e_nuc`` is added on top of any identity term of ``h``."""
    H = ci_matrix(h, space, e_nuc)
    if np.abs(H.imag).max() < 1e-12:
        H = H.real
    w, V = np.linalg.eigh(H)
    for s in range(V.shape[1]):
        k = np.argmax(np.abs(V[:, s]))
        V[:, s] *= abs(V[k, s]) / V[k, s]
    return CiResult(w, V, space)


def full_ci(h: FermionOperator, n_modes: int, n_electrons: int, sz=None) -> CiResult:
    return ci_solve(h, enumerate_space(n_modes, n_electrons, None, sz))


def determinant_to_state(space: CiSpace, coeffs, encoding=None) -> np.ndarray:
    """Embed CI coefficients in the full ``2^M`` qubit space (optionally encoded)."""
    psi = np.zeros(1 << space.n_modes, dtype=complex)
    for c, d in zip(coeffs, space.dets):
        psi[encoding.encode_int(d) if encoding is not None else d] = c
    return psi
