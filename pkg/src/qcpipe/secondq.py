"""Second-quantized electronic Hamiltonian over spin orbitals.

Spin orbitals are interleaved: mode ``2p`` is spatial orbital ``p`` with
spin alpha, mode ``2p + 1`` the same orbital with spin beta.

Two-electron integrals over spin orbitals are held in physicist order,
``h_pqrs = <pq|rs> = int phi_p*(1) phi_q*(2) r12^-1 phi_r(1) phi_s(2)``, so
``p`` pairs with ``r`` and ``q`` with ``s``. With that tensor the Hamiltonian
is ::

    H = e_nuc + sum_pq h_pq c^dag_p c_q + 1/2 sum_pqrs h_pqrs c^dag_p c^dag_q c_s c_r

Written in the ``c^dag_p c^dag_q c_r c_s`` ordering the two-body coefficient
is ``-h_pqrs / 2``. The factor is pinned by requiring ``<HF|H|HF>`` to equal
the SCF total energy.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from math import factorial

import numpy as np

from .fermion import FermionOperator
from .integrals import IntegralTables


@dataclass(frozen=True)
class MoIntegrals:
    h1: np.ndarray  # (M, M) spin-orbital one-body integrals
    h2: np.ndarray  # (M, M, M, M) physicist-order <pq|rs>
    e_nuc: float = 0.0

    @property
    def n_modes(self) -> int:
        return self.h1.shape[0]


def transform_spatial(hcore, eri, C):
    """Spatial AO -> MO transform; ``eri`` in chemist order, four quarter steps."""
    h = C.T @ hcore @ C
    g = np.einsum("pqrs,pi->iqrs", eri, C, optimize=True)
    g = np.einsum("iqrs,qj->ijrs", g, C, optimize=True)
    g = np.einsum("ijrs,rk->ijks", g, C, optimize=True)
    g = np.einsum("ijks,sl->ijkl", g, C, optimize=True)
    return h, g


def chem_to_phys(eri):
    """``(pr|qs)`` -> ``<pq|rs>``."""
    return np.ascontiguousarray(eri.transpose(0, 2, 1, 3))


def spin_orbital_integrals(h_spatial, eri_spatial):
    """Expand spatial MO integrals to interleaved spin orbitals.

    Returns ``(h1, h2)`` with ``h2`` in physicist order.
    """
    n = h_spatial.shape[0]
    spin = np.arange(2 * n) % 2
    spatial = np.arange(2 * n) // 2
    same = (spin[:, None] == spin[None, :]).astype(float)
    h1 = h_spatial[np.ix_(spatial, spatial)] * same
    phys = chem_to_phys(eri_spatial)
    h2 = phys[np.ix_(spatial, spatial, spatial, spatial)]
    h2 = h2 * same[:, None, :, None] * same[None, :, None, :]
    return h1, h2


def ao_to_mo(tables: IntegralTables, C: np.ndarray, e_nuc: float = 0.0, atol: float = 1e-8) -> MoIntegrals:
    C = np.asarray(C, dtype=float)
    ortho = C.T @ tables.S @ C
    if not np.allclose(ortho, np.eye(C.shape[1]), atol=atol, rtol=0.0):
        raise ValueError("MO coefficients are not S-orthonormal")
    h, g = transform_spatial(tables.Hcore, tables.eri, C)
    h1, h2 = spin_orbital_integrals(h, g)
    return MoIntegrals(h1, h2, float(e_nuc))


def build_hamiltonian(mo: MoIntegrals) -> FermionOperator:
    terms = {}
    if mo.e_nuc != 0.0:
        terms[()] = mo.e_nuc
    n = mo.n_modes
    for p, q in product(range(n), repeat=2):
        v = mo.h1[p, q]
        if v != 0.0:
            terms[(p, 1), (q, 0)] = v
    nz = np.argwhere(mo.h2 != 0.0)
    for p, q, r, s in nz:
        if p == q or r == s:
            continue
        terms[(p, 1), (q, 1), (s, 0), (r, 0)] = 0.5 * mo.h2[p, q, r, s]
    return FermionOperator(terms)


def hf_occupation(n_electrons: int) -> int:
    """Bitstring of the reference determinant: the lowest ``n_electrons`` spin orbitals."""
    return (1 << n_electrons) - 1


def _check_antisymmetric(amps, rank):
    for perm in permutations(range(rank)):
        sign = np.linalg.det(np.eye(rank)[list(perm)])
        occ_perm = amps.transpose(list(perm) + list(range(rank, 2 * rank)))
        virt_perm = amps.transpose(list(range(rank)) + [rank + k for k in perm])
        if not (np.allclose(occ_perm, sign * amps, atol=1e-12) and np.allclose(virt_perm, sign * amps, atol=1e-12)):
            raise ValueError("rank >= 2 amplitudes must be antisymmetric in occupied and in virtual indices")


def excitation_operator(kind: str, amplitudes, n_occ: int, n_virt: int) -> FermionOperator:
    """CI (``kind='C'``) or cluster (``kind='T'``) excitation operator of rank I.

    ``amplitudes`` has shape ``(n_occ,)*I + (n_virt,)*I`` indexed
    ``[i, j, ..., a, b, ...]``. Occupied index ``i`` is mode ``i``, virtual
    index ``a`` is mode ``n_occ + a``. The operator is ::

        1/(I!)^2 sum t[i, j, .., a, b, ..] c^dag_a c^dag_b ... c_j c_i

    Both kinds share this form; they differ only in how their amplitudes enter
    a wavefunction (linearly for CI, through the exponential for CC).
    """
    if kind not in ("C", "T"):
        raise ValueError("kind must be 'C' or 'T'")
    t = np.asarray(amplitudes)
    if t.ndim % 2 or t.ndim == 0:
        raise ValueError("amplitude tensor must have 2*rank indices")
    rank = t.ndim // 2
    expected = (n_occ,) * rank + (n_virt,) * rank
    if t.shape != expected:
        raise ValueError(f"amplitude shape {t.shape} does not match {expected}")
    if rank >= 2:
        _check_antisymmetric(t, rank)
    pref = 1.0 / factorial(rank) ** 2
    terms = {}
    for idx in np.argwhere(t != 0):
        occ, virt = idx[:rank], idx[rank:]
        if len(set(occ)) < rank or len(set(virt)) < rank:
            continue
        key = tuple((n_occ + int(a), 1) for a in virt) + tuple((int(i), 0) for i in reversed(occ))
        terms[key] = terms.get(key, 0.0) + pref * t[tuple(idx)]
    return FermionOperator(terms)


def excitation(occupied, virtual) -> FermionOperator:
    """Single term ``c^dag_a c^dag_b ... c_j c_i`` for spin-orbital index lists."""
    key = tuple((a, 1) for a in virtual) + tuple((i, 0) for i in reversed(occupied))
    return FermionOperator({key: 1.0})
