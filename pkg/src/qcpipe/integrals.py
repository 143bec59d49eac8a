"""Closed-form integrals over s-type contracted Gaussians.

All formulas follow from the Gaussian product theorem: the product of two
s Gaussians with exponents ``a`` and ``b`` centred on ``A`` and ``B`` is a
single s Gaussian of exponent ``p = a + b`` centred on ``P = (aA + bB)/p``,
scaled by ``exp(-ab/p |A - B|^2)``. The Coulomb kernels reduce to the
zeroth-order Boys function.

The electron-repulsion tensor is stored in chemist order, ``eri[p, q, r, s]
= (pq|rs) = int phi_p(1) phi_q(1) r12^-1 phi_r(2) phi_s(2)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np
from scipy.special import erf

from .basis import ContractedGaussian
from .molecule import Molecule

BOYS_SWITCH = 1e-8
_N_TAYLOR = 8
_TAYLOR = np.array(
    [(-1) ** k / (np.prod(np.arange(1, k + 1, dtype=float)) * (2 * k + 1)) for k in range(_N_TAYLOR)]
)


def boys_f0(t):
    """Zeroth-order Boys function ``F0(t) = int_0^1 exp(-t u^2) du``.

    Uses ``sqrt(pi/t) erf(sqrt t) / 2`` above ``BOYS_SWITCH`` and a Taylor
    series below it. Accepts scalars or arrays.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("boys_f0 requires t >= 0")
    small = t < BOYS_SWITCH
    safe = np.where(small, 1.0, t)
    root = np.sqrt(safe)
    big = 0.5 * np.sqrt(np.pi) * erf(root) / root
    series = np.polynomial.polynomial.polyval(t, _TAYLOR)
    out = np.where(small, series, big)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class IntegralTables:
    S: np.ndarray
    T: np.ndarray
    V: np.ndarray
    eri: np.ndarray

    @property
    def Hcore(self) -> np.ndarray:
        return self.T + self.V

    @property
    def nbasis(self) -> int:
        return self.S.shape[0]

    def to_dict(self) -> dict:
        return {
            "S": self.S.tolist(),
            "T": self.T.tolist(),
            "V": self.V.tolist(),
            "Hcore": self.Hcore.tolist(),
            "eri": self.eri.tolist(),
        }

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=1)


class _PairData:
    """Primitive-pair products for one AO pair, flattened over (i, j)."""

    def __init__(self, f: ContractedGaussian, g: ContractedGaussian):
        a, b = f.exponents, g.exponents
        A, B = f.center, g.center
        self.p = np.add.outer(a, b).ravel()
        self.mu = (np.multiply.outer(a, b).ravel()) / self.p
        ab2 = float(np.sum((A - B) ** 2))
        self.ab2 = ab2
        self.P = (np.multiply.outer(a, A)[:, None, :] + np.multiply.outer(b, B)[None, :, :]).reshape(
            -1, 3
        ) / self.p[:, None]
        self.w = np.multiply.outer(f.weights, g.weights).ravel() * np.exp(-self.mu * ab2)


def _one_electron(pd: _PairData, charges, coords):
    s_prim = (np.pi / pd.p) ** 1.5
    s = pd.w @ s_prim
    t = pd.w @ (pd.mu * (3.0 - 2.0 * pd.mu * pd.ab2) * s_prim)
    v = 0.0
    for z, c in zip(charges, coords):
        pc2 = np.sum((pd.P - c) ** 2, axis=1)
        v -= z * (pd.w @ (2.0 * np.pi / pd.p * boys_f0(pd.p * pc2)))
    return s, t, v


def _two_electron(x: _PairData, y: _PairData) -> float:
    p = x.p[:, None]
    q = y.p[None, :]
    pq2 = np.sum((x.P[:, None, :] - y.P[None, :, :]) ** 2, axis=2)
    rho = p * q / (p + q)
    kern = 2.0 * np.pi**2.5 / (p * q * np.sqrt(p + q)) * boys_f0(rho * pq2)
    return float(x.w @ kern @ y.w)


def compute_integrals(aos: list[ContractedGaussian], mol: Molecule) -> IntegralTables:
    n = len(aos)
    if n == 0:
        raise ValueError("empty AO list")
    S = np.zeros((n, n))
    T = np.zeros((n, n))
    V = np.zeros((n, n))
    pairs = list(combinations_with_replacement(range(n), 2))
    data = {}
    for i, j in pairs:
        pd = _PairData(aos[i], aos[j])
        data[i, j] = pd
        S[i, j], T[i, j], V[i, j] = _one_electron(pd, mol.charges, mol.coords)
        S[j, i], T[j, i], V[j, i] = S[i, j], T[i, j], V[i, j]
    eri = np.zeros((n, n, n, n))
    for ia, (i, j) in enumerate(pairs):
        for k, l in pairs[ia:]:
            val = _two_electron(data[i, j], data[k, l])
            for a, b, c, d in (
                (i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i),
            ):
                eri[a, b, c, d] = val
    for arr in (S, T, V, eri):
        arr.setflags(write=False)
    return IntegralTables(S, T, V, eri)


def molecular_integrals(mol: Molecule, basis) -> IntegralTables:
    """Convenience: build the AO basis for ``mol`` and compute all tables."""
    from .basis import build_ao_basis, resolve_basis

    if isinstance(basis, str):
        basis = resolve_basis(basis)
    return compute_integrals(build_ao_basis(mol, basis), mol)
