"""Closed-shell restricted Hartree-Fock via the Roothaan matrix equation.

The loop is plain fixed-point iteration: core-Hamiltonian guess, Fock build,
generalized eigensolve ``F C = S C diag(eps)``, new density, repeat until
both the energy change and the largest density change fall below tolerance.
Optional linear damping mixes the previous density into the new one.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .integrals import IntegralTables
from .molecule import Molecule, nuclear_repulsion

log = logging.getLogger(__name__)

LINDEP_CUTOFF = 1e-8


class LinearDependenceError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class ScfOptions:
    tol_energy: float = 1e-10
    tol_density: float = 1e-8
    max_iter: int = 200
    damping: float = 0.0
    verbose: bool = False


@dataclass
class ScfState:
    C: np.ndarray
    eps: np.ndarray
    P: np.ndarray
    F: np.ndarray
    E_electronic: float
    E_nuclear: float
    iterations: int
    converged: bool
    n_electrons: int
    energies: list = field(default_factory=list)

    @property
    def E_total(self) -> float:
        return self.E_electronic + self.E_nuclear

    @property
    def n_occ(self) -> int:
        return self.n_electrons // 2

    def to_dict(self) -> dict:
        return {
            "E_total": self.E_total,
            "E_electronic": self.E_electronic,
            "E_nuclear": self.E_nuclear,
            "orbital_energies": self.eps.tolist(),
            "iterations": self.iterations,
            "converged": self.converged,
            "mo_coefficients": self.C.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def build_fock(P: np.ndarray, tables: IntegralTables) -> np.ndarray:
    """``F = Hcore + G(P)`` with ``G_pq = sum_rs P_rs [(pq|sr) - (pr|sq)/2]``."""
    P = np.asarray(P)
    n = tables.nbasis
    if P.shape != (n, n):
        raise ValueError(f"density shape {P.shape} does not match basis size {n}")
    J = np.einsum("pqsr,rs->pq", tables.eri, P)
    K = np.einsum("prsq,rs->pq", tables.eri, P)
    return tables.Hcore + J - 0.5 * K


def solve_roothaan(F: np.ndarray, S: np.ndarray, cutoff: float = LINDEP_CUTOFF):
    """Generalized symmetric eigenproblem by symmetric orthogonalization.

    Returns ``(C, eps)`` with columns of ``C`` ordered by ascending ``eps`` and
    ``C.T @ S @ C = I``.
    """
    s, U = np.linalg.eigh(S)
    if s[0] < cutoff:
        raise LinearDependenceError(
            f"overlap eigenvalue {s[0]:.3e} below linear-dependence cutoff {cutoff:.1e}"
        )
    X = U @ np.diag(s**-0.5) @ U.T
    eps, Cp = np.linalg.eigh(X.T @ F @ X)
    return X @ Cp, eps


def density(C: np.ndarray, n_occ: int) -> np.ndarray:
    occ = C[:, :n_occ]
    return 2.0 * occ @ occ.T


def electronic_energy(P, Hcore, F) -> float:
    return 0.5 * float(np.sum(P * (Hcore + F)))


def run_scf(mol: Molecule, tables: IntegralTables, opts: ScfOptions | None = None) -> ScfState:
    opts = opts or ScfOptions()
    ne = mol.n_electrons
    if ne % 2:
        raise ValueError("RHF requires an even number of electrons")
    n_occ = ne // 2
    if n_occ > tables.nbasis:
        raise ValueError(f"{n_occ} doubly occupied orbitals do not fit in {tables.nbasis} basis functions")
    e_nuc = nuclear_repulsion(mol)

    C, eps = solve_roothaan(tables.Hcore, tables.S)
    P = density(C, n_occ)
    E_old = None
    energies = []
    converged = False
    it = 0
    for it in range(1, opts.max_iter + 1):
        F = build_fock(P, tables)
        E = electronic_energy(P, tables.Hcore, F)
        energies.append(E + e_nuc)
        C, eps = solve_roothaan(F, tables.S)
        P_new = density(C, n_occ)
        if opts.damping:
            P_new = (1.0 - opts.damping) * P_new + opts.damping * P
        dE = np.inf if E_old is None else E - E_old
        dP = float(np.max(np.abs(P_new - P)))
        if opts.verbose:
            log.info("iter %3d  E = %.12f  dE = %.3e  |dP| = %.3e", it, E + e_nuc, dE, dP)
        P = P_new
        E_old = E
        if abs(dE) < opts.tol_energy and dP < opts.tol_density:
            converged = True
            break
    F = build_fock(P, tables)
    E = electronic_energy(P, tables.Hcore, F)
    C, eps = solve_roothaan(F, tables.S)
    if not converged:
        log.warning("SCF not converged after %d iterations", it)
    return ScfState(C, eps, P, F, E, e_nuc, it, converged, ne, energies)
