"""Glue from a molecule to its fermionic and qubit Hamiltonians."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .basis import BasisSet, build_ao_basis, resolve_basis
from .fermion import FermionOperator
from .integrals import IntegralTables, compute_integrals
from .molecule import Molecule
from .qubit_map import hamiltonian_to_qubits
from .scf import ScfOptions, ScfState, run_scf
from .secondq import MoIntegrals, ao_to_mo, build_hamiltonian


@dataclass
class ElectronicProblem:
    mol: Molecule
    basis: BasisSet
    tables: IntegralTables
    scf: ScfState
    mo: MoIntegrals

    @cached_property
    def hamiltonian(self) -> FermionOperator:
        return build_hamiltonian(self.mo)

    @property
    def n_modes(self) -> int:
        return self.mo.n_modes

    @property
    def n_electrons(self) -> int:
        return self.mol.n_electrons

    def qubit_hamiltonian(self, encoding: str = "jw"):
        return hamiltonian_to_qubits(self.hamiltonian, encoding, self.n_modes).operator


def build_problem(mol: Molecule, basis="sto-3g", scf_options: ScfOptions | None = None) -> ElectronicProblem:
    bs = resolve_basis(basis) if isinstance(basis, str) else basis
    tables = compute_integrals(build_ao_basis(mol, bs), mol)
    state = run_scf(mol, tables, scf_options)
    mo = ao_to_mo(tables, state.C, state.E_nuclear)
    return ElectronicProblem(mol, bs, tables, state, mo)
