"""Small-molecule electronic structure with simulated quantum solvers.

The pipeline runs molecule -> s-type Gaussian integrals -> RHF -> second-quantized
Hamiltonian -> qubit encoding, then solves with exact CI, VQE or QPE on a dense
statevector simulator.
"""
__version__ = "0.1.0"

from .molecule import Molecule, parse_molecule, hydrogen_chain, diatomic
from .basis import builtin_basis, load_basis, build_ao_basis
from .integrals import compute_integrals, molecular_integrals, boys_f0
from .scf import ScfOptions, run_scf
from .fermion import FermionOperator, normal_order
from .secondq import ao_to_mo, build_hamiltonian, excitation_operator
from .pauli import PauliString, PauliOperator
from .qubit_map import EncodingMatrix, encode, jordan_wigner, parity_encode, bravyi_kitaev_encode, hamiltonian_to_qubits
from .simulator import expectation, ground_state, evolve
from .fci import enumerate_space, ci_solve, full_ci
from .pipeline import build_problem
from .vqe import VqeOptions, uccsd_ansatz, hardware_efficient_ansatz, minimize
from .qpe import QpeConfig, default_config, run_qpe

__all__ = [name for name in dir() if not name.startswith("_")]
