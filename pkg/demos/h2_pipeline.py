"""Walk H2 through every stage: integrals, RHF, FCI, qubit images, VQE and QPE."""
import numpy as np

from qcpipe import build_problem, diatomic, full_ci
from qcpipe.fci import determinant_to_state
from qcpipe.qpe import default_config, run_qpe
from qcpipe.qubit_map import ENCODINGS
from qcpipe.simulator import basis_state, spectrum
from qcpipe.vqe import VqeOptions, minimize, uccsd_ansatz

mol = diatomic(1, 1, 1.4)
pr = build_problem(mol, "sto-3g")
print(f"RHF energy          {pr.scf.E_total:.10f} Eh  ({pr.scf.iterations} iterations)")

fci = full_ci(pr.hamiltonian, pr.n_modes, pr.n_electrons)
print(f"FCI energy          {fci.ground_energy:.10f} Eh  ({len(fci.space)} determinants)")
print(f"correlation energy  {fci.ground_energy - pr.scf.E_total:.6f} Eh")

for enc in ENCODINGS:
    H = pr.qubit_hamiltonian(enc)
    print(f"{enc:>6}: {len(H):2d} Pauli terms, lowest eigenvalue {spectrum(H)[0]:.10f}")

H = pr.qubit_hamiltonian("jw")
res = minimize(uccsd_ansatz(4, 2, "jw"), H, VqeOptions(optimizer="nelder-mead"))
print(f"VQE (UCCSD, NM)     {res.energy:.10f} Eh  after {len(res.trace)} iterations")

phi0 = basis_state(4, 0b0011)
overlap2 = abs(np.vdot(phi0, determinant_to_state(fci.space, fci.ground_vector))) ** 2
cfg = default_config(H, 10)
qpe = run_qpe(H, phi0, cfg, seed=0)
print(f"QPE modal energy    {qpe.modal_energy:.6f} Eh  (bin {cfg.bin_width * 1e3:.2f} mEh, "
      f"frequency {qpe.top_probability:.3f}, |<HF|FCI>|^2 = {overlap2:.3f})")
