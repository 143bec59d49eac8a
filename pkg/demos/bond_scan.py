"""H2 dissociation curves for RHF and FCI in two basis sets, printed as a table."""
import numpy as np

from qcpipe.cli import scan

grid = np.linspace(0.5, 4.0, 36)
rows = scan(grid, ["rhf", "fci"], ["sto-3g", "6-31g"])
e = {(b, m, round(r, 6)): en for r, b, m, en, _, _ in rows}

print(f"{'R/bohr':>7} {'RHF/STO':>12} {'FCI/STO':>12} {'RHF/631':>12} {'FCI/631':>12} {'gap/STO':>9}")
for r in grid:
    k = round(r, 6)
    vals = [e["sto-3g", "rhf", k], e["sto-3g", "fci", k], e["6-31g", "rhf", k], e["6-31g", "fci", k]]
    print(f"{r:7.2f} " + " ".join(f"{v:12.6f}" for v in vals) + f" {vals[0] - vals[1]:9.5f}")
