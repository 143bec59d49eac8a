"""Molecule model and the line-oriented molecule file format.

File layout::

    # comment
    units angstrom        # or bohr; required
    charge 0              # optional, default 0
    H 0.0 0.0 0.0
    H 0.0 0.0 0.7414

Coordinates are converted to bohr on parse.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .constants import angstrom_to_bohr

ELEMENTS = ["H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne"]
SYMBOL_TO_Z = {s: i + 1 for i, s in enumerate(ELEMENTS)}


class MoleculeError(ValueError):
    pass


@dataclass(frozen=True)
class Molecule:
    """Clamped nuclei with positions in bohr."""

    charges: tuple[int, ...]
    coords: np.ndarray = field(repr=False)
    charge: int = 0

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float).reshape(-1, 3)
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "charges", tuple(int(z) for z in self.charges))
        if len(self.charges) != len(coords):
            raise MoleculeError("one nuclear charge per atom required")
        if any(z < 1 for z in self.charges):
            raise MoleculeError("nuclear charges must be positive")
        for i, j in combinations(range(len(coords)), 2):
            if np.allclose(coords[i], coords[j], rtol=0.0, atol=1e-10):
                raise MoleculeError(f"coincident nuclei: atoms {i} and {j}")
        if self.n_electrons < 1:
            raise MoleculeError("molecule has no electrons")

    @property
    def n_atoms(self) -> int:
        return len(self.charges)

    @property
    def n_electrons(self) -> int:
        return sum(self.charges) - self.charge

    @property
    def symbols(self) -> list[str]:
        return [ELEMENTS[z - 1] for z in self.charges]

    def translated(self, shift) -> "Molecule":
        return Molecule(self.charges, self.coords + np.asarray(shift, float), self.charge)

    def to_dict(self) -> dict:
        return {
            "symbols": self.symbols,
            "coords_bohr": self.coords.tolist(),
            "charge": self.charge,
            "n_electrons": self.n_electrons,
        }


def parse_molecule(text: str, rhf: bool = True) -> Molecule:
    """Parse molecule-file content.

    With ``rhf=True`` an odd electron count is rejected, since only closed-shell
    restricted Hartree-Fock is supported downstream.
    """
    units = None
    charge = 0
    zs, xyz = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0].lower()
        if key == "units":
            if len(parts) != 2 or parts[1].lower() not in ("angstrom", "bohr"):
                raise MoleculeError(f"line {lineno}: expected 'units <angstrom|bohr>'")
            units = parts[1].lower()
        elif key == "charge":
            try:
                (charge,) = (int(p) for p in parts[1:])
            except ValueError:
                raise MoleculeError(f"line {lineno}: expected 'charge <int>'") from None
        else:
            if len(parts) != 4:
                raise MoleculeError(f"line {lineno}: malformed atom line, expected '<symbol> <x> <y> <z>'")
            sym = parts[0].capitalize()
            if sym not in SYMBOL_TO_Z:
                raise MoleculeError(f"line {lineno}: unknown element symbol {parts[0]!r}")
            try:
                pos = [float(p) for p in parts[1:]]
            except ValueError:
                raise MoleculeError(f"line {lineno}: malformed coordinate") from None
            zs.append(SYMBOL_TO_Z[sym])
            xyz.append(pos)
    if units is None:
        raise MoleculeError("missing 'units <angstrom|bohr>' declaration")
    if not zs:
        raise MoleculeError("no atoms given")
    coords = np.array(xyz, dtype=float)
    if units == "angstrom":
        coords = angstrom_to_bohr(coords)
    mol = Molecule(tuple(zs), coords, charge)
    if rhf and mol.n_electrons % 2:
        raise MoleculeError(f"odd electron count ({mol.n_electrons}) not supported by RHF")
    return mol


def format_molecule(mol: Molecule) -> str:
    lines = ["units bohr", f"charge {mol.charge}"]
    for sym, (x, y, z) in zip(mol.symbols, mol.coords):
        lines.append(f"{sym} {float(x)!r} {float(y)!r} {float(z)!r}")
    return "\n".join(lines) + "\n"


def nuclear_repulsion(mol: Molecule) -> float:
    """Sum of Z_I Z_J / |X_I - X_J| over distinct nuclear pairs."""
    e = 0.0
    for i, j in combinations(range(mol.n_atoms), 2):
        e += mol.charges[i] * mol.charges[j] / np.linalg.norm(mol.coords[i] - mol.coords[j])
    return float(e)


def hydrogen_chain(n: int, spacing: float, charge: int = 0) -> Molecule:
    """Linear H_n along z, ``spacing`` in bohr."""
    coords = np.zeros((n, 3))
    coords[:, 2] = spacing * np.arange(n)
    return Molecule((1,) * n, coords, charge)


def diatomic(z1: int, z2: int, r: float, charge: int = 0) -> Molecule:
    return Molecule((z1, z2), [[0.0, 0.0, 0.0], [0.0, 0.0, r]], charge)


def shipped_molecules() -> dict[str, Molecule]:
    """Example geometries bundled with the package, keyed by file stem."""
    from importlib import resources

    root = resources.files("qcpipe.data.molecules")
    return {
        p.name[: -len(".mol")]: parse_molecule(p.read_text())
        for p in sorted(root.iterdir(), key=lambda p: p.name)
        if p.name.endswith(".mol")
    }
