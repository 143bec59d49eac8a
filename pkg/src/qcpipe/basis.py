"""Basis-set ingestion and contracted s-type Gaussian atomic orbitals.

Basis files use the Gaussian94 interchange layout distributed by the Basis
Set Exchange::

    ! comment lines start with '!'
    ****
    H     0
    S   3   1.00
          3.425250914D+00   1.543289673D-01
          ...
    ****

Each element block opens with ``<symbol> 0`` and closes with ``****``. A shell
header is ``<L> <n_prim> [scale]`` followed by ``n_prim`` lines of
``<exponent> <coefficient>``. Fortran ``D`` exponents are accepted. Only
``S`` shells are supported; any other angular momentum is rejected.
Coefficients are taken to multiply *normalized* primitives, and each
contraction is renormalized numerically regardless of the file's convention.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

import numpy as np

from .molecule import SYMBOL_TO_Z, Molecule

BUILTIN_BASES = {"sto-3g": "sto-3g.gbs", "6-31g": "6-31g.gbs"}


class BasisError(ValueError):
    pass


@dataclass(frozen=True)
class PrimitiveGaussian:
    exponent: float
    coefficient: float

    def __post_init__(self):
        if not self.exponent > 0:
            raise BasisError(f"primitive exponent must be positive, got {self.exponent}")


@dataclass(frozen=True)
class ContractedGaussian:
    """Normalized s-type contraction ``norm * sum_k c_k N_k exp(-a_k |r - center|^2)``.

    ``N_k = (2 a_k / pi)^(3/4)`` normalizes each primitive.
    """

    center: np.ndarray
    primitives: tuple[PrimitiveGaussian, ...]
    normalization: float

    @property
    def exponents(self) -> np.ndarray:
        return np.array([p.exponent for p in self.primitives])

    @property
    def weights(self) -> np.ndarray:
        """Coefficients multiplying the bare ``exp(-a r^2)`` factors."""
        a = self.exponents
        c = np.array([p.coefficient for p in self.primitives])
        return self.normalization * c * (2.0 * a / np.pi) ** 0.75

    def __call__(self, points: np.ndarray) -> np.ndarray:
        r2 = np.sum((np.asarray(points) - self.center) ** 2, axis=-1)
        return np.exp(-np.multiply.outer(r2, self.exponents)) @ self.weights


def contract(center, primitives) -> ContractedGaussian:
    primitives = tuple(primitives)
    if not primitives:
        raise BasisError("contraction needs at least one primitive")
    a = np.array([p.exponent for p in primitives])
    d = np.array([p.coefficient for p in primitives]) * (2.0 * a / np.pi) ** 0.75
    self_overlap = d @ ((np.pi / np.add.outer(a, a)) ** 1.5) @ d
    if not self_overlap > 0:
        raise BasisError("contraction has vanishing norm")
    center = np.array(center, dtype=float)
    center.setflags(write=False)
    return ContractedGaussian(center, primitives, float(self_overlap ** -0.5))


@dataclass(frozen=True)
class BasisSet:
    name: str
    shells: dict  # nuclear charge -> list of shells, each a tuple of PrimitiveGaussian

    def shells_for(self, z: int):
        try:
            return self.shells[z]
        except KeyError:
            raise BasisError(f"basis {self.name!r} has no entry for Z={z}") from None


def _float(tok: str) -> float:
    return float(tok.replace("D", "E").replace("d", "e"))


def load_basis(text: str, name: str = "custom") -> BasisSet:
    lines = []
    for raw in text.splitlines():
        line = raw.split("!", 1)[0].strip()
        if line:
            lines.append(line)
    shells: dict[int, list] = {}
    i = 0
    element = None
    while i < len(lines):
        parts = lines[i].split()
        if parts[0] == "****":
            element = None
            i += 1
            continue
        if element is None:
            sym = parts[0].capitalize()
            if sym not in SYMBOL_TO_Z:
                raise BasisError(f"unknown element {parts[0]!r} in basis file")
            element = SYMBOL_TO_Z[sym]
            shells.setdefault(element, [])
            i += 1
            continue
        label = parts[0].upper()
        try:
            nprim = int(parts[1])
        except (IndexError, ValueError):
            raise BasisError(f"malformed shell header {lines[i]!r}") from None
        if label != "S":
            raise BasisError(
                f"s-only build: shell {label!r} ({nprim} primitives) on element Z={element} is not supported"
            )
        scale = _float(parts[2]) if len(parts) > 2 else 1.0
        prims = []
        for line in lines[i + 1:i + 1 + nprim]:
            toks = line.split()
            if len(toks) != 2:
                raise BasisError(f"malformed primitive line {line!r}")
            prims.append(PrimitiveGaussian(_float(toks[0]) * scale**2, _float(toks[1])))
        if len(prims) != nprim:
            raise BasisError(f"shell on Z={element} truncated: expected {nprim} primitives")
        shells[element].append(tuple(prims))
        i += 1 + nprim
    return BasisSet(name, shells)


def builtin_basis(name: str) -> BasisSet:
    key = name.lower()
    if key not in BUILTIN_BASES:
        raise BasisError(f"no built-in basis named {name!r}; available: {sorted(BUILTIN_BASES)}")
    text = resources.files("qcpipe.data").joinpath(BUILTIN_BASES[key]).read_text()
    return load_basis(text, name=name.upper())


def resolve_basis(name_or_path: str) -> BasisSet:
    """Built-in name, or a path to a Gaussian94-format file."""
    if name_or_path.lower() in BUILTIN_BASES:
        return builtin_basis(name_or_path)
    try:
        fh = open(name_or_path)
    except OSError as err:
        raise BasisError(
            f"basis {name_or_path!r} is neither a built-in ({', '.join(BUILTIN_BASES)}) nor a readable file"
        ) from err
    with fh:
        return load_basis(fh.read(), name=name_or_path)


def build_ao_basis(mol: Molecule, bs: BasisSet) -> list[ContractedGaussian]:
    aos = []
    for z, center in zip(mol.charges, mol.coords):
        for prims in bs.shells_for(z):
            aos.append(contract(center, prims))
    return aos
