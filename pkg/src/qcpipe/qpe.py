"""Textbook quantum phase estimation on the statevector simulator.

Spectrum folding: for an energy window ``[E_min, E_max]`` of width ``W`` the
Hamiltonian is shifted by ``E_lo = E_min - g W`` and evolved for
``t = 2 pi f / W`` with guard fraction ``g = 0.05`` and fill ``f = 0.9``. An
energy ``E`` then carries phase ``phi = f (E - E_lo) / W``, so the window maps
onto ``[g f, (1 + g) f] = [0.045, 0.945]`` and larger energies give larger
phases. The default window is the dense spectrum padded by ``g W`` per side.

Sign convention: ``U = exp(-i (H - E_lo) t)`` writes ``exp(-2 pi i phi x)``
on ancilla value ``x``. The ancilla transform is the inverse of the Fourier
transform that prepares such a register, with matrix elements
``exp(+2 pi i x y / 2^n) / sqrt(2^n)``, so outcome ``y`` concentrates at
``phi 2^n``. Ancilla bit ``m`` (least significant first) controls
``U^(2^m)``; outcome strings are written most significant bit first, so the
string ``b_1 b_2 ... b_n`` means ``phi = 0.b_1 b_2 ... b_n`` in binary.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .pauli import PauliOperator
from .simulator import MAX_QUBITS, SimulatorCapError, evolution_unitary, spectrum

GUARD = 0.05
FILL = 0.9


@dataclass(frozen=True)
class QpeConfig:
    n_ancilla: int
    e_min: float
    e_max: float
    n_samples: int = 10_000
    method: object = "exact"  # "exact" or ("trotter", n)

    def __post_init__(self):
        if self.n_ancilla < 1:
            raise ValueError("need at least one ancilla qubit")
        if not self.e_max > self.e_min:
            raise ValueError("energy window must have e_max > e_min")
        if self.n_samples < 1:
            raise ValueError("n_samples must be positive")

    @property
    def width(self) -> float:
        return self.e_max - self.e_min

    @property
    def shift(self) -> float:
        return self.e_min - GUARD * self.width

    @property
    def span(self) -> float:
        """Energy range covered by one full phase turn."""
        return self.width / FILL

    @property
    def time(self) -> float:
        return 2.0 * np.pi / self.span

    @property
    def bin_width(self) -> float:
        return self.span / 2**self.n_ancilla

    def fold(self, energy) -> float:
        return (np.asarray(energy) - self.shift) / self.span

    def unfold(self, phase) -> float:
        return self.shift + np.asarray(phase) * self.span

    def echo(self) -> dict:
        d = asdict(self)
        d["method"] = list(self.method) if isinstance(self.method, tuple) else self.method
        d.update(shift=self.shift, time=self.time, bin_width=self.bin_width)
        return d


def default_config(H: PauliOperator, n_ancilla: int, **kw) -> QpeConfig:
    """Window spanning the dense extremal eigenvalues of ``H``, padded by ``GUARD`` on each side."""
    w = spectrum(H)
    pad = GUARD * float(w[-1] - w[0])
    return QpeConfig(n_ancilla, float(w[0]) - pad, float(w[-1]) + pad, **kw)


def bits_to_int(bits: str) -> int:
    return int(bits, 2)


def int_to_bits(y: int, n: int) -> str:
    return format(y, f"0{n}b")


def decode_phase(bits: str, cfg: QpeConfig) -> float:
    if len(bits) != cfg.n_ancilla:
        raise ValueError(f"outcome has {len(bits)} bits, expected {cfg.n_ancilla}")
    return float(cfg.unfold(bits_to_int(bits) / 2**cfg.n_ancilla))


def inverse_qft_matrix(n: int) -> np.ndarray:
    N = 1 << n
    x = np.arange(N)
    return np.exp(2j * np.pi * np.outer(x, x) / N) / np.sqrt(N)


@dataclass
class QpeResult:
    histogram: dict  # bitstring -> count
    probabilities: np.ndarray  # exact ancilla marginal indexed by integer outcome
    config: QpeConfig
    seed: int | None
    decoded: dict = field(default_factory=dict)  # bitstring -> energy

    @property
    def top_bin(self) -> str:
        return max(self.histogram, key=lambda b: (self.histogram[b], -bits_to_int(b)))

    @property
    def top_probability(self) -> float:
        return self.histogram[self.top_bin] / self.config.n_samples

    @property
    def modal_energy(self) -> float:
        return self.decoded[self.top_bin]

    def to_dict(self) -> dict:
        return {
            "histogram": dict(sorted(self.histogram.items())),
            "decoded_energies": {b: self.decoded[b] for b in sorted(self.decoded)},
            "top_bin": self.top_bin,
            "top_probability": self.top_probability,
            "modal_energy": self.modal_energy,
            "bin_width": self.config.bin_width,
            "config": self.config.echo(),
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def ancilla_distribution(H: PauliOperator, initial, cfg: QpeConfig) -> np.ndarray:
    """Exact outcome distribution of the ancilla register after the inverse transform."""
    n_sys = H.n_qubits
    if n_sys + cfg.n_ancilla > MAX_QUBITS:
        raise SimulatorCapError(f"{n_sys} system + {cfg.n_ancilla} ancilla qubits exceeds cap {MAX_QUBITS}")
    psi0 = np.asarray(initial, dtype=complex)
    if psi0.shape != (1 << n_sys,):
        raise ValueError("initial state does not match Hamiltonian size")
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-10:
        raise ValueError("initial state must be normalized")
    w = spectrum(H)
    if w[0] < cfg.e_min - 1e-12 or w[-1] > cfg.e_max + 1e-12:
        raise ValueError(
            f"spectrum [{w[0]:.6f}, {w[-1]:.6f}] lies outside window [{cfg.e_min:.6f}, {cfg.e_max:.6f}]"
        )
    shifted = H - cfg.shift
    U = evolution_unitary(shifted, cfg.time, cfg.method)
    N = 1 << cfg.n_ancilla
    reg = np.tile(psi0 / np.sqrt(N), (N, 1))  # row x: ancilla value x
    x = np.arange(N)
    power = U
    for m in range(cfg.n_ancilla):
        on = (x >> m) & 1 == 1
        reg[on] = reg[on] @ power.T
        power = power @ power
    reg = inverse_qft_matrix(cfg.n_ancilla) @ reg
    p = np.sum(np.abs(reg) ** 2, axis=1)
    return p / p.sum()


def run_qpe(H: PauliOperator, initial, cfg: QpeConfig, seed=None) -> QpeResult:
    p = ancilla_distribution(H, initial, cfg)
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(cfg.n_samples, p)
    n = cfg.n_ancilla
    hist = {int_to_bits(y, n): int(c) for y, c in enumerate(counts) if c}
    decoded = {b: decode_phase(b, cfg) for b in hist}
    return QpeResult(hist, p, cfg, seed, decoded)
