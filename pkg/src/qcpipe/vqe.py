"""Variational quantum eigensolver on the statevector simulator.

Two ansatz families:

* ``uccsd``: trotterized unitary coupled cluster with singles and doubles.
  Each parameter owns an anti-Hermitian generator ``T - T^dag`` mapped to
  qubits; its exponential is applied as one Trotter step, a product of Pauli
  rotations in lexicographic order. Generators are ordered singles first,
  then doubles. An excitation and its spin-flipped image share a parameter.
* ``hardware-efficient``: ``layers`` repetitions of an RY layer on every qubit
  followed by a chain of CZ gates.

Both start from the encoded Hartree-Fock determinant, so ``theta = 0``
reproduces the HF energy for UCCSD.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .fermion import FermionOperator
from .optimizers import make_optimizer
from .pauli import PauliOperator, PauliString
from .qubit_map import EncodingMatrix, encode
from .secondq import excitation, hf_occupation
from .simulator import (
    CompiledOperator,
    apply_pauli_rotation,
    basis_state,
    compile_operator,
    expectation,
    pauli_expectations,
)


def _spin_flip(k: int) -> int:
    return k ^ 1


def uccsd_excitations(n_modes: int, n_electrons: int):
    """Spin-conserving singles and doubles as ``(occupied, virtual)`` tuples.

    Returns a list of groups; each group is the excitation and, when distinct,
    its spin-flipped partner.
    """
    occ = range(n_electrons)
    virt = range(n_electrons, n_modes)
    spin = lambda k: k % 2  # noqa: E731

    def groups_for(rank):
        seen = set()
        out = []
        for o in combinations(occ, rank):
            for v in combinations(virt, rank):
                if sorted(map(spin, o)) != sorted(map(spin, v)):
                    continue
                key = (o, v)
                flipped = (tuple(map(_spin_flip, o)), tuple(map(_spin_flip, v)))
                canon_flip = (tuple(sorted(flipped[0])), tuple(sorted(flipped[1])))
                if key in seen:
                    continue
                seen.add(key)
                seen.add(canon_flip)
                out.append((key, flipped) if canon_flip != key else (key,))
        return out

    return groups_for(1) + groups_for(2)


@dataclass
class Ansatz:
    kind: str
    n_qubits: int
    n_params: int
    reference: int  # encoded reference basis index
    generators: list = field(default_factory=list)  # per parameter: list of (PauliString, real a) for exp(i theta a P)
    layers: int = 0

    def prepare(self, theta) -> np.ndarray:
        return prepare_state(self, theta)


def uccsd_ansatz(n_modes: int, n_electrons: int, encoding="jw") -> Ansatz:
    enc = encoding if isinstance(encoding, EncodingMatrix) else EncodingMatrix.named(encoding, n_modes)
    gens = []
    for group in uccsd_excitations(n_modes, n_electrons):
        T = FermionOperator()
        for o, v in group:
            T = T + excitation(o, v)
        A = encode(T - T.adjoint(), n_modes, enc)
        if len(A) == 0:
            continue
        rots = []
        for ps, c in A.sorted_terms():
            if abs(c.real) > 1e-12:
                raise ValueError("UCC generator image is not anti-Hermitian")
            rots.append((ps, float(c.imag)))
        gens.append(rots)
    ref = enc.encode_int(hf_occupation(n_electrons))
    return Ansatz("uccsd", n_modes, len(gens), ref, gens)


def hardware_efficient_ansatz(n_qubits: int, n_electrons: int, layers: int = 2, encoding="jw") -> Ansatz:
    enc = encoding if isinstance(encoding, EncodingMatrix) else EncodingMatrix.named(encoding, n_qubits)
    ref = enc.encode_int(hf_occupation(n_electrons))
    return Ansatz("hardware-efficient", n_qubits, layers * n_qubits, ref, layers=layers)


def _cz_chain_phase(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    ph = np.ones(1 << n)
    for q in range(n - 1):
        both = ((idx >> q) & 1) & ((idx >> (q + 1)) & 1)
        ph = ph * (1 - 2 * both)
    return ph


def prepare_state(ansatz: Ansatz, theta, _offset=None) -> np.ndarray:
    """Ansatz state; ``_offset = (param, rotation, delta)`` shifts one rotation angle."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (ansatz.n_params,):
        raise ValueError(f"expected {ansatz.n_params} parameters, got shape {theta.shape}")
    n = ansatz.n_qubits
    psi = basis_state(n, ansatz.reference)
    if ansatz.kind == "uccsd":
        for g, (t, rots) in enumerate(zip(theta, ansatz.generators)):
            if t == 0.0 and (_offset is None or _offset[0] != g):
                continue
            for k, (ps, a) in enumerate(rots):
                # exp(i t a P) = exp(-i (-2 t a) P / 2)
                angle = -2.0 * t * a
                if _offset is not None and _offset[:2] == (g, k):
                    angle += _offset[2]
                psi = apply_pauli_rotation(psi, ps, angle)
        return psi
    cz = _cz_chain_phase(n)
    for layer in range(ansatz.layers):
        for q in range(n):
            angle = theta[layer * n + q]
            if _offset is not None and _offset[0] == layer * n + q:
                angle += _offset[2]
            psi = apply_pauli_rotation(psi, PauliString.single(n, q, "Y"), angle)
        psi = cz * psi
    return psi


def parameter_shift_gradient(ansatz: Ansatz, theta, H) -> np.ndarray:
    """Exact gradient from the two-point shift rule on every Pauli rotation.

    A rotation ``exp(-i phi P / 2)`` obeys
    ``dE/dphi = (E(phi + pi/2) - E(phi - pi/2)) / 2``; UCC parameters drive
    several rotations with angle ``-2 a theta`` and sum by the chain rule.
    """
    H = H if isinstance(H, CompiledOperator) else compile_operator(H)
    theta = np.asarray(theta, dtype=float)
    s = np.pi / 2

    def shifted(g, k, d):
        return expectation(H, prepare_state(ansatz, theta, _offset=(g, k, d)))

    grad = np.zeros(ansatz.n_params)
    for g in range(ansatz.n_params):
        if ansatz.kind == "uccsd":
            for k, (_, a) in enumerate(ansatz.generators[g]):
                grad[g] += -2.0 * a * (shifted(g, k, s) - shifted(g, k, -s)) / 2
        else:
            grad[g] = (shifted(g, 0, s) - shifted(g, 0, -s)) / 2
    return grad


def sampled_expectation(op: PauliOperator, psi, shots: int, rng) -> float:
    """Shot-noise estimate: each Pauli string measured ``shots`` times independently."""
    total = 0.0
    for (x, z), c, ev in pauli_expectations(op, psi):
        if x == 0 and z == 0:
            total += c.real
            continue
        p_plus = min(max((1.0 + ev) / 2.0, 0.0), 1.0)
        k = rng.binomial(shots, p_plus)
        total += c.real * (2.0 * k / shots - 1.0)
    return total


def energy(ansatz: Ansatz, theta, H: PauliOperator | CompiledOperator, shots: int | None = None, rng=None) -> float:
    psi = prepare_state(ansatz, theta)
    if shots is None:
        return expectation(H, psi)
    if not isinstance(H, PauliOperator):
        raise TypeError("shot sampling needs the PauliOperator, not a compiled form")
    return sampled_expectation(H, psi, shots, rng if rng is not None else np.random.default_rng())


@dataclass
class VqeOptions:
    optimizer: str = "nelder-mead"
    max_iter: int = 5000
    window: int | None = None  # default: max(25, 10 * n_params)
    tol: float = 1e-9
    seed: int = 0
    shots: int | None = None
    theta0: np.ndarray | None = None
    optimizer_options: dict = field(default_factory=dict)


@dataclass
class VqeResult:
    energy: float
    theta: np.ndarray
    trace: list  # (k, E_k, E_con after k)
    converged: bool
    n_evaluations: int
    optimizer: str

    def to_dict(self) -> dict:
        return {
            "energy": self.energy,
            "theta": self.theta.tolist(),
            "trace": [[k, e, b] for k, e, b in self.trace],
            "converged": self.converged,
            "n_evaluations": self.n_evaluations,
            "optimizer": self.optimizer,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def minimize(ansatz: Ansatz, H: PauliOperator, opts: VqeOptions | None = None) -> VqeResult:
    """Variational loop with best-so-far bookkeeping.

    The best energy is replaced whenever a new iterate is strictly lower. The
    loop stops at ``max_iter`` iterations, when the optimizer reports
    convergence, or when the best energy has improved by less than ``tol``
    over ``window`` consecutive iterations.
    """
    opts = opts or VqeOptions()
    window = opts.window if opts.window is not None else max(25, 10 * ansatz.n_params)
    rng = np.random.default_rng(opts.seed)
    compiled = compile_operator(H)
    n_eval = 0

    def f(theta):
        nonlocal n_eval
        n_eval += 1
        if opts.shots is None:
            return energy(ansatz, theta, compiled)
        return energy(ansatz, theta, H, shots=opts.shots, rng=rng)

    opt = make_optimizer(opts.optimizer, seed=opts.seed, **opts.optimizer_options)
    theta0 = np.zeros(ansatz.n_params) if opts.theta0 is None else np.asarray(opts.theta0, float)
    theta_k, e_k = opt.start(f, theta0)
    e_con, theta_con = np.inf, theta_k
    trace = []
    history = []
    converged = False
    k = 1
    while k < opts.max_iter:
        if e_k < e_con:
            e_con, theta_con = e_k, theta_k
        trace.append((k, e_k, e_con))
        history.append(e_con)
        stalled = len(history) > window and history[-window - 1] - e_con < opts.tol
        if opt.converged or stalled:
            converged = True
            break
        k += 1
        theta_k, e_k = opt.step()
    return VqeResult(float(e_con), np.asarray(theta_con), trace, converged, n_eval, opts.optimizer)
