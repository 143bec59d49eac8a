import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from qcpipe.fci import full_ci
from qcpipe.integrals import molecular_integrals
from qcpipe.molecule import Molecule, diatomic, hydrogen_chain, parse_molecule
from qcpipe.pipeline import build_problem
from qcpipe.scf import (
    LinearDependenceError,
    ScfOptions,
    build_fock,
    density,
    run_scf,
    solve_roothaan,
)

# geometries exercised by the stationarity and variational checks
SHIPPED = [
    (diatomic(1, 1, 1.4), "sto-3g"),
    (diatomic(1, 1, 1.4), "6-31g"),
    (diatomic(1, 1, 3.5), "sto-3g"),
    (diatomic(2, 1, 1.4632, charge=1), "sto-3g"),
    (diatomic(2, 1, 1.4632, charge=1), "6-31g"),
    (Molecule((1, 1, 1), np.array([[0, 0, 0], [1.65, 0, 0], [0.825, 1.429, 0]]), charge=1), "sto-3g"),
    (hydrogen_chain(4, 1.7), "sto-3g"),
    (parse_molecule("units bohr\nHe 0 0 0\n"), "6-31g"),
]


def test_zero_density_gives_core(h2):
    F = build_fock(np.zeros((2, 2)), h2.tables)
    np.testing.assert_array_equal(F, h2.tables.Hcore)


def test_fock_symmetric(h2_631g, rng):
    A = rng.normal(size=(4, 4))
    F = build_fock(A + A.T, h2_631g.tables)
    np.testing.assert_allclose(F, F.T, atol=1e-12, rtol=0)


def test_fock_shape_mismatch(h2):
    with pytest.raises(ValueError):
        build_fock(np.zeros((3, 3)), h2.tables)


def test_converged_fock_reproduces_eps(h2):
    s = h2.scf
    F = build_fock(s.P, h2.tables)
    _, eps = solve_roothaan(F, h2.tables.S)
    np.testing.assert_allclose(eps, s.eps, atol=1e-8)


def test_roothaan_identity_overlap(rng):
    A = rng.normal(size=(5, 5))
    F = A + A.T
    C, eps = solve_roothaan(F, np.eye(5))
    np.testing.assert_allclose(eps, np.linalg.eigvalsh(F), atol=1e-12)


def test_roothaan_f_equals_s(rng):
    A = rng.normal(size=(4, 4))
    S = A @ A.T + 4 * np.eye(4)
    _, eps = solve_roothaan(S, S)
    np.testing.assert_allclose(eps, 1.0, atol=1e-12)


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1), st.integers(2, 7))
def test_roothaan_residual(seed, n):
    r = np.random.default_rng(seed)
    A = r.normal(size=(n, n))
    B = r.normal(size=(n, n))
    S = B @ B.T + n * np.eye(n)
    F = A + A.T
    C, eps = solve_roothaan(F, S)
    assert np.all(np.diff(eps) >= 0)
    assert np.linalg.norm(F @ C - S @ C @ np.diag(eps)) < 1e-10
    np.testing.assert_allclose(C.T @ S @ C, np.eye(n), atol=1e-10)


def test_linear_dependence():
    S = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-12]])
    with pytest.raises(LinearDependenceError):
        solve_roothaan(np.eye(2), S)


def test_h2_against_symmetric_reference(h2):
    t = h2.tables
    e_hf, _ = oracles.h2_minimal_reference(t.S, t.Hcore, t.eri, 1 / 1.4)
    assert h2.scf.converged
    assert h2.scf.E_total == pytest.approx(e_hf, abs=1e-10)
    assert h2.scf.E_total == pytest.approx(-1.117, abs=1e-3)


def test_helium_two_iterations():
    mol = parse_molecule("units bohr\nHe 0 0 0\n")
    s = run_scf(mol, molecular_integrals(mol, "sto-3g"))
    assert s.converged and s.iterations <= 2
    assert s.E_total == pytest.approx(-2.8078, abs=1e-4)


def test_dissociation_limit():
    far = build_problem(diatomic(1, 1, 50.0), "sto-3g")
    atom = Molecule((1,), np.zeros((1, 3)))
    e_atom = molecular_integrals(atom, "sto-3g").Hcore[0, 0]  # one electron: E = h
    fci = full_ci(far.hamiltonian, 4, 2).ground_energy
    assert fci == pytest.approx(2 * e_atom, abs=1e-6)
    # restricted HF keeps a spurious ionic component at dissociation
    assert far.scf.E_total > 2 * e_atom + 0.1


@pytest.mark.parametrize("mol, basis", SHIPPED)
def test_stationarity_and_bounds(mol, basis):
    pr = build_problem(mol, basis)
    s, t = pr.scf, pr.tables
    assert s.converged
    comm = s.F @ s.P @ t.S - t.S @ s.P @ s.F
    assert np.abs(comm).max() < 1e-7
    assert np.trace(s.P @ t.S) == pytest.approx(mol.n_electrons, abs=1e-10)
    np.testing.assert_allclose(s.C.T @ t.S @ s.C, np.eye(t.nbasis), atol=1e-8)
    np.testing.assert_allclose(s.P, density(s.C, s.n_occ), atol=1e-7)
    assert np.all(np.diff(s.eps) >= 0)
    e_fci = full_ci(pr.hamiltonian, pr.n_modes, pr.n_electrons).ground_energy
    assert s.E_total >= e_fci - 1e-10


def test_damped_energies_monotone():
    mol = diatomic(1, 1, 4.0)
    s = run_scf(mol, molecular_integrals(mol, "6-31g"), ScfOptions(damping=0.3))
    assert s.converged
    tail = np.array(s.energies[2:])
    assert np.all(np.diff(tail) <= 1e-12)


def test_nonconvergence_flagged():
    mol = diatomic(1, 1, 1.4)
    s = run_scf(mol, molecular_integrals(mol, "6-31g"), ScfOptions(max_iter=1))
    assert not s.converged and s.iterations == 1


def test_odd_electrons_rejected():
    mol = Molecule((1, 2), np.array([[0, 0, 0], [0, 0, 1.4]]))
    with pytest.raises(ValueError):
        run_scf(mol, molecular_integrals(mol, "sto-3g"))


def test_json_roundtrip(h2):
    d = json.loads(h2.scf.to_json())
    assert d["E_total"] == pytest.approx(h2.scf.E_total)
    assert d["converged"] is True
    np.testing.assert_allclose(d["orbital_energies"], h2.scf.eps)


def test_verbose_logging(caplog):
    import logging

    mol = diatomic(1, 1, 1.4)
    with caplog.at_level(logging.INFO, logger="qcpipe"):
        run_scf(mol, molecular_integrals(mol, "sto-3g"), ScfOptions(verbose=True))
    assert any("iter" in r.message for r in caplog.records)
