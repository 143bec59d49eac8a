import numpy as np
import pytest
from hypothesis import given, strategies as st
from math import comb

import oracles
from qcpipe.fci import (
    apply_fermion_op,
    ci_matrix,
    ci_solve,
    determinant_to_state,
    enumerate_space,
    excitation_rank,
    full_ci,
)
from qcpipe.fermion import FermionOperator
from qcpipe.molecule import diatomic
from qcpipe.pipeline import build_problem
from qcpipe.qubit_map import EncodingMatrix
from qcpipe.simulator import ground_state, realize


def test_m4_singlet_space():
    space = enumerate_space(4, 2, 2, sz=0)
    labels = [space.label(d) for d in space.dets]
    assert sorted(labels) == sorted(["0011", "1001", "0110", "1100"])
    assert labels == ["0011", "0110", "1001", "1100"]
    assert space.reference == 0b0011


def test_cis_drops_double():
    labels = [enumerate_space(4, 2, 1, sz=0).label(d) for d in enumerate_space(4, 2, 1, sz=0).dets]
    assert "1100" not in labels and len(labels) == 3


def test_filled_space():
    space = enumerate_space(4, 4)
    assert space.dets == (0b1111,)


@given(st.integers(1, 8).flatmap(lambda m: st.tuples(st.just(m), st.integers(1, m))))
def test_full_space_count(mn):
    m, n = mn
    space = enumerate_space(m, n)
    assert len(space) == comb(m, n)
    ranks = [excitation_rank(d, space.reference) for d in space.dets]
    assert ranks == sorted(ranks) and space.dets[0] == space.reference


def test_invalid_sector():
    with pytest.raises(ValueError):
        enumerate_space(2, 3)
    with pytest.raises(ValueError):
        enumerate_space(4, 2, 3)
    with pytest.raises(ValueError):
        enumerate_space(4, 2, sz=3)


def test_apply_creation_rules():
    assert apply_fermion_op(FermionOperator.ladder(1, True), 0b10) == []
    assert apply_fermion_op(FermionOperator.ladder(1, True), 0b01) == [(-1.0, 0b11)]


@given(st.integers(0, 4), st.integers(0, 31))
def test_anticommutator_on_det(j, det):
    c = FermionOperator.ladder(j, False)
    cd = FermionOperator.ladder(j, True)
    assert apply_fermion_op(c * cd + cd * c, det) == [(1.0, det)]


def test_single_determinant_is_hf(h4):
    space = enumerate_space(8, 4, 1)
    ref_only = type(space)(8, 4, 1, (space.reference,))
    assert ci_solve(h4.hamiltonian, ref_only).ground_energy == pytest.approx(h4.scf.E_total, abs=1e-8)


def test_h2_full_ci(h2, h2_fci):
    t = h2.tables
    _, e_ref = oracles.h2_minimal_reference(t.S, t.Hcore, t.eri, 1 / 1.4)
    assert h2_fci.ground_energy == pytest.approx(e_ref, abs=1e-10)
    assert h2_fci.ground_energy == pytest.approx(-1.137, abs=1e-3)
    assert h2_fci.ground_energy < h2.scf.E_total


def test_fci_equals_qubit_ground_and_sector(h2, h4):
    for pr in (h2, h4):
        fci = full_ci(pr.hamiltonian, pr.n_modes, pr.n_electrons)
        e, psi = ground_state(pr.qubit_hamiltonian("jw"))
        assert e == pytest.approx(fci.ground_energy, abs=1e-10)
        occ = np.array([bin(k).count("1") for k in range(len(psi))])
        assert np.sum(np.abs(psi[occ == pr.n_electrons]) ** 2) == pytest.approx(1.0, abs=1e-10)
        emb = determinant_to_state(fci.space, fci.ground_vector)
        assert abs(np.vdot(emb, psi)) == pytest.approx(1.0, abs=1e-8)


def test_truncation_order(h4):
    e = [ci_solve(h4.hamiltonian, enumerate_space(8, 4, J)).ground_energy for J in (1, 2, 4)]
    assert e[0] >= e[1] >= e[2]
    assert e[0] > e[2]


def test_cisd_equals_fci_two_electrons(h2_631g):
    H = h2_631g.hamiltonian
    a = ci_solve(H, enumerate_space(8, 2, 2)).energies
    b = full_ci(H, 8, 2).energies
    np.testing.assert_allclose(a, b, atol=1e-12, rtol=0)


def test_sz_filter_keeps_ground(h2_631g):
    full = full_ci(h2_631g.hamiltonian, 8, 2).ground_energy
    assert full_ci(h2_631g.hamiltonian, 8, 2, sz=0).ground_energy == pytest.approx(full, abs=1e-12)


def test_ci_matrix_against_dense(h2):
    space = enumerate_space(4, 2)
    H = ci_matrix(h2.hamiltonian, space)
    dense = h2.hamiltonian.to_matrix(4)
    idx = list(space.dets)
    np.testing.assert_allclose(H, dense[np.ix_(idx, idx)], atol=1e-14)


def test_correlation_grows_with_stretch():
    corr = []
    for r in (1.4, 2.0, 2.5, 3.0, 4.0):
        pr = build_problem(diatomic(1, 1, r), "sto-3g")
        corr.append(full_ci(pr.hamiltonian, 4, 2).ground_energy - pr.scf.E_total)
    assert all(c < 0 for c in corr)
    assert np.all(np.diff(np.abs(corr)) > 0)


def test_encoded_embedding(h2, h2_fci):
    enc = EncodingMatrix.named("bk", 4)
    psi = determinant_to_state(h2_fci.space, h2_fci.ground_vector, enc)
    H = realize(h2.qubit_hamiltonian("bk"))
    assert np.vdot(psi, H @ psi).real == pytest.approx(h2_fci.ground_energy, abs=1e-10)


def test_to_dict(h2_fci):
    d = h2_fci.to_dict()
    assert d["n_determinants"] == 6
    assert set(d["states"][0]) == {format(k, "04b") for k in h2_fci.space.dets}
