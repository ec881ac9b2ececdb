import math

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_full, brute_tvc, covering_indices, dense_objective, two_site_op
from qlr.core import BlochProjector, Instance, LocalTerm, singlet_psi
from qlr.exact import (
    OracleCapError,
    constraint_sum,
    enumerate_covers,
    ground_energy,
    ground_energy_full,
    ground_energy_nullspace,
    ground_energy_tvc,
    lowest_eigenvalues,
    nullspace_basis,
    smallest_eigenvalue,
)
from qlr.generate import random_instance

MINUS_X = BlochProjector(-1.0, 0.0, 0.0)


def test_enumerate_covers_matches_bruteforce():
    edges = [(0, 1), (1, 2), (2, 3), (0, 3), (1, 3)]
    assert sorted(enumerate_covers(4, edges).tolist()) == covering_indices(4, edges)


def test_enumerate_covers_edgeless_is_full_space():
    assert len(enumerate_covers(5, [])) == 32


def test_worst_case_edge_ground():
    inst = Instance(2, [(0, 1)], [LocalTerm(1.0, MINUS_X)] * 2)
    rep = ground_energy_tvc(inst)
    assert rep.dim == 3
    assert rep.ground == pytest.approx(1 - math.sqrt(2) / 2, abs=1e-12)


def test_triangle_classical_ground():
    inst = Instance(3, [(0, 1), (1, 2), (0, 2)], [LocalTerm(1.0)] * 3)
    assert ground_energy_tvc(inst).ground == pytest.approx(2.0)


def test_pcvc_worst_case_root():
    inst = Instance(2, [(0, 1)], [LocalTerm(1.0, MINUS_X)] * 2, "pcvc", penalties=[4.0])
    roots = np.roots([1, 4, -1, -2])
    u = max(r.real for r in roots if abs(r.imag) < 1e-12 and 0 < r.real < 1)
    assert ground_energy_full(inst).ground == pytest.approx(1 - u, abs=1e-10)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 8), seed=st.integers(0, 2**32), kind=st.sampled_from(["tvc", "pcvc"]))
def test_ground_matches_dense_oracle(n, seed, kind):
    inst = random_instance(kind, n, 0.5, seed)
    got = ground_energy(inst).ground
    want = brute_tvc(inst) if kind == "tvc" else brute_full(inst)
    assert abs(got - want) <= 1e-9


def test_ground_is_variational_minimum():
    inst = random_instance("tvc", 6, 0.4, 3)
    H = dense_objective(inst)
    idx = covering_indices(6, inst.edges)
    ev = np.linalg.eigvalsh(H[np.ix_(idx, idx)])
    assert ground_energy_tvc(inst, k=4).eigs == pytest.approx(ev[:4].tolist(), abs=1e-9)


def test_constraint_sum_matches_projectors():
    psi = np.array([0.3, 0.5, 0.5, -0.2j])
    psi = psi / np.linalg.norm(psi)
    edges = [(0, 1), (1, 2)]
    want = sum(two_site_op(np.outer(psi, psi.conj()), i, j, 3) for i, j in edges)
    got = constraint_sum(3, edges, psi).toarray()
    assert np.allclose(got, want, atol=1e-12)


def test_nullspace_reduces_to_covering_for_00():
    inst = random_instance("tvc", 5, 0.5, 11)
    ev = Instance(inst.n, inst.edges, inst.terms, "evc", psi=np.array([1.0, 0, 0, 0]))
    a = ground_energy_nullspace(ev).ground
    b = ground_energy_tvc(inst).ground
    assert a == pytest.approx(b, abs=1e-9)


def test_nullspace_basis_is_orthonormal_kernel():
    edges = [(0, 1), (1, 2), (2, 0)]
    Q = nullspace_basis(3, edges, singlet_psi())
    assert Q.shape[1] == 4  # symmetric subspace of 3 qubits
    assert np.allclose(Q.conj().T @ Q, np.eye(4), atol=1e-10)
    assert np.allclose(constraint_sum(3, edges, singlet_psi()) @ Q, 0, atol=1e-10)


def test_oracle_caps():
    big = Instance(21, [], [LocalTerm(1.0)] * 21, "pcvc", penalties=[])
    with pytest.raises(OracleCapError):
        ground_energy_full(big)
    big_evc = Instance(13, [(0, 1)], [LocalTerm(1.0)] * 13, "evc", psi=singlet_psi())
    with pytest.raises(OracleCapError):
        ground_energy_nullspace(big_evc)


def test_lanczos_agrees_with_dense():
    d = np.linspace(-1, 5, 3000)
    A = sp.diags(d) + sp.random(3000, 3000, density=1e-3, random_state=1)
    A = (A + A.T) * 0.5
    dense = np.linalg.eigvalsh(A.toarray())[:3]
    got = lowest_eigenvalues(A.tocsr(), k=3)
    assert np.allclose(got, dense, atol=1e-8)
    assert smallest_eigenvalue(A.tocsr()) == pytest.approx(dense[0], abs=1e-8)


def test_non_hermitian_rejected():
    with pytest.raises(ValueError, match="not Hermitian"):
        smallest_eigenvalue(np.array([[0.0, 1.0], [0.0, 0.0]]))
