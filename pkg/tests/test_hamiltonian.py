"""Full Hamiltonian assembly and its symmetry operators."""

import itertools

import numpy as np
import pytest

from dicke3.core import SystemParams, qubit_basis_index
from dicke3.hamiltonian import (
    build_full_hamiltonian,
    decoupled_levels,
    parity_operator,
    permutation_operator,
)
from dicke3.spectra import eigenvalues


def composite_basis_vec(params, label, n):
    v = np.zeros(params.dim, dtype=complex)
    v[qubit_basis_index(label) * (params.n_max + 1) + n] = 1.0
    return v


class TestAssembly:
    def test_decoupled_spectrum(self):
        # at lam=0, eps=0 the spectrum is n*w0 + s*delta/2, s in {-3,-1,-1,-1,1,1,1,3}
        p = SystemParams(delta=1.0, w0=1.0, lam=0.0, n_max=25)
        vals = eigenvalues(build_full_hamiltonian(p).h_total, 30)
        assert np.allclose(vals, decoupled_levels(p, 30), atol=1e-10)

    def test_ground_energy_three_free_qubits(self):
        p = SystemParams(delta=1.0, w0=1.0, lam=0.0, n_max=12)
        assert eigenvalues(build_full_hamiltonian(p).h_total, 1)[0] == pytest.approx(-1.5, abs=1e-12)

    def test_interaction_matrix_element(self):
        # <eee,n|H|eee,n+1> = 3 lam sqrt(n+1)
        p = SystemParams(delta=0.7, epsilon=0.3, w0=1.0, lam=0.37, n_max=9)
        h = build_full_hamiltonian(p).h_total.matrix
        for n in (0, 3, 7):
            bra = composite_basis_vec(p, "eee", n)
            ket = composite_basis_vec(p, "eee", n + 1)
            assert bra @ h @ ket == pytest.approx(3 * 0.37 * np.sqrt(n + 1), abs=1e-12)

    def test_hermiticity(self):
        p = SystemParams(delta=0.9, epsilon=0.2, w0=1.3, lam=0.8, n_max=15)
        h = build_full_hamiltonian(p).h_total.matrix
        assert np.max(np.abs(h - h.conj().T)) < 1e-12

    def test_number_form_matches_decoupled_oscillator(self):
        # lam=0 spectrum spacing is w0 (zero-point omitted)
        p = SystemParams(delta=5.0, w0=0.7, lam=0.0, n_max=10)
        vals = eigenvalues(build_full_hamiltonian(p).h_total, 3)
        assert vals[0] == pytest.approx(-7.5, abs=1e-10)


class TestParity:
    def test_flips_ggg_vacuum_to_eee_vacuum(self):
        p = SystemParams(delta=1.0, n_max=6)
        pi = parity_operator(p.n_max).matrix
        assert np.allclose(pi @ composite_basis_vec(p, "ggg", 0), composite_basis_vec(p, "eee", 0))

    def test_involution_and_unitarity(self):
        pi = parity_operator(7).matrix
        assert np.allclose(pi @ pi, np.eye(64))
        assert np.allclose(pi @ pi.conj().T, np.eye(64))

    def test_conserved_without_bias(self):
        for lam in (0.0, 0.4, 1.2):
            p = SystemParams(delta=1.0, epsilon=0.0, lam=lam, n_max=12)
            b = build_full_hamiltonian(p)
            comm = b.h_total.matrix @ b.parity_op.matrix - b.parity_op.matrix @ b.h_total.matrix
            assert np.max(np.abs(comm)) < 1e-10

    def test_broken_linearly_by_bias(self):
        def comm_norm(eps):
            p = SystemParams(delta=1.0, epsilon=eps, lam=0.3, n_max=8)
            b = build_full_hamiltonian(p)
            c = b.h_total.matrix @ b.parity_op.matrix - b.parity_op.matrix @ b.h_total.matrix
            return np.max(np.abs(c))

        n1, n2 = comm_norm(0.5), comm_norm(1.0)
        assert n1 > 1e-3
        assert n2 / n1 == pytest.approx(2.0, rel=1e-9)


class TestPermutations:
    def test_identity_permutation(self):
        assert np.array_equal(permutation_operator((1, 2, 3)), np.eye(8))

    def test_swap_23_relabels_basis(self):
        p = SystemParams(delta=1.0, n_max=4)
        op = permutation_operator((1, 3, 2), p.n_max)
        assert np.allclose(op @ composite_basis_vec(p, "egg", 1), composite_basis_vec(p, "egg", 1))
        assert np.allclose(op @ composite_basis_vec(p, "geg", 2), composite_basis_vec(p, "gge", 2))

    def test_all_permutations_commute_with_h(self):
        rng = np.random.default_rng(7)
        p = SystemParams(
            delta=float(rng.uniform(0.2, 2.0)),
            epsilon=float(rng.uniform(0.0, 1.0)),
            w0=float(rng.uniform(0.5, 1.5)),
            lam=float(rng.uniform(0.0, 1.0)),
            n_max=9,
        )
        h = build_full_hamiltonian(p).h_total.matrix
        for perm in itertools.permutations((1, 2, 3)):
            op = permutation_operator(perm, p.n_max)
            assert np.max(np.abs(h @ op - op @ h)) < 1e-12
            assert np.allclose(op @ op.conj().T, np.eye(p.dim))
