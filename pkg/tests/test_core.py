"""Elementary operators and carriers: constructions checked against definitions."""

import math

import numpy as np
import pytest

from dicke3.core import (
    HermitianOperator,
    ParameterError,
    StateVector,
    SystemParams,
    TruncationError,
    annihilation,
    displacement_operator,
    number_operator,
    pauli,
    quadratures,
    qubit_basis_index,
    tensor,
)


def basis_vec(dim, idx):
    v = np.zeros(dim, dtype=complex)
    v[idx] = 1.0
    return v


class TestSystemParams:
    def test_derived_quantities(self):
        p = SystemParams(delta=3.0, epsilon=4.0, w0=2.0, lam=0.5, n_max=10)
        assert p.e_q == pytest.approx(5.0)
        assert p.theta == pytest.approx(np.arctan(4.0 / 3.0))
        assert p.dim == 88

    def test_theta_stays_in_range(self):
        assert SystemParams(delta=1.0, epsilon=0.0).theta == 0.0
        assert 0 < SystemParams(delta=1e-8, epsilon=1.0).theta < np.pi / 2

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"delta": 0.0},
            {"delta": -1.0},
            {"delta": 1.0, "w0": 0.0},
            {"delta": 1.0, "lam": -0.1},
            {"delta": 1.0, "epsilon": -0.1},
            {"delta": 1.0, "n_max": 0},
        ],
    )
    def test_invalid_parameters_rejected(self, kwargs):
        with pytest.raises(ParameterError):
            SystemParams(**kwargs)

    def test_bias_angle_constructor(self):
        p = SystemParams.from_bias_angle(2.0, np.pi / 6)
        assert p.epsilon == pytest.approx(2.0 * np.tan(np.pi / 6))

    def test_level_splitting_constructor(self):
        p = SystemParams.from_level_splitting(0.1, np.pi / 3, lam=0.2)
        assert p.e_q == pytest.approx(0.1)
        assert p.theta == pytest.approx(np.pi / 3)


class TestCarriers:
    def test_hermitian_carrier_rejects_asymmetry(self):
        m = np.eye(3, dtype=complex)
        m[0, 1] = 1e-6
        with pytest.raises(ParameterError):
            HermitianOperator(m)

    def test_state_vector_norm_enforced(self):
        with pytest.raises(ParameterError):
            StateVector(np.array([1.0, 1.0]))
        StateVector(np.array([1.0, 1.0]) / np.sqrt(2))


class TestPauli:
    def test_sigma_z_on_eee(self):
        sz1 = pauli("z", 1).matrix
        v = basis_vec(8, qubit_basis_index("eee"))
        assert np.allclose(sz1 @ v, v)

    def test_sigma_x_flips_second_qubit(self):
        sx2 = pauli("x", 2).matrix
        v = basis_vec(8, qubit_basis_index("eee"))
        assert np.allclose(sx2 @ v, basis_vec(8, qubit_basis_index("ege")))

    def test_involution(self):
        sz1 = pauli("z", 1).matrix
        assert np.allclose(sz1 @ sz1, np.eye(8))

    def test_commutation_structure(self):
        # disjoint qubits commute exactly; same-qubit x,z anticommute exactly
        a, b = pauli("x", 1).matrix, pauli("z", 2).matrix
        assert np.array_equal(a @ b, b @ a)
        x1, z1 = pauli("x", 1).matrix, pauli("z", 1).matrix
        assert np.max(np.abs(x1 @ z1 + z1 @ x1)) == 0.0

    def test_bad_arguments(self):
        with pytest.raises(ParameterError):
            pauli("w", 1)
        with pytest.raises(ParameterError):
            pauli("x", 4)


class TestOscillatorOperators:
    def test_annihilation_entries(self):
        a = annihilation(6)
        assert a[0, 1] == pytest.approx(1.0)
        assert a[3, 4] == pytest.approx(2.0)
        assert np.allclose(a @ basis_vec(7, 0), 0.0)

    def test_number_operator_spectrum_exact(self):
        n = number_operator(9)
        assert np.array_equal(np.linalg.eigvalsh(n.real), np.arange(10.0))

    def test_vacuum_quadrature_moments(self):
        x, p = quadratures(12)
        vac = basis_vec(13, 0)
        x2 = vac @ (x.matrix @ x.matrix) @ vac
        assert x2.real == pytest.approx(0.25, abs=1e-14)
        assert (vac @ x.matrix @ vac).real == pytest.approx(0.0, abs=1e-14)

    def test_canonical_commutator_on_interior(self):
        n_max = 15
        x, p = quadratures(n_max)
        comm = x.matrix @ p.matrix - p.matrix @ x.matrix
        expected = 0.5j * np.eye(n_max + 1)
        # truncation corrupts only the top corner
        assert np.allclose(comm[: n_max - 1, : n_max - 1], expected[: n_max - 1, : n_max - 1], atol=1e-13)
        assert not np.allclose(comm[n_max, n_max], 0.5j)


class TestTensor:
    def test_identity_product(self):
        assert np.array_equal(tensor([np.eye(2), np.eye(2)]), np.eye(4))

    def test_composite_dimension(self):
        ops = [np.eye(2)] * 3 + [np.eye(11)]
        assert tensor(ops).shape == (88, 88)

    def test_disjoint_supports_commute(self):
        sz = pauli("z", 1).matrix
        n = number_operator(5)
        a = tensor([sz, np.eye(6)])
        b = tensor([np.eye(8), n])
        assert np.allclose(a @ b, b @ a)

    def test_dimension_guard(self):
        with pytest.raises(ParameterError):
            tensor([np.eye(400), np.eye(400)])


class TestDisplacement:
    def test_zero_displacement_is_identity(self):
        assert np.allclose(displacement_operator(0.0, 10), np.eye(11))

    def test_coherent_state_poisson_weights(self):
        beta = 0.8
        d = displacement_operator(beta, 40)
        probs = np.abs(d[:, 0]) ** 2
        n = np.arange(8)
        expected = np.exp(-beta * beta) * beta ** (2 * n) / np.array([math.factorial(int(k)) for k in n])
        assert np.allclose(probs[:8], expected, atol=1e-12)

    def test_group_inverse(self):
        d = displacement_operator(1.1, 50)
        dinv = displacement_operator(-1.1, 50)
        half = 25
        assert np.allclose((d @ dinv)[:half, :half], np.eye(51)[:half, :half], atol=1e-10)

    def test_truncation_guard(self):
        with pytest.raises(TruncationError):
            displacement_operator(5.0, 8)
