"""Displaced-frame approximation: overlaps, effective blocks, merged spectra."""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import eval_genlaguerre

from dicke3.core import SystemParams, displacement_operator
from dicke3.fast_oscillator import (
    GAMMA_BASIS,
    approx_low_spectrum,
    closed_form_discrepancy,
    displaced_overlap,
    displaced_sector,
    effective_qubit_block,
    l_factor,
    laguerre_assoc,
    paper_effective_energies,
    sector_energy,
    sector_overlap_matrix,
)
from dicke3.hamiltonian import build_full_hamiltonian, decoupled_levels
from dicke3.spectra import eigenvalues


def laguerre_exact(n, k, x):
    """Brute-force associated Laguerre value with exact rational coefficients."""
    x = Fraction(x)
    total = Fraction(0)
    for i in range(n + 1):
        coeff = Fraction(math.comb(n + k, n - i), math.factorial(i))
        total += (-1) ** i * coeff * x**i
    return float(total)


class TestLaguerre:
    def test_degree_zero(self):
        assert laguerre_assoc(0, 5, 2.7) == 1.0

    def test_degree_one(self):
        x = 0.83
        assert laguerre_assoc(1, 0, x) == pytest.approx(1.0 - x, abs=1e-15)

    def test_frozen_exact_value(self):
        # brute-force rational expansion gives L_3^2(3/2) = 1/16
        assert laguerre_exact(3, 2, Fraction(3, 2)) == 0.0625
        assert laguerre_assoc(3, 2, 1.5) == pytest.approx(0.0625, abs=1e-14)

    def test_against_scipy(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            n = int(rng.integers(0, 15))
            k = int(rng.integers(0, 8))
            x = float(rng.uniform(0.0, 12.0))
            assert laguerre_assoc(n, k, x) == pytest.approx(
                float(eval_genlaguerre(n, k, x)), rel=1e-10, abs=1e-10
            )


class TestDisplacedOverlap:
    def test_orthonormal_at_zero_shift(self):
        for m in range(4):
            for n in range(4):
                assert displaced_overlap(m, n, 0.0) == (1.0 if m == n else 0.0)

    def test_vacuum_diagonal_value(self):
        # relative shift 2*lam/w0 = 1 gives e^(-1/2)
        assert displaced_overlap(0, 0, 1.0) == pytest.approx(0.6065306597126334, abs=1e-14)

    def test_matches_matrix_exponential(self):
        for d in (0.4, -0.4, 1.2, -1.2, 2.4, -2.4):
            dm = displacement_operator(d, 80)
            for m in range(11):
                for n in range(11):
                    assert displaced_overlap(m, n, d) == pytest.approx(
                        dm[m, n].real, abs=1e-10
                    )

    def test_exchange_sign_rule(self):
        d = 0.9
        for m in range(12):
            for n in range(12):
                lhs = displaced_overlap(m, n, d)
                rhs = (-1.0) ** (n - m) * displaced_overlap(n, m, d)
                assert lhs == pytest.approx(rhs, abs=1e-13)

    def test_row_normalization(self):
        for d in (0.6, 1.8):
            for m in (0, 3, 7):
                n_top = int(m + 10 * (1 + d * d)) + 10
                total = sum(displaced_overlap(m, n, d) ** 2 for n in range(n_top))
                assert total == pytest.approx(1.0, abs=1e-8)


class TestSectors:
    def test_energy_shift_values(self):
        p = SystemParams(delta=1.0, w0=1.0, lam=1.0)
        assert sector_energy(displaced_sector(+3, p), 0, p) == pytest.approx(-9.0)
        assert sector_energy(displaced_sector(-3, p), 0, p) == pytest.approx(-9.0)
        p0 = p.with_(lam=0.0)
        assert sector_energy(displaced_sector(+1, p0), 2, p0) == pytest.approx(2.0)
        p5 = p.with_(lam=0.5)
        assert sector_energy(displaced_sector(-1, p5), 1, p5) == pytest.approx(0.75)

    def test_displacement_signs(self):
        p = SystemParams(delta=1.0, w0=2.0, lam=0.6)
        assert displaced_sector(+3, p).displacement == pytest.approx(0.9)
        assert displaced_sector(-1, p).displacement == pytest.approx(-0.3)


class TestEffectiveBlock:
    def test_free_qubit_limit(self):
        p = SystemParams(delta=0.8, epsilon=0.6, w0=1.0, lam=0.0)
        block = effective_qubit_block(0, p)
        eigs = np.linalg.eigvalsh(block.matrix.matrix)
        e_q = p.e_q
        expected = np.sort([-1.5 * e_q, -0.5 * e_q, -0.5 * e_q, -0.5 * e_q, 0.5 * e_q, 0.5 * e_q, 0.5 * e_q, 1.5 * e_q])
        assert np.allclose(eigs, expected, atol=1e-12)

    def test_doublet_pairs_carry_l_gap(self):
        # the two antisymmetric single-excitation doublets split by exactly delta*l
        p = SystemParams(delta=0.05, w0=1.0, lam=0.7)
        block = effective_qubit_block(0, p)
        eigs = np.linalg.eigvalsh(block.matrix.matrix)
        l = block.l_factor
        center = -p.lam**2 / p.w0
        target = np.array([center - 0.5 * p.delta * l, center + 0.5 * p.delta * l])
        hits = [np.min(np.abs(eigs - t)) for t in target]
        assert max(hits) < 1e-12

    def test_gamma_basis_order(self):
        labels = [lbl for lbl, _ in GAMMA_BASIS]
        assert labels == ["eee", "eeg", "ege", "gee", "egg", "geg", "gge", "ggg"]
        sectors = [s for _, s in GAMMA_BASIS]
        assert sectors == [3, 1, 1, 1, -1, -1, -1, -3]

    def test_sector_overlaps_and_gram(self):
        # the displaced oscillator ladders are genuinely non-orthogonal across
        # sectors, yet Gamma stays orthonormal because its qubit factors are:
        # the Gram matrix is the qubit Kronecker delta times these overlaps
        p = SystemParams(delta=1.0, w0=1.0, lam=0.8)
        overlaps = sector_overlap_matrix(2, p)
        assert np.allclose(np.diag(overlaps), 1.0)
        assert np.all(np.abs(overlaps) <= 1.0 + 1e-12)
        assert abs(overlaps[0, 1]) > 1e-4  # +3 vs +1 ladder at shift 2*lam/w0
        single_flip = overlaps[0, 1]
        assert single_flip == pytest.approx(l_factor(2, p), abs=1e-14)


class TestPaperEnergies:
    def test_free_limit(self):
        p = SystemParams(delta=1.0, w0=1.0, lam=0.0)
        e1, em1, e3, em3 = paper_effective_energies(0, p)
        assert (e1, em1, e3, em3) == pytest.approx((0.5, -0.5, 1.5, -1.5))

    def test_strong_coupling_saturates_at_bias(self):
        # l -> 0 turns the splitting into the pure bias value 3*eps
        p = SystemParams.from_bias_angle(1.0, np.pi / 5, w0=1.0, lam=4.0)
        e1, em1, e3, em3 = paper_effective_energies(0, p)
        assert e1 - em1 == pytest.approx(p.epsilon, rel=1e-6)
        assert e3 - em3 == pytest.approx(3 * p.epsilon, rel=1e-6)

    def test_gaussian_l_factor(self):
        p = SystemParams(delta=1.0, w0=1.0, lam=1.0)
        e1, _, _, _ = paper_effective_energies(0, p)
        assert e1 == pytest.approx(0.5 * np.exp(-2.0), rel=1e-12)

    def test_block_discrepancy_vanishes_at_zero_coupling(self):
        p = SystemParams(delta=0.3, epsilon=0.1, w0=1.0, lam=0.0)
        _, _, diff = closed_form_discrepancy(0, p)
        assert diff < 1e-12

    def test_block_discrepancy_bounded_by_sector_spread(self):
        p = SystemParams.from_level_splitting(0.05, np.pi / 6, w0=1.0, lam=0.3)
        eigs, assembled, diff = closed_form_discrepancy(0, p)
        assert diff <= 8 * p.lam**2 / p.w0
        assert diff > 0


class TestGapDecay:
    def test_log_gap_slope(self):
        # the antisymmetric doublet gap decays like exp(-2 lam^2/w0^2)
        lams = np.linspace(0.5, 1.5, 11)
        gaps = []
        for lam in lams:
            p = SystemParams(delta=0.05, w0=1.0, lam=float(lam))
            block = effective_qubit_block(0, p).matrix.matrix
            eigs = np.linalg.eigvalsh(block)
            center = -lam**2
            doublet = np.sort(np.abs(eigs - center))[:4]
            gaps.append(2 * np.mean(doublet[:2] + doublet[2:]) / 2)
        slope = np.polyfit(lams**2, np.log(gaps), 1)[0]
        assert slope == pytest.approx(-2.0, rel=0.01)


class TestApproxSpectrum:
    def test_free_limit_reproduces_decoupled_levels(self):
        p = SystemParams(delta=0.4, epsilon=0.2, w0=1.0, lam=0.0, n_max=30)
        approx = [lev.energy for lev in approx_low_spectrum(p, 10)]
        assert np.allclose(approx, decoupled_levels(p, 10), atol=1e-12)

    def test_pairing_in_fast_regime(self):
        # w0/E_q = 10, eps = 0, strong coupling: levels pair up
        p = SystemParams.from_level_splitting(0.1, 0.0, w0=1.0, lam=0.9)
        levels = np.array([lev.energy for lev in approx_low_spectrum(p, 8)])
        intra = levels[1::2] - levels[0::2]
        assert np.max(intra) < 1e-3

    def test_bias_splitting_in_fast_regime(self):
        # w0/E_q = 10, theta = pi/6, strong coupling: pairs split by ~3 eps
        p = SystemParams.from_level_splitting(0.1, np.pi / 6, w0=1.0, lam=1.0)
        levels = np.array([lev.energy for lev in approx_low_spectrum(p, 8)])
        intra = levels[1::2] - levels[0::2]
        assert np.allclose(intra, 3 * p.epsilon, rtol=0.05)

    def test_matches_exact_diagonalization_in_regime(self):
        # w0/E_q = 20: eight lowest match exact levels within 1% of w0
        for theta in (0.0, np.pi / 6):
            p = SystemParams.from_level_splitting(0.05, theta, w0=1.0, lam=0.6, n_max=40)
            exact = eigenvalues(build_full_hamiltonian(p).h_total, 8)
            approx = np.array([lev.energy for lev in approx_low_spectrum(p, 8)])
            assert np.max(np.abs(exact - approx)) < 0.01

    def test_annotations(self):
        p = SystemParams(delta=0.1, w0=1.0, lam=0.3)
        levels = approx_low_spectrum(p, 8)
        assert all(lev.n >= 0 for lev in levels)
        assert all(lev.multiplicity >= 1 for lev in levels)
