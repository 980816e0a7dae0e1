"""Full Hamiltonian of three qubits coupled to one oscillator, plus its symmetries.

H = sum_j [-(delta/2) sigma_x_j - (epsilon/2) sigma_z_j]
    + w0 a^dag a
    + lam (a + a^dag)(sigma_z_1 + sigma_z_2 + sigma_z_3)

The oscillator zero-point energy w0/2 is omitted.  At epsilon = 0 the model
conserves the parity sigma_x_1 sigma_x_2 sigma_x_3 (x) (-1)^(a^dag a), and for
any parameters it is invariant under permutations of the three qubits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    HermitianOperator,
    ParameterError,
    SystemParams,
    annihilation,
    number_operator,
    pauli,
    tensor,
)

__all__ = [
    "HamiltonianBundle",
    "build_full_hamiltonian",
    "parity_operator",
    "permutation_operator",
    "decoupled_levels",
]


@dataclass(frozen=True)
class HamiltonianBundle:
    """Assembled Hamiltonian together with its parameters and parity operator."""

    h_total: HermitianOperator
    params: SystemParams
    parity_op: HermitianOperator


def build_full_hamiltonian(params: SystemParams) -> HamiltonianBundle:
    """Assemble the full coupled Hamiltonian at the given parameters."""
    n_osc = params.n_max + 1
    i_osc = np.eye(n_osc, dtype=complex)
    a = annihilation(params.n_max)
    position = a + a.conj().T

    h = np.zeros((params.dim, params.dim), dtype=complex)
    sz_sum = np.zeros((8, 8), dtype=complex)
    for j in (1, 2, 3):
        hq_j = -0.5 * params.delta * pauli("x", j).matrix - 0.5 * params.epsilon * pauli("z", j).matrix
        h += tensor([hq_j, i_osc])
        sz_sum += pauli("z", j).matrix
    h += tensor([np.eye(8, dtype=complex), params.w0 * number_operator(params.n_max)])
    h += params.lam * tensor([sz_sum, position])

    return HamiltonianBundle(
        h_total=HermitianOperator(h),
        params=params,
        parity_op=parity_operator(params.n_max),
    )


def parity_operator(n_max: int) -> HermitianOperator:
    """Conserved parity sigma_x1 sigma_x2 sigma_x3 (x) (-1)^(a^dag a).

    Squares to the identity; commutes with the Hamiltonian exactly when
    epsilon = 0.
    """
    flip = pauli("x", 1).matrix @ pauli("x", 2).matrix @ pauli("x", 3).matrix
    photon_parity = np.diag((-1.0) ** np.arange(n_max + 1)).astype(complex)
    return HermitianOperator(tensor([flip, photon_parity]))


def permutation_operator(perm, n_max: int | None = None) -> np.ndarray:
    """Unitary that reorders the qubit tensor factors.

    `perm` is a permutation of (1, 2, 3); the qubit at slot perm[i] is moved
    to slot i+1, i.e. new_label[i] = old_label[perm[i]-1].  With n_max given,
    the operator acts on the full composite space (identity on the
    oscillator); otherwise it is the bare 8x8 qubit operator.
    """
    perm = tuple(perm)
    if sorted(perm) != [1, 2, 3]:
        raise ParameterError(f"perm must be a permutation of (1, 2, 3), got {perm!r}")
    p = np.zeros((8, 8), dtype=complex)
    for src in range(8):
        bits = ((src >> 2) & 1, (src >> 1) & 1, src & 1)
        new_bits = tuple(bits[perm[i] - 1] for i in range(3))
        dst = (new_bits[0] << 2) | (new_bits[1] << 1) | new_bits[2]
        p[dst, src] = 1.0
    if n_max is None:
        return p
    return tensor([p, np.eye(n_max + 1, dtype=complex)])


def decoupled_levels(params: SystemParams, k: int | None = None) -> np.ndarray:
    """Analytic spectrum at lam = 0: n*w0 + m*E_q/2 with m in {-3,-1,-1,-1,1,1,1,3}.

    Returns the k lowest levels (all 8*(n_max+1) when k is None), ascending.
    Used as an independent oracle for the assembled Hamiltonian.
    """
    qubit_sums = np.array([-3, -1, -1, -1, 1, 1, 1, 3], dtype=float)
    n = np.arange(params.n_max + 1, dtype=float)
    levels = (params.w0 * n[None, :] + 0.5 * params.e_q * qubit_sums[:, None]).ravel()
    levels.sort()
    return levels if k is None else levels[:k]
