"""Hilbert space and elementary operators for three qubits coupled to one bosonic mode.

Conventions used throughout the package:

* energies are measured in units of hbar*w0 with hbar = 1 (w0 = 1 by default);
* the composite basis is ordered qubit1 (x) qubit2 (x) qubit3 (x) oscillator,
  with |e> indexed before |g> in each qubit factor and Fock states ascending,
  so the flat index is (4*b1 + 2*b2 + b3)*(n_max+1) + n with b_j = 0 for |e>;
* the oscillator is truncated to the states |0> ... |n_max>;
* X = (a + a^dag)/2 and P = (a - a^dag)/(2i), so [X, P] = i/2 and the vacuum
  has <X^2> = <P^2> = 1/4.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import expm

__all__ = [
    "ParameterError",
    "TruncationError",
    "SystemParams",
    "HermitianOperator",
    "StateVector",
    "pauli",
    "annihilation",
    "number_operator",
    "quadratures",
    "tensor",
    "displacement_operator",
    "qubit_basis_index",
    "QUBIT_LABELS",
]

HERMITICITY_ATOL = 1e-12
NORM_ATOL = 1e-10
MAX_TENSOR_DIM = 100_000

#: three-qubit computational basis labels in index order (|e> before |g>)
QUBIT_LABELS = tuple("".join(s) for s in itertools.product("eg", repeat=3))


class ParameterError(ValueError):
    """Invalid physical parameter or operator argument."""


class TruncationError(RuntimeError):
    """The Fock-space truncation is too small for the requested computation."""

    def __init__(self, message, suggested_n_max=None, offending_lambda=None):
        super().__init__(message)
        self.suggested_n_max = suggested_n_max
        self.offending_lambda = offending_lambda


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the three-qubit/oscillator system.

    Parameters
    ----------
    delta : float
        Qubit gap (coefficient of -sigma_x/2), delta > 0.
    epsilon : float
        Qubit bias (coefficient of -sigma_z/2), epsilon >= 0.
    w0 : float
        Oscillator quantum; the global energy unit (default 1).
    lam : float
        Qubit-oscillator coupling strength lambda >= 0.
    n_max : int
        Fock truncation; the oscillator keeps states |0> ... |n_max|.

    The qubit splitting E_q = sqrt(delta^2 + epsilon^2) and the mixing angle
    theta = arctan(epsilon/delta) are derived quantities and always recomputed.
    """

    delta: float
    epsilon: float = 0.0
    w0: float = 1.0
    lam: float = 0.0
    n_max: int = 60

    def __post_init__(self):
        if not self.delta > 0:
            raise ParameterError(f"delta must be > 0, got {self.delta}")
        if not self.w0 > 0:
            raise ParameterError(f"w0 must be > 0, got {self.w0}")
        if self.lam < 0:
            raise ParameterError(f"lam must be >= 0, got {self.lam}")
        if self.epsilon < 0:
            raise ParameterError(f"epsilon must be >= 0, got {self.epsilon}")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ParameterError(f"n_max must be an integer >= 1, got {self.n_max}")

    @property
    def e_q(self) -> float:
        """Qubit level splitting sqrt(delta^2 + epsilon^2)."""
        return math.hypot(self.delta, self.epsilon)

    @property
    def theta(self) -> float:
        """Mixing angle arctan(epsilon/delta), in [0, pi/2)."""
        return math.atan2(self.epsilon, self.delta)

    @property
    def dim(self) -> int:
        """Dimension of the composite Hilbert space, 8*(n_max+1)."""
        return 8 * (self.n_max + 1)

    def with_(self, **changes) -> "SystemParams":
        """Return a copy with the given fields replaced."""
        return replace(self, **changes)

    @classmethod
    def from_bias_angle(cls, delta, theta, *, w0=1.0, lam=0.0, n_max=60):
        """Build params from the gap and mixing angle: epsilon = delta*tan(theta)."""
        return cls(delta=delta, epsilon=delta * math.tan(theta), w0=w0, lam=lam, n_max=n_max)

    @classmethod
    def from_level_splitting(cls, e_q, theta, *, w0=1.0, lam=0.0, n_max=60):
        """Build params from the splitting E_q and angle: delta = E_q cos(theta)."""
        return cls(
            delta=e_q * math.cos(theta),
            epsilon=e_q * math.sin(theta),
            w0=w0,
            lam=lam,
            n_max=n_max,
        )


def _as_matrix(op):
    if isinstance(op, HermitianOperator):
        return op.matrix
    return np.asarray(op)


@dataclass(frozen=True)
class HermitianOperator:
    """Dense square complex matrix with a construction-time Hermiticity check."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ParameterError(f"operator must be square, got shape {m.shape}")
        dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if dev > HERMITICITY_ATOL:
            raise ParameterError(f"matrix is not Hermitian: max |A - A^dag| = {dev:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class StateVector:
    """Normalized complex state vector."""

    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=complex).ravel()
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > NORM_ATOL:
            raise ParameterError(f"state vector not normalized: |psi| = {norm!r}")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]


_PAULI = {
    # {|e>, |g>} ordering with sigma_z|e> = +|e>, sigma_x|e> = |g>
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}


def pauli(axis: str, qubit_index: int) -> HermitianOperator:
    """Pauli operator on one of the three qubits, as an 8x8 three-qubit matrix.

    `axis` is one of "x", "y", "z"; `qubit_index` is 1, 2 or 3.
    """
    if axis not in _PAULI:
        raise ParameterError(f"axis must be one of x, y, z; got {axis!r}")
    if qubit_index not in (1, 2, 3):
        raise ParameterError(f"qubit_index must be 1, 2 or 3; got {qubit_index!r}")
    mats = [np.eye(2, dtype=complex)] * 3
    mats[qubit_index - 1] = _PAULI[axis]
    return HermitianOperator(np.kron(np.kron(mats[0], mats[1]), mats[2]))


def annihilation(n_max: int) -> np.ndarray:
    """Truncated bosonic annihilation operator, <n-1|a|n> = sqrt(n)."""
    if n_max < 1:
        raise ParameterError(f"n_max must be >= 1, got {n_max}")
    n = np.arange(1, n_max + 1)
    a = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    a[n - 1, n] = np.sqrt(n)
    return a


def number_operator(n_max: int) -> np.ndarray:
    """Truncated number operator a^dag a (diagonal 0..n_max)."""
    return np.diag(np.arange(n_max + 1, dtype=float)).astype(complex)


def quadratures(n_max: int):
    """Quadrature pair X = (a+a^dag)/2, P = (a-a^dag)/(2i), both Hermitian."""
    a = annihilation(n_max)
    ad = a.conj().T
    x = HermitianOperator((a + ad) / 2.0)
    p = HermitianOperator((a - ad) / 2.0j)
    return x, p


def tensor(ops) -> np.ndarray:
    """Kronecker product of the given square operators, in the given order.

    The fixed composite ordering of this package is (qubit1, qubit2, qubit3,
    oscillator).  Products whose dimension would exceed 1e5 are rejected.
    """
    mats = [_as_matrix(op) for op in ops]
    if not mats:
        raise ParameterError("tensor() requires at least one operator")
    dim = 1
    for m in mats:
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ParameterError(f"tensor operands must be square, got shape {m.shape}")
        dim *= m.shape[0]
        if dim > MAX_TENSOR_DIM:
            raise ParameterError(f"tensor dimension {dim} exceeds the limit {MAX_TENSOR_DIM}")
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def displacement_operator(beta: float, n_max: int) -> np.ndarray:
    """Matrix exponential exp(beta (a^dag - a)) in the truncated Fock space.

    Exact unitarity is lost under truncation; the operator is validated on the
    lower half of the space and a TruncationError is raised when
    ||D^dag D - 1||_max there exceeds 1e-8.
    """
    a = annihilation(n_max)
    d = expm(float(beta) * (a.conj().T - a))
    half = (n_max + 1) // 2
    dev = np.max(np.abs((d.conj().T @ d - np.eye(n_max + 1))[:half, :half]))
    if dev > 1e-8:
        raise TruncationError(
            f"displacement beta={beta} not unitary at n_max={n_max} "
            f"(deviation {dev:.2e}); enlarge the truncation",
            suggested_n_max=int(math.ceil(beta * beta + 6 * abs(beta) + 10)),
        )
    return d


def qubit_basis_index(label: str) -> int:
    """Index of a three-qubit basis label like "eeg" (|e> before |g>)."""
    if len(label) != 3 or any(c not in "eg" for c in label):
        raise ParameterError(f"invalid qubit label {label!r}")
    return sum((1 << (2 - i)) for i, c in enumerate(label) if c == "g")
