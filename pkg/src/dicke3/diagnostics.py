"""Ground-state nonclassicality diagnostics.

Reduced density matrices, the Husimi Q and Wigner functions of the oscillator,
quadrature squeezing, three-qubit von Neumann entropy, pairwise concurrence,
and a cat-state detector, all evaluated on the exact ground state.

Phase-space conventions: alpha = X + iP, both functions normalized so that
the integral over dX dP is 1.  The Wigner function is evaluated through the
displaced-parity form W(alpha) = (2/pi) Tr[rho D(alpha) Pi D^dag(alpha)]
(identically (2/pi) Tr[rho D(2 alpha) Pi]); the textbook position-kernel
integral is kept as a slow quadrature oracle.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .core import ParameterError, StateVector, SystemParams, quadratures
from .hamiltonian import build_full_hamiltonian
from .spectra import certify_truncation, eigendecompose

__all__ = [
    "DensityMatrix",
    "PhaseSpaceGrid",
    "GroundStateReport",
    "ground_state",
    "partial_trace",
    "q_function",
    "wigner_function",
    "wigner_by_quadrature",
    "position_distribution",
    "squeezing_parameters",
    "von_neumann_entropy",
    "concurrence",
    "is_cat_like",
    "build_report",
    "sweep_ground_diagnostics",
    "write_report",
]

logger = logging.getLogger(__name__)

_DM_ATOL = 1e-10


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ParameterError(f"density matrix must be square, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > _DM_ATOL:
            raise ParameterError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > _DM_ATOL:
            raise ParameterError(f"density matrix trace {tr!r} != 1")
        if np.min(np.linalg.eigvalsh(m)) < -_DM_ATOL:
            raise ParameterError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Real-valued function samples over a rectangular (X, P) grid."""

    x_values: np.ndarray
    p_values: np.ndarray
    values: np.ndarray  # shape (len(p_values), len(x_values))

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise ParameterError("phase-space grid contains non-finite values")

    def mass(self) -> float:
        dx = self.x_values[1] - self.x_values[0]
        dp = self.p_values[1] - self.p_values[0]
        return float(np.sum(self.values) * dx * dp)

    def write_csv(self, path) -> None:
        """Write long-form `X,P,value` rows with 12 significant digits."""
        lines = ["X,P,value"]
        for i, p in enumerate(self.p_values):
            for j, x in enumerate(self.x_values):
                lines.append(f"{x:.11e},{p:.11e},{self.values[i, j]:.11e}")
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")


#: qubit-label orbits under S3 (indices 4b1+2b2+b3): eee | eeg,ege,gee | egg,geg,gge | ggg
_QUBIT_ORBITS = ((0,), (1, 2, 4), (3, 5, 6), (7,))


def _symmetrize_qubits(vec):
    """Project onto the qubit-permutation-symmetric subspace (renormalized).

    The exact ground state is permutation symmetric; the projection strips
    solver noise from clustered spectra.  One canonical average is assigned
    to every member of each label orbit, so the result is bit-exactly
    symmetric.  Falls back to the input if the symmetric component is not
    dominant.
    """
    n_osc = vec.size // 8
    m = vec.reshape(8, n_osc)
    sym = np.empty_like(m)
    for orbit in _QUBIT_ORBITS:
        avg = m[list(orbit)].sum(axis=0) / len(orbit)
        sym[list(orbit)] = avg
    sym = sym.reshape(vec.size)
    norm = np.linalg.norm(sym)
    if norm < 0.5:
        logger.warning("ground state is not permutation symmetric; skipping projection")
        return vec
    return sym / norm


def _ground_state_info(bundle, gap_tol: float = 1e-10):
    """Lowest eigenvector with deterministic handling of a degenerate pair.

    Returns (state, energy, gap).  The vector is projected onto the
    permutation-symmetric qubit sector; when the lowest two levels are closer
    than gap_tol*w0 and epsilon = 0, the parity-even combination is selected.
    The global phase makes the largest-magnitude amplitude real positive.
    """
    vals, vecs = eigendecompose(bundle.h_total, 2)
    gap = float(vals[1] - vals[0])
    vec = vecs[:, 0]
    if gap < gap_tol * bundle.params.w0:
        logger.warning(
            "near-degenerate ground pair (gap %.3e); %s",
            gap,
            "selecting the parity-even combination" if bundle.params.epsilon == 0 else "keeping the solver vector",
        )
        if bundle.params.epsilon == 0:
            pi = bundle.parity_op.matrix
            sub = vecs.conj().T @ pi @ vecs
            s_vals, s_vecs = np.linalg.eigh(sub)
            vec = vecs @ s_vecs[:, np.argmax(s_vals)]
    vec = _symmetrize_qubits(vec)
    k = np.argmax(np.abs(vec))
    vec = vec * (abs(vec[k]) / vec[k])
    vec = vec / np.linalg.norm(vec)
    return StateVector(vec), float(vals[0]), gap


def ground_state(bundle, gap_tol: float = 1e-10) -> StateVector:
    """Ground state of an assembled Hamiltonian (phase-fixed, deterministic)."""
    state, _, _ = _ground_state_info(bundle, gap_tol)
    return state


_PAIR_SELECTORS = ("pair23", "pair12", "pair13")


def partial_trace(obj, keep: str) -> DensityMatrix:
    """Reduced density matrix of a composite pure state or density matrix.

    `keep` selects the retained subsystem: "oscillator", "qubits", or one of
    "pair23", "pair12", "pair13" (the qubit pairs; "pair23" is the one used
    by the concurrence).  The composite dimension must be 8*(n_max+1) in the
    package basis ordering.
    """
    if keep not in ("oscillator", "qubits") + _PAIR_SELECTORS:
        raise ParameterError(f"unknown subsystem selector {keep!r}")

    if isinstance(obj, StateVector):
        vec = obj.amplitudes
    elif isinstance(obj, DensityMatrix):
        vec = None
        rho = obj.entries
    else:
        arr = np.asarray(obj, dtype=complex)
        if arr.ndim == 1:
            vec = arr / np.linalg.norm(arr)
        else:
            vec = None
            rho = arr

    if vec is not None:
        if vec.size % 8:
            raise ParameterError(f"composite dimension {vec.size} is not 8*(n_max+1)")
        n_osc = vec.size // 8
        m = vec.reshape(8, n_osc)
        rho_q = m @ m.conj().T
        if keep == "oscillator":
            return DensityMatrix(m.T @ m.conj())
    else:
        if rho.shape[0] % 8:
            raise ParameterError(f"composite dimension {rho.shape[0]} is not 8*(n_max+1)")
        n_osc = rho.shape[0] // 8
        r4 = rho.reshape(8, n_osc, 8, n_osc)
        if keep == "oscillator":
            return DensityMatrix(np.trace(r4, axis1=0, axis2=2))
        rho_q = np.trace(r4, axis1=1, axis2=3)

    if keep == "qubits":
        return DensityMatrix(rho_q)
    r6 = rho_q.reshape(2, 2, 2, 2, 2, 2)  # (q1, q2, q3, q1', q2', q3')
    traced_axis = {"pair23": (0, 3), "pair13": (1, 4), "pair12": (2, 5)}[keep]
    pair = np.trace(r6, axis1=traced_axis[0], axis2=traced_axis[1]).reshape(4, 4)
    return DensityMatrix(pair)


def _hermite_psi(n_levels: int, x):
    """Oscillator position wavefunctions psi_n(X) for X = (a+a^dag)/2 units.

    Row n holds psi_n on the given points; normalized so that
    integral |psi_n(X)|^2 dX = 1 (vacuum variance 1/4).
    """
    x = np.asarray(x, dtype=float)
    u = math.sqrt(2.0) * x
    out = np.empty((n_levels, x.size))
    out[0] = (2.0 / math.pi) ** 0.25 * np.exp(-x * x)
    if n_levels > 1:
        out[1] = math.sqrt(2.0) * u * out[0]
    for n in range(2, n_levels):
        out[n] = math.sqrt(2.0 / n) * u * out[n - 1] - math.sqrt((n - 1) / n) * out[n - 2]
    return out


def position_distribution(rho: DensityMatrix, x):
    """Diagonal position density <X|rho|X> (the Wigner P-marginal)."""
    psi = _hermite_psi(rho.dim, x)
    return np.real(np.einsum("ng,nm,mg->g", psi, rho.entries, psi))


def _default_half_width(params: SystemParams | None, rho: DensityMatrix) -> float:
    if params is not None:
        return 3.0 * params.lam / params.w0 + 4.0
    n_mean = float(np.real(np.trace(rho.entries @ np.diag(np.arange(rho.dim)))))
    return 2.0 * math.sqrt(max(n_mean, 0.0)) + 4.0


def _phase_grid(half_width, points):
    x = np.linspace(-half_width, half_width, points)
    return x, x.copy()


def q_function(
    rho: DensityMatrix,
    params: SystemParams | None = None,
    half_width: float | None = None,
    points: int = 201,
) -> PhaseSpaceGrid:
    """Husimi function Q(X, P) = (1/pi) <alpha|rho|alpha>, alpha = X + iP.

    Pointwise nonnegative; integrates to 1 over the grid.  If the grid
    captures less than 98% of the mass it is widened once, after which a
    remaining deficit raises an error.
    """
    half_width = half_width if half_width is not None else _default_half_width(params, rho)
    for attempt in range(2):
        x_vals, p_vals = _phase_grid(half_width, points)
        values = _q_values(rho, x_vals, p_vals)
        grid = PhaseSpaceGrid(x_values=x_vals, p_values=p_vals, values=values)
        if grid.mass() >= 0.98:
            return grid
        half_width *= 1.6
    raise ParameterError(
        f"Q grid captures only {grid.mass():.4f} of the state after widening; "
        "supply a larger half_width"
    )


def _q_values(rho, x_vals, p_vals, chunk=2048):
    n_levels = rho.dim
    xg, pg = np.meshgrid(x_vals, p_vals)
    alpha = (xg + 1j * pg).ravel()
    out = np.empty(alpha.size)
    for lo in range(0, alpha.size, chunk):
        a = alpha[lo : lo + chunk]
        c = np.empty((a.size, n_levels), dtype=complex)
        c[:, 0] = np.exp(-0.5 * np.abs(a) ** 2)
        for n in range(1, n_levels):
            c[:, n] = c[:, n - 1] * a / math.sqrt(n)
        inner = c @ rho.entries.T
        out[lo : lo + chunk] = np.real(np.sum(np.conj(c) * inner, axis=1)) / math.pi
    out = out.reshape(len(p_vals), len(x_vals))
    if np.min(out) < -1e-12:
        raise ParameterError(f"Q function dipped below zero: {np.min(out):.3e}")
    return np.clip(out, 0.0, None)


def wigner_function(
    rho: DensityMatrix,
    params: SystemParams | None = None,
    half_width: float | None = None,
    points: int = 201,
) -> PhaseSpaceGrid:
    """Wigner function via displaced parity, normalized to unit mass.

    Raises when the grid mass drifts from 1 by more than 2%, which signals a
    too-small Fock truncation (a suggested n_max is attached).
    """
    half_width = half_width if half_width is not None else _default_half_width(params, rho)
    x_vals, p_vals = _phase_grid(half_width, points)
    values = _wigner_values(rho.entries, x_vals, p_vals)
    grid = PhaseSpaceGrid(x_values=x_vals, p_values=p_vals, values=values)
    drift = abs(grid.mass() - 1.0)
    if drift > 0.02:
        from .core import TruncationError

        raise TruncationError(
            f"Wigner mass {grid.mass():.4f} drifts from 1 by {drift:.3f}; "
            "the Fock truncation (or the grid) is too small",
            suggested_n_max=int(1.5 * rho.dim) + 10,
        )
    return grid


def _wigner_values(rho, x_vals, p_vals):
    """(2/pi) Tr[rho D(2 alpha) Pi] on the grid, via scaled Laguerre diagonals."""
    n_levels = rho.shape[0]
    xg, pg = np.meshgrid(x_vals, p_vals)
    beta = 2.0 * (xg + 1j * pg)
    b2 = np.abs(beta) ** 2
    env = np.exp(-0.5 * b2)

    signs = (-1.0) ** np.arange(n_levels)
    acc = np.zeros_like(beta)
    b_pow = np.ones_like(beta)  # beta^q / sqrt(q!)
    for q in range(n_levels):
        if q > 0:
            b_pow = b_pow * beta / math.sqrt(q)
        ns = np.arange(n_levels - q)
        # sqrt(n! q! / (n+q)!) keeps every factor bounded
        cnq = np.exp(0.5 * (gammaln(ns + 1) + gammaln(q + 1) - gammaln(ns + q + 1)))
        w_plus = signs[ns] * cnq * rho[ns, ns + q]
        w_minus = signs[ns] * cnq * rho[ns + q, ns]
        if not (np.any(w_plus) or np.any(w_minus)):
            continue
        s_plus = np.zeros_like(beta)
        s_minus = np.zeros_like(beta)
        l_prev = env.copy()  # L_0^q * exp(-b2/2)
        l_cur = (1.0 + q - b2) * env
        for n in ns:
            l_n = l_prev if n == 0 else l_cur
            if n >= 2:
                l_prev, l_cur = l_cur, ((2 * n - 1 + q - b2) * l_cur - (n - 1 + q) * l_prev) / n
                l_n = l_cur
            if w_plus[n]:
                s_plus += w_plus[n] * l_n
            if w_minus[n]:
                s_minus += w_minus[n] * l_n
        if q == 0:
            acc += 0.5 * (b_pow * s_plus + np.conj(b_pow) * s_minus)
        else:
            acc += b_pow * s_plus + np.conj(b_pow) * s_minus

    w = (2.0 / math.pi) * acc
    resid = float(np.max(np.abs(w.imag)))
    if resid > 1e-10:
        raise ParameterError(f"Wigner imaginary residue {resid:.3e} exceeds 1e-10")
    return w.real


def wigner_by_quadrature(rho: DensityMatrix, x_vals, p_vals, s_half=None, n_s=2001):
    """Slow reference Wigner: the position-kernel integral, trapezoid rule.

    W(X, P) = (1/pi) * integral ds <X+s/2|rho|X-s/2> e^(2iPs), which matches
    the displaced-parity evaluation under the package normalization.  Only
    meant for coarse grids in tests.
    """
    x_vals = np.asarray(x_vals, dtype=float)
    p_vals = np.asarray(p_vals, dtype=float)
    if s_half is None:
        s_half = 2.0 * np.max(np.abs(x_vals)) + 8.0
    s = np.linspace(-s_half, s_half, n_s)
    trapezoid = getattr(np, "trapezoid", None) or np.trapz
    out = np.empty((p_vals.size, x_vals.size))
    for j, x in enumerate(x_vals):
        psi_plus = _hermite_psi(rho.dim, x + 0.5 * s)
        psi_minus = _hermite_psi(rho.dim, x - 0.5 * s)
        kernel = np.einsum("ns,nm,ms->s", psi_plus, rho.entries, psi_minus)
        phases = np.exp(2j * np.outer(p_vals, s))
        out[:, j] = np.real(trapezoid(phases * kernel[None, :], s, axis=1)) / math.pi
    return out


def squeezing_parameters(rho: DensityMatrix):
    """Quadrature squeezing (s_x, s_p) and the uncertainty product K.

    s = 4 Var - 1 in each quadrature (0 for the vacuum) and
    K = (1/4)(1+s_p)(1+s_x) = 4 Var(X) Var(P) >= 1/4.
    """
    n_max = rho.dim - 1
    x_op, p_op = quadratures(n_max)
    out = []
    for op in (x_op.matrix, p_op.matrix):
        mean = np.real(np.trace(rho.entries @ op))
        second = np.real(np.trace(rho.entries @ (op @ op)))
        out.append(4.0 * (second - mean * mean) - 1.0)
    s_x, s_p = out
    k = 0.25 * (1.0 + s_p) * (1.0 + s_x)
    return s_x, s_p, k


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Base-2 von Neumann entropy; eigenvalues below 1e-14 count as zero."""
    evals = np.linalg.eigvalsh(rho.entries)
    evals = evals[evals > 1e-14]
    return float(-np.sum(evals * np.log2(evals)))


_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_YY = np.kron(_SIGMA_Y, _SIGMA_Y)


def concurrence(rho_pair: DensityMatrix) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    C = max(0, sqrt(e1) - sqrt(e2) - sqrt(e3) - sqrt(e4)) with e_i the
    decreasing eigenvalues of rho (sy x sy) rho* (sy x sy), clipped at zero
    before the square root.  Evaluated through the Hermitian similarity
    sqrt(rho) rho~ sqrt(rho), which shares the spectrum of the textbook
    product but is numerically stable for near-degenerate eigenvalues.
    """
    if rho_pair.dim != 4:
        raise ParameterError(f"concurrence needs a 4x4 density matrix, got dim {rho_pair.dim}")
    m = rho_pair.entries
    w, v = np.linalg.eigh(m)
    sqrt_rho = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    rho_tilde = _YY @ m.conj() @ _YY
    prod = sqrt_rho @ rho_tilde @ sqrt_rho
    evals = np.sort(np.clip(np.linalg.eigvalsh(prod), 0.0, None))[::-1]
    roots = np.sqrt(evals)
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def is_cat_like(grid: PhaseSpaceGrid, min_separation: float = 2.0, fringe_level: float = 0.01):
    """Two-lobes-with-fringes detector on a Wigner grid.

    Cat-like means: two local maxima separated by at least `min_separation`
    in X, and a fringe region dipping below -fringe_level * max(W).
    """
    w = grid.values
    w_max = float(np.max(w))
    if w_max <= 0:
        return False
    interior = w[1:-1, 1:-1]
    peaks = (
        (interior > w[:-2, 1:-1])
        & (interior > w[2:, 1:-1])
        & (interior > w[1:-1, :-2])
        & (interior > w[1:-1, 2:])
        & (interior > 0.1 * w_max)
    )
    pi_idx, pj_idx = np.nonzero(peaks)
    if pi_idx.size < 2:
        return False
    xs = grid.x_values[pj_idx + 1]
    separation = float(np.max(xs) - np.min(xs))
    has_fringe = float(np.min(w)) < -fringe_level * w_max
    return separation >= min_separation and has_fringe


@dataclass(frozen=True)
class GroundStateReport:
    """Ground state plus the full diagnostics suite at one parameter point."""

    params: SystemParams
    ground_energy: float
    entropy_S: float
    concurrence_C: float
    s_x: float
    s_p: float
    K_uncertainty: float
    wigner_min: float
    q_grid: PhaseSpaceGrid
    w_grid: PhaseSpaceGrid
    ground_gap: float
    cat_like: bool

    def __post_init__(self):
        if not (-1e-9 <= self.entropy_S <= 3.0 + 1e-9):
            raise ParameterError(f"entropy {self.entropy_S} outside [0, 3]")
        if not (-1e-9 <= self.concurrence_C <= 1.0 + 1e-9):
            raise ParameterError(f"concurrence {self.concurrence_C} outside [0, 1]")
        if self.s_x < -1.0 - 1e-9 or self.s_p < -1.0 - 1e-9:
            raise ParameterError("squeezing parameter below -1")
        if self.K_uncertainty < 0.25 - 1e-9:
            raise ParameterError(f"uncertainty product {self.K_uncertainty} below 1/4")


def build_report(
    params: SystemParams,
    rel_tol: float = 1e-6,
    points: int = 201,
    half_width: float | None = None,
) -> GroundStateReport:
    """Solve the ground state at a certified truncation and compute all quantifiers."""
    n_max = certify_truncation(params, 4, rel_tol)
    params = params.with_(n_max=max(n_max, params.n_max))
    bundle = build_full_hamiltonian(params)
    state, energy, gap = _ground_state_info(bundle)

    rho_osc = partial_trace(state, "oscillator")
    rho_q = partial_trace(state, "qubits")

    entropy_q = von_neumann_entropy(rho_q)
    entropy_osc = von_neumann_entropy(rho_osc)
    if abs(entropy_q - entropy_osc) > 1e-8:
        raise RuntimeError(
            f"entropy symmetry violated: S(qubits)={entropy_q!r} vs S(osc)={entropy_osc!r}"
        )

    pair_c = [concurrence(partial_trace(state, sel)) for sel in _PAIR_SELECTORS]
    if max(pair_c) - min(pair_c) > 1e-10:
        raise RuntimeError(f"pair concurrences differ beyond tolerance: {pair_c}")

    s_x, s_p, k = squeezing_parameters(rho_osc)
    q_grid = q_function(rho_osc, params, half_width, points)
    w_grid = wigner_function(rho_osc, params, half_width, points)

    return GroundStateReport(
        params=params,
        ground_energy=energy,
        entropy_S=entropy_q,
        concurrence_C=pair_c[0],
        s_x=s_x,
        s_p=s_p,
        K_uncertainty=k,
        wigner_min=float(np.min(w_grid.values)),
        q_grid=q_grid,
        w_grid=w_grid,
        ground_gap=gap,
        cat_like=is_cat_like(w_grid),
    )


def _diagnostics_point(params: SystemParams):
    bundle = build_full_hamiltonian(params)
    state, energy, _ = _ground_state_info(bundle)
    rho_osc = partial_trace(state, "oscillator")
    rho_q = partial_trace(state, "qubits")
    s_x, s_p, k = squeezing_parameters(rho_osc)
    return (
        energy,
        von_neumann_entropy(rho_q),
        concurrence(partial_trace(state, "pair23")),
        s_x,
        s_p,
        k,
    )


def sweep_ground_diagnostics(params_base: SystemParams, lambda_grid, rel_tol: float = 1e-6):
    """Scalar ground-state quantifiers over a coupling grid (no phase-space grids).

    Returns a dict of arrays keyed by "lambda", "energy", "entropy",
    "concurrence", "s_x", "s_p", "K"; all points share one truncation
    certified at the largest coupling.
    """
    lambda_grid = np.asarray(lambda_grid, dtype=float)
    n_max = certify_truncation(params_base.with_(lam=float(lambda_grid.max())), 4, rel_tol)
    rows = [_diagnostics_point(params_base.with_(lam=float(lam), n_max=n_max)) for lam in lambda_grid]
    arr = np.array(rows)
    return {
        "lambda": lambda_grid,
        "energy": arr[:, 0],
        "entropy": arr[:, 1],
        "concurrence": arr[:, 2],
        "s_x": arr[:, 3],
        "s_p": arr[:, 4],
        "K": arr[:, 5],
        "n_max_used": n_max,
    }


def write_report(report: GroundStateReport, base_path) -> None:
    """Write `<base>_report.txt` plus the two long-form phase-space CSV grids."""
    p = report.params
    scalars = [
        ("delta", p.delta),
        ("epsilon", p.epsilon),
        ("w0", p.w0),
        ("lambda", p.lam),
        ("n_max", p.n_max),
        ("ground_energy", report.ground_energy),
        ("ground_gap", report.ground_gap),
        ("entropy_S", report.entropy_S),
        ("concurrence_C", report.concurrence_C),
        ("s_x", report.s_x),
        ("s_p", report.s_p),
        ("K_uncertainty", report.K_uncertainty),
        ("wigner_min", report.wigner_min),
        ("cat_like", report.cat_like),
    ]
    base = str(base_path)
    with open(base + "_report.txt", "w", newline="\n") as fh:
        for key, val in scalars:
            fh.write(f"{key} = {val}\n")
    report.q_grid.write_csv(base + "_q.csv")
    report.w_grid.write_csv(base + "_wigner.csv")
