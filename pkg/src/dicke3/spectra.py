"""Eigendecomposition, coupling sweeps, degeneracy profiles and truncation control.

Level curves are tracked by sorted index across a sweep (crossings show up as
kinks, they are not adiabatically continued).  Degenerate levels are always
counted with multiplicity.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import HERMITICITY_ATOL, HermitianOperator, ParameterError, SystemParams, TruncationError
from .hamiltonian import build_full_hamiltonian

__all__ = [
    "SpectrumTable",
    "DegeneracyProfile",
    "eigendecompose",
    "spectrum_sweep",
    "degeneracy_profile",
    "certify_truncation",
    "DEGENERACY_TOL_FACTOR",
]

#: default degeneracy tolerance, in units of w0
DEGENERACY_TOL_FACTOR = 1e-6

#: n_max candidates tried by certify_truncation (doubling schedule, capped)
TRUNCATION_SCHEDULE = (20, 40, 80, 160, 320, 400)

_certify_cache: dict = {}


@dataclass(frozen=True)
class SpectrumTable:
    """k lowest levels on a coupling grid, all at one certified truncation."""

    lambda_grid: np.ndarray
    levels: np.ndarray  # shape (len(lambda_grid), k), each row ascending
    n_max_used: int
    params_base: SystemParams

    def write_csv(self, path, source: str | None = None) -> None:
        """Write `lambda,E1,...,Ek` rows with 12 significant digits, LF endings."""
        k = self.levels.shape[1]
        header = "lambda," + ",".join(f"E{i + 1}" for i in range(k))
        if source is not None:
            header += ",source"
        lines = [header]
        for lam, row in zip(self.lambda_grid, self.levels):
            cells = [f"{lam:.11e}"] + [f"{e:.11e}" for e in row]
            if source is not None:
                cells.append(source)
            lines.append(",".join(cells))
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")


@dataclass(frozen=True)
class DegeneracyProfile:
    """Multiplicities of quasi-degenerate level clusters, lowest first."""

    multiplicities: tuple
    tolerance: float

    @property
    def total_levels(self) -> int:
        return sum(self.multiplicities)


def eigendecompose(h, k: int | None = None):
    """k lowest eigenpairs of a Hermitian matrix (ascending eigenvalues).

    Accepts a HermitianOperator or a raw ndarray; raw input is rejected if it
    is not Hermitian.  Real symmetric input is detected and solved in real
    arithmetic.  Returns (eigenvalues, eigenvectors) with eigenvectors as
    columns.
    """
    if isinstance(h, HermitianOperator):
        m = h.matrix
    else:
        m = np.asarray(h)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ParameterError(f"expected a square matrix, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > max(HERMITICITY_ATOL, 1e-12 * np.max(np.abs(m))):
            raise ParameterError("eigendecompose requires a Hermitian matrix")
    if np.iscomplexobj(m) and not m.imag.any():
        m = m.real
    vals, vecs = scipy.linalg.eigh(m)
    if k is not None:
        vals, vecs = vals[:k], vecs[:, :k]
    return vals, vecs


def eigenvalues(h, k: int | None = None) -> np.ndarray:
    """Like eigendecompose but discards the eigenvectors."""
    vals, _ = eigendecompose(h, k)
    return vals


def degeneracy_profile(levels, tol: float) -> DegeneracyProfile:
    """Greedy clustering of sorted levels: a gap < tol continues the cluster."""
    levels = np.asarray(levels, dtype=float)
    if levels.size and np.any(np.diff(levels) < -1e-12):
        raise ParameterError("degeneracy_profile expects ascending input")
    mult = []
    for i, e in enumerate(levels):
        if i > 0 and e - levels[i - 1] < tol:
            mult[-1] += 1
        else:
            mult.append(1)
    return DegeneracyProfile(multiplicities=tuple(mult), tolerance=tol)


def _levels_at(params: SystemParams, k: int) -> np.ndarray:
    bundle = build_full_hamiltonian(params)
    return eigenvalues(bundle.h_total, k)


def certify_truncation(params: SystemParams, k: int, rel_tol: float) -> int:
    """Smallest scheduled n_max whose k lowest levels are truncation-stable.

    Stability means every one of the k lowest eigenvalues moves by less than
    rel_tol*w0 when n_max is increased by 20.  Results are cached per
    (params, k, rel_tol).  Raises TruncationError when no n_max <= 400
    suffices.
    """
    if not rel_tol > 0:
        raise ParameterError(f"rel_tol must be > 0, got {rel_tol}")
    key = (params.delta, params.epsilon, params.w0, params.lam, k, rel_tol)
    if key in _certify_cache:
        return _certify_cache[key]

    # fast-forward past candidates that cannot hold the displaced state
    heuristic = (3.0 * params.lam / params.w0) ** 2 + 6.0 * params.lam / params.w0
    last_levels = {}
    for cand in TRUNCATION_SCHEDULE:
        if cand < min(heuristic, TRUNCATION_SCHEDULE[-1]):
            continue
        if 8 * (cand + 1) < k:
            continue
        ref = _levels_at(params.with_(n_max=cand), k)
        probe = _levels_at(params.with_(n_max=cand + 20), k)
        move = np.max(np.abs(ref - probe))
        last_levels[cand] = move
        if move < rel_tol * params.w0:
            _certify_cache[key] = cand
            return cand
    raise TruncationError(
        f"no n_max <= {TRUNCATION_SCHEDULE[-1]} certifies k={k} levels at "
        f"rel_tol={rel_tol} (lam={params.lam}); level movements: {last_levels}",
        suggested_n_max=None,
        offending_lambda=params.lam,
    )


def spectrum_sweep(
    params_base: SystemParams,
    lambda_grid,
    k: int,
    rel_tol: float = 1e-6,
    jobs: int = 1,
) -> SpectrumTable:
    """k lowest levels at every grid coupling, at one shared certified n_max.

    The truncation is certified at the grid points that dominate the Fock-space
    demand (the largest coupling, and the point nearest the critical coupling
    of the fully polarized branch when the grid crosses it).  A certification
    failure aborts the sweep and reports the offending coupling.
    """
    lambda_grid = np.asarray(lambda_grid, dtype=float)
    if lambda_grid.size == 0:
        raise ParameterError("lambda_grid must be nonempty")
    if np.any(np.diff(lambda_grid) <= 0) and lambda_grid.size > 1:
        raise ParameterError("lambda_grid must be strictly ascending")

    lam_c = np.sqrt(params_base.w0 * params_base.e_q / 12.0)
    probes = {float(lambda_grid[-1])}
    if lambda_grid[0] < lam_c < lambda_grid[-1]:
        probes.add(float(lambda_grid[np.argmin(np.abs(lambda_grid - lam_c))]))
    n_max = 1
    for lam in sorted(probes, reverse=True):
        try:
            n_max = max(n_max, certify_truncation(params_base.with_(lam=lam), k, rel_tol))
        except TruncationError as exc:
            raise TruncationError(
                f"spectrum sweep aborted: truncation infeasible at lambda={lam}",
                offending_lambda=lam,
            ) from exc

    point_params = [params_base.with_(lam=float(lam), n_max=n_max) for lam in lambda_grid]
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_levels_at, point_params, [k] * len(point_params)))
    else:
        rows = [_levels_at(p, k) for p in point_params]
    return SpectrumTable(
        lambda_grid=lambda_grid,
        levels=np.array(rows),
        n_max_used=n_max,
        params_base=params_base,
    )
