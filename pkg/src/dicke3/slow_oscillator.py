"""Adiabatic approximation for fast qubits (E_q >> w0, lambda): effective potentials.

With the oscillator frozen at the dimensionless position X (x = sqrt(2/(m w0)) X,
so that g x = 2 lam X), the three-qubit energies split into four branches

    E_s(X) = s * sqrt(delta^2/4 + (2 lam X - epsilon/2)^2),  s in {-3,-1,+1,+3}

with multiplicities (1, 3, 3, 1).  Adding the bare well gives the effective
potentials V_s(X) = w0 X^2 + E_s(X), all in units of hbar w0.

Above the critical couplings lam_c(-3) = sqrt(w0 E_q / 12) and
lam_c(-1) = sqrt(w0 E_q / 4) the corresponding branch turns into a double well;
its geometry (minima, depths, curvatures) is computed in closed form at
epsilon = 0 and by bracketed golden-section minimization otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .core import ParameterError, SystemParams

__all__ = [
    "BRANCHES",
    "BRANCH_MULTIPLICITIES",
    "BranchEnergies",
    "qubit_branch_energies",
    "effective_potential",
    "potential_derivative",
    "EffectivePotentialProfile",
    "potential_profile",
    "write_potential_csv",
    "HarmonicExpansion",
    "harmonic_expansion",
    "critical_coupling",
    "WellGeometry",
    "well_geometry",
    "AsymmetricWellReport",
    "asymmetric_well_report",
]

BRANCHES = (-3, -1, +1, +3)
BRANCH_MULTIPLICITIES = {-3: 1, -1: 3, +1: 3, +3: 1}

_GOLDEN_XATOL = 1e-12


def _check_branch(branch):
    if branch not in BRANCHES:
        raise ParameterError(f"branch must be one of {BRANCHES}, got {branch!r}")


def _hyperbola(x, params):
    """sqrt(delta^2/4 + (2 lam X - epsilon/2)^2)."""
    return np.sqrt(0.25 * params.delta**2 + (2.0 * params.lam * x - 0.5 * params.epsilon) ** 2)


@dataclass(frozen=True)
class BranchEnergies:
    """The four branch energies at one position, lowest first."""

    minus3: float
    minus1: float
    plus1: float
    plus3: float
    multiplicities: tuple = (1, 3, 3, 1)

    def as_array(self) -> np.ndarray:
        return np.array([self.minus3, self.minus1, self.plus1, self.plus3])


def qubit_branch_energies(x: float, params: SystemParams) -> BranchEnergies:
    """Adiabatic qubit energies at frozen oscillator position X."""
    h = float(_hyperbola(x, params))
    return BranchEnergies(minus3=-3.0 * h, minus1=-h, plus1=h, plus3=3.0 * h)


def effective_potential(x, branch: int, params: SystemParams):
    """V_branch(X) = w0 X^2 + branch * hyperbola(X); accepts arrays."""
    _check_branch(branch)
    x = np.asarray(x, dtype=float)
    v = params.w0 * x**2 + branch * _hyperbola(x, params)
    return v if v.ndim else float(v)


def potential_derivative(x, branch: int, params: SystemParams):
    """Analytic dV/dX for the given branch; accepts arrays."""
    _check_branch(branch)
    x = np.asarray(x, dtype=float)
    u = 2.0 * params.lam * x - 0.5 * params.epsilon
    dv = 2.0 * params.w0 * x + branch * 2.0 * params.lam * u / _hyperbola(x, params)
    return dv if dv.ndim else float(dv)


@dataclass(frozen=True)
class EffectivePotentialProfile:
    """Sampled effective potential of one branch."""

    branch: int
    x_grid: np.ndarray
    v_values: np.ndarray
    params: SystemParams


def potential_profile(x_grid, branch: int, params: SystemParams) -> EffectivePotentialProfile:
    x_grid = np.asarray(x_grid, dtype=float)
    return EffectivePotentialProfile(
        branch=branch,
        x_grid=x_grid,
        v_values=effective_potential(x_grid, branch, params),
        params=params,
    )


def write_potential_csv(path, x_grid, params: SystemParams) -> None:
    """Write all four branches as `X,V_minus3,V_minus1,V_plus1,V_plus3`."""
    x_grid = np.asarray(x_grid, dtype=float)
    cols = [effective_potential(x_grid, b, params) for b in BRANCHES]
    lines = ["X,V_minus3,V_minus1,V_plus1,V_plus3"]
    for i, x in enumerate(x_grid):
        lines.append(",".join([f"{x:.11e}"] + [f"{c[i]:.11e}" for c in cols]))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


@dataclass(frozen=True)
class HarmonicExpansion:
    """Quadratic expansion of one branch potential around its shifted minimum.

    In X units the expansion reads (freq_sq / w0) (X - shift)^2 + offset with
    freq_sq the renormalized squared frequency.
    """

    branch: int
    freq_sq: float
    shift: float
    offset: float


def harmonic_expansion(branch: int, params: SystemParams) -> HarmonicExpansion:
    """Renormalized frequency, minimum shift and offset of the branch well.

    freq_sq = w0^2 + sign(branch)*|branch| * 4 lam^2 w0 / E_q  (so the -3
    branch softens as w0^2 (1 - (lam/lam_c)^2)); the minimum shifts by
    sign(branch)*|branch| * epsilon lam w0 / (freq_sq E_q) in X, and the
    offset is branch * E_q / 2.  Valid while E_q >> 2 lam |X| over the well.
    """
    _check_branch(branch)
    n_abs, sgn = abs(branch), math.copysign(1.0, branch)
    freq_sq = params.w0**2 + sgn * n_abs * 4.0 * params.lam**2 * params.w0 / params.e_q
    if freq_sq != 0.0:
        shift = sgn * n_abs * params.epsilon * params.lam * params.w0 / (freq_sq * params.e_q)
    else:
        shift = math.inf if params.epsilon else 0.0
    return HarmonicExpansion(
        branch=branch,
        freq_sq=freq_sq,
        shift=shift,
        offset=0.5 * branch * params.e_q,
    )


def critical_coupling(branch: int, params: SystemParams):
    """Coupling where the branch's renormalized frequency vanishes.

    lam_c = sqrt(w0 E_q / 12) for branch -3 and sqrt(w0 E_q / 4) for branch
    -1; the +1/+3 branches only stiffen and return None.
    """
    _check_branch(branch)
    if branch > 0:
        return None
    return math.sqrt(params.w0 * params.e_q / (4.0 * abs(branch)))


def _golden_minimum(branch, params, lo, hi):
    """Golden-section minimum of the branch potential inside [lo, hi]."""
    res = minimize_scalar(
        lambda x: effective_potential(x, branch, params),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": _GOLDEN_XATOL},
    )
    return float(res.x)


def _locate_minima(branch, params):
    """All local minima of the branch potential, by derivative sign changes."""
    span = 3.0 * abs(branch) * params.lam / params.w0
    if params.lam > 0:
        span += 0.25 * params.epsilon / params.lam
    span = max(span + 4.0, 8.0)
    grid = np.linspace(-span, span, 4001)
    dv = potential_derivative(grid, branch, params)
    minima = []
    for i in range(len(grid) - 1):
        if dv[i] < 0.0 <= dv[i + 1]:
            minima.append(_golden_minimum(branch, params, grid[i], grid[i + 1]))
    if not minima:
        minima.append(_golden_minimum(branch, params, grid[0], grid[-1]))
    return minima


@dataclass(frozen=True)
class WellGeometry:
    """Minima, depths and curvatures of one branch potential."""

    branch: int
    minima_locations: tuple
    minima_depths: tuple  # V(X_min) - V(0), one per minimum
    curvature_at_minima: tuple  # d^2 V / dX^2
    critical_lambda: float | None
    is_double_well: bool


def _curvature(x, branch, params):
    u = 2.0 * params.lam * x - 0.5 * params.epsilon
    h = float(_hyperbola(x, params))
    lam2 = 4.0 * params.lam**2
    return 2.0 * params.w0 + branch * (lam2 / h - lam2 * u * u / h**3)


def well_geometry(branch: int, params: SystemParams) -> WellGeometry:
    """Well geometry of the branch potential.

    At epsilon = 0 the double-well data is analytic: above threshold the
    minima sit at +/- sqrt(branch^2 lam^2/w0^2 - delta^2/(16 lam^2)), far
    above it X_0(-3) -> +/- 3 lam/w0 and X_0(-1) -> +/- lam/w0, with both
    curvatures approaching 2 w0.  For epsilon > 0 the minima are located
    numerically.  Below threshold a single well at the (shifted) origin is
    returned.
    """
    _check_branch(branch)
    lam_c = critical_coupling(branch, params)
    v0 = effective_potential(0.0, branch, params)

    if params.epsilon == 0.0:
        if lam_c is not None and params.lam > lam_c:
            n_abs = abs(branch)
            x0 = math.sqrt(
                (n_abs * params.lam / params.w0) ** 2
                - params.delta**2 / (16.0 * params.lam**2)
            )
            locs = (-x0, x0)
        else:
            locs = (0.0,)
    else:
        locs = tuple(_locate_minima(branch, params))

    depths = tuple(float(effective_potential(x, branch, params) - v0) for x in locs)
    curvs = tuple(_curvature(x, branch, params) for x in locs)
    return WellGeometry(
        branch=branch,
        minima_locations=locs,
        minima_depths=depths,
        curvature_at_minima=curvs,
        critical_lambda=lam_c,
        is_double_well=len(locs) == 2,
    )


@dataclass(frozen=True)
class AsymmetricWellReport:
    """Bias-split double wells of one branch, deepest first."""

    branch: int
    locations: tuple  # ordered by depth, deepest first
    depths: tuple  # V(X_min) - V(0), deepest first
    favored_sign: int  # sign of X at the global minimum


def asymmetric_well_report(params: SystemParams, branch: int = -3) -> AsymmetricWellReport:
    """Numerically located minima of a negative branch at epsilon > 0.

    The bias term shifts the hyperbola vertex to X = epsilon/(4 lam), which
    deepens the X < 0 well of the negative branches: the favored well sign is
    -1 for any epsilon > 0 (mirror symmetric under epsilon -> -epsilon).
    """
    _check_branch(branch)
    if branch > 0:
        raise ParameterError("asymmetric_well_report applies to the -1/-3 branches")
    locs = _locate_minima(branch, params)
    v0 = effective_potential(0.0, branch, params)
    pairs = sorted(
        ((float(effective_potential(x, branch, params) - v0), float(x)) for x in locs),
    )
    depths = tuple(p[0] for p in pairs)
    locations = tuple(p[1] for p in pairs)
    favored = int(math.copysign(1.0, locations[0])) if locations[0] != 0.0 else 0
    return AsymmetricWellReport(
        branch=branch, locations=locations, depths=depths, favored_sign=favored
    )
