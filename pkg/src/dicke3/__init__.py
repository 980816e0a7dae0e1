"""Numerical laboratory for three qubits ultrastrongly coupled to a harmonic oscillator.

Exact diagonalization in a truncated Fock space, the two adiabatic
approximations (fast oscillator / fast qubits), and the full ground-state
nonclassicality suite (Q and Wigner functions, squeezing, entropy,
concurrence).
"""

__version__ = "0.1.0"

from .core import (
    HermitianOperator,
    ParameterError,
    StateVector,
    SystemParams,
    TruncationError,
    annihilation,
    displacement_operator,
    pauli,
    quadratures,
    tensor,
)
from .diagnostics import (
    DensityMatrix,
    GroundStateReport,
    PhaseSpaceGrid,
    build_report,
    concurrence,
    ground_state,
    partial_trace,
    q_function,
    squeezing_parameters,
    sweep_ground_diagnostics,
    von_neumann_entropy,
    wigner_function,
)
from .fast_oscillator import (
    approx_low_spectrum,
    displaced_overlap,
    effective_qubit_block,
    laguerre_assoc,
    paper_effective_energies,
    sector_energy,
)
from .hamiltonian import HamiltonianBundle, build_full_hamiltonian, parity_operator, permutation_operator
from .slow_oscillator import (
    asymmetric_well_report,
    critical_coupling,
    effective_potential,
    harmonic_expansion,
    qubit_branch_energies,
    well_geometry,
)
from .spectra import (
    DegeneracyProfile,
    SpectrumTable,
    certify_truncation,
    degeneracy_profile,
    eigendecompose,
    spectrum_sweep,
)

__all__ = [
    "__version__",
    "SystemParams",
    "HermitianOperator",
    "StateVector",
    "ParameterError",
    "TruncationError",
    "pauli",
    "annihilation",
    "quadratures",
    "tensor",
    "displacement_operator",
    "HamiltonianBundle",
    "build_full_hamiltonian",
    "parity_operator",
    "permutation_operator",
    "SpectrumTable",
    "DegeneracyProfile",
    "eigendecompose",
    "spectrum_sweep",
    "degeneracy_profile",
    "certify_truncation",
    "laguerre_assoc",
    "displaced_overlap",
    "sector_energy",
    "effective_qubit_block",
    "paper_effective_energies",
    "approx_low_spectrum",
    "qubit_branch_energies",
    "effective_potential",
    "harmonic_expansion",
    "critical_coupling",
    "well_geometry",
    "asymmetric_well_report",
    "DensityMatrix",
    "PhaseSpaceGrid",
    "GroundStateReport",
    "ground_state",
    "partial_trace",
    "q_function",
    "wigner_function",
    "squeezing_parameters",
    "von_neumann_entropy",
    "concurrence",
    "build_report",
    "sweep_ground_diagnostics",
]
