"""Quantum battery charged through a Wigner-deformed (para-Bose) Lorentzian reservoir.

The charger and battery qubits share a single-excitation reservoir whose
deformation ``nu`` rescales the coupling by ``2 nu + 1``. Amplitudes follow
from a closed-form survival amplitude; energetics and BLP non-Markovianity
are built on top, with independent numerical oracles in
:mod:`parabattery.oracle`.
"""

__version__ = "0.1.0"

from .model import (
    InvalidParamsError,
    SystemParams,
    DerivedConstants,
    RegimeReport,
    compensating_detuning,
    derive_constants,
    spectral_density,
    memory_kernel,
    classify_regime,
)
from .dynamics import (
    UnnormalizedStateError,
    GridError,
    AmplitudePair,
    CHARGER_FULL,
    TimeGrid,
    Trajectory,
    survival_amplitude,
    amplitudes_at,
    steady_state_amplitudes,
    density_matrix,
    reduce_to_battery,
    evolve,
)
from .energetics import (
    QubitHamiltonian,
    EnergeticsReport,
    stored_energy,
    ergotropy_general,
    ergotropy_qubit_diagonal,
    efficiency,
    energetics_along,
)
from .nonmarkovianity import (
    GridTooCoarseWarning,
    InitialPair,
    SearchSpec,
    NonMarkovianityResult,
    trace_distance,
    blp_measure,
    nonmarkovianity_vs_nu,
)
from .linalg import InvalidStateError, check_density_matrix, partial_trace_first

__all__ = [
    "__version__",
    "InvalidParamsError",
    "SystemParams",
    "DerivedConstants",
    "RegimeReport",
    "compensating_detuning",
    "derive_constants",
    "spectral_density",
    "memory_kernel",
    "classify_regime",
    "UnnormalizedStateError",
    "GridError",
    "AmplitudePair",
    "CHARGER_FULL",
    "TimeGrid",
    "Trajectory",
    "survival_amplitude",
    "amplitudes_at",
    "steady_state_amplitudes",
    "density_matrix",
    "reduce_to_battery",
    "evolve",
    "QubitHamiltonian",
    "EnergeticsReport",
    "stored_energy",
    "ergotropy_general",
    "ergotropy_qubit_diagonal",
    "efficiency",
    "energetics_along",
    "GridTooCoarseWarning",
    "InitialPair",
    "SearchSpec",
    "NonMarkovianityResult",
    "trace_distance",
    "blp_measure",
    "nonmarkovianity_vs_nu",
    "InvalidStateError",
    "check_density_matrix",
    "partial_trace_first",
]
