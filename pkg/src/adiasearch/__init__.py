"""Adiabatic quantum search: local schedules, prior-weighted initial states
and Hamiltonian rescaling, with exact 2-D dynamics and dense full-space
checks."""
from .baseline import GroverRun, grover_optimal_iterations, grover_simulate
from .dynamics import (
    ConvergenceError,
    EvolutionResult,
    QuantumState2D,
    evolve,
    evolve_full,
    fidelity_sweep,
)
from .model import (
    InitialState,
    PriorPartition,
    build_prior_state,
    marked_amplitude,
    parse_partition,
    uniform_state,
)
from .schedule import (
    AdiabaticityReport,
    Schedule,
    adiabaticity_report,
    local_time_of_s,
    mean_time,
    s_of_t,
    theorem2_time,
    total_time,
)
from .spectral import (
    EffectiveHamiltonian,
    SpectralSample,
    eigenvalues,
    full_matrix,
    gap,
    matrix_2d,
)

__version__ = "0.1.0"
