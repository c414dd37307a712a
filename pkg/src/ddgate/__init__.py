"""ddgate - dynamical-decoupling protection of two-qubit gates.

Symbolic Pauli/toggling-frame checks plus a seeded Monte Carlo simulator of
gate fidelity under stochastic single- and two-qubit errors.

Example:
    from ddgate import ExperimentConfig, run_experiment

    report = run_experiment(ExperimentConfig(gate="u3", scheme="dd"))
    print(report.mean, report.std)
"""

__version__ = "0.1.0"

# Pauli algebra
from .pauli import (
    PauliString,
    conjugate,
    e1_subset,
    e2_subset,
    error_set,
    multiply,
    to_matrix,
)

# Sequences and schedules
from .sequence import (
    CouplingSchedule,
    DDSequence,
    Interval,
    Pulse,
    build_full_cycle,
    build_nested_cycle,
    build_x_sequence,
    build_z_sequence,
    coupling_schedule,
    first_order_sum,
    simplify,
    toggling_frames,
    verify_schedule,
    xy4_preset,
)

# Hamiltonians
from .model import (
    ErrorCoefficients,
    GateKind,
    H1Params,
    H2Params,
    TransmonParams,
    build_error_hamiltonian,
    build_h1,
    build_h2,
    build_h_trans,
)

# Noise
from .noise import (
    GAUSS1,
    GAUSS2,
    IDEAL,
    Gaussian,
    NoiseTrajectory,
    RngStream,
    sample_trajectory,
)

# Propagation and fidelity
from .engine import (
    PropagationResult,
    Scheme,
    SimulationPlan,
    apply_pulse,
    crosstalk_scenario,
    ideal_gate,
    segment_propagator,
    simulate,
)
from .fidelity import FidelityReport, average_gate_fidelity, random_state, state_fidelity

# Experiments
from .config import ExperimentConfig, dump_config, load_config
from .runner import TrialSession, run_experiment

# Exceptions
from .exceptions import (
    ConfigError,
    DDGateError,
    DimensionError,
    MisalignedTrajectoryError,
    NormalizationError,
    NotHermitianError,
    UnsupportedPulseError,
    VerificationError,
)

__all__ = [
    "__version__",
    # Pauli algebra
    "PauliString",
    "conjugate",
    "e1_subset",
    "e2_subset",
    "error_set",
    "multiply",
    "to_matrix",
    # Sequences and schedules
    "CouplingSchedule",
    "DDSequence",
    "Interval",
    "Pulse",
    "build_full_cycle",
    "build_nested_cycle",
    "build_x_sequence",
    "build_z_sequence",
    "coupling_schedule",
    "first_order_sum",
    "simplify",
    "toggling_frames",
    "verify_schedule",
    "xy4_preset",
    # Hamiltonians
    "ErrorCoefficients",
    "GateKind",
    "H1Params",
    "H2Params",
    "TransmonParams",
    "build_error_hamiltonian",
    "build_h1",
    "build_h2",
    "build_h_trans",
    # Noise
    "GAUSS1",
    "GAUSS2",
    "IDEAL",
    "Gaussian",
    "NoiseTrajectory",
    "RngStream",
    "sample_trajectory",
    # Propagation and fidelity
    "PropagationResult",
    "Scheme",
    "SimulationPlan",
    "apply_pulse",
    "crosstalk_scenario",
    "ideal_gate",
    "segment_propagator",
    "simulate",
    "FidelityReport",
    "average_gate_fidelity",
    "random_state",
    "state_fidelity",
    # Experiments
    "ExperimentConfig",
    "dump_config",
    "load_config",
    "TrialSession",
    "run_experiment",
    # Exceptions
    "ConfigError",
    "DDGateError",
    "DimensionError",
    "MisalignedTrajectoryError",
    "NormalizationError",
    "NotHermitianError",
    "UnsupportedPulseError",
    "VerificationError",
]
