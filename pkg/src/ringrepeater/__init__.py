"""Concatenated ring graph codes for one-way quantum repeaters.

Exact stabilizer simulation of logical fusions and Pauli measurements on
concatenated ring codes under photon loss and depolarizing noise, the
matching closed-form/recursive analytics, and secret-key-rate/cost
optimization of the resulting repeater chain.
"""

from ringrepeater.paulis import Pauli, PauliOp
from ringrepeater.stabilizer import (
    FusionEvent,
    InvalidGraphError,
    MeasurementOutcome,
    PauliFrame,
    StabilizerTableau,
    apply_clifford,
    fuse,
    graph_state,
    measure_pauli,
)
from ringrepeater.ringcodes import (
    GenerationSequence,
    GraphSpec,
    MeasurementPattern,
    RingCodeSpec,
    build_concatenated_ring,
    fusion_strategy,
    generation_sequence,
    pauli_patterns,
    resource_counts,
)
from ringrepeater.analytics import (
    FtFusionStats,
    FusionDistribution,
    PauliMeasStats,
    bare_ring_fusion_success,
    concat_fusion_distribution,
    ft_fusion_stats,
    logical_transmission,
    pauli_meas_stats,
)
from ringrepeater.montecarlo import (
    EmpiricalStats,
    TrialConfig,
    enumerate_small,
    simulate_logical_fusion,
    simulate_pauli_measurement,
)
from ringrepeater.rates import (
    ChannelParams,
    RateReport,
    TimingParams,
    bell_probability,
    end_to_end_error,
    generation_time,
    ring_rate,
    secret_fraction,
)
from ringrepeater.optimizer import (
    OptimizationResult,
    SearchBounds,
    cost,
    optimize,
    sweep,
)

__all__ = [
    "Pauli",
    "PauliOp",
    "StabilizerTableau",
    "PauliFrame",
    "MeasurementOutcome",
    "FusionEvent",
    "InvalidGraphError",
    "graph_state",
    "apply_clifford",
    "measure_pauli",
    "fuse",
    "RingCodeSpec",
    "GraphSpec",
    "GenerationSequence",
    "MeasurementPattern",
    "build_concatenated_ring",
    "resource_counts",
    "generation_sequence",
    "pauli_patterns",
    "fusion_strategy",
    "FusionDistribution",
    "PauliMeasStats",
    "FtFusionStats",
    "bare_ring_fusion_success",
    "concat_fusion_distribution",
    "logical_transmission",
    "pauli_meas_stats",
    "ft_fusion_stats",
    "TrialConfig",
    "EmpiricalStats",
    "simulate_logical_fusion",
    "simulate_pauli_measurement",
    "enumerate_small",
    "ChannelParams",
    "TimingParams",
    "RateReport",
    "bell_probability",
    "secret_fraction",
    "end_to_end_error",
    "generation_time",
    "ring_rate",
    "SearchBounds",
    "OptimizationResult",
    "cost",
    "optimize",
    "sweep",
]

__version__ = "0.1.0"
