"""Simulation of photon-spin circuits for the m-th roots of SWAP and Fredkin gates."""

from .circuits import (
    CircuitRun,
    GateSpec,
    Mode,
    OutcomeRecord,
    branch_operators,
    run_circuit,
    run_cswap_circuit,
    run_swap_circuit,
    target_unitary,
    trace_checkpoints,
    verify_gate,
)
from .emitter import (
    EmitterParams,
    Incidence,
    LeakConvention,
    ScatterCoefficients,
    ideal_round_matrix,
    realistic_round_matrix,
    scatter_coefficients,
)
from .hilbert import GateKind, HybridState, Pol, SpinPreparation
from .metrics import (
    FidelityConvention,
    PointMetrics,
    SweepGrid,
    point_metrics,
    quadrature_convergence,
    sweep,
)

__all__ = [
    "CircuitRun",
    "EmitterParams",
    "FidelityConvention",
    "GateKind",
    "GateSpec",
    "HybridState",
    "Incidence",
    "LeakConvention",
    "Mode",
    "OutcomeRecord",
    "PointMetrics",
    "Pol",
    "ScatterCoefficients",
    "SpinPreparation",
    "SweepGrid",
    "branch_operators",
    "ideal_round_matrix",
    "point_metrics",
    "quadrature_convergence",
    "realistic_round_matrix",
    "run_circuit",
    "run_cswap_circuit",
    "run_swap_circuit",
    "scatter_coefficients",
    "sweep",
    "target_unitary",
    "trace_checkpoints",
    "verify_gate",
]
