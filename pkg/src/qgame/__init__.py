"""Quantized prisoner's dilemma games under the EWL protocol.

State-vector simulation of the two-player entangling circuit and its
three-player Bayesian extension, brute-force pure-strategy Nash
equilibrium search over discretized SU(2) strategy grids, equilibrium
classification by phase relationship, and (p, gamma) phase-diagram
sweeps.
"""

from .circuits import (
    ControlSpec,
    StrategyParams,
    bayesian_payoffs_circuit,
    bayesian_payoffs_full_circuit,
    bayesian_payoffs_mixture,
    control_for_probability,
    entangler,
    evolve_bayesian_circuit,
    evolve_two_player,
    no_signaling_check,
    payoff_expectation,
    strategy_unitary,
)
from .equilibrium import (
    EquilibriumClass,
    EquilibriumRecord,
    bayesian_tables,
    best_responses,
    classify,
    find_ne_bayesian,
    find_ne_bayesian_circuit,
    find_ne_two_player,
    two_player_tables,
    verify_ne,
)
from .games import (
    BayesianGame,
    TwoPlayerGame,
    builtin_bayesian,
    builtin_da,
    builtin_pd,
    classical_bayesian_ne,
    classical_pure_ne,
)
from .linalg import apply, dagger, embed, kron, phase_equal
from .serialize import ConfigError, emit, load_game, load_result
from .strategies import (
    DEFAULT_GRID,
    GridSteps,
    StrategySet,
    canonicalize,
    enumerate_strategies,
    pauli_label,
)
from .sweep import (
    CellResult,
    RegionSummary,
    SweepResult,
    SweepSpec,
    gamma_grid,
    p_grid,
    run_sweep,
    summarize_regions,
)

__version__ = "0.1.0"
