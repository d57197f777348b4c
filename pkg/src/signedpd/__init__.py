"""Evolutionary prisoner's dilemma on signed networks.

Simulation of co-evolving cooperation and tie signs, plus exact Markov
chain analysis of every signed dyad and triad configuration.
"""

from .chains import (
    DominanceMatrix,
    InvasionOutcome,
    RobustnessReport,
    TransitionGraph,
    TypeProjection,
    absorbing_states,
    absorption_probabilities,
    build_dyad_chain,
    build_triad_chain,
    dominance_matrix,
    mutant_robustness,
    pairwise_dominance_table,
    project_types,
    step_distribution,
)
from .config import ConfigError, ExperimentConfig, SweepSpec, load_config
from .core import backend_name
from .dotexport import export_dot
from .dynamics import (
    Mode,
    ModelParams,
    NoSelectableUnitsError,
    RunResult,
    RunState,
    apply_invasion,
    is_absorbing,
    run,
    select_unit,
    step,
    update_sign,
)
from .games import (
    Action,
    DEFAULT_PAYOFFS,
    Dominance,
    PayoffMatrix,
    Sign,
    StrategyType,
    pairwise_dominance,
    play_dyad,
    play_triad,
    resolve_action,
)
from .motifs import (
    MotifState,
    enumerate_dyad_states,
    enumerate_triad_states,
)
from .network import (
    GraphSpec,
    SignedNetwork,
    TriangleIndex,
    build_network,
    enumerate_triangles,
)
from .rng import SplitMix64, derive_seeds

__version__ = "0.1.0"
