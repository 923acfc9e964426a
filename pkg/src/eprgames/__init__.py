"""Three-player quantum games in the EPR setting, computed with a real
multiparticle Clifford algebra and checked against a complex-vector oracle."""

from .clifford import Blade, CliffordAlgebra, Multivector, bivector_exp, correlators, get_algebra
from .equilibrium import (
    Axis,
    NEResult,
    PhaseDiagram,
    equilibria,
    is_ne,
    max_payoff_search,
    mixed_ne_symmetric,
    pd_transition_threshold,
    pure_ne_enumerate,
    sweep,
)
from .games import (
    EmbeddingConfig,
    GameMatrix,
    StrategyProfile,
    canonical_embedding,
    coefficients,
    payoff_mixed,
    prisoners_dilemma,
)
from .measurement import MeasurementConfig, OutcomeDistribution, distribution, overlap_probability
from .oracle import oracle_distribution
from .states import GHZ, W, EulerRotor, GeneralPure, GeneralSymmetric, InvertedW, StateSpec, realize_state

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "Blade",
    "CliffordAlgebra",
    "EmbeddingConfig",
    "EulerRotor",
    "GHZ",
    "GameMatrix",
    "GeneralPure",
    "GeneralSymmetric",
    "InvertedW",
    "MeasurementConfig",
    "Multivector",
    "NEResult",
    "OutcomeDistribution",
    "PhaseDiagram",
    "StateSpec",
    "StrategyProfile",
    "W",
    "bivector_exp",
    "canonical_embedding",
    "coefficients",
    "correlators",
    "distribution",
    "equilibria",
    "get_algebra",
    "is_ne",
    "max_payoff_search",
    "mixed_ne_symmetric",
    "oracle_distribution",
    "overlap_probability",
    "payoff_mixed",
    "pd_transition_threshold",
    "prisoners_dilemma",
    "pure_ne_enumerate",
    "realize_state",
    "sweep",
]
