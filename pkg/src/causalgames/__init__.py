"""Causal decision problems and causal games on discrete causal graphical models."""

__version__ = "0.1.0"

from .bayesian import (
    BayesianCausalGame,
    BayesianPlayer,
    InducedGame,
    SignalFunction,
    bayesian_causal_equilibria,
    build_induced_game,
    interim_utility,
    posterior_given_signal,
)
from .cgm import (
    CausalModel,
    Variable,
    interventional_query,
    joint_probability,
    mutilate,
    observational_query,
    validate,
)
from .decision import (
    BeliefState,
    CausalDecisionProblem,
    ModelFamily,
    causal_expected_utility,
    optimal_action,
    update_beliefs,
)
from .errors import (
    CausalGameError,
    ConfigError,
    ImpossibleObservationError,
    ModelValidationError,
    NullEventError,
    ParseError,
    QueryError,
    SearchSpaceTooLarge,
)
from .games import (
    CausalGame,
    EquilibriumReport,
    PlayerSpec,
    best_response,
    causal_utility,
    consequence_distribution,
    enumerate_equilibria,
    is_causal_nash_equilibrium,
)
from .sim import SimConfig, SimTrace, convergence_report, run_simulation

__all__ = [
    "bayesian_causal_equilibria",
    "BayesianCausalGame",
    "BayesianPlayer",
    "BeliefState",
    "best_response",
    "build_induced_game",
    "causal_expected_utility",
    "causal_utility",
    "CausalDecisionProblem",
    "CausalGame",
    "CausalGameError",
    "CausalModel",
    "ConfigError",
    "consequence_distribution",
    "convergence_report",
    "enumerate_equilibria",
    "EquilibriumReport",
    "ImpossibleObservationError",
    "InducedGame",
    "interim_utility",
    "interventional_query",
    "is_causal_nash_equilibrium",
    "joint_probability",
    "ModelFamily",
    "ModelValidationError",
    "mutilate",
    "NullEventError",
    "observational_query",
    "optimal_action",
    "ParseError",
    "PlayerSpec",
    "posterior_given_signal",
    "QueryError",
    "run_simulation",
    "SearchSpaceTooLarge",
    "SignalFunction",
    "SimConfig",
    "SimTrace",
    "update_beliefs",
    "validate",
    "Variable",
]
