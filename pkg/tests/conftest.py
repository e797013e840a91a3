from pathlib import Path

import numpy as np
import pytest

from causalgames import (
    BayesianCausalGame,
    BayesianPlayer,
    BeliefState,
    CausalGame,
    CausalModel,
    ModelFamily,
    PlayerSpec,
    SignalFunction,
)
from causalgames.generators import random_model

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"


def barometer_model():
    return CausalModel.build(
        {"Storm": (0, 1), "Barometer": ("up", "down")},
        parents={"Barometer": ("Storm",)},
        cpts={
            "Storm": (0.8, 0.2),
            "Barometer": {0: (0.9, 0.1), 1: (0.1, 0.9)},
        },
    )


def chain_model(p_a=0.3, p_c_given_a1=0.9, p_c_given_a0=0.2):
    return CausalModel.build(
        {"A": (0, 1), "C": (0, 1)},
        parents={"C": ("A",)},
        cpts={
            "A": (1 - p_a, p_a),
            "C": {0: (1 - p_c_given_a0, p_c_given_a0), 1: (1 - p_c_given_a1, p_c_given_a1)},
        },
    )


OUTCOMES = ("ss", "sc", "cs", "cc")
PD_PAYOFF = {
    0: {"ss": 3, "sc": 0, "cs": 5, "cc": 1},
    1: {"ss": 3, "sc": 5, "cs": 0, "cc": 1},
}


def outcome_model():
    """Two actions silent/confess; Outcome records the joint choice deterministically."""
    acts = ("silent", "confess")
    rows = {}
    for a1 in acts:
        for a2 in acts:
            label = a1[0] + a2[0]
            rows[(a1, a2)] = tuple(1.0 if o == label else 0.0 for o in OUTCOMES)
    return CausalModel.build(
        {"P1": acts, "P2": acts, "Outcome": OUTCOMES},
        parents={"Outcome": ("P1", "P2")},
        cpts={"P1": (0.5, 0.5), "P2": (0.5, 0.5), "Outcome": rows},
    )


def prisoners_dilemma():
    model = outcome_model()
    players = [
        PlayerSpec("P1", PD_PAYOFF[0], BeliefState((1.0,))),
        PlayerSpec("P2", PD_PAYOFF[1], BeliefState((1.0,))),
    ]
    return CausalGame.from_models([model], "Outcome", players)


def matching_pennies():
    acts = ("heads", "tails")
    model = CausalModel.build(
        {"P1": acts, "P2": acts, "Match": (0, 1)},
        parents={"Match": ("P1", "P2")},
        cpts={
            "P1": (0.5, 0.5),
            "P2": (0.5, 0.5),
            "Match": {(a, b): ((0.0, 1.0) if a == b else (1.0, 0.0)) for a in acts for b in acts},
        },
    )
    players = [
        PlayerSpec("P1", {0: 0.0, 1: 1.0}, BeliefState((1.0,))),
        PlayerSpec("P2", {0: 1.0, 1: 0.0}, BeliefState((1.0,))),
    ]
    return CausalGame.from_models([model], "Match", players)


def two_model_decision_models():
    """Action A in {a0, a1}, binary outcome C.  Under both models do(a0) gives
    P(C=1)=0.5; do(a1) gives 0.7 in model 0 and 0.3 in model 1."""

    def make(p):
        return CausalModel.build(
            {"A": ("a0", "a1"), "C": (0, 1)},
            parents={"C": ("A",)},
            cpts={"A": (0.5, 0.5), "C": {"a0": (0.5, 0.5), "a1": (1 - p, p)}},
        )

    return [make(0.7), make(0.3)]


def learning_game(prior=(0.5, 0.5)):
    """Single player choosing A to make C=1 under the two models above."""
    player = PlayerSpec("A", {0: 0.0, 1: 1.0}, BeliefState(tuple(prior)))
    return CausalGame.from_models(two_model_decision_models(), "C", [player])


# -- Bayesian games over random state models ------------------------------

DOMAINS = {"A1": (0, 1), "A2": (0, 1), "Z": (0, 1), "C": ("c0", "c1", "c2")}
ORDER = ["A1", "A2", "Z", "C"]


def random_states(rng, n_states):
    return tuple(random_model(rng, DOMAINS, edge_prob=0.8, order=ORDER) for _ in range(n_states))


def two_type_game(seed):
    """2 players, 2 types each, 2 actions each, 3 candidate models."""
    rng = np.random.default_rng(seed)
    models = random_states(rng, 3)
    family = ModelFamily(models, ("A1", "A2"), "C")
    specs = [
        ("A1", SignalFunction(("lo", "hi"), ("lo", "hi", "hi"))),
        ("A2", SignalFunction(("u", "v"), ("u", "u", "v"))),
    ]
    players = []
    for var, sig in specs:
        prior = BeliefState(tuple(float(w) for w in rng.dirichlet([2, 2, 2])))
        utility = {c: float(rng.normal()) for c in DOMAINS["C"]}
        players.append(BayesianPlayer(var, utility, prior, sig))
    return BayesianCausalGame(family, tuple(players))


def oracle_view(game):
    return [
        {
            "var": p.action_variable,
            "actions": game.actions(i),
            "utility": dict(p.utility),
            "prior": p.prior.weights,
            "types": p.signal.types,
            "signal": p.signal.mapping,
        }
        for i, p in enumerate(game.players)
    ]


def constant_signal_game(rng, n_states=2):
    models = random_states(rng, n_states)
    family = ModelFamily(models, ("A1", "A2"), "C")
    players = tuple(
        BayesianPlayer(
            var,
            {c: float(rng.normal()) for c in DOMAINS["C"]},
            BeliefState(tuple(float(w) for w in rng.dirichlet(np.ones(n_states)))),
            SignalFunction.constant(n_states, "only"),
        )
        for var in ("A1", "A2")
    )
    return BayesianCausalGame(family, players)


@pytest.fixture
def barometer():
    return barometer_model()


@pytest.fixture
def pd_game():
    return prisoners_dilemma()


@pytest.fixture
def pennies():
    return matching_pennies()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
