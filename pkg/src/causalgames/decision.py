"""Single-agent causal decision problems.

The decision maker holds a belief over a finite family of candidate causal
models and scores an action by its interventional expected utility,
averaged over that belief::

    EU(a) = sum_c u(c) * sum_g P_g(c | do(a)) * belief(g)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from .cgm import CausalModel, Value, interventional_query, validate
from .errors import ImpossibleObservationError, ModelValidationError, QueryError
from .settings import tolerance


@dataclass(frozen=True)
class ModelFamily:
    """Ordered candidate models over identical variables.

    ``action_variables`` has one entry for a decision problem and one entry
    per player for a game.
    """

    models: tuple[CausalModel, ...]
    action_variables: tuple[str, ...]
    consequence_variable: str

    def __post_init__(self):
        object.__setattr__(self, "models", tuple(self.models))
        object.__setattr__(self, "action_variables", tuple(self.action_variables))
        problems = family_violations(self)
        if problems:
            raise ModelValidationError(problems)

    def __len__(self) -> int:
        return len(self.models)

    @property
    def action_variable(self) -> str:
        if len(self.action_variables) != 1:
            raise QueryError("family has more than one action variable")
        return self.action_variables[0]

    def domain(self, name: str) -> tuple:
        return self.models[0].domain(name)

    @property
    def consequences(self) -> tuple:
        return self.domain(self.consequence_variable)


def family_violations(family: ModelFamily) -> list[str]:
    problems = []
    if not family.models:
        return ["family: at least one model required"]
    for k, model in enumerate(family.models):
        problems += [f"model {k}: {p}" for p in validate(model)]
    if problems:
        return problems
    reference = family.models[0]
    signature = {v.name: v.domain for v in reference.variables}
    for k, model in enumerate(family.models[1:], start=1):
        if signature != {v.name: v.domain for v in model.variables}:
            problems.append(f"model {k}: variables or domains differ from model 0")
    names = set(reference.names)
    roles = [*family.action_variables, family.consequence_variable]
    for name in roles:
        if name not in names:
            problems.append(f"family: unknown variable {name!r}")
    if len(set(family.action_variables)) != len(family.action_variables):
        problems.append("family: action variables must be distinct")
    if family.consequence_variable in family.action_variables:
        problems.append("family: consequence variable cannot be an action variable")
    if not family.action_variables:
        problems.append("family: at least one action variable required")
    return problems


@dataclass(frozen=True)
class BeliefState:
    weights: tuple[float, ...]

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if not weights:
            raise ModelValidationError("belief: empty weight vector")
        if any(not math.isfinite(w) or w < 0 for w in weights):
            raise ModelValidationError("belief: weights must be finite and non-negative")
        s = math.fsum(weights)
        if abs(s - 1.0) > tolerance():
            raise ModelValidationError(f"belief: weights sum to {s:.12g}")

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, k: int) -> float:
        return self.weights[k]

    @classmethod
    def uniform(cls, n: int) -> "BeliefState":
        return cls((1.0 / n,) * n)

    @classmethod
    def point_mass(cls, n: int, k: int) -> "BeliefState":
        return cls(tuple(1.0 if i == k else 0.0 for i in range(n)))


def utility_vector(utility: Mapping[Value, float], consequences: Sequence[Value]) -> tuple[float, ...]:
    """Align a utility mapping with the consequence domain, checking totality."""
    missing = [c for c in consequences if c not in utility]
    if missing:
        raise ModelValidationError(f"utility: no value for consequence(s) {missing!r}")
    extra = [c for c in utility if c not in set(consequences)]
    if extra:
        raise ModelValidationError(f"utility: unknown consequence(s) {extra!r}")
    vec = tuple(float(utility[c]) for c in consequences)
    if not all(math.isfinite(u) for u in vec):
        raise ModelValidationError("utility: values must be finite")
    return vec


@dataclass(frozen=True)
class CausalDecisionProblem:
    family: ModelFamily
    prior: BeliefState
    utility: Mapping[Hashable, float]

    def __post_init__(self):
        if len(self.prior) != len(self.family):
            raise ModelValidationError(
                f"prior has {len(self.prior)} weights for {len(self.family)} models"
            )
        self.family.action_variable
        utility_vector(self.utility, self.family.consequences)

    @property
    def actions(self) -> tuple:
        return self.family.domain(self.family.action_variable)


# -- numeric kernel shared with the game modules ---------------------------


def mixture(weights: Sequence[float], dists: Sequence[Sequence[float]]) -> list[float]:
    """Belief-weighted average of per-model distributions, skipping zero weights."""
    out = [0.0] * len(dists[0])
    for w, dist in zip(weights, dists):
        if w == 0.0:
            continue
        for j, p in enumerate(dist):
            out[j] += w * p
    return out


def inner(utility: Sequence[float], dist: Sequence[float]) -> float:
    return math.fsum(u * p for u, p in zip(utility, dist))


def first_argmax(values: Sequence[float]) -> int:
    """Index of the first value within tolerance of the maximum."""
    best = max(values)
    tol = tolerance()
    return next(i for i, v in enumerate(values) if v >= best - tol)


def bayes_update(prior: BeliefState, likelihoods: Sequence[float]) -> BeliefState:
    joint = [w * lik for w, lik in zip(prior.weights, likelihoods)]
    total = math.fsum(joint)
    if total <= 0.0:
        raise ImpossibleObservationError("observation impossible under all believed models")
    return BeliefState(tuple(j / total for j in joint))


# -- operations ------------------------------------------------------------


def _intervention(family: ModelFamily, action) -> dict:
    if isinstance(action, Mapping):
        return dict(action)
    return {family.action_variable: action}


def interventional_consequences(family: ModelFamily, action) -> list[tuple[float, ...]]:
    """P_g(. | do(action)) over the consequence domain, one row per model."""
    iv = _intervention(family, action)
    target = family.consequence_variable
    return [tuple(interventional_query(m, iv, target).values()) for m in family.models]


def _check_action(cdp: CausalDecisionProblem, action) -> None:
    if action not in cdp.actions:
        raise QueryError(f"unknown action {action!r} for {cdp.family.action_variable!r}")


def causal_expected_utility(cdp: CausalDecisionProblem, action) -> float:
    _check_action(cdp, action)
    dists = interventional_consequences(cdp.family, action)
    u = utility_vector(cdp.utility, cdp.family.consequences)
    return inner(u, mixture(cdp.prior.weights, dists))


def expected_utility_table(cdp: CausalDecisionProblem) -> dict:
    return {a: causal_expected_utility(cdp, a) for a in cdp.actions}


def optimal_action(cdp: CausalDecisionProblem) -> tuple:
    """Return ``(action, EU)`` maximizing EU; ties go to the earliest declared action."""
    actions = cdp.actions
    values = [causal_expected_utility(cdp, a) for a in actions]
    k = first_argmax(values)
    return actions[k], values[k]


def update_beliefs(family: ModelFamily, prior: BeliefState, action, observed) -> BeliefState:
    """Bayes posterior over models after seeing ``observed`` under ``do(action)``.

    ``action`` is a value of the family's single action variable, or a full
    intervention mapping (used for games, where every player's action is set).
    """
    if len(prior) != len(family):
        raise ModelValidationError("belief length does not match family")
    k = family.models[0].value_index(family.consequence_variable, observed)
    likelihoods = [dist[k] for dist in interventional_consequences(family, action)]
    return bayes_update(prior, likelihoods)
