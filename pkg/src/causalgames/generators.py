"""Random instances and encodings used by the test-suite and experiment scripts."""

from __future__ import annotations

import itertools

import numpy as np

from .cgm import CausalModel, Variable
from .decision import BeliefState, CausalDecisionProblem, ModelFamily
from .games import CausalGame, PlayerSpec


def _random_row(rng: np.random.Generator, k: int, zero_prob: float = 0.0) -> tuple[float, ...]:
    row = rng.dirichlet(np.ones(k))
    if zero_prob and k > 1 and rng.random() < zero_prob:
        row[rng.integers(k)] = 0.0
        row = row / row.sum()
    return tuple(float(p) for p in row)


def random_model(
    rng: np.random.Generator,
    domains: dict[str, tuple],
    edge_prob: float = 0.5,
    order: list[str] | None = None,
    zero_prob: float = 0.0,
    forbid: set[tuple[str, str]] = frozenset(),
    force: set[tuple[str, str]] = frozenset(),
) -> CausalModel:
    """Random DAG consistent with ``order`` (shuffled if omitted) and Dirichlet(1) CPT rows.

    Edges in ``force`` are always present and must agree with ``order``.
    """
    names = list(domains)
    if order is None:
        order = [names[i] for i in rng.permutation(len(names))]
    parents: dict[str, tuple[str, ...]] = {}
    for k, child in enumerate(order):
        parents[child] = tuple(
            p for p in order[:k]
            if (p, child) in force or ((p, child) not in forbid and rng.random() < edge_prob)
        )
    cpts = {}
    for name in names:
        keys = list(itertools.product(*(domains[p] for p in parents[name])))
        cpts[name] = {key: _random_row(rng, len(domains[name]), zero_prob) for key in keys}
    return CausalModel(tuple(Variable(n, domains[n]) for n in names), parents, cpts)


def random_binary_model(rng: np.random.Generator, n_vars: int, edge_prob: float = 0.5, **kw) -> CausalModel:
    return random_model(rng, {f"X{i}": (0, 1) for i in range(n_vars)}, edge_prob, **kw)


def random_cdp(
    rng: np.random.Generator,
    n_models: int,
    n_actions: int,
    n_consequences: int,
    n_extra: int = 2,
    direct_effect: bool = True,
) -> CausalDecisionProblem:
    """Decision problem over action ``A``, consequence ``C`` and ``n_extra`` binary covariates.

    With ``direct_effect`` every model has the edge A -> C; otherwise the
    structure is unconstrained and the action may be causally inert.
    """
    domains = {"A": tuple(f"a{i}" for i in range(n_actions)),
               "C": tuple(f"c{i}" for i in range(n_consequences))}
    domains.update({f"Z{i}": (0, 1) for i in range(n_extra)})
    models = []
    for _ in range(n_models):
        order = [list(domains)[i] for i in rng.permutation(len(domains))]
        if direct_effect and order.index("A") > order.index("C"):
            i, j = order.index("A"), order.index("C")
            order[i], order[j] = order[j], order[i]
        force = {("A", "C")} if direct_effect else set()
        models.append(random_model(rng, domains, order=order, force=force))
    models = tuple(models)
    prior = BeliefState(tuple(float(w) for w in rng.dirichlet(np.ones(n_models))))
    utility = {c: float(rng.normal()) for c in domains["C"]}
    return CausalDecisionProblem(ModelFamily(models, ("A",), "C"), prior, utility)


def profile_label(profile) -> str:
    return ",".join(map(str, profile))


def game_from_payoffs(payoffs: np.ndarray) -> CausalGame:
    """Encode a normal-form game as a one-model causal game.

    ``payoffs[i][a_1, ..., a_N]`` is player ``i``'s payoff.  The consequence
    variable ``C`` records the whole profile deterministically, and player
    ``i``'s utility of consequence ``a`` is that player's payoff at ``a``.
    """
    payoffs = np.asarray(payoffs)
    n = payoffs.shape[0]
    shape = payoffs.shape[1:]
    actions = [tuple(range(m)) for m in shape]
    profiles = list(itertools.product(*actions))
    labels = tuple(profile_label(p) for p in profiles)
    variables = [Variable(f"A{i}", actions[i]) for i in range(n)] + [Variable("C", labels)]
    parents = {"C": tuple(f"A{i}" for i in range(n))}
    cpts = {f"A{i}": {(): (1.0 / len(actions[i]),) * len(actions[i])} for i in range(n)}
    cpts["C"] = {p: tuple(1.0 if j == k else 0.0 for j in range(len(profiles))) for k, p in enumerate(profiles)}
    model = CausalModel(tuple(variables), parents, cpts)
    players = [
        PlayerSpec(f"A{i}", {profile_label(p): float(payoffs[i][p]) for p in profiles}, BeliefState((1.0,)))
        for i in range(n)
    ]
    return CausalGame.from_models([model], "C", players)
