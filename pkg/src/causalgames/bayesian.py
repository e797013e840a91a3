"""Bayesian causal games: states of nature are causal models.

Each player observes a deterministic signal ``t_i = tau_i(w)`` of the true
model ``w``, conditions their own prior on the signal preimage, and plays a
type-contingent strategy ``s_i: T_i -> A_i``.  Equilibria are computed on the
induced game whose players are the (player, type) pairs.

The interim consequence distribution of ``(i, t_i)`` under strategy profile
``s`` averages over the models in the preimage of ``t_i``; each model fixes
every co-player's type and hence the full action profile::

    p(c) = sum_{w in tau_i^-1(t_i)} post_i(w) * P_w(c | do(s_1(tau_1(w)), ..., s_N(tau_N(w))))
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from .decision import BeliefState, ModelFamily, inner, utility_vector
from .errors import ModelValidationError, QueryError
from .games import (
    CausalGame,
    CausalPayoffs,
    EquilibriumReport,
    PlayerSpec,
    check_search_space,
    scan_deviations,
)
from .settings import DEFAULT_MAX_PROFILES


@dataclass(frozen=True)
class SignalFunction:
    """Deterministic map from state index to a type in ``types``."""

    types: tuple
    mapping: tuple

    def __post_init__(self):
        object.__setattr__(self, "types", tuple(self.types))
        object.__setattr__(self, "mapping", tuple(self.mapping))

    @classmethod
    def constant(cls, n_states: int, type_=None) -> "SignalFunction":
        return cls((type_,), (type_,) * n_states)

    @classmethod
    def revealing(cls, n_states: int) -> "SignalFunction":
        return cls(tuple(range(n_states)), tuple(range(n_states)))

    def __call__(self, state: int):
        return self.mapping[state]

    def preimage(self, type_) -> tuple[int, ...]:
        return tuple(w for w, t in enumerate(self.mapping) if t == type_)


@dataclass(frozen=True)
class BayesianPlayer:
    action_variable: str
    utility: Mapping[Hashable, float]
    prior: BeliefState
    signal: SignalFunction


def _player_violations(i: int, player: BayesianPlayer, n_states: int) -> list[str]:
    problems = []
    sig = player.signal
    if len(player.prior) != n_states:
        problems.append(f"player {i}: prior has {len(player.prior)} weights for {n_states} states")
    if len(sig.mapping) != n_states:
        problems.append(f"player {i}: signal is not total on the {n_states} states")
    if not sig.types:
        problems.append(f"player {i}: empty type set")
    if len(set(sig.types)) != len(sig.types):
        problems.append(f"player {i}: duplicate types")
    for w, t in enumerate(sig.mapping):
        if t not in sig.types:
            problems.append(f"player {i}: state {w} signals unknown type {t!r}")
    if problems:
        return problems
    for t in sig.types:
        mass = math.fsum(player.prior[w] for w in sig.preimage(t))
        if mass <= 0.0:
            problems.append(f"player {i}: type {t!r} has zero prior mass")
    return problems


@dataclass(frozen=True)
class BayesianCausalGame:
    states: ModelFamily
    players: tuple[BayesianPlayer, ...]

    def __post_init__(self):
        object.__setattr__(self, "players", tuple(self.players))
        if not self.players:
            raise ModelValidationError("game: at least one player required")
        declared = tuple(p.action_variable for p in self.players)
        if declared != self.states.action_variables:
            raise ModelValidationError(
                f"game: player action variables {declared} do not match family {self.states.action_variables}"
            )
        problems = []
        for i, p in enumerate(self.players):
            problems += _player_violations(i, p, len(self.states))
        if problems:
            raise ModelValidationError(problems)
        for p in self.players:
            utility_vector(p.utility, self.states.consequences)

    @property
    def n_players(self) -> int:
        return len(self.players)

    def actions(self, player: int) -> tuple:
        return self.states.domain(self.players[player].action_variable)

    def as_causal_game(self) -> CausalGame:
        """The complete-information game with every player's belief set to their prior."""
        return CausalGame(
            self.states,
            tuple(PlayerSpec(p.action_variable, p.utility, p.prior) for p in self.players),
        )


def posterior_given_signal(game: BayesianCausalGame, player: int, type_) -> BeliefState:
    """Player's prior restricted to the preimage of ``type_`` and renormalized."""
    p = game.players[player]
    if type_ not in p.signal.types:
        raise QueryError(f"player {player}: unknown type {type_!r}")
    support = set(p.signal.preimage(type_))
    if len(support) == len(p.prior):
        # nothing learned; skip renormalizing by a mass that is 1 only up to rounding
        return p.prior
    mass = math.fsum(p.prior[w] for w in support)
    if mass <= 0.0:
        raise ModelValidationError(f"player {player}: type {type_!r} has zero prior mass")
    return BeliefState(tuple(p.prior[w] / mass if w in support else 0.0 for w in range(len(p.prior))))


@dataclass(frozen=True)
class InducedPlayer:
    player: int
    type: Hashable
    actions: tuple
    belief: BeliefState


@dataclass(frozen=True)
class InducedGame:
    source: BayesianCausalGame
    players: tuple[InducedPlayer, ...]

    def flatten(self, strategy: Sequence[Sequence]) -> tuple:
        """Per-player type-indexed strategies -> one action per induced player."""
        return tuple(a for s in strategy for a in s)

    def unflatten(self, flat: Sequence) -> tuple[tuple, ...]:
        out, k = [], 0
        for p in self.source.players:
            n = len(p.signal.types)
            out.append(tuple(flat[k:k + n]))
            k += n
        return tuple(out)

    def label(self, k: int) -> str:
        ip = self.players[k]
        return f"{self.source.players[ip.player].action_variable}[{ip.type}]"


def build_induced_game(game: BayesianCausalGame) -> InducedGame:
    players = []
    for i, p in enumerate(game.players):
        for t in p.signal.types:
            players.append(InducedPlayer(i, t, game.actions(i), posterior_given_signal(game, i, t)))
    return InducedGame(game, tuple(players))


class _InterimPayoffs:
    def __init__(self, induced: InducedGame):
        self.induced = induced
        game = induced.source
        self.game = game
        self.payoffs = CausalPayoffs(game.as_causal_game())
        self.consequences = game.states.consequences
        self._utility = [utility_vector(p.utility, self.consequences) for p in game.players]
        # type index (within each player's type list) signalled by every state
        self.type_index = [
            [p.signal.types.index(p.signal(w)) for w in range(len(game.states))]
            for p in game.players
        ]

    def distribution(self, k: int, strategy: tuple[tuple, ...]) -> list[float]:
        ip = self.induced.players[k]
        out = [0.0] * len(self.consequences)
        for w, weight in enumerate(ip.belief.weights):
            if weight == 0.0:
                continue
            profile = tuple(s[self.type_index[j][w]] for j, s in enumerate(strategy))
            dist = self.payoffs.model_distributions(profile)[w]
            for c, p in enumerate(dist):
                out[c] += weight * p
        return out

    def utility(self, k: int, strategy: tuple[tuple, ...]) -> float:
        return inner(self._utility[self.induced.players[k].player], self.distribution(k, strategy))


def interim_utility(game: BayesianCausalGame, player: int, type_, strategy: Sequence[Sequence]) -> float:
    """Interim causal utility of ``(player, type_)`` under a type-contingent strategy profile.

    ``strategy[j][m]`` is player ``j``'s action when holding their ``m``-th type.
    """
    induced = build_induced_game(game)
    k = next(
        n for n, ip in enumerate(induced.players) if ip.player == player and ip.type == type_
    )
    return _InterimPayoffs(induced).utility(k, tuple(tuple(s) for s in strategy))


def bayesian_causal_equilibria(
    game: BayesianCausalGame, max_profiles: int = DEFAULT_MAX_PROFILES
) -> EquilibriumReport:
    """All pure type-contingent equilibria.

    Report profiles are flat tuples with one action per induced player, in
    player order then type order; use :meth:`InducedGame.unflatten` to recover
    per-player strategies.
    """
    induced = build_induced_game(game)
    size = math.prod(len(ip.actions) for ip in induced.players)
    check_search_space(size, max_profiles)
    interim = _InterimPayoffs(induced)
    n = len(induced.players)
    report = EquilibriumReport(tuple(induced.label(k) for k in range(n)))
    flats = list(itertools.product(*(ip.actions for ip in induced.players)))
    for flat in flats:
        strategy = induced.unflatten(flat)
        report.utilities[flat] = tuple(interim.utility(k, strategy) for k in range(n))
    scan_deviations(report, flats, [ip.actions for ip in induced.players])
    return report
