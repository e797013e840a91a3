"""Finite causal strategic games and pure Causal Nash Equilibria.

Every player shares the same model family and consequence variable but holds
their own belief over the family and their own utility over consequences.  For an
action profile ``a`` the player's consequence distribution is::

    p_i^a(c) = sum_w belief_i(w) * P_w(c | do(a))

where ``do(a)`` intervenes on every player's action variable jointly.  The
causal utility ``u^C_i(a)`` is the expectation of ``u_i`` under ``p_i^a``.
A profile is an equilibrium when no player gains more than the tolerance by a
unilateral deviation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Hashable, Iterator, Mapping, Sequence

from .cgm import CausalModel
from .decision import (
    BeliefState,
    ModelFamily,
    first_argmax,
    inner,
    interventional_consequences,
    mixture,
    utility_vector,
)
from .errors import ModelValidationError, QueryError, SearchSpaceTooLarge
from .settings import DEFAULT_MAX_PROFILES, tolerance

ActionProfile = tuple


@dataclass(frozen=True)
class PlayerSpec:
    action_variable: str
    utility: Mapping[Hashable, float]
    belief: BeliefState


@dataclass(frozen=True)
class CausalGame:
    family: ModelFamily
    players: tuple[PlayerSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "players", tuple(self.players))
        if not self.players:
            raise ModelValidationError("game: at least one player required")
        declared = tuple(p.action_variable for p in self.players)
        if declared != self.family.action_variables:
            raise ModelValidationError(
                f"game: player action variables {declared} do not match family {self.family.action_variables}"
            )
        for i, p in enumerate(self.players):
            if len(p.belief) != len(self.family):
                raise ModelValidationError(f"player {i}: belief length does not match family")
            utility_vector(p.utility, self.family.consequences)

    @classmethod
    def from_models(
        cls,
        models: Sequence[CausalModel],
        consequence_variable: str,
        players: Sequence[PlayerSpec],
    ) -> "CausalGame":
        family = ModelFamily(tuple(models), tuple(p.action_variable for p in players), consequence_variable)
        return cls(family, tuple(players))

    @property
    def n_players(self) -> int:
        return len(self.players)

    def actions(self, player: int) -> tuple:
        return self.family.domain(self.players[player].action_variable)

    @property
    def n_profiles(self) -> int:
        return math.prod(len(self.actions(i)) for i in range(self.n_players))

    def profiles(self) -> Iterator[ActionProfile]:
        """All pure profiles, lexicographic in player order then domain order."""
        return itertools.product(*(self.actions(i) for i in range(self.n_players)))

    def intervention(self, profile: ActionProfile) -> dict:
        return {p.action_variable: a for p, a in zip(self.players, profile)}

    def check_profile(self, profile: ActionProfile) -> None:
        if len(profile) != self.n_players:
            raise QueryError(f"profile has {len(profile)} actions for {self.n_players} players")
        for i, a in enumerate(profile):
            if a not in self.actions(i):
                raise QueryError(f"player {i}: action {a!r} not available")

    def with_beliefs(self, beliefs: Sequence[BeliefState]) -> "CausalGame":
        players = tuple(
            PlayerSpec(p.action_variable, p.utility, b) for p, b in zip(self.players, beliefs)
        )
        return CausalGame(self.family, players)


def replace_action(profile: ActionProfile, player: int, action) -> ActionProfile:
    return profile[:player] + (action,) + profile[player + 1:]


@dataclass(frozen=True)
class Deviation:
    player: int
    action: Hashable
    gain: float


@dataclass(frozen=True)
class NashCheck:
    is_equilibrium: bool
    witness: Deviation | None = None

    def __bool__(self) -> bool:
        return self.is_equilibrium


class CausalPayoffs:
    """Memoized per-model consequence distributions for one game.

    Interventional queries depend only on the profile, not on beliefs, so a
    single instance serves any number of belief assignments (the simulator
    re-evaluates the same profiles under changing beliefs).
    """

    def __init__(self, game: CausalGame):
        self.game = game
        self._dists: dict[ActionProfile, list[tuple[float, ...]]] = {}
        self._utility = [utility_vector(p.utility, game.family.consequences) for p in game.players]

    def model_distributions(self, profile: ActionProfile) -> list[tuple[float, ...]]:
        dists = self._dists.get(profile)
        if dists is None:
            self.game.check_profile(profile)
            dists = interventional_consequences(self.game.family, self.game.intervention(profile))
            self._dists[profile] = dists
        return dists

    def _belief(self, player: int, belief: BeliefState | None) -> BeliefState:
        return self.game.players[player].belief if belief is None else belief

    def distribution(self, player: int, profile: ActionProfile, belief: BeliefState | None = None) -> list[float]:
        return mixture(self._belief(player, belief).weights, self.model_distributions(profile))

    def utility(self, player: int, profile: ActionProfile, belief: BeliefState | None = None) -> float:
        return inner(self._utility[player], self.distribution(player, profile, belief))

    def utilities(self, profile: ActionProfile, beliefs: Sequence[BeliefState] | None = None) -> tuple[float, ...]:
        beliefs = beliefs or [None] * self.game.n_players
        return tuple(self.utility(i, profile, b) for i, b in enumerate(beliefs))

    def best_response(self, player: int, profile: ActionProfile, belief: BeliefState | None = None):
        """``(action, value)`` maximizing ``player``'s causal utility against ``profile``'s co-players."""
        actions = self.game.actions(player)
        values = [self.utility(player, replace_action(profile, player, a), belief) for a in actions]
        k = first_argmax(values)
        return actions[k], values[k]

    def check(self, profile: ActionProfile, beliefs: Sequence[BeliefState] | None = None) -> NashCheck:
        beliefs = beliefs or [None] * self.game.n_players
        tol = tolerance()
        for i, b in enumerate(beliefs):
            current = self.utility(i, profile, b)
            action, value = self.best_response(i, profile, b)
            if value > current + tol:
                return NashCheck(False, Deviation(i, action, value - current))
        return NashCheck(True)


def consequence_distribution(game: CausalGame, player: int, profile: ActionProfile) -> dict:
    """p_i^a over the consequence domain, keyed in domain order."""
    dist = CausalPayoffs(game).distribution(player, tuple(profile))
    return dict(zip(game.family.consequences, dist))


def causal_utility(game: CausalGame, player: int, profile: ActionProfile) -> float:
    return CausalPayoffs(game).utility(player, tuple(profile))


def best_response(game: CausalGame, player: int, profile: ActionProfile):
    return CausalPayoffs(game).best_response(player, tuple(profile))


def is_causal_nash_equilibrium(game: CausalGame, profile: ActionProfile) -> NashCheck:
    """Truthy iff no player has a deviation gaining more than the tolerance.

    A failed check carries the first such player (by index) and their best
    response as witness.
    """
    return CausalPayoffs(game).check(tuple(profile))


@dataclass
class EquilibriumReport:
    players: tuple[str, ...]
    profiles: list[ActionProfile] = field(default_factory=list)
    utilities: dict[ActionProfile, tuple[float, ...]] = field(default_factory=dict)
    deviations: dict[ActionProfile, Deviation] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "players": list(self.players),
            "equilibria": [list(p) for p in self.profiles],
            "profiles": [
                {
                    "profile": list(profile),
                    "utilities": list(us),
                    "equilibrium": profile not in self.deviations,
                    **(
                        {"deviation": {
                            "player": self.deviations[profile].player,
                            "action": self.deviations[profile].action,
                            "gain": self.deviations[profile].gain,
                        }}
                        if profile in self.deviations else {}
                    ),
                }
                for profile, us in self.utilities.items()
            ],
        }

    def payoff_rows(self) -> list[list]:
        header = [*self.players, *(f"uC[{p}]" for p in self.players), "equilibrium"]
        rows: list[list] = [header]
        for profile, us in self.utilities.items():
            rows.append([*profile, *(repr(u) for u in us), int(profile not in self.deviations)])
        return rows


def check_search_space(size: int, max_profiles: int) -> None:
    if size > max_profiles:
        raise SearchSpaceTooLarge(f"search space too large: {size} profiles exceeds cap {max_profiles}")


def scan_deviations(report: EquilibriumReport, profiles: Sequence[ActionProfile], action_sets: Sequence[tuple]) -> None:
    """Classify every profile of a fully tabulated ``report.utilities``."""
    tol = tolerance()
    for profile in profiles:
        us = report.utilities[profile]
        witness = None
        for i, actions in enumerate(action_sets):
            values = [report.utilities[replace_action(profile, i, a)][i] for a in actions]
            k = first_argmax(values)
            if values[k] > us[i] + tol:
                witness = Deviation(i, actions[k], values[k] - us[i])
                break
        if witness is None:
            report.profiles.append(profile)
        else:
            report.deviations[profile] = witness


def enumerate_equilibria(game: CausalGame, max_profiles: int = DEFAULT_MAX_PROFILES) -> EquilibriumReport:
    """Exhaustive scan of the pure profile space."""
    check_search_space(game.n_profiles, max_profiles)
    payoffs = CausalPayoffs(game)
    report = EquilibriumReport(tuple(p.action_variable for p in game.players))
    profiles = list(game.profiles())
    for profile in profiles:
        report.utilities[profile] = payoffs.utilities(profile)
    scan_deviations(report, profiles, [game.actions(i) for i in range(game.n_players)])
    return report
