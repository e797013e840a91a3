"""Repeated play of a causal game by belief-updating agents.

This dynamic is an extension: the equilibrium concept itself is static.  Each
round every player best-responds (under their current belief) to the co-player
actions observed in the previous round, explores uniformly with probability
``exploration_rate``, the true model samples the consequence under
``do(full profile)``, and every player applies Bayes' rule with the
interventional likelihood of that profile.  The consequence is public.
"""

from __future__ import annotations

import bisect
import itertools
import logging
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Hashable

import numpy as np

from .decision import BeliefState, bayes_update
from .errors import ConfigError, ImpossibleObservationError
from .games import ActionProfile, CausalGame, CausalPayoffs

log = logging.getLogger(__name__)

GENERATOR = f"numpy.random.PCG64 (numpy {np.__version__})"


@dataclass(frozen=True)
class SimConfig:
    true_model_index: int = 0
    rounds: int = 1000
    exploration_rate: float = 0.0
    rng_seed: int = 0
    log_period: int = 1

    def __post_init__(self):
        if not isinstance(self.rounds, int) or self.rounds < 1:
            raise ConfigError(f"rounds must be a positive integer, got {self.rounds!r}")
        if not 0.0 <= self.exploration_rate <= 1.0:
            raise ConfigError(f"exploration_rate must lie in [0, 1], got {self.exploration_rate!r}")
        if not isinstance(self.log_period, int) or self.log_period < 1:
            raise ConfigError(f"log_period must be a positive integer, got {self.log_period!r}")
        if not isinstance(self.rng_seed, int) or self.rng_seed < 0:
            raise ConfigError(f"rng_seed must be a non-negative integer, got {self.rng_seed!r}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class RoundRecord:
    round: int
    greedy_profile: ActionProfile
    profile: ActionProfile
    consequence: Hashable
    # beliefs after this round's update
    beliefs: tuple[tuple[float, ...], ...]
    # u^C of the played profile under the beliefs held when choosing
    utilities: tuple[float, ...]


@dataclass
class SimTrace:
    config: SimConfig
    generator: str
    initial_beliefs: tuple[tuple[float, ...], ...]
    records: list[RoundRecord] = field(default_factory=list)
    events: list[str] = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.records)

    def beliefs_before(self, round_: int) -> tuple[tuple[float, ...], ...]:
        """Beliefs held at the start of 1-based round ``round_``."""
        return self.initial_beliefs if round_ == 1 else self.records[round_ - 2].beliefs

    @property
    def final_beliefs(self) -> tuple[tuple[float, ...], ...]:
        return self.records[-1].beliefs if self.records else self.initial_beliefs


def _sample(dist, u: float) -> int:
    cumulative = list(itertools.accumulate(dist))
    k = bisect.bisect_right(cumulative, u * cumulative[-1])
    if k >= len(dist):
        k = max(i for i, p in enumerate(dist) if p > 0)
    return k


def run_simulation(game: CausalGame, config: SimConfig) -> SimTrace:
    if not 0 <= config.true_model_index < len(game.family):
        raise ConfigError(
            f"true_model_index {config.true_model_index} outside family of {len(game.family)} models"
        )
    payoffs = CausalPayoffs(game)
    rng = np.random.Generator(np.random.PCG64(config.rng_seed))
    n = game.n_players
    action_sets = [game.actions(i) for i in range(n)]
    consequences = game.family.consequences
    beliefs = [p.belief for p in game.players]
    trace = SimTrace(config, GENERATOR, tuple(b.weights for b in beliefs))
    eps = config.exploration_rate

    previous = tuple(acts[int(rng.integers(len(acts)))] for acts in action_sets)
    for t in range(1, config.rounds + 1):
        greedy = tuple(payoffs.best_response(i, previous, beliefs[i])[0] for i in range(n))
        played = list(greedy)
        for i, acts in enumerate(action_sets):
            explore = rng.random() < eps
            pick = int(rng.integers(len(acts)))
            if explore:
                played[i] = acts[pick]
        profile = tuple(played)
        utilities = payoffs.utilities(profile, beliefs)
        dists = payoffs.model_distributions(profile)
        c = _sample(dists[config.true_model_index], float(rng.random()))
        likelihoods = [d[c] for d in dists]
        for i in range(n):
            try:
                beliefs[i] = bayes_update(beliefs[i], likelihoods)
            except ImpossibleObservationError:
                msg = f"round {t}: player {i} belief unchanged, observation impossible under all believed models"
                log.warning(msg)
                trace.events.append(msg)
        trace.records.append(
            RoundRecord(t, greedy, profile, consequences[c], tuple(b.weights for b in beliefs), utilities)
        )
        if t % config.log_period == 0:
            log.debug("round %d profile %s consequence %s", t, profile, consequences[c])
        previous = profile

    report = convergence_report(trace, game, payoffs)
    trace.summary = {
        "final_beliefs": [list(b) for b in trace.final_beliefs],
        "profile_frequencies": profile_frequencies(trace, game),
        "equilibrium_hit_rate": report.hit_rate,
        "window_start": report.window_start,
        "events": len(trace.events),
    }
    return trace


def profile_frequencies(trace: SimTrace, game: CausalGame) -> list[dict]:
    counts = Counter(r.profile for r in trace.records)
    total = len(trace.records)
    return [
        {"profile": list(p), "count": counts[p], "frequency": counts[p] / total}
        for p in game.profiles()
        if counts[p]
    ]


@dataclass
class ConvergenceReport:
    hit_rate: float
    window_start: int
    # (round, greedy profile, greedy profile is an equilibrium at current beliefs)
    series: list[tuple[int, ActionProfile, bool]]

    def rows(self) -> list[list]:
        out: list[list] = [["round", "greedy_profile", "is_equilibrium", "cumulative_hit_rate"]]
        hits = 0
        for k, (t, profile, ok) in enumerate(self.series, start=1):
            hits += ok
            out.append([t, "|".join(map(str, profile)), int(ok), repr(hits / k)])
        return out


def convergence_report(trace: SimTrace, game: CausalGame, payoffs: CausalPayoffs | None = None) -> ConvergenceReport:
    """Fraction of the last 10% of rounds whose greedy profile is a Causal Nash
    Equilibrium of ``game`` evaluated at the beliefs held in that round."""
    payoffs = payoffs or CausalPayoffs(game)
    rounds = len(trace.records)
    window = max(1, math.ceil(rounds / 10))
    start = rounds - window + 1
    series = []
    for rec in trace.records:
        beliefs = [BeliefState(w) for w in trace.beliefs_before(rec.round)]
        series.append((rec.round, rec.greedy_profile, bool(payoffs.check(rec.greedy_profile, beliefs))))
    hits = sum(ok for t, _, ok in series if t >= start)
    return ConvergenceReport(hits / window, start, series)


def trace_rows(trace: SimTrace, game: CausalGame) -> list[list]:
    """CSV rows of the trace, thinned to every ``log_period``-th round plus the last."""
    n_models = len(game.family)
    header = ["round", "profile", "consequence"]
    header += [f"belief[{i}][{k}]" for i in range(game.n_players) for k in range(n_models)]
    header += [f"uC[{i}]" for i in range(game.n_players)]
    rows: list[list] = [header]
    period = trace.config.log_period
    last = len(trace.records)
    for rec in trace.records:
        if rec.round % period and rec.round != last:
            continue
        row = [rec.round, "|".join(map(str, rec.profile)), rec.consequence]
        row += [repr(w) for b in rec.beliefs for w in b]
        row += [repr(u) for u in rec.utilities]
        rows.append(row)
    return rows
