"""Exit criteria of the build, one test per criterion.

Each test records a ``criterion N: PASS|FAIL ...`` line.  The lines are printed
as they happen and again in pytest's terminal summary.  Run directly with
``python3 tests/test_acceptance.py`` for the lines alone.
"""

import itertools
import math
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

from causalgames import (
    CausalDecisionProblem,
    CausalGame,
    PlayerSpec,
    bayesian_causal_equilibria,
    build_induced_game,
    causal_expected_utility,
    enumerate_equilibria,
    interventional_query,
    observational_query,
    optimal_action,
    posterior_given_signal,
)
from causalgames.cli import _csv_text
from causalgames.generators import game_from_payoffs, random_binary_model, random_cdp
from causalgames.io import load, load_model, parse_bayesian_game, parse_cdp, parse_game
from causalgames.sim import SimConfig, run_simulation, trace_rows

from conftest import FIXTURES, constant_signal_game, learning_game, oracle_view
from golden_cases import CASES, golden_files, run_case
from oracles import (
    brute_eu,
    brute_interim_equilibria,
    brute_query,
    exact_posterior,
    pure_nash_from_matrix,
    vnm_argmax,
)

pytestmark = pytest.mark.acceptance

RESULTS: list[str] = []


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_criterion_1_interventional_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 6))
        model = random_binary_model(rng, n, edge_prob=float(rng.uniform(0.2, 0.9)))
        var, target = (f"X{k}" for k in rng.choice(n, size=2, replace=False))
        value = int(rng.integers(2))
        got = interventional_query(model, {var: value}, target)
        want = brute_query(model, target, iv={var: value})
        worst = max(worst, max(abs(got[k] - want[k]) for k in want))
    elapsed = time.perf_counter() - start
    record(1, worst <= 1e-9 and elapsed < 10, f"100 models, max |err| {worst:.1e} (<= 1e-9), {elapsed:.2f}s (< 10s)")


def test_criterion_2_barometer_asymmetry():
    model = load_model(FIXTURES / "barometer.json")
    prior = observational_query(model, "Storm")
    do = interventional_query(model, {"Barometer": "down"}, "Storm")
    see = observational_query(model, "Storm", {"Barometer": "down"})
    same = max(abs(do[s] - prior[s]) for s in prior)
    moved = max(abs(see[s] - prior[s]) for s in prior)
    record(2, same <= 1e-9 and moved > 1e-9,
           f"|do - prior| {same:.1e}, |see - prior| {moved:.3f}; P(Storm=1|see down) = {see[1]:.4f}")


def test_criterion_3_single_model_reduction():
    rng = np.random.default_rng(103)
    mismatches = 0
    for k in range(100):
        cdp = random_cdp(rng, 1, int(rng.integers(2, 4)), int(rng.integers(2, 5)), direct_effect=bool(k % 2))
        if optimal_action(cdp)[0] != vnm_argmax(cdp.family.models[0], cdp.utility, "A", "C"):
            mismatches += 1
    record(3, mismatches == 0, f"100 single-model CDPs, {mismatches} action mismatches")


def test_criterion_4_double_sum_oracle():
    rng = np.random.default_rng(104)
    worst = 0.0
    for _ in range(50):
        cdp = random_cdp(rng, int(rng.integers(1, 4)), int(rng.integers(1, 4)), int(rng.integers(1, 5)))
        for a in cdp.actions:
            want = brute_eu(cdp.family.models, cdp.prior.weights, cdp.utility, "A", a, "C")
            worst = max(worst, abs(causal_expected_utility(cdp, a) - want))
    record(4, worst <= 1e-9, f"50 CDPs, max |err| {worst:.1e} (<= 1e-9)")


def test_criterion_5_classical_game_reduction():
    start = time.perf_counter()
    rng = np.random.default_rng(105)
    mismatches = 0
    total_eq = 0
    for k in range(100):
        n = int(rng.integers(2, 4))
        shape = tuple(int(m) for m in rng.integers(1, 4, size=n))
        payoffs = rng.integers(0, 4, size=(n, *shape)).astype(float) if k % 2 else rng.normal(size=(n, *shape))
        got = sorted(tuple(int(a) for a in p) for p in enumerate_equilibria(game_from_payoffs(payoffs)).profiles)
        want = sorted(pure_nash_from_matrix(payoffs, tol=1e-9))
        mismatches += got != want
        total_eq += len(want)
    elapsed = time.perf_counter() - start
    record(5, mismatches == 0 and elapsed < 60,
           f"100 games ({total_eq} equilibria), {mismatches} set mismatches, {elapsed:.2f}s (< 60s)")


def _matrix_from_game(game):
    """Payoff tensor of a one-model game computed with the brute-force oracle."""
    shape = [len(game.actions(i)) for i in range(game.n_players)]
    out = np.zeros((game.n_players, *shape))
    model = game.family.models[0]
    for idx in itertools.product(*(range(m) for m in shape)):
        iv = {game.players[i].action_variable: game.actions(i)[j] for i, j in enumerate(idx)}
        dist = brute_query(model, game.family.consequence_variable, iv=iv)
        for i, p in enumerate(game.players):
            out[(i, *idx)] = sum(p.utility[c] * q for c, q in dist.items())
    return out


def test_criterion_6_pd_and_pennies():
    pd = load(FIXTURES / "pd_game.json", parse_game)
    pennies = load(FIXTURES / "matching_pennies.json", parse_game)
    pd_eq = enumerate_equilibria(pd).profiles
    mp_eq = enumerate_equilibria(pennies).profiles
    pd_brute = [tuple(pd.actions(i)[j] for i, j in enumerate(p)) for p in pure_nash_from_matrix(_matrix_from_game(pd))]
    mp_brute = pure_nash_from_matrix(_matrix_from_game(pennies))
    ok = pd_eq == [("confess", "confess")] == pd_brute and mp_eq == [] == mp_brute
    record(6, ok, f"PD equilibria {pd_eq} (brute {pd_brute}); pennies {mp_eq} (brute {mp_brute})")


def test_criterion_7_affine_invariance():
    rng = np.random.default_rng(107)
    failures = []
    games = ["pd_game.json", "matching_pennies.json", "constant_game.json", "uncertain_game.json"]
    cdps = ["cdp_single.json", "cdp_three_models.json", "cdp_constant_utility.json"]
    for name in games:
        game = load(FIXTURES / name, parse_game)
        base = enumerate_equilibria(game).profiles
        for _ in range(20):
            players = []
            for p in game.players:
                a, b = rng.uniform(0.01, 100), rng.uniform(-100, 100)
                players.append(PlayerSpec(p.action_variable, {c: a * u + b for c, u in p.utility.items()}, p.belief))
            if enumerate_equilibria(CausalGame(game.family, players)).profiles != base:
                failures.append(name)
    for name in cdps:
        cdp = load(FIXTURES / name, parse_cdp)
        base = optimal_action(cdp)[0]
        for _ in range(20):
            a, b = rng.uniform(0.01, 100), rng.uniform(-100, 100)
            moved = CausalDecisionProblem(cdp.family, cdp.prior, {c: a * u + b for c, u in cdp.utility.items()})
            if optimal_action(moved)[0] != base:
                failures.append(name)
    record(7, not failures, f"{len(games) + len(cdps)} fixtures x 20 transforms, failures: {sorted(set(failures)) or 'none'}")


def test_criterion_8_bayesian_layer():
    worst = 0.0
    for name in ("bayes_two_type.json", "bayes_one_type.json", "bayes_revealing.json"):
        game = load(FIXTURES / name, parse_bayesian_game)
        for i, p in enumerate(game.players):
            total = np.zeros(len(p.prior))
            for t in p.signal.types:
                mass = math.fsum(p.prior[w] for w in p.signal.preimage(t))
                total += mass * np.array(posterior_given_signal(game, i, t).weights)
            worst = max(worst, float(np.max(np.abs(total - np.array(p.prior.weights)))))
    ltp_ok = worst <= 1e-9

    rng = np.random.default_rng(108)
    degenerate_mismatch = 0
    for _ in range(20):
        game = constant_signal_game(rng, n_states=int(rng.integers(1, 4)))
        if bayesian_causal_equilibria(game).profiles != enumerate_equilibria(game.as_causal_game()).profiles:
            degenerate_mismatch += 1

    game = load(FIXTURES / "bayes_two_type.json", parse_bayesian_game)
    want, n_profiles = brute_interim_equilibria(list(game.states.models), oracle_view(game), "C")
    report = bayesian_causal_equilibria(game)
    induced = build_induced_game(game)
    got = [induced.unflatten(f) for f in report.profiles]
    oracle_ok = n_profiles == 16 and len(report.utilities) == 16 and got == want

    record(8, ltp_ok and degenerate_mismatch == 0 and oracle_ok,
           f"total-probability err {worst:.1e}; degenerate mismatches {degenerate_mismatch}/20; "
           f"interim oracle {len(want)} equilibria over {n_profiles} profiles, match={got == want}")


def test_criterion_9_simulation():
    start = time.perf_counter()
    game = learning_game()
    hits = 0
    agree = True
    for seed in range(20):
        truth = seed % 2
        cfg = SimConfig(true_model_index=truth, rounds=5000, exploration_rate=0.1, rng_seed=seed)
        trace = run_simulation(game, cfg)
        final = trace.final_beliefs[0][truth]
        exact = exact_posterior(game.family.models, (0.5, 0.5), ("A",), trace)[-1][truth]
        agree &= abs(final - exact) <= 1e-9
        hits += final >= 0.95

    # eps = 0: deterministic, stationary, byte-identical output
    cfg = SimConfig(true_model_index=0, rounds=500, exploration_rate=0.0, rng_seed=3)
    pinned = learning_game((0.9, 0.1))
    a, b = run_simulation(pinned, cfg), run_simulation(pinned, cfg)
    stationary = len({r.profile for r in a.records[1:]}) == 1
    manifest = {"generator": a.generator}
    identical = a.records == b.records and (
        _csv_text(manifest, trace_rows(a, pinned)).encode() == _csv_text(manifest, trace_rows(b, pinned)).encode()
    )
    noisy = SimConfig(rounds=500, exploration_rate=0.3, rng_seed=4)
    identical &= run_simulation(game, noisy).records == run_simulation(game, noisy).records
    elapsed = time.perf_counter() - start
    record(9, hits >= 18 and agree and stationary and identical and elapsed < 60,
           f"concentrated in {hits}/20 seeds (>= 18), exact-Bayes agreement={agree}, "
           f"eps=0 stationary={stationary}, byte-identical={identical}, {elapsed:.2f}s (< 60s)")


def test_criterion_10_cli_contract():
    differing = []
    codes = {}
    with tempfile.TemporaryDirectory() as tmp:
        for k, name in enumerate(sorted(CASES)):
            code, files = run_case(name, Path(tmp) / str(k))
            codes[name] = code
            if files != golden_files(name):
                differing.append(name)
    contract = (
        codes["validate_barometer"] == 0
        and codes["validate_cyclic"] == 1
        and codes["validate_unnormalized"] == 1
        and codes["validate_malformed"] == 2
        and codes["validate_unknown_field"] == 2
    )
    record(10, not differing and contract,
           f"{len(CASES) - len(differing)}/{len(CASES)} golden cases equal; exit codes valid/invalid/malformed = "
           f"{codes['validate_barometer']}/{codes['validate_cyclic']}/{codes['validate_malformed']}")


if __name__ == "__main__":
    sys.path.insert(0, str(Path(__file__).parent))
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
