import itertools
import json
import subprocess
import sys

import numpy as np
import pytest

from causalgames import enumerate_equilibria
from causalgames.cli import main
from causalgames.io import load, load_model, parse_bayesian_game, parse_cdp, value_key
from causalgames.settings import tolerance

from conftest import oracle_view
from golden_cases import CASES, ROOT, golden_files, run_case
from oracles import brute_eu, brute_interim_equilibria, brute_query, pure_nash_from_matrix, vnm_argmax


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, tmp_path):
    code, files = run_case(name, tmp_path / "out")
    want = golden_files(name)
    assert sorted(files) == sorted(want)
    for fname in want:
        assert files[fname] == want[fname], f"{name}/{fname} differs"
    assert code == int(want["exit"])


EXPECTED_EXIT = {
    "validate_barometer": 0,
    "validate_cyclic": 1,
    "validate_unnormalized": 1,
    "validate_malformed": 2,
    "validate_unknown_field": 2,
    "intervene_bad_value": 2,
    "intervene_cyclic": 1,
    "equilibria_cap": 1,
    "bayes_zero_mass": 1,
    "simulate_bad_epsilon": 2,
    "bad_tolerance": 2,
    "missing_file": 2,
    "equilibria_pd": 0,
    "simulate_learning": 0,
}


@pytest.mark.parametrize("name, code", sorted(EXPECTED_EXIT.items()))
def test_exit_codes(name, code, tmp_path):
    assert run_case(name, tmp_path / "out")[0] == code


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["intervene", "fixtures/barometer.json"])
    assert info.value.code == 2


def test_tolerance_restored_after_run():
    main(["equilibria", str(ROOT / "fixtures/pd_game.json"), "--tolerance", "0.5", "-o", "/dev/null"])
    assert tolerance() == 1e-9


def test_tolerance_flag_changes_equilibria(tmp_path):
    out = tmp_path / "r.json"
    # every PD deviation gains at least 1, so a tolerance of 3 admits every profile
    assert main(["equilibria", str(ROOT / "fixtures/pd_game.json"), "--tolerance", "3", "-o", str(out)]) == 0
    assert len(json.loads(out.read_text())["equilibria"]) == 4


def test_simulate_runs_byte_identical(tmp_path):
    argv = ["simulate", str(ROOT / "fixtures/sim_learning.json"), "--rounds", "300", "--epsilon", "0.1", "--seed", "5"]
    for d in ("a", "b"):
        assert main(argv + ["--out-dir", str(tmp_path / d), "-o", str(tmp_path / d / "stdout.json")]) == 0
    for fname in ("trace.csv", "convergence.csv"):
        a = (tmp_path / "a" / fname).read_bytes().split(b"\n", 1)[1]
        b = (tmp_path / "b" / fname).read_bytes().split(b"\n", 1)[1]
        assert a == b


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "causalgames", "validate", "fixtures/cyclic.json"],
        cwd=ROOT, capture_output=True, text=True,
    )
    assert proc.returncode == 1
    assert "cycle: A,B,C" in proc.stderr
    assert json.loads(proc.stdout)["valid"] is False


# -- golden contents against independent oracles ----------------------------


def golden_json(name):
    return json.loads(golden_files(name)["stdout"])


def test_golden_intervention_matches_oracle():
    model = load_model(ROOT / "fixtures/random4.json")
    want = brute_query(model, "X3", iv={"X1": 1}, evidence={"X0": 0})
    got = golden_json("intervene_random4")["distribution"]
    assert all(abs(got[value_key(k)] - v) <= 1e-9 for k, v in want.items())
    prior = brute_query(load_model(ROOT / "fixtures/barometer.json"), "Storm")
    for name in ("intervene_barometer_do", "intervene_barometer_empty"):
        assert golden_json(name)["distribution"] == pytest.approx({"0": prior[0], "1": prior[1]}, abs=1e-9)
    assert golden_json("intervene_barometer_see")["distribution"]["1"] == pytest.approx(0.18 / 0.26, abs=1e-9)


def test_golden_cdps_match_oracle():
    for name, fixture in (("solve_cdp_three_models", "cdp_three_models.json"), ("solve_cdp_single", "cdp_single.json")):
        cdp = load(ROOT / "fixtures" / fixture, parse_cdp)
        got = golden_json(name)
        eus = {row["action"]: row["expected_utility"] for row in got["table"]}
        for a in cdp.actions:
            want = brute_eu(cdp.family.models, cdp.prior.weights, cdp.utility, "A", a, "C")
            assert abs(eus[a] - want) <= 1e-9
        best = max(eus.values())
        assert got["optimal_action"] == next(a for a in cdp.actions if eus[a] >= best - 1e-9)
    single = golden_json("solve_cdp_single")
    assert single["optimal_action"] == vnm_argmax(cdp.family.models[0], cdp.utility, "A", "C") == 1
    constant = golden_json("solve_cdp_constant")
    assert constant["optimal_action"] == constant["table"][0]["action"]


def test_golden_equilibria_match_oracle():
    assert golden_json("equilibria_pd")["equilibria"] == [["confess", "confess"]]
    assert golden_json("equilibria_pennies")["equilibria"] == []
    assert len(golden_json("equilibria_constant")["equilibria"]) == 4


def test_golden_one_type_equals_complete_information():
    game = load(ROOT / "fixtures/bayes_one_type.json", parse_bayesian_game)
    want = [list(p) for p in enumerate_equilibria(game.as_causal_game()).profiles]
    assert golden_json("bayes_one_type")["equilibria"] == want


def test_golden_revealing_is_per_state_equilibria():
    # each type knows the state, so equilibria factor over states
    game = load(ROOT / "fixtures/bayes_revealing.json", parse_bayesian_game)
    actions = [game.actions(i) for i in range(2)]
    per_state = []
    for w, model in enumerate(game.states.models):
        payoff = np.zeros((2, len(actions[0]), len(actions[1])))
        for j, k in itertools.product(range(len(actions[0])), range(len(actions[1]))):
            dist = brute_query(model, "C", iv={"A1": actions[0][j], "A2": actions[1][k]})
            for i, p in enumerate(game.players):
                payoff[i, j, k] = sum(p.utility[c] * q for c, q in dist.items())
        per_state.append([(actions[0][j], actions[1][k]) for j, k in pure_nash_from_matrix(payoff, tol=1e-9)])
    want = []
    for combo in itertools.product(*per_state):
        want.append([{f"s{w}": combo[w][i] for w in range(3)} for i in range(2)])
    got = golden_json("bayes_revealing")["strategies"]
    key = lambda s: json.dumps(s, sort_keys=True)  # noqa: E731
    assert sorted(got, key=key) == sorted(want, key=key)


def test_golden_two_type_matches_interim_oracle():
    game = load(ROOT / "fixtures/bayes_two_type.json", parse_bayesian_game)
    want, _ = brute_interim_equilibria(list(game.states.models), oracle_view(game), "C")
    got = [
        tuple(tuple(s[t] for t in p.signal.types) for p, s in zip(game.players, strat))
        for strat in golden_json("bayes_two_type")["strategies"]
    ]
    assert got == want
