"""Command-line entry point.

Exit status: 0 success, 1 domain violation, 2 parse or configuration error.
Structured reports go to stdout (or ``--output``) as JSON; tables go to
``--csv`` files.  Every artifact embeds a run manifest.  Flags override any
value read from an input file.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import io as _stdio
import json
import sys
from pathlib import Path

from . import __version__
from . import io as fmt
from .bayesian import bayesian_causal_equilibria, build_induced_game
from .cgm import interventional_query, validate
from .decision import expected_utility_table, optimal_action
from .errors import CausalGameError, ConfigError, ModelValidationError, ParseError
from .games import enumerate_equilibria
from .settings import DEFAULT_MAX_PROFILES, DEFAULT_TOLERANCE, set_tolerance
from .sim import GENERATOR, convergence_report, run_simulation, trace_rows


def _manifest(args, inputs) -> dict:
    return {
        "tool": "causalgames",
        "version": __version__,
        "command": args.command,
        "inputs": [str(p) for p in inputs],
        "config": {"tolerance": args.tolerance, "max_profiles": args.max_profiles, "seed": args.seed},
        "timestamp": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
    }


def _write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _emit_json(args, payload: dict) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if args.output:
        _write_text(args.output, text)
    else:
        sys.stdout.write(text)


def _csv_text(manifest: dict, rows) -> str:
    buf = _stdio.StringIO()
    buf.write("# manifest: " + json.dumps(manifest) + "\n")
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _write_csv(path, manifest: dict, rows) -> None:
    _write_text(path, _csv_text(manifest, rows))


def _assignments(pairs, model, flag: str) -> dict:
    out = {}
    for pair in pairs or []:
        name, sep, value = pair.partition("=")
        if not sep:
            raise ConfigError(f"{flag} expects VAR=VALUE, got {pair!r}")
        domain = None
        for v in model.variables:
            if v.name == name:
                domain = v.domain
        if domain is None:
            raise ConfigError(f"{flag}: unknown variable {name!r}")
        if name in out:
            raise ConfigError(f"{flag}: {name!r} given twice")
        try:
            out[name] = fmt.resolve_value(value, domain, flag)
        except ParseError as exc:
            raise ConfigError(str(exc)) from None
    return out


def cmd_validate(args) -> int:
    model = fmt.load_model(args.path)
    problems = validate(model)
    _emit_json(args, {"manifest": _manifest(args, [args.path]), "valid": not problems, "violations": problems})
    for p in problems:
        print(p, file=sys.stderr)
    return 0 if not problems else 1


def cmd_intervene(args) -> int:
    model = fmt.load_model(args.path)
    problems = validate(model)
    if problems:
        raise ModelValidationError(problems)
    iv = _assignments(args.do, model, "--do")
    given = _assignments(args.given, model, "--given")
    if args.target not in model.names:
        raise ConfigError(f"--target: unknown variable {args.target!r}")
    dist = interventional_query(model, iv, args.target, given)
    _emit_json(args, {
        "manifest": _manifest(args, [args.path]),
        "target": args.target,
        "do": {k: v for k, v in iv.items()},
        "given": given,
        "distribution": {fmt.value_key(k): p for k, p in dist.items()},
    })
    return 0


def cmd_solve_cdp(args) -> int:
    cdp = fmt.load(args.path, fmt.parse_cdp)
    table = expected_utility_table(cdp)
    action, value = optimal_action(cdp)
    manifest = _manifest(args, [args.path])
    _emit_json(args, {
        "manifest": manifest,
        "action_variable": cdp.family.action_variable,
        "optimal_action": action,
        "expected_utility": value,
        "table": [{"action": a, "expected_utility": u} for a, u in table.items()],
    })
    if args.csv:
        _write_csv(args.csv, manifest, [["action", "expected_utility", "optimal"]] + [
            [a, repr(u), int(a == action)] for a, u in table.items()
        ])
    return 0


def cmd_equilibria(args) -> int:
    game = fmt.load(args.path, fmt.parse_game)
    report = enumerate_equilibria(game, max_profiles=args.max_profiles)
    manifest = _manifest(args, [args.path])
    _emit_json(args, {"manifest": manifest, **report.to_dict()})
    if args.csv:
        _write_csv(args.csv, manifest, report.payoff_rows())
    return 0


def cmd_bayes_equilibria(args) -> int:
    game = fmt.load(args.path, fmt.parse_bayesian_game)
    induced = build_induced_game(game)
    report = bayesian_causal_equilibria(game, max_profiles=args.max_profiles)
    manifest = _manifest(args, [args.path])
    strategies = []
    for flat in report.profiles:
        strategies.append([
            {fmt.value_key(t): a for t, a in zip(p.signal.types, s)}
            for p, s in zip(game.players, induced.unflatten(flat))
        ])
    _emit_json(args, {
        "manifest": manifest,
        "induced_players": [
            {"label": induced.label(k), "player": ip.player, "type": ip.type, "belief": list(ip.belief.weights)}
            for k, ip in enumerate(induced.players)
        ],
        "strategies": strategies,
        **report.to_dict(),
    })
    if args.csv:
        _write_csv(args.csv, manifest, report.payoff_rows())
    return 0


def cmd_simulate(args) -> int:
    game = fmt.load(args.path, fmt.parse_game)
    doc = fmt.load_document(args.config) if args.config else None
    config = fmt.parse_sim_config(
        doc,
        rng_seed=args.seed,
        rounds=args.rounds,
        exploration_rate=args.epsilon,
        true_model_index=args.true_model,
        log_period=args.log_period,
    )
    trace = run_simulation(game, config)
    inputs = [args.path] + ([args.config] if args.config else [])
    manifest = _manifest(args, inputs)
    manifest["config"]["seed"] = config.rng_seed
    manifest["generator"] = GENERATOR
    summary = {"manifest": manifest, "simulation": config.to_dict(), **trace.summary, "event_log": trace.events}
    _emit_json(args, summary)
    if args.out_dir:
        out = Path(args.out_dir)
        _write_csv(out / "trace.csv", manifest, trace_rows(trace, game))
        _write_csv(out / "convergence.csv", manifest, convergence_report(trace, game).rows())
        _write_text(out / "summary.json", json.dumps(summary, indent=2) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE,
                        help="probability tolerance (default 1e-9)")
    common.add_argument("--max-profiles", type=int, default=DEFAULT_MAX_PROFILES,
                        help="cap on enumerated profiles (default 10^6)")
    common.add_argument("--seed", type=int, default=None, help="RNG seed for simulate")
    common.add_argument("-o", "--output", help="write the JSON report here instead of stdout")

    parser = argparse.ArgumentParser(prog="causalgames", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a model file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("intervene", parents=[common], help="interventional query on a model file")
    p.add_argument("path")
    p.add_argument("--do", action="append", metavar="VAR=VALUE", help="intervention (repeatable)")
    p.add_argument("--given", action="append", metavar="VAR=VALUE", help="extra evidence (repeatable)")
    p.add_argument("--target", required=True)
    p.set_defaults(func=cmd_intervene)

    for name, func, text in [
        ("solve-cdp", cmd_solve_cdp, "optimal action of a causal decision problem"),
        ("equilibria", cmd_equilibria, "pure Causal Nash Equilibria of a game"),
        ("bayes-equilibria", cmd_bayes_equilibria, "type-contingent equilibria of a Bayesian causal game"),
    ]:
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("path")
        p.add_argument("--csv", help="write the table of utilities as CSV")
        p.set_defaults(func=func)

    p = sub.add_parser("simulate", parents=[common], help="repeated play with belief updating")
    p.add_argument("path", help="game file")
    p.add_argument("--config", help="JSON simulation config")
    p.add_argument("--rounds", type=int)
    p.add_argument("--epsilon", type=float, help="exploration rate")
    p.add_argument("--true-model", type=int, help="index of the true model in the family")
    p.add_argument("--log-period", type=int)
    p.add_argument("--out-dir", help="directory for trace.csv, convergence.csv, summary.json")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        set_tolerance(args.tolerance)
        if args.max_profiles < 1:
            raise ConfigError("--max-profiles must be positive")
        return args.func(args)
    except (ParseError, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CausalGameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 2
    finally:
        set_tolerance(DEFAULT_TOLERANCE)


if __name__ == "__main__":
    sys.exit(main())
