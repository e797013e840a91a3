"""JSON document formats for models, decision problems, games and run configs.

All parsers are strict: unknown fields are rejected and every error names the
offending field path (``cpts.C[1].dist``) or, for JSON syntax errors, the
line and column.  Structural problems that a well-typed document can still
have (cycles, unnormalized rows) are left to :func:`causalgames.cgm.validate`.

Model document::

    {"variables": [{"name": "A", "domain": [0, 1]}, ...],
     "edges": [["A", "C"], ...],
     "cpts": {"C": [{"given": {"A": 0}, "dist": {"0": 0.9, "1": 0.1}}, ...]}}

Values omitted from a ``dist`` have probability zero.  Parent order is the
order in which a child's incoming edges are listed.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .bayesian import BayesianCausalGame, BayesianPlayer, SignalFunction
from .cgm import CausalModel, Variable
from .decision import BeliefState, CausalDecisionProblem, ModelFamily
from .errors import ConfigError, ParseError
from .games import CausalGame, PlayerSpec
from .sim import SimConfig


def load_document(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file ({exc.strerror})", path=str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, where=f"line {exc.lineno}, column {exc.colno}", path=str(path)) from None


class _Fields:
    """Strict accessor for one JSON object."""

    def __init__(self, obj, where: str, required=(), optional=()):
        if not isinstance(obj, dict):
            raise ParseError(f"expected an object, got {type(obj).__name__}", where=where or "<root>")
        unknown = [k for k in obj if k not in required and k not in optional]
        if unknown:
            raise ParseError(f"unknown field {unknown[0]!r}", where=_join(where, unknown[0]))
        missing = [k for k in required if k not in obj]
        if missing:
            raise ParseError(f"missing required field {missing[0]!r}", where=_join(where, missing[0]))
        self.obj = obj
        self.where = where

    def __contains__(self, key):
        return key in self.obj

    def get(self, key, kind=None, default=None):
        if key not in self.obj:
            return default
        value = self.obj[key]
        if kind is not None and not _is_kind(value, kind):
            raise ParseError(f"expected {_kind_name(kind)}", where=self.at(key))
        return value

    def at(self, key) -> str:
        return _join(self.where, key)


def _join(where: str, key) -> str:
    if isinstance(key, int):
        return f"{where}[{key}]"
    return f"{where}.{key}" if where else str(key)


def _is_kind(value, kind) -> bool:
    if kind == "number":
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if kind == "integer":
        return isinstance(value, int) and not isinstance(value, bool)
    if kind == "scalar":
        return isinstance(value, (str, int, float, bool))
    return isinstance(value, kind)


def _kind_name(kind) -> str:
    if isinstance(kind, str):
        return "an " + kind if kind[0] in "aeiou" else "a " + kind
    return {list: "a list", dict: "an object", str: "a string"}.get(kind, kind.__name__)


def value_key(value) -> str:
    """Canonical string form of a domain value, as used for JSON object keys."""
    return value if isinstance(value, str) else json.dumps(value)


def resolve_value(value, domain, where: str):
    """Map a JSON value or object key onto the matching element of ``domain``."""
    for d in domain:
        if type(d) is type(value) and d == value:
            return d
    text = value if isinstance(value, str) else value_key(value)
    for d in domain:
        if value_key(d) == text:
            return d
    raise ParseError(f"value {value!r} not in domain {list(domain)!r}", where=where)


# -- models ----------------------------------------------------------------


def parse_model(doc, where: str = "") -> CausalModel:
    f = _Fields(doc, where, required=("variables", "cpts"), optional=("edges",))
    raw_vars = f.get("variables", list)
    variables: list[Variable] = []
    domains: dict[str, tuple] = {}
    for k, rv in enumerate(raw_vars):
        vf = _Fields(rv, _join(f.at("variables"), k), required=("name", "domain"))
        name = vf.get("name", str)
        domain = vf.get("domain", list)
        for j, v in enumerate(domain):
            if not _is_kind(v, "scalar"):
                raise ParseError("domain values must be strings, numbers or booleans",
                                 where=_join(vf.at("domain"), j))
        if name in domains:
            raise ParseError(f"duplicate variable {name!r}", where=vf.at("name"))
        domains[name] = tuple(domain)
        variables.append(Variable(name, tuple(domain)))

    parents: dict[str, list[str]] = {n: [] for n in domains}
    for k, edge in enumerate(f.get("edges", list, [])):
        ew = _join(f.at("edges"), k)
        if not (isinstance(edge, list) and len(edge) == 2 and all(isinstance(e, str) for e in edge)):
            raise ParseError("edge must be a [parent, child] pair of names", where=ew)
        p, c = edge
        for n in edge:
            if n not in domains:
                raise ParseError(f"unknown variable {n!r}", where=ew)
        if p in parents[c]:
            raise ParseError(f"duplicate edge {p} -> {c}", where=ew)
        parents[c].append(p)

    raw_cpts = f.get("cpts", dict)
    cpts: dict[str, dict[tuple, tuple[float, ...]]] = {}
    for name, rows in raw_cpts.items():
        cw = f.at("cpts") + f".{name}"
        if name not in domains:
            raise ParseError(f"CPT for unknown variable {name!r}", where=cw)
        if not isinstance(rows, list):
            raise ParseError("expected a list of rows", where=cw)
        table: dict[tuple, tuple[float, ...]] = {}
        for k, row in enumerate(rows):
            rw = _join(cw, k)
            rf = _Fields(row, rw, required=("dist",), optional=("given",))
            given = rf.get("given", dict, {})
            for g in given:
                if g not in parents[name]:
                    raise ParseError(f"{g!r} is not a parent of {name!r}", where=rf.at("given"))
            missing = [p for p in parents[name] if p not in given]
            if missing:
                raise ParseError(f"row does not assign parent {missing[0]!r}", where=rf.at("given"))
            key = tuple(
                resolve_value(given[p], domains[p], rf.at("given") + f".{p}") for p in parents[name]
            )
            if key in table:
                raise ParseError("duplicate row for the same parent values", where=rw)
            dist = rf.get("dist", dict)
            probs = [0.0] * len(domains[name])
            for value, p in dist.items():
                dw = rf.at("dist") + f".{value}"
                if not _is_kind(p, "number"):
                    raise ParseError("probability must be a number", where=dw)
                probs[domains[name].index(resolve_value(value, domains[name], dw))] = float(p)
            table[key] = tuple(probs)
        cpts[name] = table
    return CausalModel(tuple(variables), {n: tuple(ps) for n, ps in parents.items()}, cpts)


def model_to_dict(model: CausalModel) -> dict:
    variables = [{"name": v.name, "domain": list(v.domain)} for v in model.variables]
    edges = [[p, c] for c in model.names for p in model.parents[c]]
    cpts = {}
    for v in model.variables:
        ps = model.parents[v.name]
        cpts[v.name] = [
            {
                **({"given": dict(zip(ps, key))} if ps else {}),
                "dist": {value_key(val): p for val, p in zip(v.domain, row)},
            }
            for key, row in model.cpts.get(v.name, {}).items()
        ]
    return {"variables": variables, "edges": edges, "cpts": cpts}


def load_model(path) -> CausalModel:
    try:
        return parse_model(load_document(path))
    except ParseError as exc:
        raise exc.at_path(path) from None


# -- families, decision problems, games ------------------------------------


def _parse_models(entries, where: str, base: Path) -> list[CausalModel]:
    if not isinstance(entries, list) or not entries:
        raise ParseError("expected a non-empty list of models", where=where)
    models = []
    for k, entry in enumerate(entries):
        ew = _join(where, k)
        if isinstance(entry, str):
            path = base / entry
            try:
                models.append(parse_model(load_document(path)))
            except ParseError as exc:
                raise ParseError(str(exc), where=ew) from None
        else:
            models.append(parse_model(entry, ew))
    return models


def _weights(values, where: str) -> BeliefState:
    if not isinstance(values, list) or not all(_is_kind(v, "number") for v in values):
        raise ParseError("expected a list of numbers", where=where)
    return BeliefState(tuple(float(v) for v in values))


def _utility(doc, where: str, consequences) -> dict:
    if not isinstance(doc, dict):
        raise ParseError("expected an object mapping consequence values to numbers", where=where)
    out = {}
    for key, u in doc.items():
        kw = f"{where}.{key}"
        if not _is_kind(u, "number"):
            raise ParseError("utility must be a number", where=kw)
        out[resolve_value(key, consequences, kw)] = float(u)
    return out


def _domain_of(models: list[CausalModel], name: str, where: str) -> tuple:
    for v in models[0].variables:
        if v.name == name:
            return v.domain
    raise ParseError(f"unknown variable {name!r}", where=where)


def parse_cdp(doc, base: Path = Path(".")) -> CausalDecisionProblem:
    f = _Fields(doc, "", required=("family", "prior", "action_variable", "consequence_variable", "utility"))
    models = _parse_models(f.get("family"), "family", base)
    action = f.get("action_variable", str)
    consequence = f.get("consequence_variable", str)
    consequences = _domain_of(models, consequence, "consequence_variable")
    _domain_of(models, action, "action_variable")
    utility = _utility(f.get("utility"), "utility", consequences)
    prior = _weights(f.get("prior"), "prior")
    family = ModelFamily(tuple(models), (action,), consequence)
    return CausalDecisionProblem(family, prior, utility)


def _parse_players(f: _Fields, models, consequences, bayesian: bool, n_models: int):
    raw = f.get("players", list)
    if not raw:
        raise ParseError("at least one player required", where="players")
    players = []
    for k, rp in enumerate(raw):
        pw = _join("players", k)
        if bayesian:
            pf = _Fields(rp, pw, required=("action_variable", "utility", "prior", "types", "signal"))
        else:
            pf = _Fields(rp, pw, required=("action_variable", "utility"), optional=("belief",))
        action = pf.get("action_variable", str)
        _domain_of(models, action, pf.at("action_variable"))
        utility = _utility(pf.get("utility"), pf.at("utility"), consequences)
        if not bayesian:
            belief = (
                _weights(pf.get("belief"), pf.at("belief"))
                if "belief" in pf else BeliefState.uniform(n_models)
            )
            players.append(PlayerSpec(action, utility, belief))
            continue
        prior = _weights(pf.get("prior"), pf.at("prior"))
        types = pf.get("types", list)
        if not all(_is_kind(t, "scalar") for t in types):
            raise ParseError("types must be strings, numbers or booleans", where=pf.at("types"))
        signal_doc = pf.get("signal", dict)
        unset = object()
        mapping = [unset] * n_models
        for key, t in signal_doc.items():
            sw = pf.at("signal") + f".{key}"
            try:
                w = int(key)
            except ValueError:
                raise ParseError("signal keys must be state indices", where=sw) from None
            if not 0 <= w < n_models:
                raise ParseError(f"state index {w} outside family of {n_models} models", where=sw)
            mapping[w] = resolve_value(t, types, sw)
        absent = [w for w, t in enumerate(mapping) if t is unset]
        if absent:
            raise ParseError(f"signal is not total: no type for state {absent[0]}", where=pf.at("signal"))
        players.append(BayesianPlayer(action, utility, prior, SignalFunction(tuple(types), tuple(mapping))))
    return players


def parse_game(doc, base: Path = Path(".")) -> CausalGame:
    f = _Fields(doc, "", required=("family", "consequence_variable", "players"))
    models = _parse_models(f.get("family"), "family", base)
    consequence = f.get("consequence_variable", str)
    consequences = _domain_of(models, consequence, "consequence_variable")
    players = _parse_players(f, models, consequences, False, len(models))
    return CausalGame.from_models(models, consequence, players)


def parse_bayesian_game(doc, base: Path = Path(".")) -> BayesianCausalGame:
    f = _Fields(doc, "", required=("family", "consequence_variable", "players"))
    models = _parse_models(f.get("family"), "family", base)
    consequence = f.get("consequence_variable", str)
    consequences = _domain_of(models, consequence, "consequence_variable")
    players = _parse_players(f, models, consequences, True, len(models))
    family = ModelFamily(tuple(models), tuple(p.action_variable for p in players), consequence)
    return BayesianCausalGame(family, tuple(players))


SIM_FIELDS = ("true_model_index", "rounds", "exploration_rate", "rng_seed", "log_period")


def parse_sim_config(doc, **overrides) -> SimConfig:
    """Config document fields, then non-``None`` keyword overrides (CLI flags win)."""
    f = _Fields(doc if doc is not None else {}, "", optional=SIM_FIELDS)
    values = {}
    for name in SIM_FIELDS:
        kind = "number" if name == "exploration_rate" else "integer"
        v = f.get(name, kind)
        if v is not None:
            values[name] = v
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return SimConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def load(path, parser):
    path = Path(path)
    try:
        return parser(load_document(path), base=path.parent)
    except ParseError as exc:
        raise exc.at_path(path) from None
