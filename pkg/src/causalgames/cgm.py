"""Discrete causal graphical models with exact observational and interventional queries.

A :class:`CausalModel` is a DAG over finite categorical variables with one
conditional probability table (CPT) per variable.  CPT rows are keyed by the
tuple of parent values in declared parent order and hold one probability per
domain value, in declared domain order.

Inference is exact enumeration over joint assignments, restricted to the
ancestral closure of the query variables (barren descendants sum out to one).
Interventions are computed by graph mutilation: ``do(X=x)`` removes the
incoming edges of ``X`` and replaces its CPT with a point mass on ``x``.
"""

from __future__ import annotations

import graphlib
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Iterable, Mapping, Sequence

from .errors import ModelValidationError, NullEventError, QueryError
from .settings import tolerance

Value = Hashable
Assignment = Mapping[str, Value]
Intervention = Mapping[str, Value]


@dataclass(frozen=True)
class Variable:
    name: str
    domain: tuple

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))


def _row_key(key) -> tuple:
    return key if isinstance(key, tuple) else (key,)


@dataclass(frozen=True, eq=True)
class CausalModel:
    """Immutable discrete causal graphical model.

    Construction does not enforce the invariants, so that malformed models can
    be inspected with :func:`validate`.  The first query on a model validates
    it and raises :class:`ModelValidationError` on any violation.
    """

    variables: tuple[Variable, ...]
    parents: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    cpts: Mapping[str, Mapping[tuple, tuple[float, ...]]] = field(default_factory=dict)

    def __post_init__(self):
        variables = tuple(self.variables)
        parents = {v.name: () for v in variables}
        for name, ps in self.parents.items():
            parents[name] = tuple(ps)
        cpts = {
            name: {_row_key(k): tuple(float(p) for p in row) for k, row in table.items()}
            for name, table in self.cpts.items()
        }
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "parents", parents)
        object.__setattr__(self, "cpts", cpts)

    @classmethod
    def build(
        cls,
        domains: Mapping[str, Sequence[Value]],
        parents: Mapping[str, Sequence[str]] | None = None,
        cpts: Mapping[str, Any] | None = None,
    ) -> "CausalModel":
        """Convenience constructor.

        ``cpts[name]`` is either a mapping from parent values to a probability
        row, or a bare row for a root variable.  Single-parent keys may be given
        without the enclosing tuple.
        """
        tables = {}
        for name, table in (cpts or {}).items():
            if isinstance(table, Mapping):
                tables[name] = table
            else:
                tables[name] = {(): table}
        return cls(
            tuple(Variable(n, tuple(d)) for n, d in domains.items()),
            dict(parents or {}),
            tables,
        )

    # -- lookups ----------------------------------------------------------

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @cached_property
    def _variables_by_name(self) -> dict[str, Variable]:
        return {v.name: v for v in self.variables}

    @cached_property
    def _value_index(self) -> dict[str, dict[Value, int]]:
        return {v.name: {val: i for i, val in enumerate(v.domain)} for v in self.variables}

    def variable(self, name: str) -> Variable:
        try:
            return self._variables_by_name[name]
        except KeyError:
            raise QueryError(f"unknown variable {name!r}") from None

    def domain(self, name: str) -> tuple:
        return self.variable(name).domain

    def value_index(self, name: str, value: Value) -> int:
        index = self._value_index.get(name)
        if index is None:
            raise QueryError(f"unknown variable {name!r}")
        try:
            return index[value]
        except (KeyError, TypeError):
            raise QueryError(f"value {value!r} not in domain of {name!r}") from None

    def children(self, name: str) -> tuple[str, ...]:
        return tuple(c for c in self.names if name in self.parents[c])

    def descendants(self, name: str) -> set[str]:
        seen: set[str] = set()
        stack = [name]
        while stack:
            for child in self.children(stack.pop()):
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        return seen

    def ancestors(self, names: Iterable[str]) -> set[str]:
        """Ancestral closure of ``names`` (the names themselves included)."""
        seen = set()
        stack = list(names)
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            stack.extend(self.parents.get(n, ()))
        return seen

    @cached_property
    def topological_order(self) -> tuple[str, ...]:
        problems = validate(self)
        if problems:
            raise ModelValidationError(problems)
        sorter = graphlib.TopologicalSorter({n: self.parents[n] for n in self.names})
        rank = {n: i for i, n in enumerate(self.names)}
        sorter.prepare()
        order: list[str] = []
        while sorter.is_active():
            ready = sorted(sorter.get_ready(), key=rank.__getitem__)
            order.extend(ready)
            sorter.done(*ready)
        return tuple(order)

    def row(self, name: str, assignment: Assignment) -> tuple[float, ...]:
        key = tuple(assignment[p] for p in self.parents[name])
        return self.cpts[name][key]


# -- validation ------------------------------------------------------------


def _format_given(parents: Sequence[str], key: tuple) -> str:
    return ", ".join(f"{p}={v}" for p, v in zip(parents, key))


def _find_cycle(model: CausalModel) -> list[str] | None:
    graph = {n: [p for p in model.parents.get(n, ()) if p in model._variables_by_name]
             for n in model.names}
    try:
        graphlib.TopologicalSorter(graph).prepare()
    except graphlib.CycleError as exc:
        cycle = list(exc.args[1][:-1])
        rank = {n: i for i, n in enumerate(model.names)}
        start = min(range(len(cycle)), key=lambda i: rank[cycle[i]])
        return cycle[start:] + cycle[:start]
    return None


def validate(model: CausalModel) -> list[str]:
    """Return every invariant violation of ``model``; an empty list means valid."""
    problems: list[str] = []
    tol = tolerance()
    seen_names: set[str] = set()
    for var in model.variables:
        if var.name in seen_names:
            problems.append(f"{var.name}: duplicate variable name")
        seen_names.add(var.name)
        if len(var.domain) == 0:
            problems.append(f"{var.name}: empty domain")
        try:
            if len(set(var.domain)) != len(var.domain):
                problems.append(f"{var.name}: duplicate domain values")
        except TypeError:
            problems.append(f"{var.name}: domain values must be hashable")
    if problems:
        return problems

    for name, ps in model.parents.items():
        if name not in seen_names:
            problems.append(f"{name}: parents declared for unknown variable")
            continue
        for p in ps:
            if p not in seen_names:
                problems.append(f"{name}: unknown parent {p!r}")
        if len(set(ps)) != len(ps):
            problems.append(f"{name}: duplicate parent")
        if name in ps:
            problems.append(f"{name}: variable is its own parent")
    for name in model.cpts:
        if name not in seen_names:
            problems.append(f"{name}: CPT for unknown variable")
    if problems:
        return problems

    cycle = _find_cycle(model)
    if cycle is not None:
        problems.append("cycle: " + ",".join(cycle))

    for var in model.variables:
        table = model.cpts.get(var.name)
        if table is None:
            problems.append(f"{var.name}: missing CPT")
            continue
        ps = model.parents[var.name]
        expected = _parent_keys(model, ps)
        expected_set = set(expected)
        for key in table:
            if key not in expected_set:
                problems.append(f"{var.name}: row for unexpected parent values {key!r}")
        for key in expected:
            row = table.get(key)
            given = _format_given(ps, key)
            label = f"row for {given}" if given else "row"
            if row is None:
                problems.append(f"{var.name}: missing {label}")
                continue
            if len(row) != len(var.domain):
                problems.append(
                    f"{var.name}: {label} has {len(row)} entries, domain has {len(var.domain)}"
                )
                continue
            if any(not math.isfinite(p) or p < 0 for p in row):
                problems.append(f"{var.name}: {label} has negative or non-finite entry")
                continue
            s = math.fsum(row)
            if abs(s - 1.0) > tol:
                problems.append(f"{var.name}: {label} sums to {s:.12g}")
    return problems


def _parent_keys(model: CausalModel, parents: Sequence[str]) -> list[tuple]:
    keys: list[tuple] = [()]
    for p in parents:
        keys = [k + (v,) for k in keys for v in model.domain(p)]
    return keys


# -- queries ---------------------------------------------------------------


def check_assignment(model: CausalModel, assignment: Assignment) -> None:
    for name, value in assignment.items():
        model.value_index(name, value)


def joint_probability(model: CausalModel, total: Assignment) -> float:
    order = model.topological_order
    check_assignment(model, total)
    missing = [n for n in order if n not in total]
    if missing:
        raise QueryError(f"incomplete assignment: missing {', '.join(missing)}")
    p = 1.0
    for name in order:
        p *= model.row(name, total)[model.value_index(name, total[name])]
    return p


def _unnormalized(model: CausalModel, target: str, evidence: Assignment) -> list[float]:
    """Joint mass P(target=t, evidence) for every t, by depth-first enumeration."""
    relevant = model.ancestors([target, *evidence])
    order = [n for n in model.topological_order if n in relevant]
    index = model._value_index
    domains = {n: model.domain(n) for n in order}
    acc = [0.0] * len(domains[target])
    assignment = dict(evidence)
    t_index = index[target]
    depth = len(order)

    def visit(k: int, p: float) -> None:
        if p == 0.0:
            return
        if k == depth:
            acc[t_index[assignment[target]]] += p
            return
        name = order[k]
        row = model.row(name, assignment)
        if name in evidence:
            visit(k + 1, p * row[index[name][evidence[name]]])
            return
        for i, value in enumerate(domains[name]):
            assignment[name] = value
            visit(k + 1, p * row[i])
        del assignment[name]

    visit(0, 1.0)
    return acc


def observational_query(
    model: CausalModel, target: str, evidence: Assignment | None = None
) -> dict[Value, float]:
    """Exact conditional distribution P(target | evidence), keyed in domain order."""
    evidence = dict(evidence or {})
    model.topological_order
    model.variable(target)
    check_assignment(model, evidence)
    if target in evidence:
        raise QueryError(f"evidence assigns the target {target!r}")
    acc = _unnormalized(model, target, evidence)
    total = math.fsum(acc)
    if total <= 0.0:
        raise NullEventError("conditioning on null event")
    return {value: mass / total for value, mass in zip(model.domain(target), acc)}


def mutilate(model: CausalModel, iv: Intervention) -> CausalModel:
    """Return the model under ``do(iv)``: intervened variables lose their parents
    and get a degenerate CPT on the forced value."""
    check_assignment(model, iv)
    if not iv:
        return model
    parents = dict(model.parents)
    cpts = dict(model.cpts)
    for name, value in iv.items():
        k = model.value_index(name, value)
        parents[name] = ()
        cpts[name] = {(): tuple(1.0 if i == k else 0.0 for i in range(len(model.domain(name))))}
    return CausalModel(model.variables, parents, cpts)


def interventional_query(
    model: CausalModel,
    iv: Intervention,
    target: str,
    extra_evidence: Assignment | None = None,
) -> dict[Value, float]:
    """P(target | do(iv), extra_evidence)."""
    if target in iv:
        raise QueryError(f"target {target!r} is intervened upon")
    return observational_query(mutilate(model, iv), target, extra_evidence)
