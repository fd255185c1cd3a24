"""Discrete Bayesian network model, document format, and validation.

A network is a DAG of discrete nodes. Every node carries an ordered list of
state labels (at least two) and a conditional probability table with exactly
one row per configuration of its parents; a root node has a single row keyed
by the empty tuple. Parent configurations iterate in row-major order with the
last parent varying fastest, which fixes CPT row order for compilation and
for the document format.

The document format is JSON with a top-level ``"nodes"`` list::

    {"nodes": [{"name": "A",
                "states": ["0", "1"],
                "parents": [],
                "cpt": [{"given": [], "p": [0.2, 0.8]}]}]}

``given`` holds parent *state labels* in parent order. Unknown top-level keys
are ignored so documents can carry provenance metadata.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Mapping

ROW_SUM_TOL = 1e-9


class ParseError(ValueError):
    """Malformed document: bad JSON syntax or a schema violation."""


class CycleError(ValueError):
    """The parent relation admits no topological order."""


class ValidationError(ValueError):
    """A structurally well-formed network violates one or more invariants."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


@dataclass(frozen=True)
class Node:
    """One discrete random variable: state labels, parents, and its CPT.

    ``cpt`` maps each parent configuration (tuple of parent state indices,
    ordered like ``parents``) to a probability vector over this node's
    states. State labels are positional: label index 0 is state 0.
    """

    name: str
    states: tuple[str, ...]
    parents: tuple[str, ...]
    cpt: Mapping[tuple[int, ...], tuple[float, ...]]

    @property
    def num_states(self) -> int:
        return len(self.states)

    def state_index(self, label: str) -> int:
        return self.states.index(label)


@dataclass(frozen=True)
class BayesianNetwork:
    """Immutable ordered collection of nodes; order is document order."""

    nodes: tuple[Node, ...]
    _by_name: dict[str, Node] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_name", {n.name: n for n in self.nodes})

    def node(self, name: str) -> Node:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown node {name!r}") from None

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n.name for n in self.nodes)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name


def parent_configs(bn: BayesianNetwork, node: Node) -> Iterator[tuple[int, ...]]:
    """All parent configurations in canonical order (last parent fastest)."""
    ranges = [range(bn.node(p).num_states) for p in node.parents]
    return product(*ranges)


def validate(bn: BayesianNetwork) -> list[str]:
    """Return every violated invariant as a message; an empty list is valid.

    Row sums are checked against 1 with absolute tolerance ``ROW_SUM_TOL``;
    out-of-tolerance probabilities are reported rather than renormalized.
    """
    problems: list[str] = []
    seen: set[str] = set()
    for node in bn.nodes:
        if not node.name:
            problems.append("node with empty name")
        if node.name in seen:
            problems.append(f"duplicate node name {node.name!r}")
        seen.add(node.name)

    names = {n.name for n in bn.nodes}
    resolvable = True
    for node in bn.nodes:
        if node.num_states < 2:
            problems.append(f"node {node.name!r}: needs at least 2 states, has {node.num_states}")
        if len(set(node.states)) != len(node.states):
            problems.append(f"node {node.name!r}: duplicate state labels")
        if len(set(node.parents)) != len(node.parents):
            problems.append(f"node {node.name!r}: duplicate parents")
        if node.name in node.parents:
            problems.append(f"node {node.name!r}: lists itself as a parent")
            resolvable = False
        for p in node.parents:
            if p not in names:
                problems.append(f"node {node.name!r}: unknown parent {p!r}")
                resolvable = False

    if resolvable:
        try:
            topological_order(bn)
        except CycleError as exc:
            problems.append(str(exc))

    for node in bn.nodes:
        if any(p not in names for p in node.parents):
            continue  # row shape is undefined until parents resolve
        expected = set(parent_configs(bn, node))
        got = set(node.cpt.keys())
        for cfg in sorted(expected - got):
            problems.append(f"node {node.name!r}: missing CPT row for parent configuration {cfg}")
        for cfg in sorted(got - expected):
            problems.append(f"node {node.name!r}: unexpected CPT row key {cfg}")
        for cfg in sorted(expected & got):
            row = node.cpt[cfg]
            if len(row) != node.num_states:
                problems.append(
                    f"node {node.name!r}: row {cfg} has {len(row)} entries, expected {node.num_states}"
                )
                continue
            if any(p < 0.0 or p > 1.0 for p in row):
                problems.append(f"node {node.name!r}: row {cfg} has a probability outside [0, 1]")
            total = sum(row)
            if abs(total - 1.0) > ROW_SUM_TOL:
                problems.append(
                    f"node {node.name!r}: row {cfg} sums to {total!r}, expected 1 within {ROW_SUM_TOL}"
                )
    return problems


def topological_order(bn: BayesianNetwork) -> list[str]:
    """Node names with every parent before its children.

    Deterministic: among ready nodes the one earliest in document order is
    emitted first. Raises CycleError if the parent relation has a cycle.
    """
    remaining = {n.name: set(n.parents) for n in bn.nodes}
    order: list[str] = []
    placed: set[str] = set()
    while remaining:
        ready = next((name for name in bn.names if name in remaining and remaining[name] <= placed), None)
        if ready is None:
            cyclic = ", ".join(sorted(remaining))
            raise CycleError(f"cycle detected among nodes: {cyclic}")
        del remaining[ready]
        placed.add(ready)
        order.append(ready)
    return order


def _schema(cond: bool, msg: str) -> None:
    if not cond:
        raise ParseError(msg)


def parse_network(text: str) -> BayesianNetwork:
    """Parse and validate a network document.

    Raises ParseError (with position for syntax errors) on malformed input
    and ValidationError when the parsed network violates an invariant.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc

    _schema(isinstance(doc, dict), "document root must be an object")
    _schema("nodes" in doc, 'document must have a top-level "nodes" list')
    raw_nodes = doc["nodes"]
    _schema(isinstance(raw_nodes, list), '"nodes" must be a list')

    specs = []
    for i, raw in enumerate(raw_nodes):
        where = f"nodes[{i}]"
        _schema(isinstance(raw, dict), f"{where}: node must be an object")
        for key, kind in (("name", str), ("states", list), ("parents", list), ("cpt", list)):
            _schema(key in raw, f"{where}: missing {key!r}")
            _schema(isinstance(raw[key], kind), f"{where}: {key!r} must be a {kind.__name__}")
        _schema(all(isinstance(s, str) for s in raw["states"]), f"{where}: states must be strings")
        _schema(all(isinstance(p, str) for p in raw["parents"]), f"{where}: parents must be strings")
        rows = []
        for j, row in enumerate(raw["cpt"]):
            rw = f"{where}.cpt[{j}]"
            _schema(isinstance(row, dict), f"{rw}: row must be an object")
            _schema("given" in row and "p" in row, f'{rw}: row needs "given" and "p"')
            _schema(isinstance(row["given"], list) and all(isinstance(g, str) for g in row["given"]),
                    f'{rw}: "given" must be a list of state labels')
            _schema(isinstance(row["p"], list) and all(isinstance(x, (int, float)) and not isinstance(x, bool)
                                                       for x in row["p"]),
                    f'{rw}: "p" must be a list of numbers')
            rows.append((list(row["given"]), [float(x) for x in row["p"]]))
        specs.append((raw["name"], list(raw["states"]), list(raw["parents"]), rows))

    # Resolve "given" labels to parent state indices. Unresolvable references
    # are reported through ValidationError alongside the structural checks.
    label_index = {name: {s: k for k, s in enumerate(states)} for name, states, _, _ in specs}
    resolution: list[str] = []
    nodes = []
    for name, states, parents, rows in specs:
        cpt: dict[tuple[int, ...], tuple[float, ...]] = {}
        for given, p in rows:
            if len(given) != len(parents):
                resolution.append(f"node {name!r}: row {given} names {len(given)} parent states, "
                                  f"expected {len(parents)}")
                continue
            key = []
            ok = True
            for parent, label in zip(parents, given):
                idx = label_index.get(parent, {}).get(label)
                if idx is None:
                    resolution.append(f"node {name!r}: row refers to unknown state {label!r} of {parent!r}")
                    ok = False
                    break
                key.append(idx)
            if not ok:
                continue
            if tuple(key) in cpt:
                resolution.append(f"node {name!r}: duplicate CPT row for configuration {tuple(key)}")
            cpt[tuple(key)] = tuple(p)
        nodes.append(Node(name=name, states=tuple(states), parents=tuple(parents), cpt=cpt))

    bn = BayesianNetwork(nodes=tuple(nodes))
    problems = resolution + validate(bn)
    if problems:
        raise ValidationError(problems)
    return bn


def emit_network(bn: BayesianNetwork) -> str:
    """Serialize to the canonical document form (CPT rows in canonical order).

    ``parse_network(emit_network(bn))`` reproduces ``bn`` exactly; floats are
    emitted with full round-trip precision.
    """
    out = {"nodes": []}
    for node in bn.nodes:
        rows = []
        for cfg in parent_configs(bn, node):
            given = [bn.node(p).states[idx] for p, idx in zip(node.parents, cfg)]
            rows.append({"given": given, "p": list(node.cpt[cfg])})
        out["nodes"].append({
            "name": node.name,
            "states": list(node.states),
            "parents": list(node.parents),
            "cpt": rows,
        })
    return json.dumps(out, indent=2)
