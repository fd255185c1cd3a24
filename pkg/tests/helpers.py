"""Shared test utilities: random network generation and circuit/oracle diffs."""

from __future__ import annotations

import numpy as np

from qbnc import (
    BayesianNetwork,
    Circuit,
    Node,
    budget,
    joint_distribution,
    parent_configs,
    probabilities,
    statevector,
)


def random_network(rng: np.random.Generator, max_nodes: int = 5, max_states: int = 3,
                   max_parents: int = 3, max_total_qubits: int = 12) -> BayesianNetwork:
    """Random valid network: parents always precede children in document order."""
    while True:
        n = int(rng.integers(1, max_nodes + 1))
        nodes = []
        sizes = []
        for i in range(n):
            k = int(rng.integers(2, max_states + 1))
            n_parents = int(rng.integers(0, min(i, max_parents) + 1))
            parents = sorted(int(j) for j in rng.choice(i, size=n_parents, replace=False))
            sizes.append(k)
            rows = {}
            shape = [sizes[j] for j in parents]
            def fill(prefix, remaining):
                if not remaining:
                    rows[tuple(prefix)] = tuple(rng.dirichlet(np.ones(k)))
                    return
                for v in range(remaining[0]):
                    fill(prefix + [v], remaining[1:])
            fill([], shape)
            nodes.append(Node(
                name=f"N{i}",
                states=tuple(f"s{j}" for j in range(k)),
                parents=tuple(f"N{j}" for j in parents),
                cpt=rows,
            ))
        bn = BayesianNetwork(nodes=tuple(nodes))
        if budget(bn).total <= max_total_qubits:
            return bn


def assignment_bitstring(circuit: Circuit, order, assignment) -> str:
    """Bitstring (descending qubit order over node registers) of one assignment."""
    registers = {name: circuit.node_register(name) for name in order}
    bit_of_qubit: dict[int, int] = {}
    for name, state in zip(order, assignment):
        reg = registers[name]
        for pos, q in enumerate(reg):
            bit_of_qubit[q] = (state >> (len(reg) - 1 - pos)) & 1
    keep = sorted(bit_of_qubit, reverse=True)
    return "".join(str(bit_of_qubit[q]) for q in keep)


def max_joint_deviation(bn: BayesianNetwork, circuit: Circuit) -> float:
    """Largest |circuit probability - exact joint probability| over assignments.

    Also folds in any stray mass the circuit leaves outside the valid
    assignments (padding patterns), which must be zero.
    """
    joint = joint_distribution(bn)
    keep = sorted({q for name in joint.order for q in circuit.node_register(name)}, reverse=True)
    measured = probabilities(statevector(circuit), keep)
    seen = dict(measured)
    worst = 0.0
    for assignment, p in joint.assignments.items():
        key = assignment_bitstring(circuit, joint.order, assignment)
        worst = max(worst, abs(seen.pop(key) - p))
    stray = sum(seen.values())
    return max(worst, stray)


def cpt_rows(bn: BayesianNetwork, name: str):
    node = bn.node(name)
    return [node.cpt[cfg] for cfg in parent_configs(bn, node)]
