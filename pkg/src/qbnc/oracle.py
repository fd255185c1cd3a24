"""Exact classical inference by full joint enumeration.

The joint probability of a complete assignment is the product of one CPT
entry per node, so desk-scale networks are handled by enumerating every
assignment outright. A hard guard refuses supports larger than 2**24
assignments; within that range double-precision accumulation keeps errors
far below the 1e-9 comparison tolerances used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping

import numpy as np

from .network import BayesianNetwork, topological_order

ENUMERATION_GUARD = 2 ** 24


class EnumerationLimitError(ValueError):
    """The network's joint support is too large to enumerate."""


@dataclass(frozen=True)
class JointDistribution:
    """Full joint table keyed by state-index tuples in topological order."""

    order: tuple[str, ...]
    assignments: Mapping[tuple[int, ...], float]

    def total(self) -> float:
        return float(sum(self.assignments.values()))


def joint_distribution(bn: BayesianNetwork) -> JointDistribution:
    """Enumerate P(assignment) for every complete assignment.

    Assignment tuples hold one state index per node, ordered by
    ``topological_order(bn)``.
    """
    order = topological_order(bn)
    position = {name: i for i, name in enumerate(order)}
    sizes = [bn.node(name).num_states for name in order]

    support = 1
    for s in sizes:
        support *= s
    if support > ENUMERATION_GUARD:
        raise EnumerationLimitError(
            f"joint support {support} exceeds enumeration guard {ENUMERATION_GUARD}"
        )

    parent_positions = {
        name: tuple(position[p] for p in bn.node(name).parents) for name in order
    }
    assignments: dict[tuple[int, ...], float] = {}
    for assignment in product(*(range(s) for s in sizes)):
        prob = 1.0
        for i, name in enumerate(order):
            cfg = tuple(assignment[j] for j in parent_positions[name])
            prob *= bn.node(name).cpt[cfg][assignment[i]]
        assignments[assignment] = prob
    return JointDistribution(order=tuple(order), assignments=assignments)


def exact_marginal(bn: BayesianNetwork, name: str) -> np.ndarray:
    """Marginal probability vector of one node, by summing out all others."""
    node = bn.node(name)  # raises KeyError for unknown nodes
    joint = joint_distribution(bn)
    pos = joint.order.index(name)
    out = np.zeros(node.num_states)
    for assignment, prob in joint.assignments.items():
        out[assignment[pos]] += prob
    return out
