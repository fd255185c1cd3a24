"""Synthesis of Y-rotation angles from discrete probability distributions.

An RY(theta) applied to |0> prepares cos(theta/2)|0> + sin(theta/2)|1>, so a
two-outcome distribution (p0, p1) is realized exactly by

    theta = 2 * atan2(sqrt(p1), sqrt(p0))

which lies in [0, pi] and is well defined even when p0 = 0. A node with n
states occupies ceil(log2 n) qubits, and its distribution is realized by a
complete binary tree of conditional rotations: the root angle splits the
probability mass on the register's most significant qubit, and each subtree
recursively splits the conditional distribution given the ancestor bits.
State j maps to the binary expansion of j, most significant bit first;
indices past n-1 are padding and keep exactly zero probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np

from .network import ROW_SUM_TOL, Node


def qubit_width(n_states: int) -> int:
    """Number of qubits needed for an n-state variable: ceil(log2 n)."""
    if n_states < 2:
        raise ValueError(f"a discrete variable needs at least 2 states, got {n_states}")
    return (n_states - 1).bit_length()


def rotation_angle(p0: float, p1: float) -> float:
    """Angle whose RY sends |0> to the two-outcome distribution (p0, p1).

    The pair is renormalized implicitly (only the ratio matters), so CPT
    rows and unnormalized branch masses can be passed directly.
    """
    if p0 < 0.0 or p1 < 0.0:
        raise ValueError(f"probabilities must be nonnegative, got ({p0}, {p1})")
    if p0 == 0.0 and p1 == 0.0:
        raise ValueError("degenerate branch: both outcome masses are zero")
    return 2.0 * math.atan2(math.sqrt(p1), math.sqrt(p0))


def conditional_angles(node: Node) -> dict[tuple[int, ...], float]:
    """Rotation angle per parent configuration for a two-state node."""
    if node.num_states != 2:
        raise ValueError(
            f"node {node.name!r} has {node.num_states} states; "
            "conditional_angles handles two-state nodes only"
        )
    return {cfg: rotation_angle(row[0], row[1]) for cfg, row in node.cpt.items()}


@dataclass(frozen=True)
class AngleTree:
    """Binary tree of conditional rotation angles over a qubit register.

    ``angles`` maps each ancestor-bit path to the angle rotated onto the
    qubit at depth ``len(path)``; the root path is the empty tuple. A branch
    whose entire subtree carries zero probability stores identity rotations
    (angle 0), so padding states are never populated.
    """

    width: int
    angles: Mapping[tuple[int, ...], float]

    def nodes(self) -> Iterator[tuple[tuple[int, ...], float]]:
        """Pre-order traversal (parents before children, 0-branch first)."""
        def walk(path: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], float]]:
            yield path, self.angles[path]
            if len(path) + 1 < self.width:
                yield from walk(path + (0,))
                yield from walk(path + (1,))
        return walk(())

    def leaf_probabilities(self) -> np.ndarray:
        """Reconstruct the padded distribution from cos^2/sin^2 path products."""
        out = np.empty(2 ** self.width)
        for leaf in range(2 ** self.width):
            bits = [(leaf >> (self.width - 1 - d)) & 1 for d in range(self.width)]
            prob = 1.0
            for d in range(self.width):
                theta = self.angles[tuple(bits[:d])]
                half = math.sin(theta / 2.0) if bits[d] else math.cos(theta / 2.0)
                prob *= half * half
            out[leaf] = prob
        return out


def decompose_distribution(probs) -> AngleTree:
    """Build the rotation tree realizing an n-state distribution.

    ``probs`` must be nonnegative and sum to 1 within the row-sum tolerance;
    it is zero-padded to the next power of two.
    """
    probs = np.asarray(probs, dtype=float)
    if probs.ndim != 1:
        raise ValueError("expected a flat probability vector")
    if np.any(probs < 0.0):
        raise ValueError("probabilities must be nonnegative")
    total = float(probs.sum())
    if abs(total - 1.0) > ROW_SUM_TOL:
        raise ValueError(f"distribution sums to {total!r}, expected 1 within {ROW_SUM_TOL}")

    width = qubit_width(len(probs))
    padded = np.zeros(2 ** width)
    padded[: len(probs)] = probs

    angles: dict[tuple[int, ...], float] = {}

    def split(path: tuple[int, ...], lo: int, hi: int) -> None:
        if len(path) == width:
            return
        mid = (lo + hi) // 2
        mass0 = float(padded[lo:mid].sum())
        mass1 = float(padded[mid:hi].sum())
        # Unreachable branch: emit identity rotations to keep the tree total.
        angles[path] = 0.0 if mass0 + mass1 == 0.0 else rotation_angle(mass0, mass1)
        split(path + (0,), lo, mid)
        split(path + (1,), mid, hi)

    split((), 0, 2 ** width)
    return AngleTree(width=width, angles=angles)
