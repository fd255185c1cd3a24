"""Dense statevector execution, seeded shot sampling, and run statistics.

Amplitudes are stored little-endian: bit i of a basis-state index is the
value of qubit i, and bitstrings print with the highest qubit index leftmost.
Controlled gates apply their 2x2 target matrix on the subspace where every
control qubit is |1>, via in-place strided writes on the amplitude tensor.

Shot sampling draws from the Born distribution of the measured qubits with
numpy's PCG64 generator (a published, seedable algorithm), so counts are
reproducible across platforms for a given seed. Repeated-run statistics use
Student-t confidence intervals on the per-run marginal estimates.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from .circuit import Circuit, GateKind

MAX_SIM_QUBITS = 30
GENERATOR_NAME = "numpy-pcg64"

_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def gate_target_matrix(kind: GateKind, params: Sequence[float] = ()) -> np.ndarray:
    """2x2 unitary applied to a gate's target qubit (controls excluded)."""
    if kind in (GateKind.X, GateKind.CX, GateKind.CCX):
        return _X.copy()
    if kind in (GateKind.RY, GateKind.CRY, GateKind.MCRY):
        (theta,) = params
        c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind is GateKind.RZ:
        (lam,) = params
        return np.array([[1.0, 0.0], [0.0, np.exp(1j * lam)]], dtype=complex)
    if kind is GateKind.U3:
        theta, phi, lam = params
        c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
        return np.array(
            [[c, -np.exp(1j * lam) * s],
             [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]],
            dtype=complex,
        )
    raise ValueError(f"no unitary for gate kind {kind!r}")


def _apply(psi: np.ndarray, mat: np.ndarray, target: int, controls: tuple[int, ...], n: int) -> None:
    """Apply `mat` to `target` where all `controls` are 1; writes in place."""
    index: list = [slice(None)] * n
    for c in controls:
        index[n - 1 - c] = 1
    sub = psi[tuple(index)]
    axis = sum(1 for j in range(n - 1 - target) if isinstance(index[j], slice))
    moved = np.moveaxis(sub, axis, -1)
    moved[...] = moved @ mat.T


def statevector(circuit: Circuit) -> np.ndarray:
    """Run every unitary gate on |0...0>; measurement gates are ignored."""
    n = circuit.num_qubits
    if n > MAX_SIM_QUBITS:
        raise ValueError(f"{n} qubits exceeds the {MAX_SIM_QUBITS}-qubit simulation guard")
    psi = np.zeros([2] * n, dtype=complex)
    psi[(0,) * n] = 1.0
    for gate in circuit.gates:
        if gate.kind is GateKind.MEASURE:
            continue
        _apply(psi, gate_target_matrix(gate.kind, gate.params), gate.target, gate.controls, n)
    return psi.reshape(-1)


def circuit_unitary(circuit: Circuit, max_qubits: int = 12) -> np.ndarray:
    """Full matrix of a measurement-free circuit (small circuits only)."""
    n = circuit.num_qubits
    if n > max_qubits:
        raise ValueError(f"unitary construction capped at {max_qubits} qubits")
    dim = 2 ** n
    # work[k] holds the image of basis vector k as a [2]*n amplitude tensor.
    work = np.eye(dim, dtype=complex).reshape([dim] + [2] * n)
    for gate in circuit.gates:
        if gate.kind is GateKind.MEASURE:
            raise ValueError("circuit_unitary does not support measurement gates")
        mat = gate_target_matrix(gate.kind, gate.params)
        for k in range(dim):
            _apply(work[k], mat, gate.target, gate.controls, n)
    return work.reshape(dim, dim).T.copy()


def probabilities(sv: np.ndarray, keep: Sequence[int]) -> dict[str, float]:
    """Born probabilities of the kept qubits, discarded qubits summed out.

    Keys are bitstrings over the kept qubits, highest index leftmost.
    """
    n = int(math.log2(len(sv)))
    keep = list(keep)
    if len(set(keep)) != len(keep) or any(not 0 <= q < n for q in keep):
        raise ValueError(f"keep indices must be distinct qubits below {n}, got {keep}")
    probs = np.abs(np.asarray(sv)) ** 2
    probs = probs.reshape([2] * n)
    drop = tuple(j for j in range(n) if (n - 1 - j) not in keep)
    if drop:
        probs = probs.sum(axis=drop)
    flat = probs.reshape(-1)
    width = len(keep)
    return {format(i, f"0{width}b"): float(flat[i]) for i in range(len(flat))}


@dataclass(frozen=True)
class ShotCounts:
    """Histogram of measured bitstrings; only observed outcomes appear."""

    counts: Mapping[str, int]
    total_shots: int
    qubits: tuple[int, ...]  # measured qubits, descending; aligns with key characters
    generator: str = GENERATOR_NAME


def _measured_distribution(circuit: Circuit) -> tuple[list[str], np.ndarray, tuple[int, ...]]:
    measured = circuit.measured_qubits
    if not measured:
        raise ValueError("circuit has no measurement gates to sample")
    pmap = probabilities(statevector(circuit), list(measured))
    keys = list(pmap)
    p = np.array([pmap[k] for k in keys])
    p = np.clip(p, 0.0, None)
    p /= p.sum()
    return keys, p, tuple(sorted(measured, reverse=True))


def sample(circuit: Circuit, shots: int, seed: int) -> ShotCounts:
    """Draw `shots` independent measurements; deterministic for a seed."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    keys, p, qubits = _measured_distribution(circuit)
    draws = np.random.default_rng(seed).multinomial(shots, p)
    counts = {k: int(c) for k, c in zip(keys, draws) if c}
    return ShotCounts(counts=counts, total_shots=shots, qubits=qubits)


@dataclass(frozen=True)
class MarginalEstimate:
    """Per-state probabilities plus any mass decoded to padding patterns."""

    probabilities: np.ndarray
    padding_mass: float


def _decode(weights: Mapping[str, float], qubits: tuple[int, ...],
            registers: Mapping[str, tuple[int, ...]],
            num_states: Mapping[str, int] | None) -> dict[str, MarginalEstimate]:
    position = {q: i for i, q in enumerate(qubits)}
    out: dict[str, MarginalEstimate] = {}
    for name, register in registers.items():
        for q in register:
            if q not in position:
                raise ValueError(f"register qubit {q} of node {name!r} is not among the measured qubits")
        limit = num_states[name] if num_states else 2 ** len(register)
        vec = np.zeros(limit)
        padding = 0.0
        for bits, w in weights.items():
            value = int("".join(bits[position[q]] for q in register), 2)
            if value < limit:
                vec[value] += w
            else:
                padding += w
        out[name] = MarginalEstimate(probabilities=vec, padding_mass=padding)
    return out


def marginals(counts: ShotCounts, registers: Mapping[str, tuple[int, ...]],
              num_states: Mapping[str, int] | None = None) -> dict[str, MarginalEstimate]:
    """Per-node marginal estimates from shot counts.

    Register bit patterns decode to state indices (most significant register
    qubit first); mass landing on patterns >= the node's state count is
    reported separately as padding and should be zero.
    """
    weights = {k: c / counts.total_shots for k, c in counts.counts.items()}
    return _decode(weights, counts.qubits, registers, num_states)


def _circuit_registers(circuit: Circuit) -> tuple[dict[str, tuple[int, ...]], dict[str, int]]:
    registers = {name: circuit.node_register(name) for name in circuit.node_names}
    sizes = {name: len(circuit.state_labels[name]) for name in registers}
    return registers, sizes


def exact_node_marginals(circuit: Circuit) -> dict[str, MarginalEstimate]:
    """Statevector (noise-free) marginals of every node register."""
    registers, sizes = _circuit_registers(circuit)
    measured = sorted({q for reg in registers.values() for q in reg}, reverse=True)
    weights = probabilities(statevector(circuit), measured)
    return _decode(weights, tuple(measured), registers, sizes)


@dataclass(frozen=True)
class StateEstimate:
    node: str
    state: str
    mean: float
    sd: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class RunReport:
    """Mean, spread, and t-interval of marginals over repeated sampling runs."""

    runs: int
    shots: int
    alpha: float
    base_seed: int
    generator: str
    estimates: tuple[StateEstimate, ...]

    def by_node(self) -> dict[str, list[StateEstimate]]:
        grouped: dict[str, list[StateEstimate]] = {}
        for est in self.estimates:
            grouped.setdefault(est.node, []).append(est)
        return grouped

    def to_json(self) -> str:
        nodes = [
            {
                "name": name,
                "states": [
                    {"state": e.state, "mean": e.mean, "sd": e.sd, "ci": [e.ci_low, e.ci_high]}
                    for e in ests
                ],
            }
            for name, ests in self.by_node().items()
        ]
        doc = {
            "runs": self.runs,
            "shots": self.shots,
            "alpha": self.alpha,
            "seed": self.base_seed,
            "generator": self.generator,
            "nodes": nodes,
        }
        return json.dumps(doc, indent=2)


def run_experiment(circuit: Circuit, runs: int = 10, shots: int = 8192,
                   alpha: float = 0.05, seed: int = 0) -> RunReport:
    """Repeat seeded sampling runs and report per-state t-intervals.

    Run i uses seed ``seed + i``; the Born distribution is computed once and
    each run's counts match a standalone ``sample`` call with that seed.
    """
    if runs < 2:
        raise ValueError("need at least 2 runs for a sample standard deviation")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    keys, p, qubits = _measured_distribution(circuit)
    registers, sizes = _circuit_registers(circuit)

    per_run: dict[str, list[np.ndarray]] = {name: [] for name in registers}
    for i in range(runs):
        draws = np.random.default_rng(seed + i).multinomial(shots, p)
        counts = ShotCounts(
            counts={k: int(c) for k, c in zip(keys, draws) if c},
            total_shots=shots, qubits=qubits,
        )
        for name, est in marginals(counts, registers, sizes).items():
            per_run[name].append(est.probabilities)

    t_half = float(stats.t.ppf(1.0 - alpha / 2.0, runs - 1))
    estimates: list[StateEstimate] = []
    for name, register_runs in per_run.items():
        samples = np.stack(register_runs)  # runs x states
        means = samples.mean(axis=0)
        sds = samples.std(axis=0, ddof=1)
        for idx, label in enumerate(circuit.state_labels[name]):
            half = t_half * sds[idx] / math.sqrt(runs)
            estimates.append(StateEstimate(
                node=name, state=label,
                mean=float(means[idx]), sd=float(sds[idx]),
                ci_low=float(means[idx] - half), ci_high=float(means[idx] + half),
            ))
    return RunReport(runs=runs, shots=shots, alpha=alpha, base_seed=seed,
                     generator=GENERATOR_NAME, estimates=tuple(estimates))
