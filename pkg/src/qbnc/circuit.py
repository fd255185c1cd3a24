"""Gate-level circuit representation, qubit budgeting, and text export.

Qubit indexing follows the little-endian register convention: basis states
are written |q_{n-1} ... q_0> with qubit 0 rightmost. Node registers occupy
the high indices (parents above children, the first/most significant bit of
a multi-qubit register highest); ancilla qubits take the lowest indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .angles import qubit_width
from .network import BayesianNetwork


class CircuitError(ValueError):
    """Structural violation: bad gate arity, index, or measurement target."""


class GateKind(str, Enum):
    X = "x"
    RY = "ry"
    RZ = "rz"
    U3 = "u3"
    CX = "cx"
    CCX = "ccx"
    CRY = "cry"
    MCRY = "mcry"
    MEASURE = "measure"


_NUM_PARAMS = {
    GateKind.X: 0, GateKind.RY: 1, GateKind.RZ: 1, GateKind.U3: 3,
    GateKind.CX: 0, GateKind.CCX: 0, GateKind.CRY: 1, GateKind.MCRY: 1,
    GateKind.MEASURE: 0,
}
# MCRY is absent: it takes any number of controls >= 1.
_NUM_CONTROLS = {
    GateKind.X: 0, GateKind.RY: 0, GateKind.RZ: 0, GateKind.U3: 0,
    GateKind.CX: 1, GateKind.CCX: 2, GateKind.CRY: 1, GateKind.MEASURE: 0,
}


@dataclass(frozen=True)
class Gate:
    """One operation: a target qubit, optional controls and parameters."""

    kind: GateKind
    target: int
    controls: tuple[int, ...] = ()
    params: tuple[float, ...] = ()
    classical_bit: int | None = None

    def __post_init__(self):
        expected = _NUM_PARAMS[self.kind]
        if len(self.params) != expected:
            raise CircuitError(f"{self.kind.value} takes {expected} parameter(s), got {len(self.params)}")
        if self.kind is GateKind.MCRY:
            if len(self.controls) < 1:
                raise CircuitError("mcry needs at least one control")
        elif len(self.controls) != _NUM_CONTROLS[self.kind]:
            raise CircuitError(
                f"{self.kind.value} takes {_NUM_CONTROLS[self.kind]} control(s), got {len(self.controls)}"
            )
        if self.kind is GateKind.MEASURE:
            if self.classical_bit is None:
                raise CircuitError("measure needs a classical bit")
        elif self.classical_bit is not None:
            raise CircuitError(f"{self.kind.value} does not take a classical bit")
        qubits = (*self.controls, self.target)
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f"duplicate qubit index in {self.kind.value} gate {qubits}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (*self.controls, self.target)


@dataclass(frozen=True)
class QubitRole:
    """Role label: part of a node register, or an ancilla when node is None.

    ``bit`` is the position within the node register, 0 = most significant.
    """

    node: str | None = None
    bit: int | None = None

    @property
    def is_ancilla(self) -> bool:
        return self.node is None


@dataclass
class Circuit:
    """Ordered gate list over an indexed qubit and classical register.

    Built by appending gates (each append is validated); treated as
    immutable once construction finishes, after which it is safe to share
    across threads.
    """

    num_qubits: int
    num_clbits: int = 0
    labels: dict[int, QubitRole] = field(default_factory=dict)
    state_labels: dict[str, tuple[str, ...]] = field(default_factory=dict)
    gates: list[Gate] = field(default_factory=list)

    def append(self, gate: Gate) -> "Circuit":
        for q in gate.qubits:
            if not 0 <= q < self.num_qubits:
                raise CircuitError(f"qubit index {q} out of range for {self.num_qubits}-qubit circuit")
        if gate.kind is GateKind.MEASURE:
            if not 0 <= gate.classical_bit < self.num_clbits:
                raise CircuitError(f"classical bit {gate.classical_bit} out of range")
            role = self.labels.get(gate.target)
            if role is not None and role.is_ancilla:
                raise CircuitError(f"measurement targets ancilla qubit {gate.target}")
        self.gates.append(gate)
        return self

    def extend(self, gates) -> "Circuit":
        for g in gates:
            self.append(g)
        return self

    def node_register(self, name: str) -> tuple[int, ...]:
        """Qubit indices of one node's register, most significant bit first."""
        pairs = [(role.bit, q) for q, role in self.labels.items() if role.node == name]
        if not pairs:
            raise KeyError(f"no register for node {name!r}")
        return tuple(q for _, q in sorted(pairs))

    @property
    def node_names(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for q in sorted(self.labels, reverse=True):
            role = self.labels[q]
            if role.node is not None and role.node not in seen:
                seen[role.node] = None
        return tuple(seen)

    @property
    def ancilla_qubits(self) -> tuple[int, ...]:
        return tuple(sorted(q for q, role in self.labels.items() if role.is_ancilla))

    @property
    def measured_qubits(self) -> tuple[int, ...]:
        return tuple(g.target for g in self.gates if g.kind is GateKind.MEASURE)


def validate_circuit(circuit: Circuit) -> list[str]:
    """Re-check every gate against the circuit; equals per-append validation."""
    probe = Circuit(
        num_qubits=circuit.num_qubits,
        num_clbits=circuit.num_clbits,
        labels=circuit.labels,
        state_labels=circuit.state_labels,
    )
    problems = []
    for i, gate in enumerate(circuit.gates):
        try:
            probe.append(gate)
        except CircuitError as exc:
            problems.append(f"gate {i}: {exc}")
    return problems


@dataclass(frozen=True)
class QubitBudget:
    """Register sizing for one network: node qubits plus shared ancillas."""

    node_qubits: int
    ancilla_qubits: int

    @property
    def total(self) -> int:
        return self.node_qubits + self.ancilla_qubits


def budget(bn: BayesianNetwork) -> QubitBudget:
    """Qubit requirements of a network.

    Node registers take ceil(log2 n_i) qubits each. The deepest controlled
    rotation for a node conditions on its whole parent register plus all but
    one qubit of its own register, and a rotation with c controls needs c-1
    ancillas, so the shared ancilla pool is

        max over nodes of (parent register width + own width - 2),

    floored at zero (root nodes and single-qubit chains need none).
    """
    node_qubits = 0
    ancillas = 0
    for node in bn.nodes:
        own = qubit_width(node.num_states)
        node_qubits += own
        parent_width = sum(qubit_width(bn.node(p).num_states) for p in node.parents)
        ancillas = max(ancillas, parent_width + own - 2)
    return QubitBudget(node_qubits=node_qubits, ancilla_qubits=max(0, ancillas))


def gate_census(circuit: Circuit) -> dict[str, int]:
    """Exact per-kind gate counts, keyed by gate name."""
    counts = {kind.value: 0 for kind in GateKind}
    for gate in circuit.gates:
        counts[gate.kind.value] += 1
    return counts


def to_qasm(circuit: Circuit) -> str:
    """Export to OPENQASM 2.0 text. MCRY gates must be lowered first.

    Angles print with 12 significant digits (round-half-even), making the
    output stable for golden-file comparison.
    """
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";', f"qreg q[{circuit.num_qubits}];"]
    if circuit.num_clbits:
        lines.append(f"creg c[{circuit.num_clbits}];")
    for gate in circuit.gates:
        if gate.kind is GateKind.MCRY:
            raise CircuitError("MCRY must be lowered before export")
        if gate.kind is GateKind.MEASURE:
            lines.append(f"measure q[{gate.target}] -> c[{gate.classical_bit}];")
            continue
        name = gate.kind.value
        if gate.params:
            name += "(" + ",".join(format(p, ".12g") for p in gate.params) + ")"
        operands = ",".join(f"q[{q}]" for q in gate.qubits)
        lines.append(f"{name} {operands};")
    return "\n".join(lines) + "\n"
