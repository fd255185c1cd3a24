"""Compositional compilation of Bayesian networks into rotation circuits.

Nodes are processed in topological order. A root node's register receives
its angle-tree rotations directly. A child node emits one block per parent
configuration: X gates flip every parent qubit whose configured bit is 0,
the angle-tree rotations run with the full parent register (plus the
within-register ancestor qubits) as controls, and the X gates are undone.
Parent configurations iterate in canonical row-major order, and X sandwiches
are emitted per configuration without any merging, so compiled circuits are
byte-stable.

Lowering levels:
  * ``mcry``       - keep multi-controlled rotations as single IR gates
  * ``elementary`` - expand to {X, RY, CX, CCX} via the ancilla ladder
  * ``full``       - additionally expand CCX into one- and two-qubit gates

A rotation with n >= 2 controls lowers to a ladder of 2(n-1) CCX gates that
fold the controls into ancillas, one singly-controlled rotation, and the
mirrored ladder restoring every ancilla to |0>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .angles import decompose_distribution, qubit_width
from .circuit import Circuit, CircuitError, Gate, GateKind, QubitRole, budget
from .network import BayesianNetwork, Node, ValidationError, parent_configs, topological_order, validate

LOWERING_LEVELS = ("mcry", "elementary", "full")


class BudgetError(CircuitError):
    """The network needs more qubits than the simulation guard allows."""


@dataclass(frozen=True)
class CompileOptions:
    lowering_level: str = "elementary"
    attach_measurements: bool = True
    max_qubits: int = 30

    def __post_init__(self):
        if self.lowering_level not in LOWERING_LEVELS:
            raise ValueError(f"unknown lowering level {self.lowering_level!r}; expected one of {LOWERING_LEVELS}")


def _rotation(controls: tuple[int, ...], target: int, theta: float) -> Gate:
    if not controls:
        return Gate(GateKind.RY, target=target, params=(theta,))
    if len(controls) == 1:
        return Gate(GateKind.CRY, target=target, controls=controls, params=(theta,))
    return Gate(GateKind.MCRY, target=target, controls=controls, params=(theta,))


def _config_bits(bn: BayesianNetwork, node: Node, config: tuple[int, ...],
                 registers: dict[str, tuple[int, ...]]) -> list[tuple[int, int]]:
    """(qubit, bit) per parent-register qubit for one parent configuration."""
    pairs = []
    for parent_name, state in zip(node.parents, config):
        reg = registers[parent_name]
        for pos, qubit in enumerate(reg):
            bit = (state >> (len(reg) - 1 - pos)) & 1
            pairs.append((qubit, bit))
    return pairs


def encode_child_block(bn: BayesianNetwork, node: Node,
                       registers: dict[str, tuple[int, ...]]) -> list[Gate]:
    """Gate sequence realizing one node's CPT on its register.

    Works for root nodes too (single empty configuration, no sandwiches).
    Zero-angle rotations from unreachable branches are emitted rather than
    elided so gate counts stay a pure function of the network shape.
    """
    target_reg = registers[node.name]
    gates: list[Gate] = []
    for config in parent_configs(bn, node):
        tree = decompose_distribution(node.cpt[config])
        pairs = _config_bits(bn, node, config, registers)
        parent_qubits = tuple(q for q, _ in pairs)
        flips = [q for q, bit in pairs if bit == 0]
        gates += [Gate(GateKind.X, target=q) for q in flips]
        for path, theta in tree.nodes():
            depth = len(path)
            inner = [target_reg[d] for d, bit in enumerate(path) if bit == 0]
            gates += [Gate(GateKind.X, target=q) for q in inner]
            controls = parent_qubits + tuple(target_reg[:depth])
            gates.append(_rotation(controls, target_reg[depth], theta))
            gates += [Gate(GateKind.X, target=q) for q in inner]
        gates += [Gate(GateKind.X, target=q) for q in flips]
    return gates


def lower_mcry(gate: Gate, ancillas: tuple[int, ...]) -> list[Gate]:
    """Expand a multi-controlled rotation using the ancilla ladder.

    With n controls this emits 2(n-1) CCX gates and one CRY; the mirrored
    half of the ladder returns every ancilla to |0>. Ancillas must start in
    |0>. A single-control gate passes through as a plain CRY.
    """
    n = len(gate.controls)
    if n == 1:
        return [Gate(GateKind.CRY, target=gate.target, controls=gate.controls, params=gate.params)]
    if len(ancillas) < n - 1:
        raise CircuitError(f"need {n - 1} ancilla qubits to lower a {n}-control rotation, have {len(ancillas)}")
    work = ancillas[: n - 1]
    ladder = [Gate(GateKind.CCX, target=work[0], controls=(gate.controls[0], gate.controls[1]))]
    for k in range(2, n):
        ladder.append(Gate(GateKind.CCX, target=work[k - 1], controls=(gate.controls[k], work[k - 2])))
    middle = Gate(GateKind.CRY, target=gate.target, controls=(work[-1],), params=gate.params)
    return ladder + [middle] + ladder[::-1]


def lower_cry(gate: Gate) -> list[Gate]:
    """CRY(theta) as RY(theta/2) . CX . RY(-theta/2) . CX, exactly."""
    (control,) = gate.controls
    theta = gate.params[0]
    return [
        Gate(GateKind.RY, target=gate.target, params=(theta / 2.0,)),
        Gate(GateKind.CX, target=gate.target, controls=(control,)),
        Gate(GateKind.RY, target=gate.target, params=(-theta / 2.0,)),
        Gate(GateKind.CX, target=gate.target, controls=(control,)),
    ]


def lower_ccx(gate: Gate) -> list[Gate]:
    """Toffoli as nine one-qubit gates and six CX.

    Uses the textbook phase construction with T = RZ(pi/4) (this RZ is
    diag(1, e^{i lambda})) and H = U3(pi/2, 0, pi); the product equals the
    CCX permutation matrix with no residual global phase.
    """
    a, b = gate.controls
    c = gate.target
    t = math.pi / 4.0
    H = (math.pi / 2.0, 0.0, math.pi)
    return [
        Gate(GateKind.U3, target=c, params=H),
        Gate(GateKind.CX, target=c, controls=(b,)),
        Gate(GateKind.RZ, target=c, params=(-t,)),
        Gate(GateKind.CX, target=c, controls=(a,)),
        Gate(GateKind.RZ, target=c, params=(t,)),
        Gate(GateKind.CX, target=c, controls=(b,)),
        Gate(GateKind.RZ, target=c, params=(-t,)),
        Gate(GateKind.CX, target=c, controls=(a,)),
        Gate(GateKind.RZ, target=b, params=(t,)),
        Gate(GateKind.RZ, target=c, params=(t,)),
        Gate(GateKind.U3, target=c, params=H),
        Gate(GateKind.CX, target=b, controls=(a,)),
        Gate(GateKind.RZ, target=a, params=(t,)),
        Gate(GateKind.RZ, target=b, params=(-t,)),
        Gate(GateKind.CX, target=b, controls=(a,)),
    ]


def lower_circuit(circuit: Circuit, level: str) -> Circuit:
    """Rewrite a circuit down to the requested gate set."""
    if level not in LOWERING_LEVELS:
        raise ValueError(f"unknown lowering level {level!r}")
    if level == "mcry":
        return circuit
    ancillas = circuit.ancilla_qubits
    gates: list[Gate] = []
    for gate in circuit.gates:
        gates.extend(lower_mcry(gate, ancillas) if gate.kind is GateKind.MCRY else [gate])
    expanded: list[Gate] = []
    for gate in gates:
        expanded.extend(lower_cry(gate) if gate.kind is GateKind.CRY else [gate])
    if level == "full":
        final: list[Gate] = []
        for gate in expanded:
            final.extend(lower_ccx(gate) if gate.kind is GateKind.CCX else [gate])
        expanded = final
    out = Circuit(
        num_qubits=circuit.num_qubits,
        num_clbits=circuit.num_clbits,
        labels=dict(circuit.labels),
        state_labels=dict(circuit.state_labels),
    )
    out.extend(expanded)
    return out


def assign_qubits(bn: BayesianNetwork) -> tuple[dict[int, QubitRole], dict[str, tuple[int, ...]]]:
    """Map nodes to qubit registers: parents above children, ancillas lowest.

    The first node in topological order takes the highest indices; within a
    register the most significant bit sits highest. Ancillas fill indices
    0 .. ancilla_qubits-1.
    """
    plan = budget(bn)
    labels = {q: QubitRole() for q in range(plan.ancilla_qubits)}
    registers: dict[str, tuple[int, ...]] = {}
    top = plan.total - 1
    for name in topological_order(bn):
        width = qubit_width(bn.node(name).num_states)
        reg = tuple(range(top, top - width, -1))
        registers[name] = reg
        for bit, q in enumerate(reg):
            labels[q] = QubitRole(node=name, bit=bit)
        top -= width
    return labels, registers


def compile_network(bn: BayesianNetwork, options: CompileOptions | None = None) -> Circuit:
    """Compile a validated network into a circuit at the requested level.

    Measurements (when attached) cover exactly the node-register qubits,
    lowest qubit to classical bit 0, so measured bitstrings read
    q_high ... q_low left to right.
    """
    options = options or CompileOptions()
    problems = validate(bn)
    if problems:
        raise ValidationError(problems)
    plan = budget(bn)
    if plan.total > options.max_qubits:
        raise BudgetError(
            f"network needs {plan.total} qubits, above the {options.max_qubits}-qubit guard"
        )
    labels, registers = assign_qubits(bn)
    measured = sorted(q for q, role in labels.items() if not role.is_ancilla)
    circuit = Circuit(
        num_qubits=plan.total,
        num_clbits=len(measured) if options.attach_measurements else 0,
        labels=labels,
        state_labels={node.name: node.states for node in bn.nodes},
    )
    for name in topological_order(bn):
        circuit.extend(encode_child_block(bn, bn.node(name), registers))
    circuit = lower_circuit(circuit, options.lowering_level)
    if options.attach_measurements:
        for clbit, qubit in enumerate(measured):
            circuit.append(Gate(GateKind.MEASURE, target=qubit, classical_bit=clbit))
    return circuit
