"""qbnc: compile discrete Bayesian networks into quantum rotation circuits.

The pipeline: a validated network is turned into per-node rotation angles,
composed into a gate-level circuit (multi-controlled rotations lowered via a
shared ancilla pool), executed on a dense statevector simulator, and checked
against exact classical inference.
"""

from .angles import AngleTree, conditional_angles, decompose_distribution, qubit_width, rotation_angle
from .circuit import (
    Circuit,
    CircuitError,
    Gate,
    GateKind,
    QubitBudget,
    QubitRole,
    budget,
    gate_census,
    to_qasm,
    validate_circuit,
)
from .compiler import (
    BudgetError,
    CompileOptions,
    compile_network,
    encode_child_block,
    lower_ccx,
    lower_circuit,
    lower_cry,
    lower_mcry,
)
from .fixtures import FIXTURE_IDS, Fixture, fixture_path, load_fixture
from .network import (
    BayesianNetwork,
    CycleError,
    Node,
    ParseError,
    ValidationError,
    emit_network,
    parent_configs,
    parse_network,
    topological_order,
    validate,
)
from .oracle import EnumerationLimitError, JointDistribution, exact_marginal, joint_distribution
from .simulate import (
    MarginalEstimate,
    RunReport,
    ShotCounts,
    StateEstimate,
    circuit_unitary,
    exact_node_marginals,
    gate_target_matrix,
    marginals,
    probabilities,
    run_experiment,
    sample,
    statevector,
)

__version__ = "0.1.0"

__all__ = [
    "AngleTree", "BayesianNetwork", "BudgetError", "Circuit", "CircuitError",
    "CompileOptions", "CycleError", "EnumerationLimitError", "FIXTURE_IDS",
    "Fixture", "Gate", "GateKind", "JointDistribution", "MarginalEstimate",
    "Node", "ParseError", "QubitBudget", "QubitRole", "RunReport",
    "ShotCounts", "StateEstimate", "ValidationError", "budget",
    "circuit_unitary", "compile_network", "conditional_angles",
    "decompose_distribution", "emit_network", "encode_child_block",
    "exact_marginal", "exact_node_marginals", "fixture_path", "gate_census",
    "gate_target_matrix", "joint_distribution", "load_fixture",
    "lower_ccx", "lower_circuit", "lower_cry", "lower_mcry", "marginals",
    "parent_configs", "parse_network", "probabilities", "qubit_width",
    "rotation_angle", "run_experiment", "sample", "statevector",
    "to_qasm", "topological_order", "validate", "validate_circuit",
]
