"""Multi-state variables: register widths, angle trees, and empty padding.

A node with n states occupies ceil(log2 n) qubits. Its distribution is
realized by a binary tree of conditional rotations: the root angle splits
the register's top qubit, each branch splits the conditional remainder.
With three states on two qubits, the fourth pattern is padding and must
never be observed.
"""

from qbnc import (
    compile_network,
    decompose_distribution,
    exact_node_marginals,
    load_fixture,
    qubit_width,
    sample,
)

fixture = load_fixture("bankruptcy_b_ch")
network = fixture.network
print("CH spans", qubit_width(network.node("CH").num_states), "qubits")

# Angle tree for the CH row given B=1: the path key lists ancestor bits.
row = network.node("CH").cpt[(1,)]
tree = decompose_distribution(row)
print(f"\nrow {row} decomposes into:")
for path, theta in tree.nodes():
    qubit = f"register qubit {len(path)}"
    condition = f" given bits {path}" if path else ""
    print(f"  {qubit}{condition}: RY({theta:.4f})")
print("leaf products:", tree.leaf_probabilities().round(6), "(last entry is padding)")

# Compile the two-node fragment and sample it: the |x11> patterns carry no
# probability, so they never appear in the histogram.
circuit = compile_network(network)
counts = sample(circuit, shots=8192, seed=0)
print("\nhistogram over (B, CH-register):")
for key in sorted(counts.counts):
    print(f"  |{key}> {counts.counts[key]}")
assert "011" not in counts.counts and "111" not in counts.counts
print("padding patterns 011/111: absent")

exact = exact_node_marginals(circuit)
print("\nexact CH marginal:", exact["CH"].probabilities.round(4),
      "| padding mass:", exact["CH"].padding_mass)
