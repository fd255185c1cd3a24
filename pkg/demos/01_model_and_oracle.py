"""Build a network in code, validate it, and query exact marginals.

A discrete Bayesian network is a DAG whose nodes carry conditional
probability tables. This demo builds the classic two-roots-one-child
triangle by hand, round-trips it through the document format, and runs
the exact enumeration oracle that every compiled circuit is checked
against.
"""

from qbnc import (
    BayesianNetwork,
    Node,
    emit_network,
    exact_marginal,
    joint_distribution,
    parse_network,
    topological_order,
    validate,
)

# Two independent root causes A and B, one effect C. CPT rows are keyed by
# parent configurations (A, B), last parent varying fastest.
network = BayesianNetwork(nodes=(
    Node(name="A", states=("0", "1"), parents=(), cpt={(): (0.2, 0.8)}),
    Node(name="B", states=("0", "1"), parents=(), cpt={(): (0.3, 0.7)}),
    Node(name="C", states=("0", "1"), parents=("A", "B"), cpt={
        (0, 0): (0.15, 0.85),
        (0, 1): (0.30, 0.70),
        (1, 0): (0.40, 0.60),
        (1, 1): (0.10, 0.90),
    }),
))

print("violations:", validate(network) or "none")
print("topological order:", topological_order(network))

# The document format is plain JSON and round-trips exactly.
text = emit_network(network)
assert parse_network(text) == network
print("\ndocument round-trip: ok")
print(text[:220] + " ...")

# The joint distribution factorizes over the CPTs; each assignment's
# probability is a product of one row entry per node.
joint = joint_distribution(network)
print("\nP(A=1, B=1, C=1) =", joint.assignments[(1, 1, 1)])  # 0.8 * 0.7 * 0.9

for name in network.names:
    print(f"P({name}) =", exact_marginal(network, name).round(6))
