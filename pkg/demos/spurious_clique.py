"""
Why a spurious clique defeats iterative decoding
================================================

Six fanals A..F form a learned clique. Other messages happen to connect an
extra fanal X to A, B, C and D. Starting from A..D, the decoder oscillates
between {A..F, X} and {A..D} and never settles on the learned clique.
"""

from cliquemem import SparseMessage, Topology, blind_recover, new_network

topo = Topology(8, 4)
net = new_network(topo)
names = {"A": (0, 1), "B": (1, 2), "C": (2, 0), "D": (3, 3), "E": (4, 1), "F": (5, 2), "X": (6, 0)}
net.learn(SparseMessage(tuple(names[k] for k in "ABCDEF")))
for k in "ABCD":
    net.learn(SparseMessage((names[k], names["X"])))

out = blind_recover(net, SparseMessage(tuple(names[k] for k in "ABCD")), max_iterations=10, record=True)
for it, state in enumerate(out.history, 1):
    scores = {k: int(state.scores[i * topo.l + j]) for k, (i, j) in names.items()}
    print(f"pass {it}: scores {scores}, max {state.global_max}")
print("cycle detected:", out.cycle_detected, "converged:", out.converged)
