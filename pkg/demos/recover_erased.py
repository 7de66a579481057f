"""
Recovering messages with erased characters
==========================================

Blind recovery lets every cluster compete; guided recovery is told which
clusters the message uses. Both run the same score-and-select dynamics.
"""

import numpy as np

from cliquemem import SparseMessage, Topology, blind_recover, guided_recover, is_success, new_network, random_messages
from cliquemem import theory

topo = Topology(100, 64)
rng = np.random.default_rng(1)
M = 100_000
clusters, fanals = random_messages(topo, 12, M, rng)
net = new_network(topo)
net.learn_batch(clusters, fanals)
d = net.density()
print(f"{M} messages learned, density {d:.3f}")

trials = 2000
fails = {"blind": 0, "guided 1 iter": 0, "guided 4 iter": 0}
for u in rng.integers(0, M, trials):
    truth = SparseMessage.from_arrays(clusters[u], fanals[u])
    erased = rng.choice(truth.clusters, 3, replace=False)
    cue = truth.without_clusters(erased)
    fails["blind"] += not is_success(blind_recover(net, cue), truth)
    fails["guided 1 iter"] += not is_success(guided_recover(net, cue, truth.clusters), truth)
    fails["guided 4 iter"] += not is_success(guided_recover(net, cue, truth.clusters, max_iterations=4), truth)

for name, f in fails.items():
    print(f"{name:14s} error rate {f / trials:.4f}")
print(f"closed forms: blind {theory.p_error_blind(100, 64, 12, 3, d):.4f}, "
      f"guided {theory.p_error_guided(64, 12, 3, d):.4f}")
