"""
Accepting or rejecting a probe
==============================

With thresholds equal to the probe order and all other clusters switched
off, one decoding round keeps a probe alive exactly when its fanals form a
clique. Learned messages are always accepted; random probes are accepted
with probability about ``d ** (c (c - 1) / 2)``.
"""

import numpy as np

from cliquemem import SparseMessage, Topology, accept, new_network, random_messages
from cliquemem.classify import clique_mask
from cliquemem import theory

topo = Topology(100, 64)
rng = np.random.default_rng(2)
M = 800_000
clusters, fanals = random_messages(topo, 9, M, rng)
net = new_network(topo)
net.learn_batch(clusters, fanals)
d = net.density()

print("learned messages accepted:",
      all(accept(net, SparseMessage.from_arrays(clusters[u], fanals[u])) for u in range(1000)))

# random probes, screened in bulk and confirmed with the decoder
pc, pf = random_messages(topo, 9, 500_000, rng)
hits = np.flatnonzero(clique_mask(net, pc, pf))
false_accepts = sum(accept(net, SparseMessage.from_arrays(pc[h], pf[h])) for h in hits)
print(f"density {d:.3f}: {false_accepts} false acceptances in 500000 probes "
      f"(predicted rate {theory.p_type2(9, d):.2e})")
