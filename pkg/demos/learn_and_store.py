"""
Storing sparse messages as cliques
==================================

A network of ``chi`` clusters with ``l`` fanals each stores a message of
order ``c`` by wiring its ``c`` fanals into a clique. Learning is a union of
edges, so the connection density climbs towards 1 as messages accumulate.
"""

import io

import numpy as np

from cliquemem import Topology, new_network, random_messages, save_network, load_network
from cliquemem import theory

topo = Topology(chi=100, l=64)
rng = np.random.default_rng(0)
net = new_network(topo)

# learn in batches and compare the measured density with the closed form
for step in range(5):
    net.learn_batch(*random_messages(topo, 12, 20_000, rng))
    m = 20_000 * (step + 1)
    print(f"M={m:6d}  measured d={net.density():.4f}  predicted d={theory.expected_density(100, 64, 12, m):.4f}")

# The adjacency is bit-packed: one row of ceil(n / 8) bytes per fanal.
print("adjacency bytes:", net.adjacency.nbytes, "edges:", net.edge_count)

# Networks round-trip through a compact upper-triangle file format.
buf = io.BytesIO()
save_network(net, buf)
buf.seek(0)
print("round trip identical:", load_network(buf) == net, f"({buf.getbuffer().nbytes} bytes)")
