"""
Decoding permuted characters
============================

Messages on contiguous clusters can arrive with neighbouring characters
swapped ("intelligence" -> "nietllgineec"). Lighting every character in its
own and both neighbouring clusters and iterating the decoder undoes the
swaps.
"""

import string

import numpy as np

from cliquemem import DistortionKind, Placement, SparseMessage, Topology, decode_distorted, new_network, permute_pairwise
from cliquemem.core import random_messages
from cliquemem.retrieval import is_success

word = "intelligence"
msg = SparseMessage.from_arrays(range(len(word)), [string.ascii_lowercase.index(ch) for ch in word])
swapped = permute_pairwise(msg)
print(word, "->", "".join(string.ascii_lowercase[j] for j in swapped.fanals))

topo = Topology(100, 64)
rng = np.random.default_rng(3)
clusters, fanals = random_messages(topo, 12, 40_000, rng, Placement.CONTIGUOUS)
net = new_network(topo)
net.learn_batch(clusters, fanals)
net.learn(msg)

out = decode_distorted(net, swapped, DistortionKind.PAIRWISE_PERMUTED, iterations=6)
print("word recovered:", is_success(out, msg), "after", out.iterations_run, "iterations")

for iters in (1, 6):
    errors = 0
    for u in rng.integers(0, len(clusters), 500):
        truth = SparseMessage.from_arrays(clusters[u], fanals[u])
        errors += not is_success(decode_distorted(net, permute_pairwise(truth), DistortionKind.PAIRWISE_PERMUTED, iters), truth)
    print(f"{iters} iteration(s): error rate {errors / 500:.3f}")
