"""Go/no-go recognition of sparse messages."""
from __future__ import annotations

import numpy as np

from .core import CliqueNetwork, SparseMessage, check_message
from .retrieval import RetrievalConfig, activation_mask, propagate, select

__all__ = ["accept", "accept_oracle", "clique_mask"]


def accept(network: CliqueNetwork, probe: SparseMessage) -> bool:
    """Run one decoding round with thresholds equal to the probe order.

    Clusters outside the probe are disabled; the probe is accepted iff the
    round leaves its activation unchanged.
    """
    if probe.order < 2:
        raise ValueError(f"probe order must be at least 2, got {probe.order}")
    topo = network.topology
    initial = activation_mask(topo, probe)
    config = RetrievalConfig.restricted(topo.chi, probe.clusters, sigma=probe.order, gamma=1)
    state = select(propagate(network, initial, 1), config, topo)
    return bool(np.array_equal(state.active, initial))


def accept_oracle(network: CliqueNetwork, probe: SparseMessage) -> bool:
    """True iff every pair of the probe's fanals is connected."""
    check_message(network.topology, probe)
    g = probe.global_indices(network.topology.l)
    a, b = np.triu_indices(len(g), 1)
    return bool(network.edges_between(g[a], g[b]).all())


def clique_mask(network: CliqueNetwork, clusters: np.ndarray, fanals: np.ndarray) -> np.ndarray:
    """Vectorised :func:`accept_oracle` over ``(P, c)`` probe arrays."""
    g = np.asarray(clusters, dtype=np.int64) * network.topology.l + np.asarray(fanals, dtype=np.int64)
    a, b = np.triu_indices(g.shape[1], 1)
    return network.edges_between(g[:, a], g[:, b]).all(axis=1)
