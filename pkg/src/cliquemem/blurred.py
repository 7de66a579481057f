"""Decoding of distorted messages stored on contiguous clusters.

Two distortions are handled: swapping characters pairwise at span positions
(0,1), (2,3), ... and full anagrams. In both cases the decoder starts from
an over-complete activation that is guaranteed to contain the learned
clique, and lets the dynamics switch off the spare fanals.
"""
from __future__ import annotations

import enum

import numpy as np

from .core import CliqueNetwork, SparseMessage, Topology, check_message
from .retrieval import RetrievalConfig, RetrievalOutcome, run_dynamics

__all__ = [
    "DistortionKind",
    "is_contiguous",
    "permute_pairwise",
    "anagram",
    "init_distorted_state",
    "decode_distorted",
]


class DistortionKind(enum.Enum):
    PAIRWISE_PERMUTED = "pairwise"
    ANAGRAM = "anagram"


def is_contiguous(message: SparseMessage) -> bool:
    cl = message.clusters
    return len(cl) > 0 and cl == tuple(range(cl[0], cl[0] + len(cl)))


def _require_contiguous(message: SparseMessage) -> None:
    if not is_contiguous(message):
        raise ValueError(f"message does not occupy contiguous clusters: {message.clusters}")


def permute_pairwise(message: SparseMessage) -> SparseMessage:
    """Swap characters at span positions (0,1), (2,3), ...

    With odd order the last character stays in place.
    """
    _require_contiguous(message)
    fanals = list(message.fanals)
    for k in range(0, len(fanals) - 1, 2):
        fanals[k], fanals[k + 1] = fanals[k + 1], fanals[k]
    return SparseMessage.from_arrays(message.clusters, fanals)


def anagram(message: SparseMessage, rng: np.random.Generator) -> SparseMessage:
    """Random rearrangement of the characters over the same clusters."""
    _require_contiguous(message)
    return SparseMessage.from_arrays(message.clusters, rng.permutation(message.fanals))


def init_distorted_state(
    topology: Topology, distorted: SparseMessage, kind: DistortionKind
) -> np.ndarray:
    """Initial activation mask for decoding a distorted message.

    Pairwise: each character is also lit in the two clusters adjacent to its
    own, adjacency being cyclic within the message span. Anagram: every
    character is lit in every span cluster.
    """
    _require_contiguous(distorted)
    check_message(topology, distorted)
    clusters = np.array(distorted.clusters)
    fanals = np.array(distorted.fanals)
    c = len(clusters)
    mask = np.zeros((topology.chi, topology.l), dtype=bool)
    if kind is DistortionKind.PAIRWISE_PERMUTED:
        for shift in (-1, 0, 1):
            mask[clusters[(np.arange(c) + shift) % c], fanals] = True
    else:
        mask[np.ix_(clusters, fanals)] = True
    return mask.reshape(-1)


def decode_distorted(
    network: CliqueNetwork,
    distorted: SparseMessage,
    kind: DistortionKind,
    iterations: int,
    gamma: int = 1,
    record: bool = False,
) -> RetrievalOutcome:
    """Global winner-take-all decoding, zero thresholds, all clusters enabled."""
    topo = network.topology
    initial = init_distorted_state(topo, distorted, kind)
    config = RetrievalConfig.uniform(topo.chi, 0, gamma=gamma, max_iterations=iterations)
    return run_dynamics(network, initial, config, record)
