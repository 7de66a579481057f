"""Iterative decoding: message passing followed by winner-take-all selection.

One iteration is one :func:`propagate` and one :func:`select`. Updates are
synchronous: every score is computed from the same activation snapshot.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .core import CliqueNetwork, SparseMessage, Topology, check_message

__all__ = [
    "DISABLED",
    "Selection",
    "ActivationState",
    "RetrievalConfig",
    "RetrievalOutcome",
    "propagate",
    "select",
    "run_dynamics",
    "retrieve",
    "blind_recover",
    "guided_recover",
    "is_success",
    "activation_mask",
]

#: Threshold value that no score can reach; such a cluster never activates.
DISABLED = int(np.iinfo(np.int64).max)


class Selection(enum.Enum):
    GLOBAL_MAX = "global"
    PER_CLUSTER_MAX = "per-cluster"


@dataclass
class ActivationState:
    scores: np.ndarray
    active: np.ndarray
    per_cluster_max: np.ndarray
    global_max: int


@dataclass
class RetrievalConfig:
    """Decoder settings.

    ``thresholds`` holds one integer per cluster; :data:`DISABLED` marks a
    cluster that is excluded from the competition entirely.
    """

    thresholds: np.ndarray
    gamma: int = 1
    selection: Selection = Selection.GLOBAL_MAX
    max_iterations: int = 1

    def __post_init__(self):
        self.thresholds = np.asarray(self.thresholds, dtype=np.int64)
        if self.thresholds.ndim != 1:
            raise ValueError("thresholds must be a 1-d array with one entry per cluster")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.gamma < 0 or int(self.gamma) != self.gamma:
            raise ValueError(f"gamma must be a non-negative integer, got {self.gamma}")

    @classmethod
    def uniform(cls, chi: int, sigma: int = 0, **kw) -> "RetrievalConfig":
        return cls(np.full(chi, sigma, dtype=np.int64), **kw)

    @classmethod
    def restricted(cls, chi: int, clusters: Iterable[int], sigma: int = 0, **kw) -> "RetrievalConfig":
        """Only ``clusters`` are enabled, all with threshold ``sigma``."""
        th = np.full(chi, DISABLED, dtype=np.int64)
        th[list(clusters)] = sigma
        return cls(th, **kw)

    @property
    def enabled(self) -> np.ndarray:
        return self.thresholds != DISABLED


@dataclass
class RetrievalOutcome:
    topology: Topology
    active: np.ndarray = field(repr=False)
    iterations_run: int
    converged: bool
    cycle_detected: bool = False
    history: list[ActivationState] = field(default_factory=list, repr=False)

    @property
    def final_active(self) -> frozenset[tuple[int, int]]:
        l = self.topology.l
        return frozenset((int(g) // l, int(g) % l) for g in np.flatnonzero(self.active))

    @property
    def ambiguous(self) -> bool:
        per_cluster = self.active.reshape(self.topology.chi, self.topology.l).sum(axis=1)
        return bool((per_cluster > 1).any())

    @property
    def active_count(self) -> int:
        return int(np.count_nonzero(self.active))

    def as_message(self) -> SparseMessage | None:
        """The recovered message, or ``None`` when some cluster is ambiguous."""
        if self.ambiguous:
            return None
        return SparseMessage(tuple(self.final_active))


def activation_mask(topology: Topology, message: SparseMessage) -> np.ndarray:
    check_message(topology, message)
    mask = np.zeros(topology.n, dtype=bool)
    mask[message.global_indices(topology.l)] = True
    return mask


def propagate(network: CliqueNetwork, active: np.ndarray, gamma: int = 1) -> np.ndarray:
    """Scores after one message-passing step.

    Each cluster contributes at most 1 to a fanal's score (the max over its
    active fanals of the edge weight), plus ``gamma`` for the fanal's own
    activation.
    """
    topo = network.topology
    active = np.asarray(active, dtype=bool)
    scores = active.astype(np.int64) * gamma
    idx = np.flatnonzero(active)
    if idx.size:
        clusters = idx // topo.l
        starts = np.flatnonzero(np.r_[True, clusters[1:] != clusters[:-1]])
        # OR the rows of each cluster's active fanals: max over j' of w * v
        ored = np.bitwise_or.reduceat(network.adjacency[idx], starts, axis=0)
        bits = np.unpackbits(ored, axis=1, count=topo.n, bitorder="little")
        scores += bits.sum(axis=0, dtype=np.int64)
    return scores


def select(scores: np.ndarray, config: RetrievalConfig, topology: Topology) -> ActivationState:
    """Winner-take-all; ties keep every maximal fanal."""
    s = np.asarray(scores).reshape(topology.chi, topology.l)
    per_cluster_max = s.max(axis=1)
    enabled = config.enabled
    if config.selection is Selection.GLOBAL_MAX:
        # disabled clusters do not take part in the global max either
        vmax = int(per_cluster_max[enabled].max()) if enabled.any() else 0
        ok = enabled & (vmax >= config.thresholds)
        active = (s == vmax) & ok[:, None]
    else:
        vmax = int(per_cluster_max[enabled].max()) if enabled.any() else 0
        ok = enabled & (per_cluster_max >= config.thresholds)
        active = (s == per_cluster_max[:, None]) & ok[:, None]
    return ActivationState(np.asarray(scores), active.reshape(-1), per_cluster_max, vmax)


def run_dynamics(
    network: CliqueNetwork,
    initial: np.ndarray,
    config: RetrievalConfig,
    record: bool = False,
) -> RetrievalOutcome:
    """Iterate propagate/select from an initial activation.

    Stops at a fixed point (``converged=True``) or when the activation
    returns to the set of two iterations back (``cycle_detected=True``).
    """
    topo = network.topology
    if config.thresholds.shape != (topo.chi,):
        raise ValueError(f"need {topo.chi} thresholds, got {config.thresholds.shape[0]}")
    prev = np.asarray(initial, dtype=bool)
    before_prev = None
    history = []
    converged = cycle = False
    it = 0
    current = prev
    for it in range(1, config.max_iterations + 1):
        state = select(propagate(network, prev, config.gamma), config, topo)
        if record:
            history.append(state)
        current = state.active
        if np.array_equal(current, prev):
            converged = True
            break
        if before_prev is not None and np.array_equal(current, before_prev):
            cycle = True
            break
        before_prev, prev = prev, current
    return RetrievalOutcome(topo, current, it, converged, cycle, history)


def retrieve(
    network: CliqueNetwork,
    cue: SparseMessage,
    config: RetrievalConfig,
    record: bool = False,
) -> RetrievalOutcome:
    """Decode starting from exactly the cue's fanals."""
    return run_dynamics(network, activation_mask(network.topology, cue), config, record)


def blind_recover(
    network: CliqueNetwork,
    partial: SparseMessage,
    max_iterations: int = 1,
    gamma: int = 1,
    record: bool = False,
) -> RetrievalOutcome:
    """All clusters enabled with zero thresholds, global winner-take-all."""
    config = RetrievalConfig.uniform(
        network.topology.chi, 0, gamma=gamma, max_iterations=max_iterations
    )
    return retrieve(network, partial, config, record)


def guided_recover(
    network: CliqueNetwork,
    partial: SparseMessage,
    known_clusters: Iterable[int],
    max_iterations: int = 1,
    gamma: int = 1,
    record: bool = False,
) -> RetrievalOutcome:
    """Like :func:`blind_recover` but only ``known_clusters`` may activate."""
    known = set(int(i) for i in known_clusters)
    missing = set(partial.clusters) - known
    if missing:
        raise ValueError(f"known clusters do not cover the cue's clusters {sorted(missing)}")
    if any(i < 0 or i >= network.topology.chi for i in known):
        raise ValueError("known cluster index out of range")
    config = RetrievalConfig.restricted(
        network.topology.chi, sorted(known), 0, gamma=gamma, max_iterations=max_iterations
    )
    return retrieve(network, partial, config, record)


def is_success(outcome: RetrievalOutcome, truth: SparseMessage) -> bool:
    """Exact match: no missing, extra or ambiguous fanal anywhere."""
    if outcome.active_count != truth.order:
        return False
    return bool(outcome.active[truth.global_indices(outcome.topology.l)].all())
