"""Network topology, sparse messages, clique learning and the on-disk format.

Fanals are addressed either as ``(cluster, fanal)`` pairs or by their global
index ``g = cluster * l + fanal``. All indices are 0-based.

The adjacency is a full symmetric bit matrix, one bit-packed row per fanal
(``numpy.packbits`` with little bit order), so that the decoder can OR whole
rows together. On disk only the strict upper triangle is kept.
"""
from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, Sequence

import numpy as np

__all__ = [
    "Topology",
    "SparseMessage",
    "OrderProfile",
    "Placement",
    "CliqueNetwork",
    "NetworkFormatError",
    "BadMagicError",
    "VersionMismatchError",
    "TruncatedPayloadError",
    "ChecksumError",
    "new_network",
    "learn",
    "density",
    "random_message",
    "random_messages",
    "sample_order",
    "serialize",
    "deserialize",
    "save_network",
    "load_network",
    "parse_message",
    "format_message",
    "read_messages",
    "write_messages",
]

MAGIC = b"CLQN"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHIII")
_CHECKSUM = struct.Struct("<Q")


@dataclass(frozen=True)
class Topology:
    """``chi`` clusters of ``l`` fanals each; ``l`` must be a power of two."""

    chi: int
    l: int

    def __post_init__(self):
        if int(self.chi) != self.chi or self.chi < 2:
            raise ValueError(f"need at least 2 clusters, got chi={self.chi!r}")
        if int(self.l) != self.l or self.l < 1 or (self.l & (self.l - 1)):
            raise ValueError(f"fanals per cluster must be a power of 2, got l={self.l!r}")
        object.__setattr__(self, "chi", int(self.chi))
        object.__setattr__(self, "l", int(self.l))

    @property
    def kappa(self) -> int:
        """Bits carried by one character."""
        return self.l.bit_length() - 1

    @property
    def n(self) -> int:
        return self.chi * self.l

    @property
    def q_bits(self) -> int:
        """Number of potential inter-cluster connections (binary resource)."""
        return self.chi * (self.chi - 1) * self.l * self.l // 2

    def cluster_of(self, g):
        return np.asarray(g) // self.l


@dataclass(frozen=True)
class SparseMessage:
    """A set of ``(cluster, fanal)`` pairs, one per expressed character.

    Entries are kept sorted by cluster so equal pair sets compare equal.
    Learnable messages have order >= 2; shorter ones are still valid as
    partial cues.
    """

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        entries = tuple(sorted((int(i), int(j)) for i, j in self.entries))
        clusters = [i for i, _ in entries]
        if len(set(clusters)) != len(clusters):
            raise ValueError(f"duplicate cluster in message {entries}")
        if any(i < 0 or j < 0 for i, j in entries):
            raise ValueError(f"negative index in message {entries}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_arrays(cls, clusters: Sequence[int], fanals: Sequence[int]) -> "SparseMessage":
        return cls(tuple(zip(clusters, fanals)))

    @classmethod
    def from_global(cls, indices: Iterable[int], l: int) -> "SparseMessage":
        return cls(tuple((int(g) // l, int(g) % l) for g in indices))

    @property
    def order(self) -> int:
        return len(self.entries)

    @property
    def clusters(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    @property
    def fanals(self) -> tuple[int, ...]:
        return tuple(j for _, j in self.entries)

    def global_indices(self, l: int) -> np.ndarray:
        return np.array([i * l + j for i, j in self.entries], dtype=np.int64)

    def as_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.entries)

    def without_clusters(self, clusters: Iterable[int]) -> "SparseMessage":
        drop = set(clusters)
        return SparseMessage(tuple(e for e in self.entries if e[0] not in drop))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __str__(self):
        return format_message(self)


@dataclass(frozen=True)
class OrderProfile:
    """Distribution of message orders: a constant, or uniform on ``[c_min, c_max]``."""

    c_min: int
    c_max: int

    def __post_init__(self):
        if self.c_min > self.c_max:
            raise ValueError(f"c_min={self.c_min} exceeds c_max={self.c_max}")
        if self.c_min < 2:
            raise ValueError(f"message order must be at least 2, got {self.c_min}")

    @classmethod
    def constant(cls, c: int) -> "OrderProfile":
        return cls(c, c)

    @classmethod
    def uniform(cls, c_min: int, c_max: int) -> "OrderProfile":
        return cls(c_min, c_max)

    @property
    def is_constant(self) -> bool:
        return self.c_min == self.c_max

    @property
    def lam(self) -> int:
        """Number of distinct orders."""
        return self.c_max - self.c_min + 1

    @property
    def orders(self) -> range:
        return range(self.c_min, self.c_max + 1)

    def validate(self, topology: Topology) -> None:
        if self.is_constant:
            if self.c_max > topology.chi:
                raise ValueError(f"order {self.c_max} exceeds chi={topology.chi}")
        elif self.c_max >= topology.chi:
            raise ValueError(f"order range must stay below chi={topology.chi}, got c_max={self.c_max}")

    def __str__(self):
        return str(self.c_min) if self.is_constant else f"{self.c_min}..{self.c_max}"


class Placement(enum.Enum):
    UNIFORM = "uniform"
    CONTIGUOUS = "contiguous"


class NetworkFormatError(ValueError):
    """Base class for malformed network files."""


class BadMagicError(NetworkFormatError):
    pass


class VersionMismatchError(NetworkFormatError):
    pass


class TruncatedPayloadError(NetworkFormatError):
    pass


class ChecksumError(NetworkFormatError):
    pass


@dataclass(eq=False)
class CliqueNetwork:
    """Learned memory: a topology plus a bit-packed symmetric adjacency."""

    topology: Topology
    adjacency: np.ndarray = field(repr=False)
    edge_count: int = 0

    @property
    def row_bytes(self) -> int:
        return self.adjacency.shape[1]

    def has_edge(self, g1: int, g2: int) -> bool:
        return bool((self.adjacency[g1, g2 >> 3] >> (g2 & 7)) & 1)

    def edges_between(self, rows, cols) -> np.ndarray:
        """Vectorised edge lookup for broadcastable index arrays."""
        rows = np.asarray(rows)
        cols = np.asarray(cols)
        return ((self.adjacency[rows, cols >> 3] >> (cols & 7)) & 1).astype(bool)

    def row(self, g: int) -> np.ndarray:
        """Unpacked neighbourhood of fanal ``g`` as a boolean vector."""
        return np.unpackbits(self.adjacency[g], count=self.topology.n, bitorder="little").view(bool)

    def dense(self) -> np.ndarray:
        return np.unpackbits(self.adjacency, axis=1, count=self.topology.n, bitorder="little").view(bool)

    def density(self) -> float:
        return self.edge_count / self.topology.q_bits

    def recount_edges(self) -> int:
        return int(np.bitwise_count(self.adjacency).sum()) // 2

    def copy(self) -> "CliqueNetwork":
        return CliqueNetwork(self.topology, self.adjacency.copy(), self.edge_count)

    def learn(self, message: SparseMessage) -> int:
        return learn(self, message)

    def learn_batch(self, clusters: np.ndarray, fanals: np.ndarray) -> int:
        """Learn many same-order messages given as ``(M, c)`` arrays.

        Returns the number of newly created edges.
        """
        clusters = np.asarray(clusters, dtype=np.int64)
        fanals = np.asarray(fanals, dtype=np.int64)
        if clusters.ndim != 2 or clusters.shape != fanals.shape:
            raise ValueError("clusters and fanals must be (M, c) arrays of equal shape")
        if clusters.size == 0:
            return 0
        _check_indices(self.topology, clusters, fanals)
        c = clusters.shape[1]
        if c < 2:
            raise ValueError(f"message order must be at least 2, got {c}")
        srt = np.sort(clusters, axis=1)
        if np.any(srt[:, 1:] == srt[:, :-1]):
            raise ValueError("duplicate cluster in message")
        g = clusters * self.topology.l + fanals
        a, b = np.triu_indices(c, 1)
        before = self.edge_count
        step = max(1, 4_000_000 // len(a))
        for lo in range(0, len(g), step):
            chunk = g[lo:lo + step]
            rows = np.concatenate([chunk[:, a].ravel(), chunk[:, b].ravel()])
            cols = np.concatenate([chunk[:, b].ravel(), chunk[:, a].ravel()])
            self._set_bits(rows, cols)
        self.edge_count = self.recount_edges()
        return self.edge_count - before

    def learn_many(self, messages: Iterable[SparseMessage]) -> int:
        """Learn an iterable of messages of any orders; returns new edge count."""
        by_order: dict[int, list[SparseMessage]] = {}
        for m in messages:
            by_order.setdefault(m.order, []).append(m)
        created = 0
        for c, group in sorted(by_order.items()):
            arr = np.array([m.entries for m in group], dtype=np.int64).reshape(len(group), c, 2)
            created += self.learn_batch(arr[..., 0], arr[..., 1])
        return created

    def _set_bits(self, rows: np.ndarray, cols: np.ndarray) -> None:
        flat = rows * self.row_bytes + (cols >> 3)
        bits = np.left_shift(1, cols & 7).astype(np.uint8)
        np.bitwise_or.at(self.adjacency.reshape(-1), flat, bits)

    def has_intra_cluster_edges(self) -> bool:
        topo = self.topology
        for i in range(topo.chi):
            block = self.adjacency[i * topo.l:(i + 1) * topo.l]
            bits = np.unpackbits(block, axis=1, count=topo.n, bitorder="little")
            if bits[:, i * topo.l:(i + 1) * topo.l].any():
                return True
        return False

    def is_symmetric(self) -> bool:
        d = self.dense()
        return bool(np.array_equal(d, d.T))

    def __eq__(self, other):
        if not isinstance(other, CliqueNetwork):
            return NotImplemented
        return self.topology == other.topology and np.array_equal(self.adjacency, other.adjacency)


def _check_indices(topology: Topology, clusters, fanals) -> None:
    clusters = np.asarray(clusters)
    fanals = np.asarray(fanals)
    if clusters.size and (clusters.min() < 0 or clusters.max() >= topology.chi):
        raise ValueError(f"cluster index out of range [0, {topology.chi})")
    if fanals.size and (fanals.min() < 0 or fanals.max() >= topology.l):
        raise ValueError(f"fanal index out of range [0, {topology.l})")


def check_message(topology: Topology, message: SparseMessage) -> None:
    """Raise ``ValueError`` if the message does not fit the topology."""
    if message.order > topology.chi:
        raise ValueError(f"message order {message.order} exceeds chi={topology.chi}")
    _check_indices(topology, message.clusters, message.fanals)


def new_network(topology: Topology) -> CliqueNetwork:
    """Empty network: no connection at all."""
    row_bytes = (topology.n + 7) // 8
    return CliqueNetwork(topology, np.zeros((topology.n, row_bytes), dtype=np.uint8), 0)


def learn(network: CliqueNetwork, message: SparseMessage) -> int:
    """Connect every pair of the message's fanals; returns the number of new edges."""
    if message.order < 2:
        raise ValueError(f"message order must be at least 2, got {message.order}")
    check_message(network.topology, message)
    g = message.global_indices(network.topology.l)
    a, b = np.triu_indices(len(g), 1)
    new = int(np.count_nonzero(~network.edges_between(g[a], g[b])))
    if new:
        network._set_bits(np.concatenate([g[a], g[b]]), np.concatenate([g[b], g[a]]))
        network.edge_count += new
    return new


def density(network: CliqueNetwork) -> float:
    """Fraction of potential inter-cluster edges present."""
    return network.density()


def _check_order(topology: Topology, order: int) -> None:
    if not 2 <= order <= topology.chi:
        raise ValueError(f"order must lie in [2, {topology.chi}], got {order}")


def random_messages(
    topology: Topology,
    order: int,
    count: int,
    rng: np.random.Generator,
    placement: Placement = Placement.UNIFORM,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``count`` i.i.d. messages as ``(clusters, fanals)`` arrays of shape ``(count, order)``.

    Uniform placement picks clusters without replacement (sorted per row);
    contiguous placement picks a uniform start in ``[0, chi - order]``.
    """
    _check_order(topology, order)
    chi = topology.chi
    if placement is Placement.CONTIGUOUS:
        start = rng.integers(0, chi - order + 1, size=count)
        clusters = start[:, None] + np.arange(order)
    else:
        clusters = np.empty((count, order), dtype=np.int64)
        chunk = max(1, 2_000_000 // chi)
        for lo in range(0, count, chunk):
            hi = min(count, lo + chunk)
            keys = rng.random((hi - lo, chi))
            clusters[lo:hi] = np.sort(np.argpartition(keys, order - 1, axis=1)[:, :order], axis=1)
    fanals = rng.integers(0, topology.l, size=(count, order))
    return clusters.astype(np.int64), fanals.astype(np.int64)


def random_message(
    topology: Topology,
    order: int,
    rng: np.random.Generator,
    placement: Placement = Placement.UNIFORM,
) -> SparseMessage:
    clusters, fanals = random_messages(topology, order, 1, rng, placement)
    return SparseMessage.from_arrays(clusters[0], fanals[0])


def sample_order(profile: OrderProfile, rng: np.random.Generator, size=None):
    if profile.is_constant:
        return profile.c_min if size is None else np.full(size, profile.c_min, dtype=np.int64)
    out = rng.integers(profile.c_min, profile.c_max + 1, size=size)
    return int(out) if size is None else out


# ---------------------------------------------------------------- serialization


def _triangle_bits(network: CliqueNetwork) -> np.ndarray:
    n = network.topology.n
    parts = []
    for g in range(n - 1):
        parts.append(network.row(g)[g + 1:])
    if not parts:
        return np.zeros(0, dtype=bool)
    return np.concatenate(parts)


def serialize(network: CliqueNetwork) -> bytes:
    topo = network.topology
    payload = np.packbits(_triangle_bits(network), bitorder="little").tobytes()
    popcount = int(np.bitwise_count(np.frombuffer(payload, dtype=np.uint8)).sum())
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, topo.chi, topo.l, 0)
    return header + payload + _CHECKSUM.pack(popcount)


def deserialize(data: bytes) -> CliqueNetwork:
    if len(data) < _HEADER.size:
        raise TruncatedPayloadError(f"header needs {_HEADER.size} bytes, got {len(data)}")
    magic, version, chi, l, _reserved = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise BadMagicError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != FORMAT_VERSION:
        raise VersionMismatchError(f"unsupported format version {version}")
    try:
        topo = Topology(chi, l)
    except ValueError as exc:
        raise NetworkFormatError(str(exc)) from exc
    n = topo.n
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 7) // 8
    expected = _HEADER.size + nbytes + _CHECKSUM.size
    if len(data) < expected:
        raise TruncatedPayloadError(f"expected {expected} bytes, got {len(data)}")
    if len(data) > expected:
        raise NetworkFormatError(f"{len(data) - expected} trailing bytes after checksum")
    payload = np.frombuffer(data, dtype=np.uint8, count=nbytes, offset=_HEADER.size)
    (checksum,) = _CHECKSUM.unpack_from(data, _HEADER.size + nbytes)
    if int(np.bitwise_count(payload).sum()) != checksum:
        raise ChecksumError("payload popcount does not match checksum")
    bits = np.unpackbits(payload, count=nbits, bitorder="little").view(bool)
    dense = np.zeros((n, n), dtype=bool)
    pos = 0
    for g in range(n - 1):
        width = n - g - 1
        dense[g, g + 1:] = bits[pos:pos + width]
        pos += width
    dense |= dense.T
    net = new_network(topo)
    net.adjacency[:] = np.packbits(dense, axis=1, bitorder="little")
    net.edge_count = int(np.count_nonzero(bits))
    if net.has_intra_cluster_edges():
        raise NetworkFormatError("file contains intra-cluster edges")
    return net


def save_network(network: CliqueNetwork, dest: str | BinaryIO) -> None:
    data = serialize(network)
    if hasattr(dest, "write"):
        dest.write(data)
    else:
        with open(dest, "wb") as fh:
            fh.write(data)


def load_network(src: str | BinaryIO) -> CliqueNetwork:
    if hasattr(src, "read"):
        return deserialize(src.read())
    with open(src, "rb") as fh:
        return deserialize(fh.read())


# ---------------------------------------------------------------- message text format


def parse_message(line: str) -> SparseMessage:
    """Parse ``"3:17,9:0,41:63"``."""
    entries = []
    for tok in line.strip().split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            i, j = tok.split(":")
            entries.append((int(i), int(j)))
        except ValueError:
            raise ValueError(f"malformed pair {tok!r} in message {line!r}") from None
    return SparseMessage(tuple(entries))


def format_message(message: SparseMessage) -> str:
    return ",".join(f"{i}:{j}" for i, j in message.entries)


def read_messages(lines: Iterable[str]) -> list[SparseMessage]:
    out = []
    for line in lines:
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        out.append(parse_message(s))
    return out


def write_messages(messages: Iterable[SparseMessage], fh) -> None:
    for m in messages:
        fh.write(format_message(m) + "\n")
