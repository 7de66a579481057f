import io
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from cliquemem.core import (
    BadMagicError,
    ChecksumError,
    NetworkFormatError,
    OrderProfile,
    Placement,
    SparseMessage,
    Topology,
    TruncatedPayloadError,
    VersionMismatchError,
    deserialize,
    format_message,
    learn,
    load_network,
    new_network,
    parse_message,
    random_message,
    random_messages,
    read_messages,
    sample_order,
    save_network,
    serialize,
)


class TestTopology:
    def test_nine_clusters_of_sixteen(self):
        t = Topology(9, 16)
        net = new_network(t)
        assert t.n == 144
        assert net.edge_count == 0
        assert net.density() == 0

    def test_smallest(self):
        t = Topology(2, 1)
        assert t.n == 2 and t.q_bits == 1 and t.kappa == 0

    def test_binary_resource(self):
        assert Topology(100, 64).q_bits == 20_275_200
        assert Topology(100, 64).kappa == 6

    @pytest.mark.parametrize("chi,l", [(1, 4), (0, 4), (4, 3), (4, 0), (4, 12)])
    def test_rejects_invalid(self, chi, l):
        with pytest.raises(ValueError):
            Topology(chi, l)


class TestSparseMessage:
    def test_sorted_and_equal(self):
        a = SparseMessage(((5, 1), (2, 3)))
        b = SparseMessage(((2, 3), (5, 1)))
        assert a == b
        assert a.clusters == (2, 5)
        assert a.order == 2

    def test_duplicate_cluster(self):
        with pytest.raises(ValueError):
            SparseMessage(((1, 0), (1, 3)))

    def test_text_roundtrip(self):
        m = parse_message("3:17,9:0,41:63")
        assert m.entries == ((3, 17), (9, 0), (41, 63))
        assert format_message(m) == "3:17,9:0,41:63"

    def test_read_skips_comments(self):
        msgs = read_messages(io.StringIO("# header\n1:2,3:4\n\n  # x\n0:0,5:1\n"))
        assert [format_message(m) for m in msgs] == ["1:2,3:4", "0:0,5:1"]

    def test_malformed(self):
        with pytest.raises(ValueError):
            parse_message("1:2,3")


class TestLearn:
    def test_first_clique_of_order_4(self):
        net = new_network(Topology(9, 16))
        assert learn(net, SparseMessage(((0, 3), (2, 15), (5, 0), (8, 7)))) == 6
        assert net.edge_count == 6

    def test_idempotent(self):
        net = new_network(Topology(9, 16))
        m = SparseMessage(((0, 3), (2, 15), (5, 0)))
        learn(net, m)
        assert learn(net, m) == 0

    def test_two_overlapping_messages(self):
        m1 = SparseMessage(((0, 1), (1, 2), (2, 3)))
        m2 = SparseMessage(((0, 1), (1, 2), (3, 0)))
        # independent oracle: union of pair sets
        pairs = set()
        for m in (m1, m2):
            pairs |= {frozenset(p) for p in itertools.combinations(m.entries, 2)}
        net = new_network(Topology(4, 4))
        learn(net, m1)
        learn(net, m2)
        assert net.edge_count == len(pairs) == 5

    def test_rejections(self):
        net = new_network(Topology(4, 4))
        with pytest.raises(ValueError):
            learn(net, SparseMessage(((0, 4), (1, 0))))
        with pytest.raises(ValueError):
            learn(net, SparseMessage(((4, 0), (1, 0))))
        with pytest.raises(ValueError):
            learn(net, SparseMessage(((0, 1),)))

    def test_batch_matches_single(self, rng):
        topo = Topology(10, 8)
        cl, fa = random_messages(topo, 4, 200, rng)
        a, b = new_network(topo), new_network(topo)
        a.learn_batch(cl, fa)
        for row in zip(cl, fa):
            learn(b, SparseMessage.from_arrays(*row))
        assert a == b and a.edge_count == b.edge_count

    def test_batch_rejects_duplicate_cluster(self):
        net = new_network(Topology(4, 4))
        with pytest.raises(ValueError):
            net.learn_batch(np.array([[0, 0]]), np.array([[1, 2]]))

    def test_structural_invariants(self, rng):
        topo = Topology(12, 8)
        net = new_network(topo)
        last = 0.0
        for _ in range(10):
            cl, fa = random_messages(topo, 5, 30, rng)
            net.learn_batch(cl, fa)
            assert not net.has_intra_cluster_edges()
            assert net.density() >= last
            last = net.density()
        assert net.is_symmetric()
        assert net.edge_count == int(np.triu(net.dense(), 1).sum())


messages_strategy = st.lists(
    st.lists(st.tuples(st.integers(0, 5), st.integers(0, 3)), min_size=2, max_size=6, unique_by=lambda e: e[0]),
    min_size=1,
    max_size=12,
)


@settings(max_examples=60, deadline=None)
@given(messages_strategy, st.randoms(use_true_random=False))
def test_learning_order_invariance(msgs, rnd):
    topo = Topology(6, 4)
    msgs = [SparseMessage(tuple(m)) for m in msgs]
    a = new_network(topo)
    for m in msgs:
        learn(a, m)
    shuffled = list(msgs)
    rnd.shuffle(shuffled)
    b = new_network(topo)
    for m in shuffled:
        learn(b, m)
    assert a == b
    assert a.edge_count == b.edge_count == a.recount_edges()


class TestDensity:
    def test_single_possible_edge(self):
        net = new_network(Topology(2, 1))
        learn(net, SparseMessage(((0, 0), (1, 0))))
        assert net.density() == 1.0

    def test_statistical_agreement(self):
        topo = Topology(100, 64)
        net = new_network(topo)
        cl, fa = random_messages(topo, 12, 50_000, np.random.default_rng(7))
        net.learn_batch(cl, fa)
        expected = 0.15020546443042184  # 50-digit evaluation, rounded
        se = math.sqrt(expected * (1 - expected) / topo.q_bits)
        assert abs(net.density() - expected) < 3 * se

    def test_quadratic_law_empirical(self):
        # messages needed to reach d=0.02 at c=8 scale with (chi*l)^2
        def count_to(topo, seed):
            rng = np.random.default_rng(seed)
            net = new_network(topo)
            m = 0
            while net.density() < 0.02:
                m += 1
                learn(net, random_message(topo, 8, rng))
            return m

        big = count_to(Topology(100, 64), 1)
        small = count_to(Topology(50, 32), 2)
        assert big / small == pytest.approx(16, rel=0.10)


class TestRandomMessages:
    def test_contiguous_start_range(self):
        topo = Topology(100, 64)
        cl, fa = random_messages(topo, 12, 20_000, np.random.default_rng(0), Placement.CONTIGUOUS)
        starts = cl[:, 0]
        assert starts.min() == 0 and starts.max() == 88
        assert len(np.unique(starts)) == 89
        assert (np.diff(cl, axis=1) == 1).all()
        assert fa.min() >= 0 and fa.max() < 64

    def test_forced_selection(self, rng):
        topo = Topology(5, 4)
        for _ in range(20):
            assert random_message(topo, 5, rng).clusters == (0, 1, 2, 3, 4)

    def test_order_out_of_range(self, rng):
        with pytest.raises(ValueError):
            random_message(Topology(5, 4), 6, rng)
        with pytest.raises(ValueError):
            random_message(Topology(5, 4), 1, rng)

    def test_cluster_occupancy_uniform(self):
        topo = Topology(100, 64)
        n_draws, c = 1_000_000, 12
        cl, fa = random_messages(topo, c, n_draws, np.random.default_rng(99))
        counts = np.bincount(cl.ravel(), minlength=100)
        p = c / topo.chi
        sigma = math.sqrt(n_draws * p * (1 - p))
        assert np.abs(counts - n_draws * p).max() < 3 * sigma
        assert stats.chisquare(counts).pvalue > 1e-3
        assert (np.diff(cl, axis=1) > 0).all()


class TestSampleOrder:
    def test_constant(self, rng):
        assert all(sample_order(OrderProfile.constant(12), rng) == 12 for _ in range(50))

    def test_uniform_range_frequencies(self):
        prof = OrderProfile.uniform(12, 24)
        draws = sample_order(prof, np.random.default_rng(3), size=1_000_000)
        freq = np.bincount(draws - 12, minlength=13) / draws.size
        se = math.sqrt((1 / 13) * (12 / 13) / draws.size)
        assert draws.min() == 12 and draws.max() == 24
        assert np.abs(freq - 1 / 13).max() < 3 * se

    def test_lambda(self):
        assert OrderProfile.uniform(6, 18).lam == 13
        assert OrderProfile.constant(9).lam == 1

    def test_invalid(self):
        with pytest.raises(ValueError):
            OrderProfile.uniform(1, 5)
        with pytest.raises(ValueError):
            OrderProfile.uniform(8, 5)


class TestSerialization:
    def test_empty_small(self):
        data = serialize(new_network(Topology(2, 2)))
        # 18-byte header + ceil(6/8) payload + 8-byte checksum
        assert len(data) == 18 + 1 + 8
        assert data[:4] == b"CLQN"
        assert data[18] == 0

    def test_bit_positions(self):
        topo = Topology(3, 2)
        n = topo.n
        for g, h in itertools.combinations(range(n), 2):
            if g // 2 == h // 2:
                continue
            net = new_network(topo)
            learn(net, SparseMessage.from_global([g, h], 2))
            payload = serialize(net)[18:-8]
            pos = g * n - g * (g + 1) // 2 + (h - g - 1)
            bits = np.unpackbits(np.frombuffer(payload, np.uint8), bitorder="little")
            assert np.flatnonzero(bits).tolist() == [pos]

    def test_roundtrip_large(self, tmp_path):
        topo = Topology(100, 64)
        net = new_network(topo)
        cl, fa = random_messages(topo, 12, 100_000, np.random.default_rng(5))
        net.learn_batch(cl, fa)
        path = tmp_path / "net.clqn"
        save_network(net, path)
        back = load_network(path)
        assert back == net and back.edge_count == net.edge_count

    def test_roundtrip_stream(self, rng):
        topo = Topology(7, 4)
        net = new_network(topo)
        net.learn_batch(*random_messages(topo, 3, 20, rng))
        buf = io.BytesIO()
        save_network(net, buf)
        buf.seek(0)
        assert load_network(buf) == net

    def test_corrupted_payload(self, rng):
        topo = Topology(7, 4)
        net = new_network(topo)
        net.learn_batch(*random_messages(topo, 3, 20, rng))
        data = bytearray(serialize(net))
        data[20] ^= 0x01
        with pytest.raises(ChecksumError):
            deserialize(bytes(data))

    def test_error_cases(self):
        data = serialize(new_network(Topology(3, 4)))
        with pytest.raises(BadMagicError):
            deserialize(b"XXXX" + data[4:])
        with pytest.raises(VersionMismatchError):
            deserialize(data[:4] + b"\x02\x00" + data[6:])
        with pytest.raises(TruncatedPayloadError):
            deserialize(data[:-3])
        with pytest.raises(TruncatedPayloadError):
            deserialize(data[:10])
        for exc in (BadMagicError, VersionMismatchError, TruncatedPayloadError, ChecksumError):
            assert issubclass(exc, NetworkFormatError)
