import numpy as np
import pytest

from simrefine.relsim import (bfs_path_profile, similarity_front_max,
                              similarity_front_relative, symmetrize)

from conftest import make_network, random_digraph_edges


def brute_force_profile(n, edges, theta):
    """Oracle: enumerate every directed walk of length <= theta from each
    source; per target keep the minimum length and the count at that length.
    Walks of minimal length are exactly the shortest paths."""
    adj = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
    pairs = {}
    reach = {}  # (src, t) -> set reachable within t steps
    for src in range(n):
        by_len = {}  # target -> {length: count}
        walks = [(src,)]
        reach[(src, 0)] = {src}
        for length in range(1, theta + 1):
            nxt = []
            for w in walks:
                for v in adj[w[-1]]:
                    nxt.append(w + (v,))
            for w in nxt:
                tgt = w[-1]
                if tgt != src:
                    by_len.setdefault(tgt, {}).setdefault(length, 0)
                    by_len[tgt][length] += 1
            walks = nxt
            reach[(src, length)] = reach[(src, length - 1)] | {w[-1] for w in walks}
        for tgt, counts in by_len.items():
            s = min(counts)
            pairs[(src, tgt)] = (s, counts[s])
    return pairs, reach


def net_of(n, edges):
    return make_network(np.zeros((n, 1)), edges)


class TestBfsPathProfile:
    def test_chain(self):
        profile, fronts = bfs_path_profile(net_of(3, {(0, 1), (1, 2)}), theta=3)
        assert profile.pairs[(0, 2)] == (2, 1)
        assert fronts.sizes[0, 0] == 1

    def test_diamond(self):
        edges = {(0, 1), (0, 2), (1, 3), (2, 3)}
        profile, _ = bfs_path_profile(net_of(4, edges), theta=2)
        assert profile.pairs[(0, 3)] == (2, 2)

    def test_four_chain_length_three(self):
        edges = {(0, 1), (1, 2), (2, 3)}
        profile, _ = bfs_path_profile(net_of(4, edges), theta=3)
        assert profile.pairs[(0, 3)][0] == 3

    def test_theta_cutoff(self):
        edges = {(0, 1), (1, 2), (2, 3)}
        profile, _ = bfs_path_profile(net_of(4, edges), theta=2)
        assert (0, 3) not in profile.pairs

    def test_front_zero_column_is_ones(self, rng):
        edges = random_digraph_edges(rng, 6, 0.3)
        _, fronts = bfs_path_profile(net_of(6, edges), theta=3)
        assert np.all(fronts.sizes[:, 0] == 1)

    @pytest.mark.parametrize("trial", range(25))
    def test_matches_walk_enumeration(self, trial):
        rng = np.random.default_rng(1000 + trial)
        n = int(rng.integers(2, 9))
        theta = int(rng.integers(1, 5))
        edges = random_digraph_edges(rng, n, 0.35)
        profile, fronts = bfs_path_profile(net_of(n, edges), theta)
        oracle_pairs, reach = brute_force_profile(n, edges, theta)
        assert profile.pairs == oracle_pairs
        for i in range(n):
            for t in range(theta):
                expected = (len(reach[(i, t)]) - len(reach[(i, t - 1)])
                            if t > 0 else 1)
                assert fronts.sizes[i, t] == expected


class TestSimilarityFunctions:
    def setup_profile(self, edges, n, theta=3, delta=0.5):
        profile, fronts = bfs_path_profile(net_of(n, edges), theta)
        return profile, fronts, delta

    def test_single_path_gives_delta_pow_s(self):
        edges = {(0, 1), (1, 2)}
        profile, fronts, delta = self.setup_profile(edges, 3)
        Sa = similarity_front_relative(profile, fronts, delta)
        Sb = similarity_front_max(profile, fronts, delta)
        assert Sa[0, 2] == pytest.approx(delta ** 2)
        assert Sb[0, 2] == pytest.approx(delta ** 2)

    def test_front_relative_hand_value(self):
        # 0 -> {1,2,3}, and 1,2 -> 4: pair (0,4) has s=2, e=2, |Front(0,1)|=3
        edges = {(0, 1), (0, 2), (0, 3), (1, 4), (2, 4)}
        profile, fronts, delta = self.setup_profile(edges, 5, delta=0.5)
        assert profile.pairs[(0, 4)] == (2, 2)
        assert fronts.sizes[0, 1] == 3
        Sa = similarity_front_relative(profile, fronts, delta)
        assert Sa[0, 4] == pytest.approx(0.25 + 0.25 * 0.5)

    def test_front_max_hand_value(self):
        # source 0 fans out to 9 nodes that all hit node 10: s=2, e=9,
        # Front(1)_max = 9, so the bonus ratio is (9-1)/9.
        edges = {(0, k) for k in range(1, 10)} | {(k, 10) for k in range(1, 10)}
        profile, fronts, delta = self.setup_profile(edges, 11, delta=0.5)
        assert profile.pairs[(0, 10)] == (2, 9)
        assert fronts.front_max[1] == 9
        Sb = similarity_front_max(profile, fronts, delta)
        assert Sb[0, 10] == pytest.approx(0.25 + 0.25 * (8 / 9))

    def test_equal_s_e_equal_front_max_value(self):
        # Two sources with different frontier sizes but the same (s, e) must
        # score identically under the global-max variant.
        edges = ({(0, 1), (0, 2), (1, 3), (2, 3)}
                 | {(4, 5), (4, 6), (4, 7), (5, 8), (6, 8)})
        profile, fronts, delta = self.setup_profile(edges, 9, delta=0.4)
        assert profile.pairs[(0, 3)] == profile.pairs[(4, 8)] == (2, 2)
        Sb = similarity_front_max(profile, fronts, delta)
        assert Sb[0, 3] == pytest.approx(Sb[4, 8])

    def test_monotone_in_e_and_s(self):
        delta = 0.5
        # fixed s, growing e: add parallel middle vertices one at a time
        values = []
        for width in (1, 2, 3):
            edges = {(0, k) for k in range(1, width + 1)}
            edges |= {(k, 9) for k in range(1, width + 1)}
            profile, fronts, _ = self.setup_profile(edges, 10, delta=delta)
            values.append(similarity_front_relative(profile, fronts, delta)[0, 9])
        assert values[0] <= values[1] <= values[2]
        # e = 1, growing s: strict decay
        chain = {(k, k + 1) for k in range(4)}
        profile, fronts, _ = self.setup_profile(chain, 5, theta=4, delta=delta)
        Sa = similarity_front_relative(profile, fronts, delta)
        decays = [Sa[0, s] for s in range(1, 5)]
        assert all(x > y for x, y in zip(decays, decays[1:]))

    def test_values_within_band(self):
        rng = np.random.default_rng(7)
        edges = random_digraph_edges(rng, 8, 0.3)
        delta, theta = 0.5, 3
        profile, fronts, _ = self.setup_profile(edges, 8, theta=theta, delta=delta)
        for M in (similarity_front_relative(profile, fronts, delta),
                  similarity_front_max(profile, fronts, delta)):
            for (i, j), (s, e) in profile.pairs.items():
                assert delta ** s - 1e-12 <= M[i, j] <= delta ** (s - 1) + 1e-12
            assert np.all(np.diag(M) == 0)

    def test_relative_dominates_max(self):
        rng = np.random.default_rng(8)
        edges = random_digraph_edges(rng, 8, 0.4)
        delta = 0.5
        profile, fronts, _ = self.setup_profile(edges, 8, delta=delta)
        Sa = similarity_front_relative(profile, fronts, delta)
        Sb = similarity_front_max(profile, fronts, delta)
        assert np.all(Sa >= Sb - 1e-12)


class TestSymmetrize:
    def test_identity_on_symmetric(self, rng):
        M = rng.random((5, 5))
        M = (M + M.T) / 2
        np.testing.assert_allclose(symmetrize(M), M)

    def test_averages(self):
        M = np.zeros((3, 3))
        M[1, 2] = 0.4
        out = symmetrize(M)
        assert out[1, 2] == out[2, 1] == pytest.approx(0.2)

    def test_zero(self):
        np.testing.assert_array_equal(symmetrize(np.zeros((4, 4))), np.zeros((4, 4)))
