"""Relational similarity from directed shortest paths.

For every ordered pair reachable within theta hops we record the shortest
directed path length s and the number e of distinct shortest paths, plus the
per-source BFS frontier sizes. Two similarity functions turn that profile
into matrices: one scales the path-multiplicity bonus by the source's own
frontier size, the other by the global maximum frontier size.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .network import AttributedNetwork


@dataclass(frozen=True)
class PathProfile:
    """pairs[(i, j)] = (s, e): shortest directed path length and count, s <= theta."""

    pairs: dict
    theta: int


@dataclass(frozen=True)
class FrontTable:
    """Frontier cardinalities |Front(i, t)| for t in [0, theta-1], plus column maxima.

    Front(i, t) is the set of objects first reached from i at exactly t steps;
    Front(i, 0) = {i} so the t=0 column is all ones.
    """

    sizes: np.ndarray      # (n, theta) ints
    front_max: np.ndarray  # (theta,) column maxima


def bfs_path_profile(net: AttributedNetwork, theta: int) -> tuple[PathProfile, FrontTable]:
    """BFS from every source with shortest-path counting, depth-limited to theta.

    When j is first reached at depth s, its path count is the sum of the
    counts of its depth s-1 predecessors.
    """
    n = net.n
    adj = [[] for _ in range(n)]
    for i, j in net.edges:
        adj[i].append(j)

    pairs = {}
    sizes = np.zeros((n, theta), dtype=np.int64)
    dist = np.empty(n, dtype=np.int64)
    for src in range(n):
        dist.fill(-1)
        counts = {src: 1}
        dist[src] = 0
        sizes[src, 0] = 1
        frontier = deque([src])
        for depth in range(1, theta + 1):
            nxt = []
            while frontier:
                u = frontier.popleft()
                cu = counts[u]
                for v in adj[u]:
                    if dist[v] == -1:
                        dist[v] = depth
                        counts[v] = cu
                        nxt.append(v)
                    elif dist[v] == depth:
                        counts[v] += cu
            for v in nxt:
                pairs[(src, v)] = (depth, counts[v])
            if depth < theta:
                sizes[src, depth] = len(nxt)
            frontier = deque(nxt)
            if not frontier:
                break
    return (PathProfile(pairs=pairs, theta=theta),
            FrontTable(sizes=sizes, front_max=sizes.max(axis=0)))


def _fill(profile: PathProfile, delta: float, n: int, denom_for_pair) -> np.ndarray:
    M = np.zeros((n, n))
    for (i, j), (s, e) in profile.pairs.items():
        base = delta ** s
        span = delta ** (s - 1) - base
        if e == 1:
            ratio = 0.0
        else:
            denom = denom_for_pair(i, s)
            # denom 0 only when Front(i, s-1) is a single object; several
            # shortest paths then share that penultimate vertex, so the bonus
            # saturates. Otherwise clamp: e may exceed the frontier size.
            ratio = 1.0 if denom <= 0 else min(1.0, (e - 1) / denom)
        M[i, j] = base + span * ratio
    return M


def similarity_front_relative(profile: PathProfile, fronts: FrontTable,
                              delta: float) -> np.ndarray:
    """Similarity with the multiplicity bonus scaled by the source's own frontier.

    value = delta^s + (delta^(s-1) - delta^s) * (e-1)/(|Front(i, s-1)| - 1),
    ratio clamped to [0, 1]. Pre-symmetrization; diagonal 0.
    """
    n = fronts.sizes.shape[0]
    return _fill(profile, delta, n,
                 lambda i, s: fronts.sizes[i, s - 1] - 1)


def similarity_front_max(profile: PathProfile, fronts: FrontTable,
                         delta: float) -> np.ndarray:
    """Similarity with the multiplicity bonus scaled by the global maximum frontier.

    value = delta^s + (delta^(s-1) - delta^s) * (e-1)/Front(s-1)_max, so two
    pairs with equal (s, e) always score the same. Pre-symmetrization.
    """
    n = fronts.sizes.shape[0]
    return _fill(profile, delta, n,
                 lambda i, s: fronts.front_max[s - 1])


def symmetrize(M: np.ndarray) -> np.ndarray:
    """(M + M^T) / 2."""
    return (M + M.T) / 2.0
