"""Exact k-vertex-connectivity decisions, vertex connectivity, and the
degree census, plus an exhaustive small-graph oracle.

The decision procedure is tiered for the Monte Carlo hot path:

  * any k: reject immediately if min degree < k (the dominant outcome near
    the threshold) or if the graph is disconnected;
  * k = 1: the reachability check alone settles it;
  * k = 2: connected and no articulation point (iterative lowpoint DFS);
  * k >= 3: unit-capacity max-flow on the node-split transformation, with
    augmentation capped at k. One fixed low-degree source: flows to every
    non-neighbor, then flows between non-adjacent neighbor pairs — if a cut
    of size < k existed, one of those pairs would straddle it.

The flow routine is the general engine; the cheaper k = 1, 2 answers are
cross-checked against it and against brute_force_k_connected by the tests.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .graph import Graph, is_connected, min_degree

__all__ = [
    "DegreeCensus",
    "is_k_connected",
    "vertex_connectivity",
    "brute_force_k_connected",
    "degree_census",
]

_ORACLE_NODE_LIMIT = 16


@dataclass(frozen=True)
class DegreeCensus:
    """counts[h] = number of nodes with degree exactly h, for h in 0..n-1."""

    counts: tuple[int, ...]

    def total_nodes(self) -> int:
        return sum(self.counts)

    def total_degree(self) -> int:
        return sum(h * c for h, c in enumerate(self.counts))


def degree_census(g: Graph) -> DegreeCensus:
    counts = [0] * g.node_count
    for nbrs in g.adjacency:
        counts[len(nbrs)] += 1
    return DegreeCensus(counts=tuple(counts))


def _has_articulation_point(g: Graph) -> bool:
    """Iterative lowpoint DFS over a connected graph."""
    n = g.node_count
    adj = g.adjacency
    disc = [-1] * n
    low = [0] * n
    parent = [-1] * n
    timer = 0
    disc[0] = low[0] = timer
    timer += 1
    root_children = 0
    iters = [iter(adj[v]) for v in range(n)]
    stack = [0]
    while stack:
        v = stack[-1]
        advanced = False
        for w in iters[v]:
            if disc[w] == -1:
                parent[w] = v
                disc[w] = low[w] = timer
                timer += 1
                if v == 0:
                    root_children += 1
                stack.append(w)
                advanced = True
                break
            if w != parent[v] and disc[w] < low[v]:
                low[v] = disc[w]
        if not advanced:
            stack.pop()
            if stack:
                u = stack[-1]
                if low[v] < low[u]:
                    low[u] = low[v]
                if u != 0 and low[v] >= disc[u]:
                    return True
    return root_children > 1


class _FlowNetwork:
    """Unit-capacity residual network for internally node-disjoint paths.

    Node v splits into in-vertex 2v and out-vertex 2v+1 joined by a
    capacity-1 arc; each graph edge {u, v} becomes arcs u_out->v_in and
    v_out->u_in. The max flow from s_out to t_in then equals the number of
    internally disjoint s-t paths (s, t non-adjacent).
    """

    def __init__(self, g: Graph):
        n = g.node_count
        self.head: list[list[int]] = [[] for _ in range(2 * n)]
        self.to: list[int] = []
        self.cap: list[int] = []
        for v in range(n):
            self._arc(2 * v, 2 * v + 1, 1)
        for i, j in g.edges():
            self._arc(2 * i + 1, 2 * j, 1)
            self._arc(2 * j + 1, 2 * i, 1)
        self._base_cap = list(self.cap)

    def _arc(self, a: int, b: int, c: int) -> None:
        self.head[a].append(len(self.to))
        self.to.append(b)
        self.cap.append(c)
        self.head[b].append(len(self.to))
        self.to.append(a)
        self.cap.append(0)

    def max_flow(self, s: int, t: int, limit: int) -> int:
        """Augment along shortest residual paths until `limit` is reached or
        no augmenting path remains."""
        self.cap = list(self._base_cap)
        to, cap, head = self.to, self.cap, self.head
        flow = 0
        prev_arc = [-1] * len(head)
        while flow < limit:
            for v in range(len(prev_arc)):
                prev_arc[v] = -1
            prev_arc[s] = -2
            queue = deque([s])
            while queue:
                v = queue.popleft()
                if v == t:
                    break
                for a in head[v]:
                    w = to[a]
                    if cap[a] > 0 and prev_arc[w] == -1:
                        prev_arc[w] = a
                        queue.append(w)
            if prev_arc[t] == -1:
                break
            v = t
            while v != s:
                a = prev_arc[v]
                cap[a] -= 1
                cap[a ^ 1] += 1
                v = to[a ^ 1]
            flow += 1
        return flow


def _k_connected_by_flow(g: Graph, k: int) -> bool:
    """Assumes: connected, min degree >= k, not complete, n > k, k >= 2."""
    net = _FlowNetwork(g)
    degrees = [len(nbrs) for nbrs in g.adjacency]
    source = min(range(g.node_count), key=degrees.__getitem__)
    s_out = 2 * source + 1
    nbrs = set(g.adjacency[source])
    for t in range(g.node_count):
        if t != source and t not in nbrs:
            if net.max_flow(s_out, 2 * t, k) < k:
                return False
    for a, b in combinations(g.adjacency[source], 2):
        if b not in g.adjacency[a]:
            if net.max_flow(2 * a + 1, 2 * b, k) < k:
                return False
    return True


def is_k_connected(g: Graph, k: int) -> bool:
    """True iff removing any k-1 nodes leaves the rest connected
    (equivalently: vertex connectivity >= k). Needs more than k nodes;
    a complete graph on m nodes is k-connected exactly for k <= m-1."""
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    n = g.node_count
    if n < 2:
        raise ValueError(f"k-connectivity needs at least 2 nodes, got {n}")
    if n <= k:
        return False
    if min_degree(g) < k:
        return False
    if not is_connected(g):
        return False
    if k == 1:
        return True
    if k == 2:
        return not _has_articulation_point(g)
    if min_degree(g) == n - 1:
        return True  # complete graph, and n > k already holds
    return _k_connected_by_flow(g, k)


def vertex_connectivity(g: Graph) -> int:
    """kappa(g): the largest k such that is_k_connected(g, k); 0 if disconnected."""
    n = g.node_count
    if n < 2:
        raise ValueError(f"vertex connectivity needs at least 2 nodes, got {n}")
    if not is_connected(g):
        return 0
    delta = min_degree(g)
    if delta == n - 1:
        return n - 1
    net = _FlowNetwork(g)
    degrees = [len(nbrs) for nbrs in g.adjacency]
    source = min(range(n), key=degrees.__getitem__)
    s_out = 2 * source + 1
    nbrs = set(g.adjacency[source])
    best = delta
    for t in range(n):
        if t != source and t not in nbrs:
            best = min(best, net.max_flow(s_out, 2 * t, best))
    for a, b in combinations(g.adjacency[source], 2):
        if best == 0:
            break
        if b not in g.adjacency[a]:
            best = min(best, net.max_flow(2 * a + 1, 2 * b, best))
    return best


def brute_force_k_connected(g: Graph, k: int) -> bool:
    """Oracle: literally delete every (k-1)-subset and test connectivity.

    Only for graphs with at most 16 nodes; beyond that the subset count is
    oracle misuse. Adjacency is packed into bitmasks so the exhaustive sweep
    stays cheap."""
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    n = g.node_count
    if n < 2:
        raise ValueError(f"k-connectivity needs at least 2 nodes, got {n}")
    if n > _ORACLE_NODE_LIMIT:
        raise ValueError(
            f"brute-force oracle limited to {_ORACLE_NODE_LIMIT} nodes, got {n}"
        )
    if n <= k:
        return False
    masks = [0] * n
    for i, j in g.edges():
        masks[i] |= 1 << j
        masks[j] |= 1 << i
    full = (1 << n) - 1
    for removed in combinations(range(n), k - 1):
        gone = 0
        for v in removed:
            gone |= 1 << v
        alive = full & ~gone
        start = alive & -alive
        seen = start
        frontier = start
        while frontier:
            v = frontier & -frontier
            frontier &= frontier - 1
            grow = masks[v.bit_length() - 1] & alive & ~seen
            seen |= grow
            frontier |= grow
        if seen != alive:
            return False
    return True
