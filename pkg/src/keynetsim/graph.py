"""Immutable simple undirected graphs on node indices 0..n-1.

The rest of the package treats Graph as a value: samplers build them,
connectivity/experiment code only reads them. Construction canonicalizes
arbitrary edge iterables (dedup, symmetrize, sort) and validates indices,
so downstream code can rely on the invariants instead of re-checking.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Sequence


class Graph:
    """Simple undirected graph stored as sorted neighbor tuples.

    Sorted adjacency keeps memory proportional to the edge count — at the
    densities we care about (mean degree near ln n) a matrix would be almost
    entirely zeros — and gives linear-time neighbor merges.
    """

    __slots__ = ("node_count", "_adj")

    def __init__(self, node_count: int, edges: Iterable[Sequence[int]] = ()):
        if not isinstance(node_count, int) or node_count < 0:
            raise ValueError(f"node_count must be a non-negative integer, got {node_count!r}")
        neighbor_sets: list[set[int]] = [set() for _ in range(node_count)]
        for edge in edges:
            i, j = edge
            i, j = int(i), int(j)
            if not (0 <= i < node_count and 0 <= j < node_count):
                raise ValueError(f"edge ({i}, {j}) out of range for node_count={node_count}")
            if i == j:
                raise ValueError(f"self-loop at node {i} is not allowed")
            neighbor_sets[i].add(j)
            neighbor_sets[j].add(i)
        object.__setattr__(self, "node_count", node_count)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(s)) for s in neighbor_sets))

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        return self._adj

    def neighbors(self, i: int) -> tuple[int, ...]:
        if not 0 <= i < self.node_count:
            raise ValueError(f"node index {i} out of range [0, {self.node_count})")
        return self._adj[i]

    def has_edge(self, i: int, j: int) -> bool:
        a = self.neighbors(i)
        if not 0 <= j < self.node_count:
            raise ValueError(f"node index {j} out of range [0, {self.node_count})")
        # neighbor tuples are sorted; bisection would be overkill at our degrees
        return j in a

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield each edge once as (i, j) with i < j, in lexicographic order."""
        for i, nbrs in enumerate(self._adj):
            for j in nbrs:
                if j > i:
                    yield (i, j)

    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self._adj) // 2

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.node_count == other.node_count and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self.node_count, self._adj))

    def __repr__(self) -> str:
        return f"Graph(node_count={self.node_count}, edges={self.edge_count()})"


def degree(g: Graph, i: int) -> int:
    return len(g.neighbors(i))


def min_degree(g: Graph) -> int:
    if g.node_count < 1:
        raise ValueError("min_degree requires at least one node")
    return min(len(nbrs) for nbrs in g.adjacency)


def is_connected(g: Graph) -> bool:
    """Breadth-first reachability from node 0; a single node is connected."""
    n = g.node_count
    if n < 1:
        raise ValueError("is_connected requires at least one node")
    if n == 1:
        return True
    adj = g.adjacency
    seen = bytearray(n)
    seen[0] = 1
    queue = deque([0])
    reached = 1
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if not seen[w]:
                seen[w] = 1
                reached += 1
                queue.append(w)
    return reached == n


def intersect(a: Graph, b: Graph) -> Graph:
    """Graph with exactly the edges present in both a and b."""
    if a.node_count != b.node_count:
        raise ValueError(
            f"node counts differ: {a.node_count} vs {b.node_count}"
        )
    edges = []
    for i in range(a.node_count):
        b_nbrs = set(b.adjacency[i])
        for j in a.adjacency[i]:
            if j > i and j in b_nbrs:
                edges.append((i, j))
    return Graph(a.node_count, edges)


def to_edge_list_text(g: Graph) -> str:
    """Debug serialization: header 'n <node_count>', then one 'i j' per edge."""
    lines = [f"n {g.node_count}"]
    lines.extend(f"{i} {j}" for i, j in g.edges())
    return "\n".join(lines) + "\n"


def from_edge_list_text(text: str) -> Graph:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines or not lines[0].startswith("n "):
        raise ValueError("edge-list text must start with a header line 'n <node_count>'")
    try:
        node_count = int(lines[0].split()[1])
    except (IndexError, ValueError) as exc:
        raise ValueError(f"malformed header line {lines[0]!r}") from exc
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"malformed edge line {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return Graph(node_count, edges)
