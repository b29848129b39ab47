"""Seeded samplers for the four random-graph models and their coupling.

Models:
  * uniform key rings + overlap threshold q  -> uniform q-intersection graph
  * Bernoulli(x) key inclusion + threshold q -> binomial q-intersection graph
  * independent channels                     -> Erdos-Renyi graph
  * intersection of the first and third      -> the composed network model
plus a joint construction that samples a uniform-ring and a binomial-ring
assignment on the same probability space so that (whenever every binomial
ring fits) each binomial ring is a subset of the uniform ring at its node.

Everything is a pure function of (parameters, Seed): no global RNG state.
Each sampler consumes its own sub-stream, derived by hashing the seed with a
per-component tag, so e.g. the channel draw never perturbs the ring draw.
"""

from __future__ import annotations

import zlib
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .graph import Graph, intersect

__all__ = [
    "ModelParams",
    "KeyAssignment",
    "Seed",
    "sample_uniform_rings",
    "sample_binomial_rings",
    "intersection_graph",
    "sample_er",
    "sample_composed",
    "sample_coupled_pair",
]

# Above this many matrix cells the vectorized subset sampler would allocate
# too much; switch to Floyd's O(K)-per-ring algorithm.
_PARTITION_CELL_LIMIT = 20_000_000
# At and below this node count, pairwise ring intersection in pure Python is
# cheap and serves as the reference path for the sparse linear-algebra one.
_SMALL_GRAPH_NODES = 200


@dataclass(frozen=True)
class ModelParams:
    """One network instance: n sensors, rings of K keys from a pool of P,
    link rule 'share at least q keys', channel-on probability p."""

    n: int
    K: int
    P: int
    q: int
    p: float

    def __post_init__(self):
        problems = []
        if not isinstance(self.n, int) or self.n < 2:
            problems.append(f"n must be an integer >= 2, got {self.n!r}")
        for name in ("K", "P", "q"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                problems.append(f"{name} must be a positive integer, got {v!r}")
        if not problems:
            if not self.q <= self.K <= self.P:
                problems.append(
                    f"need 1 <= q <= K <= P, got q={self.q}, K={self.K}, P={self.P}"
                )
        if not isinstance(self.p, (int, float)) or not 0.0 <= float(self.p) <= 1.0:
            problems.append(f"p must be a real in [0, 1], got {self.p!r}")
        if problems:
            raise ValueError("; ".join(problems))


@dataclass(frozen=True)
class KeyAssignment:
    """Per-node key rings; each ring is a sorted tuple of key ids in [0, P)."""

    rings: tuple[tuple[int, ...], ...]
    P: int


@dataclass(frozen=True)
class Seed:
    master_seed: int
    trial_index: int

    def __post_init__(self):
        if not isinstance(self.master_seed, int) or not 0 <= self.master_seed < 2**64:
            raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed!r}")
        if not isinstance(self.trial_index, int) or self.trial_index < 0:
            raise ValueError(f"trial_index must be a non-negative integer, got {self.trial_index!r}")


def _component_rng(seed: Seed, tag: str) -> np.random.Generator:
    """Independent sub-stream for one model component of one trial."""
    tag_word = zlib.crc32(tag.encode("ascii"))
    ss = np.random.SeedSequence([seed.master_seed, seed.trial_index, tag_word])
    return np.random.Generator(np.random.PCG64(ss))


def _floyd_sample(count: int, pool_size: int, uniforms) -> list[int]:
    """Floyd's algorithm: a uniform `count`-subset of range(pool_size).

    `uniforms` supplies count floats in [0,1); draw t uses range pool_size-count+t+1.
    """
    chosen: set[int] = set()
    base = pool_size - count
    for t in range(count):
        r = int(uniforms[t] * (base + t + 1))
        chosen.add(base + t if r in chosen else r)
    return sorted(chosen)


def _uniform_rings(n: int, K: int, P: int, rng, method: str) -> list[tuple[int, ...]]:
    if method == "auto":
        method = "partition" if n * P <= _PARTITION_CELL_LIMIT else "floyd"
    if method == "partition":
        # rank K i.i.d. uniforms per row: the index set of the K smallest is a
        # uniform K-subset by exchangeability
        w = rng.random((n, P))
        idx = np.argpartition(w, K - 1, axis=1)[:, :K] if K < P else np.tile(np.arange(P), (n, 1))
        idx = np.sort(idx, axis=1)
        return [tuple(row) for row in idx.tolist()]
    if method == "floyd":
        u = rng.random((n, K))
        return [tuple(_floyd_sample(K, P, u[i])) for i in range(n)]
    raise ValueError(f"unknown sampling method {method!r}")


def sample_uniform_rings(params: ModelParams, seed: Seed, method: str = "auto") -> KeyAssignment:
    """Independent uniform K-subsets of the pool, one per node."""
    if params.K > params.P:
        raise ValueError(f"ring size K={params.K} exceeds pool size P={params.P}")
    rng = _component_rng(seed, "rings")
    rings = _uniform_rings(params.n, params.K, params.P, rng, method)
    return KeyAssignment(rings=tuple(rings), P=params.P)


def sample_binomial_rings(P: int, x: float, n: int, seed: Seed) -> KeyAssignment:
    """Each key joins each ring independently with probability x.

    Sampled as ring size ~ Binomial(P, x) followed by a uniform subset of
    that size — the same distribution, without materializing n*P coin flips.
    """
    if not isinstance(P, int) or P < 1:
        raise ValueError(f"P must be a positive integer, got {P!r}")
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not isinstance(x, (int, float)) or not 0.0 <= float(x) <= 1.0:
        raise ValueError(f"x must be a real in [0, 1], got {x!r}")
    rng = _component_rng(seed, "binomials")
    sizes = rng.binomial(P, float(x), size=n)
    u = rng.random(int(sizes.sum()))
    rings = []
    pos = 0
    for b in sizes.tolist():
        rings.append(tuple(_floyd_sample(b, P, u[pos : pos + b])))
        pos += b
    return KeyAssignment(rings=tuple(rings), P=P)


def _edges_by_set_intersection(rings, q: int) -> list[tuple[int, int]]:
    sets = [set(r) for r in rings]
    n = len(sets)
    edges = []
    for i in range(n):
        si = sets[i]
        for j in range(i + 1, n):
            if len(si & sets[j]) >= q:
                edges.append((i, j))
    return edges


def _edges_by_sparse_product(rings, P: int, q: int):
    """All pairwise overlap counts at once via an incidence-matrix product.

    The n x n product is sparse because most ring pairs share nothing; this
    replaces an O(n^2 K) Python loop that dominates large experiments.
    """
    import scipy.sparse as sp

    n = len(rings)
    lengths = np.fromiter((len(r) for r in rings), dtype=np.int64, count=n)
    rows = np.repeat(np.arange(n, dtype=np.int64), lengths)
    cols = np.fromiter((k for r in rings for k in r), dtype=np.int64, count=int(lengths.sum()))
    inc = sp.csr_matrix(
        (np.ones(len(cols), dtype=np.int32), (rows, cols)), shape=(n, P)
    )
    overlap = (inc @ inc.T).tocoo()
    keep = (overlap.data >= q) & (overlap.row < overlap.col)
    return list(zip(overlap.row[keep].tolist(), overlap.col[keep].tolist()))


def intersection_graph(assignment: KeyAssignment, q: int) -> Graph:
    """Edge {i,j} iff rings i and j share at least q keys."""
    if not isinstance(q, int) or q < 1:
        raise ValueError(f"q must be a positive integer, got {q!r}")
    rings = assignment.rings
    n = len(rings)
    if n < 2:
        return Graph(n)
    if n <= _SMALL_GRAPH_NODES:
        edges = _edges_by_set_intersection(rings, q)
    else:
        edges = _edges_by_sparse_product(rings, assignment.P, q)
    return Graph(n, edges)


def sample_er(n: int, p: float, seed: Seed) -> Graph:
    """Independent channels: each of the C(n,2) edges is on with probability p."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not isinstance(p, (int, float)) or not 0.0 <= float(p) <= 1.0:
        raise ValueError(f"p must be a real in [0, 1], got {p!r}")
    rng = _component_rng(seed, "channels")
    if n == 1:
        return Graph(1)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < float(p)
    return Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def sample_composed(params: ModelParams, seed: Seed) -> Graph:
    """Intersection of the uniform q-intersection graph and the channel graph.

    The ring draw and the channel draw use independent sub-streams of the
    same seed, so either component can be reproduced in isolation.
    """
    secure = intersection_graph(sample_uniform_rings(params, seed), params.q)
    channels = sample_er(params.n, params.p, seed)
    return intersect(secure, channels)


def _complement_element(ring: tuple[int, ...], P: int, j: int) -> int:
    """The j-th smallest key (0-based) NOT in the sorted ring."""
    v = j
    while True:
        shifted = j + bisect_right(ring, v)
        if shifted == v:
            return v
        v = shifted


def sample_coupled_pair(
    params: ModelParams, x: float, seed: Seed
) -> tuple[KeyAssignment, KeyAssignment, bool]:
    """Draw uniform K-rings and Binomial(P, x) rings on one probability space.

    Per node: the uniform ring S_i and a size B_i ~ Binomial(P, x) are drawn;
    if B_i <= K the binomial ring is a uniform B_i-subset of S_i, so it is
    contained in S_i by construction. If B_i > K the binomial ring extends
    S_i with uniformly chosen outside keys (the identity
    C(b,K) C(P,b) = C(P,K) C(P-K,b-K) makes the result exactly uniform over
    b-subsets, keeping the marginal law intact even on failed trials).

    Returns (uniform_rings, binomial_rings, coupling_ok) where coupling_ok
    is True iff B_i <= K at every node — the case in which the binomial-ring
    graph is guaranteed to be a spanning subgraph of the uniform-ring graph.

    Marginals are exact on both sides: the uniform component matches
    sample_uniform_rings, the binomial component matches sample_binomial_rings.
    """
    if not isinstance(x, (int, float)) or not 0.0 <= float(x) <= 1.0:
        raise ValueError(f"x must be a real in [0, 1], got {x!r}")
    n, K, P = params.n, params.K, params.P
    uniform = sample_uniform_rings(params, seed)
    rng_b = _component_rng(seed, "binomials")
    sizes = rng_b.binomial(P, float(x), size=n)
    rng_sub = _component_rng(seed, "subset")
    draws = np.where(sizes <= K, sizes, sizes - K)
    u = rng_sub.random(int(draws.sum()))
    binomial_rings = []
    pos = 0
    for i, b in enumerate(sizes.tolist()):
        ring = uniform.rings[i]
        if b <= K:
            positions = _floyd_sample(b, K, u[pos : pos + b])
            binomial_rings.append(tuple(ring[t] for t in positions))
            pos += b
        else:
            extra_positions = _floyd_sample(b - K, P - K, u[pos : pos + (b - K)])
            extras = [_complement_element(ring, P, j) for j in extra_positions]
            binomial_rings.append(tuple(sorted(ring + tuple(extras))))
            pos += b - K
    coupling_ok = bool((sizes <= K).all())
    return uniform, KeyAssignment(rings=tuple(binomial_rings), P=P), coupling_ok
