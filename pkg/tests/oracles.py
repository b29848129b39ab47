"""Independent reference implementations used only by the test suite.

Everything here is deliberately dumb and exhaustive: bitmask enumeration over
entire sample spaces and exact rational arithmetic. The point is that these
share no code (and no algorithmic ideas) with the package, so agreement is
meaningful evidence.
"""

from fractions import Fraction
from itertools import combinations
from math import comb


def ring_masks(P: int, K: int) -> list[int]:
    """All C(P,K) key rings of size K from a pool of P keys, as bitmasks."""
    return [sum(1 << k for k in ring) for ring in combinations(range(P), K)]


def enumerate_overlap_distribution(P: int, K: int) -> dict[int, Fraction]:
    """Distribution of |S_i ∩ S_j| over all ordered pairs of K-subsets.

    Exact by construction: tallies every one of the C(P,K)^2 ordered pairs.
    """
    masks = ring_masks(P, K)
    counts = [0] * (K + 1)
    for a in masks:
        for b in masks:
            counts[(a & b).bit_count()] += 1
    total = len(masks) ** 2
    return {u: Fraction(c, total) for u, c in enumerate(counts)}


def enumerate_s(P: int, K: int, q: int) -> Fraction:
    """Exact P[|S_i ∩ S_j| >= q] by full enumeration of ring pairs."""
    dist = enumerate_overlap_distribution(P, K)
    return sum((frac for u, frac in dist.items() if u >= q), Fraction(0))


def rational_s(K: int, P: int, q: int) -> Fraction:
    """Exact P[|S_i ∩ S_j| >= q] via hypergeometric terms in big rationals.

    Kept as a Fraction end to end (no float conversion at all), so it reaches
    pool sizes where enumerate_s is infeasible; the hypergeometric form itself
    is cross-checked against enumerate_s on every feasible small case.
    """
    denom = comb(P, K)
    return sum(
        (Fraction(comb(K, u) * comb(P - K, K - u), denom) for u in range(q, K + 1)),
        Fraction(0),
    )


def rational_k_star(n: int, P: int, q: int, p: Fraction, ln_n_over_n: float) -> int:
    """Smallest K with p * s(K) strictly above the threshold, by rational scan."""
    K = q
    while 2 * K <= P:
        if float(p * rational_s(K, P, q)) > ln_n_over_n:
            return K
        K += 1
    raise ValueError("no solution in the supported regime")


def union_find_connected(n: int, edges: list[tuple[int, int]]) -> bool:
    """Connectivity oracle via union-find (package uses BFS; different route)."""
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    components = n
    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            components -= 1
    return components == 1
