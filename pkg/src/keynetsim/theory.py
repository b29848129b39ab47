"""Closed-form probability engine for the key-graph models.

Covers: the hypergeometric overlap law of two key rings, the exact and
asymptotic secure-link probabilities s and t, the k-connectivity scaling
deviation alpha and its limiting probability, the Erdos-Renyi analogue, the
design threshold K*, the Poisson mean for degree-h node counts, and the
parameters of the binomial-ring coupling.

The exact formulas are evaluated as ratios of arbitrary-precision integers
(a single shared denominator, one correctly-rounded division at the end), so
they agree with big-rational arithmetic to the last bit; only the asymptotic
and limit-law expressions use ordinary floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "UnsupportedRegimeError",
    "ScalingPoint",
    "CouplingParams",
    "exact_overlap_pmf",
    "exact_s_probability",
    "exact_t_probability",
    "asymptotic_s",
    "scaling_alpha",
    "predicted_k_connectivity",
    "predicted_min_degree_at_least_k",
    "er_k_connectivity_prediction",
    "k_star",
    "poisson_degree_mean",
    "coupling_x",
    "coupling_y",
]


class UnsupportedRegimeError(Exception):
    """Parameters outside the regime where a formula is claimed to hold."""


@dataclass(frozen=True)
class ScalingPoint:
    """An edge probability t placed on the k-connectivity scaling law.

    alpha is the exact algebraic inversion of t = (ln n + (k-1) ln ln n + alpha)/n.
    """

    n: int
    k: int
    t: float
    alpha: float


@dataclass(frozen=True)
class CouplingParams:
    """Bernoulli key-inclusion rate x and the derived edge rate y for the
    binomial-ring coupling constructions."""

    x: float
    y: float


def _validate_kpq(K: int, P: int, q: int | None = None) -> None:
    if not (isinstance(K, int) and isinstance(P, int)) or K < 1 or P < 1:
        raise ValueError(f"K and P must be positive integers, got K={K!r}, P={P!r}")
    if 2 * K > P:
        raise UnsupportedRegimeError(
            f"overlap formula requires 2K <= P, got K={K}, P={P}"
        )
    if q is not None and not (isinstance(q, int) and 1 <= q <= K):
        raise ValueError(f"q must be an integer in [1, K], got q={q!r} with K={K}")


def exact_overlap_pmf(K: int, P: int, u: int) -> float:
    """P[|S_i ∩ S_j| = u] for two independent uniform K-subsets of a P-pool.

    Hypergeometric form C(K,u) C(P-K,K-u) / C(P,K), valid for 2K <= P.
    """
    _validate_kpq(K, P)
    if not (isinstance(u, int) and 0 <= u <= K):
        raise ValueError(f"u must be an integer in [0, K], got u={u!r} with K={K}")
    return math.comb(K, u) * math.comb(P - K, K - u) / math.comb(P, K)


def exact_s_probability(K: int, P: int, q: int) -> float:
    """P[two uniform K-rings share at least q keys], exact.

    The tail terms share the denominator C(P,K), so the numerators are summed
    as exact integers and a single correctly-rounded division closes it out.
    """
    _validate_kpq(K, P, q)
    numerator = sum(
        math.comb(K, u) * math.comb(P - K, K - u) for u in range(q, K + 1)
    )
    return numerator / math.comb(P, K)


def exact_t_probability(params) -> float:
    """Secure-link probability t = p * s for a composed model instance."""
    return params.p * exact_s_probability(params.K, params.P, params.q)


def asymptotic_s(K: int, P: int, q: int) -> float:
    """Large-pool approximation s ≈ (K²/P)^q / q!.

    Accuracy needs K large and K²/P small; callers in the dimensioning
    regime (K²/P ≲ 0.13) see relative error under a few percent.
    """
    if K < 1 or P < 1 or q < 1:
        raise ValueError(f"K, P, q must be positive, got {K}, {P}, {q}")
    return (K * K / P) ** q / math.factorial(q)


def scaling_alpha(n: int, k: int, t: float) -> ScalingPoint:
    """Invert the scaling law t = (ln n + (k-1) ln ln n + alpha)/n for alpha."""
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"n must be an integer >= 3 (ln ln n must be positive), got {n!r}")
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t!r}")
    alpha = n * t - math.log(n) - (k - 1) * math.log(math.log(n))
    return ScalingPoint(n=n, k=k, t=t, alpha=alpha)


def predicted_k_connectivity(alpha: float, k: int) -> float:
    """Limiting P[k-connected] = exp(-exp(-alpha)/(k-1)!).

    IEEE infinities flow through: alpha=+inf gives 1, alpha=-inf gives 0.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    return math.exp(-math.exp(-alpha) / math.factorial(k - 1))


def predicted_min_degree_at_least_k(alpha: float, k: int) -> float:
    """Limiting P[min degree >= k]; same limit law as k-connectivity."""
    return predicted_k_connectivity(alpha, k)


def er_k_connectivity_prediction(n: int, p: float, k: int) -> float:
    """Limiting P[k-connected] for an Erdos-Renyi graph with edge rate p."""
    return predicted_k_connectivity(scaling_alpha(n, k, p).alpha, k)


def k_star(n: int, P: int, q: int, p: float, k: int = 1) -> int:
    """Smallest ring size K whose exact link probability clears the design
    threshold (ln n + (k-1) ln ln n)/n.

    k=1 is the plain connectivity rule; larger k uses the extended margin.
    Scans K upward from q (t is nondecreasing in K) and stays inside the
    2K <= P regime of the exact formula.
    """
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"n must be an integer >= 3, got {n!r}")
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    if not (isinstance(q, int) and q >= 1):
        raise ValueError(f"q must be a positive integer, got {q!r}")
    threshold = (math.log(n) + (k - 1) * math.log(math.log(n))) / n
    K = q
    while 2 * K <= P:
        if p * exact_s_probability(K, P, q) > threshold:
            return K
        K += 1
    raise UnsupportedRegimeError(
        f"no ring size K with 2K <= P={P} reaches the design threshold "
        f"{threshold:.6g} (n={n}, q={q}, p={p})"
    )


def poisson_degree_mean(n: int, t: float, h: int) -> float:
    """Mean of the limiting Poisson count of degree-h nodes:
    lambda = n (nt)^h e^{-nt} / h!."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t!r}")
    if not isinstance(h, int) or h < 0:
        raise ValueError(f"h must be a non-negative integer, got {h!r}")
    nt = n * t
    if nt == 0.0:
        return float(n) if h == 0 else 0.0
    log_lam = math.log(n) + h * math.log(nt) - nt - math.lgamma(h + 1)
    return math.exp(log_lam)


def coupling_x(n: int, K: int, P: int) -> float:
    """Key-inclusion rate x = (K/P)(1 - sqrt(3 ln n / K)) for the coupling
    that nests binomial rings inside uniform K-rings.

    Only meaningful when K > 3 ln n; at exact equality the rate degenerates
    to 0, below it the formula would go negative and is rejected.
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    if not (isinstance(K, int) and isinstance(P, int)) or K < 1 or P < 1:
        raise ValueError(f"K and P must be positive integers, got K={K!r}, P={P!r}")
    ratio = 3.0 * math.log(n) / K
    if ratio > 1.0:
        raise UnsupportedRegimeError(
            f"coupling rate needs K > 3 ln n = {3.0 * math.log(n):.4f}, got K={K}"
        )
    return (K / P) * (1.0 - math.sqrt(ratio))


def coupling_y(P: int, x: float, q: int) -> float:
    """Edge rate y = (P x²)^q / q! matched to a binomial-ring graph.

    The vanishing finite-size correction of the defining relation is dropped;
    it has no finite-n value.
    """
    if not isinstance(P, int) or P < 1:
        raise ValueError(f"P must be a positive integer, got {P!r}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x!r}")
    if not isinstance(q, int) or q < 1:
        raise ValueError(f"q must be a positive integer, got {q!r}")
    return (P * x * x) ** q / math.factorial(q)
