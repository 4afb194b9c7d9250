"""Shared test fixtures and independent reference implementations.

The oracles here deliberately re-derive everything from first principles
(plain recursion over exact distance comparisons, exhaustive subset
search) so that agreement with the library is a genuine two-route check,
not the same algorithm called twice.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

import pytest

from navgame import (
    GeneralMetric,
    Network,
    StrategyProfile,
    Variant,
    induce_network,
)


# ---------------------------------------------------------------------------
# reference: greedy reachability by literal path search


def oracle_reachable(network: Network, space, target: int) -> frozenset[int]:
    """Nodes with a strictly-distance-decreasing path to `target`.

    Memoized recursion straight off the definition: a node reaches the
    target iff it is the target or some neighbour strictly closer to the
    target reaches it.  Distances strictly decrease along any such path,
    so the recursion is well-founded without a visited set.
    """
    adj = {u: set() for u in range(network.n)}
    for u, v in network.edges:
        adj[u].add(v)
        if network.variant is Variant.UNDIRECTED:
            adj[v].add(u)

    @lru_cache(maxsize=None)
    def reaches(u: int) -> bool:
        if u == target:
            return True
        du = space.dist_key(u, target)
        return any(
            space.dist_key(v, target) < du and reaches(v) for v in adj[u]
        )

    return frozenset(u for u in range(network.n) if reaches(u))


def oracle_navigable(network: Network, space) -> bool:
    n = network.n
    return all(
        len(oracle_reachable(network, space, t)) == n for t in range(n)
    )


# ---------------------------------------------------------------------------
# reference: smallest first-hop sets and best responses


def oracle_min_routing_set(space, agent: int) -> frozenset[int]:
    """Smallest S such that every target has some member strictly closer.

    Exhaustive by size, lexicographically smallest among winners.
    """
    n = space.n
    others = [v for v in range(n) if v != agent]
    targets = others
    for size in range(0, n):
        for combo in itertools.combinations(others, size):
            if all(
                any(
                    space.dist_key(v, t) < space.dist_key(agent, t)
                    for v in combo
                )
                for t in targets
            ):
                return frozenset(combo)
    raise AssertionError("no routing set found; space is degenerate")


def oracle_best_response(space, profile: StrategyProfile, agent: int):
    """Exhaustive best response: try every subset by size, then lex order.

    Returns (cost, strategy) where cost is the cheapest subset size that
    keeps the agent greedy-connected to everyone, or (inf, None) if not
    even the full set works.
    """
    n = profile.n
    others = [v for v in range(n) if v != agent]
    for size in range(0, n):
        for combo in itertools.combinations(others, size):
            cand = profile.replace(agent, frozenset(combo))
            net = induce_network(cand)
            ok = all(
                agent in oracle_reachable(net, space, t)
                for t in range(n)
                if t != agent
            )
            if ok:
                return size, frozenset(combo)
    return float("inf"), None


def oracle_social_optimum(space, variant) -> int:
    """Cheapest total edge count over all navigable configurations.

    Undirected: enumerate edge sets.  Directed: per-agent minimum
    first-hop sets are independent, so the optimum is their sum.
    """
    n = space.n
    variant = Variant(variant)
    if variant is Variant.DIRECTED:
        return sum(len(oracle_min_routing_set(space, u)) for u in range(n))
    pairs = list(itertools.combinations(range(n), 2))
    for size in range(n - 1, len(pairs) + 1):
        for combo in itertools.combinations(pairs, size):
            net = Network(Variant.UNDIRECTED, n, frozenset(combo))
            if oracle_navigable(net, space):
                return size
    raise AssertionError("not even the complete graph is navigable")


# ---------------------------------------------------------------------------
# random instance helpers


def rand_metric(rng: random.Random, n: int, lo: int = 51, hi: int = 99):
    """Random symmetric integer matrix from a band where the triangle
    inequality holds automatically (lo + lo >= hi).  Ties happen often,
    which is exactly what the greedy semantics must survive."""
    d = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d[i][j] = d[j][i] = rng.randint(lo, hi)
    return GeneralMetric(tuple(tuple(row) for row in d))


def rand_points(rng: random.Random, n: int, dim: int, side: int = 10**6):
    pts = set()
    while len(pts) < n:
        pts.add(tuple(rng.randint(0, side) for _ in range(dim)))
    return tuple(sorted(pts))


def owned_profile(net: Network) -> StrategyProfile:
    """Per-owner strategy tuple from a network with edge ownership."""
    strategies = [set() for _ in range(net.n)]
    for (u, v), owner in net.ownership.items():
        strategies[owner].add(v if owner == u else u)
    return StrategyProfile(
        net.variant, tuple(frozenset(s) for s in strategies)
    )


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
