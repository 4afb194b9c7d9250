"""Minimum one-hop covers: the combinatorial core of the routing games.

An agent u routes greedily to target t exactly when some first hop v is both
strictly closer to t than u and itself able to reach t.  Everything an agent
can optimise therefore reduces to a set-cover problem over candidate first
hops, and this module owns the exact solver plus its two main clients: the
per-agent minimum routing set (with the residual variant used by the social
lower bound) and best responses for both game variants.

The solver is exact by iterative deepening with a node budget; if the budget
ever runs out it falls back to a greedy cover and says so in the result.
Given a choice of optimal covers, it returns a canonical one (maximum overlap
with a preferred set, then lexicographically smallest), which keeps every
downstream trajectory deterministic.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .geometry import NngGraph, build_nng
from .metric import Space, distance_rank_table
from .network import (
    StrategyProfile,
    Variant,
    induce_network,
    reach_masks,
)

logger = logging.getLogger(__name__)


class SolveMode(str, Enum):
    EXACT = "exact"
    HEURISTIC = "heuristic"


class CoverError(Exception):
    pass


class _BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class SearchBudget:
    """Node budget for one exact cover computation."""

    max_nodes: int = 2_000_000


DEFAULT_BUDGET = SearchBudget()


@dataclass(frozen=True)
class CoverResult:
    chosen: tuple[int, ...]
    mode: SolveMode
    nodes: int

    @property
    def exact(self) -> bool:
        return self.mode is SolveMode.EXACT

    @property
    def size(self) -> int:
        return len(self.chosen)


class _State:
    __slots__ = ("nodes", "limit")

    def __init__(self, limit: int):
        self.nodes = 0
        self.limit = limit

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.limit:
            raise _BudgetExceeded


def _greedy_cover(universe: int, cands: list[tuple[int, int]]) -> list[int]:
    chosen: list[int] = []
    left = universe
    while left:
        best_id, best_gain = -1, 0
        for cid, m in cands:
            gain = (m & left).bit_count()
            if gain > best_gain:
                best_id, best_gain = cid, gain
        if best_gain == 0:
            raise CoverError("universe not coverable by candidates")
        chosen.append(best_id)
        for cid, m in cands:
            if cid == best_id:
                left &= ~m
                break
    return chosen


def _prune_dominated(cands: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Drop candidates whose mask is contained in another's (ids ascending,
    so equal masks keep the lowest id).  Sound for the size phase only."""
    out: list[tuple[int, int]] = []
    for i, (cid, m) in enumerate(cands):
        dominated = False
        for j, (oid, om) in enumerate(cands):
            if i == j:
                continue
            if m & ~om:
                continue
            if m != om or oid < cid:
                dominated = True
                break
        if not dominated:
            out.append((cid, m))
    return out


def _branch_candidates(
    left: int, cands: list[tuple[int, int]]
) -> list[tuple[int, int]]:
    """Candidates covering the uncovered element with fewest options."""
    best: list[tuple[int, int]] | None = None
    mm = left
    while mm:
        low = mm & -mm
        mm ^= low
        covering = [(cid, m) for cid, m in cands if m & low]
        if best is None or len(covering) < len(best):
            best = covering
            if len(best) <= 1:
                break
    assert best is not None
    return best


def _find_cover(
    left: int, cands: list[tuple[int, int]], k: int, state: _State
) -> bool:
    if left == 0:
        return True
    if k == 0:
        return False
    state.tick()
    maxgain = 0
    for _, m in cands:
        g = (m & left).bit_count()
        if g > maxgain:
            maxgain = g
    if left.bit_count() > k * maxgain:
        return False
    branch = _branch_candidates(left, cands)
    branch.sort(key=lambda cm: (-(cm[1] & left).bit_count(), cm[0]))
    for _, m in branch:
        if _find_cover(left & ~m, cands, k - 1, state):
            return True
    return False


def _optimize_at(
    universe: int,
    cands: list[tuple[int, int]],
    k: int,
    prefer: frozenset[int],
    state: _State,
) -> tuple[int, ...]:
    """Canonical cover of (known-minimal) size k: maximum |S & prefer|,
    then lexicographically smallest sorted tuple.  Only strictly worse
    branches are pruned, so the canonical optimum is never lost."""
    best: tuple[int, tuple[int, ...]] | None = None

    def rec(left: int, picked: tuple[int, ...], overlap: int) -> None:
        nonlocal best
        if left == 0:
            key = tuple(sorted(picked))
            if best is None or overlap > best[0] or (overlap == best[0] and key < best[1]):
                best = (overlap, key)
            return
        rem = k - len(picked)
        if rem == 0:
            return
        state.tick()
        if best is not None and overlap + rem < best[0]:
            return
        maxgain = 0
        for _, m in cands:
            g = (m & left).bit_count()
            if g > maxgain:
                maxgain = g
        if left.bit_count() > rem * maxgain:
            return
        branch = _branch_candidates(left, cands)
        branch.sort(key=lambda cm: (cm[0] not in prefer, cm[0]))
        for cid, m in branch:
            rec(left & ~m, picked + (cid,), overlap + (cid in prefer))

    rec(universe, (), 0)
    assert best is not None, "size phase promised a cover of this size"
    return best[1]


def minimum_cover(
    universe: int,
    candidates: Mapping[int, int],
    prefer: frozenset[int] = frozenset(),
    budget: SearchBudget | None = None,
) -> CoverResult:
    """Exact minimum cover of `universe` (a bitmask) by candidate bitmasks.

    Raises CoverError when the union of candidates misses part of the
    universe.  On node-budget exhaustion returns the greedy cover with
    ``exact=False``.
    """
    limit = (budget or DEFAULT_BUDGET).max_nodes
    if universe == 0:
        return CoverResult((), SolveMode.EXACT, 0)
    cands = sorted((cid, m & universe) for cid, m in candidates.items())
    cands = [(cid, m) for cid, m in cands if m]
    greedy = _greedy_cover(universe, cands)  # also proves coverability
    state = _State(limit)
    try:
        reduced = _prune_dominated(cands)
        kstar = len(greedy)
        for k in range(1, len(greedy)):
            if _find_cover(universe, reduced, k, state):
                kstar = k
                break
        chosen = _optimize_at(universe, cands, kstar, prefer, state)
        return CoverResult(chosen, SolveMode.EXACT, state.nodes)
    except _BudgetExceeded:
        logger.warning(
            "cover budget (%d nodes) exhausted; falling back to greedy size %d",
            limit,
            len(greedy),
        )
        return CoverResult(tuple(sorted(greedy)), SolveMode.HEURISTIC, state.nodes)


def one_hop_cover_masks(space: Space) -> list[list[int]]:
    """masks[u][v] = bitmask of targets t with d(v, t) < d(u, t).

    Pure geometry — no network involved — and cached on the space.  Bit v is
    always set (v covers itself for any u != v) and bit u never is.
    """
    cached = space._cover_cache
    if cached is not None:
        return cached
    rank = distance_rank_table(space)
    n = space.n
    masks = [[0] * n for _ in range(n)]
    for t in range(n):
        rt = rank[t]
        bit = 1 << t
        for u in range(n):
            ru = rt[u]
            row = masks[u]
            for v in range(n):
                if rt[v] < ru:
                    row[v] |= bit
    space._cover_cache = masks
    return masks


def is_greedy_routing_set(space: Space, agent: int, members: frozenset[int]) -> bool:
    """Does every target have some member strictly closer to it than agent?"""
    if agent in members:
        raise CoverError("agent cannot appear in its own routing set")
    geo = one_hop_cover_masks(space)
    covered = 1 << agent
    for v in members:
        covered |= geo[agent][v]
    return covered == (1 << space.n) - 1


@dataclass(frozen=True)
class GreedyRoutingSet:
    agent: int
    members: frozenset[int]
    nng_overlap: int
    mode: SolveMode

    @property
    def exact(self) -> bool:
        return self.mode is SolveMode.EXACT

    @property
    def size(self) -> int:
        return len(self.members)


def minimum_greedy_routing_set(
    space: Space,
    agent: int,
    budget: SearchBudget | None = None,
    nng: NngGraph | None = None,
) -> GreedyRoutingSet:
    """Smallest set of first hops giving `agent` a strictly closer neighbour
    toward every target.  When all agents play such covers the network is
    navigable, so this is both the directed agent's optimum and the building
    block of the directed social optimum.

    Canonical among the minima: maximum overlap with the agent's
    nearest-neighbour-graph neighbours (that overlap is the set's
    `nng_overlap`), ties by lexicographically smallest endpoint tuple.
    """
    geo = one_hop_cover_masks(space)
    n = space.n
    nbrs = (nng or build_nng(space)).neighbors(agent) if n >= 2 else frozenset()
    universe = ((1 << n) - 1) ^ (1 << agent)
    cands = {v: geo[agent][v] for v in range(n) if v != agent}
    res = minimum_cover(universe, cands, prefer=nbrs, budget=budget)
    members = frozenset(res.chosen)
    return GreedyRoutingSet(agent, members, len(members & nbrs), res.mode)


def routing_degree(space: Space, agent: int, budget: SearchBudget | None = None) -> int:
    rs = minimum_greedy_routing_set(space, agent, budget)
    if not rs.exact:
        raise CoverError(f"routing degree of agent {agent}: search budget exhausted")
    return rs.size


def residual_routing_degree(
    space: Space,
    agent: int,
    budget: SearchBudget | None = None,
    nng: NngGraph | None = None,
) -> int:
    """Minimum one-hop cover size after discounting every target for which
    some nearest-neighbour-graph neighbour of the agent is strictly closer.

    Those discounted targets cost the agent nothing extra in any navigable
    network: the NNG edges are present anyway, and a strictly closer
    reachable neighbour is a valid first hop.  Summing over agents (each
    non-NNG edge serves at most its two endpoints) gives the social-optimum
    lower bound used by the analysis module.
    """
    geo = one_hop_cover_masks(space)
    n = space.n
    covered = 1 << agent
    for v in (nng or build_nng(space)).neighbors(agent):
        covered |= geo[agent][v]
    universe = ((1 << n) - 1) & ~covered
    if universe == 0:
        return 0
    cands = {v: geo[agent][v] for v in range(n) if v != agent}
    res = minimum_cover(universe, cands, budget=budget)
    if not res.exact:
        raise CoverError(
            f"residual routing degree of agent {agent}: search budget exhausted"
        )
    return res.size


@dataclass(frozen=True)
class BestResponseResult:
    agent: int
    strategy: frozenset[int]
    cost: int
    current_cost: float
    mode: SolveMode

    @property
    def exact(self) -> bool:
        return self.mode is SolveMode.EXACT

    @property
    def improves(self) -> bool:
        return self.cost < self.current_cost


def best_response(
    space: Space,
    profile: StrategyProfile,
    agent: int,
    budget: SearchBudget | None = None,
) -> BestResponseResult:
    """Exact cheapest strategy for one agent, everyone else fixed.

    First hops must be strictly closer to the target *and* able to reach it
    on their own: any onward path visits only nodes strictly closer still,
    so nothing the agent buys (or is) can matter past the first hop, and
    reachability in the network-without-the-agent's-purchases is the right
    filter.  That turns the best response into one exact set cover.  In the
    undirected variant, edges other agents bought at this agent are free
    first hops; targets they already cover leave the universe, and re-buying
    such an edge is never useful (its residual cover is empty).
    """
    n = profile.n
    others = induce_network(profile.replace(agent, ()))
    masks = reach_masks(others, space)
    geo = one_hop_cover_masks(space)

    def reach_filtered(v: int) -> int:
        out = 0
        mm = geo[agent][v]
        while mm:
            low = mm & -mm
            mm ^= low
            w = low.bit_length() - 1
            if (masks[w] >> v) & 1:
                out |= low
        return out

    universe = ((1 << n) - 1) ^ (1 << agent)
    if profile.variant is Variant.UNDIRECTED:
        for v in others.moves()[agent]:
            universe &= ~reach_filtered(v)
    cands = {v: reach_filtered(v) for v in range(n) if v != agent}
    res = minimum_cover(universe, cands, budget=budget)

    cur_net = induce_network(profile)
    cur_masks = reach_masks(cur_net, space)
    if all((cur_masks[t] >> agent) & 1 for t in range(n)):
        current: float = len(profile.strategies[agent])
    else:
        current = math.inf
    return BestResponseResult(
        agent=agent,
        strategy=frozenset(res.chosen),
        cost=res.size,
        current_cost=current,
        mode=res.mode,
    )
