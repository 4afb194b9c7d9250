"""Greedy-routing networks: strategy profiles, induced graphs, reachability.

A greedy path toward a target t is a node sequence in which every hop gets
strictly closer to t (exact comparisons, so equal-distance hops are not
usable).  Because distances strictly decrease along such a path, per-target
reachability is computable in one ascending-distance sweep and no cycle
handling is ever needed — that single fact drives the design of this whole
module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .metric import Space, distance_rank_table


class Variant(str, Enum):
    DIRECTED = "directed"
    UNDIRECTED = "undirected"


class GameError(Exception):
    """Invalid profile or network structure."""


def undirected_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class DuplicateEdgeEvent:
    """Both endpoints bought the same undirected edge; the higher-indexed
    buyer's copy is the one dropped during canonicalisation."""

    edge: tuple[int, int]
    kept_owner: int
    dropped_owner: int


def _check_strategies(
    variant: Variant, strategies: Sequence[frozenset[int]]
) -> tuple[frozenset[int], ...]:
    n = len(strategies)
    out = []
    for u, s in enumerate(strategies):
        fs = frozenset(s)
        for v in fs:
            if not isinstance(v, int) or isinstance(v, bool):
                raise GameError(f"agent {u}: endpoint {v!r} is not an int")
            if v < 0 or v >= n:
                raise GameError(f"agent {u}: endpoint {v} out of range 0..{n-1}")
            if v == u:
                raise GameError(f"agent {u}: self-loop not allowed")
        out.append(fs)
    return tuple(out)


@dataclass(frozen=True)
class StrategyProfile:
    """One strategy set per agent.

    Directed variant: agent u buying v creates arc u -> v, traversable only
    by u-side routing (i.e. edges point the way they may be walked).
    Undirected variant: buying v creates edge {u, v}, walkable both ways;
    the buyer still pays for it alone.  Costs always use the *raw* strategy
    sizes, so two agents buying the same undirected edge both pay.
    """

    variant: Variant
    strategies: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "strategies", _check_strategies(self.variant, self.strategies)
        )

    @property
    def n(self) -> int:
        return len(self.strategies)

    def replace(self, agent: int, strategy: Iterable[int]) -> "StrategyProfile":
        new = list(self.strategies)
        new[agent] = frozenset(strategy)
        return StrategyProfile(self.variant, tuple(new))

    def canonicalized(self) -> tuple["StrategyProfile", tuple[DuplicateEdgeEvent, ...]]:
        """Drop the higher-indexed buyer's copy of any doubly-bought
        undirected edge.  Directed profiles are always canonical."""
        if self.variant is Variant.DIRECTED:
            return self, ()
        events: list[DuplicateEdgeEvent] = []
        new = [set(s) for s in self.strategies]
        for u in range(self.n):
            for v in sorted(self.strategies[u]):
                if v > u and u in self.strategies[v]:
                    new[v].discard(u)
                    events.append(
                        DuplicateEdgeEvent(edge=(u, v), kept_owner=u, dropped_owner=v)
                    )
        prof = StrategyProfile(self.variant, tuple(frozenset(s) for s in new))
        return prof, tuple(events)


class Network:
    """An edge set over n agents, optionally with per-edge ownership.

    Directed edges are ordered pairs (tail, head) walkable tail -> head.
    Undirected edges are stored as (min, max) and walkable both ways.
    `ownership` maps edge -> paying agent where known; networks built from
    bare edge sets (e.g. mid-construction) leave it None.
    """

    __slots__ = ("variant", "n", "edges", "ownership", "duplicate_events", "_adj")

    def __init__(
        self,
        variant: Variant,
        n: int,
        edges: Iterable[tuple[int, int]],
        ownership: Mapping[tuple[int, int], int] | None = None,
        duplicate_events: tuple[DuplicateEdgeEvent, ...] = (),
    ):
        self.variant = Variant(variant)
        self.n = n
        canon = set()
        for e in edges:
            u, v = e
            if u == v:
                raise GameError(f"self-loop {e} not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise GameError(f"edge {e} out of range for n={n}")
            canon.add((u, v) if self.variant is Variant.DIRECTED else undirected_edge(u, v))
        self.edges = frozenset(canon)
        if ownership is not None:
            own = {}
            for e, owner in ownership.items():
                key = e if self.variant is Variant.DIRECTED else undirected_edge(*e)
                if key not in self.edges:
                    raise GameError(f"ownership for absent edge {e}")
                if self.variant is Variant.DIRECTED and owner != e[0]:
                    raise GameError(f"directed edge {e} must be owned by its tail")
                if owner not in key:
                    raise GameError(f"edge {e} owned by non-endpoint {owner}")
                own[key] = owner
            if set(own) != self.edges:
                missing = sorted(self.edges - set(own))
                raise GameError(f"ownership missing for edges {missing[:3]}...")
            ownership = own
        self.ownership = ownership
        self.duplicate_events = duplicate_events
        self._adj: list[list[int]] | None = None

    def moves(self) -> list[list[int]]:
        """moves()[v] = sorted neighbours walkable from v."""
        if self._adj is None:
            adj: list[list[int]] = [[] for _ in range(self.n)]
            for u, v in self.edges:
                adj[u].append(v)
                if self.variant is Variant.UNDIRECTED:
                    adj[v].append(u)
            for row in adj:
                row.sort()
            self._adj = adj
        return self._adj

    def edge_count(self) -> int:
        return len(self.edges)

    def replace_edges(self, edges: Iterable[tuple[int, int]]) -> "Network":
        return Network(self.variant, self.n, edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.variant == other.variant
            and self.n == other.n
            and self.edges == other.edges
            and self.ownership == other.ownership
        )

    def __hash__(self) -> int:
        return hash((self.variant, self.n, self.edges))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Network({self.variant.value}, n={self.n}, m={len(self.edges)})"


def induce_network(profile: StrategyProfile) -> Network:
    """Build the played network.  Undirected double-buys collapse to one
    edge owned by the lower-indexed buyer (the duplicate is recorded)."""
    if profile.variant is Variant.DIRECTED:
        edges = {}
        for u, s in enumerate(profile.strategies):
            for v in s:
                edges[(u, v)] = u
        return Network(Variant.DIRECTED, profile.n, edges.keys(), edges)
    canon, events = profile.canonicalized()
    edges = {}
    for u, s in enumerate(canon.strategies):
        for v in s:
            edges[undirected_edge(u, v)] = u
    return Network(
        Variant.UNDIRECTED, profile.n, edges.keys(), edges, duplicate_events=events
    )


def reach_masks(network: Network, space: Space) -> list[int]:
    """reach_masks(...)[t] = bitmask of vertices with a greedy path to t.

    Single ascending-rank sweep per target: when v is processed, every
    vertex strictly closer to t is already settled, and equal-rank vertices
    can never serve each other, so one pass suffices.  Bit t is always set
    (empty path).
    """
    if network.n != space.n:
        raise GameError(f"network has {network.n} agents but space has {space.n} points")
    rank = distance_rank_table(space)
    adj = network.moves()
    n = network.n
    masks: list[int] = []
    for t in range(n):
        rt = rank[t]
        order = sorted(range(n), key=lambda v: (rt[v], v))
        reach = 1 << t
        for v in order:
            if v == t:
                continue
            rv = rt[v]
            for w in adj[v]:
                if rt[w] < rv and (reach >> w) & 1:
                    reach |= 1 << v
                    break
        masks.append(reach)
    return masks


def greedy_reachable_to(network: Network, space: Space, t: int) -> set[int]:
    """Vertices (other than t itself) that can greedily route to t."""
    mask = reach_masks(network, space)[t]
    return {v for v in range(network.n) if v != t and (mask >> v) & 1}


def is_greedy_connected(network: Network, space: Space) -> bool:
    """Every vertex reaches every target: computed from the full DP."""
    full = (1 << network.n) - 1
    return all(m == full for m in reach_masks(network, space))


def is_navigable(network: Network, space: Space) -> bool:
    """Same predicate as `is_greedy_connected`, via the one-hop criterion:
    the network is navigable iff every vertex has, for every other target,
    some neighbour strictly closer to that target.  (Sufficiency follows by
    induction on distance; necessity because a greedy path needs a first
    hop.)  This skips the DP and is the hot-path check.
    """
    rank = distance_rank_table(space)
    adj = network.moves()
    n = network.n
    for u in range(n):
        covered = 1 << u
        ru_rows = [rank[t][u] for t in range(n)]
        for w in adj[u]:
            for t in range(n):
                if rank[t][w] < ru_rows[t]:
                    covered |= 1 << t
        if covered != (1 << n) - 1:
            return False
    return True


def usable_hops(
    network: Network,
    space: Space,
    u: int,
    t: int,
    reach_mask: int | None = None,
) -> list[int]:
    """Neighbours of u strictly closer to t; optionally restricted to those
    that themselves reach t (pass the t-mask from `reach_masks`)."""
    rank = distance_rank_table(space)
    rt = rank[t]
    out = [w for w in network.moves()[u] if rt[w] < rt[u]]
    if reach_mask is not None:
        out = [w for w in out if (reach_mask >> w) & 1]
    return out


@dataclass(frozen=True)
class GreedyPath:
    target: int
    nodes: tuple[int, ...]

    @property
    def hops(self) -> int:
        return len(self.nodes) - 1


def extract_greedy_path(
    network: Network, space: Space, s: int, t: int
) -> GreedyPath | None:
    """A concrete witness path from s to t, or None.

    Deterministic: each step takes the reaching usable hop of minimum
    (rank, index).  Ranks strictly decrease, so this terminates at t.
    """
    if s == t:
        return GreedyPath(target=t, nodes=(t,))
    mask = reach_masks(network, space)[t]
    if not (mask >> s) & 1:
        return None
    rank = distance_rank_table(space)
    rt = rank[t]
    nodes = [s]
    v = s
    while v != t:
        options = usable_hops(network, space, v, t, reach_mask=mask)
        v = min(options, key=lambda w: (rt[w], w))
        nodes.append(v)
    return GreedyPath(target=t, nodes=tuple(nodes))


@dataclass(frozen=True)
class CostReport:
    per_agent: tuple[float, ...]
    social: float

    @property
    def all_finite(self) -> bool:
        return math.isfinite(self.social)


def agent_cost(profile: StrategyProfile, space: Space, agent: int) -> float:
    """|S_u| if u greedily reaches every other agent in the induced network,
    else inf.  Raw strategy size: duplicate undirected buys still cost."""
    net = induce_network(profile)
    masks = reach_masks(net, space)
    if all((masks[t] >> agent) & 1 for t in range(profile.n)):
        return len(profile.strategies[agent])
    return math.inf


def cost_report(profile: StrategyProfile, space: Space) -> CostReport:
    net = induce_network(profile)
    masks = reach_masks(net, space)
    per = []
    for u in range(profile.n):
        if all((masks[t] >> u) & 1 for t in range(profile.n)):
            per.append(float(len(profile.strategies[u])))
        else:
            per.append(math.inf)
    return CostReport(per_agent=tuple(per), social=sum(per))


def social_cost(profile: StrategyProfile, space: Space) -> float:
    return cost_report(profile, space).social
