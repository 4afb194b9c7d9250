"""Undirected variant: edge criticality, degree-bounded orientation, and
the approximate-equilibrium construction pipeline.

The workhorse fact, used throughout: in a navigable network, a vertex
strictly closer to some target than agent u can never route through u
(greedy hops only ever get closer), so deleting u-incident edges cannot
change whether such a vertex reaches that target.  Criticality tests and
critical best responses therefore reduce to one-hop geometry as long as
the ambient network stays navigable, which the pipeline maintains as an
asserted invariant.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence, Union

from .covers import (
    SearchBudget,
    SolveMode,
    minimum_cover,
    minimum_greedy_routing_set,
    one_hop_cover_masks,
)
from .geometry import (
    DegenerateInputError,
    build_nng,
    delaunay_2d,
    kissing_number,
)
from .metric import EuclideanSpace, Space, distance_rank_table
from .network import (
    GameError,
    Network,
    Variant,
    is_navigable,
    reach_masks,
    undirected_edge,
)

Edge = tuple[int, int]


class AlgorithmError(GameError):
    """An internal invariant of the construction pipeline failed.

    Carries the trace accumulated so far, so the failing run can be
    replayed and inspected.
    """

    def __init__(self, message: str, trace: "AlgorithmTrace | None" = None):
        super().__init__(message)
        self.trace = trace


# ---------------------------------------------------------------------------
# criticality


def _critical_rank_only(
    n: int, rank: Sequence[Sequence[int]], adj: Mapping[int, set[int]], u: int
) -> frozenset[Edge] | None:
    """Critical incident edges of u assuming the whole network is navigable
    (then "v reaches t" holds for every usable first hop and the test is
    pure geometry).  Returns None when u lacks a strictly closer neighbour
    for some target, i.e. the navigability assumption already failed at u.
    """
    crit: set[Edge] = set()
    for t in range(n):
        if t == u:
            continue
        rt = rank[t]
        ru = rt[u]
        first = -1
        cnt = 0
        for v in adj[u]:
            if rt[v] < ru:
                cnt += 1
                if cnt > 1:
                    break
                first = v
        if cnt == 0:
            return None
        if cnt == 1:
            crit.add(undirected_edge(u, first))
    return frozenset(crit)


def critical_incident_set(
    network: Network,
    space: Space,
    u: int,
    masks: list[int] | None = None,
) -> frozenset[Edge]:
    """Incident edges whose individual removal breaks u's greedy
    connectivity (equivalently: all of them — the set is the maximal one).

    An edge {u,v} is critical for u exactly when some target t has v as
    u's only usable first hop: other usable hops are strictly closer to t
    than u, so their onward paths never touch u or its edges and survive
    the removal untouched.  Works on any network where u itself is greedy
    connected; `masks` lets callers share one reach table.
    """
    if network.variant is not Variant.UNDIRECTED:
        raise GameError("criticality is defined for undirected networks")
    if masks is None:
        masks = reach_masks(network, space)
    rank = distance_rank_table(space)
    neighbors = network.moves()[u]
    crit: set[Edge] = set()
    for t in range(space.n):
        if t == u:
            continue
        rt = rank[t]
        ru = rt[u]
        hops = [v for v in neighbors if rt[v] < ru and (masks[t] >> v) & 1]
        if not hops:
            raise GameError(f"agent {u} is not greedy connected (no hop toward {t})")
        if len(hops) == 1:
            crit.add(undirected_edge(u, hops[0]))
    return frozenset(crit)


class EdgeTag(str, Enum):
    SINGLE = "single"
    DOUBLE = "double"
    SLACK = "slack"


@dataclass(frozen=True)
class EdgeClassification:
    """Per-edge record of which endpoints the edge is critical for."""

    by_edge: Mapping[Edge, tuple[int, ...]]

    def tag(self, edge: Edge) -> EdgeTag:
        owners = self.by_edge[undirected_edge(*edge)]
        if len(owners) == 0:
            return EdgeTag.SLACK
        if len(owners) == 1:
            return EdgeTag.SINGLE
        return EdgeTag.DOUBLE

    def single_for(self, edge: Edge) -> int | None:
        owners = self.by_edge[undirected_edge(*edge)]
        return owners[0] if len(owners) == 1 else None

    def singles_of(self, agent: int) -> frozenset[Edge]:
        return frozenset(
            e for e, owners in self.by_edge.items() if owners == (agent,)
        )

    @property
    def slack_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(e for e, owners in self.by_edge.items() if not owners))


def _classification_from_critical(
    edges: Iterable[Edge], critical: Mapping[int, frozenset[Edge]]
) -> EdgeClassification:
    by_edge: dict[Edge, tuple[int, ...]] = {e: () for e in edges}
    for u in sorted(critical):
        for e in critical[u]:
            by_edge[e] = by_edge[e] + (u,)
    return EdgeClassification(by_edge)


def classify_edges(network: Network, space: Space) -> EdgeClassification:
    """Tag every edge single/double/slack by endpoint criticality.

    Requires every agent to be greedy connected (criticality is undefined
    for a disconnected agent); raises GameError otherwise.
    """
    masks = reach_masks(network, space)
    critical = {
        u: critical_incident_set(network, space, u, masks=masks)
        for u in range(space.n)
    }
    return _classification_from_critical(network.edges, critical)


# ---------------------------------------------------------------------------
# redundant-edge filtering


def _filter_edge_set(
    space: Space, edges: frozenset[Edge]
) -> tuple[frozenset[Edge], int]:
    """Iteratively remove removable edges, longest first.

    In a navigable network an edge is removable alone iff it is critical
    for neither endpoint: removal only shrinks the endpoints' own
    neighbourhoods, and one-hop coverage of everyone else is untouched.
    After each removal only the two endpoints' criticality can change, so
    the restart is two local recomputations, not a full rescan.
    """
    n = space.n
    rank = distance_rank_table(space)
    adj: dict[int, set[int]] = {u: set() for u in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    critical: dict[int, frozenset[Edge]] = {}
    for u in range(n):
        crit = _critical_rank_only(n, rank, adj, u)
        if crit is None:
            raise GameError(f"agent {u} cannot reach every target; nothing to filter")
        critical[u] = crit
    current = set(edges)
    removed = 0
    while True:
        needed = set().union(*critical.values())
        slack = [e for e in current if e not in needed]
        if not slack:
            return frozenset(current), removed
        a, b = min(slack, key=lambda e: (-space.dist_key(e[0], e[1]), e))
        current.remove((a, b))
        adj[a].discard(b)
        adj[b].discard(a)
        removed += 1
        for x in (a, b):
            crit = _critical_rank_only(n, rank, adj, x)
            if crit is None:  # a slack edge is safe to drop by definition
                raise AlgorithmError("slack removal broke navigability")
            critical[x] = crit


def filter_redundant_edges(network: Network, space: Space) -> Network:
    """Drop edges whose individual removal keeps the network navigable,
    scanning in decreasing exact length (ties by endpoint indices) and
    restarting after each removal, until a full pass removes nothing.
    Surviving edges keep their owners when ownership was present.
    """
    if network.variant is not Variant.UNDIRECTED:
        raise GameError("filtering applies to undirected networks")
    kept, _ = _filter_edge_set(space, network.edges)
    ownership = (
        {e: network.ownership[e] for e in kept}
        if network.ownership is not None
        else None
    )
    return Network(Variant.UNDIRECTED, network.n, kept, ownership)


# ---------------------------------------------------------------------------
# critical best response


@dataclass(frozen=True)
class CriticalBestResponse:
    """Best response of one agent in the network with its critical edges
    removed, tie-broken to re-buy as many of them as possible."""

    agent: int
    critical_edges: frozenset[Edge]  # the removed set
    strategy: frozenset[int]  # chosen endpoints
    rebought: frozenset[Edge]  # strategy edges that are critical edges
    added: frozenset[Edge]  # strategy edges that are genuinely new
    mode: SolveMode

    @property
    def alpha(self) -> int:
        return len(self.added)

    @property
    def exact(self) -> bool:
        return self.mode is SolveMode.EXACT


def critical_best_response(
    network: Network,
    space: Space,
    u: int,
    budget: SearchBudget | None = None,
    critical: frozenset[Edge] | None = None,
    assume_navigable: bool = False,
) -> CriticalBestResponse:
    """Cheapest strategy for u in the network minus u's critical edges,
    everything else (including u's non-critical incident edges) free.

    Among minimum strategies, maximize the number of re-bought critical
    edges, then take the lexicographically smallest endpoint set.  With
    `assume_navigable` the reach filter is skipped: every usable first hop
    is strictly closer to its target than u and keeps its full reach when
    u-incident edges disappear.
    """
    if network.variant is not Variant.UNDIRECTED:
        raise GameError("critical best response is defined for undirected networks")
    n = space.n
    if critical is None:
        critical = critical_incident_set(network, space, u)
    stripped = Network(Variant.UNDIRECTED, n, network.edges - critical)
    free = stripped.moves()[u]
    geo = one_hop_cover_masks(space)

    if assume_navigable:
        cover = {v: geo[u][v] for v in range(n) if v != u}
    else:
        masks = reach_masks(stripped, space)

        def reach_filtered(v: int) -> int:
            out = 0
            mm = geo[u][v]
            while mm:
                low = mm & -mm
                mm ^= low
                w = low.bit_length() - 1
                if (masks[w] >> v) & 1:
                    out |= low
            return out

        cover = {v: reach_filtered(v) for v in range(n) if v != u}

    universe = ((1 << n) - 1) ^ (1 << u)
    for v in free:
        universe &= ~cover[v]
    prefer = frozenset(a if b == u else b for a, b in critical)
    res = minimum_cover(universe, cover, prefer=prefer, budget=budget)
    strategy = frozenset(res.chosen)
    chosen_edges = {undirected_edge(u, v) for v in strategy}
    rebought = frozenset(e for e in chosen_edges if e in critical)
    return CriticalBestResponse(
        agent=u,
        critical_edges=critical,
        strategy=strategy,
        rebought=rebought,
        added=frozenset(chosen_edges - rebought),
        mode=res.mode,
    )


@dataclass(frozen=True)
class AgentCriticalReport:
    agent: int
    critical_edges: frozenset[Edge]
    strategy: frozenset[int]
    rebought: frozenset[Edge]
    added: frozenset[Edge]
    unmatched_singles: frozenset[Edge]  # critical only for this agent, not re-bought
    mode: SolveMode

    @property
    def alpha(self) -> int:
        return len(self.added)


@dataclass(frozen=True)
class CriticalAnalysis:
    agents: tuple[AgentCriticalReport, ...]
    classification: EdgeClassification
    certified: bool


def critical_analysis(
    network: Network,
    space: Space,
    budget: SearchBudget | None = None,
    assume_navigable: bool = False,
) -> CriticalAnalysis:
    """Per-agent criticality report for one network snapshot: critical
    edges, critical best response, its fresh-edge count, and the agent's
    single-edges it declined to re-buy."""
    n = space.n
    if assume_navigable:
        rank = distance_rank_table(space)
        adj = {u: set(network.moves()[u]) for u in range(n)}
        critical = {}
        for u in range(n):
            crit = _critical_rank_only(n, rank, adj, u)
            if crit is None:
                raise GameError(f"agent {u} is not greedy connected")
            critical[u] = crit
    else:
        masks = reach_masks(network, space)
        critical = {
            u: critical_incident_set(network, space, u, masks=masks)
            for u in range(n)
        }
    classification = _classification_from_critical(network.edges, critical)
    agents = []
    certified = True
    for u in range(n):
        cbr = critical_best_response(
            network,
            space,
            u,
            budget=budget,
            critical=critical[u],
            assume_navigable=assume_navigable,
        )
        certified = certified and cbr.exact
        agents.append(
            AgentCriticalReport(
                agent=u,
                critical_edges=cbr.critical_edges,
                strategy=cbr.strategy,
                rebought=cbr.rebought,
                added=cbr.added,
                unmatched_singles=classification.singles_of(u) - cbr.rebought,
                mode=cbr.mode,
            )
        )
    return CriticalAnalysis(tuple(agents), classification, certified)


# ---------------------------------------------------------------------------
# degree-bounded orientation (max-flow)


@dataclass(frozen=True)
class Orientation:
    """An owner per edge with every owner's load within its bound."""

    edges: tuple[Edge, ...]
    owners: tuple[int, ...]
    in_degrees: tuple[int, ...]

    def owner_map(self) -> dict[Edge, int]:
        return dict(zip(self.edges, self.owners))


@dataclass(frozen=True)
class Infeasible:
    max_flow: int
    required: int
    bounds: tuple[int, ...]


def _dinic(graph: list[list[list[int]]], s: int, t: int) -> int:
    flow = 0
    size = len(graph)
    while True:
        level = [-1] * size
        level[s] = 0
        dq = deque([s])
        while dq:
            v = dq.popleft()
            for arc in graph[v]:
                if arc[1] > 0 and level[arc[0]] < 0:
                    level[arc[0]] = level[v] + 1
                    dq.append(arc[0])
        if level[t] < 0:
            return flow
        it = [0] * size

        def dfs(v: int, pushed: int) -> int:
            if v == t:
                return pushed
            while it[v] < len(graph[v]):
                arc = graph[v][it[v]]
                if arc[1] > 0 and level[arc[0]] == level[v] + 1:
                    d = dfs(arc[0], min(pushed, arc[1]))
                    if d > 0:
                        arc[1] -= d
                        graph[arc[0]][arc[2]][1] += d
                        return d
                it[v] += 1
            return 0

        while True:
            pushed = dfs(s, 1 << 60)
            if pushed == 0:
                break
            flow += pushed


def hakimi_orient(
    edges: Iterable[Edge], bounds: Sequence[int]
) -> Union[Orientation, Infeasible]:
    """Assign each undirected edge to one endpoint with per-agent loads
    capped by `bounds`, via max-flow on the standard network: source ->
    edge node (cap 1) -> each endpoint (cap 1) -> sink (cap bound).
    Feasible exactly when the flow saturates all edge nodes; then each
    edge node's single saturated outgoing arc names the owner.
    """
    n = len(bounds)
    canon = sorted({undirected_edge(a, b) for a, b in edges})
    for a, b in canon:
        if not (0 <= a < n and 0 <= b < n):
            raise GameError(f"edge ({a},{b}) out of range for {n} agents")
    for u, cap in enumerate(bounds):
        if not isinstance(cap, int) or isinstance(cap, bool) or cap < 0:
            raise GameError(f"bound for agent {u} must be a non-negative int")
    m = len(canon)
    if m == 0:
        return Orientation((), (), tuple(0 for _ in range(n)))

    # node layout: 0 source | 1..m edge nodes | m+1..m+n agents | m+n+1 sink
    source, sink = 0, m + n + 1
    graph: list[list[list[int]]] = [[] for _ in range(m + n + 2)]

    def add_arc(a: int, b: int, cap: int) -> None:
        graph[a].append([b, cap, len(graph[b])])
        graph[b].append([a, 0, len(graph[a]) - 1])

    for i, (a, b) in enumerate(canon):
        add_arc(source, 1 + i, 1)
        add_arc(1 + i, m + 1 + a, 1)
        add_arc(1 + i, m + 1 + b, 1)
    for u in range(n):
        add_arc(m + 1 + u, sink, bounds[u])

    flow = _dinic(graph, source, sink)
    if flow < m:
        return Infeasible(max_flow=flow, required=m, bounds=tuple(bounds))
    owners = []
    for i, (a, b) in enumerate(canon):
        # arcs 1 and 2 of an edge node lead to its endpoints; the used one
        # has no residual capacity left
        to_a = graph[1 + i][1]
        owners.append(a if to_a[1] == 0 else b)
    degrees = Counter(owners)
    return Orientation(
        edges=tuple(canon),
        owners=tuple(owners),
        in_degrees=tuple(degrees.get(u, 0) for u in range(n)),
    )


# ---------------------------------------------------------------------------
# the construction pipeline


class AlgorithmMode(str, Enum):
    GENERAL = "general"
    EUCLIDEAN = "euclidean"
    PLANAR_2D = "planar-2d"


@dataclass(frozen=True)
class AlgorithmTrace:
    mode: str
    delta_rule: str
    records: tuple[Mapping[str, object], ...]
    iterations: int
    certified: bool

    def iteration_records(self) -> tuple[Mapping[str, object], ...]:
        return tuple(r for r in self.records if r.get("event") == "iteration")


def _effective_bound_degree(space: Space, phis: Sequence[int]) -> int:
    """Per-agent degree bound that caps loop work: the dimension's kissing
    number when one is known, otherwise the largest observed routing degree
    (a valid per-instance stand-in: no minimum strategy is bigger)."""
    if isinstance(space, EuclideanSpace):
        k = kissing_number(space.dimension)
        if k is not None:
            return k
    return max(2, max(phis, default=2))


def default_mode(space: Space) -> AlgorithmMode:
    if isinstance(space, EuclideanSpace):
        return (
            AlgorithmMode.PLANAR_2D
            if space.dimension == 2
            else AlgorithmMode.EUCLIDEAN
        )
    return AlgorithmMode.GENERAL


def compute_approximate_ne(
    space: Space,
    mode: AlgorithmMode | str | None = None,
    budget: SearchBudget | None = None,
) -> tuple[Network, AlgorithmTrace]:
    """Build an approximately stable undirected network with ownership.

    Start from the union of everyone's canonical minimum routing sets,
    filter removable edges (in 2D mode, swap in the Delaunay edge set when
    it is smaller, re-filtering), then loop: any agent whose critical best
    response buys fewer fresh edges than it has unclaimed single-edges gets
    those singles swapped for the fresh edges; otherwise try to orient the
    unassigned edges within per-agent budgets.  A feasible orientation
    fixes ownership and ends the run; an infeasible one shrinks the edge
    set to everyone's re-buys, fresh edges, and singles, and the loop
    restarts.  Every iteration strictly decreases the edge count or
    terminates, and every intermediate edge set is navigable — both are
    asserted, with the trace attached to any violation.
    """
    n = space.n
    if n < 2:
        raise GameError("need at least two agents")
    mode = AlgorithmMode(mode) if mode is not None else default_mode(space)
    if mode is not AlgorithmMode.GENERAL and not isinstance(space, EuclideanSpace):
        raise GameError(f"mode {mode.value} needs coordinates")
    if mode is AlgorithmMode.PLANAR_2D and space.dimension != 2:
        raise GameError("planar mode needs dimension 2")

    delta_bonus = 2 if mode is AlgorithmMode.PLANAR_2D else 0
    delta_rule = "alpha(u) - |unmatched singles of u|" + (
        " + 2" if delta_bonus else ""
    )
    records: list[dict[str, object]] = []
    certified = True

    def fail(message: str) -> AlgorithmError:
        trace = AlgorithmTrace(
            mode.value, delta_rule, tuple(records), iterations, certified
        )
        return AlgorithmError(message, trace)

    iterations = 0
    nng = build_nng(space)
    sets = [
        minimum_greedy_routing_set(space, u, budget=budget, nng=nng)
        for u in range(n)
    ]
    certified = all(s.exact for s in sets)
    phis = [s.size for s in sets]
    edges = frozenset(
        undirected_edge(u, v) for u, s in enumerate(sets) for v in s.members
    )
    records.append(
        {"event": "init", "edge_count": len(edges), "routing_degrees": phis}
    )

    edges, removed = _filter_edge_set(space, edges)
    records.append({"event": "filter", "edge_count": len(edges), "removed": removed})

    if mode is AlgorithmMode.PLANAR_2D:
        try:
            dt = delaunay_2d(space)
        except DegenerateInputError as exc:
            records.append({"event": "delaunay", "skipped": str(exc)})
        else:
            if len(dt) < len(edges):
                edges, removed = _filter_edge_set(space, frozenset(dt))
                records.append(
                    {
                        "event": "delaunay",
                        "edge_count": len(edges),
                        "replaced": True,
                        "removed": removed,
                    }
                )
            else:
                records.append(
                    {"event": "delaunay", "edge_count": len(edges), "replaced": False}
                )

    bound_degree = _effective_bound_degree(space, phis)
    limit = max((bound_degree - 1) * n + 8, 16)

    while True:
        iterations += 1
        if iterations > limit:
            raise fail(f"no termination within {limit} iterations")
        entry_count = len(edges)
        edges, slack_removed = _filter_edge_set(space, edges)
        network = Network(Variant.UNDIRECTED, n, edges)
        if not is_navigable(network, space):
            raise fail(f"iteration {iterations}: edge set lost navigability")
        analysis = critical_analysis(
            network, space, budget=budget, assume_navigable=True
        )
        certified = certified and analysis.certified
        record: dict[str, object] = {
            "event": "iteration",
            "index": iterations,
            "edge_count": len(edges),
            "slack_removed": slack_removed,
            "agents": [
                [
                    len(a.critical_edges),
                    len(a.strategy),
                    a.alpha,
                    len(a.unmatched_singles),
                ]
                for a in analysis.agents
            ],
        }

        swap = next(
            (a for a in analysis.agents if len(a.added) < len(a.unmatched_singles)),
            None,
        )
        if swap is not None:
            record.update(
                {
                    "action": "replace",
                    "agent": swap.agent,
                    "dropped": len(swap.unmatched_singles),
                    "built": len(swap.added),
                }
            )
            records.append(record)
            edges = (edges - swap.unmatched_singles) | swap.added
            if len(edges) >= entry_count:
                raise fail(f"iteration {iterations}: edge count did not decrease")
            continue

        assigned: dict[Edge, int] = {}
        for a in analysis.agents:  # ascending agent order: doubles re-bought
            for e in sorted(a.rebought):  # by both go to the lower index
                assigned.setdefault(e, a.agent)
            for e in sorted(a.unmatched_singles):
                assigned[e] = a.agent  # singles belong to exactly one agent
        unassigned = sorted(edges - assigned.keys())
        bounds = [
            a.alpha - len(a.unmatched_singles) + delta_bonus
            for a in analysis.agents
        ]
        result = hakimi_orient(unassigned, bounds)

        if isinstance(result, Orientation):
            record.update(
                {
                    "action": "orient",
                    "flow_feasible": True,
                    "unassigned": len(unassigned),
                }
            )
            records.append(record)
            ownership = dict(assigned)
            ownership.update(zip(result.edges, result.owners))
            final = Network(Variant.UNDIRECTED, n, edges, ownership)
            bought = Counter(ownership.values())
            for a in analysis.agents:
                cap = len(a.rebought) + len(a.unmatched_singles) + bounds[a.agent]
                if bought.get(a.agent, 0) > cap:
                    raise fail(
                        f"agent {a.agent} owns {bought[a.agent]} edges, cap {cap}"
                    )
            if not is_navigable(final, space):
                raise fail("final network lost navigability")
            records.append(
                {
                    "event": "done",
                    "edge_count": len(edges),
                    "iterations": iterations,
                }
            )
            trace = AlgorithmTrace(
                mode.value, delta_rule, tuple(records), iterations, certified
            )
            return final, trace

        record.update(
            {
                "action": "auxiliary",
                "flow_feasible": False,
                "max_flow": result.max_flow,
                "required": result.required,
            }
        )
        records.append(record)
        # Fall back to the union of every agent's re-buys, fresh edges and
        # singles.  Each agent stays one-hop covered: its own best-response
        # edges are all present, and every non-critical incident edge it
        # relied on is some neighbour's single, hence also present.
        edges = frozenset().union(
            *(a.rebought | a.added | a.unmatched_singles for a in analysis.agents)
        )
        if len(edges) >= entry_count:
            raise fail(
                f"iteration {iterations}: fallback did not decrease the edge count"
            )


# ---------------------------------------------------------------------------
# structural consistency of finished networks


@dataclass(frozen=True)
class AgentBudgetCheck:
    agent: int
    bought: frozenset[Edge]
    rebought: frozenset[Edge]
    extra: frozenset[Edge]  # bought beyond the re-buys
    non_critical: frozenset[Edge]  # extras that are not even critical
    limit: int  # alpha(u) + bonus
    ok: bool


@dataclass(frozen=True)
class AlphaConsistencyReport:
    agents: tuple[AgentBudgetCheck, ...]
    certified: bool

    @property
    def ok(self) -> bool:
        return all(a.ok for a in self.agents)


def alpha_consistency_check(
    network: Network,
    space: Space,
    budget: SearchBudget | None = None,
    bonus: int = 0,
) -> AlphaConsistencyReport:
    """Structural stability audit of an owned network: every agent's bought
    set should be its re-bought critical edges plus at most alpha(u)+bonus
    further critical edges.  An agent paying for a non-critical edge, or
    for more extras than its budget, fails the check (pass bonus=2 for
    networks built in planar mode).
    """
    if network.ownership is None:
        raise GameError("consistency check needs edge ownership")
    analysis = critical_analysis(network, space, budget=budget)
    checks = []
    for a in analysis.agents:
        bought = frozenset(
            e for e, owner in network.ownership.items() if owner == a.agent
        )
        extra = bought - a.rebought
        non_critical = extra - a.critical_edges
        limit = a.alpha + bonus
        checks.append(
            AgentBudgetCheck(
                agent=a.agent,
                bought=bought,
                rebought=frozenset(bought & a.rebought),
                extra=extra,
                non_critical=non_critical,
                limit=limit,
                ok=not non_critical and len(extra) <= limit,
            )
        )
    return AlphaConsistencyReport(tuple(checks), analysis.certified)
