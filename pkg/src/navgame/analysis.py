"""Equilibrium verification, brute-force oracles, and density reporting.

The brute-force routines here deliberately avoid the production search
machinery (rank tables, bitmask covers): they work from pairwise distance
comparisons and subset enumeration only, so tests can use them as
independent referees.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .covers import (
    CoverError,
    SearchBudget,
    SolveMode,
    best_response,
    minimum_greedy_routing_set,
    residual_routing_degree,
)
from .geometry import build_nng, kissing_number
from .metric import EuclideanSpace, Ordering, Space
from .network import (
    GameError,
    Network,
    StrategyProfile,
    Variant,
    induce_network,
    is_greedy_connected,
    social_cost,
    undirected_edge,
)

Edge = tuple[int, int]


# ---------------------------------------------------------------------------
# stability criteria


@dataclass(frozen=True)
class ExactStability:
    """Plain equilibrium: no strictly cheaper deviation at all."""

    @property
    def label(self) -> str:
        return "ne"


@dataclass(frozen=True)
class MultiplicativeSlack:
    """beta-stability: tolerate deviations down to current/beta."""

    beta: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.beta, Fraction) or self.beta < 1:
            raise GameError("beta must be a Fraction >= 1")

    @property
    def label(self) -> str:
        return f"beta:{self.beta}"


@dataclass(frozen=True)
class AdditiveSlack:
    """Additive stability: tolerate deviations down to current - gamma."""

    gamma: int

    def __post_init__(self) -> None:
        if not isinstance(self.gamma, int) or self.gamma < 0:
            raise GameError("gamma must be a non-negative int")

    @property
    def label(self) -> str:
        return f"additive:{self.gamma}"


Criterion = Union[ExactStability, MultiplicativeSlack, AdditiveSlack]


def parse_criterion(text: str) -> Criterion:
    """"ne", "beta:<fraction>=1 or decimal string>", or "additive:<int>"."""
    if text == "ne":
        return ExactStability()
    kind, sep, arg = text.partition(":")
    if not sep:
        raise GameError(f"unknown criterion {text!r}")
    try:
        if kind == "beta":
            return MultiplicativeSlack(Fraction(arg))
        if kind == "additive":
            return AdditiveSlack(int(arg))
    except (ValueError, ZeroDivisionError) as exc:
        raise GameError(f"bad criterion argument in {text!r}: {exc}") from exc
    raise GameError(f"unknown criterion {text!r}")


def _improves(criterion: Criterion, current: float, best: int) -> bool:
    """Does a deviation of cost `best` break the criterion at `current`?
    `current` may be math.inf (disconnected agent)."""
    if isinstance(criterion, ExactStability):
        return best < current
    if isinstance(criterion, MultiplicativeSlack):
        return best * criterion.beta < current
    return best + criterion.gamma < current


@dataclass(frozen=True)
class AgentWitness:
    agent: int
    current_cost: int | None  # None when the agent is disconnected
    best_cost: int
    improving: bool  # under the report's criterion
    deviation: frozenset[int] | None  # a confirmed improving strategy
    mode: SolveMode


@dataclass(frozen=True)
class EquilibriumReport:
    variant: str
    criterion: str
    stable: bool
    verdict: str  # criterion label when stable, else "not-stable"
    witnesses: tuple[AgentWitness, ...]
    certified: bool  # every best response was exact
    method: str  # "generic" or "structural"

    @property
    def improving_agents(self) -> tuple[int, ...]:
        return tuple(w.agent for w in self.witnesses if w.improving)


def verify_equilibrium(
    space: Space,
    profile: StrategyProfile,
    criterion: Criterion | str = ExactStability(),
    budget: SearchBudget | None = None,
    method: str = "auto",
) -> EquilibriumReport:
    """Check per-agent stability under the given criterion.

    generic: exact best response per agent, cost comparison per criterion.
    structural (directed, plain stability, all agents connected): stable iff
    every strategy has exactly routing-degree size — any first hop reaches
    everything it is strictly closer to once the rest of the network is
    connected, so the best-response cost collapses to the routing degree.
    "auto" picks structural when it applies, else generic.  A heuristic
    (budget-limited) best response downgrades certification but never
    flips a verdict: an improving deviation it finds is still genuinely
    improving.
    """
    if isinstance(criterion, str):
        criterion = parse_criterion(criterion)
    if method not in ("auto", "generic", "structural"):
        raise GameError(f"unknown method {method!r}")

    use_structural = False
    if method in ("auto", "structural"):
        if profile.variant is Variant.DIRECTED and isinstance(
            criterion, ExactStability
        ):
            try:
                network = induce_network(profile)
                if is_greedy_connected(network, space):
                    use_structural = True
            except GameError:
                use_structural = False
        if method == "structural" and not use_structural:
            raise GameError(
                "structural method needs a directed, fully connected profile "
                "and the plain stability criterion"
            )

    if use_structural:
        witnesses = []
        stable = True
        try:
            nng = build_nng(space)
            for u in range(space.n):
                rs = minimum_greedy_routing_set(space, u, budget=budget, nng=nng)
                if not rs.exact:
                    raise CoverError("routing degree not certified")
                current = len(profile.strategies[u])
                improving = rs.size < current
                stable = stable and not improving
                witnesses.append(
                    AgentWitness(
                        agent=u,
                        current_cost=current,
                        best_cost=rs.size,
                        improving=improving,
                        deviation=rs.members if improving else None,
                        mode=rs.mode,
                    )
                )
            return EquilibriumReport(
                variant=profile.variant.value,
                criterion=criterion.label,
                stable=stable,
                verdict=criterion.label if stable else "not-stable",
                witnesses=tuple(witnesses),
                certified=True,
                method="structural",
            )
        except CoverError:
            if method == "structural":
                raise
            # fall through to the generic path with the given budget

    witnesses = []
    stable = True
    certified = True
    for u in range(space.n):
        res = best_response(space, profile, u, budget=budget)
        certified = certified and res.exact
        improving = _improves(criterion, res.current_cost, res.cost)
        stable = stable and not improving
        witnesses.append(
            AgentWitness(
                agent=u,
                current_cost=(
                    None if math.isinf(res.current_cost) else int(res.current_cost)
                ),
                best_cost=res.cost,
                improving=improving,
                deviation=res.strategy if improving else None,
                mode=res.mode,
            )
        )
    return EquilibriumReport(
        variant=profile.variant.value,
        criterion=criterion.label,
        stable=stable,
        verdict=criterion.label if stable else "not-stable",
        witnesses=tuple(witnesses),
        certified=certified,
        method="generic",
    )


# ---------------------------------------------------------------------------
# independent oracles


def brute_force_reachable(
    network: Network, space: Space, source: int
) -> frozenset[int]:
    """Targets reachable from `source` by explicit search over strictly
    distance-decreasing paths.  Uses pairwise comparisons only — no rank
    tables — so it can referee the production reachability code.
    """
    n = network.n
    adj = network.moves()
    out = set()
    for t in range(n):
        if t == source:
            continue
        visited = set()
        stack = [source]
        while stack:
            x = stack.pop()
            if x == t:
                out.add(t)
                break
            if x in visited:
                continue
            visited.add(x)
            for y in adj[x]:
                if space.compare((y, t), (x, t)) is Ordering.LESS:
                    stack.append(y)
    return frozenset(out)


def _exhaustive_min_cover(space: Space, agent: int) -> frozenset[int]:
    """Smallest first-hop set covering every target, found by plain subset
    enumeration in lexicographic order (first witness of the minimum size).
    """
    n = space.n
    others = [v for v in range(n) if v != agent]
    for k in range(1, n):
        for combo in itertools.combinations(others, k):
            ok = True
            for t in others:
                if not any(
                    space.compare((v, t), (agent, t)) is Ordering.LESS for v in combo
                ):
                    ok = False
                    break
            if ok:
                return frozenset(combo)
    raise GameError(f"agent {agent} has no covering strategy")  # unreachable, n >= 2


def _forced_nearest_edges(space: Space) -> frozenset[Edge]:
    """Edges every navigable undirected network must contain: if w is a
    nearest neighbour of u then no third point is strictly closer to u than
    w is, so w's only possible first hop toward target u is u itself."""
    n = space.n
    forced = set()
    for u in range(n):
        best: list[int] = []
        for v in range(n):
            if v == u:
                continue
            if not best:
                best = [v]
                continue
            cmp = space.compare((v, u), (best[0], u))
            if cmp is Ordering.LESS:
                best = [v]
            elif cmp is Ordering.EQUAL:
                best.append(v)
        for w in best:
            forced.add(undirected_edge(u, w))
    return frozenset(forced)


@dataclass(frozen=True)
class BruteForceOptimum:
    variant: Variant
    network: Network
    cost: int
    profile: StrategyProfile | None  # directed only: the witness profile


def brute_force_social_optimum(
    space: Space,
    variant: Variant | str,
    max_n: int | None = None,
    node_budget: int = 5_000_000,
) -> BruteForceOptimum:
    """Exhaustive minimum social cost.

    directed: agents decouple (arcs only ever serve their buyer's first
    hops), so the optimum is the sum of per-agent exhaustive minimum
    covers.  undirected: branch-and-bound over edge sets that contain every
    forced nearest-neighbour edge, with iteratively deepened edge budgets;
    each branch step picks the uncovered (agent, target) pair with the
    fewest fixing edges.
    """
    variant = Variant(variant)
    n = space.n
    if n < 2:
        raise GameError("need at least two agents")
    cap = max_n if max_n is not None else (7 if variant is Variant.DIRECTED else 9)
    if n > cap:
        raise GameError(f"brute force capped at n={cap}, got {n}")

    if variant is Variant.DIRECTED:
        strategies = tuple(_exhaustive_min_cover(space, u) for u in range(n))
        profile = StrategyProfile(Variant.DIRECTED, strategies)
        network = induce_network(profile)
        return BruteForceOptimum(
            variant, network, sum(len(s) for s in strategies), profile
        )

    closer: list[list[list[int]]] = [
        [
            [
                v
                for v in range(n)
                if v != u and space.compare((v, t), (u, t)) is Ordering.LESS
            ]
            for t in range(n)
        ]
        for u in range(n)
    ]
    phi = [len(_exhaustive_min_cover(space, u)) for u in range(n)]
    forced = _forced_nearest_edges(space)

    def uncovered(adj: dict[int, set[int]]) -> list[tuple[int, int, list[int]]]:
        missing = []
        for u in range(n):
            for t in range(n):
                if t == u:
                    continue
                fixes = closer[u][t]
                if not any(v in adj[u] for v in fixes):
                    options = [v for v in fixes if v not in adj[u]]
                    missing.append((u, t, options))
        return missing

    ticks = 0

    def solve(k: int) -> frozenset[Edge] | None:
        nonlocal ticks
        seen: set[frozenset[Edge]] = set()

        def rec(edges: set[Edge], adj: dict[int, set[int]]) -> frozenset[Edge] | None:
            nonlocal ticks
            ticks += 1
            if ticks > node_budget:
                raise GameError("brute-force optimum: node budget exhausted")
            missing = uncovered(adj)
            if not missing:
                return frozenset(edges)
            if len(edges) >= k:
                return None
            slack = k - len(edges)
            deficit = sum(
                max(0, phi[u] - len(adj[u])) for u in range(n)
            )
            if deficit > 2 * slack:
                return None
            u, t, options = min(missing, key=lambda item: (len(item[2]), item[:2]))
            for v in options:
                e = undirected_edge(u, v)
                state = frozenset(edges | {e})
                if state in seen:
                    continue
                seen.add(state)
                adj[u].add(v)
                adj[v].add(u)
                edges.add(e)
                hit = rec(edges, adj)
                edges.discard(e)
                adj[u].discard(v)
                adj[v].discard(u)
                if hit is not None:
                    return hit
            return None

        adj = {u: set() for u in range(n)}
        for a, b in forced:
            adj[a].add(b)
            adj[b].add(a)
        return rec(set(forced), adj)

    lower = max(len(forced), (sum(phi) + 1) // 2)
    for k in range(lower, n * (n - 1) // 2 + 1):
        found = solve(k)
        if found is not None:
            ownership = {e: e[0] for e in found}
            network = Network(Variant.UNDIRECTED, n, found, ownership)
            return BruteForceOptimum(variant, network, len(found), None)
    raise GameError("no navigable edge set found")  # complete graph always works


def so_lower_bound(space: Space, budget: SearchBudget | None = None) -> int:
    """Certified lower bound on the undirected optimum: all forced
    nearest-neighbour edges, plus the residual one-hop demand of each agent
    (targets no such neighbour serves), each non-forced edge counted for at
    most its two endpoints."""
    nng = build_nng(space)
    residual = sum(
        residual_routing_degree(space, u, budget=budget, nng=nng)
        for u in range(space.n)
    )
    return len(nng.undirected_edges) + (residual + 1) // 2


# ---------------------------------------------------------------------------
# density reporting


@dataclass(frozen=True)
class PoaReport:
    variant: str
    equilibrium_cost: int | None  # None when some agent is disconnected
    so_cost: int | None  # exact optimum when brute-forced
    lower_bound: int
    ratio_exact: Fraction | None
    ratio_bound: Fraction | None
    bound_label: str
    bound_value: Fraction | None
    violations: tuple[str, ...]


def _density_bound(space: Space, variant: Variant) -> tuple[str, Fraction | None]:
    if variant is Variant.DIRECTED:
        return "1", Fraction(1)
    if isinstance(space, EuclideanSpace):
        if space.dimension == 2:
            return "1.8", Fraction(9, 5)
        k = kissing_number(space.dimension)
        if k is not None:
            return f"2-1/{k}", Fraction(2) - Fraction(1, k)
    return "<2", Fraction(2)


def poa_report(
    space: Space,
    profile: StrategyProfile,
    budget: SearchBudget | None = None,
    so_max_n: int | None = None,
) -> PoaReport:
    """Cost of the given (presumed stable) profile against the exact
    optimum when the instance is small enough to brute-force, and against
    the certified lower bound always.  Exceeding the proved density bound
    is reported as a violation, not silently tolerated."""
    variant = profile.variant
    cost = social_cost(profile, space)
    eq_cost = None if math.isinf(cost) else int(cost)

    if variant is Variant.DIRECTED:
        lower = sum(
            minimum_greedy_routing_set(space, u, budget=budget).size
            for u in range(space.n)
        )
    else:
        lower = so_lower_bound(space, budget=budget)

    cap = so_max_n if so_max_n is not None else (
        7 if variant is Variant.DIRECTED else 9
    )
    so_cost = None
    if space.n <= cap:
        so_cost = brute_force_social_optimum(space, variant, max_n=cap).cost

    ratio_exact = (
        Fraction(eq_cost, so_cost)
        if eq_cost is not None and so_cost
        else None
    )
    ratio_bound = (
        Fraction(eq_cost, lower) if eq_cost is not None and lower else None
    )
    label, bound_value = _density_bound(space, variant)

    violations = []
    if eq_cost is None:
        violations.append("profile is not even connected")
    if ratio_exact is not None and bound_value is not None and ratio_exact > bound_value:
        violations.append(
            f"ratio {ratio_exact} vs exact optimum exceeds bound {label}"
        )
    if so_cost is not None and lower > so_cost:
        violations.append(
            f"lower bound {lower} exceeds exact optimum {so_cost}"
        )
    return PoaReport(
        variant=variant.value,
        equilibrium_cost=eq_cost,
        so_cost=so_cost,
        lower_bound=lower,
        ratio_exact=ratio_exact,
        ratio_bound=ratio_bound,
        bound_label=label,
        bound_value=bound_value,
        violations=tuple(violations),
    )


# ---------------------------------------------------------------------------
# per-component budget audit


@dataclass(frozen=True)
class ComponentBudget:
    nodes: tuple[int, ...]
    budget: int  # 2 + 3 * |component|
    bought_outside: int  # non-nearest-neighbour edges bought by these agents
    ok: bool


def component_edge_budget_check(
    network: Network, space: Space
) -> tuple[ComponentBudget, ...]:
    """Per nearest-neighbour-graph component: agents of a size-c component
    should collectively buy at most 2+3c edges beyond the graph itself."""
    if network.variant is not Variant.UNDIRECTED:
        raise GameError("component budgets apply to undirected networks")
    if network.ownership is None:
        raise GameError("component budgets need edge ownership")
    nng = build_nng(space)
    outside = Counter(
        owner
        for e, owner in network.ownership.items()
        if e not in nng.undirected_edges
    )
    reports = []
    for comp in nng.components:
        nodes = tuple(sorted(comp))
        bought = sum(outside.get(u, 0) for u in nodes)
        budget = 2 + 3 * len(nodes)
        reports.append(
            ComponentBudget(
                nodes=nodes, budget=budget, bought_outside=bought, ok=bought <= budget
            )
        )
    return tuple(reports)
