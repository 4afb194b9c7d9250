"""Directed variant: the cheapest stable network is just everyone buying a
minimum greedy routing set.

Each agent's arcs only ever appear as first hops (onward hops are strictly
closer to the target, hence never revisit the buyer), so the agents'
problems decouple: a profile where every agent plays a minimum one-hop
cover is simultaneously a social optimum and an equilibrium.
"""

from __future__ import annotations

from dataclasses import dataclass

from .covers import (
    CoverError,
    GreedyRoutingSet,
    SearchBudget,
    minimum_greedy_routing_set,
)
from .geometry import build_nng
from .metric import Space
from .network import (
    GameError,
    Network,
    StrategyProfile,
    Variant,
    induce_network,
    is_greedy_connected,
)


@dataclass(frozen=True)
class DirectedOptimum:
    """A full directed optimum/equilibrium: profile plus per-agent covers."""

    profile: StrategyProfile
    routing_sets: tuple[GreedyRoutingSet, ...]
    social_cost: int
    certified: bool  # all covers solved exactly

    @property
    def network(self) -> Network:
        return induce_network(self.profile)


def construct_directed_optimum(
    space: Space, budget: SearchBudget | None = None
) -> DirectedOptimum:
    """Every agent buys its canonical minimum routing set.

    The result is navigable (each agent one-hop covers every target), its
    social cost is the sum of the routing degrees, and no agent can do
    better: fewer arcs would leave some target without a strictly closer
    first hop.  Covers that fell back to the heuristic solver make the
    result non-certified.
    """
    if space.n < 2:
        raise GameError("need at least two agents")
    nng = build_nng(space)
    sets = tuple(
        minimum_greedy_routing_set(space, u, budget=budget, nng=nng)
        for u in range(space.n)
    )
    profile = StrategyProfile(
        Variant.DIRECTED, tuple(s.members for s in sets)
    )
    return DirectedOptimum(
        profile=profile,
        routing_sets=sets,
        social_cost=sum(s.size for s in sets),
        certified=all(s.exact for s in sets),
    )


def is_structural_equilibrium(
    space: Space, profile: StrategyProfile, budget: SearchBudget | None = None
) -> bool:
    """Directed-only fast equilibrium test, no per-agent search over profiles.

    In a profile where everyone is greedy connected, any first hop an agent
    might buy reaches every target it is strictly closer to (onward paths
    avoid the agent entirely), so the best-response cost collapses to the
    agent's routing degree.  Hence: stable iff connected and every strategy
    has exactly routing-degree size.  Disconnected profiles are never stable
    for n >= 2 (the complete strategy is finite), so they return False.

    Raises CoverError if any routing-set search exceeds the budget, rather
    than guessing.
    """
    if profile.variant is not Variant.DIRECTED:
        raise GameError("structural test applies to the directed variant only")
    network = induce_network(profile)
    if not is_greedy_connected(network, space):
        return False
    nng = build_nng(space)
    for u in range(space.n):
        rs = minimum_greedy_routing_set(space, u, budget=budget, nng=nng)
        if not rs.exact:
            raise CoverError(f"agent {u}: routing degree not certified")
        if len(profile.strategies[u]) != rs.size:
            return False
    return True
