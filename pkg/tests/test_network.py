import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from navgame import (
    EuclideanSpace,
    GameError,
    Network,
    StrategyProfile,
    Variant,
    agent_cost,
    cost_report,
    extract_greedy_path,
    greedy_reachable_to,
    induce_network,
    is_greedy_connected,
    is_navigable,
    random_profile,
    reach_masks,
    social_cost,
    undirected_edge,
    usable_hops,
)

from conftest import oracle_navigable, oracle_reachable, rand_metric, rand_points


def spaces_for(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 8)
    if seed % 3 == 0:
        return rand_metric(rng, n)
    dim = 1 + seed % 3
    return EuclideanSpace(rand_points(rng, n, dim, side=25), dimension=dim)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(["directed", "undirected"]))
def test_reachability_matches_literal_path_search(seed, variant):
    space = spaces_for(seed)
    n = space.n
    prof = random_profile(n, variant, seed=seed, density=0.45)
    net = induce_network(prof)
    for t in range(n):
        mine = greedy_reachable_to(net, space, t)
        ref = oracle_reachable(net, space, t)
        assert mine == {v for v in ref if v != t}, (seed, variant, t)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_reach_masks_agree_with_per_target_sets(seed):
    space = spaces_for(seed)
    n = space.n
    net = induce_network(random_profile(n, "undirected", seed=seed, density=0.5))
    masks = reach_masks(net, space)
    for t in range(n):
        expect = greedy_reachable_to(net, space, t) | {t}
        got = {v for v in range(n) if masks[t] >> v & 1}
        assert got == expect
    assert is_greedy_connected(net, space) == oracle_navigable(net, space)
    assert is_navigable(net, space) == is_greedy_connected(net, space)


def test_directed_arcs_are_one_way():
    # 0 - 1 - 2 on a line; only agent 1 buys, so only 1 can walk out
    space = EuclideanSpace(((0,), (1,), (2,)), dimension=1)
    prof = StrategyProfile(
        Variant.DIRECTED, (frozenset(), frozenset({0, 2}), frozenset())
    )
    net = induce_network(prof)
    assert greedy_reachable_to(net, space, 0) == {1}
    assert greedy_reachable_to(net, space, 2) == {1}
    # undirected: same purchases become walkable both ways
    prof_u = StrategyProfile(
        Variant.UNDIRECTED, (frozenset(), frozenset({0, 2}), frozenset())
    )
    net_u = induce_network(prof_u)
    assert is_navigable(net_u, space)


def test_equal_distance_hops_are_unusable():
    # two points equidistant from the target cannot relay to each other
    space = EuclideanSpace(((0, 0), (2, 1), (2, -1), (4, 0)))
    # 1 and 2 are equidistant from 3; 0 connects only through them
    net = Network(Variant.UNDIRECTED, 4, {(1, 2), (0, 1), (2, 3)})
    assert usable_hops(net, space, 1, 3) == [2] or usable_hops(net, space, 1, 3) == []
    reach3 = greedy_reachable_to(net, space, 3)
    assert 2 in reach3
    # 1's only neighbours toward 3 are 0 (farther) and 2 (equal): stuck
    assert 1 not in reach3
    assert 0 not in reach3


def test_extract_greedy_path_is_strictly_decreasing():
    rng = random.Random(7)
    space = rand_metric(rng, 7)
    net = induce_network(random_profile(7, "undirected", seed=3, density=0.6))
    for t in range(7):
        for s in greedy_reachable_to(net, space, t):
            path = extract_greedy_path(net, space, s, t)
            assert path is not None
            assert path.nodes[0] == s and path.nodes[-1] == t
            keys = [space.dist_key(v, t) for v in path.nodes]
            assert all(a > b for a, b in zip(keys, keys[1:]))
        unreached = set(range(7)) - greedy_reachable_to(net, space, t) - {t}
        for s in unreached:
            assert extract_greedy_path(net, space, s, t) is None


def test_profile_validation_rejects_self_purchase_and_range():
    with pytest.raises(GameError):
        StrategyProfile(Variant.DIRECTED, (frozenset({0}),))
    with pytest.raises(GameError):
        StrategyProfile(Variant.UNDIRECTED, (frozenset({5}), frozenset()))


def test_double_purchase_canonicalization():
    prof = StrategyProfile(
        Variant.UNDIRECTED, (frozenset({1}), frozenset({0, 2}), frozenset())
    )
    # both bought {0,1}: social cost still charges both buyers
    assert social_cost(prof, EuclideanSpace(((0,), (1,), (2,)), dimension=1)) == 3
    net = induce_network(prof)
    assert net.edges == frozenset({(0, 1), (1, 2)})
    assert net.duplicate_events and net.duplicate_events[0].edge == (0, 1)
    assert net.ownership[(0, 1)] == 0  # lower-indexed buyer keeps it
    assert net.ownership[(1, 2)] == 1


def test_cost_report_charges_edges_when_connected_else_inf():
    space = EuclideanSpace(((0,), (3,), (7,), (12,)), dimension=1)
    from navgame import complete_profile

    prof = complete_profile(4, "directed")
    rep = cost_report(prof, space)
    assert rep.social == sum(rep.per_agent) == 12
    for u in range(4):
        assert rep.per_agent[u] == len(prof.strategies[u]) == 3
        assert agent_cost(prof, space, u) == 3
    assert social_cost(prof, space) == 12

    # drop agent 0's purchases: it goes unreachable-from and pays inf
    broken = prof.replace(0, ())
    rep2 = cost_report(broken, space)
    assert rep2.per_agent[0] == float("inf")
    assert rep2.social == float("inf")
    assert all(rep2.per_agent[u] == 3 for u in range(1, 4))


def test_network_constructor_normalizes_undirected_edges():
    net = Network(Variant.UNDIRECTED, 3, {(2, 0), (1, 2)})
    assert net.edges == frozenset({(0, 2), (1, 2)})
    assert undirected_edge(2, 0) == (0, 2)
    with pytest.raises(GameError):
        Network(Variant.UNDIRECTED, 3, {(0, 3)})
    with pytest.raises(GameError):
        Network(Variant.UNDIRECTED, 3, {(1, 1)})


def test_network_moves_and_replace_edges():
    net = Network(Variant.DIRECTED, 3, {(0, 1), (1, 2)})
    assert net.moves()[0] == [1]
    assert net.moves()[1] == [2]
    assert net.moves()[2] == []
    net2 = net.replace_edges({(2, 0)})
    assert net2.edges == frozenset({(2, 0)})
    assert net2.variant is Variant.DIRECTED


def test_space_network_size_mismatch_raises():
    space = EuclideanSpace(((0,), (1,)), dimension=1)
    net = Network(Variant.UNDIRECTED, 3, {(0, 1)})
    with pytest.raises(GameError):
        reach_masks(net, space)
