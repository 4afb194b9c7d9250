import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from navgame import (
    AlgorithmMode,
    EuclideanSpace,
    GameError,
    Infeasible,
    Network,
    Orientation,
    Variant,
    alpha_consistency_check,
    classify_edges,
    compute_approximate_ne,
    critical_best_response,
    critical_incident_set,
    default_mode,
    filter_redundant_edges,
    hakimi_orient,
    is_navigable,
    kissing_number,
)
from navgame.undirected import EdgeTag

from conftest import oracle_navigable, rand_metric, rand_points


# --- degree-bounded orientation --------------------------------------------


def flow_oracle(edges, bounds):
    """Max number of edges assignable to endpoints within per-node caps,
    via a straight bipartite max-flow (edge nodes on the left)."""
    g = nx.DiGraph()
    g.add_node("s")
    g.add_node("t")
    for i, (a, b) in enumerate(edges):
        g.add_edge("s", ("e", i), capacity=1)
        g.add_edge(("e", i), ("v", a), capacity=1)
        g.add_edge(("e", i), ("v", b), capacity=1)
    for v, cap in enumerate(bounds):
        g.add_edge(("v", v), "t", capacity=cap)
    if not edges:
        return 0
    return nx.maximum_flow_value(g, "s", "t")


def test_triangle_with_starved_bounds_is_infeasible():
    edges = [(0, 1), (0, 2), (1, 2)]
    result = hakimi_orient(edges, (1, 1, 0))
    assert isinstance(result, Infeasible)
    assert result.required == 3
    assert result.max_flow == 2
    assert tuple(result.bounds) == (1, 1, 0)


def test_path_orientation_respects_bounds():
    result = hakimi_orient([(0, 1), (1, 2)], (0, 2, 0))
    assert isinstance(result, Orientation)
    assert result.owners == (1, 1)
    assert result.in_degrees == (0, 2, 0)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_orientation_feasibility_matches_max_flow(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 8)
    all_edges = [(a, b) for a in range(n) for b in range(a + 1, n)]
    m = rng.randint(0, len(all_edges))
    edges = sorted(rng.sample(all_edges, m))
    bounds = [rng.randint(0, 3) for _ in range(n)]
    result = hakimi_orient(edges, bounds)
    flow = flow_oracle(edges, bounds)
    if isinstance(result, Orientation):
        assert flow == len(edges)
        assert len(result.owners) == len(edges)
        loads = [0] * n
        for edge, owner in zip(edges, result.owners):
            assert owner in edge
            loads[owner] += 1
        assert list(result.in_degrees) == loads
        assert all(l <= b for l, b in zip(loads, bounds))
    else:
        assert flow < len(edges)
        assert result.max_flow == flow
        assert result.required == len(edges)


# --- edge classification and filtering --------------------------------------


def test_classification_tags_and_slack_filtering():
    sp = EuclideanSpace(((0,), (4,), (9,)), dimension=1)
    net = Network(Variant.UNDIRECTED, 3, frozenset({(0, 1), (1, 2), (0, 2)}))
    cls = classify_edges(net, sp)
    assert cls.tag((0, 1)) is EdgeTag.DOUBLE
    # the chord gives agent 2 a second usable hop everywhere, so (1,2)
    # stays critical only for agent 1
    assert cls.tag((1, 2)) is EdgeTag.SINGLE
    assert cls.single_for((1, 2)) == 1
    assert cls.singles_of(1) == frozenset({(1, 2)})
    assert cls.tag((0, 2)) is EdgeTag.SLACK
    assert cls.slack_edges == ((0, 2),)
    filtered = filter_redundant_edges(net, sp)
    assert filtered.edges == frozenset({(0, 1), (1, 2)})
    again = filter_redundant_edges(filtered, sp)
    assert again.edges == filtered.edges


def test_single_edge_classification():
    # 1D: 0,10,11. Edge (0,2): agent 0's only approach to 1 and 2 goes
    # through it once (1,2) exists, but 2 can reach 0 via 1 as well.
    sp = EuclideanSpace(((0,), (10,), (11,)), dimension=1)
    net = Network(Variant.UNDIRECTED, 3, frozenset({(0, 2), (1, 2), (0, 1)}))
    cls = classify_edges(net, sp)
    tags = {e: cls.tag(e) for e in net.edges}
    assert EdgeTag.SLACK in tags.values()
    singles = [e for e, t in tags.items() if t is EdgeTag.SINGLE]
    for e in singles:
        assert cls.single_for(e) is not None


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**9))
def test_filtering_preserves_navigability_and_is_lean(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 8)
    if seed % 2:
        sp = rand_metric(rng, n)
    else:
        sp = EuclideanSpace(rand_points(rng, n, 2, side=60), dimension=2)
    full = Network(
        Variant.UNDIRECTED,
        n,
        frozenset((a, b) for a in range(n) for b in range(a + 1, n)),
    )
    lean = filter_redundant_edges(full, sp)
    assert is_navigable(lean, sp)
    assert oracle_navigable(lean, sp)
    # a full pass removes nothing more, and every surviving edge is
    # critical for at least one endpoint
    cls = classify_edges(lean, sp)
    assert not cls.slack_edges


def test_critical_edges_of_middle_agent():
    sp = EuclideanSpace(((0,), (4,), (9,)), dimension=1)
    net = Network(Variant.UNDIRECTED, 3, frozenset({(0, 1), (1, 2)}))
    assert critical_incident_set(net, sp, 1) == frozenset({(0, 1), (1, 2)})
    cbr = critical_best_response(net, sp, 1)
    assert cbr.strategy == frozenset({0, 2})
    assert cbr.rebought == frozenset({(0, 1), (1, 2)})
    assert cbr.added == frozenset()
    assert cbr.alpha == 0


def test_criticality_rejects_disconnected_agents():
    sp = EuclideanSpace(((0,), (4,), (9,)), dimension=1)
    net = Network(Variant.UNDIRECTED, 3, frozenset({(0, 1)}))
    with pytest.raises(GameError):
        critical_incident_set(net, sp, 2)
    with pytest.raises(GameError):
        classify_edges(net, sp)


# --- the construction pipeline ----------------------------------------------


def construction_bound(space, trace):
    if isinstance(space, EuclideanSpace):
        k = kissing_number(space.dimension)
        if k is not None:
            return (k - 1) * space.n - 1
    # general metric: the largest observed routing degree stands in
    degrees = trace.records[0]["routing_degrees"]
    return (max(2, max(degrees)) - 1) * space.n - 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_construction_outputs_are_navigable_and_fully_owned(seed):
    rng = random.Random(seed)
    kind = seed % 3
    if kind == 0:
        sp = rand_metric(rng, rng.randint(2, 10))
    elif kind == 1:
        sp = EuclideanSpace(rand_points(rng, rng.randint(2, 14), 2, side=200),
                            dimension=2)
    else:
        sp = EuclideanSpace(rand_points(rng, rng.randint(2, 9), 3, side=60),
                            dimension=3)
    net, trace = compute_approximate_ne(sp)
    assert net.variant is Variant.UNDIRECTED
    assert is_navigable(net, sp)
    assert oracle_navigable(net, sp)
    assert net.ownership is not None
    assert set(net.ownership) == set(net.edges)
    for edge, owner in net.ownership.items():
        assert owner in edge
    assert trace.iterations >= 1
    assert trace.iterations <= max(construction_bound(sp, trace), 1)
    events = [r["event"] for r in trace.records]
    assert events[0] == "init" and events[-1] == "done"


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9))
def test_construction_respects_per_agent_budgets(seed):
    rng = random.Random(seed)
    sp = EuclideanSpace(rand_points(rng, rng.randint(3, 12), 2, side=150),
                        dimension=2)
    net, trace = compute_approximate_ne(sp)
    bonus = 2 if trace.mode == AlgorithmMode.PLANAR_2D.value else 0
    report = alpha_consistency_check(net, sp, bonus=bonus)
    assert all(a.ok for a in report.agents)
    assert report.certified == trace.certified


def test_mode_selection_and_input_guards():
    two_d = EuclideanSpace(((0, 0), (3, 1), (6, 5)), dimension=2)
    three_d = EuclideanSpace(((0, 0, 0), (3, 1, 2), (6, 5, 4)), dimension=3)
    assert default_mode(two_d) is AlgorithmMode.PLANAR_2D
    assert default_mode(three_d) is AlgorithmMode.EUCLIDEAN
    assert default_mode(rand_metric(random.Random(1), 4)) \
        is AlgorithmMode.GENERAL
    with pytest.raises(GameError):
        compute_approximate_ne(EuclideanSpace(((0,),), dimension=1))
    with pytest.raises(GameError):
        compute_approximate_ne(three_d, mode=AlgorithmMode.PLANAR_2D)
    with pytest.raises(GameError):
        compute_approximate_ne(rand_metric(random.Random(2), 5),
                               mode="euclidean")


def test_line_instance_is_a_two_edge_path():
    sp = EuclideanSpace(((0,), (1,), (3,)), dimension=1)
    net, trace = compute_approximate_ne(sp)
    assert net.edges == frozenset({(0, 1), (1, 2)})
    assert trace.certified
