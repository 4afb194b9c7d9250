import pytest
from fractions import Fraction

from navgame import (
    BestResponseCycle,
    Clustered,
    EuclideanSpace,
    GameError,
    Grid,
    Line,
    PoaLowerBoundFamily,
    SetCoverGadget,
    UniformSquare,
    Variant,
    best_response,
    complete_profile,
    empty_profile,
    induce_network,
    is_navigable,
    random_profile,
    social_cost,
    validate_metric,
)

from conftest import oracle_best_response


# --- point-cloud generators ---------------------------------------------------


def test_generators_are_pure_functions_of_their_fields():
    a = UniformSquare(n=12, seed=7).build()
    b = UniformSquare(n=12, seed=7).build()
    c = UniformSquare(n=12, seed=8).build()
    assert a == b
    assert a.points == b.points
    assert a.points != c.points
    k1 = Clustered(n=10, clusters=2, seed=3).build()
    k2 = Clustered(n=10, clusters=2, seed=3).build()
    assert k1.points == k2.points


def test_generator_input_guards():
    with pytest.raises(GameError):
        UniformSquare(n=1).build()
    with pytest.raises(GameError):
        UniformSquare(n=5, side=0).build()
    with pytest.raises(GameError):
        Clustered(n=3, clusters=0).build()
    with pytest.raises(GameError):
        Grid(rows=0, cols=4).build()
    with pytest.raises(GameError):
        Grid(rows=1, cols=1).build()


def test_grid_and_line_shapes():
    g = Grid(rows=2, cols=3, spacing=5).build()
    assert g.n == 6
    assert g.points[0] == (0, 0) and g.points[-1] == (5, 10)
    line = Line((0, 4, 9)).build()
    assert line.dimension == 1
    assert line.points == ((0,), (4,), (9,))


def test_clustered_points_hug_their_centres():
    sp = Clustered(n=12, clusters=3, seed=1, spread=10, box=10**6).build()
    assert sp.n == 12
    # twelve points in three tight clumps: many pairs far apart, the
    # within-clump ones close
    near = sum(
        1
        for i in range(sp.n)
        for j in range(i + 1, sp.n)
        if sp.distance_squared(i, j) <= (4 * 10) ** 2
    )
    assert near >= 12  # 3 clumps x C(4,2) pairs


# --- covering gadget ------------------------------------------------------------


def gadget_sets():
    return (frozenset({0, 1}), frozenset({1, 2}), frozenset({2}))


def test_gadget_layout_and_directed_best_response():
    inst = SetCoverGadget(gadget_sets(), 3).build()
    assert inst.space.n == 10
    assert inst.agent == 0
    assert inst.set_nodes == (1, 2, 3)
    assert inst.guard_nodes == (4, 5, 6)
    assert inst.element_nodes == (7, 8, 9)
    br = best_response(inst.space, inst.profile, inst.agent)
    # all three guards are unreachable otherwise (m = 3), plus a minimum
    # cover of the universe (sets 0 and 1 suffice: cover size 2)
    assert br.cost == 3 + 2
    assert br.strategy == frozenset({1, 2, 4, 5, 6})
    cost, strategy = oracle_best_response(inst.space, inst.profile, inst.agent)
    assert cost == br.cost


def test_gadget_undirected_guards_pay_for_the_probe():
    inst = SetCoverGadget(gadget_sets(), 3, variant="undirected").build()
    br = best_response(inst.space, inst.profile, inst.agent)
    assert br.cost == 2
    cost, _ = oracle_best_response(inst.space, inst.profile, inst.agent)
    assert cost == 2


def test_gadget_rejects_uncovered_universes():
    with pytest.raises(GameError):
        SetCoverGadget((frozenset({0}),), 2).build()
    with pytest.raises(GameError):
        SetCoverGadget((frozenset({0, 5}),), 2).build()
    with pytest.raises(GameError):
        SetCoverGadget((), 1).build()


# --- high-ratio family -----------------------------------------------------------


def test_family_frozen_costs_and_navigability():
    inst = PoaLowerBoundFamily(components=8).build()
    assert inst.space.n == 16
    assert len(inst.pairs) == 8
    shared_cost = social_cost(inst.shared, inst.space)
    selfish_cost = social_cost(inst.selfish, inst.space)
    assert shared_cost == 32
    assert selfish_cost == 56
    assert Fraction(int(selfish_cost), int(shared_cost)) == Fraction(7, 4)
    assert is_navigable(induce_network(inst.shared), inst.space)
    assert is_navigable(induce_network(inst.selfish), inst.space)


def test_family_scales_with_component_count():
    for k in (7, 9, 12):
        inst = PoaLowerBoundFamily(components=k).build()
        assert inst.space.n == 2 * k
        assert Fraction(
            int(social_cost(inst.selfish, inst.space)),
            int(social_cost(inst.shared, inst.space)),
        ) == Fraction(7, 4)


def test_family_build_is_deterministic():
    a = PoaLowerBoundFamily(components=8).build()
    b = PoaLowerBoundFamily(components=8).build()
    assert a.space == b.space
    assert a.shared == b.shared and a.selfish == b.selfish


# --- the non-convergence witness ---------------------------------------------------


def test_cycle_instance_is_a_valid_metric_and_deterministic():
    inst = BestResponseCycle().build()
    assert validate_metric(inst.space).ok
    assert inst.space.n == 6
    assert inst.initial.variant is Variant.UNDIRECTED
    assert inst.schedule == (2, 4, 1, 2, 4, 1)
    assert set(inst.movers) == {1, 2, 4}
    for agent, endpoint in inst.toggles:
        assert agent in inst.movers
        assert 0 <= endpoint < 6
    assert BestResponseCycle().build() == inst


# --- profile helpers -----------------------------------------------------------------


def test_profile_helpers_shapes_and_validation():
    empty = empty_profile(4, "directed")
    assert all(s == frozenset() for s in empty.strategies)
    full = complete_profile(4, Variant.DIRECTED)
    assert all(len(s) == 3 for s in full.strategies)
    sp = Line((0, 3, 7, 12)).build()
    assert social_cost(full, sp) == 12
    r1 = random_profile(5, "undirected", seed=11)
    r2 = random_profile(5, "undirected", seed=11)
    r3 = random_profile(5, "undirected", seed=12)
    assert r1 == r2
    assert r1 != r3
    assert all(u not in s for u, s in enumerate(r1.strategies))
    with pytest.raises(GameError):
        random_profile(5, "directed", density=1.5)
