import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from navgame import (
    DegenerateInputError,
    EuclideanSpace,
    KISSING_NUMBERS,
    Network,
    Variant,
    build_nng,
    delaunay_2d,
    is_navigable,
    kissing_number,
    nearest_neighbor,
    nearest_neighbor_sets,
    nng_edges,
    peeling_cover,
)

from conftest import oracle_navigable, rand_points


def general_position_points(rng, n, side=10**6):
    """Rejection-sample until no two pairs tie in distance (general
    position for our purposes: distinct pairwise distances)."""
    while True:
        pts = rand_points(rng, n, 2, side)
        sp = EuclideanSpace(pts)
        keys = sorted(
            sp.dist_key(i, j) for i in range(n) for j in range(i + 1, n)
        )
        if all(a != b for a, b in zip(keys, keys[1:])):
            return sp


def test_delaunay_frozen_quad():
    sp = EuclideanSpace(((0, 0), (0, 10), (10, 0), (10, 1)))
    assert sorted(delaunay_2d(sp)) == [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]


def test_delaunay_degenerate_inputs():
    with pytest.raises(DegenerateInputError):
        delaunay_2d(EuclideanSpace(((0, 0), (1, 1))))
    with pytest.raises(DegenerateInputError):
        delaunay_2d(EuclideanSpace(((0, 0), (1, 1), (3, 3), (7, 7))))


def test_delaunay_cocircular_still_triangulates():
    edges = delaunay_2d(EuclideanSpace(((0, 0), (0, 1), (1, 0), (1, 1))))
    # square: 4 hull edges + one diagonal
    assert len(edges) == 5


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(4, 16))
def test_delaunay_is_navigable_and_contains_nng(seed, n):
    sp = general_position_points(random.Random(seed), n)
    dt = delaunay_2d(sp)
    assert len(dt) <= 3 * n - 6
    net = Network(Variant.UNDIRECTED, n, dt)
    assert is_navigable(net, sp)
    assert oracle_navigable(net, sp)
    assert nng_edges(sp) <= dt


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**9))
def test_removing_any_nng_edge_breaks_delaunay_navigability(seed):
    sp = general_position_points(random.Random(seed), 9)
    dt = delaunay_2d(sp)
    for e in nng_edges(sp):
        pruned = Network(Variant.UNDIRECTED, 9, dt - {e})
        assert not is_navigable(pruned, sp)


def test_nearest_neighbor_and_tie_handling():
    sp = EuclideanSpace(((0, 0), (1, 0), (2, 0), (0, 5)))
    assert nearest_neighbor(sp, 0) == 1
    assert nearest_neighbor_sets(sp) == [
        frozenset({1}),
        frozenset({0, 2}),  # exact tie: both kept
        frozenset({1}),
        frozenset({0}),
    ]
    g = build_nng(sp)
    assert (1, 0) in g.arcs and (1, 2) in g.arcs
    assert g.undirected_edges == frozenset({(0, 1), (1, 2), (0, 3)})
    assert g.components == (frozenset({0, 1, 2, 3}),)


def test_nng_components_split():
    sp = EuclideanSpace(((0, 0), (1, 0), (100, 100), (101, 100)))
    g = build_nng(sp)
    assert sorted(map(sorted, g.components)) == [[0, 1], [2, 3]]


def test_kissing_numbers_table():
    assert KISSING_NUMBERS == {1: 2, 2: 6, 3: 12, 4: 24}
    assert kissing_number(2) == 6
    assert kissing_number(9) is None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 3), st.integers(3, 12))
def test_peeling_cover_is_a_one_hop_cover_within_kissing_bound(seed, dim, n):
    rng = random.Random(seed)
    sp = EuclideanSpace(rand_points(rng, n, dim, side=10**5), dimension=dim)
    for u in range(min(n, 4)):
        cover = peeling_cover(sp, u)
        assert len(cover) <= kissing_number(dim)
        for t in range(n):
            if t == u:
                continue
            assert any(
                sp.dist_key(v, t) < sp.dist_key(u, t) for v in cover
            ), (u, t)


def test_peeling_cover_respects_target_subset():
    sp = EuclideanSpace(((0, 0), (10, 0), (0, 10), (10, 10)))
    cover_one = peeling_cover(sp, 0, targets=[3])
    assert len(cover_one) == 1
    assert any(sp.dist_key(v, 3) < sp.dist_key(0, 3) for v in cover_one)
