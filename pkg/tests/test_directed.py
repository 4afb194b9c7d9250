import random

from hypothesis import given, settings
from hypothesis import strategies as st

from navgame import (
    EuclideanSpace,
    ExactStability,
    best_response,
    construct_directed_optimum,
    induce_network,
    is_navigable,
    is_structural_equilibrium,
    minimum_greedy_routing_set,
    routing_degree,
    social_cost,
    verify_equilibrium,
)

from conftest import (
    oracle_min_routing_set,
    oracle_social_optimum,
    rand_metric,
    rand_points,
)


def mixed_space(seed, nmax=8):
    rng = random.Random(seed)
    n = rng.randint(2, nmax)
    kind = seed % 3
    if kind == 0:
        return rand_metric(rng, n)
    dim = 1 + (seed >> 2) % 3
    return EuclideanSpace(rand_points(rng, n, dim, side=100), dimension=dim)


def test_four_point_line_frozen_optimum():
    sp = EuclideanSpace(((0,), (3,), (7,), (12,)), dimension=1)
    opt = construct_directed_optimum(sp)
    assert opt.social_cost == 6
    assert social_cost(opt.profile, sp) == 6
    assert opt.certified
    assert is_navigable(induce_network(opt.profile), sp)
    rep = verify_equilibrium(sp, opt.profile, ExactStability())
    assert rep.stable


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_optimum_cost_is_sum_of_routing_degrees(seed):
    sp = mixed_space(seed)
    opt = construct_directed_optimum(sp)
    assert opt.social_cost == sum(
        routing_degree(sp, u) for u in range(sp.n)
    )
    assert opt.social_cost == sum(
        len(rs.members) for rs in opt.routing_sets
    )
    net = induce_network(opt.profile)
    assert is_navigable(net, sp)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9))
def test_optimum_matches_exhaustive_social_optimum(seed):
    sp = mixed_space(seed, nmax=6)
    opt = construct_directed_optimum(sp)
    assert opt.social_cost == oracle_social_optimum(sp, "directed")


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9))
def test_optimum_is_equilibrium_by_exact_best_responses(seed):
    sp = mixed_space(seed)
    opt = construct_directed_optimum(sp)
    for u in range(sp.n):
        br = best_response(sp, opt.profile, u)
        assert br.cost == len(opt.profile.strategies[u]), (seed, u)
    rep = verify_equilibrium(sp, opt.profile, ExactStability())
    assert rep.stable
    assert rep.certified


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_structural_check_agrees_with_generic_verifier(seed):
    sp = mixed_space(seed)
    opt = construct_directed_optimum(sp)
    assert is_structural_equilibrium(sp, opt.profile)
    generic = verify_equilibrium(sp, opt.profile, method="generic")
    structural = verify_equilibrium(sp, opt.profile, method="structural")
    assert generic.stable and structural.stable
    # perturb one agent with a wasteful purchase: both must agree again
    rng = random.Random(seed)
    u = rng.randrange(sp.n)
    extra = {v for v in range(sp.n) if v != u}
    worse = opt.profile.replace(u, frozenset(extra))
    if worse != opt.profile:
        g2 = verify_equilibrium(sp, worse, method="generic")
        s2 = is_structural_equilibrium(sp, worse)
        assert g2.stable == s2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_each_agent_set_is_individually_minimal(seed):
    sp = mixed_space(seed)
    for u in range(sp.n):
        rs = minimum_greedy_routing_set(sp, u)
        assert len(rs.members) == len(oracle_min_routing_set(sp, u))
