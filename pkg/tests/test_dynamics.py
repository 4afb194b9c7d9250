import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from navgame import (
    BestResponseCycle,
    DynamicsStatus,
    EuclideanSpace,
    GameError,
    RandomSeeded,
    RoundRobin,
    Scripted,
    StrategyProfile,
    Variant,
    construct_directed_optimum,
    parse_schedule,
    profile_fingerprint,
    random_profile,
    run_dynamics,
    social_cost,
)

from conftest import rand_metric, rand_points


def any_space(seed, nmax=7):
    rng = random.Random(seed)
    n = rng.randint(2, nmax)
    if seed % 2:
        return rand_metric(rng, n)
    dim = 1 + (seed >> 1) % 2
    return EuclideanSpace(rand_points(rng, n, dim, side=50), dimension=dim)


def improved(step):
    # old_cost is None when the previous strategy left the agent cut off
    return step.old_cost is None or step.new_cost < step.old_cost


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_directed_round_robin_converges_without_repeats(seed):
    sp = any_space(seed)
    start = random_profile(sp.n, Variant.DIRECTED, seed=seed)
    trace = run_dynamics(sp, start, RoundRobin(), max_steps=400)
    assert trace.status is DynamicsStatus.CONVERGED
    seen = {trace.initial_fingerprint}
    for step in trace.moves:
        assert step.fingerprint not in seen
        seen.add(step.fingerprint)
        assert improved(step)
    # final profile is a best-response fixed point: one more sweep stays put
    again = run_dynamics(sp, trace.final, RoundRobin(), max_steps=sp.n + 1)
    assert all(s.action == "stay" for s in again.steps)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9))
def test_random_schedule_also_converges(seed):
    sp = any_space(seed, nmax=6)
    start = random_profile(sp.n, Variant.DIRECTED, seed=seed ^ 0x5A5A)
    trace = run_dynamics(sp, start, RandomSeeded(seed & 0xFFFF),
                         max_steps=600)
    assert trace.status is DynamicsStatus.CONVERGED
    assert trace.variant == Variant.DIRECTED.value
    assert all(improved(s) for s in trace.moves)


def test_moves_strictly_improve_and_costs_line_up():
    sp = EuclideanSpace(((0,), (4,), (9,), (15,), (22,)), dimension=1)
    start = random_profile(sp.n, Variant.DIRECTED, seed=7)
    trace = run_dynamics(sp, start, RoundRobin(), max_steps=200)
    assert trace.status is DynamicsStatus.CONVERGED
    for step in trace.steps:
        if step.action == "stay":
            assert step.old_cost == step.new_cost
            assert step.old_size == step.new_size
        else:
            assert improved(step)
            assert step.new_cost == step.new_size
    assert social_cost(trace.final, sp) == sum(
        len(s) for s in trace.final.strategies
    )


def test_scripted_schedule_and_parse_forms():
    assert isinstance(parse_schedule("round-robin"), RoundRobin)
    rnd = parse_schedule("random:99")
    assert isinstance(rnd, RandomSeeded) and rnd.seed == 99
    scr = parse_schedule("scripted:2,0,1")
    assert isinstance(scr, Scripted) and scr.order == (2, 0, 1)
    with pytest.raises(GameError):
        parse_schedule("sorted")
    with pytest.raises(GameError):
        parse_schedule("random:x")


def test_scripted_runs_exactly_the_listed_agents():
    sp = EuclideanSpace(((0,), (5,), (11,)), dimension=1)
    start = StrategyProfile(
        Variant.DIRECTED,
        (frozenset(), frozenset(), frozenset()),
    )
    trace = run_dynamics(sp, start, Scripted((2, 2, 0)), max_steps=10)
    assert [s.agent for s in trace.steps] == [2, 2, 0]
    # a drained script is exhaustion, not a fixed-point certificate
    assert trace.status is DynamicsStatus.BUDGET_EXHAUSTED


def test_step_budget_is_respected():
    sp = EuclideanSpace(((0,), (7,), (13,), (20,)), dimension=1)
    start = random_profile(sp.n, Variant.DIRECTED, seed=3)
    trace = run_dynamics(sp, start, RoundRobin(), max_steps=1)
    assert trace.status in (
        DynamicsStatus.CONVERGED,
        DynamicsStatus.BUDGET_EXHAUSTED,
    )
    assert len(trace.steps) <= 1


def test_six_agent_cycle_never_settles():
    inst = BestResponseCycle().build()
    trace = run_dynamics(
        inst.space, inst.initial, Scripted(inst.schedule), max_steps=12
    )
    assert trace.status is DynamicsStatus.CYCLE_DETECTED
    assert trace.first_repeat == 0
    moved = trace.moves
    assert [s.agent for s in moved] == list(inst.schedule)
    # strictly alternating single-edge build / drop, three of each
    assert [s.new_size - s.old_size for s in moved] == [1, -1, 1, -1, 1, -1]
    assert trace.final == inst.initial
    assert profile_fingerprint(trace.final) == trace.initial_fingerprint
    # each move flips exactly the designed edge: replay the toggles by hand
    # and match the engine's fingerprints step by step
    flips = dict(zip(inst.movers, (v for _, v in inst.toggles)))
    profile = inst.initial
    for step in moved:
        agent = step.agent
        cur = profile.strategies[agent]
        profile = profile.replace(agent, cur ^ {flips[agent]})
        assert profile_fingerprint(profile) == step.fingerprint
    assert profile == inst.initial


def test_cycle_replays_identically():
    inst = BestResponseCycle().build()
    runs = [
        run_dynamics(inst.space, inst.initial, Scripted(inst.schedule),
                     max_steps=12)
        for _ in range(2)
    ]
    a, b = runs
    assert [s.fingerprint for s in a.steps] == [
        s.fingerprint for s in b.steps
    ]
    assert a.status is b.status is DynamicsStatus.CYCLE_DETECTED


def test_directed_optimum_is_fixed_point_of_dynamics():
    sp = EuclideanSpace(((0, 0), (3, 1), (7, 2), (2, 8)), dimension=2)
    opt = construct_directed_optimum(sp)
    trace = run_dynamics(sp, opt.profile, RoundRobin(), max_steps=20)
    assert trace.status is DynamicsStatus.CONVERGED
    assert trace.final == opt.profile
    assert all(s.action == "stay" for s in trace.steps)


def test_fingerprint_is_stable_and_injective_on_small_profiles():
    seen = {}
    for bits in range(2 ** 4):
        strategies = (
            frozenset(v for v in (1, 2) if bits >> v & 1),
            frozenset(v for v in (0, 2) if bits >> (v + 1) & 1),
            frozenset(),
        )
        p = StrategyProfile(Variant.DIRECTED, strategies)
        fp = profile_fingerprint(p)
        assert profile_fingerprint(p) == fp
        if fp in seen:
            assert seen[fp] == p
        seen[fp] = p
    assert len(seen) > 1
