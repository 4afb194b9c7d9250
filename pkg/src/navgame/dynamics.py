"""Best-response dynamics: activate one agent at a time, apply its exact
best response when strictly improving, and watch for convergence or a
revisited profile.

Convergence bookkeeping uses a pending set: an agent leaves it when an
activation finds no strict improvement and re-enters whenever any other
agent moves.  An empty pending set is exactly "a full pass changes
nothing", for every schedule.  Cycle detection hashes canonicalized
profiles but always confirms by full equality before declaring a repeat.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Union

from .covers import SearchBudget, SolveMode, best_response
from .metric import Space
from .network import GameError, StrategyProfile


@dataclass(frozen=True)
class RoundRobin:
    """Cycle through agents 0..n-1, skipping ones already known stable."""

    def label(self) -> str:
        return "round-robin"


@dataclass(frozen=True)
class RandomSeeded:
    """Uniformly pick the next agent among the pending ones (seeded)."""

    seed: int = 0

    def label(self) -> str:
        return f"random:{self.seed}"


@dataclass(frozen=True)
class Scripted:
    """Activate exactly the given agents in order, pending or not.

    Running out of script counts as BudgetExhausted unless the pending set
    is empty by then (the script happened to prove convergence).
    """

    order: tuple[int, ...]

    def label(self) -> str:
        return "scripted:" + ",".join(str(a) for a in self.order)


Schedule = Union[RoundRobin, RandomSeeded, Scripted]


def parse_schedule(label: str) -> Schedule:
    """Inverse of Schedule.label(): "round-robin", "random:7",
    "scripted:0,2,1"."""
    if label == "round-robin":
        return RoundRobin()
    kind, sep, arg = label.partition(":")
    try:
        if sep and kind == "random":
            return RandomSeeded(int(arg))
        if sep and kind == "scripted":
            order = tuple(int(a) for a in arg.split(",")) if arg else ()
            return Scripted(order)
    except ValueError as exc:
        raise GameError(f"bad schedule argument in {label!r}: {exc}") from exc
    raise GameError(f"unknown schedule {label!r}")


class DynamicsStatus(str, Enum):
    CONVERGED = "converged"
    CYCLE_DETECTED = "cycle-detected"
    BUDGET_EXHAUSTED = "budget-exhausted"


def profile_fingerprint(profile: StrategyProfile) -> str:
    """Order-independent digest of a profile (strategies are sets)."""
    payload = {
        "variant": profile.variant.value,
        "strategies": [sorted(s) for s in profile.strategies],
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha1(blob.encode("ascii")).hexdigest()


@dataclass(frozen=True)
class DynamicsStep:
    """One activation.  Costs are edge counts, None when disconnected."""

    step: int
    agent: int
    action: str  # "move" or "stay"
    old_size: int
    new_size: int
    old_cost: int | None
    new_cost: int | None
    fingerprint: str  # of the profile after this activation
    mode: SolveMode


@dataclass(frozen=True)
class DynamicsTrace:
    schedule: str
    variant: str
    initial: StrategyProfile
    final: StrategyProfile
    initial_fingerprint: str
    steps: tuple[DynamicsStep, ...]
    status: DynamicsStatus
    first_repeat: int | None  # step index where the repeated profile first arose
    certified: bool  # every best response along the way was exact

    @property
    def moves(self) -> tuple[DynamicsStep, ...]:
        return tuple(s for s in self.steps if s.action == "move")


def _cost_or_none(cost: float) -> int | None:
    return None if math.isinf(cost) else int(cost)


def run_dynamics(
    space: Space,
    initial: StrategyProfile,
    schedule: Schedule,
    max_steps: int = 10_000,
    budget: SearchBudget | None = None,
) -> DynamicsTrace:
    """Run strict-improvement best-response dynamics until the pending set
    empties (Converged), a profile repeats after a move (CycleDetected, with
    the step at which it was first seen), or `max_steps` activations pass
    (BudgetExhausted).  Indifferent alternatives never cause a switch.
    """
    n = initial.n
    if space.n != n:
        raise GameError(f"profile has {n} agents but space has {space.n} points")
    if max_steps < 0:
        raise GameError("max_steps must be non-negative")

    profile = initial
    pending = set(range(n))
    # Keyed by the exact strategy tuple: lookup is hash-then-equality, so a
    # hash collision can never fake a cycle.
    seen: dict[tuple[frozenset[int], ...], int] = {initial.strategies: 0}
    init_fp = profile_fingerprint(initial)
    steps: list[DynamicsStep] = []
    certified = True

    rng = random.Random(schedule.seed) if isinstance(schedule, RandomSeeded) else None
    script = iter(schedule.order) if isinstance(schedule, Scripted) else None
    rr_next = 0

    def next_agent() -> int | None:
        nonlocal rr_next
        if script is not None:
            agent = next(script, None)
            if agent is None:
                return None
            if not 0 <= agent < n:
                raise GameError(f"scripted agent {agent} out of range")
            return agent
        if not pending:
            return None
        if rng is not None:
            return rng.choice(sorted(pending))
        while rr_next not in pending:
            rr_next = (rr_next + 1) % n
        agent = rr_next
        rr_next = (rr_next + 1) % n
        return agent

    status = DynamicsStatus.BUDGET_EXHAUSTED
    first_repeat: int | None = None

    for step in range(1, max_steps + 1):
        if script is None and not pending:
            status = DynamicsStatus.CONVERGED
            break
        agent = next_agent()
        if agent is None:
            status = (
                DynamicsStatus.CONVERGED if not pending else DynamicsStatus.BUDGET_EXHAUSTED
            )
            break
        old = profile.strategies[agent]
        result = best_response(space, profile, agent, budget=budget)
        certified = certified and result.exact
        if result.improves:
            profile = profile.replace(agent, result.strategy)
            pending.update(range(n))
            pending.discard(agent)
            fp = profile_fingerprint(profile)
            steps.append(
                DynamicsStep(
                    step=step,
                    agent=agent,
                    action="move",
                    old_size=len(old),
                    new_size=len(result.strategy),
                    old_cost=_cost_or_none(result.current_cost),
                    new_cost=result.cost,
                    fingerprint=fp,
                    mode=result.mode,
                )
            )
            if profile.strategies in seen:
                status = DynamicsStatus.CYCLE_DETECTED
                first_repeat = seen[profile.strategies]
                break
            seen[profile.strategies] = step
        else:
            pending.discard(agent)
            steps.append(
                DynamicsStep(
                    step=step,
                    agent=agent,
                    action="stay",
                    old_size=len(old),
                    new_size=len(old),
                    old_cost=_cost_or_none(result.current_cost),
                    new_cost=_cost_or_none(result.current_cost),
                    fingerprint=profile_fingerprint(profile),
                    mode=result.mode,
                )
            )
    else:
        # Loop ran out without break: either it never iterated (max_steps=0)
        # or every activation was consumed.  A drained script with nothing
        # pending still converged.
        if script is not None:
            status = (
                DynamicsStatus.CONVERGED
                if next(script, None) is None and not pending
                else DynamicsStatus.BUDGET_EXHAUSTED
            )
        elif not pending:
            status = DynamicsStatus.CONVERGED

    return DynamicsTrace(
        schedule=schedule.label(),
        variant=initial.variant.value,
        initial=initial,
        final=profile,
        initial_fingerprint=init_fp,
        steps=tuple(steps),
        status=status,
        first_repeat=first_repeat,
        certified=certified,
    )
