"""Reproducible instance generators.

Every generator is a frozen dataclass whose ``build()`` is a pure function
of its fields — identical configs give bit-identical instances.  Random
kinds draw from ``random.Random(seed)`` only.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

from .metric import EuclideanSpace, GeneralMetric
from .network import GameError, StrategyProfile, Variant


# ---------------------------------------------------------------------------
# random point clouds


def _sample_distinct(
    rng: random.Random, n: int, dimension: int, draw
) -> tuple[tuple[int, ...], ...]:
    points: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    guard = 0
    while len(points) < n:
        p = tuple(draw(rng) for _ in range(dimension))
        if p in seen:
            guard += 1
            if guard > 1000 * n:
                raise GameError("point sampling keeps colliding; widen the box")
            continue
        seen.add(p)
        points.append(p)
    return tuple(points)


@dataclass(frozen=True)
class UniformSquare:
    """Integer points drawn uniformly from [0, side]^dimension."""

    n: int
    seed: int = 0
    dimension: int = 2
    side: int = 1_000_000
    scale: int = 1

    def build(self) -> EuclideanSpace:
        if self.n < 2 or self.dimension < 1 or self.side < 1:
            raise GameError("need n >= 2, dimension >= 1, side >= 1")
        rng = random.Random(self.seed)
        pts = _sample_distinct(
            rng, self.n, self.dimension, lambda r: r.randint(0, self.side)
        )
        return EuclideanSpace(pts, dimension=self.dimension, scale=self.scale)


@dataclass(frozen=True)
class Clustered:
    """Clumped points: cluster centres in a large box, members nearby."""

    n: int
    clusters: int = 3
    seed: int = 0
    dimension: int = 2
    box: int = 1_000_000
    spread: int = 2_000
    scale: int = 1

    def build(self) -> EuclideanSpace:
        if self.n < 2 or self.clusters < 1:
            raise GameError("need n >= 2 and at least one cluster")
        rng = random.Random(self.seed)
        centres = [
            tuple(rng.randint(0, self.box) for _ in range(self.dimension))
            for _ in range(self.clusters)
        ]
        points: list[tuple[int, ...]] = []
        seen: set[tuple[int, ...]] = set()
        guard = 0
        while len(points) < self.n:
            c = centres[len(points) % self.clusters]
            p = tuple(
                x + rng.randint(-self.spread, self.spread) for x in c
            )
            if p in seen:
                guard += 1
                if guard > 1000 * self.n:
                    raise GameError("point sampling keeps colliding; widen spread")
                continue
            seen.add(p)
            points.append(p)
        return EuclideanSpace(
            tuple(points), dimension=self.dimension, scale=self.scale
        )


@dataclass(frozen=True)
class Line:
    """Explicit 1D positions."""

    positions: tuple[int, ...]
    scale: int = 1

    def build(self) -> EuclideanSpace:
        return EuclideanSpace(
            tuple((x,) for x in self.positions), dimension=1, scale=self.scale
        )


@dataclass(frozen=True)
class Grid:
    """Integer lattice, row-major point order.  Deliberately tie-heavy."""

    rows: int
    cols: int
    spacing: int = 1

    def build(self) -> EuclideanSpace:
        if self.rows < 1 or self.cols < 1 or self.spacing < 1:
            raise GameError("need rows, cols, spacing >= 1")
        pts = tuple(
            (r * self.spacing, c * self.spacing)
            for r in range(self.rows)
            for c in range(self.cols)
        )
        if len(pts) < 2:
            raise GameError("need at least two grid points")
        return EuclideanSpace(pts, dimension=2)


# ---------------------------------------------------------------------------
# hardness-flavoured gadget


@dataclass(frozen=True)
class GadgetInstance:
    space: EuclideanSpace
    profile: StrategyProfile  # background strategies; the probe agent owns none
    agent: int  # whose best response encodes the cover problem
    set_nodes: tuple[int, ...]
    guard_nodes: tuple[int, ...]
    element_nodes: tuple[int, ...]


@dataclass(frozen=True)
class SetCoverGadget:
    """Line instance whose probe agent's best response solves a covering
    problem.

    Node 0 is the probe agent u at position 0.  Each candidate set i gets a
    hub node at 2m+i and a guard node at 3m+i; element j sits at 4m+j.
    Hubs link to their elements, guards link to their hubs.  Directed: u
    must buy every guard (nothing else reaches them) plus hubs forming a
    minimum cover, so its best response costs m + (minimum cover size).
    Undirected: each guard additionally buys an edge to u, which hands u
    the guards and hubs for free; the best response costs exactly the
    minimum cover size.
    """

    sets: tuple[frozenset[int], ...]
    universe: int
    variant: str = "directed"

    def build(self) -> GadgetInstance:
        m = len(self.sets)
        n = self.universe
        if m < 1 or n < 1:
            raise GameError("need at least one set and one element")
        covered = frozenset().union(*self.sets)
        if not all(0 <= j < n for j in covered):
            raise GameError(f"set elements must lie in 0..{n - 1}")
        if covered != frozenset(range(n)):
            missing = sorted(set(range(n)) - covered)
            raise GameError(f"elements {missing} are not covered by any set")
        variant = Variant(self.variant)

        positions = [0]
        labels = ["u"]
        for i in range(m):
            positions.append(2 * m + i)
            labels.append(f"Q{i + 1}")
        for i in range(m):
            positions.append(3 * m + i)
            labels.append(f"Q'{i + 1}")
        for j in range(n):
            positions.append(4 * m + j)
            labels.append(f"x{j + 1}")
        space = EuclideanSpace(
            tuple((x,) for x in positions), dimension=1, labels=tuple(labels)
        )

        hub = lambda i: 1 + i
        guard = lambda i: 1 + m + i
        element = lambda j: 1 + 2 * m + j

        strategies: list[frozenset[int]] = [frozenset()] * (1 + 2 * m + n)
        for i, members in enumerate(self.sets):
            strategies[hub(i)] = frozenset(element(j) for j in sorted(members))
            mine = {hub(i)}
            if variant is Variant.UNDIRECTED:
                mine.add(0)
            strategies[guard(i)] = frozenset(mine)
        profile = StrategyProfile(variant, tuple(strategies))
        return GadgetInstance(
            space=space,
            profile=profile,
            agent=0,
            set_nodes=tuple(hub(i) for i in range(m)),
            guard_nodes=tuple(guard(i) for i in range(m)),
            element_nodes=tuple(element(j) for j in range(n)),
        )

    def minimum_cover_size(self) -> int:
        """Exhaustive subset enumeration over the candidate sets."""
        for k in range(0, len(self.sets) + 1):
            for combo in itertools.combinations(range(len(self.sets)), k):
                if frozenset().union(
                    frozenset(), *(self.sets[i] for i in combo)
                ) == frozenset(range(self.universe)):
                    return k
        raise GameError("universe is not coverable")  # guarded in build()


# ---------------------------------------------------------------------------
# density-gap family


@dataclass(frozen=True)
class PoaFamilyInstance:
    space: EuclideanSpace
    pairs: tuple[tuple[int, int], ...]  # nearest-neighbour pairs (a_i, b_i)
    shared: StrategyProfile  # sparse profile: cross edges serve both sides
    selfish: StrategyProfile  # dense profile: every side buys its own access

    @property
    def shared_cost(self) -> int:
        return sum(len(s) for s in self.shared.strategies)

    @property
    def selfish_cost(self) -> int:
        return sum(len(s) for s in self.selfish.strategies)


@dataclass(frozen=True)
class PoaLowerBoundFamily:
    """Ring of tight two-node clusters; each cluster links to the `span`
    clusters on either side.  The shared profile buys one cross edge per
    cluster pair (4 per cluster in total for span 3); the selfish profile
    doubles every cross edge so each endpoint owns its own copy (7 per
    cluster).  Whether the two profiles are navigable / stable is checked
    experimentally, not assumed — see scripts/poa_family_experiment.py.
    """

    components: int = 8
    radius: int = 10_000_000
    pair_gap: int = 1_000
    span: int = 3
    layout: str = "tangential"  # or "radial"

    def build(self) -> PoaFamilyInstance:
        k = self.components
        if k < 2 * self.span + 1:
            raise GameError("need components >= 2*span + 1")
        if self.span < 1 or self.radius < 1 or self.pair_gap < 1:
            raise GameError("span, radius, pair_gap must be positive")
        if self.layout not in ("tangential", "radial"):
            raise GameError(f"unknown layout {self.layout!r}")

        points: list[tuple[int, int]] = []
        for i in range(k):
            theta = 2 * math.pi * i / k
            if self.layout == "tangential":
                eta = self.pair_gap / (2 * self.radius)
                for ang in (theta - eta, theta + eta):
                    points.append(
                        (
                            round(self.radius * math.cos(ang)),
                            round(self.radius * math.sin(ang)),
                        )
                    )
            else:
                for r in (self.radius, self.radius + self.pair_gap):
                    points.append(
                        (round(r * math.cos(theta)), round(r * math.sin(theta)))
                    )
        if len(set(points)) != len(points):
            raise GameError("cluster points collide; increase radius or pair_gap")
        space = EuclideanSpace(tuple(points), dimension=2)

        a = lambda i: 2 * (i % k)
        b = lambda i: 2 * (i % k) + 1
        pairs = tuple((a(i), b(i)) for i in range(k))

        # intra-pair distance must be the unique nearest neighbour on both
        # sides, otherwise the family degenerates
        for i in range(k):
            for u, partner in ((a(i), b(i)), (b(i), a(i))):
                base = space.distance_squared(u, partner)
                for v in range(2 * k):
                    if v in (u, partner):
                        continue
                    if space.distance_squared(u, v) <= base:
                        raise GameError(
                            "pair gap is not dominant; shrink pair_gap or "
                            "reduce components"
                        )

        spans = range(1, self.span + 1)
        shared = [set() for _ in range(2 * k)]
        selfish = [set() for _ in range(2 * k)]
        for i in range(k):
            shared[a(i)].add(b(i))
            selfish[a(i)].add(b(i))
            for s in spans:
                shared[b(i)].add(a(i + s))
                selfish[b(i)].add(a(i + s))  # forward copy, bought here
                selfish[b(i)].add(a(i - s))  # backward copy, bought here
        return PoaFamilyInstance(
            space=space,
            pairs=pairs,
            shared=StrategyProfile(
                Variant.UNDIRECTED, tuple(frozenset(s) for s in shared)
            ),
            selfish=StrategyProfile(
                Variant.UNDIRECTED, tuple(frozenset(s) for s in selfish)
            ),
        )


# ---------------------------------------------------------------------------
# best-response cycle witness


@dataclass(frozen=True)
class CycleInstance:
    space: GeneralMetric
    initial: StrategyProfile
    schedule: tuple[int, ...]  # activation order that loops the profile
    movers: tuple[int, int, int]  # (first builder, first dropper, third mover)
    toggles: tuple[tuple[int, int], ...]  # the three edges that come and go


class BestResponseCycle:
    """A six-agent metric where exact best responses never settle.

    Three movers take turns: each one's build reconnects its greedy
    routing, and each build makes the previous mover's bought edge
    redundant, so the follow-up best response drops it.  After six moves
    (build, drop, build, drop, build, drop) the opening profile returns
    exactly, and ``run_dynamics`` reports the repeat.

    The witness is frozen: distances were found by an exhaustive scan
    over per-target distance orderings (scripts/brc_scan_n.py), which
    also shows no 4- or 5-agent metric supports this loop under exact
    best responses — six agents is the minimum.  The three passive
    agents hold the background edges that keep everyone else connected
    throughout.

    Node roles: 2, 4, 1 are the movers (toggling edges {2,0}, {4,1},
    {1,2} respectively); 0, 3, 5 are passive.
    """

    DISTANCES = (
        (0, 52, 53, 55, 51, 61),
        (52, 0, 55, 57, 56, 60),
        (53, 55, 0, 54, 57, 58),
        (55, 57, 54, 0, 58, 62),
        (51, 56, 57, 58, 0, 59),
        (61, 60, 58, 62, 59, 0),
    )

    def build(self) -> CycleInstance:
        initial = StrategyProfile(
            Variant.UNDIRECTED,
            (
                frozenset({1, 4}),  # passive: holds {0,1} and {0,4}
                frozenset(),  # mover: buys {1,2} on its turns
                frozenset(),  # mover: buys {2,0} on its turns
                frozenset({1, 2}),  # passive: holds {3,1} and {3,2}
                frozenset({1}),  # mover: starts with its toggle {4,1} up
                frozenset({2, 4}),  # passive: holds {5,2} and {5,4}
            ),
        )
        return CycleInstance(
            space=GeneralMetric(self.DISTANCES),
            initial=initial,
            schedule=(2, 4, 1, 2, 4, 1),
            movers=(2, 4, 1),
            toggles=((2, 0), (4, 1), (1, 2)),
        )


# ---------------------------------------------------------------------------
# profile helpers


def empty_profile(n: int, variant: Variant | str) -> StrategyProfile:
    return StrategyProfile(Variant(variant), tuple(frozenset() for _ in range(n)))


def complete_profile(n: int, variant: Variant | str) -> StrategyProfile:
    """Everyone buys everything (undirected pairs go to the lower index)."""
    variant = Variant(variant)
    if variant is Variant.DIRECTED:
        return StrategyProfile(
            variant,
            tuple(
                frozenset(v for v in range(n) if v != u) for u in range(n)
            ),
        )
    return StrategyProfile(
        variant, tuple(frozenset(range(u + 1, n)) for u in range(n))
    )


def random_profile(
    n: int, variant: Variant | str, seed: int = 0, density: float = 0.3
) -> StrategyProfile:
    """Each possible arc / edge appears with probability `density`;
    undirected edges go to a random endpoint."""
    if not 0 <= density <= 1:
        raise GameError("density must be within [0, 1]")
    variant = Variant(variant)
    rng = random.Random(seed)
    strategies = [set() for _ in range(n)]
    if variant is Variant.DIRECTED:
        for u in range(n):
            for v in range(n):
                if v != u and rng.random() < density:
                    strategies[u].add(v)
    else:
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < density:
                    owner, other = (u, v) if rng.random() < 0.5 else (v, u)
                    strategies[owner].add(other)
    return StrategyProfile(variant, tuple(frozenset(s) for s in strategies))
