"""Exact computational geometry over integer grids.

Provides the structures the construction algorithms lean on: orientation and
in-circle predicates (integer determinants, no epsilons), a deterministic
Delaunay triangulation for 2D point sets, nearest-neighbour graphs, and two
one-hop cover constructions (distance peeling, 60-degree cones) whose sizes
are bounded by the kissing number of the ambient dimension.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

from .metric import EuclideanSpace, Ordering, Space
from .network import undirected_edge

logger = logging.getLogger(__name__)

# Kissing numbers for the dimensions where the exact value is known and small
# enough to matter here.  In dimension D, no point can have more than K(D)
# neighbours that are pairwise at angular distance >= 60 degrees, which is
# what bounds the cover constructions below.
KISSING_NUMBERS: dict[int, int] = {1: 2, 2: 6, 3: 12, 4: 24}


def kissing_number(dimension: int) -> int | None:
    return KISSING_NUMBERS.get(dimension)


class GeometryError(Exception):
    pass


class DegenerateInputError(GeometryError):
    """Input admits no triangulation (fewer than 3 points, or all collinear)."""


def orient2d(pa: Sequence[int], pb: Sequence[int], pc: Sequence[int]) -> int:
    """Signed double area of triangle (pa, pb, pc): positive iff ccw."""
    return (pb[0] - pa[0]) * (pc[1] - pa[1]) - (pb[1] - pa[1]) * (pc[0] - pa[0])


def incircle(
    pa: Sequence[int], pb: Sequence[int], pc: Sequence[int], pd: Sequence[int]
) -> int:
    """Positive iff pd lies strictly inside the circle through ccw (pa,pb,pc).

    Integer 3x3 determinant of the lifted points; zero means cocircular.
    """
    adx, ady = pa[0] - pd[0], pa[1] - pd[1]
    bdx, bdy = pb[0] - pd[0], pb[1] - pd[1]
    cdx, cdy = pc[0] - pd[0], pc[1] - pd[1]
    ad = adx * adx + ady * ady
    bd = bdx * bdx + bdy * bdy
    cd = cdx * cdx + cdy * cdy
    return (
        adx * (bdy * cd - cdy * bd)
        - ady * (bdx * cd - cdx * bd)
        + ad * (bdx * cdy - cdx * bdy)
    )


def _require_plane(space: Space, what: str) -> EuclideanSpace:
    if not isinstance(space, EuclideanSpace) or space.dimension != 2:
        raise GeometryError(f"{what} requires a 2-dimensional Euclidean space")
    return space


class _HalfEdgeMap:
    """Triangulation as a map (a, b) -> c for each ccw triangle (a, b, c)."""

    def __init__(self) -> None:
        self.he: dict[tuple[int, int], int] = {}

    def add(self, a: int, b: int, c: int) -> None:
        self.he[(a, b)] = c
        self.he[(b, c)] = a
        self.he[(c, a)] = b

    def remove(self, a: int, b: int, c: int) -> None:
        del self.he[(a, b)]
        del self.he[(b, c)]
        del self.he[(c, a)]

    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(undirected_edge(a, b) for (a, b) in self.he)


def delaunay_2d(space: Space) -> frozenset[tuple[int, int]]:
    """Delaunay edges of a 2D integer point set, as (i, j) pairs with i < j.

    Lexicographic incremental scan builds some triangulation (collinear
    prefixes handled by fanning, hull updates use strictly-visible edges
    only), then Lawson flips with the exact in-circle predicate restore the
    Delaunay property.  Flips fire only on strict violations, so cocircular
    quadruples settle in whatever diagonal the scan produced — a valid
    Delaunay triangulation, deterministically chosen.

    Raises DegenerateInputError when no triangulation exists (n < 3 or all
    points collinear).
    """
    sp = _require_plane(space, "Delaunay triangulation")
    pts = sp.points
    n = len(pts)
    if n < 3:
        raise DegenerateInputError(f"need at least 3 points, got {n}")
    order = sorted(range(n), key=lambda i: pts[i])

    k = 2
    while k < n and orient2d(pts[order[0]], pts[order[1]], pts[order[k]]) == 0:
        k += 1
    if k == n:
        raise DegenerateInputError("all points collinear")

    tri = _HalfEdgeMap()
    apex = order[k]
    s = orient2d(pts[order[0]], pts[order[1]], pts[apex])
    chain = order[:k]
    for a, b in zip(chain, chain[1:]):
        if s > 0:
            tri.add(a, b, apex)
        else:
            tri.add(b, a, apex)
    if s > 0:
        hull = chain + [apex]
    else:
        hull = chain[::-1] + [apex]

    for idx in range(k + 1, n):
        p = order[idx]
        h = len(hull)
        vis = [
            orient2d(pts[hull[i]], pts[hull[(i + 1) % h]], pts[p]) < 0
            for i in range(h)
        ]
        # rotate so the visible run is contiguous from position `start`
        start = next(i for i in range(h) if vis[i] and not vis[(i - 1) % h])
        run = 0
        while vis[(start + run) % h]:
            run += 1
        for j in range(run):
            a = hull[(start + j) % h]
            b = hull[(start + j + 1) % h]
            tri.add(b, a, p)
        keep_from = (start + run) % h
        rotated = [hull[(keep_from + i) % h] for i in range(h)]
        # rotated[0] .. rotated[h - run] survive; the chain interior is gone
        hull = rotated[: h - run + 1] + [p]

    _lawson_flips(tri, pts)
    return tri.edges()


def _lawson_flips(tri: _HalfEdgeMap, pts: Sequence[Sequence[int]]) -> None:
    stack = sorted({undirected_edge(a, b) for (a, b) in tri.he}, reverse=True)
    pending = set(stack)
    budget = 8 * len(pts) * len(pts) + 64
    while stack:
        u, v = stack.pop()
        pending.discard((u, v))
        w = tri.he.get((u, v))
        x = tri.he.get((v, u))
        if w is None or x is None:
            continue
        if incircle(pts[u], pts[v], pts[w], pts[x]) <= 0:
            continue
        budget -= 1
        if budget < 0:  # pragma: no cover - would indicate a predicate bug
            raise GeometryError("flip budget exhausted; non-terminating flip sequence")
        tri.remove(u, v, w)
        tri.remove(v, u, x)
        tri.add(u, x, w)
        tri.add(x, v, w)
        for e in ((u, x), (x, v), (v, w), (w, u)):
            key = undirected_edge(*e)
            if key not in pending:
                pending.add(key)
                stack.append(key)


def nearest_neighbor(space: Space, u: int) -> int:
    """Index of the closest other point (ties to the lowest index)."""
    return min(
        (v for v in range(space.n) if v != u),
        key=lambda v: (space.dist_key(u, v), v),
    )


def nearest_neighbor_sets(space: Space) -> list[frozenset[int]]:
    """Tie-aware nearest-neighbour sets: all points at minimum distance."""
    if space.n < 2:
        raise GeometryError("nearest neighbours need at least 2 points")
    out = []
    for u in range(space.n):
        best = min(space.dist_key(u, v) for v in range(space.n) if v != u)
        out.append(
            frozenset(
                v for v in range(space.n) if v != u and space.dist_key(u, v) == best
            )
        )
    return out


@dataclass(frozen=True)
class NngGraph:
    """Nearest-neighbour graph: arcs u -> each minimum-distance point, the
    derived undirected edge set, and components of the undirected view.

    Every undirected NNG edge is present in every navigable network: a
    nearest neighbour of u has no strictly-closer-to-u hop except u itself,
    so it must link to u directly.  Components therefore never have fewer
    than two nodes, and they partition the whole point set.
    """

    n: int
    arcs: frozenset[tuple[int, int]]
    undirected_edges: frozenset[tuple[int, int]]
    components: tuple[frozenset[int], ...]

    def component_of(self, u: int) -> frozenset[int]:
        for comp in self.components:
            if u in comp:
                return comp
        raise GeometryError(f"point {u} not in any component")

    def neighbors(self, u: int) -> frozenset[int]:
        return frozenset(
            b if a == u else a for a, b in self.undirected_edges if u in (a, b)
        )


def build_nng(space: Space) -> NngGraph:
    sets = nearest_neighbor_sets(space)
    arcs = frozenset((u, v) for u, nset in enumerate(sets) for v in nset)
    und = frozenset(undirected_edge(u, v) for u, v in arcs)
    adj: list[list[int]] = [[] for _ in range(space.n)]
    for a, b in und:
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * space.n
    comps: list[frozenset[int]] = []
    for start in range(space.n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        comps.append(frozenset(comp))
    comps.sort(key=min)
    return NngGraph(
        n=space.n, arcs=arcs, undirected_edges=und, components=tuple(comps)
    )


def nng_edges(space: Space) -> frozenset[tuple[int, int]]:
    """Undirected nearest-neighbour edges (tie-aware)."""
    return build_nng(space).undirected_edges


def peeling_cover(
    space: Space, u: int, targets: Iterable[int] | None = None
) -> frozenset[int]:
    """One-hop cover of the targets by peeling: repeatedly link u to the
    nearest still-uncovered point v, which covers every w with
    d(v, w) < d(u, w) (in particular itself).

    Any two picks end up at angular distance >= 60 degrees from u — the
    second pick was not covered by the first, and is no closer — so in
    Euclidean dimension D the pick count never exceeds KISSING_NUMBERS[D].
    Works over general metrics too, just without that bound.
    """
    uncovered = set(range(space.n) if targets is None else targets)
    uncovered.discard(u)
    chosen: set[int] = set()
    while uncovered:
        v = min(uncovered, key=lambda w: (space.dist_key(u, w), w))
        chosen.add(v)
        uncovered = {
            w for w in uncovered if space.compare((v, w), (u, w)) is not Ordering.LESS
        }
    return frozenset(chosen)


# Strict 60-degree sectors around the origin, in relative coordinates.  The
# boundary case y^2 == 3 x^2 has no nonzero integer solutions (3 is not a
# rational square), so each nonzero (x, y) lands in exactly one sector.
_SECTOR_TESTS = (
    lambda x, y: x > 0 and y >= 0 and y * y < 3 * x * x,
    lambda x, y: y > 0 and y * y > 3 * x * x,
    lambda x, y: x < 0 and y > 0 and y * y < 3 * x * x,
    lambda x, y: x < 0 and y <= 0 and y * y < 3 * x * x,
    lambda x, y: y < 0 and y * y > 3 * x * x,
    lambda x, y: x > 0 and y < 0 and y * y < 3 * x * x,
)


def sector_2d(dx: int, dy: int) -> int:
    """Which of the six 60-degree sectors contains nonzero vector (dx, dy)."""
    if dx == 0 and dy == 0:
        raise GeometryError("zero vector has no sector")
    for i, test in enumerate(_SECTOR_TESTS):
        if test(dx, dy):
            return i
    raise AssertionError(f"sector tests not exhaustive at ({dx}, {dy})")


def cone_cover_2d(
    space: Space, u: int, targets: Iterable[int] | None = None
) -> frozenset[int]:
    """One-hop cover of the targets by 60-degree cones: the nearest point in
    each nonempty sector around u covers that whole sector (two points less
    than 60 degrees apart as seen from u: the nearer is strictly closer to
    the farther than u is).  At most six picks in the plane; a geometric
    cross-check for `peeling_cover`.
    """
    sp = _require_plane(space, "cone cover")
    pu = sp.points[u]
    best: dict[int, int] = {}
    pool = range(sp.n) if targets is None else targets
    for v in sorted(pool):
        if v == u:
            continue
        pv = sp.points[v]
        sec = sector_2d(pv[0] - pu[0], pv[1] - pu[1])
        cur = best.get(sec)
        if cur is None or sp.distance_squared(u, v) < sp.distance_squared(u, cur):
            best[sec] = v
    return frozenset(best.values())
