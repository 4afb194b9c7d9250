"""Exact finite metric spaces: integer-grid Euclidean point sets and rational
distance matrices.

Every distance comparison in this package is exact.  Euclidean point sets keep
integer coordinates (a decimal `scale` records how raw inputs were quantised)
and compare squared distances as Python ints; explicit metrics store pairwise
distances as `fractions.Fraction`.  No float ever enters a predicate.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


class Ordering(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class MetricError(Exception):
    """Base class for metric-layer failures."""


class MetricFormatError(MetricError):
    """Malformed input: wrong shapes, floats, duplicate points."""


class MetricAxiomError(MetricError):
    """A distance matrix violates the metric axioms.

    Carries the full validation report so callers can show every violation,
    not just the first one found.
    """

    def __init__(self, report: "ValidationReport"):
        self.report = report
        first = report.violations[0]
        extra = len(report.violations) - 1
        msg = first.message if extra == 0 else f"{first.message} (+{extra} more)"
        super().__init__(msg)


@dataclass(frozen=True)
class Violation:
    axiom: str  # "symmetry" | "identity" | "positivity" | "triangle"
    indices: tuple[int, ...]
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def _as_fraction(value: object) -> Fraction:
    """Parse an exact rational.  Accepts int, Fraction, 'p/q' or decimal strings.

    Floats are rejected outright: a float that reaches the metric layer means
    some upstream code skipped quantisation, and silently accepting it would
    poison every comparison downstream.
    """
    if isinstance(value, bool):
        raise MetricFormatError(f"not a rational value: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise MetricFormatError(
            f"float {value!r} rejected; pass an int, Fraction, or 'p/q' string"
        )
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise MetricFormatError(f"cannot parse rational from {value!r}") from exc
    raise MetricFormatError(f"not a rational value: {value!r}")


def _as_int(value: object, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise MetricFormatError(f"{what} must be an int, got {value!r}")
    return value


class EuclideanSpace:
    """n labelled points on the integer grid in dimension D.

    `scale` is the decimal factor applied when the points were quantised
    (coordinates = scale * original).  It never affects comparisons — those
    are on integer squared distances — it only matters when rendering or
    exporting back to human units.
    """

    __slots__ = ("dimension", "scale", "points", "labels", "_rank_cache", "_cover_cache")

    kind = "euclidean"

    def __init__(
        self,
        points: Sequence[Sequence[int]],
        dimension: int | None = None,
        scale: int = 1,
        labels: Sequence[str] | None = None,
    ):
        pts = [tuple(_as_int(c, "coordinate") for c in p) for p in points]
        if not pts:
            raise MetricFormatError("empty point set")
        dim = dimension if dimension is not None else len(pts[0])
        if dim < 1:
            raise MetricFormatError(f"dimension must be >= 1, got {dim}")
        for i, p in enumerate(pts):
            if len(p) != dim:
                raise MetricFormatError(
                    f"point {i} has {len(p)} coordinates, expected {dim}"
                )
        seen: dict[tuple[int, ...], int] = {}
        for i, p in enumerate(pts):
            if p in seen:
                raise MetricFormatError(
                    f"duplicate point: index {i} repeats index {seen[p]} at {p}"
                )
            seen[p] = i
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != len(pts):
                raise MetricFormatError(
                    f"{len(labels)} labels for {len(pts)} points"
                )
        self.dimension = dim
        self.scale = _as_int(scale, "scale")
        if self.scale < 1:
            raise MetricFormatError(f"scale must be >= 1, got {scale}")
        self.points = tuple(pts)
        self.labels = labels
        self._rank_cache: list[list[int]] | None = None
        self._cover_cache: list[list[int]] | None = None

    @property
    def n(self) -> int:
        return len(self.points)

    def distance_squared(self, u: int, v: int) -> int:
        pu, pv = self.points[u], self.points[v]
        return sum((a - b) * (a - b) for a, b in zip(pu, pv))

    def dist_key(self, u: int, v: int) -> int:
        """Exact comparison key: monotone in true distance."""
        return self.distance_squared(u, v)

    def compare(self, pair1: tuple[int, int], pair2: tuple[int, int]) -> Ordering:
        a = self.distance_squared(*pair1)
        b = self.distance_squared(*pair2)
        return Ordering.LESS if a < b else Ordering.GREATER if a > b else Ordering.EQUAL

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EuclideanSpace):
            return NotImplemented
        return (
            self.points == other.points
            and self.dimension == other.dimension
            and self.scale == other.scale
            and self.labels == other.labels
        )

    def __hash__(self) -> int:
        return hash((self.points, self.dimension, self.scale, self.labels))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"EuclideanSpace(n={self.n}, dimension={self.dimension}, scale={self.scale})"


class GeneralMetric:
    """Explicit n x n rational distance matrix.

    Validated against the metric axioms on construction unless the caller
    opts out (`validate=False`, recorded in `.validated` so downstream
    reports can flag results built on unchecked inputs).
    """

    __slots__ = ("dist", "validated", "labels", "_rank_cache", "_cover_cache")

    kind = "general"

    def __init__(
        self,
        dist: Sequence[Sequence[object]],
        validate: bool = True,
        labels: Sequence[str] | None = None,
    ):
        matrix = tuple(
            tuple(_as_fraction(x) for x in row) for row in dist
        )
        n = len(matrix)
        if n == 0:
            raise MetricFormatError("empty distance matrix")
        for i, row in enumerate(matrix):
            if len(row) != n:
                raise MetricFormatError(
                    f"row {i} has {len(row)} entries, expected {n}"
                )
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise MetricFormatError(f"{len(labels)} labels for {n} points")
        self.dist = matrix
        self.labels = labels
        self._rank_cache: list[list[int]] | None = None
        self._cover_cache: list[list[int]] | None = None
        if validate:
            report = validate_metric(self)
            if not report.ok:
                raise MetricAxiomError(report)
            self.validated = True
        else:
            logger.warning("metric axioms not validated (n=%d)", n)
            self.validated = False

    @property
    def n(self) -> int:
        return len(self.dist)

    def dist_key(self, u: int, v: int) -> Fraction:
        return self.dist[u][v]

    def compare(self, pair1: tuple[int, int], pair2: tuple[int, int]) -> Ordering:
        a = self.dist[pair1[0]][pair1[1]]
        b = self.dist[pair2[0]][pair2[1]]
        return Ordering.LESS if a < b else Ordering.GREATER if a > b else Ordering.EQUAL

    def __eq__(self, other: object) -> bool:
        # validation is provenance, not identity: the same matrix loaded
        # with and without validation is still the same metric
        if not isinstance(other, GeneralMetric):
            return NotImplemented
        return self.dist == other.dist and self.labels == other.labels

    def __hash__(self) -> int:
        return hash((self.dist, self.labels))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"GeneralMetric(n={self.n}, validated={self.validated})"


Space = Union[EuclideanSpace, GeneralMetric]


def validate_metric(matrix: GeneralMetric | Sequence[Sequence[object]]) -> ValidationReport:
    """Check symmetry, identity of indiscernibles, positivity, and every
    ordered triangle.  O(n^3); fine for the instance sizes this package
    targets, and an exhaustive report beats an early exit when debugging a
    hand-written matrix.
    """
    if isinstance(matrix, GeneralMetric):
        dist = matrix.dist
    else:
        dist = tuple(tuple(_as_fraction(x) for x in row) for row in matrix)
        n0 = len(dist)
        for i, row in enumerate(dist):
            if len(row) != n0:
                raise MetricFormatError(f"row {i} has {len(row)} entries, expected {n0}")
    n = len(dist)
    out: list[Violation] = []
    for i in range(n):
        if dist[i][i] != 0:
            out.append(
                Violation("identity", (i,), f"d({i},{i}) = {dist[i][i]} != 0")
            )
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i][j] != dist[j][i]:
                out.append(
                    Violation(
                        "symmetry",
                        (i, j),
                        f"d({i},{j}) = {dist[i][j]} but d({j},{i}) = {dist[j][i]}",
                    )
                )
            if dist[i][j] <= 0:
                out.append(
                    Violation(
                        "positivity",
                        (i, j),
                        f"d({i},{j}) = {dist[i][j]} not positive for distinct points",
                    )
                )
    for i, j, k in itertools.permutations(range(n), 3):
        if i < j:  # d(i,j) symmetric in target; cut duplicate reports
            if dist[i][j] > dist[i][k] + dist[k][j]:
                out.append(
                    Violation(
                        "triangle",
                        (i, k, j),
                        f"d({i},{j}) = {dist[i][j]} > d({i},{k}) + d({k},{j})"
                        f" = {dist[i][k] + dist[k][j]}",
                    )
                )
    return ValidationReport(tuple(out))


def compare_distances(
    space: Space, pair1: tuple[int, int], pair2: tuple[int, int]
) -> Ordering:
    return space.compare(pair1, pair2)


def distance_squared(space: Space, u: int, v: int) -> int:
    if isinstance(space, EuclideanSpace):
        return space.distance_squared(u, v)
    raise MetricError("distance_squared is Euclidean-only; general metrics have no coordinates")


def distance_rank_table(space: Space) -> list[list[int]]:
    """rank[t][v] = dense rank of d(v, t) among all points, per target t.

    Equal distances share a rank, so ``rank[t][a] < rank[t][b]`` iff point a
    is strictly closer to t than point b.  Cached on the space: this table
    is the workhorse behind every greedy-reachability computation.
    """
    cached = space._rank_cache
    if cached is not None:
        return cached
    n = space.n
    table: list[list[int]] = []
    for t in range(n):
        keyed = sorted(range(n), key=lambda v: (space.dist_key(v, t), v))
        ranks = [0] * n
        r = -1
        prev = None
        for v in keyed:
            k = space.dist_key(v, t)
            if k != prev:
                r += 1
                prev = k
            ranks[v] = r
        table.append(ranks)
    space._rank_cache = table
    return table


def scaled_points(
    raw: Sequence[Sequence[object]], scale: int
) -> list[tuple[int, ...]]:
    """Quantise rational coordinates onto the integer grid at `scale`.

    Every scaled coordinate must land exactly on an integer; this is a
    format check, not a rounding step.  Rounding policy belongs to instance
    generators, which decide scale before any geometry exists.
    """
    out: list[tuple[int, ...]] = []
    for i, p in enumerate(raw):
        q: list[int] = []
        for c in p:
            f = _as_fraction(c) * scale
            if f.denominator != 1:
                raise MetricFormatError(
                    f"coordinate {c!r} of point {i} is not an integer at scale {scale}"
                )
            q.append(int(f))
        out.append(tuple(q))
    return out


def euclidean_distance_float(space: EuclideanSpace, u: int, v: int) -> float:
    """Float distance in *original* units — display only, never comparisons."""
    return math.sqrt(space.distance_squared(u, v)) / space.scale
