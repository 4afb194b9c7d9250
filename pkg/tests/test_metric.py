import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from navgame import (
    EuclideanSpace,
    GeneralMetric,
    MetricAxiomError,
    MetricError,
    MetricFormatError,
    Ordering,
    compare_distances,
    distance_squared,
    validate_metric,
)

from conftest import rand_metric, rand_points


def test_euclidean_squared_distances_are_exact_ints():
    sp = EuclideanSpace(((0, 0), (3, 4), (6, 8)))
    assert sp.distance_squared(0, 1) == 25
    assert sp.distance_squared(1, 2) == 25
    assert sp.distance_squared(0, 2) == 100
    assert sp.dist_key(0, 1) == sp.dist_key(1, 2)
    assert sp.compare((0, 1), (1, 2)) is Ordering.EQUAL
    assert sp.compare((0, 1), (0, 2)) is Ordering.LESS
    assert sp.compare((0, 2), (0, 1)) is Ordering.GREATER


def test_euclidean_rejects_duplicates_and_mixed_dimensions():
    with pytest.raises(MetricFormatError):
        EuclideanSpace(((0, 0), (0, 0)))
    with pytest.raises(MetricFormatError):
        EuclideanSpace(((0, 0), (1, 2, 3)))
    with pytest.raises(MetricFormatError):
        EuclideanSpace(((0.5, 0), (1, 2)))


def test_general_metric_parses_fractions_and_strings():
    m = GeneralMetric(
        (
            (0, "1/2", 1),
            ("1/2", 0, "0.75"),
            (1, "0.75", 0),
        )
    )
    assert m.dist_key(0, 1) == Fraction(1, 2)
    assert m.dist_key(1, 2) == Fraction(3, 4)
    assert m.dist_key(2, 1) == Fraction(3, 4)


def test_general_metric_rejects_floats():
    with pytest.raises(MetricFormatError):
        GeneralMetric(((0, 0.5), (0.5, 0)))


def test_validate_metric_reports_every_axiom():
    rep = validate_metric(((0, 1, 5), (1, 0, 1), (5, 1, 0)))
    assert [v.axiom for v in rep.violations] == ["triangle"]

    rep = validate_metric(((0, 1), (2, 0)))
    assert any(v.axiom == "symmetry" for v in rep.violations)

    rep = validate_metric(((1, 1), (1, 0)))
    assert any(v.axiom == "identity" for v in rep.violations)

    rep = validate_metric(((0, 0), (0, 0)))
    assert any(v.axiom == "positivity" for v in rep.violations)

    assert validate_metric(((0, 2, 3), (2, 0, 4), (3, 4, 0))).ok


def test_general_metric_constructor_enforces_axioms():
    with pytest.raises(MetricAxiomError) as exc:
        GeneralMetric(((0, 1, 5), (1, 0, 1), (5, 1, 0)))
    assert exc.value.report.violations
    # opting out keeps the raw values
    m = GeneralMetric(((0, 1, 5), (1, 0, 1), (5, 1, 0)), validate=False)
    assert m.dist_key(0, 2) == 5


def test_band_matrices_always_validate(rng):
    for _ in range(50):
        n = rng.randint(2, 9)
        m = rand_metric(rng, n)
        assert validate_metric(tuple(tuple(m.dist_key(i, j) for j in range(n)) for i in range(n))).ok


@settings(max_examples=120, deadline=None)
@given(st.integers(2, 7), st.integers(0, 10**9))
def test_compare_is_a_total_preorder_consistent_with_keys(n, seed):
    rng = random.Random(seed)
    sp = (
        rand_metric(rng, n)
        if seed % 2
        else EuclideanSpace(rand_points(rng, n, 2, side=40))
    )
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    for p1 in pairs[:6]:
        for p2 in pairs[:6]:
            c = sp.compare(p1, p2)
            k1, k2 = sp.dist_key(*p1), sp.dist_key(*p2)
            expect = (
                Ordering.LESS
                if k1 < k2
                else Ordering.GREATER if k1 > k2 else Ordering.EQUAL
            )
            assert c is expect
            assert compare_distances(sp, p1, p2) is c


def test_distance_squared_helper_only_for_euclidean():
    sp = EuclideanSpace(((0, 0), (1, 1)))
    assert distance_squared(sp, 0, 1) == 2
    gm = GeneralMetric(((0, 1), (1, 0)))
    with pytest.raises(MetricError):
        distance_squared(gm, 0, 1)


def test_scale_changes_identity_not_geometry():
    a = EuclideanSpace(((0, 0), (1, 0)), scale=1)
    b = EuclideanSpace(((0, 0), (1, 0)), scale=100)
    assert a.distance_squared(0, 1) == b.distance_squared(0, 1)
    assert a != b
    assert a == EuclideanSpace(((0, 0), (1, 0)))
    assert hash(a) == hash(EuclideanSpace(((0, 0), (1, 0))))
