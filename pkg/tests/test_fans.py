"""Simplicial rational fans: validation, stars, adjacency, completeness."""

from __future__ import annotations

import random

import pytest

from logaffine.errors import UnsupportedDimensionError
from logaffine.fans import Fan, adjacent_vectors, is_complete_2d, make_fan, star, validate_fan
from logaffine.rational import vector


def wedge_fan() -> Fan:
    """Rays (1,0), (1,1), (0,1) with the single 2-cone {(1,1),(0,1)}."""
    return make_fan(
        [(1, 0), (1, 1), (0, 1)],
        [[], [0], [1], [2], [1, 2]],
        labels=["a", "b", "c"],
    )


def triangle_fan() -> Fan:
    return make_fan(
        [(1, 0), (0, 1), (-1, -1)],
        [[], [0], [1], [2], [0, 1], [1, 2], [0, 2]],
        labels=["a", "b", "c"],
    )


def hexagon_fan() -> Fan:
    rays = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]
    cones = [[], [0], [1], [2], [3], [4], [5]]
    cones += [[i, (i + 1) % 6] for i in range(6)]
    return make_fan(rays, cones, labels=list("abcdef"))


# -------------------------------------------------------------- validate


def test_validate_accepts_good_fans() -> None:
    for fan in (wedge_fan(), triangle_fan(), hexagon_fan()):
        report = validate_fan(fan)
        assert report.ok, report.violations


def test_validate_accepts_empty_fan() -> None:
    report = validate_fan(make_fan([], [[]], labels=[], dim=2))
    assert report.ok


def test_validate_rejects_zero_vector() -> None:
    fan = make_fan([(0, 0)], [[], [0]], labels=["a"])
    report = validate_fan(fan)
    assert not report.ok
    assert any("zero" in v for v in report.violations)


def test_validate_rejects_duplicate_vectors() -> None:
    fan = make_fan([(1, 0), (1, 0)], [[], [0], [1]], labels=["a", "b"])
    assert not validate_fan(fan).ok


def test_validate_rejects_dependent_cone() -> None:
    fan = make_fan([(1, 0), (2, 0)], [[], [0], [1], [0, 1]], labels=["a", "b"])
    report = validate_fan(fan)
    assert not report.ok


def test_validate_rejects_missing_subset() -> None:
    fan = make_fan([(1, 0), (0, 1)], [[], [0], [0, 1]], labels=["a", "b"])
    report = validate_fan(fan)
    assert not report.ok
    assert any("closed under" in v for v in report.violations)


def test_validate_rejects_hull_violation() -> None:
    # (1,1) lies inside the positive hull of {(1,0),(0,1)}.
    fan = make_fan(
        [(1, 0), (0, 1), (1, 1)],
        [[], [0], [1], [2], [0, 1]],
        labels=["a", "b", "c"],
    )
    report = validate_fan(fan)
    assert not report.ok
    assert any("hull" in v for v in report.violations)


def test_validate_rejects_vector_on_cone_boundary() -> None:
    # A duplicate direction (2,0) sits on the closed hull of the ray (1,0).
    fan = make_fan([(1, 0), (2, 0)], [[], [0], [1]], labels=["a", "b"])
    assert not validate_fan(fan).ok


# ------------------------------------------------------------------ star


def test_star_resolves_cones_to_vector_sets() -> None:
    fan = wedge_fan()
    got = star(fan, vector(0, 1))
    expected = {
        frozenset({vector(0, 1)}),
        frozenset({vector(0, 1), vector(1, 1)}),
    }
    assert got == expected
    assert star(fan, vector(1, 0)) == {frozenset({vector(1, 0)})}


def test_star_accepts_labels_and_rejects_unknown() -> None:
    fan = wedge_fan()
    assert star(fan, "c") == star(fan, vector(0, 1))
    with pytest.raises(KeyError):
        star(fan, vector(5, 5))


def test_adjacent_vectors() -> None:
    fan = wedge_fan()
    assert adjacent_vectors(fan, vector(0, 1)) == {vector(1, 1)}
    assert adjacent_vectors(fan, vector(1, 0)) == set()
    tri = triangle_fan()
    assert adjacent_vectors(tri, vector(1, 0)) == {vector(0, 1), vector(-1, -1)}


# ---------------------------------------------------------- completeness


def test_is_complete_2d_examples() -> None:
    assert is_complete_2d(triangle_fan())
    assert is_complete_2d(hexagon_fan())
    assert not is_complete_2d(wedge_fan())
    assert not is_complete_2d(make_fan([], [[]], labels=[], dim=2))
    # Four rays but one missing quadrant cone.
    fan = make_fan(
        [(1, 0), (0, 1), (-1, 0), (0, -1)],
        [[], [0], [1], [2], [3], [0, 1], [1, 2], [2, 3]],
        labels=list("abcd"),
    )
    assert not is_complete_2d(fan)


def test_is_complete_2d_requires_dim_2() -> None:
    fan = make_fan([(1,)], [[], [0]], labels=["a"], dim=1)
    with pytest.raises(UnsupportedDimensionError):
        is_complete_2d(fan)


def test_completeness_invariant_under_relabelling() -> None:
    rng = random.Random(7)
    base = hexagon_fan()
    order = list(range(6))
    for _ in range(10):
        rng.shuffle(order)
        vectors = [base.vectors[i] for i in order]
        inverse = {old: new for new, old in enumerate(order)}
        cones = [[inverse[i] for i in cone] for cone in map(sorted, base.cones)]
        shuffled = make_fan(vectors, cones, labels=[base.labels[i] for i in order])
        assert validate_fan(shuffled).ok
        assert is_complete_2d(shuffled)
