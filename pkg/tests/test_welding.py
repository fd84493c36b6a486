"""Welding calculus: matched pairs, obstructions, coercion, closure."""

from __future__ import annotations

import pytest

from logaffine.errors import (
    FaceInUseError,
    GeometryError,
    GloballyObstructedError,
    NotMatchedError,
)
from logaffine.fans import make_fan
from logaffine.rational import vector
from logaffine.welding import (
    MatchedPair,
    affine_monodromy,
    build_welded_space,
    coerced_pairs,
    is_locally_obstructed,
    is_matched_pair,
    make_welding_spec,
    weld_pair,
)

from test_fans import hexagon_fan, triangle_fan


def quadrant_fan():
    return make_fan([(1, 0), (0, 1)], [[], [0], [1], [0, 1]], labels=["a", "b"])


def three_ray_halfplane_fan():
    """Rays (1,0), (0,1), (-1,0) with the two upper quadrant cones."""
    return make_fan(
        [(1, 0), (0, 1), (-1, 0)],
        [[], [0], [1], [2], [0, 1], [1, 2]],
        labels=["a", "b", "c"],
    )


def quadrant_spec(n: int, pairs: list[tuple]) -> object:
    fan = quadrant_fan()
    return make_welding_spec(
        {i: fan for i in range(1, n + 1)},
        [MatchedPair(p[0], p[1], label=f"w{k + 1}") for k, p in enumerate(pairs)],
    )


# ----------------------------------------------------------- matched pairs


def test_matched_pair_same_fan() -> None:
    spec = make_welding_spec({1: hexagon_fan(), 2: hexagon_fan()}, [])
    result = is_matched_pair(spec, MatchedPair((1, "b"), (2, "b")))
    assert result.ok
    assert result.correspondence == {(1, "a"): (2, "a"), (1, "c"): (2, "c")}


def test_matched_pair_rejects_different_vectors() -> None:
    spec = make_welding_spec({1: quadrant_fan(), 2: quadrant_fan()}, [])
    result = is_matched_pair(spec, MatchedPair((1, "a"), (2, "b")))
    assert not result.ok
    assert "vector" in result.reason


def test_matched_pair_rejects_star_mismatch() -> None:
    full = three_ray_halfplane_fan()
    partial = make_fan(
        [(1, 0), (0, 1), (-1, 0)],
        [[], [0], [1], [2], [0, 1]],
        labels=["a", "b", "c"],
    )
    spec = make_welding_spec({1: full, 2: partial}, [])
    result = is_matched_pair(spec, MatchedPair((1, "b"), (2, "b")))
    assert not result.ok
    assert "star" in result.reason


def test_matched_pair_same_domain_is_never_matched() -> None:
    spec = make_welding_spec({1: quadrant_fan()}, [])
    result = is_matched_pair(spec, MatchedPair((1, "a"), (1, "b")))
    assert not result.ok


# ------------------------------------------------------------ obstruction


def test_unobstructed_on_fresh_domains() -> None:
    spec = quadrant_spec(2, [])
    result = is_locally_obstructed(spec, MatchedPair((1, "a"), (2, "a")))
    assert not result.obstructed
    assert coerced_pairs(spec, MatchedPair((1, "a"), (2, "a"))) == ()


def test_obstructed_by_short_cycle() -> None:
    # The two domains are already welded along the adjacent faces, so a
    # second weld at the other corner side would close a 2-cycle.
    spec = quadrant_spec(2, [((1, "b"), (2, "b"))])
    pair = MatchedPair((1, "a"), (2, "a"))
    result = is_locally_obstructed(spec, pair)
    assert result.obstructed
    assert [w.key() for w in result.witnesses] == [frozenset({(1, "b"), (2, "b")})]


def test_obstructed_by_overfull_corner() -> None:
    # Joining a 3-chain and a 2-chain would put five quadrants at a corner.
    spec = quadrant_spec(
        5,
        [((1, "b"), (3, "b")), ((3, "a"), (4, "a")), ((2, "b"), (5, "b"))],
    )
    pair = MatchedPair((1, "a"), (2, "a"))
    result = is_locally_obstructed(spec, pair)
    assert result.obstructed
    witness_keys = {w.key() for w in result.witnesses}
    assert witness_keys == {
        frozenset({(1, "b"), (3, "b")}),
        frozenset({(3, "a"), (4, "a")}),
        frozenset({(2, "b"), (5, "b")}),
    }


def test_coerced_pair_from_chain_and_isolated_domain() -> None:
    # A 3-chain plus an isolated domain fills the corner exactly: the
    # two far-end free faces are coerced.
    spec = quadrant_spec(4, [((1, "b"), (2, "b")), ((2, "a"), (3, "a"))])
    pair = MatchedPair((1, "a"), (4, "a"))
    assert not is_locally_obstructed(spec, pair).obstructed
    coerced = coerced_pairs(spec, pair)
    assert [p.key() for p in coerced] == [frozenset({(3, "b"), (4, "b")})]


def test_no_coercion_without_corner() -> None:
    ray_fan = make_fan([(1, 0)], [[], [0]], labels=["a"])
    spec = make_welding_spec({1: ray_fan, 2: ray_fan}, [])
    pair = MatchedPair((1, "a"), (2, "a"))
    assert not is_locally_obstructed(spec, pair).obstructed
    assert coerced_pairs(spec, pair) == ()


# -------------------------------------------------------------- weld_pair


def test_weld_pair_transitive_closure() -> None:
    spec = quadrant_spec(4, [((1, "a"), (2, "a")), ((1, "b"), (4, "b"))])
    result = weld_pair(spec, MatchedPair((2, "b"), (3, "b"), label="w3"))
    added = [p.key() for p in result.added]
    assert added == [
        frozenset({(2, "b"), (3, "b")}),
        frozenset({(3, "a"), (4, "a")}),
    ]
    assert len(result.spec.pairs) == 4


def test_weld_pair_globally_obstructed_leaves_spec_unchanged() -> None:
    fan = three_ray_halfplane_fan()
    spec = make_welding_spec(
        {i: fan for i in (1, 2, 3, 4)},
        [
            MatchedPair((1, "b"), (3, "b"), label="w1"),
            MatchedPair((3, "a"), (4, "a"), label="w2"),
            MatchedPair((4, "c"), (2, "c"), label="w3"),
        ],
    )
    pair = MatchedPair((1, "a"), (2, "a"))
    with pytest.raises(GloballyObstructedError) as err:
        weld_pair(spec, pair)
    assert err.value.original.key() == pair.key()
    assert err.value.offending.key() == frozenset({(4, "b"), (2, "b")})
    assert frozenset({(4, "c"), (2, "c")}) in {w.key() for w in err.value.witnesses}
    assert len(spec.pairs) == 3


def test_weld_pair_rejects_used_face() -> None:
    spec = quadrant_spec(3, [((1, "a"), (2, "a"))])
    with pytest.raises(FaceInUseError):
        weld_pair(spec, MatchedPair((1, "a"), (3, "a")))


def test_weld_pair_rejects_unmatched() -> None:
    spec = make_welding_spec({1: quadrant_fan(), 2: quadrant_fan()}, [])
    with pytest.raises(NotMatchedError):
        weld_pair(spec, MatchedPair((1, "a"), (2, "b")))


def test_spec_rejects_duplicate_face_use() -> None:
    with pytest.raises(FaceInUseError):
        quadrant_spec(3, [((1, "a"), (2, "a")), ((1, "a"), (3, "a"))])


# ---------------------------------------------------- welded space assembly


def test_build_welded_space_quadrants() -> None:
    spec = quadrant_spec(
        4,
        [
            ((1, "a"), (2, "a")),
            ((1, "b"), (4, "b")),
            ((2, "b"), (3, "b")),
            ((3, "a"), (4, "a")),
        ],
    )
    space = build_welded_space(spec)
    assert len(space.pairs) == 4
    # The fourth listed pair was coerced by the third; its label sticks.
    assert {p.label for p in space.pairs} == {"w1", "w2", "w3", "w4"}
    assert [e.kind for e in space.edges] == ["welded"] * 4
    assert len(space.crossings) == 1
    assert len(space.boundary_corners) == 0
    comps = space.divisor_components
    assert len(comps) == 2
    assert all(not c.closed for c in comps)
    assert {frozenset(c.edge_labels) for c in comps} == {
        frozenset({"w1", "w4"}),
        frozenset({"w2", "w3"}),
    }
    for comp in comps:
        residues = {e.residue for e in space.edges if e.label in comp.edge_labels}
        assert residues == {comp.residue}
    assert space.orientable
    assert not space.compact
    assert not space.has_boundary


def test_build_welded_space_single_domain() -> None:
    spec = make_welding_spec({1: triangle_fan()}, [])
    space = build_welded_space(spec)
    assert [e.kind for e in space.edges] == ["boundary"] * 3
    assert space.compact
    assert space.has_boundary
    assert len(space.boundary_corners) == 3
    assert space.divisor_components == ()


def test_build_welded_space_mobius_band() -> None:
    fan = triangle_fan()
    spec = make_welding_spec(
        {1: fan, 2: fan, 3: fan},
        [
            MatchedPair((1, "a"), (2, "a"), label="m1"),
            MatchedPair((2, "b"), (3, "b"), label="m2"),
            MatchedPair((3, "c"), (1, "c"), label="m3"),
        ],
    )
    space = build_welded_space(spec)
    assert not space.orientable
    assert sum(1 for e in space.edges if e.kind == "boundary") == 3
    assert len(space.boundary_corners) == 3
    assert all(len(c.quadrants) == 3 for c in space.boundary_corners)
    assert len(space.crossings) == 0


def test_affine_monodromy_vanishes() -> None:
    spec = quadrant_spec(
        4,
        [
            ((1, "a"), (2, "a")),
            ((1, "b"), (4, "b")),
            ((2, "b"), (3, "b")),
            ((3, "a"), (4, "a")),
        ],
    )
    space = build_welded_space(spec)
    assert affine_monodromy(space, [1, 2, 3, 4]) == vector(0, 0)
    assert affine_monodromy(space, [1]) == vector(0, 0)
    with pytest.raises(GeometryError):
        affine_monodromy(space, [1, 3])
