"""Simplicial rational fans in the plane (and the line).

A fan is a finite set of distinct nonzero rational vectors together
with a collection of generator-index sets ("cones") that is closed
downward, contains the empty cone, and never places one fan vector
inside the closed positive hull of a cone it does not belong to.
Cones are simplicial: their generators are linearly independent.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import UnsupportedDimensionError
from .rational import (
    Vector,
    as_vector,
    cone_contains,
    cross2,
    is_zero,
    linear_independent,
)


@dataclass(frozen=True)
class Fan:
    """An immutable fan; cones store indices into ``vectors``."""

    dim: int
    vectors: tuple[Vector, ...]
    labels: tuple[str, ...]
    cones: frozenset[frozenset[int]]

    def label_of(self, index: int) -> str:
        return self.labels[index]

    def index_of_label(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no ray labelled {label!r}") from None

    def index_of_vector(self, v: Vector) -> int:
        try:
            return self.vectors.index(v)
        except ValueError:
            raise KeyError(f"no ray with vector {v}") from None

    def two_cones(self) -> list[frozenset[int]]:
        return sorted((c for c in self.cones if len(c) == 2), key=sorted)


@dataclass(frozen=True)
class FanReport:
    """Validation outcome: ``ok`` plus a stable list of violations."""

    ok: bool
    violations: tuple[str, ...]


def make_fan(
    vectors: Sequence[Sequence],
    cones: Iterable[Iterable[int]],
    *,
    labels: Sequence[str] | None = None,
    dim: int | None = None,
) -> Fan:
    """Assemble a Fan from raw data without validating it."""
    vecs = tuple(as_vector(v) for v in vectors)
    if dim is None:
        if not vecs:
            raise ValueError("dim is required for a fan with no vectors")
        dim = len(vecs[0])
    if labels is None:
        labels = [f"v{i}" for i in range(len(vecs))]
    cone_set = frozenset(frozenset(c) for c in cones)
    return Fan(dim=dim, vectors=vecs, labels=tuple(labels), cones=cone_set)


def validate_fan(fan: Fan) -> FanReport:
    """Check every fan axiom; returns a report rather than raising."""
    violations: list[str] = []
    n = len(fan.vectors)
    if fan.dim < 1:
        violations.append(f"dimension must be positive, got {fan.dim}")
    if len(fan.labels) != n:
        violations.append("label count differs from vector count")
    elif len(set(fan.labels)) != n:
        violations.append("ray labels are not distinct")
    for i, v in enumerate(fan.vectors):
        if len(v) != fan.dim:
            violations.append(f"vector {fan.labels[i]} has length {len(v)} != dim {fan.dim}")
        elif is_zero(v):
            violations.append(f"vector {fan.labels[i]} is zero")
    if len(set(fan.vectors)) != n:
        violations.append("fan vectors are not distinct")
    if violations:
        return FanReport(False, tuple(violations))

    def name(cone: frozenset[int]) -> str:
        return "{" + " ".join(fan.labels[i] for i in sorted(cone)) + "}"

    if frozenset() not in fan.cones:
        violations.append("the empty cone is missing")
    for cone in sorted(fan.cones, key=lambda c: (len(c), sorted(c))):
        if any(i < 0 or i >= n for i in cone):
            violations.append(f"cone with out-of-range generator index {sorted(cone)}")
            continue
        gens = [fan.vectors[i] for i in cone]
        if not linear_independent(gens):
            violations.append(f"cone {name(cone)} has dependent generators")
            continue
        for i in cone:
            sub = cone - {i}
            if sub not in fan.cones:
                violations.append(f"cones are not closed under subsets: {name(sub)} missing")
        for j in range(n):
            if j in cone:
                continue
            if cone_contains(gens, fan.vectors[j]):
                violations.append(
                    f"vector {fan.labels[j]} lies in the closed hull of cone {name(cone)}"
                )
    return FanReport(not violations, tuple(violations))


def _resolve_ray(fan: Fan, ray) -> int:
    if isinstance(ray, str):
        return fan.index_of_label(ray)
    return fan.index_of_vector(as_vector(ray))


def star(fan: Fan, ray) -> set[frozenset[Vector]]:
    """All cones containing the given ray, resolved to vector sets.

    ``ray`` may be a label or the ray vector itself.
    """
    idx = _resolve_ray(fan, ray)
    return {
        frozenset(fan.vectors[i] for i in cone)
        for cone in fan.cones
        if idx in cone
    }


def adjacent_vectors(fan: Fan, ray) -> set[Vector]:
    """Vectors sharing a cone with the given ray."""
    idx = _resolve_ray(fan, ray)
    out: set[Vector] = set()
    for cone in fan.cones:
        if idx in cone:
            out.update(fan.vectors[i] for i in cone if i != idx)
    return out


def _direction_cmp(u: Vector, v: Vector) -> int:
    """Exact counterclockwise comparison starting at direction (1, 0)."""

    def half(w: Vector) -> int:
        return 0 if (w[1] > 0 or (w[1] == 0 and w[0] > 0)) else 1

    hu, hv = half(u), half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = cross2(u, v)
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


def cyclic_order(fan: Fan) -> list[int]:
    """Indices of the fan rays sorted counterclockwise from (1, 0)."""
    if fan.dim != 2:
        raise UnsupportedDimensionError("cyclic order is a planar notion")
    key = functools.cmp_to_key(lambda i, j: _direction_cmp(fan.vectors[i], fan.vectors[j]))
    return sorted(range(len(fan.vectors)), key=key)


def angular_neighbors(fan: Fan, index: int) -> tuple[int, int]:
    """(clockwise, counterclockwise) neighbor ray indices of ``index``."""
    order = cyclic_order(fan)
    pos = order.index(index)
    return order[pos - 1], order[(pos + 1) % len(order)]


def is_complete_2d(fan: Fan) -> bool:
    """Whether the plane fan's cones cover every direction.

    True exactly when there are at least three rays and each pair of
    cyclically consecutive rays spans a 2-cone of the fan turning
    counterclockwise by less than a half turn.
    """
    if fan.dim != 2:
        raise UnsupportedDimensionError(f"completeness test is 2d-only, got dim {fan.dim}")
    m = len(fan.vectors)
    if m < 3:
        return False
    order = cyclic_order(fan)
    for k in range(m):
        i, j = order[k], order[(k + 1) % m]
        if frozenset({i, j}) not in fan.cones:
            return False
        if cross2(fan.vectors[i], fan.vectors[j]) <= 0:
            return False
    return True


def is_complete_1d(fan: Fan) -> bool:
    """Whether a line fan covers both directions."""
    if fan.dim != 1:
        raise UnsupportedDimensionError("1d completeness needs a line fan")
    signs = {1 if v[0] > 0 else -1 for v in fan.vectors}
    return signs == {1, -1}


def is_complete(fan: Fan) -> bool:
    """Completeness in the supported dimensions (1 and 2)."""
    if fan.dim == 1:
        return is_complete_1d(fan)
    if fan.dim == 2:
        return is_complete_2d(fan)
    raise UnsupportedDimensionError(f"no completeness test in dim {fan.dim}")
