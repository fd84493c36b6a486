"""Exact rational linear algebra: frozen examples plus randomized oracles."""

from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logaffine.errors import (
    DependentGeneratorsError,
    DimensionMismatchError,
    NonIntegerEntryError,
)
from logaffine.rational import (
    AffineFunctional,
    cone_contains,
    cross2,
    is_saturated_lattice_basis,
    linear_independent,
    primitive,
    rot90,
    smith_normal_form,
    vector,
)


# ---------------------------------------------------------------- helpers


def _det_rank(rows: list[tuple[Fraction, ...]]) -> int:
    """Rank via exhaustive minor expansion (independent oracle)."""
    if not rows:
        return 0
    n = len(rows[0])

    def det(mat: list[list[Fraction]]) -> Fraction:
        if len(mat) == 1:
            return mat[0][0]
        total = Fraction(0)
        for j in range(len(mat)):
            minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
            sign = Fraction(-1) ** j
            total += sign * mat[0][j] * det(minor)
        return total

    best = 0
    for k in range(1, min(len(rows), n) + 1):
        for ridx in itertools.combinations(range(len(rows)), k):
            for cidx in itertools.combinations(range(n), k):
                mat = [[rows[i][j] for j in cidx] for i in ridx]
                if det(mat) != 0:
                    best = max(best, k)
    return best


def _determinantal_divisor(rows: list[list[int]], k: int) -> int:
    """gcd of all k x k minors (independent oracle for Smith divisors)."""
    import math

    def det(mat: list[list[int]]) -> int:
        if len(mat) == 1:
            return mat[0][0]
        total = 0
        for j in range(len(mat)):
            minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
            total += (-1) ** j * mat[0][j] * det(minor)
        return total

    n = len(rows[0])
    g = 0
    for ridx in itertools.combinations(range(len(rows)), k):
        for cidx in itertools.combinations(range(n), k):
            g = math.gcd(g, abs(det([[rows[i][j] for j in cidx] for i in ridx])))
    return g


# ---------------------------------------------------------------- vectors


def test_vector_coercion() -> None:
    assert vector(1, 0) == (Fraction(1), Fraction(0))
    assert vector("1/2", 3) == (Fraction(1, 2), Fraction(3))


def test_rot90_and_cross() -> None:
    assert rot90(vector(1, 0)) == vector(0, 1)
    assert rot90(vector(0, 1)) == vector(-1, 0)
    assert cross2(vector(1, 0), vector(0, 1)) == 1
    assert cross2(vector(0, 1), vector(1, 0)) == -1


def test_primitive() -> None:
    assert primitive(vector(2, 4)) == (1, 2)
    assert primitive(vector("-1/2", "3/2")) == (-1, 3)
    assert primitive(vector(0, -5)) == (0, -1)


def test_affine_functional_evaluates() -> None:
    f = AffineFunctional(vector(0, -1), Fraction(1))
    assert f(vector(3, 1)) == 0
    assert f(vector(0, 0)) == 1
    assert f(vector(0, 2)) == -1


# ---------------------------------------------------- linear independence


def test_linear_independent_examples() -> None:
    assert linear_independent([vector(1, 0), vector(1, 1)])
    assert not linear_independent([vector(1, 1), vector(2, 2)])
    assert not linear_independent([vector(1, 0), vector(0, 1), vector(1, 1)])
    assert linear_independent([])
    assert not linear_independent([vector(0, 0)])


def test_linear_independent_dimension_mismatch() -> None:
    with pytest.raises(DimensionMismatchError):
        linear_independent([vector(1, 0), vector(1, 1, 0)])


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(-2, 2), min_size=3, max_size=3),
        min_size=1,
        max_size=4,
    )
)
def test_linear_independent_matches_minor_oracle(mat: list[list[int]]) -> None:
    rows = [vector(*r) for r in mat]
    assert linear_independent(rows) == (_det_rank(list(rows)) == len(rows))


# ------------------------------------------------------- cone membership


def test_cone_contains_examples() -> None:
    gens = [vector(1, 0), vector(0, 1)]
    assert cone_contains(gens, vector(2, 3))
    assert cone_contains(gens, vector(2, 3), strict=True)
    assert cone_contains(gens, vector(1, 0))
    assert not cone_contains(gens, vector(1, 0), strict=True)
    assert not cone_contains(gens, vector(-1, 1))
    assert cone_contains([vector(1, 1)], vector(2, 2))
    assert not cone_contains([vector(1, 1)], vector(1, 2))
    # The empty cone is the origin alone.
    assert cone_contains([], vector(0, 0))
    assert not cone_contains([], vector(1, 0))


def test_cone_contains_rejects_dependent_generators() -> None:
    with pytest.raises(DependentGeneratorsError):
        cone_contains([vector(1, 1), vector(2, 2)], vector(1, 0))


@settings(max_examples=60, deadline=None)
@given(
    st.integers(0, 5),
    st.integers(0, 5),
    st.integers(1, 4),
    st.integers(1, 4),
)
def test_cone_contains_nonnegative_combinations(
    c1: int, c2: int, s1: int, s2: int
) -> None:
    gens = [vector(1, 0), vector(s1, s2)]
    point = vector(c1 + c2 * s1, c2 * s2)
    assert cone_contains(gens, point)
    assert cone_contains(gens, point, strict=True) == (c1 > 0 and c2 > 0)


# ----------------------------------------------------- lattice saturation


def test_smith_normal_form_examples() -> None:
    assert smith_normal_form([[1, 0], [0, 1]]) == (1, 1)
    assert smith_normal_form([[2, 0], [0, 3]]) == (1, 6)
    assert smith_normal_form([[2, 4], [0, 0]]) == (2, 0)
    assert smith_normal_form([[1, 2]]) == (1,)
    assert smith_normal_form([[4, 6]]) == (2,)


def test_is_saturated_lattice_basis_examples() -> None:
    assert is_saturated_lattice_basis([[1, 0]])
    assert not is_saturated_lattice_basis([[2, 0]])
    assert is_saturated_lattice_basis([[1, 0], [1, 1]])
    assert not is_saturated_lattice_basis([[1, 0], [1, 2]])
    assert not is_saturated_lattice_basis([[1, 1], [1, -1]])
    assert is_saturated_lattice_basis([[0, -1], [-1, 1]])


def test_is_saturated_rejects_bad_input() -> None:
    with pytest.raises(NonIntegerEntryError):
        is_saturated_lattice_basis([[Fraction(1, 2), 0]])
    with pytest.raises(DimensionMismatchError):
        is_saturated_lattice_basis([[1, 0], [0, 1], [1, 1]])


@settings(max_examples=80, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(-4, 4), min_size=3, max_size=3),
        min_size=1,
        max_size=3,
    )
)
def test_smith_divisors_match_determinantal_oracle(mat: list[list[int]]) -> None:
    divisors = smith_normal_form(mat)
    prev = 1
    for k, d in enumerate(divisors, start=1):
        dk = _determinantal_divisor(mat, k)
        assert prev * d == dk
        if dk == 0:
            break
        prev = dk
    # Divisibility chain (zeros only at the tail).
    nonzero = [d for d in divisors if d != 0]
    for a, b in zip(nonzero, nonzero[1:]):
        assert b % a == 0
    assert all(d == 0 for d in divisors[len(nonzero) :])
