"""Cell complexes, Betti numbers, surface types, divisor topology."""

import pytest
from conftest import load_space

from logaffine.errors import GeometryError, UnsupportedDimensionError
from logaffine.topology import (
    betti_numbers,
    cell_complex,
    classify_closed_surface,
    divisor_topology,
    euler_characteristic,
    log_cohomology_dims,
)

# (fixture, cell counts, euler, betti, divisor (comps, closed, crossings), log dims)
EXPECTED = [
    ("sphere.weld", (6, 12, 8), 2, (1, 0, 1), (3, 3, 6), (1, 3, 10, 0)),
    ("torus.weld", (4, 8, 4), 0, (1, 2, 1), (4, 4, 4), (1, 6, 9, 0)),
    ("genus2.weld", (6, 12, 4), -2, (1, 4, 1), (6, 6, 6), (1, 10, 13, 0)),
    ("skewlines.weld", (3, 9, 7), 1, (0, 0, 1), (3, 0, 3), (0, 3, 4, 0)),
    ("quadrants.weld", (1, 4, 4), 1, (0, 0, 1), (2, 0, 1), (0, 2, 2, 0)),
    ("corgl.weld", (1, 4, 4), 1, (0, 0, 1), (2, 0, 1), (0, 2, 2, 0)),
    ("upperhalf.weld", (1, 3, 2), 0, (0, 0, 0), (1, 0, 0), (0, 1, 0, 0)),
    ("mobius.weld", (3, 6, 3), 0, (1, 1, 0), (3, 0, 0), (1, 4, 0, 0)),
    ("compdelt.weld", (1, 2, 1), 0, (0, 0, 0), (0, 0, 0), (0, 0, 0, 0)),
    ("plane.weld", (0, 0, 1), 1, (0, 0, 1), (0, 0, 0), (0, 0, 1, 0)),
]


@pytest.mark.parametrize("name,counts,euler,betti,divisor,logdims", EXPECTED)
def test_frozen_topology(name, counts, euler, betti, divisor, logdims):
    space = load_space(name)
    complex_ = cell_complex(space)
    assert complex_.counts == counts
    assert euler_characteristic(space) == euler
    assert betti_numbers(space) == betti
    report = divisor_topology(space)
    assert (
        report.component_count,
        report.closed_count,
        report.crossing_count,
    ) == divisor
    assert log_cohomology_dims(space) == logdims


@pytest.mark.parametrize("name,counts,euler,betti,divisor,logdims", EXPECTED)
def test_boundary_of_boundary_vanishes(name, counts, euler, betti, divisor, logdims):
    complex_ = cell_complex(load_space(name))
    d1, d2 = complex_.boundaries
    n0, n1, n2 = complex_.counts
    for i in range(n0):
        for k in range(n2):
            assert sum(d1[i][j] * d2[j][k] for j in range(n1)) == 0


@pytest.mark.parametrize("name,counts,euler,betti,divisor,logdims", EXPECTED)
def test_euler_equals_alternating_betti_sum(
    name, counts, euler, betti, divisor, logdims
):
    space = load_space(name)
    assert euler_characteristic(space) == betti[0] - betti[1] + betti[2]


SURFACES = [
    ("sphere.weld", True, 0, None, "sphere"),
    ("torus.weld", True, 1, None, "torus"),
    ("genus2.weld", True, 2, None, "genus-2 surface"),
]


@pytest.mark.parametrize("name,orientable,genus,crosscaps,label", SURFACES)
def test_closed_surface_classification(name, orientable, genus, crosscaps, label):
    surface = classify_closed_surface(load_space(name))
    assert surface.orientable is orientable
    assert surface.genus == genus
    assert surface.crosscaps == crosscaps
    assert surface.name == label


def test_classification_rejects_noncompact_and_boundary():
    with pytest.raises(GeometryError):
        classify_closed_surface(load_space("skewlines.weld"))
    with pytest.raises(GeometryError):
        classify_closed_surface(load_space("mobius.weld"))


def test_divisor_betti_pairs():
    report = divisor_topology(load_space("sphere.weld"))
    assert report.betti == ((1, 1), (1, 1), (1, 1))
    report = divisor_topology(load_space("skewlines.weld"))
    assert report.betti == ((1, 0), (1, 0), (1, 0))


def test_one_dimensional_space():
    space = load_space("line1d.weld")
    complex_ = cell_complex(space)
    assert complex_.counts == (1, 2)
    assert euler_characteristic(space) == -1
    assert betti_numbers(space) == (0, 1)
    assert log_cohomology_dims(space) == (0, 2, 0)


def test_dimension_three_is_unsupported():
    space = load_space("dim3.weld")
    with pytest.raises(UnsupportedDimensionError):
        cell_complex(space)
    with pytest.raises(UnsupportedDimensionError):
        log_cohomology_dims(space)
