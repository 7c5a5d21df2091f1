from fractions import Fraction as F

import pytest

from iivcg.domains import (
    Box,
    DomainError,
    Polytope,
    contains,
    coordinate_range,
    domain_constraints,
    is_nonempty,
    minimal_point,
    truncated,
    vertices,
)
from iivcg.lp import GE, LE


def test_box_constraints_bounded():
    cons = domain_constraints(Box((10, 10), (15, 15)), 0, 2)
    assert len(cons) == 4
    assert sorted((c.relation, c.rhs) for c in cons) == [(LE, 15), (LE, 15), (GE, 10), (GE, 10)]


def test_box_constraints_orthant():
    cons = domain_constraints(Box.orthant(2), 0, 2)
    assert [(c.relation, c.rhs) for c in cons] == [(GE, 0), (GE, 0)]


def test_polytope_constraints_with_offset():
    d = Polytope((((1, 1), 5),), 2)
    cons = domain_constraints(d, 1, 4)
    assert cons[0].coeffs == (0, 1, 1, 0) and cons[0].relation == LE and cons[0].rhs == 5
    assert [(c.coeffs, c.relation) for c in cons[1:]] == [((0, 1, 0, 0), GE), ((0, 0, 1, 0), GE)]


def test_box_validation():
    with pytest.raises(DomainError):
        Box((-1,), (None,))
    with pytest.raises(DomainError):
        Box((2,), (1,))
    with pytest.raises(DomainError):
        Box((0, 0), (1,))


def test_polytope_validation_and_emptiness():
    with pytest.raises(DomainError):
        Polytope((((1,), 1),), 2)
    assert is_nonempty(Polytope((((1, 1), 5),), 2))
    assert not is_nonempty(Polytope((((1, 1), -1),), 2))
    assert is_nonempty(Box.orthant(3))


def test_contains():
    box = Box((1, 0), (2, None))
    assert contains(box, (1, 100))
    assert not contains(box, (3, 0))
    assert not contains(box, (1,))
    tri = Polytope((((1, 1), 5),), 2)
    assert contains(tri, (2, 3))
    assert not contains(tri, (3, 3))
    assert not contains(tri, (-1, 0))


def test_coordinate_range_and_boundedness():
    tri = Polytope((((1, 2), 6),), 2)
    assert coordinate_range(tri, 0) == (0, 6)
    assert coordinate_range(tri, 1) == (0, 3)
    assert tri.bounded
    half = Polytope((((1, -1), 1),), 2)
    assert coordinate_range(half, 1) == (0, None)
    assert not half.bounded
    assert coordinate_range(Box((1, 2), (3, None)), 1) == (2, None)


def test_truncation():
    assert truncated(Box((1, 2), (3, None)), F(10)) == Box((1, 2), (3, 10))
    # a lower bound above the cap keeps the domain nonempty
    assert truncated(Box((20,), (None,)), F(10)) == Box((20,), (20,))
    half = truncated(Polytope((((1, -1), 1),), 2), F(4))
    assert half.bounded and coordinate_range(half, 1) == (0, 4)


def test_vertices_and_minimal_point():
    assert sorted(vertices(Box((0, 1), (2, 1)))) == [(0, 1), (2, 1)]
    tri = Polytope((((1, 1), 2),), 2)
    assert sorted(vertices(tri)) == [(0, 0), (0, 2), (2, 0)]
    with pytest.raises(DomainError):
        vertices(Box.orthant(1))
    assert minimal_point(Box((1, 2), (3, 4))) == (1, 2)
    shifted = Polytope((((-1, 0), -1), ((0, -1), -2)), 2)
    assert minimal_point(shifted) == (1, 2)
