"""凸包刻面、面格与体积"""
from fractions import Fraction

import pytest

from tsl.core.exceptions import NotFullDimensionalError
from tsl.core.geometry.context import faces_at_infinity
from tsl.core.geometry.polytope import Polytope, affine_rank, linear_rank, primitive_integer


def test_rank_helpers():
    assert linear_rank([(1, 0), (2, 0)]) == 1
    assert affine_rank([(1, 0), (0, 1)]) == 1
    assert affine_rank([(0, 0), (1, 0), (0, 1)]) == 2
    assert primitive_integer([Fraction(2, 3), Fraction(-4, 3)]) == (1, -2)


def test_square_facets_and_faces():
    square = Polytope([(0, 0), (1, 0), (2, 0), (0, 2), (2, 2)])
    assert square.is_full_dimensional
    assert len(square.facets) == 4
    assert sorted(square.vertices()) == [(0, 0), (0, 2), (2, 0), (2, 2)]
    # 4 个顶点 + 4 条边
    assert len(square.faces()) == 8
    assert square.contains((1, 1))
    assert not square.contains((3, 1))
    assert square.normalized_volume() == 8


@pytest.mark.parametrize(
    "points,expected",
    [
        ([(0,), (1,), (-1,)], 2),
        ([(0, 0), (1, 0), (0, 1)], 1),
        ([(0, 0), (1, 0), (0, 1), (-1, -1)], 3),
        ([(0, 0), (1, 0), (0, 1), (1, 1)], 2),
        ([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)], 4),
    ],
)
def test_normalized_volume_from_origin(points, expected):
    polytope = Polytope(points)
    assert polytope.normalized_volume(apex=points[0]) == expected


def test_lower_dimensional_hull():
    segment = Polytope([(0, 0), (1, 1), (2, 2)])
    assert segment.dim == 1
    assert segment.normalized_volume() == 0
    assert sorted(segment.vertices()) == [(0, 0), (2, 2)]
    with pytest.raises(NotFullDimensionalError):
        _ = segment.facets


def test_faces_at_infinity_kloosterman():
    assert sorted(faces_at_infinity(Polytope([(0,), (1,), (-1,)]))) == [((-1,),), ((1,),)]
    faces = faces_at_infinity(Polytope([(0, 0), (1, 0), (0, 1), (-1, -1)]))
    # 3 个顶点 + 3 条边，原点在内部
    assert len(faces) == 6
    assert ((0, 1), (1, 0)) in faces
