"""低阶形变的相对多面体 Υ"""
from fractions import Fraction

import pytest

from tests.test_utils import kl2
from tsl.core.exceptions import NotLowerOrderError, OutsideConeError
from tsl.core.finite_field import make_field
from tsl.core.geometry.context import build_geometry
from tsl.core.geometry.laurent import make_family
from tsl.core.geometry.upsilon import (
    deformed_denominator,
    deformed_weight,
    relative_polytope_upsilon,
    upsilon_from_weights,
)


def test_deformed_weight_kloosterman():
    ctx = kl2().geometry
    # l_σ(u) + (r/M)·2
    assert deformed_weight(ctx, 2, 0, (0,)) == 0
    assert deformed_weight(ctx, 2, 1, (-1,)) == 0
    assert deformed_weight(ctx, 4, 1, (0,)) == Fraction(1, 2)
    assert deformed_weight(ctx, 1, 0, (1,)) == 1


@pytest.mark.parametrize("M,expected", [(1, 6), (2, 3), (3, 2), (6, 1)])
def test_deformed_denominator(M, expected):
    ctx = build_geometry([(1, 0), (0, 1)], (-3, -2))
    assert deformed_denominator(ctx, M) == expected


def test_segment_upsilon():
    upsilon = upsilon_from_weights([((1,), Fraction(1, 2))])
    assert upsilon.vertices() == [(0,), (2,)]
    assert upsilon.normalized_volume() == 2
    assert upsilon.weight((1,)) == Fraction(1, 2)
    assert upsilon.weight((0,)) == 0

    upsilon = upsilon_from_weights([((2,), Fraction(3, 4))])
    assert upsilon.vertices() == [(0,), (8,)]
    assert upsilon.normalized_volume() == 8
    with pytest.raises(OutsideConeError):
        upsilon.weight((-1,))


def test_triangle_upsilon_total_weight():
    upsilon = upsilon_from_weights([((1, 0), 0), ((0, 1), 0)], s=Fraction(2), M=2)
    assert upsilon.span_dim == 2
    assert upsilon.normalized_volume() == 1
    assert upsilon.weight((1, 1)) == 2
    assert upsilon.total_weight((1, 1), 1) == 3


def test_not_lower_order():
    with pytest.raises(NotLowerOrderError):
        upsilon_from_weights([((1,), Fraction(1, 3)), ((1,), 1)])
    with pytest.raises(ValueError):
        upsilon_from_weights([])


def test_deformed_family_example():
    field = make_field(3)
    family = make_family(field, [(1, [1])], [-1], deformation_exponent=2, lower_order=[(1, [1], 0, [0])])
    upsilon = relative_polytope_upsilon(family)
    assert upsilon.vertices() == [(0,), (1,)]
    assert upsilon.normalized_volume() == 1
    assert deformed_denominator(family.geometry, family.deformation_exponent) == 1

    bad = make_family(field, [(1, [1])], [-1], deformation_exponent=2, lower_order=[(1, [1], 0, [1])])
    with pytest.raises(NotLowerOrderError):
        relative_polytope_upsilon(bad)
