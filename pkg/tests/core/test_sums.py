"""精确特征和与和缓存的配合"""
import pytest

from tests.test_utils import kl2, kl3
from tsl.core.cyclotomic import CyclotomicNumber
from tsl.core.exceptions import SizeCeilingExceeded
from tsl.core.finite_field import ClosedPoint, closed_points, make_field
from tsl.core.geometry.laurent import LaurentPolynomial, make_family
from tsl.core.lfunctions.sums import (
    character_sum,
    conjugate_sums_agree,
    exp_sum,
    level_sum,
    multiparam_exp_sum,
    shift_character,
    zero_fiber_sum,
)


def _point(field, value):
    return ClosedPoint(field.element(value), 1)


def test_kloosterman_sums_f3(memory_cache):
    family = kl2(3)
    point = _point(family.base_field, 1)
    assert exp_sum(family, point, 1, memory_cache) == -1
    assert exp_sum(family, point, 2, memory_cache) == 5


def test_additive_character_of_linear_form():
    # Σ_{x ≠ 0} ζ^{Tr x} = −1
    for p, m in [(3, 1), (3, 2), (5, 1)]:
        field = make_field(p, m)
        poly = LaurentPolynomial(field, 1, [((1,), 1)])
        assert character_sum(poly) == -1


def test_zero_fiber_sum(memory_cache):
    family = kl2(3)
    assert zero_fiber_sum(family, 1, memory_cache) == -1
    assert zero_fiber_sum(family, 2, memory_cache) == -1
    # x₁ + x₂ 的和是 (−1)²
    assert zero_fiber_sum(kl3(3), 1, memory_cache) == 1


def test_sum_independent_of_conjugate():
    family = kl2(3)
    for point in closed_points(family.base_field, 2):
        if point.degree != 2:
            continue
        values = {character_sum(family.fiber(c)) for c in point.conjugates(3)}
        assert len(values) == 1
        assert conjugate_sums_agree(family, point)


def test_constant_shift_factor(memory_cache):
    field = make_field(5)
    deformed = make_family(field, [(1, [1])], [-1], deformation_exponent=2, lower_order=[(1, [1], 0, [0])])
    base = kl2(5)
    t = field.element(3)
    for r in (1, 2):
        shifted = multiparam_exp_sum(deformed, [t], _point(field, 2), r, memory_cache)
        # λ = 2 时 λ^M = 4
        plain = exp_sum(base, _point(field, 4), r, memory_cache)
        assert shifted == shift_character(t, r) * plain


def test_shift_character():
    field = make_field(3, 2)
    one = field.one()
    assert shift_character(one, 1) == CyclotomicNumber.zeta(3, 2)
    assert shift_character(field.zero(), 5) == 1


def test_sum_ceiling_and_bad_r(memory_cache):
    family = kl2(3)
    point = _point(family.base_field, 1)
    with pytest.raises(SizeCeilingExceeded):
        exp_sum(family, point, 1, memory_cache, ceiling=1)
    with pytest.raises(ValueError):
        exp_sum(family, point, 0, memory_cache)


def test_sums_are_cached(sum_cache):
    family = kl2(3)
    point = _point(family.base_field, 2)
    first = exp_sum(family, point, 2, sum_cache)
    assert sum_cache.stats()["misses"] == 1
    assert exp_sum(family, point, 2, sum_cache) == first
    assert sum_cache.stats()["hits"] == 1


@pytest.mark.parametrize("p,m", [(3, 1), (3, 2), (5, 1)])
def test_scaling_by_prime_field_acts_by_galois(p, m):
    # Tr(aF) = a·Tr(F)，所以 S(aF) = σ_a(S(F))
    family = kl3(p)
    tower = family.tower
    lam = tower.level(m).primitive_element()
    poly = family.fiber(lam)
    value = character_sum(poly)
    for a in range(2, p):
        scaled = LaurentPolynomial(poly.field, poly.n, [(v, c * a) for v, c in poly.items()])
        assert character_sum(scaled) == value.galois(a)


def test_level_sum_matches_closed_points(memory_cache):
    family = kl2(3)
    q = family.base_field.order
    for point in closed_points(family.tower, 2):
        for j in (1, 2):
            expected = exp_sum(family, point, j, memory_cache)
            for conjugate in point.conjugates(q):
                assert level_sum(family, conjugate, j, memory_cache) == expected


@pytest.mark.parametrize("r", [1, 2, 3])
def test_kloosterman_sums_over_a_level_add_to_one(r, memory_cache):
    # Σ_λ Σ_x ψ(x + λ/x) = Σ_x ψ(x)·(−1) = 1
    family = kl2(3)
    total = CyclotomicNumber.zero(3)
    for lam in family.tower.level(r).elements():
        if not lam.is_zero():
            total = total + level_sum(family, lam, 1, memory_cache)
    assert total == 1
    with pytest.raises(ValueError):
        level_sum(family, family.base_field.one(), 0, memory_cache)
