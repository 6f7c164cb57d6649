"""分圆数、p 进赋值、截断级数与牛顿多边形"""
import random
from fractions import Fraction

import pytest

from tsl.core.cyclotomic import (
    CyclotomicNumber,
    NewtonPolygon,
    PadicValuation,
    cyc_arith,
    newton_polygon,
    ord_p,
    polygon_dominates,
    series_exp,
    series_exp_log,
    series_inverse,
    series_log,
    series_mul,
    series_substitute_power,
)
from tsl.core.exceptions import (
    BadConstantTermError,
    LengthMismatchError,
    MixedPrimesError,
    ZeroPolynomialError,
)

PRIMES = [3, 5, 7]


def _cyc(p, coeffs):
    return CyclotomicNumber(p, coeffs)


@pytest.mark.parametrize("p", PRIMES)
def test_cyclotomic_relations(p):
    zeta = CyclotomicNumber.zeta(p)
    assert zeta**p == CyclotomicNumber.one(p)
    total = CyclotomicNumber.zero(p)
    for k in range(p):
        total = total + zeta**k
    assert total.is_zero()
    assert CyclotomicNumber.from_power_counts(p, [1] * p).is_zero()


@pytest.mark.parametrize("p", PRIMES)
def test_valuation_of_uniformizer_and_p(p):
    one = CyclotomicNumber.one(p)
    assert ord_p(one - CyclotomicNumber.zeta(p)) == PadicValuation(Fraction(1, p - 1))
    assert ord_p(p, p) == PadicValuation(Fraction(1))
    assert ord_p(Fraction(1, p * p), p) == PadicValuation(Fraction(-2))
    assert ord_p(CyclotomicNumber.zero(p)).is_infinite


@pytest.mark.parametrize("p", PRIMES)
def test_valuation_multiplicative(p):
    rng = random.Random(1000 + p)
    checked = 0
    while checked < 100:
        x = _cyc(p, [rng.randint(-4, 4) for _ in range(p - 1)])
        y = _cyc(p, [rng.randint(-4, 4) for _ in range(p - 1)])
        if x.is_zero() or y.is_zero():
            continue
        assert ord_p(x * y) == ord_p(x) + ord_p(y)
        checked += 1


def test_galois_action_is_ring_homomorphism():
    p = 5
    x = _cyc(p, [1, 2, 0, -1])
    y = _cyc(p, [0, 1, 3, 1])
    for c in range(1, p):
        assert (x * y).galois(c) == x.galois(c) * y.galois(c)
        assert (x + y).galois(c) == x.galois(c) + y.galois(c)
        assert ord_p(x.galois(c)) == ord_p(x)
    with pytest.raises(ValueError):
        x.galois(p)


def test_integrality_and_serialization():
    x = _cyc(3, [Fraction(1, 2), 1])
    assert not x.is_integral()
    assert x.to_dict() == {"p": 3, "coeffs": ["1/2", "1/1"]}
    assert CyclotomicNumber.from_dict(x.to_dict()) == x
    assert CyclotomicNumber.from_int(3, 7).to_rational() == 7


def test_mixed_primes_rejected():
    with pytest.raises(MixedPrimesError):
        CyclotomicNumber.one(3) + CyclotomicNumber.one(5)
    with pytest.raises(MixedPrimesError):
        cyc_arith(CyclotomicNumber.one(3), CyclotomicNumber.one(5), "mul")


def test_series_exp_log_inverse():
    p = 3
    P = [1, -1, 3]
    log = series_exp_log(P, "log", 6, p)
    assert series_exp_log(log, "exp", 6) == [CyclotomicNumber.from_int(p, c) for c in P + [0] * 4]

    one_minus_t = [CyclotomicNumber.from_int(p, c) for c in (1, -1)]
    inverse = series_inverse(one_minus_t, 4)
    assert inverse == [CyclotomicNumber.one(p)] * 5
    product = series_mul(one_minus_t, inverse, 4)
    assert product == [CyclotomicNumber.one(p)] + [CyclotomicNumber.zero(p)] * 4

    squared = series_substitute_power(one_minus_t, 2, 4)
    assert [c.to_rational() for c in squared] == [1, 0, -1, 0, 0]


def test_series_constant_term_checks():
    with pytest.raises(BadConstantTermError):
        series_exp_log([1, 1], "exp", 3, 3)
    with pytest.raises(BadConstantTermError):
        series_exp_log([2, 1], "log", 3, 3)
    with pytest.raises(BadConstantTermError):
        series_inverse([CyclotomicNumber.from_int(3, 2)], 3)


def test_newton_polygon_of_kloosterman_polynomial():
    polygon = newton_polygon([1, -1, 3], 1, 3)
    assert polygon.slopes == [0, 1]
    assert polygon.total_rise == 1
    assert polygon.to_dict()["vertices"] == [[0, "0/1"], [1, "0/1"], [2, "1/1"]]


def test_newton_polygon_units_and_zero():
    # ord_9 = ord_3 / 2
    polygon = newton_polygon([1, 0, 9], 2, 3)
    assert polygon.slopes == [Fraction(1, 2), Fraction(1, 2)]
    with pytest.raises(ZeroPolynomialError):
        newton_polygon([0, 0], 1, 3)


@pytest.mark.parametrize(
    "upper,lower,expected",
    [
        ([0, 1], [0, 1], True),
        ([Fraction(1, 2), Fraction(1, 2)], [0, 1], True),
        ([0, Fraction(1, 2)], [0, 1], False),
    ],
)
def test_polygon_dominates(upper, lower, expected):
    assert polygon_dominates(NewtonPolygon.from_slopes(upper), NewtonPolygon.from_slopes(lower)) is expected


def test_polygon_dominates_length_mismatch():
    with pytest.raises(LengthMismatchError):
        polygon_dominates(NewtonPolygon.from_slopes([0]), NewtonPolygon.from_slopes([0, 1]))


@pytest.mark.parametrize("p", PRIMES)
def test_valuation_is_ultrametric(p):
    rng = random.Random(2000 + p)
    for _ in range(100):
        x = _cyc(p, [rng.randint(-9, 9) * p ** rng.randint(0, 2) for _ in range(p - 1)])
        y = _cyc(p, [rng.randint(-9, 9) for _ in range(p - 1)])
        vx, vy, vs = ord_p(x), ord_p(y), ord_p(x + y)
        assert vs >= min(vx, vy)
        if vx != vy:
            assert vs == min(vx, vy)


def _random_unit_poly(rng, p, degree):
    coeffs = [1] + [rng.randint(-9, 9) * p ** rng.randint(0, 3) for _ in range(degree)]
    if coeffs[-1] == 0:
        coeffs[-1] = p ** rng.randint(0, 3)
    return [CyclotomicNumber.from_int(p, c) for c in coeffs]


@pytest.mark.parametrize("seed", range(10))
def test_newton_polygon_of_product_concatenates_slopes(seed):
    rng = random.Random(seed)
    p = rng.choice(PRIMES)
    P = _random_unit_poly(rng, p, rng.randint(1, 3))
    Q = _random_unit_poly(rng, p, rng.randint(1, 3))
    order = len(P) + len(Q) - 2
    product = series_mul(P, Q, order)
    slopes = newton_polygon(P).slopes + newton_polygon(Q).slopes
    assert newton_polygon(product).slopes == sorted(slopes)


@pytest.mark.parametrize("seed", range(10))
def test_exp_log_round_trip(seed):
    rng = random.Random(seed)
    p = rng.choice(PRIMES)
    order = 6
    g = [CyclotomicNumber.one(p)] + [_cyc(p, [rng.randint(-3, 3) for _ in range(p - 1)]) for _ in range(order)]
    assert series_exp(series_log(g, order), order) == g
    f = [CyclotomicNumber.zero(p)] + [_cyc(p, [rng.randint(-3, 3) for _ in range(p - 1)]) for _ in range(order)]
    assert series_log(series_exp(f, order), order) == f
