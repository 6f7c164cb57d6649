"""特征多项式上的 Sym/∧/⊗ 运算"""
import random

import pytest

from tsl.core.cyclotomic import CyclotomicNumber, series_mul
from tsl.core.exceptions import BadConstantTermError, ParseError
from tsl.core.lfunctions.operations import OpSpec, op_char_poly, op_traces, power_sums


def _poly(p, coeffs):
    return [CyclotomicNumber.from_int(p, c) for c in coeffs]


# Kl₂ 在 𝔽₃、λ = 1 处：α + β = 1，αβ = 3
KL2 = _poly(3, [1, -1, 3])


def test_parse_and_dimension():
    op = OpSpec.parse("Sym2*ext1")
    assert op.factors == (("sym", 2), ("ext", 1))
    assert str(op) == "sym2*ext1"
    assert op.order == 3
    assert op.dimension(2) == 6
    assert OpSpec.parse("sym0").order == 1
    assert OpSpec.parse("ext3").dimension(2) == 0
    with pytest.raises(ParseError):
        OpSpec.parse("sym")
    with pytest.raises(ParseError):
        OpSpec.parse("tensor2")


def test_power_sums():
    assert power_sums(KL2, 2) == _poly(3, [2, 1, -5])
    with pytest.raises(BadConstantTermError):
        power_sums(_poly(3, [2, 1]), 1)


@pytest.mark.parametrize(
    "op,expected",
    [
        ("sym1", [1, -1, 3]),
        ("sym0", [1, -1]),
        ("ext2", [1, -3]),
        ("sym2", [1, 2, -6, -27]),
    ],
)
def test_char_poly_of_operation(op, expected):
    assert op_char_poly(KL2, OpSpec.parse(op)) == _poly(3, expected)


def test_tensor_square_traces():
    # Tr(A ⊗ A)^j = (Tr A^j)²
    traces = op_traces(KL2, OpSpec.parse("sym1*sym1"), 2)
    assert traces == _poly(3, [1, 25])
    assert len(op_char_poly(KL2, OpSpec.parse("sym1*sym1"))) == 5


def test_order_is_clamped_to_one():
    assert OpSpec.parse("sym0").order == 1
    assert OpSpec.parse("ext0*sym0").order == 1
    assert OpSpec.parse("sym0*ext2").order == 2


def _random_poly(rng, p, degree):
    coeffs = [1] + [rng.randint(-6, 6) for _ in range(degree)]
    if coeffs[-1] == 0:
        coeffs[-1] = rng.choice([-1, 1]) * rng.randint(1, 6)
    return _poly(p, coeffs)


@pytest.mark.parametrize("seed", range(20))
def test_random_polynomials_satisfy_identities(seed):
    rng = random.Random(seed)
    p = rng.choice([3, 5, 7])
    P = _random_poly(rng, p, rng.randint(1, 4))
    N = len(P) - 1
    assert op_char_poly(P, OpSpec.parse("sym1")) == P
    assert op_char_poly(P, OpSpec.parse("ext1")) == P
    assert op_char_poly(P, OpSpec.parse("sym0")) == _poly(p, [1, -1])
    # A ⊗ A = Sym²A ⊕ ∧²A
    order = N * N
    square = op_char_poly(P, OpSpec.parse("sym1*sym1"))
    split = series_mul(op_char_poly(P, OpSpec.parse("sym2")), op_char_poly(P, OpSpec.parse("ext2")), order)
    assert split == square[: order + 1]
    # ∧^N A 的特征多项式是 1 − det(A)·T，det(A) = (−1)^N·P 的首项
    top = op_char_poly(P, OpSpec.parse(f"ext{N}"))
    assert top == [P[0], P[N] * (-1) ** (N + 1)]
