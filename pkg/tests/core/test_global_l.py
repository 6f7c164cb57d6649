"""截断的整体 L 函数"""
import pytest

from tests.test_utils import above, kl2, kl3
from tsl.core.cyclotomic import CyclotomicNumber
from tsl.core.exceptions import CrossCheckMismatch, ExcludedCaseError, PolynomialityFailure
from tsl.core.finite_field import make_field
from tsl.core.geometry.laurent import make_family
from tsl.core.lfunctions import OpSpec, global_l, global_L_truncated
from tsl.core.lfunctions.global_l import domain_zeta, zero_fiber_local_factor


def _ints(p, values):
    return [CyclotomicNumber.from_int(p, v) for v in values]


def test_sym0_counts_points(memory_cache):
    # 𝔾_m 在 𝔽₃ 上的 zeta 函数 (1 − T)/(1 − 3T)
    result = global_L_truncated(kl2(3), OpSpec.parse("sym0"), "gm", 3, memory_cache)
    assert result.coefficients == _ints(3, [1, 2, 6, 18])
    assert result.points_by_degree == {1: 2, 2: 3, 3: 8}
    assert result.cross_check
    assert result.zeta_check
    assert result.to_schema().zeta_check


@pytest.mark.parametrize("op", ["sym1", "sym2", "ext2"])
@pytest.mark.parametrize("d_max", [2, 3])
def test_euler_product_matches_moments(op, d_max, memory_cache):
    result = global_L_truncated(kl2(3), OpSpec.parse(op), "gm", d_max, memory_cache)
    assert result.cross_check
    assert result.integral
    assert result.zeta_check is None
    assert len(result.coefficients) == d_max + 1
    report = result.to_schema()
    assert report.points_by_degree == {str(d): c for d, c in {1: 2, 2: 3, 3: 8}.items() if d <= d_max}


def test_kloosterman_sym1_is_one_minus_t(memory_cache):
    # Σ_λ S_r(λ) = 1，所以每个 M_r = −1
    result = global_L_truncated(kl2(3), OpSpec.parse("sym1"), "gm", 3, memory_cache)
    assert result.coefficients == _ints(3, [1, -1, 0, 0])


@pytest.mark.parametrize("op", ["sym1", "sym2", "ext2"])
def test_two_variable_family(op, memory_cache):
    result = global_L_truncated(kl3(3), OpSpec.parse(op), "gm", 1, memory_cache)
    assert result.cross_check
    assert result.integral
    assert result.op_dimension == OpSpec.parse(op).dimension(3)
    if op == "sym1":
        # Σ_λ S_1(λ) = −1，p_1 = S_1
        assert result.coefficients == _ints(3, [1, -1])


def test_corrupted_fiber_polynomial_is_caught(memory_cache, monkeypatch):
    real = global_l.fiber_l_polynomial

    def corrupted(family, point, cache=None):
        sums, lpoly = real(family, point, cache)
        if point.degree == 1 and point.representative == family.base_field.one():
            lpoly = [lpoly[0], lpoly[1] + 1] + lpoly[2:]
        return sums, lpoly

    monkeypatch.setattr(global_l, "fiber_l_polynomial", corrupted)
    with pytest.raises(CrossCheckMismatch) as excinfo:
        global_L_truncated(kl2(3), OpSpec.parse("sym1"), "gm", 2, memory_cache)
    assert excinfo.value.details["euler"] != excinfo.value.details["moments"]


def test_missing_closed_point_is_caught(memory_cache, monkeypatch):
    real = global_l.closed_points
    monkeypatch.setattr(global_l, "closed_points", lambda tower, d: real(tower, d)[:-1])
    with pytest.raises(CrossCheckMismatch):
        global_L_truncated(kl2(3), OpSpec.parse("sym0"), "gm", 2, memory_cache)


def test_truncation_at_zero(memory_cache):
    result = global_L_truncated(kl2(3), OpSpec.parse("sym1"), "gm", 0, memory_cache)
    assert result.coefficients == _ints(3, [1])
    assert result.moment_coefficients == _ints(3, [1])
    assert result.points_by_degree == {}


def test_affine_line_adds_zero_fiber(memory_cache):
    result = global_L_truncated(kl2(3), OpSpec.parse("sym0"), "a1", 1, memory_cache)
    # 𝔸¹(𝔽₃) 有 3 个点
    assert result.coefficients == _ints(3, [1, 3])
    assert result.zero_fiber_degree == 1
    assert result.notes
    assert result.zeta_check

    # λ = 0 的纤维 f = x 贡献 p_r = 1，与 𝔾_m 上的 −1 抵消
    result = global_L_truncated(kl2(3), OpSpec.parse("sym1"), "a1", 2, memory_cache)
    assert result.coefficients == _ints(3, [1, 0, 0])


@pytest.mark.parametrize("op", ["sym1", "sym2"])
def test_rational_zero_fiber_uses_sums(op, memory_cache, monkeypatch):
    expected = global_L_truncated(kl2(3), OpSpec.parse(op), "a1", 2, memory_cache)

    def rational(family, cache=None):
        raise PolynomialityFailure("T^3 的系数不为零", {"lambda": "zero"})

    monkeypatch.setattr(global_l, "zero_fiber_L", rational)
    result = global_L_truncated(kl2(3), OpSpec.parse(op), "a1", 2, memory_cache)
    assert result.cross_check
    assert result.coefficients == expected.coefficients
    assert result.zero_fiber_degree is None
    assert any("有理函数" in note for note in result.notes)


def test_zero_fiber_factor_of_degenerate_f(memory_cache):
    # f = (x₁ + x₂)² 在 x₁ = −x₂ 上退化；S_1 = 2 + 2ζ，S_2 = 22
    family = make_family(make_field(3), [(1, [2, 0]), (2, [1, 1]), (1, [0, 2])], [-1, -1])
    zeta = CyclotomicNumber.zeta(3)
    assert zero_fiber_local_factor(family, OpSpec.parse("sym0"), 2, memory_cache) == _ints(3, [1, 1, 1])
    sym1 = zero_fiber_local_factor(family, OpSpec.parse("sym1"), 2, memory_cache)
    assert sym1 == [CyclotomicNumber.one(3), zeta * 2 + 2, zeta * 2 + 11]


def test_domain_checks(memory_cache):
    with pytest.raises(ExcludedCaseError):
        global_L_truncated(above(3), OpSpec.parse("sym1"), "a1", 1, memory_cache)
    with pytest.raises(ValueError):
        global_L_truncated(kl2(3), OpSpec.parse("sym1"), "p1", 1, memory_cache)


def test_domain_zeta():
    assert domain_zeta("gm", 4, 3) == [1, 3, 12, 48]
    assert domain_zeta("a1", 4, 3) == [1, 4, 16, 64]
