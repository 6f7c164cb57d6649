"""纤维 L 多项式与牛顿多边形下界

L(F, λ, T)^{(−1)^{n+1}} = exp((−1)^{n+1} Σ_r S_r T^r/r) 是 N 次多项式。这里用 2N 个和展开到 T^{2N}，
要求 T^{N+1} … T^{2N} 的系数全为零并且 T^N 的系数非零。
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from tsl.core.cohomology import BasisB, compute_basis
from tsl.core.cyclotomic import (
    CyclotomicNumber,
    NewtonPolygon,
    newton_polygon,
    ord_p,
    polygon_dominates,
    series_exp,
)
from tsl.core.exceptions import PolynomialityFailure
from tsl.core.finite_field import ClosedPoint
from tsl.core.geometry.laurent import ToricFamily
from tsl.core.lfunctions.operations import OpSpec, op_char_poly
from tsl.core.lfunctions.sums import conjugate_sums_agree, exp_sum, zero_fiber_sum
from tsl.schemas.hypotheses import HypothesisReport
from tsl.schemas.lfunction import CyclotomicModel, FiberLReport, PolygonModel
from tsl.storage.sum_cache import SumCache
from tsl.utils.rational import format_rational

logger = logging.getLogger(__name__)


def _cyc_model(x: CyclotomicNumber) -> CyclotomicModel:
    return CyclotomicModel(**x.to_dict())


def _polygon_model(polygon: NewtonPolygon) -> PolygonModel:
    return PolygonModel(**polygon.to_dict())


@dataclass
class FiberL:
    """一个纤维的 L 数据"""

    point: Optional[ClosedPoint]
    sums: List[CyclotomicNumber]
    lpoly: List[CyclotomicNumber]
    polygon: NewtonPolygon
    ord_unit: Fraction
    bound: Optional[NewtonPolygon] = None
    dominates: Optional[bool] = None
    basis_weights: List[Fraction] = field(default_factory=list)
    conjugates_agree: Optional[bool] = None

    @property
    def degree(self) -> int:
        return len(self.lpoly) - 1

    @property
    def determinant(self) -> CyclotomicNumber:
        return fiber_determinant(self.lpoly)

    @property
    def determinant_ord(self) -> Optional[Fraction]:
        value = ord_p(self.determinant).value
        return None if value is None else value / self.ord_unit

    @property
    def endpoints_agree(self) -> Optional[bool]:
        """ord_q det 等于基权重之和，即牛顿多边形与下界终点重合"""
        if self.bound is None:
            return None
        return self.determinant_ord == self.bound.vertices[-1][1]

    @property
    def is_zero_fiber(self) -> bool:
        return self.point is None

    def to_schema(self) -> FiberLReport:
        point = (
            self.point.describe()
            if self.point is not None
            else {"degree": 1, "representative": "zero"}
        )
        return FiberLReport(
            lambda_point=point,
            degree=self.degree,
            sums=[_cyc_model(s) for s in self.sums],
            lpoly=[_cyc_model(c) for c in self.lpoly],
            polygon=_polygon_model(self.polygon),
            ord_unit=format_rational(self.ord_unit),
            bound=_polygon_model(self.bound) if self.bound is not None else None,
            dominates=self.dominates,
            basis_weights=[format_rational(w) for w in self.basis_weights],
            zero_fiber=self.is_zero_fiber,
            determinant=_cyc_model(self.determinant),
            determinant_ord=None if self.determinant_ord is None else format_rational(self.determinant_ord),
            endpoints_agree=self.endpoints_agree,
            conjugates_agree=self.conjugates_agree,
        )


def fiber_determinant(lpoly: List[CyclotomicNumber]) -> CyclotomicNumber:
    """det A，由 det(1 − ∧^N(A)T) = 1 − det(A)·T 读出"""
    N = len(lpoly) - 1
    if N == 0:
        return CyclotomicNumber.one(lpoly[0].p)
    return op_char_poly(lpoly, OpSpec((("ext", N),)))[1] * (-1)


def l_series(sums: List[CyclotomicNumber], n: int, order: int) -> List[CyclotomicNumber]:
    """exp((−1)^{n+1} Σ_{r ≤ order} S_r T^r/r) 截断到 T^order"""
    p = sums[0].p
    sign = 1 if (n + 1) % 2 == 0 else -1
    log_coeffs = [CyclotomicNumber.zero(p)] + [s * sign / r for r, s in enumerate(sums[:order], start=1)]
    return series_exp(log_coeffs, order)


def _check_polynomial(series: List[CyclotomicNumber], degree: int, context: dict) -> List[CyclotomicNumber]:
    tail = [i for i in range(degree + 1, len(series)) if not series[i].is_zero()]
    if tail:
        logger.error(f"L 级数在 T^{tail[0]} 处不为零: {context}")
        raise PolynomialityFailure(
            f"T^{tail[0]} 的系数不为零，L 不是 {degree} 次多项式",
            dict(context, nonzero_tail=tail),
        )
    poly = series[: degree + 1]
    if any(not c.is_integral() for c in poly):
        raise PolynomialityFailure("L 多项式的系数不是分圆整数", context)
    return poly


def fiber_l_polynomial(
    family: ToricFamily,
    point: ClosedPoint,
    cache: Optional[SumCache] = None,
) -> Tuple[List[CyclotomicNumber], List[CyclotomicNumber]]:
    """(S_1 … S_{2N}, L 多项式的系数)

    Raises:
        PolynomialityFailure: 尾部系数非零或 T^N 系数为零
        SizeCeilingExceeded: 环面点数超过上限
    """
    N = family.geometry.N
    sums = [exp_sum(family, point, r, cache) for r in range(1, 2 * N + 1)]
    series = l_series(sums, family.n, 2 * N)
    context = {"lambda": point.describe(), "N": N}
    lpoly = _check_polynomial(series, N, context)
    if lpoly[N].is_zero():
        raise PolynomialityFailure(f"T^{N} 的系数为零，L 的次数小于 N", context)
    return sums, lpoly


def np_lower_bound(basis: BasisB, deg: int = 1) -> NewtonPolygon:
    """以基权重 {w(v) : v ∈ B} 为斜率的多边形；按 ord_{q^deg} 归一化后与 deg 无关"""
    return NewtonPolygon.from_slopes(basis.weights)


def fiber_L(
    family: ToricFamily,
    point: ClosedPoint,
    basis: Optional[BasisB] = None,
    cache: Optional[SumCache] = None,
    hypotheses: Optional[HypothesisReport] = None,
) -> FiberL:
    """纤维 λ 的 L 多项式、牛顿多边形及其与下界的比较

    Raises:
        PolynomialityFailure: 级数不是 N 次多项式
        SizeCeilingExceeded: 环面点数超过上限
    """
    sums, lpoly = fiber_l_polynomial(family, point, cache)
    ord_unit = Fraction(family.base_field.m * point.degree)
    polygon = newton_polygon(lpoly, ord_unit)
    if basis is None:
        basis = compute_basis(family, point.representative, hypotheses=hypotheses)
    bound = np_lower_bound(basis, point.degree)
    dominates = polygon_dominates(polygon, bound)
    if dominates:
        logger.info(f"纤维 {point.representative.coeffs} (次数 {point.degree}): 斜率 {polygon.slopes}")
    else:
        logger.error(f"纤维 {point.representative.coeffs} 的牛顿多边形低于下界")
    conjugates = conjugate_sums_agree(family, point) if point.degree > 1 else None
    if conjugates is False:
        logger.error(f"纤维 {point.representative.coeffs} 的共轭给出不同的和")
    result = FiberL(point, sums, lpoly, polygon, ord_unit, bound, dominates, basis.weights, conjugates)
    if not result.endpoints_agree:
        logger.warning(f"ord_q det = {result.determinant_ord} 与基权重之和不一致")
    return result


def zero_fiber_L(family: ToricFamily, cache: Optional[SumCache] = None) -> FiberL:
    """λ = 0 的纤维 f(x)；次数不预设，取 T^N 以内最后一个非零系数并检查 T^{N+1} … T^{2N}

    f 可以退化，此时 L 是有理函数而不是多项式。

    Raises:
        PolynomialityFailure: 级数在 T^N 之后不为零
    """
    N = family.geometry.N
    sums = [zero_fiber_sum(family, r, cache) for r in range(1, 2 * N + 1)]
    series = l_series(sums, family.n, 2 * N)
    degree = max((i for i in range(1, N + 1) if not series[i].is_zero()), default=0)
    lpoly = _check_polynomial(series, degree, {"lambda": "zero", "N": N})
    ord_unit = Fraction(family.base_field.m)
    polygon = newton_polygon(lpoly, ord_unit)
    logger.info(f"零纤维 L 多项式次数 {degree}")
    return FiberL(None, sums, lpoly, polygon, ord_unit)
