"""截断的整体 L 函数 L(ℒ, F, 𝔾_m 或 𝔸, T)

两种独立算法必须给出相同的前 d_max 项：
1. Euler 积 ∏_λ det(1 − ℒ(A_λ)T^{deg λ})^{−1}，A_λ 取自闭点的 L 多项式
2. 矩级数 exp(Σ_r M_r T^r/r)，M_r = Σ_{λ ∈ 𝔽_{q^r}^*} Tr ℒ(A_λ)，迹直接由该纤维在 𝔽_{q^{ri}} 上的和
   经 Newton 恒等式得到，不经过 L 多项式
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from tsl.core.config.settings import current_settings
from tsl.core.cyclotomic import (
    CyclotomicNumber,
    series_exp,
    series_inverse,
    series_mul,
    series_substitute_power,
)
from tsl.core.exceptions import CrossCheckMismatch, ExcludedCaseError, PolynomialityFailure
from tsl.core.finite_field import closed_points
from tsl.core.geometry.laurent import ToricFamily
from tsl.core.lfunctions.fiber import fiber_l_polynomial, zero_fiber_L
from tsl.core.lfunctions.operations import OpSpec, op_char_poly, op_trace
from tsl.core.lfunctions.sums import level_sum, zero_fiber_sum
from tsl.core.parallel_processor import get_parallel_processor
from tsl.schemas.lfunction import CyclotomicModel, GlobalLReport
from tsl.storage.sum_cache import SumCache

logger = logging.getLogger(__name__)

DOMAINS = ("gm", "a1")

Series = List[CyclotomicNumber]


@dataclass
class GlobalLTruncation:
    op: OpSpec
    domain: str
    d_max: int
    op_dimension: int
    coefficients: Series
    moment_coefficients: Series
    points_by_degree: Dict[int, int]
    zero_fiber_degree: Optional[int] = None
    notes: List[str] = field(default_factory=list)
    q: Optional[int] = None

    @property
    def cross_check(self) -> bool:
        return self.coefficients == self.moment_coefficients

    @property
    def integral(self) -> bool:
        return all(c.is_integral() for c in self.coefficients)

    @property
    def zeta_check(self) -> Optional[bool]:
        """Sym⁰ 把每个局部因子变成 1 − T^deg，整体就是定义域的 zeta 函数"""
        if self.q is None or any(k != 0 for _, k in self.op.factors):
            return None
        return [c.to_rational() if c.is_rational() else None for c in self.coefficients] == domain_zeta(
            self.domain, self.q, self.d_max
        )

    def to_schema(self) -> GlobalLReport:
        return GlobalLReport(
            op=str(self.op),
            op_order=self.op.order,
            op_dimension=self.op_dimension,
            domain=self.domain,
            d_max=self.d_max,
            coefficients=[CyclotomicModel(**c.to_dict()) for c in self.coefficients],
            moment_coefficients=[CyclotomicModel(**c.to_dict()) for c in self.moment_coefficients],
            cross_check=self.cross_check,
            integral=self.integral,
            zeta_check=self.zeta_check,
            points_by_degree={str(d): c for d, c in sorted(self.points_by_degree.items())},
            zero_fiber_degree=self.zero_fiber_degree,
            notes=list(self.notes),
        )


def domain_zeta(domain: str, q: int, d_max: int) -> List[int]:
    """Z(𝔾_m) = (1 − T)/(1 − qT)，Z(𝔸¹) = 1/(1 − qT)"""
    if domain == "a1":
        return [q**k for k in range(d_max + 1)]
    return [1] + [q ** (k - 1) * (q - 1) for k in range(1, d_max + 1)]


def _power_sum_sign(n: int) -> int:
    """det(1 − AT) = L^{(−1)^{n+1}} 给出 p_i = (−1)^n S_i"""
    return 1 if n % 2 == 0 else -1


def _trace_from_sums(power_sum: Callable[[int], CyclotomicNumber], op: OpSpec, p: int) -> CyclotomicNumber:
    q = [CyclotomicNumber.zero(p)] + [power_sum(i) for i in range(1, op.max_index + 1)]
    return op_trace(q, op)


def local_factor_from_sums(
    power_sum: Callable[[int], CyclotomicNumber], op: OpSpec, d_max: int, p: int
) -> Series:
    """exp(Σ_j Tr ℒ(A^j) T^j/j)，A 的幂和 p_m 由 power_sum(m) 给出；L 不必是多项式"""
    traces = [_trace_from_sums(lambda i, j=j: power_sum(i * j), op, p) for j in range(1, d_max + 1)]
    log_coeffs = [CyclotomicNumber.zero(p)] + [t / j for j, t in enumerate(traces, start=1)]
    return series_exp(log_coeffs, d_max)


def zero_fiber_local_factor(
    family: ToricFamily, op: OpSpec, d_max: int, cache: Optional[SumCache] = None
) -> Series:
    """λ = 0 的局部因子，由 f 在各层上的和直接给出"""
    sign = _power_sum_sign(family.n)
    return local_factor_from_sums(lambda m: zero_fiber_sum(family, m, cache) * sign, op, d_max, family.p)


def euler_product(
    factors: List[Tuple[int, Series]],
    op: OpSpec,
    d_max: int,
    p: int,
    extra: Sequence[Series] = (),
) -> Series:
    """∏ 1/E(T^deg)，E 为 ℒ 作用后的特征多项式；extra 为已经展开好的局部因子"""
    result: Series = [CyclotomicNumber.one(p)] + [CyclotomicNumber.zero(p)] * d_max
    for deg, P in factors:
        if deg > d_max:
            continue
        E = op_char_poly(P, op)
        local = series_inverse(series_substitute_power(E, deg, d_max), d_max)
        result = series_mul(result, local, d_max)
    for local in extra:
        result = series_mul(result, local, d_max)
    return result


def moment_series(
    family: ToricFamily,
    op: OpSpec,
    d_max: int,
    domain: str = "gm",
    cache: Optional[SumCache] = None,
) -> Series:
    """exp(Σ_r M_r T^r/r)，逐个枚举 𝔽_{q^r}^* 中的 λ（a1 时加上 λ = 0）"""
    p = family.p
    sign = _power_sum_sign(family.n)
    processor = get_parallel_processor()
    moments = [CyclotomicNumber.zero(p) for _ in range(d_max + 1)]
    for r in range(1, d_max + 1):
        lams = [x for x in family.tower.level(r).elements() if not x.is_zero()]
        traces = processor.map(
            lambda lam: _trace_from_sums(lambda i: level_sum(family, lam, i, cache) * sign, op, p), lams
        )
        total = CyclotomicNumber.zero(p)
        for trace in traces:
            total = total + trace
        if domain == "a1":
            total = total + _trace_from_sums(lambda i: zero_fiber_sum(family, r * i, cache) * sign, op, p)
        moments[r] = total
        logger.debug(f"M_{r}: {len(lams)} 个 λ")
    log_coeffs = [CyclotomicNumber.zero(p)] + [moments[r] / r for r in range(1, d_max + 1)]
    return series_exp(log_coeffs, d_max)


def global_L_truncated(
    family: ToricFamily,
    op: OpSpec,
    domain: str = "gm",
    d_max: Optional[int] = None,
    cache: Optional[SumCache] = None,
) -> GlobalLTruncation:
    """截断到 T^{d_max} 的整体 L 函数及矩校验

    Raises:
        ExcludedCaseError: 仿射直线上的 Λ^{−1} 族
        SizeCeilingExceeded: 闭点或环面超过上限
        CrossCheckMismatch: 两种算法结果不同
    """
    d_max = current_settings().DEFAULT_DMAX if d_max is None else d_max
    if domain not in DOMAINS:
        raise ValueError(f"未知的定义域: {domain}，可选 {DOMAINS}")
    ctx = family.geometry
    if domain == "a1" and family.lambda_sign < 0:
        raise ExcludedCaseError("l_σ(μ) > 1 时族含 Λ^{−1}，不在仿射直线上定义")
    p = family.p
    notes: List[str] = []

    points = closed_points(family.tower, d_max) if d_max >= 1 else []
    processor = get_parallel_processor()
    polys = processor.map(lambda pt: fiber_l_polynomial(family, pt, cache)[1], points)
    factors: List[Tuple[int, Series]] = [(pt.degree, P) for pt, P in zip(points, polys)]

    zero_degree = None
    extra: List[Series] = []
    if domain == "a1" and d_max >= 1:
        try:
            zero = zero_fiber_L(family, cache)
        except PolynomialityFailure as e:
            logger.warning(f"λ = 0 的纤维 L 函数不是多项式: {e.message}")
            extra.append(zero_fiber_local_factor(family, op, d_max, cache))
            notes.append("λ = 0 的纤维 L 函数是有理函数，局部因子由 f 的和直接展开")
        else:
            zero_degree = zero.degree
            factors.append((1, zero.lpoly))
            if zero.degree != ctx.N:
                notes.append(f"λ = 0 的纤维 L 多项式次数为 {zero.degree}，不等于 N = {ctx.N}")

    coefficients = euler_product(factors, op, d_max, p, extra)
    moments = moment_series(family, op, d_max, domain, cache)
    truncation = GlobalLTruncation(
        op=op,
        domain=domain,
        d_max=d_max,
        op_dimension=op.dimension(ctx.N),
        coefficients=coefficients,
        moment_coefficients=moments,
        points_by_degree=dict(Counter(pt.degree for pt in points)),
        zero_fiber_degree=zero_degree,
        notes=notes,
        q=family.base_field.order,
    )
    if not truncation.cross_check:
        logger.error(f"Euler 积与矩级数不一致: {coefficients} vs {moments}")
        raise CrossCheckMismatch(
            "Euler 积与矩级数不一致",
            {
                "euler": [c.to_dict() for c in coefficients],
                "moments": [c.to_dict() for c in moments],
            },
        )
    if truncation.zeta_check is False:
        logger.warning(f"Sym⁰ 截断与 {domain} 的 zeta 函数不一致")
    logger.info(f"整体 L 函数 ({op}, {domain}) 截断到 T^{d_max}: 闭点 {len(points)} 个，校验通过")
    return truncation
