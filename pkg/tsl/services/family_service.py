"""命令编排：问题文件 → 族 → 各类报告"""
import functools
import logging
from typing import Any, Callable, Dict, List, Optional, Tuple, TypeVar

from tsl.core.cohomology import compute_basis, verify_lambda_independence
from tsl.core.config.settings import Settings, current_settings, use_settings
from tsl.core.exceptions import ParseError
from tsl.core.finite_field import ClosedPoint, closed_points
from tsl.core.geometry.context import GeometryContext
from tsl.core.geometry.laurent import ToricFamily
from tsl.core.geometry.upsilon import deformed_denominator, deformed_weight, relative_polytope_upsilon
from tsl.core.hypotheses import check_hypotheses, ensure_hypotheses, fiber_nondegenerate
from tsl.core.lfunctions.bounds import degree_bound_report
from tsl.core.lfunctions.fiber import fiber_L
from tsl.core.lfunctions.global_l import global_L_truncated
from tsl.core.lfunctions.operations import OpSpec
from tsl.core.parallel_processor import get_parallel_processor
from tsl.schemas.basis import LambdaIndependenceReport
from tsl.schemas.geometry import ChamberModel, FacetModel, GeometryReport, UpsilonReport
from tsl.schemas.hypotheses import HypothesisReport
from tsl.schemas.lfunction import FiberBatchReport, GlobalCommandReport
from tsl.schemas.problem import ProblemFile
from tsl.storage.sum_cache import SumCache, get_sum_cache
from tsl.utils.rational import format_rational, format_vector

logger = logging.getLogger(__name__)

# 命令行参数名到配置项
_LIMIT_KEYS = {
    "ceiling": "ENUMERATION_CEILING",
    "search_ceiling": "NONDEG_SEARCH_CEILING",
    "k_max": "DEFAULT_KMAX",
    "d_max": "DEFAULT_DMAX",
}


def apply_limits(
    problem: ProblemFile,
    overrides: Optional[Dict[str, Optional[int]]] = None,
    base: Optional[Settings] = None,
) -> Tuple[Settings, Dict[str, Any]]:
    """在 base（默认当前配置）的副本上应用问题文件与命令行中的上限，命令行优先；base 本身不变

    Returns:
        (新的配置, 解析后的全部上限)

    Raises:
        ParseError: 上限为负，或 ceiling 类上限为零
    """
    base = base or current_settings()
    overrides = overrides or {}
    update: Dict[str, int] = {}
    for key, setting in _LIMIT_KEYS.items():
        value = overrides.get(key)
        if value is None:
            value = getattr(problem.limits, key)
        if value is not None:
            if value < 0 or (key.endswith("ceiling") and value == 0):
                raise ParseError(f"{key} 的取值不合法: {value}", {key: value})
            update[setting] = value
    config = base.model_copy(update=update)
    resolved: Dict[str, Any] = {key: getattr(config, setting) for key, setting in _LIMIT_KEYS.items()}
    resolved["basis_cutoff_escalation"] = config.BASIS_CUTOFF_ESCALATION
    return config, resolved


F = TypeVar("F", bound=Callable[..., Any])


def _scoped(method: F) -> F:
    """方法体在服务自己的配置下执行"""

    @functools.wraps(method)
    def wrapper(self: "FamilyService", *args: Any, **kwargs: Any) -> Any:
        with use_settings(self.config):
            return method(self, *args, **kwargs)

    return wrapper  # type: ignore[return-value]


def geometry_report(family: ToricFamily) -> GeometryReport:
    """GeometryContext（含 Υ）序列化"""
    ctx: GeometryContext = family.geometry
    visible = {f.tau_id for f in ctx.gamma1}
    upsilon = None
    if family.lower_order:
        ups = relative_polytope_upsilon(family)
        M = family.deformation_exponent
        upsilon = UpsilonReport(
            t_dim=ups.dim,
            deformation_exponent=M,
            vertices=[format_vector(v) for v in ups.vertices()],
            span_dim=ups.span_dim,
            normalized_volume=format_rational(ups.normalized_volume()),
            deformed_denominator=deformed_denominator(ctx, M),
            term_weights=[
                format_rational(deformed_weight(ctx, M, t.lambda_exp, t.x_exp)) for t in family.lower_order
            ],
        )
    return GeometryReport(
        n=ctx.n,
        support=[list(v) for v in ctx.support],
        mu=list(ctx.mu),
        case=ctx.case.value,
        lsigma=format_vector(ctx.lsigma),
        lsigma_mu=format_rational(ctx.lsigma_mu),
        s=format_rational(ctx.s),
        facets=[
            FacetModel(
                tau_id=f.tau_id,
                form=list(f.form),
                tau=[list(v) for v in f.tau],
                phi_mu=f.mu_value,
                visible=f.tau_id in visible,
            )
            for f in ctx.facets
        ],
        gamma1=[f.tau_id for f in ctx.gamma1],
        chambers=[
            ChamberModel(
                kind=c.kind,
                tau_id=c.tau_id,
                inequalities=[list(q) for q in c.inequalities],
                weight_form=format_vector(c.weight_form),
                m_form=format_vector(c.m_form),
            )
            for c in ctx.chambers
        ],
        vertices=[list(v) for v in ctx.vertices()],
        D=ctx.D,
        d=ctx.d,
        e=ctx.e,
        N=ctx.N,
        upsilon=upsilon,
    )


class FamilyService:
    """一个问题文件上的全部命令"""

    def __init__(self, problem: ProblemFile, cache: Optional[SumCache] = None, config: Optional[Settings] = None):
        """初始化服务

        Args:
            problem: 问题文件
            cache: 特征和缓存，默认使用单例
            config: 本服务使用的配置，默认为当前配置
        """
        self.problem = problem
        self.config = config or current_settings()
        self.family = problem.to_family()
        with use_settings(self.config):
            self.cache = cache or get_sum_cache()
        self._hypotheses: Optional[HypothesisReport] = None

    @_scoped
    def select_points(self, selector: str = "1", max_degree: int = 1) -> List[ClosedPoint]:
        """--lambda 的取值：all 表示次数 ≤ max_degree 的全部闭点，否则是 𝔽_q 中的非零元素

        元素写成整数或逗号分隔的系数向量。

        Raises:
            ParseError: 无法解析或为零
        """
        if selector.strip().lower() == "all":
            return closed_points(self.family.tower, max_degree)
        field = self.family.base_field
        try:
            coeffs = [int(x) for x in selector.split(",")]
        except ValueError as e:
            raise ParseError(f"无法解析 λ: {selector!r}", {"lambda": selector}) from e
        value = coeffs[0] if len(coeffs) == 1 else coeffs
        if len(coeffs) not in (1, field.m):
            raise ParseError(f"λ 的系数向量长度应为 {field.m}: {selector!r}", {"lambda": selector})
        lam = field.element(value)
        if lam.is_zero():
            raise ParseError("λ 必须非零", {"lambda": selector})
        return [ClosedPoint(lam, 1)]

    @_scoped
    def analyze(self) -> GeometryReport:
        return geometry_report(self.family)

    @_scoped
    def check(self) -> HypothesisReport:
        if self._hypotheses is None:
            self._hypotheses = check_hypotheses(self.family.f, self.family.mu, self.config.DEFAULT_KMAX)
        return self._hypotheses

    def _require_hypotheses(self) -> HypothesisReport:
        report = self.check()
        ensure_hypotheses(report)
        return report

    @_scoped
    def basis(self, selector: str = "1", max_degree: int = 1) -> LambdaIndependenceReport:
        """选定纤维上的基及其 λ 无关性

        Raises:
            PreconditionFailed: 假设未通过
            RankMismatchError: 基元个数与 N 不符
        """
        hypotheses = self._require_hypotheses()
        points = self.select_points(selector, max_degree)
        if len(points) == 1:
            b = compute_basis(self.family, points[0].representative, hypotheses=hypotheses)
            return LambdaIndependenceReport(
                independent=True, reference=[list(v) for v in b.monomials], bases=[b.to_schema()]
            )
        _, report = verify_lambda_independence(self.family, [pt.representative for pt in points])
        return report

    def _fiber_report(self, point: ClosedPoint, hypotheses: HypothesisReport):
        nondeg = fiber_nondegenerate(self.family, point, self.config.DEFAULT_KMAX, hypotheses)
        result = fiber_L(self.family, point, cache=self.cache, hypotheses=hypotheses)
        return result.to_schema().model_copy(update={"nondegeneracy": nondeg})

    @_scoped
    def fiber(self, selector: str = "1", max_degree: int = 1) -> FiberBatchReport:
        """选定纤维的 L 多项式与牛顿多边形

        Raises:
            PreconditionFailed: 假设未通过
            TheoremViolation: 退化纤维或多项式性失败
        """
        hypotheses = self._require_hypotheses()
        points = self.select_points(selector, max_degree)
        _ = self.family.geometry  # 并行前先构建几何
        processor = get_parallel_processor()
        reports = processor.map(lambda pt: self._fiber_report(pt, hypotheses), points)
        all_dominate = all(r.dominates for r in reports)
        all_consistent = all(r.endpoints_agree is not False and r.conjugates_agree is not False for r in reports)
        logger.info(f"完成 {len(reports)} 个纤维，全部在下界之上: {all_dominate}，终点与共轭一致: {all_consistent}")
        return FiberBatchReport(fibers=reports, all_dominate=all_dominate, all_consistent=all_consistent)

    @_scoped
    def global_l(self, op: Optional[str] = None, domain: str = "gm", d_max: Optional[int] = None) -> GlobalCommandReport:
        """截断的整体 L 函数与次数界

        Raises:
            PreconditionFailed: 假设未通过
            CrossCheckMismatch: Euler 积与矩级数不一致
        """
        self._require_hypotheses()
        spec = OpSpec.parse(op or self.problem.op or "sym1")
        d_max = self.config.DEFAULT_DMAX if d_max is None else d_max
        truncation = global_L_truncated(self.family, spec, domain, d_max, self.cache)
        return GlobalCommandReport(
            global_l=truncation.to_schema(),
            bounds=degree_bound_report(self.family.geometry, spec),
        )


def gc_cache(cache_dir: Optional[str] = None, purge: bool = False) -> Tuple[int, int]:
    """清理缓存目录，返回 (保留, 删除)"""
    cache = SumCache(cache_dir=cache_dir, enabled=True)
    return cache.gc(purge=purge)

