"""假设 H(i)–H(v) 的判定与非退化性的有界穷举

非退化性：对 Δ∞ 的每个不含原点的面 σ，环面偏导 x_i ∂f^(σ)/∂x_i 在 (𝔽̄_q*)^n 上没有公共零点。
这里在 𝔽_{q^k}（k ≤ k_max）上穷举，找到见证即可判定退化，否则只给出到深度 k 的证书。
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from tsl.core.config.settings import current_settings
from tsl.core.exceptions import (
    ExcludedCaseError,
    NotFullDimensionalError,
    NotQuasihomogeneousError,
    PreconditionFailed,
    SizeCeilingExceeded,
    TheoremViolation,
)
from tsl.core.finite_field import ClosedPoint, FieldElement, FieldSpec, FieldTower, torus_log_block
from tsl.core.geometry.context import Case, compute_lsigma, cone_facets, faces_at_infinity, visible_faces
from tsl.core.geometry.laurent import LaurentPolynomial, ToricFamily
from tsl.core.geometry.polytope import Polytope, dot, linear_rank
from tsl.core.parallel_processor import get_parallel_processor
from tsl.schemas.hypotheses import HypothesisReport, NondegStatus, NondegVerdict, Verdict, VerdictStatus
from tsl.utils.rational import format_rational, format_vector

logger = logging.getLogger(__name__)

Kernel = Tuple[np.ndarray, np.ndarray]


def _first_common_zero(field: FieldSpec, n: int, kernels: Sequence[Kernel], start: int, stop: int) -> Optional[int]:
    """区间 [start, stop) 中第一个使所有多项式同时为零的环面点下标"""
    tables = field.tables
    radix = field.order - 1
    logs = torus_log_block(field, n, start, stop)
    alive = np.ones(stop - start, dtype=bool)
    for exps, coef_logs in kernels:
        term_logs = (logs @ exps.T + coef_logs) % radix
        values = tables.digits_by_log[term_logs].sum(axis=1) % field.p
        alive &= ~values.any(axis=1)
        if not alive.any():
            return None
    hits = np.flatnonzero(alive)
    return start + int(hits[0]) if hits.size else None


def _verify_witness(poly: LaurentPolynomial, point: Sequence[FieldElement]) -> None:
    for partial in poly.toric_partials():
        if not partial.evaluate(point).is_zero():
            raise ArithmeticError(f"见证点 {[x.coeffs for x in point]} 复核失败")


def face_nondegenerate(
    f: LaurentPolynomial,
    face: Sequence[Sequence[int]],
    k_max: Optional[int] = None,
    tower: Optional[FieldTower] = None,
    ceiling: Optional[int] = None,
) -> NondegVerdict:
    """在 f 系数域的 k 次扩张（k = 1..k_max）上搜索 f^(σ) 环面偏导的公共零点

    Args:
        f: 多项式，系数在 tower 的某一层
        face: 面 σ 的指数集合
        k_max: 搜索深度，默认 settings.DEFAULT_KMAX
        tower: 扩张塔，缺省时以 f 的系数域为底
        ceiling: 单层环面点数上限，默认 settings.NONDEG_SEARCH_CEILING

    Raises:
        SizeCeilingExceeded: 第一层环面已超过上限
    """
    k_max = k_max or current_settings().DEFAULT_KMAX
    limit = ceiling or current_settings().NONDEG_SEARCH_CEILING
    tower = tower or FieldTower(f.field)
    k0 = tower.degree_of(f.field)
    face_poly = f.restrict(face)
    face_list = [list(v) for v in sorted(tuple(v) for v in face)]
    processor = get_parallel_processor()

    searched: List[int] = []
    for k in range(1, k_max + 1):
        size = (tower.q ** (k0 * k) - 1) ** f.n
        if size > limit:
            if not searched:
                raise SizeCeilingExceeded(
                    f"非退化搜索的环面 {size} 个点超过上限 {limit}", {"size": size, "ceiling": limit}
                )
            logger.warning(f"面 {face_list} 的搜索在深度 {searched[-1]} 停止: 下一层 {size} 个点超过上限")
            break
        level = tower.level(k0 * k)
        lifted = face_poly.map_coefficients(tower.embedding(k0, k0 * k))
        partials = [q for q in lifted.toric_partials() if not q.is_zero()]
        kernels = [(q.exponent_matrix(), q.coefficient_logs()) for q in partials]
        if kernels:
            hits = processor.map_range(
                lambda start, stop: _first_common_zero(level, f.n, kernels, start, stop), size
            )
            found = [h for h in hits if h is not None]
            index = min(found) if found else None
        else:
            # 偏导全部恒为零
            index = 0
        if index is not None:
            logs = torus_log_block(level, f.n, index, index + 1)[0]
            point = tuple(level.from_log(int(x)) for x in logs)
            _verify_witness(lifted, point)
            logger.info(f"面 {face_list} 在 {level} 上退化")
            return NondegVerdict(
                status=NondegStatus.DEGENERATE_AT,
                searched_degrees=searched + [k],
                face=face_list,
                point=[list(x.coeffs) for x in point],
                field=level.describe(),
            )
        searched.append(k)
        logger.debug(f"面 {face_list} 在 {level} 上没有公共零点")
    return NondegVerdict(status=NondegStatus.NONDEGENERATE_UP_TO, searched_degrees=searched)


def check_structural(f: LaurentPolynomial, mu: Sequence[int]) -> Tuple[Verdict, Verdict, Verdict, Verdict, Optional[Case]]:
    """H(i)、H(ii)、H(iv)、H(v)；前置项失败时后续项为 Inconclusive"""
    n = f.n
    support = f.support
    rank = linear_rank(support)
    if rank < n:
        h1 = Verdict.failed(f"Supp(f) ∪ {{0}} 的秩为 {rank} < {n}", {"rank": rank})
        skip = Verdict.inconclusive("H(i) 未通过")
        return h1, skip, skip, skip, None
    h1 = Verdict.passed(rank=rank)

    try:
        lsigma = compute_lsigma(support)
    except (NotQuasihomogeneousError, NotFullDimensionalError) as e:
        skip = Verdict.inconclusive("H(ii) 未通过")
        return h1, Verdict.failed(e.message, e.details), skip, skip, None
    h2 = Verdict.passed(lsigma=format_vector(lsigma))

    lmu = dot(lsigma, mu)
    try:
        case, _, gamma1 = visible_faces(cone_facets(support), lsigma, mu)
    except ExcludedCaseError as e:
        witness = dict(e.details)
        witness["lsigma_mu"] = format_rational(lmu)
        return h1, h2, Verdict.failed(e.message, witness), Verdict.inconclusive("H(iv) 未通过"), None
    h4 = Verdict.passed(case=case.value, lsigma_mu=format_rational(lmu))

    p = f.field.p
    for facet in gamma1:
        if facet.mu_value % p == 0:
            h5 = Verdict.failed(
                f"p = {p} 整除 φ^({facet.tau_id})(μ) = {facet.mu_value}",
                {
                    "tau": facet.tau_id,
                    "tau_points": [list(v) for v in facet.tau],
                    "form": list(facet.form),
                    "phi_mu": facet.mu_value,
                    "phi_mu_mod_p": facet.mu_value % p,
                },
            )
            return h1, h2, h4, h5, case
    h5 = Verdict.passed(phi_mu={facet.tau_id: facet.mu_value for facet in gamma1})
    return h1, h2, h4, h5, case


def check_hypotheses(f: LaurentPolynomial, mu: Sequence[int], k_max: Optional[int] = None) -> HypothesisReport:
    """H(i)–H(v) 的完整报告；假设不成立是判定结果而不是异常"""
    h1, h2, h4, h5, case = check_structural(f, mu)

    if h2.status != VerdictStatus.PASS:
        h3 = Verdict.inconclusive("H(i) 或 H(ii) 未通过")
    else:
        h3 = _check_nondegenerate(f, k_max)

    report = HypothesisReport(
        p=f.field.p, case=case.value if case else None, h1=h1, h2=h2, h3=h3, h4=h4, h5=h5
    )
    for name, verdict in report.verdicts().items():
        if verdict.status == VerdictStatus.FAIL:
            logger.info(f"{name} 未通过: {verdict.message}")
        elif verdict.status == VerdictStatus.INCONCLUSIVE:
            logger.warning(f"{name} 无法判定: {verdict.message}")
    return report


def _check_nondegenerate(f: LaurentPolynomial, k_max: Optional[int]) -> Verdict:
    hull = Polytope([(0,) * f.n] + f.support)
    depth: Optional[int] = None
    for face in faces_at_infinity(hull):
        try:
            verdict = face_nondegenerate(f, face, k_max)
        except SizeCeilingExceeded as e:
            return Verdict.inconclusive(f"面 {[list(v) for v in face]}: {e.message}")
        if verdict.status == NondegStatus.DEGENERATE_AT:
            return Verdict.failed(f"f 在面 {verdict.face} 上退化", verdict.model_dump(mode="json"))
        depth = verdict.depth if depth is None else min(depth, verdict.depth)
    return Verdict(
        status=VerdictStatus.PASS,
        message=f"有界搜索到深度 {depth} 未发现退化",
        depth=depth,
    )


def require_structural(family: ToricFamily, hypotheses: Optional[HypothesisReport] = None) -> None:
    if hypotheses is not None:
        if not hypotheses.structural_ok or hypotheses.h3.status == VerdictStatus.FAIL:
            raise PreconditionFailed("假设检查未通过", {"report": hypotheses.model_dump(mode="json")})
        return
    h1, h2, h4, h5, _ = check_structural(family.f, family.mu)
    for name, verdict in (("h1", h1), ("h2", h2), ("h4", h4), ("h5", h5)):
        if verdict.status != VerdictStatus.PASS:
            raise PreconditionFailed(f"{name} 未通过: {verdict.message}", {name: verdict.model_dump(mode="json")})


def fiber_nondegenerate(
    family: ToricFamily,
    point: ClosedPoint,
    k_max: Optional[int] = None,
    hypotheses: Optional[HypothesisReport] = None,
) -> NondegVerdict:
    """纤维 F(λ, x) 关于 Δ∞(f, μ) 的非退化性

    Raises:
        PreconditionFailed: 结构性假设不成立
        TheoremViolation: 找到退化见证
    """
    require_structural(family, hypotheses)
    fiber = family.fiber(point.representative)
    depth: Optional[int] = None
    for face in family.geometry.fiber_faces_at_infinity():
        try:
            verdict = face_nondegenerate(fiber, face, k_max, tower=family.tower)
        except SizeCeilingExceeded as e:
            logger.warning(f"纤维 λ = {point.representative.coeffs} 的面 {[list(v) for v in face]} 无法搜索: {e.message}")
            return NondegVerdict(status=NondegStatus.INCONCLUSIVE)
        if verdict.status == NondegStatus.DEGENERATE_AT:
            logger.error(f"纤维 λ = {point.representative.coeffs} 在面 {verdict.face} 上退化")
            raise TheoremViolation(
                "满足假设的族出现了退化纤维",
                {"lambda": point.describe(), "witness": verdict.model_dump(mode="json")},
            )
        depth = verdict.depth if depth is None else min(depth, verdict.depth)
    return NondegVerdict(
        status=NondegStatus.NONDEGENERATE_UP_TO, searched_degrees=list(range(1, (depth or 0) + 1))
    )


def ensure_hypotheses(report: HypothesisReport) -> None:
    """任何一项为 Fail 即抛出 PreconditionFailed"""
    if report.any_failed:
        failed = [k for k, v in report.verdicts().items() if v.status == VerdictStatus.FAIL]
        raise PreconditionFailed(f"假设 {failed} 未通过", {"failed": failed})
