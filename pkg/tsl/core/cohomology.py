"""纤维上约化代数的分次结构与单项式基

第 i 个分次块由 w(v) = i 的单项式张成。x_l ∂F/∂x_l 作用在 w(u) = i−1 的单项式上，
伴随分次乘积只保留 w(u+v) = w(u) + w(v) 的项。每一块中按单项式序贪心选出与像空间
线性无关的单项式，它们的并就是基 B，总数应为 N。
"""
import logging
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from tsl.core.config.settings import current_settings
from tsl.core.exceptions import RankMismatchError
from tsl.core.finite_field import FieldElement, FieldSpec
from tsl.core.geometry.context import GeometryContext
from tsl.core.geometry.laurent import LaurentPolynomial, ToricFamily
from tsl.core.hypotheses import require_structural
from tsl.schemas.basis import BasisMonomial, BasisReport, GradeSummary, LambdaIndependenceReport
from tsl.schemas.hypotheses import HypothesisReport
from tsl.utils.rational import format_rational

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Column = List[FieldElement]


class _Echelon:
    """有限域上逐个插入向量的行阶梯形"""

    def __init__(self, field: FieldSpec):
        self.field = field
        self.rows: List[Tuple[int, Column]] = []

    def reduce(self, vec: Column) -> Column:
        vec = list(vec)
        for pivot, row in self.rows:
            c = vec[pivot]
            if not c.is_zero():
                vec = [a - c * b for a, b in zip(vec, row)]
        return vec

    def add(self, vec: Column) -> bool:
        """向量与已有行线性无关时加入并返回 True"""
        vec = self.reduce(vec)
        pivot = next((j for j, c in enumerate(vec) if not c.is_zero()), None)
        if pivot is None:
            return False
        inv = vec[pivot].inverse()
        self.rows.append((pivot, [c * inv for c in vec]))
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


@dataclass
class GradedImage:
    """第 i 块中 x_l ∂F/∂x_l · x^u 的坐标列"""

    weight: Fraction
    rows: List[Exponent]
    sources: List[Tuple[int, Exponent]]
    columns: List[Column]


@dataclass
class GradeInfo:
    weight: Fraction
    dim: int
    image_rank: int
    basis_count: int


@dataclass
class BasisElement:
    v: Exponent
    weight: Fraction
    m: Fraction


@dataclass
class BasisB:
    """单项式基 B 及逐块统计"""

    lam: FieldElement
    elements: List[BasisElement]
    expected_rank: int
    cutoff: Fraction
    grades: List[GradeInfo] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.elements)

    @property
    def monomials(self) -> List[Exponent]:
        return [e.v for e in self.elements]

    @property
    def weights(self) -> List[Fraction]:
        return [e.weight for e in self.elements]

    def to_schema(self) -> BasisReport:
        return BasisReport(
            field=self.lam.field.describe(),
            lambda_value=list(self.lam.coeffs),
            rank=self.rank,
            expected_rank=self.expected_rank,
            cutoff=format_rational(self.cutoff),
            elements=[
                BasisMonomial(v=list(e.v), weight=format_rational(e.weight), m=format_rational(e.m))
                for e in self.elements
            ],
            grades=[
                GradeSummary(
                    weight=format_rational(g.weight),
                    dim=g.dim,
                    image_rank=g.image_rank,
                    basis_count=g.basis_count,
                )
                for g in self.grades
            ],
        )


def graded_pieces(ctx: GeometryContext, cutoff: Fraction) -> "OrderedDict[Fraction, List[Exponent]]":
    """w ≤ cutoff 的分次块，块内按字典序"""
    pieces: "OrderedDict[Fraction, List[Exponent]]" = OrderedDict()
    for v in ctx.enumerate_weight_le(cutoff):
        pieces.setdefault(ctx.weight(v), []).append(v)
    return pieces


def _image_columns(
    fiber: LaurentPolynomial,
    rows: Sequence[Exponent],
    previous: Sequence[Exponent],
) -> Tuple[List[Tuple[int, Exponent]], List[Column]]:
    index = {v: j for j, v in enumerate(rows)}
    zero = fiber.field.zero()
    sources, columns = [], []
    for u in previous:
        for l in range(fiber.n):
            col = [zero] * len(rows)
            for v, c in fiber.items():
                coeff = c * v[l]
                if coeff.is_zero():
                    continue
                target = tuple(a + b for a, b in zip(u, v))
                j = index.get(target)
                # 不在第 i 块中的项在伴随分次中为零
                if j is not None:
                    col[j] = col[j] + coeff
            sources.append((l, tuple(u)))
            columns.append(col)
    return sources, columns


def graded_jacobian_image(family: ToricFamily, lam: FieldElement, weight_i: Fraction) -> GradedImage:
    """第 weight_i 块中雅可比像的列

    Args:
        family: 族
        lam: 纤维参数
        weight_i: 块的权重
    """
    ctx = family.geometry
    weight_i = Fraction(weight_i)
    pieces = graded_pieces(ctx, weight_i)
    rows = pieces.get(weight_i, [])
    previous = pieces.get(weight_i - 1, [])
    sources, columns = _image_columns(family.fiber(lam), rows, previous)
    return GradedImage(weight_i, list(rows), sources, columns)


def _basis_at_cutoff(family: ToricFamily, fiber: LaurentPolynomial, lam: FieldElement, cutoff: Fraction) -> BasisB:
    ctx = family.geometry
    pieces = graded_pieces(ctx, cutoff)
    elements: List[BasisElement] = []
    grades: List[GradeInfo] = []
    for weight, rows in pieces.items():
        echelon = _Echelon(fiber.field)
        _, columns = _image_columns(fiber, rows, pieces.get(weight - 1, []))
        for col in columns:
            echelon.add(col)
        image_rank = echelon.rank
        zero, one = fiber.field.zero(), fiber.field.one()
        chosen = 0
        for j, v in enumerate(rows):
            unit = [zero] * len(rows)
            unit[j] = one
            if echelon.add(unit):
                elements.append(BasisElement(v, weight, ctx.m_of(v)))
                chosen += 1
        grades.append(GradeInfo(weight, len(rows), image_rank, chosen))
        logger.debug(f"权重 {weight}: 维数 {len(rows)}, 像的秩 {image_rank}, 基 {chosen} 个")
    return BasisB(lam, elements, ctx.N, cutoff, grades)


def compute_basis(
    family: ToricFamily,
    lam: FieldElement,
    weight_cutoff: Optional[Fraction] = None,
    hypotheses: Optional[HypothesisReport] = None,
) -> BasisB:
    """纤维 λ 上的单项式基

    截断从 n 开始，基的个数不足 N 时逐次加 1，最多加 settings.BASIS_CUTOFF_ESCALATION 次。

    Raises:
        PreconditionFailed: 结构性假设不成立
        RankMismatchError: 截断用尽后个数仍不是 N，或个数超过 N
    """
    require_structural(family, hypotheses)
    ctx = family.geometry
    fiber = family.fiber(lam)
    start = Fraction(weight_cutoff) if weight_cutoff is not None else Fraction(ctx.n)
    for extra in range(current_settings().BASIS_CUTOFF_ESCALATION + 1):
        cutoff = start + extra
        last = _basis_at_cutoff(family, fiber, lam, cutoff)
        if last.rank == ctx.N:
            logger.info(f"λ = {list(lam.coeffs)} 的基: {last.rank} 个单项式, 截断 {cutoff}")
            return last
        if last.rank > ctx.N:
            break
        logger.warning(f"截断 {cutoff} 下只得到 {last.rank} 个基元 (N = {ctx.N})，提高截断")
    logger.error(f"λ = {list(lam.coeffs)} 的基元个数 {last.rank} 与 N = {ctx.N} 不符")
    raise RankMismatchError(
        f"基元个数 {last.rank} 与 N = {ctx.N} 不符",
        {
            "rank": last.rank,
            "expected": ctx.N,
            "cutoff": format_rational(last.cutoff),
            "grades": [
                {"weight": format_rational(g.weight), "dim": g.dim, "image_rank": g.image_rank}
                for g in last.grades
            ],
            "hint": "提高 BASIS_CUTOFF_ESCALATION 或检查非退化性",
        },
    )


def verify_lambda_independence(
    family: ToricFamily,
    lambdas: Sequence[FieldElement],
    weight_cutoff: Optional[Fraction] = None,
) -> Tuple[bool, LambdaIndependenceReport]:
    """对每个 λ 计算基并比较单项式集合"""
    bases = [compute_basis(family, lam, weight_cutoff) for lam in lambdas]
    reference: List[Exponent] = bases[0].monomials if bases else []
    independent = all(b.monomials == reference for b in bases)
    if not independent:
        logger.warning(f"不同 λ 上的基不一致: {[b.monomials for b in bases]}")
    report = LambdaIndependenceReport(
        independent=independent,
        reference=[list(v) for v in reference],
        bases=[b.to_schema() for b in bases],
    )
    return independent, report

