"""整体 L 函数的次数界与斜率下界

只报告这些数值，截断级数无法判定有理性，也就无法验证它们。
"""
import logging
from fractions import Fraction

from tsl.core.geometry.context import GeometryContext
from tsl.core.lfunctions.operations import OpSpec
from tsl.schemas.lfunction import DegreeBoundReport
from tsl.utils.rational import format_rational

logger = logging.getLogger(__name__)


def degree_bound_report(ctx: GeometryContext, op: OpSpec) -> DegreeBoundReport:
    """D/|1 − l_σ(μ)|、两种定义域上的总次数界与 ord_q 下界

    Args:
        ctx: 已构建的几何上下文
        op: 线性代数运算 ℒ

    Returns:
        DegreeBoundReport: 全部以 "num/den" 文本给出
    """
    ratio = Fraction(ctx.D) / ctx.s
    dim = op.dimension(ctx.N)
    scale = dim * ratio * 2 ** (1 + 2 * ctx.n * op.order)
    total_gm = scale * 5
    total_a1 = scale * 6
    if ratio < 1:
        logger.info(f"D/|1 − l_σ(μ)| = {ratio} < 1，定理给出 R = S")
    return DegreeBoundReport(
        op=str(op),
        op_order=op.order,
        op_dimension=dim,
        D=ctx.D,
        s=format_rational(ctx.s),
        ratio=format_rational(ratio),
        forces_equal_degrees=ratio < 1,
        total_degree_gm=format_rational(total_gm),
        total_degree_a1=format_rational(total_a1),
        ord_q_lower_bound_a1=format_rational(ratio),
    )
