"""L 函数报告模式"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from tsl.schemas.hypotheses import NondegVerdict


class CyclotomicModel(BaseModel):
    """ℚ(ζ_p) 的元素，系数为 num/den 文本"""
    p: int
    coeffs: List[str]


class PolygonModel(BaseModel):
    """牛顿多边形：顶点 [x, "num/den"] 与斜率"""
    vertices: List[List[Any]]
    slopes: List[str]


class FiberLReport(BaseModel):
    """单个纤维的 L 多项式与牛顿多边形比较"""
    lambda_point: Dict[str, Any] = Field(..., description="闭点描述；零纤维为 representative=zero")
    degree: int = Field(..., description="L 多项式的次数")
    sums: List[CyclotomicModel] = Field(..., description="S_1 … S_{2N}")
    lpoly: List[CyclotomicModel] = Field(..., description="L^{(−1)^{n+1}} 的系数")
    polygon: PolygonModel
    ord_unit: str
    bound: Optional[PolygonModel] = Field(None, description="由基权重给出的下界")
    dominates: Optional[bool] = None
    basis_weights: List[str] = Field(default_factory=list)
    zero_fiber: bool = False
    nondegeneracy: Optional[NondegVerdict] = Field(None, description="纤维关于 Δ∞(f, μ) 的非退化性搜索")
    determinant: Optional[CyclotomicModel] = Field(None, description="det A，由 ∧^N 的特征多项式读出")
    determinant_ord: Optional[str] = Field(None, description="ord_q det")
    endpoints_agree: Optional[bool] = Field(None, description="ord_q det 是否等于基权重之和")
    conjugates_agree: Optional[bool] = Field(None, description="闭点各共轭上的 S_1 是否相同")


class GlobalLReport(BaseModel):
    """截断的整体 L 函数"""
    op: str
    op_order: int
    op_dimension: int
    domain: str
    d_max: int
    coefficients: List[CyclotomicModel]
    moment_coefficients: List[CyclotomicModel]
    cross_check: bool
    integral: bool
    zeta_check: Optional[bool] = Field(None, description="Sym⁰ 时与定义域的 zeta 函数比较")
    points_by_degree: Dict[str, int]
    zero_fiber_degree: Optional[int] = Field(None, description="仿射情形下 λ = 0 纤维的 L 多项式次数")
    notes: List[str] = Field(default_factory=list)


class DegreeBoundReport(BaseModel):
    """次数界与斜率下界（只报告，不验证）"""
    op: str
    op_order: int
    op_dimension: int
    D: int
    s: str = Field(..., description="|1 − l_σ(μ)|")
    ratio: str = Field(..., description="D/|1 − l_σ(μ)|，也是 R − S 的上界")
    forces_equal_degrees: bool = Field(..., description="ratio < 1 时 R = S")
    total_degree_gm: str
    total_degree_a1: str
    ord_q_lower_bound_a1: str


class FiberBatchReport(BaseModel):
    """fiber 命令的结果：按 (次数, 代表元) 排序的纤维报告"""
    fibers: List[FiberLReport]
    all_dominate: bool = Field(..., description="全部牛顿多边形都在下界之上")
    all_consistent: bool = Field(True, description="ord_q det 与基权重之和一致，且共轭纤维给出相同的和")


class GlobalCommandReport(BaseModel):
    """global 命令的结果"""
    global_l: GlobalLReport
    bounds: DegreeBoundReport
