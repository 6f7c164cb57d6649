"""几何报告模式"""
from typing import List, Optional

from pydantic import BaseModel, Field


class FacetModel(BaseModel):
    """Cone(f) 的刻面 φ^(τ) ≥ 0"""
    tau_id: str
    form: List[int] = Field(..., description="φ^(τ) 的整数系数")
    tau: List[List[int]] = Field(..., description="τ 上的支撑点")
    phi_mu: int = Field(..., description="φ^(τ)(μ)")
    visible: bool = Field(..., description="τ ∈ Γ₁")


class ChamberModel(BaseModel):
    """胞腔及其上的线性公式"""
    kind: str = Field(..., description="cone_f 或 tau_mu")
    tau_id: Optional[str] = None
    inequalities: List[List[int]]
    weight_form: List[str] = Field(..., description="w 在胞腔上的线性形式")
    m_form: List[str] = Field(..., description="m 在胞腔上的线性形式")


class UpsilonReport(BaseModel):
    """低阶形变的相对多面体 Υ"""
    t_dim: int
    deformation_exponent: int
    vertices: List[List[str]]
    span_dim: int
    normalized_volume: str
    deformed_denominator: int = Field(..., description="lcm |φ(μ)|/gcd(|φ(μ)|, M)")
    term_weights: List[str] = Field(..., description="每个低阶项的 W_G(r; u)")


class GeometryReport(BaseModel):
    """Δ∞(f, μ) 的完整几何数据"""
    n: int
    support: List[List[int]]
    mu: List[int]
    case: str = Field(..., description="below 或 above")
    lsigma: List[str] = Field(..., description="l_σ 的系数")
    lsigma_mu: str
    s: str = Field(..., description="|1 − l_σ(μ)|")
    facets: List[FacetModel]
    gamma1: List[str] = Field(..., description="可见面的 τ 编号")
    chambers: List[ChamberModel]
    vertices: List[List[int]]
    D: int
    d: int
    e: int
    N: int = Field(..., description="n!·Vol(Δ∞(f, μ))")
    upsilon: Optional[UpsilonReport] = None
