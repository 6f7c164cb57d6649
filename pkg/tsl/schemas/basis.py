"""单项式基报告模式"""
from typing import Any, Dict, List

from pydantic import BaseModel, Field


class BasisMonomial(BaseModel):
    """基元 Λ^{m(v)}x^v"""
    v: List[int]
    weight: str = Field(..., description="w(v)，num/den")
    m: str = Field(..., description="m(v)，num/den")


class GradeSummary(BaseModel):
    """第 i 个分次块：dim = image_rank + basis_count"""
    weight: str
    dim: int
    image_rank: int
    basis_count: int


class BasisReport(BaseModel):
    """某个纤维 λ 上的单项式基"""
    field: Dict[str, Any]
    lambda_value: List[int] = Field(..., description="λ 的系数向量")
    rank: int
    expected_rank: int = Field(..., description="N = n!·Vol(Δ∞(f, μ))")
    cutoff: str = Field(..., description="实际使用的权重截断")
    order: str = "weight_then_lex"
    elements: List[BasisMonomial]
    grades: List[GradeSummary]

    def monomials(self) -> List[List[int]]:
        return [e.v for e in self.elements]


class LambdaIndependenceReport(BaseModel):
    """不同 λ 上的基是否相同"""
    independent: bool
    reference: List[List[int]] = Field(default_factory=list)
    bases: List[BasisReport] = Field(default_factory=list)
