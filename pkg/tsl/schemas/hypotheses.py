"""假设检查报告模式"""
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class VerdictStatus(str, Enum):
    """单项假设的判定"""
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


class Verdict(BaseModel):
    """单项假设 H(i)…H(v) 的判定结果"""
    status: VerdictStatus
    message: str = ""
    witness: Optional[Dict[str, Any]] = Field(None, description="失败时的见证")
    depth: Optional[int] = Field(None, description="有界搜索达到的深度")
    details: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def passed(cls, message: str = "", **details: Any) -> "Verdict":
        return cls(status=VerdictStatus.PASS, message=message, details=details)

    @classmethod
    def failed(cls, message: str, witness: Optional[Dict[str, Any]] = None) -> "Verdict":
        return cls(status=VerdictStatus.FAIL, message=message, witness=witness)

    @classmethod
    def inconclusive(cls, message: str, depth: int = 0) -> "Verdict":
        return cls(status=VerdictStatus.INCONCLUSIVE, message=message, depth=depth)


class NondegStatus(str, Enum):
    """非退化性搜索的结论"""
    NONDEGENERATE_UP_TO = "nondegenerate_up_to"
    DEGENERATE_AT = "degenerate_at"
    INCONCLUSIVE = "inconclusive"


class NondegVerdict(BaseModel):
    """有界穷举的非退化性结论

    NONDEGENERATE_UP_TO 只说明在已搜索的扩张中没有公共零点。
    """
    status: NondegStatus
    searched_degrees: List[int] = Field(default_factory=list, description="已穷举的扩张次数（相对于底域）")
    face: Optional[List[List[int]]] = Field(None, description="退化的面")
    point: Optional[List[List[int]]] = Field(None, description="公共零点各坐标的系数向量")
    field: Optional[Dict[str, Any]] = Field(None, description="见证点所在的域")

    @property
    def depth(self) -> int:
        return max(self.searched_degrees, default=0)


class HypothesisReport(BaseModel):
    """H(i)–H(v) 的检查报告"""
    p: int
    case: Optional[str] = Field(None, description="below 或 above")
    h1: Verdict = Field(..., description="Δ∞(f) 满维")
    h2: Verdict = Field(..., description="f 拟齐次")
    h3: Verdict = Field(..., description="f 关于 Δ∞(f) 非退化")
    h4: Verdict = Field(..., description="μ 的位置")
    h5: Verdict = Field(..., description="p 不整除 φ(μ)")

    def verdicts(self) -> Dict[str, Verdict]:
        return {"h1": self.h1, "h2": self.h2, "h3": self.h3, "h4": self.h4, "h5": self.h5}

    @property
    def any_failed(self) -> bool:
        return any(v.status == VerdictStatus.FAIL for v in self.verdicts().values())

    @property
    def structural_ok(self) -> bool:
        """除有界搜索 H(iii) 外全部通过"""
        return all(
            v.status == VerdictStatus.PASS for k, v in self.verdicts().items() if k != "h3"
        )
