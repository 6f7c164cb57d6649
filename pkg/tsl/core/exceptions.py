"""异常层次

所有库异常都继承 TslError，并携带命令行使用的 ErrorCode。
"""
from typing import Any, Dict, Optional

from tsl.schemas.error import ErrorCode, ErrorResponse


class TslError(Exception):
    """库异常基类"""

    code: ErrorCode = ErrorCode.GENERAL_ERROR

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_response(self) -> ErrorResponse:
        return ErrorResponse(
            code=int(self.code),
            error=type(self).__name__,
            message=self.message,
            details=self.details or None,
        )


class ParseError(TslError, ValueError):
    """问题文件无法解析"""


class NotPrimeError(TslError, ValueError):
    """特征不是素数"""


class ReducibleModulusError(TslError, ValueError):
    """给定的模多项式可约或不是首一的 m 次多项式"""


class SizeCeilingExceeded(TslError):
    """枚举规模超过配置上限"""

    code = ErrorCode.RESOURCE_CEILING


class MixedPrimesError(TslError, ValueError):
    """不同素数的分圆数或不同域的元素混用"""


class BadConstantTermError(TslError, ValueError):
    """幂级数常数项不满足要求"""


class ZeroPolynomialError(TslError, ValueError):
    """零多项式没有牛顿多边形"""


class LengthMismatchError(TslError, ValueError):
    """两个牛顿多边形的长度不同"""


class NotFullDimensionalError(TslError, ValueError):
    """Δ∞(f) 不是满维的"""

    code = ErrorCode.HYPOTHESIS_FAILURE


class NotQuasihomogeneousError(TslError, ValueError):
    """f 的支撑不在一个不过原点的仿射超平面上"""

    code = ErrorCode.HYPOTHESIS_FAILURE


class ExcludedCaseError(TslError, ValueError):
    """不处理的情形：l_σ(μ)=1，或 μ 落在 Cone(f) 中的低阶形变"""

    code = ErrorCode.HYPOTHESIS_FAILURE


class MuOnFacetError(ExcludedCaseError):
    """μ 落在某个相关面的超平面 φ=0 上"""


class MuNotInteriorError(ExcludedCaseError):
    """l_σ(μ)>1 但 μ 不是 Cone(f) 的内点"""


class OutsideConeError(TslError, ValueError):
    """格点不在 Cone(f,μ) 中"""


class OutsideMonoidError(TslError, ValueError):
    """(r, v) 不在扩展幺半群中"""


class NotLowerOrderError(TslError, ValueError):
    """形变项的总权重不小于 1"""


class PreconditionFailed(TslError):
    """调用前提不成立（例如假设未通过）"""

    code = ErrorCode.HYPOTHESIS_FAILURE


class TheoremViolation(TslError):
    """找到了与定理矛盾的见证"""

    code = ErrorCode.THEOREM_VIOLATION


class RankMismatchError(TheoremViolation):
    """单项式基底的大小与 N 不一致"""


class PolynomialityFailure(TheoremViolation):
    """指数级数尾部系数不为零"""


class CrossCheckMismatch(TheoremViolation):
    """欧拉积与矩级数的系数不一致"""


class GeometryInconsistency(TslError):
    """不同胞腔公式在公共边界上的取值不一致"""
